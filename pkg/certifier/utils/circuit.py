import logging
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable

import numpy as np
import scipy.linalg

from .linalg import (
    MAX_QUBITS,
    DomainError,
    StateVector,
    UnitaryMatrix,
    ensure_within_cap,
    tensor_mat,
    tensor_vec,
)
from .phase import Phase

logger = logging.getLogger(__name__)

ENTANGLEMENT_TOL = 1e-8
EIGEN_TOL = 1e-9
DISTRIBUTION_TOL = 1e-9


class EntanglementError(Exception):
    def __init__(self, residual: float, *args: object) -> None:
        super().__init__(f"second register left |u> by {residual:.3e}", *args)
        self.residual = residual


@dataclass(frozen=True, eq=False)
class QpeInstance:
    t: int
    s: int
    U: UnitaryMatrix
    u: StateVector
    phase: Phase
    eigen_tol: float = EIGEN_TOL

    def __post_init__(self):
        if self.t < 1 or self.s < 1:
            raise DomainError(f"registers need at least one qubit, got t={self.t}, s={self.s}")

        ensure_within_cap(self.t + self.s)
        object.__setattr__(self, "phase", Phase.coerce(self.phase))

        if self.U.dim != 2**self.s or self.u.dim != 2**self.s:
            raise DomainError(f"U and |u> must act on {2**self.s} dimensions")

        if abs(self.u.norm - 1.0) > 1e-10:
            raise DomainError(f"|u> is not normalized (norm {self.u.norm})")

        residual = self.eigen_residual()
        if residual >= self.eigen_tol:
            raise DomainError(f"|u> is not an eigenvector of U with phase {self.phase} ({residual:.3e})")

    def eigen_residual(self) -> float:
        eigenvalue = np.exp(2j * np.pi * self.phase.value)
        return float(np.linalg.norm(self.U.entries @ self.u.amplitudes - eigenvalue * self.u.amplitudes))


@dataclass(frozen=True, eq=False)
class MeasurementDistribution:
    t: int
    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float).reshape(-1)

        if probs.size != 2**self.t:
            raise DomainError(f"expected {2**self.t} outcomes, got {probs.size}")

        if np.any(probs < -1e-12) or np.any(probs > 1 + 1e-12):
            raise DomainError("outcome probability outside [0, 1]")

        probs = np.clip(probs, 0.0, 1.0)
        total = math.fsum(probs)
        if abs(total - 1.0) > DISTRIBUTION_TOL:
            raise DomainError(f"outcome probabilities sum to {total!r}")

        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, m: int) -> float:
        return float(self.probs[m])

    def event_probability(self, outcomes: Iterable[int]) -> float:
        """Probability that the measured integer falls in a set of distinct outcomes."""
        selected = sorted(set(int(m) for m in outcomes))
        if any(not 0 <= m < self.probs.size for m in selected):
            raise DomainError(f"outcomes must lie in 0..{self.probs.size - 1}")
        return math.fsum(self.probs[selected])

    def most_likely(self) -> int:
        return int(np.argmax(self.probs))


def plus_register(t: int, cap: int = MAX_QUBITS) -> StateVector:
    ensure_within_cap(t, cap)
    return StateVector(np.full(2**t, 2.0 ** (-t / 2), dtype=complex), normalized=True)


@lru_cache(maxsize=None)
def inv_qft(n: int) -> UnitaryMatrix:
    ensure_within_cap(n)
    if n < 1:
        raise DomainError(f"inverse QFT needs at least one qubit, got {n}")
    # entry (l, k) is 2^{-n/2} e^{-2πikl/2^n}
    return UnitaryMatrix(scipy.linalg.dft(2**n, scale="sqrtn"))


def power_of_two(U: UnitaryMatrix, j: int) -> np.ndarray:
    """U^(2^j) by j squarings."""
    if j < 0:
        raise DomainError(f"power index must be nonnegative, got {j}")
    power = U.entries
    for _ in range(j):
        power = power @ power
    return power


def controlled_power(U: UnitaryMatrix, j: int) -> UnitaryMatrix:
    identity = np.eye(U.dim, dtype=complex)
    return UnitaryMatrix(scipy.linalg.block_diag(identity, power_of_two(U, j)))


def _padded_controlled_power(power: np.ndarray, j: int, t: int) -> np.ndarray:
    # line j of the first register carries bit weight 2^j
    identity = np.eye(power.shape[0], dtype=complex)
    blocks = [power if (k >> j) & 1 else identity for k in range(2**t)]
    return scipy.linalg.block_diag(*blocks)


def build_qpe1(U: UnitaryMatrix, t: int) -> UnitaryMatrix:
    s = U.dim.bit_length() - 1
    ensure_within_cap(t + s)

    powers = [U.entries]
    for _ in range(1, t):
        powers.append(powers[-1] @ powers[-1])

    gates = [_padded_controlled_power(powers[j], j, t) for j in range(t - 1, -1, -1)]
    logger.debug("composing %d controlled powers on %d qubits", t, t + s)
    return UnitaryMatrix(reduce(np.matmul, gates))


def build_qpe(U: UnitaryMatrix, t: int) -> UnitaryMatrix:
    return tensor_mat(inv_qft(t), UnitaryMatrix.identity(U.dim)) @ build_qpe1(U, t)


def apply_qpe1(U: UnitaryMatrix, t: int, state: StateVector) -> StateVector:
    """QPE1 applied line by line to a (2^t, 2^s) view of the register."""
    s = U.dim.bit_length() - 1
    ensure_within_cap(t + s)
    if state.dim != 2**t * U.dim:
        raise DomainError(f"state of dimension {state.dim} does not fit t={t}, s={s}")

    register = np.array(state.amplitudes).reshape(2**t, U.dim)
    ks = np.arange(2**t)
    power = U.entries
    for j in range(t):
        rows = (ks >> j) & 1 == 1
        register[rows] = register[rows] @ power.T
        power = power @ power

    return StateVector(register.reshape(-1))


def apply_qpe(U: UnitaryMatrix, t: int, state: StateVector) -> StateVector:
    register = apply_qpe1(U, t, state).amplitudes.reshape(2**t, U.dim)
    return StateVector((inv_qft(t).entries @ register).reshape(-1))


def input_state(inst: QpeInstance) -> StateVector:
    return tensor_vec(plus_register(inst.t), inst.u)


def factor_first_register(state: StateVector, u: StateVector, tol: float = ENTANGLEMENT_TOL) -> StateVector:
    """Projects the second register onto |u> and returns the first-register factor."""
    register = state.amplitudes.reshape(-1, u.dim)
    factor = register @ u.amplitudes.conj()
    residual = float(np.linalg.norm(register - np.outer(factor, u.amplitudes)))
    if residual > tol:
        raise EntanglementError(residual)
    return StateVector(factor)


def second_register_overlap(state: StateVector, u: StateVector) -> float:
    register = state.amplitudes.reshape(-1, u.dim)
    return float(np.linalg.norm(register @ u.amplitudes.conj()))


def final_state(inst: QpeInstance) -> StateVector:
    return apply_qpe(inst.U, inst.t, input_state(inst))


def stage2_state(inst: QpeInstance, tol: float = ENTANGLEMENT_TOL) -> StateVector:
    after = apply_qpe1(inst.U, inst.t, input_state(inst))
    return factor_first_register(after, inst.u, tol)


def output_distribution(inst: QpeInstance) -> MeasurementDistribution:
    psi = stage2_state(inst)
    big_psi = inv_qft(inst.t).entries @ psi.amplitudes
    return MeasurementDistribution(inst.t, np.abs(big_psi) ** 2)
