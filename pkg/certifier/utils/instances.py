import enum
import logging
from fractions import Fraction
from math import gcd
from typing import List

import numpy as np
import scipy.linalg

from .circuit import QpeInstance
from .linalg import DomainError, StateVector, UnitaryMatrix, number_ket
from .phase import Phase, PhaseLike

logger = logging.getLogger(__name__)

NONDYADIC_DENOMINATORS = (3, 5, 7, 9, 10, 11, 12, 13)
RANDOM_DRAW_ATTEMPTS = 3
RANK_TOL = 1e-12


class InstanceError(Exception):
    pass


class PhaseKind(enum.Enum):
    DYADIC = "dyadic"
    NONDYADIC = "nondyadic"
    MIXED = "mixed"

    @staticmethod
    def from_label(label: str) -> "PhaseKind":
        for kind in PhaseKind:
            if kind.value == label:
                return kind
        raise ValueError(f"unknown phase kind {label!r}")


def _eigenphases(phi: Phase, s: int) -> List[Phase]:
    # φ first, then the fillers (φ + j/2^s) mod 1
    if phi.exact is not None:
        return [Phase(0.0, (phi.exact + Fraction(j, 2**s)) % 1) for j in range(2**s)]
    return [Phase(float(np.mod(phi.value + j / 2**s, 1.0))) for j in range(2**s)]


def diagonal_instance(s: int, phi: PhaseLike, t: int = 1) -> QpeInstance:
    phase = Phase.coerce(phi)
    eigenvalues = np.concatenate([p.phase_factors([1]) for p in _eigenphases(phase, s)])
    return QpeInstance(
        t=t,
        s=s,
        U=UnitaryMatrix(np.diag(eigenvalues)),
        u=number_ket(0, s),
        phase=phase,
    )


def _haar_basis(rng: np.random.Generator, dim: int) -> np.ndarray:
    for attempt in range(1, RANDOM_DRAW_ATTEMPTS + 1):
        draw = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
        q, r = scipy.linalg.qr(draw)
        d = np.diag(r)

        if np.min(np.abs(d)) < RANK_TOL:
            logger.debug("degenerate draw on attempt %d, drawing again", attempt)
            continue

        return q * (d / np.abs(d))

    raise InstanceError(f"no full-rank draw in {RANDOM_DRAW_ATTEMPTS} attempts")


def random_instance(s: int, phi: PhaseLike, seed: int, t: int = 1) -> QpeInstance:
    phase = Phase.coerce(phi)
    rng = np.random.default_rng(seed)
    dim = 2**s

    basis = _haar_basis(rng, dim)
    fillers = rng.random(dim - 1)
    eigenvalues = np.exp(2j * np.pi * np.concatenate([[phase.value], fillers]))
    unitary = basis @ np.diag(eigenvalues) @ basis.conj().T

    return QpeInstance(
        t=t,
        s=s,
        U=UnitaryMatrix(unitary),
        u=StateVector(basis[:, 0]),
        phase=phase,
    )


def nondyadic_phases(t: int) -> List[Phase]:
    candidates = [
        Phase.rational(p, q)
        for q in NONDYADIC_DENOMINATORS
        for p in range(1, q)
        if gcd(p, q) == 1
    ]
    # the round-half points, where the best outcome is least likely
    candidates += [Phase.rational(1, 2 ** (t + 1)), Phase.rational(2 ** (t + 1) - 1, 2 ** (t + 1))]
    return [phase for phase in candidates if not phase.is_exact_in(t)]


def phase_grid(t: int, kind: PhaseKind) -> List[Phase]:
    if t < 1:
        raise DomainError(f"t must be positive, got {t}")

    match kind:
        case PhaseKind.DYADIC:
            return [Phase.dyadic(k, t) for k in range(2**t)]
        case PhaseKind.NONDYADIC:
            return nondyadic_phases(t)
        case PhaseKind.MIXED:
            return phase_grid(t, PhaseKind.DYADIC) + nondyadic_phases(t)
