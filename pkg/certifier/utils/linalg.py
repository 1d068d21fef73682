from dataclasses import dataclass
from functools import reduce
from typing import Union

import numpy as np

# Total qubits any register may span.
MAX_QUBITS = 14

UNITARITY_TOL = 1e-10
NORMALIZATION_TOL = 1e-10

ComplexScalar = complex


class DomainError(ValueError):
    pass


class ResourceError(Exception):
    pass


def ensure_within_cap(qubits: int, cap: int = MAX_QUBITS) -> None:
    if qubits > cap:
        raise ResourceError(f"{qubits} qubits requested, the register cap is {cap}")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over a register, frozen after construction."""

    amplitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)

        if amplitudes.size == 0:
            raise DomainError("a state needs at least one amplitude")

        if not np.all(np.isfinite(amplitudes)):
            raise DomainError("state holds a non-finite amplitude")

        if self.normalized:
            deviation = abs(float(np.vdot(amplitudes, amplitudes).real) - 1.0)
            if deviation >= NORMALIZATION_TOL:
                raise DomainError(f"state flagged normalized is off by {deviation:.3e}")

        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, index):
        return self.amplitudes[index]

    def max_deviation(self, other: "StateVector") -> float:
        _ensure_same_dim(self.dim, other.dim)
        return float(np.max(np.abs(self.amplitudes - other.amplitudes)))


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    entries: np.ndarray
    tol: float = UNITARITY_TOL

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)

        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DomainError(f"a unitary must be square, got shape {entries.shape}")

        if not np.all(np.isfinite(entries)):
            raise DomainError("matrix holds a non-finite entry")

        if not check_unitary(entries, self.tol):
            raise DomainError(f"matrix is not unitary within {self.tol:g}")

        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @staticmethod
    def identity(dim: int) -> "UnitaryMatrix":
        return UnitaryMatrix(np.eye(dim, dtype=complex))

    def __matmul__(self, other: "UnitaryMatrix") -> "UnitaryMatrix":
        _ensure_same_dim(self.dim, other.dim)
        return UnitaryMatrix(self.entries @ other.entries)


@dataclass(frozen=True)
class NumberKet:
    value: int
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise DomainError(f"register width must be positive, got {self.width}")

        if not 0 <= self.value < 2**self.width:
            raise DomainError(f"{self.value} does not fit in {self.width} qubits")

    def to_state(self) -> StateVector:
        amplitudes = np.zeros(2**self.width, dtype=complex)
        amplitudes[self.value] = 1.0
        return StateVector(amplitudes, normalized=True)


def _ensure_same_dim(a: int, b: int) -> None:
    if a != b:
        raise DomainError(f"dimension mismatch: {a} against {b}")


def number_ket(k: int, t: int) -> StateVector:
    # index k is read big-endian: the first register line is the most significant bit
    return NumberKet(k, t).to_state()


def tensor_vec(a: StateVector, b: StateVector) -> StateVector:
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def tensor_all(states) -> StateVector:
    return reduce(tensor_vec, states)


def tensor_mat(A: UnitaryMatrix, B: UnitaryMatrix) -> UnitaryMatrix:
    return UnitaryMatrix(np.kron(A.entries, B.entries))


def apply(U: UnitaryMatrix, v: StateVector) -> StateVector:
    _ensure_same_dim(U.dim, v.dim)
    return StateVector(U.entries @ v.amplitudes)


def inner_product(a: StateVector, b: StateVector) -> ComplexScalar:
    _ensure_same_dim(a.dim, b.dim)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def unitarity_deviation(M: Union[UnitaryMatrix, np.ndarray]) -> float:
    """max |M†M − I| over all entries."""
    entries = M.entries if isinstance(M, UnitaryMatrix) else np.asarray(M, dtype=complex)

    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise DomainError(f"unitarity is only defined for square matrices, got {entries.shape}")

    gram = entries.conj().T @ entries
    return float(np.max(np.abs(gram - np.eye(entries.shape[0]))))


def check_unitary(M: Union[UnitaryMatrix, np.ndarray], tol: float = UNITARITY_TOL) -> bool:
    return unitarity_deviation(M) <= tol
