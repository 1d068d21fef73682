import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .linalg import DomainError

_DYADIC_PATTERN = re.compile(r"^\s*(-?\d+)\s*/\s*2\s*\^\s*(\d+)\s*$")
_RATIONAL_PATTERN = re.compile(r"^\s*(-?\d+)\s*/\s*(\d+)\s*$")

# int64 products of exact numerators and denominators stay below this
_INT64_BOUND = 2**62


def exact_integers(values, bound: int) -> np.ndarray:
    """Integer array for exact phase arithmetic, as Python integers once `bound` no longer fits int64."""
    values = np.asarray(values, dtype=np.int64)
    return values.astype(object) if bound >= _INT64_BOUND else values


@dataclass(frozen=True)
class Phase:
    """An eigenphase in turns, φ ∈ [0, 1).

    When the phase comes from an exact form (a/2^q or p/q) the fraction is kept
    next to the float, and every exactness decision is taken on the fraction.
    """

    value: float
    exact: Optional[Fraction] = None

    def __post_init__(self):
        if self.exact is not None:
            if not 0 <= self.exact < 1:
                raise DomainError(f"phase {self.exact} is outside [0, 1)")
            object.__setattr__(self, "value", float(self.exact))

        if not math.isfinite(self.value) or not 0.0 <= self.value < 1.0:
            raise DomainError(f"phase {self.value} is outside [0, 1)")

    @staticmethod
    def dyadic(a: int, q: int) -> "Phase":
        return Phase(0.0, Fraction(a, 2**q))

    @staticmethod
    def rational(p: int, q: int) -> "Phase":
        if q <= 0:
            raise DomainError(f"denominator must be positive, got {q}")
        return Phase(0.0, Fraction(p, q))

    @staticmethod
    def decimal(x: float) -> "Phase":
        return Phase(float(x))

    @staticmethod
    def parse(text: str) -> "Phase":
        match = _DYADIC_PATTERN.match(text)
        if match:
            return Phase.dyadic(int(match.group(1)), int(match.group(2)))

        match = _RATIONAL_PATTERN.match(text)
        if match:
            return Phase.rational(int(match.group(1)), int(match.group(2)))

        try:
            return Phase.decimal(float(text))
        except ValueError:
            raise DomainError(f"cannot read a phase from {text!r}")

    @staticmethod
    def coerce(phi: Union["Phase", Fraction, float, int]) -> "Phase":
        if isinstance(phi, Phase):
            return phi
        if isinstance(phi, Fraction):
            return Phase(0.0, phi)
        return Phase(float(phi))

    @property
    def is_dyadic(self) -> bool:
        if self.exact is None:
            return False
        denominator = self.exact.denominator
        return denominator & (denominator - 1) == 0

    @property
    def numerator(self) -> Optional[int]:
        return self.exact.numerator if self.is_dyadic else None

    @property
    def exponent(self) -> Optional[int]:
        return self.exact.denominator.bit_length() - 1 if self.is_dyadic else None

    def scaled(self, t: int) -> Union[Fraction, float]:
        """2^t·φ; exact for fractions and, being a power-of-two scaling, for floats too."""
        if self.exact is not None:
            return self.exact * 2**t
        return self.value * 2**t

    def is_exact_in(self, t: int) -> bool:
        scaled = self.scaled(t)
        if isinstance(scaled, Fraction):
            return scaled.denominator == 1
        return float(scaled).is_integer()

    def turns(self, multipliers) -> np.ndarray:
        """(k·φ) mod 1 for every k, in integers when the phase is exact."""
        ks = np.asarray(multipliers, dtype=np.int64)
        if self.exact is not None:
            numerator, denominator = self.exact.numerator, self.exact.denominator
            ks = exact_integers(ks, denominator * (int(np.max(np.abs(ks), initial=0)) + 1))
            return (np.mod(ks * numerator, denominator) / denominator).astype(float)
        return np.mod(self.value * ks, 1.0)

    def phase_factors(self, multipliers) -> np.ndarray:
        return np.exp(2j * np.pi * self.turns(multipliers))

    def label(self) -> str:
        if self.exact is not None:
            return str(self.exact)
        return repr(self.value)

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return self.label()


PhaseLike = Union[Phase, Fraction, float, int]
