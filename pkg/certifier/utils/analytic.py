import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from .circuit import MeasurementDistribution, inv_qft
from .linalg import DomainError, StateVector, apply, ensure_within_cap, tensor_all
from .phase import Phase, PhaseLike, exact_integers

FOUR_OVER_PI_SQUARED = 4 / np.pi**2
SINGULARITY_TOL = 1e-14

IntegerLike = Union[int, np.ndarray]
ExactReal = Union[Fraction, float]


class SingularityError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ErrorTolerance:
    e: int

    def __post_init__(self):
        if self.e < 1:
            raise DomainError(f"error tolerance must be a positive integer, got {self.e}")

    @staticmethod
    def domain(t: int) -> range:
        return range(1, 2 ** (t - 1) - 1)

    def check_domain(self, t: int) -> None:
        if self.e not in ErrorTolerance.domain(t):
            raise DomainError(f"e={self.e} is outside 1..{2 ** (t - 1) - 2} for t={t}")


@dataclass(frozen=True)
class PrecisionSpec:
    n: int
    epsilon: float

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"precision needs at least one bit, got n={self.n}")
        if not 0 < self.epsilon <= 1:
            raise DomainError(f"epsilon must lie in (0, 1], got {self.epsilon}")


def mod_add(a: int, b: int, t: int) -> int:
    if t < 1:
        raise DomainError(f"t must be positive, got {t}")
    return (a + b) % 2**t


def mod_abs(x, N):
    """Distance from x to the nearest multiple of N; scalars keep their type."""
    if N <= 0:
        raise DomainError(f"modulus must be positive, got {N}")
    if isinstance(x, np.ndarray):
        r = np.mod(x, N)
        return np.minimum(r, N - r)
    r = x % N
    return min(r, N - r)


def best_floor(phi: PhaseLike, t: int) -> int:
    return math.floor(Phase.coerce(phi).scaled(t))


def best_round(phi: PhaseLike, t: int) -> int:
    # half-up, never banker's rounding
    return math.floor(Phase.coerce(phi).scaled(t) + Fraction(1, 2))


def delta_b(phi: PhaseLike, t: int, b: int) -> float:
    phase = Phase.coerce(phi)
    if phase.exact is not None:
        return float(phase.exact - Fraction(b, 2**t))
    return phase.value - b / 2**t


@dataclass(frozen=True)
class PhaseGeometry:
    """The best outcomes for a phase and register width, with their offsets.

    The scaled offsets 2^t·δ are kept exact whenever the phase is, so the
    δ = 0 split never depends on a tolerance.
    """

    t: int
    phi: Phase
    b_f: int
    b_r: int
    delta_bf: float
    delta_br: float
    scaled_delta_bf: ExactReal
    scaled_delta_br: ExactReal

    @staticmethod
    def of(phi: PhaseLike, t: int) -> "PhaseGeometry":
        phase = Phase.coerce(phi)
        scaled = phase.scaled(t)
        b_f = best_floor(phase, t)
        b_r = best_round(phase, t)
        return PhaseGeometry(
            t=t,
            phi=phase,
            b_f=b_f,
            b_r=b_r,
            delta_bf=delta_b(phase, t, b_f),
            delta_br=delta_b(phase, t, b_r),
            scaled_delta_bf=scaled - b_f,
            scaled_delta_br=scaled - b_r,
        )

    @property
    def delta_bf_is_zero(self) -> bool:
        return self.scaled_delta_bf == 0

    @property
    def best_outcome(self) -> int:
        return mod_add(self.b_r, 0, self.t)

    def ell_domain(self) -> np.ndarray:
        """ℓ ∈ {−2^{t−1}+1, …, 2^{t−1}} without 0."""
        half = 2 ** (self.t - 1)
        ells = np.arange(-half + 1, half + 1)
        return ells[ells != 0]


def _check_register(t: int) -> None:
    if t < 1:
        raise DomainError(f"t must be positive, got {t}")
    ensure_within_cap(t)


def kickback_qubit(phi: PhaseLike, j: int) -> StateVector:
    """(|0> + e^{2πi 2^j φ}|1>)/√2, the state a control line picks up."""
    factor = Phase.coerce(phi).phase_factors([2**j])[0]
    return StateVector(np.array([1.0, factor]) / np.sqrt(2))


def psi_t_tensor(phi: PhaseLike, t: int) -> StateVector:
    _check_register(t)
    lines = [kickback_qubit(phi, j) for j in range(t - 1, -1, -1)]
    return StateVector(tensor_all(lines).amplitudes, normalized=True)


def psi_t_sum(phi: PhaseLike, t: int) -> StateVector:
    _check_register(t)
    ks = np.arange(2**t)
    return StateVector(Phase.coerce(phi).phase_factors(ks) / 2 ** (t / 2), normalized=True)


def phased_ket_sum(phi: PhaseLike, width: int, ks, shift: int = 0) -> StateVector:
    """Σ_{k in ks} e^{2πiφ(k+shift)} |k+shift>_width, unnormalized."""
    indices = np.asarray(ks, dtype=np.int64) + shift
    if np.any(indices < 0) or np.any(indices >= 2**width):
        raise DomainError(f"kets out of range for a {width}-qubit register")
    amplitudes = np.zeros(2**width, dtype=complex)
    np.add.at(amplitudes, indices, Phase.coerce(phi).phase_factors(indices))
    return StateVector(amplitudes)


def big_psi(phi: PhaseLike, t: int) -> StateVector:
    return StateVector(apply(inv_qft(t), psi_t_sum(phi, t)).amplitudes, normalized=True)


def _as_outcomes(m: IntegerLike) -> np.ndarray:
    return np.atleast_1d(np.asarray(m, dtype=np.int64))


def _unwrap(values: np.ndarray, m: IntegerLike):
    return values if np.ndim(m) else complex(values[0])


def alpha_m_mod_eval(phi: PhaseLike, t: int, m: IntegerLike):
    """(1/2^t) Σ_k e^{−2πikm/2^t} e^{2πiφk}, any integer m."""
    _check_register(t)
    ms = _as_outcomes(m)
    ks = np.arange(2**t, dtype=np.int64)
    fourier = np.exp(-2j * np.pi * np.mod(np.outer(ms, ks), 2**t) / 2**t)
    values = fourier @ Phase.coerce(phi).phase_factors(ks) / 2**t
    return _unwrap(values, m)


def alpha_m_eval(phi: PhaseLike, t: int, m: IntegerLike):
    ms = _as_outcomes(m)
    if np.any(ms < 0) or np.any(ms >= 2**t):
        raise DomainError(f"outcome outside 0..{2**t - 1}")
    return alpha_m_mod_eval(phi, t, m)


def alpha_geom(phi: PhaseLike, t: int, m: IntegerLike):
    """(1/2^t) Σ_k r^k with r = e^{2πi(φ − m/2^t)}."""
    _check_register(t)
    phase = Phase.coerce(phi)
    ms = _as_outcomes(m)
    ks = np.arange(2**t)
    if phase.exact is not None:
        p, q = phase.exact.numerator, phase.exact.denominator
        exact_ms = exact_integers(ms, q * (2**t + int(np.max(np.abs(ms), initial=0)) + 1))
        turns = (np.mod(p * 2**t - exact_ms * q, q * 2**t) / (q * 2**t)).astype(float)
        ratios = np.exp(2j * np.pi * turns)
    else:
        ratios = np.exp(2j * np.pi * np.mod(phase.value - ms / 2**t, 1.0))
    values = np.power(ratios[:, None], ks[None, :]).sum(axis=1) / 2**t
    return _unwrap(values, m)


def alpha_closed(phi: PhaseLike, t: int, ell: IntegerLike):
    """α at outcome b_f ⊕ ℓ from the closed geometric-sum form."""
    geometry = PhaseGeometry.of(phi, t)
    ells = _as_outcomes(ell)
    half = 2 ** (t - 1)
    if np.any(ells == 0) or np.any(ells <= -half) or np.any(ells > half):
        raise DomainError(f"ℓ must be nonzero in {-half + 1}..{half}")

    if geometry.delta_bf_is_zero:
        return _unwrap(np.zeros(ells.size, dtype=complex), ell)

    scaled = float(geometry.scaled_delta_bf)
    numerator = 1 - np.exp(2j * np.pi * (scaled - ells))
    denominator = 1 - np.exp(2j * np.pi * (scaled - ells) / 2**t)
    if np.any(np.abs(denominator) < SINGULARITY_TOL):
        raise SingularityError(f"denominator vanishes for φ={geometry.phi}, t={t}")
    return _unwrap(numerator / denominator / 2**t, ell)


def alpha_sqrd_bound(t: int, delta_bf: ExactReal, ell: int) -> float:
    half = 2 ** (t - 1)
    if ell == 0 or not -half < ell <= half:
        raise DomainError(f"ℓ must be nonzero in {-half + 1}..{half}, got {ell}")
    gap = ell - delta_bf * 2**t
    if gap == 0:
        raise SingularityError(f"ℓ={ell} coincides with 2^t·δ")
    return float(1 / (4 * Fraction(gap) ** 2)) if isinstance(gap, Fraction) else 1 / (4 * gap**2)


@lru_cache(maxsize=8192)
def geometric_weights(phi: Phase, t: int) -> np.ndarray:
    """|α_m|² for every outcome m, from the geometric sum."""
    weights = np.abs(alpha_geom(phi, t, np.arange(2**t))) ** 2
    weights.setflags(write=False)
    return weights


def analytic_distribution(phi: PhaseLike, t: int) -> MeasurementDistribution:
    return MeasurementDistribution(t, geometric_weights(Phase.coerce(phi), t))


class FailMode(enum.Enum):
    DEFINITION = "definition"
    SUM = "sum"


def _far_outcomes(t: int, b_f: int, e: int) -> np.ndarray:
    ms = np.arange(2**t)
    return mod_abs(ms - b_f, 2**t) > e


def fail_ell_range(t: int, e: int) -> np.ndarray:
    half = 2 ** (t - 1)
    return np.concatenate([np.arange(-half + 1, -e), np.arange(e + 1, half + 1)])


def fail_prob(
    dist: MeasurementDistribution,
    phi: PhaseLike,
    e: int,
    mode: FailMode = FailMode.DEFINITION,
) -> float:
    t = dist.t
    ErrorTolerance(e).check_domain(t)
    phase = Phase.coerce(phi)
    b_f = best_floor(phase, t)

    match mode:
        case FailMode.DEFINITION:
            value = math.fsum(dist.probs[_far_outcomes(t, b_f, e)])
        case FailMode.SUM:
            outcomes = np.mod(b_f + fail_ell_range(t, e), 2**t)
            value = math.fsum(geometric_weights(phase, t)[outcomes])

    return min(max(value, 0.0), 1.0)


def success_prob(dist: MeasurementDistribution, phi: PhaseLike, e: int) -> float:
    t = dist.t
    ErrorTolerance(e).check_domain(t)
    b_f = best_floor(phi, t)
    return math.fsum(dist.probs[~_far_outcomes(t, b_f, e)])


def within_precision_radius(phi: PhaseLike, t: int, m: IntegerLike, n: int):
    """|m/2^t − φ|_mod 1 ≤ 2^{−n}; integer arithmetic for exact phases."""
    phase = Phase.coerce(phi)
    ms = _as_outcomes(m)
    if phase.exact is not None:
        p, q = phase.exact.numerator, phase.exact.denominator
        # scaled by 2^t·q·2^n so every quantity is an integer
        exact_ms = exact_integers(ms, q * (2**t + int(np.max(np.abs(ms), initial=0)) + 1) * 2**n)
        distance = mod_abs(exact_ms * q - p * 2**t, 2**t * q) * 2**n
        result = np.asarray(distance <= 2**t * q, dtype=bool)
    else:
        result = mod_abs(ms / 2**t - phase.value, 1.0) <= 2.0**-n
    return result if np.ndim(m) else bool(result[0])


def radius_success_prob(dist: MeasurementDistribution, phi: PhaseLike, n: int) -> float:
    inside = within_precision_radius(phi, dist.t, np.arange(2**dist.t), n)
    return math.fsum(dist.probs[inside])


@dataclass(frozen=True)
class FailureBounds:
    e: int
    tight: float
    lemma_form: Optional[float] = None
    original: Optional[float] = None


def original_failure_bound(e: int) -> float:
    # 1/(2(e−1)), the positive form; it bounds a probability only from e = 2 on
    if e < 2:
        raise DomainError(f"the original bound holds only for e >= 2, got {e}")
    return 1 / (2 * (e - 1))


def failure_bounds(e: int, t: Optional[int] = None, delta: Optional[ExactReal] = None) -> FailureBounds:
    if e < 1:
        raise DomainError(f"e must be a positive integer, got {e}")

    lemma_form = None
    if t is not None and delta is not None:
        ErrorTolerance(e).check_domain(t)
        gaps = fail_ell_range(t, e) - float(delta) * 2**t
        lemma_form = math.fsum(1 / gaps**2) / 4

    return FailureBounds(
        e=e,
        tight=1 / (2 * e) + 1 / (4 * e**2),
        lemma_form=lemma_form,
        original=original_failure_bound(e) if e >= 2 else None,
    )


def t_required(spec: PrecisionSpec) -> int:
    target = 2 + 1 / (2 * Fraction(spec.epsilon))
    extra = 0
    while 2**extra < target:
        extra += 1
    return spec.n + extra


def e_value(t: int, n: int) -> int:
    if t <= n:
        raise DomainError(f"t={t} leaves no room for n={n} bits")
    return 2 ** (t - n) - 1


@dataclass(frozen=True)
class TrigBoundReport:
    chord_lower: bool
    chord_upper: bool
    sine_lower: bool
    sine_below_identity: bool
    chord_identity: bool

    @property
    def all_hold(self) -> bool:
        return all((self.chord_lower, self.chord_upper, self.sine_lower, self.sine_below_identity, self.chord_identity))


def trig_bound_checks(theta_samples, identity_tol: float = 1e-12) -> TrigBoundReport:
    """Evaluates each bound on the samples inside its own domain.

    The chord bounds and the chord identity use θ ∈ [0, π], the sine lower bound
    θ ∈ [0, π/2] and sin θ < θ every θ > 0. Together these cover [0, ∞), so only
    a negative or non-finite angle is out of domain and raises DomainError.
    """
    theta = np.asarray(theta_samples, dtype=float).reshape(-1)
    if theta.size == 0 or not np.all(np.isfinite(theta)) or np.any(theta < 0):
        raise DomainError("angles must be finite and nonnegative")

    chord_domain = theta[theta <= np.pi]
    chord = np.abs(1 - np.exp(1j * chord_domain))
    sine_domain = theta[theta <= np.pi / 2]
    positive = theta[theta > 0]

    # below this size θ − sin θ is smaller than the spacing of θ itself
    resolvable = positive**3 / 6 > np.spacing(positive)

    return TrigBoundReport(
        chord_lower=bool(np.all(chord >= 2 * chord_domain / np.pi)),
        chord_upper=bool(np.all(chord <= 2)),
        sine_lower=bool(np.all(np.sin(sine_domain) >= 2 * sine_domain / np.pi)),
        sine_below_identity=bool(
            np.all(np.sin(positive[resolvable]) < positive[resolvable])
            and np.all(np.sin(positive[~resolvable]) <= positive[~resolvable])
        ),
        chord_identity=bool(np.all(np.abs(chord - 2 * np.sin(chord_domain / 2)) <= identity_tol)),
    )
