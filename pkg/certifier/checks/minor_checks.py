"""Interval and integrality facts about b_f, b_r and their offsets, plus the modular helpers."""

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from ..utils.analytic import PhaseGeometry, best_floor, best_round, delta_b, mod_abs, mod_add, trig_bound_checks
from ..utils.report import Tally
from .context import CheckContext

HALF = Fraction(1, 2)


def _is_integer(value) -> bool:
    if isinstance(value, Fraction):
        return value.denominator == 1
    return float(value).is_integer()


def _exact_delta(geometry: PhaseGeometry, scaled):
    return scaled / 2**geometry.t


def geometry_check(predicate: Callable[[PhaseGeometry, Tally], None]) -> Callable[[CheckContext], Tally]:
    """Runs a predicate over PhaseGeometry for every register width and grid phase."""

    def runner(ctx: CheckContext) -> Tally:
        tally = Tally()
        for t in ctx.formula_t_values():
            for phase in ctx.phases(t):
                predicate(PhaseGeometry.of(phase, t), tally)
        return tally

    runner.__name__ = predicate.__name__
    runner.__doc__ = predicate.__doc__
    return runner


def _params(geometry: PhaseGeometry, **extra) -> dict:
    return dict(t=geometry.t, phi=geometry.phi, **extra)


def _bests(geometry: PhaseGeometry):
    return (("b_f", geometry.b_f, geometry.scaled_delta_bf), ("b_r", geometry.b_r, geometry.scaled_delta_br))


@geometry_check
def best_floor_in_outcomes(geometry: PhaseGeometry, tally: Tally) -> None:
    tally.holds(0 <= geometry.b_f <= 2**geometry.t - 1, **_params(geometry))


@geometry_check
def scaled_floor_offset_interval(geometry: PhaseGeometry, tally: Tally) -> None:
    tally.holds(0 <= geometry.scaled_delta_bf < 1, **_params(geometry))


@geometry_check
def scaled_round_offset_interval(geometry: PhaseGeometry, tally: Tally) -> None:
    tally.holds(-HALF <= geometry.scaled_delta_br < HALF, **_params(geometry))


@geometry_check
def offset_interval(geometry: PhaseGeometry, tally: Tally) -> None:
    for label, _, scaled in _bests(geometry):
        delta = _exact_delta(geometry, scaled)
        tally.holds(-HALF < delta <= HALF, b=label, **_params(geometry))


@geometry_check
def phase_from_best(geometry: PhaseGeometry, tally: Tally) -> None:
    """φ = b/2^t + δ_b, for b_f, b_r and a spread of other integers."""
    t = geometry.t
    value = geometry.phi.value
    for b in (-1, 0, 2**t, 3 * 2**t + 1):
        tally.within(abs(b / 2**t + delta_b(geometry.phi, t, b) - value), 1e-12, b=b, **_params(geometry))
    tally.within(abs(geometry.b_f / 2**t + geometry.delta_bf - value), 1e-12, b="b_f", **_params(geometry))
    tally.within(abs(geometry.b_r / 2**t + geometry.delta_br - value), 1e-12, b="b_r", **_params(geometry))


@geometry_check
def offset_zero_or_fractional(geometry: PhaseGeometry, tally: Tally) -> None:
    for label, _, scaled in _bests(geometry):
        delta = _exact_delta(geometry, scaled)
        tally.holds(delta == 0 or not _is_integer(delta), b=label, **_params(geometry))


@geometry_check
def scaled_offset_zero_or_fractional(geometry: PhaseGeometry, tally: Tally) -> None:
    for label, _, scaled in _bests(geometry):
        tally.holds(scaled == 0 or not _is_integer(scaled), b=label, **_params(geometry))


def _scaled_offsets(geometry: PhaseGeometry):
    # 2^t·δ_b − ℓ over the ℓ domain; exact in floating point for the grid phases
    ells = geometry.ell_domain()
    for label, _, scaled in _bests(geometry):
        yield label, ells, float(scaled) - ells


@geometry_check
def scaled_offset_not_nonzero_integer(geometry: PhaseGeometry, tally: Tally) -> None:
    ells = np.arange(-(2**geometry.t), 2**geometry.t + 1)
    ells = ells[ells != 0]
    for label, _, scaled in _bests(geometry):
        tally.holds(not np.any(ells == float(scaled)), b=label, **_params(geometry))


@geometry_check
def offset_not_scaled_nonzero_integer(geometry: PhaseGeometry, tally: Tally) -> None:
    t = geometry.t
    for label, _, scaled in _bests(geometry):
        delta = float(_exact_delta(geometry, scaled))
        tally.holds(not np.any(geometry.ell_domain() / 2**t == delta), b=label, **_params(geometry))


@geometry_check
def floor_offset_difference_interval(geometry: PhaseGeometry, tally: Tally) -> None:
    differences = (float(geometry.scaled_delta_bf) - geometry.ell_domain()) / 2**geometry.t
    tally.holds(bool(np.all((differences >= -0.5) & (differences < 0.5))), **_params(geometry))


@geometry_check
def offset_difference_not_integer(geometry: PhaseGeometry, tally: Tally) -> None:
    for label, _, gaps in _scaled_offsets(geometry):
        differences = gaps / 2**geometry.t
        tally.holds(not np.any(np.mod(differences, 1.0) == 0), b=label, **_params(geometry))


@geometry_check
def scaled_floor_difference_angle(geometry: PhaseGeometry, tally: Tally) -> None:
    """π|δ_bf − ℓ/2^t| lies in (0, π/2]."""
    angles = np.pi * np.abs(float(geometry.scaled_delta_bf) - geometry.ell_domain()) / 2**geometry.t
    tally.holds(bool(np.all((angles > 0) & (angles <= np.pi / 2))), **_params(geometry))


def _is_python_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def check_register_size(ctx: CheckContext) -> Tally:
    tally = Tally()
    for t in range(1, max(ctx.config.t_max, ctx.config.formula_t_max) + 1):
        size = 2**t
        tally.holds(_is_python_int(size) and size > 0 and size.bit_length() == t + 1, t=t)
    return tally


def check_half_register_size(ctx: CheckContext) -> Tally:
    tally = Tally()
    for t in range(1, max(ctx.config.t_max, ctx.config.formula_t_max) + 1):
        half = 2 ** (t - 1)
        tally.holds(_is_python_int(half) and half > 0 and 2 * half == 2**t, t=t)
    return tally


def check_phase_is_real(ctx: CheckContext) -> Tally:
    """Every grid phase is a finite float in [0, 1) that agrees with its exact fraction."""
    tally = Tally()
    for t in ctx.formula_t_values():
        for phase in ctx.phases(t):
            value = phase.value
            real = isinstance(value, float) and math.isfinite(value) and 0.0 <= value < 1.0
            if phase.exact is not None:
                real = real and float(phase.exact) == value
            tally.holds(real, t=t, phi=phase)
    return tally


@geometry_check
def best_floor_is_integer(geometry: PhaseGeometry, tally: Tally) -> None:
    b_f = best_floor(geometry.phi, geometry.t)
    tally.holds(_is_python_int(b_f) and b_f == geometry.b_f and b_f <= geometry.phi.scaled(geometry.t) < b_f + 1, **_params(geometry))


@geometry_check
def best_round_is_integer(geometry: PhaseGeometry, tally: Tally) -> None:
    b_r = best_round(geometry.phi, geometry.t)
    tally.holds(_is_python_int(b_r) and b_r == geometry.b_r and b_r - geometry.b_f in (0, 1), **_params(geometry))


@geometry_check
def offset_is_real(geometry: PhaseGeometry, tally: Tally) -> None:
    for label, b, _ in _bests(geometry):
        delta = delta_b(geometry.phi, geometry.t, b)
        tally.holds(isinstance(delta, float) and math.isfinite(delta), b=label, **_params(geometry))


def check_mod_add_closure(ctx: CheckContext) -> Tally:
    tally = Tally()
    rng = ctx.rng()
    for t in ctx.t_values():
        size = 2**t
        pairs = [(0, 0), (size - 1, size - 1), (-1, 0), (-size, 3 * size + 1)]
        pairs += [tuple(int(v) for v in rng.integers(-4 * size, 4 * size, 2)) for _ in range(64)]
        for a, b in pairs:
            result = mod_add(a, b, t)
            tally.holds(0 <= result < size and (result - a - b) % size == 0, t=t, a=a, b=b)
    return tally


def check_mod_abs_full_domain(ctx: CheckContext) -> Tally:
    tally = Tally()
    for t in ctx.formula_t_values():
        half = 2 ** (t - 1)
        ells = np.arange(-half + 1, half + 1)
        tally.holds(np.array_equal(mod_abs(ells, 2**t), np.abs(ells)), t=t)
    return tally


def check_chord_and_sine_bounds(ctx: CheckContext) -> Tally:
    """The chord and sine inequalities on a dense angle grid, with their equality points."""
    tally = Tally()
    theta = np.concatenate([np.linspace(0.0, 2 * np.pi, ctx.config.trig_samples), [np.pi / 2, np.pi]])
    report = trig_bound_checks(theta, identity_tol=ctx.tol.algebra)
    for bound in ("chord_lower", "chord_upper", "sine_lower", "sine_below_identity", "chord_identity"):
        tally.holds(getattr(report, bound), bound=bound, samples=theta.size)

    tally.holds(abs(1 - np.exp(1j * np.pi)) == 2.0, equality="chord upper at π")
    tally.holds(np.sin(np.pi / 2) == 2 * (np.pi / 2) / np.pi, equality="sine lower at π/2")
    return tally
