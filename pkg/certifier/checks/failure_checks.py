"""Checks on the failure/success probabilities, their bounds and the precision guarantee."""

import math

import numpy as np

from ..utils.analytic import (
    ErrorTolerance,
    FailMode,
    PhaseGeometry,
    PrecisionSpec,
    alpha_closed,
    alpha_geom,
    alpha_sqrd_bound,
    analytic_distribution,
    e_value,
    fail_ell_range,
    fail_prob,
    failure_bounds,
    mod_abs,
    radius_success_prob,
    success_prob,
    t_required,
    within_precision_radius,
)
from ..utils.circuit import output_distribution
from ..utils.linalg import MAX_QUBITS
from ..utils.report import Tally
from .context import CheckContext


def _instance_distributions(ctx: CheckContext, lowest: int = 3):
    for t in ctx.t_values(lowest=lowest):
        for params, inst in ctx.instances(t, ctx.phases(t)):
            yield params, inst, output_distribution(inst)


def check_alpha_summed(ctx: CheckContext) -> Tally:
    tally = Tally()
    tol = ctx.tol.amplitude
    for t in ctx.t_values():
        for phase in ctx.phases(t):
            geometry = PhaseGeometry.of(phase, t)
            ells = geometry.ell_domain()
            closed = alpha_closed(phase, t, ells)
            geometric = alpha_geom(phase, t, geometry.b_f + ells)
            tally.within(float(np.max(np.abs(closed - geometric))), tol, t=t, phi=phase, relation="geometric sum")
            tally.at_most(float(np.max(np.abs(closed))), 1.0, slack=tol, t=t, phi=phase, relation="magnitude")
    return tally


def check_fail_conditions_equivalent(ctx: CheckContext) -> Tally:
    """The far outcomes of the failure event are exactly b_f ⊕ ℓ over the summed ℓ ranges."""
    tally = Tally()
    for t in ctx.t_values(lowest=3):
        size = 2**t
        floors = np.arange(size)[:, None]
        outcomes = np.arange(size)[None, :]
        for e in ErrorTolerance.domain(t):
            far = mod_abs(outcomes - floors, size) > e
            summed = np.zeros((size, size), dtype=bool)
            rows = np.repeat(np.arange(size), fail_ell_range(t, e).size)
            columns = np.mod(floors + fail_ell_range(t, e)[None, :], size).reshape(-1)
            summed[rows, columns] = True
            tally.holds(np.array_equal(far, summed), t=t, e=e)
    return tally


def check_fail_sum(ctx: CheckContext) -> Tally:
    tally = Tally()
    for params, inst, dist in _instance_distributions(ctx):
        for e in ErrorTolerance.domain(inst.t):
            by_definition = fail_prob(dist, inst.phase, e, FailMode.DEFINITION)
            by_sum = fail_prob(dist, inst.phase, e, FailMode.SUM)
            tally.within(abs(by_definition - by_sum), ctx.tol.probability, e=e, **params)
    return tally


def check_fail_prob_real(ctx: CheckContext) -> Tally:
    tally = Tally()
    for t in ctx.t_values(lowest=3):
        for phase in ctx.phases(t):
            dist = analytic_distribution(phase, t)
            for e in ErrorTolerance.domain(t):
                for mode in FailMode:
                    value = fail_prob(dist, phase, e, mode)
                    tally.holds(math.isfinite(value) and 0.0 <= value <= 1.0, t=t, phi=phase, e=e, mode=mode.value)
    return tally


def check_alpha_sqrd_upper_bound(ctx: CheckContext) -> Tally:
    tally = Tally()
    for t in ctx.t_values():
        for phase in ctx.phases(t):
            geometry = PhaseGeometry.of(phase, t)
            ells = geometry.ell_domain()
            magnitudes = np.abs(alpha_closed(phase, t, ells)) ** 2
            delta = geometry.scaled_delta_bf / 2**t
            for ell, magnitude in zip(ells, magnitudes):
                bound = alpha_sqrd_bound(t, delta, int(ell))
                tally.at_most(magnitude, bound, slack=ctx.tol.algebra, t=t, phi=phase, ell=ell)
    return tally


def check_failure_bound_lemma(ctx: CheckContext) -> Tally:
    tally = Tally()
    for params, inst, dist in _instance_distributions(ctx):
        delta = PhaseGeometry.of(inst.phase, inst.t).delta_bf
        for e in ErrorTolerance.domain(inst.t):
            bound = failure_bounds(e, inst.t, delta).lemma_form
            tally.at_most(fail_prob(dist, inst.phase, e), bound, slack=ctx.tol.strict_margin, e=e, **params)
    return tally


def check_failure_upper_bound(ctx: CheckContext) -> Tally:
    tally = Tally()
    for params, inst, dist in _instance_distributions(ctx):
        for e in ErrorTolerance.domain(inst.t):
            tight = failure_bounds(e).tight
            tally.at_most(fail_prob(dist, inst.phase, e), tight, slack=ctx.tol.strict_margin, e=e, **params)
    return tally


def check_bound_ordering(ctx: CheckContext) -> Tally:
    tally = Tally()
    spot = failure_bounds(2)
    tally.within(abs(spot.tight - 0.3125) + abs(spot.original - 0.5), ctx.tol.algebra, e=2, relation="spot values")

    previous = failure_bounds(1).tight
    for e in range(2, ctx.config.e_max + 1):
        bounds = failure_bounds(e)
        tally.strictly_above(bounds.original, bounds.tight, ctx.tol.strict_margin, e=e, relation="tighter")
        tally.strictly_above(previous, bounds.tight, 0.0, e=e, relation="decreasing")
        previous = bounds.tight
    return tally


def check_success_complements_failure(ctx: CheckContext) -> Tally:
    tally = Tally()
    for params, inst, dist in _instance_distributions(ctx):
        for e in ErrorTolerance.domain(inst.t):
            total = success_prob(dist, inst.phase, e) + fail_prob(dist, inst.phase, e)
            tally.within(abs(total - 1.0), ctx.tol.probability, e=e, **params)
    return tally


def _precision_grid(ctx: CheckContext):
    for n in ctx.config.n_values:
        for epsilon in ctx.config.epsilons:
            spec = PrecisionSpec(n, epsilon)
            yield spec, t_required(spec)


def check_e_value_ge_two(ctx: CheckContext) -> Tally:
    tally = Tally()
    for spec, t in _precision_grid(ctx):
        tally.at_least(e_value(t, spec.n), 2, n=spec.n, epsilon=spec.epsilon, t=t)
    return tally


def check_e_value_in_domain(ctx: CheckContext) -> Tally:
    tally = Tally()
    excluded = []
    for spec, t in _precision_grid(ctx):
        if spec.n == 1:
            excluded.append(spec.epsilon)
            continue
        e = e_value(t, spec.n)
        tally.holds(e in ErrorTolerance.domain(t), n=spec.n, epsilon=spec.epsilon, t=t, e=e)
    if excluded:
        tally.note("n=1 lies outside the summation domain (e = 2^(t-1)-1) and is not checked")
    return tally


def check_precision_lemma_one(ctx: CheckContext) -> Tally:
    tally = Tally()
    for spec, t in _precision_grid(ctx):
        e = e_value(t, spec.n)
        success_floor = 1 - 1 / (2 * e) - 1 / (4 * e**2)
        tally.strictly_above(success_floor, 1 - spec.epsilon, ctx.tol.strict_margin, n=spec.n, epsilon=spec.epsilon, t=t)
    return tally


def check_precision_lemma_two(ctx: CheckContext) -> Tally:
    """Outcomes within e of b_f sit within 2^-n of φ, over every outcome, exactly."""
    tally = Tally()
    for n in ctx.config.n_values:
        for t in ctx.formula_t_values(lowest=n + 1):
            e = e_value(t, n)
            outcomes = np.arange(2**t)
            for phase in ctx.phases(t):
                b_f = PhaseGeometry.of(phase, t).b_f
                near = mod_abs(outcomes - b_f, 2**t) <= e
                inside = within_precision_radius(phase, t, outcomes, n)
                tally.holds(bool(np.all(inside[near])), n=n, t=t, phi=phase)
    return tally


def _precision_verdicts(tally: Tally, spec: PrecisionSpec, dist, phase, ctx: CheckContext, **params) -> None:
    """Records the precision verdicts for one distribution; `params` carries the register width `t`."""
    t = params["t"]
    target = 1 - spec.epsilon
    radius = radius_success_prob(dist, phase, spec.n)
    tally.at_least(radius, target, slack=ctx.tol.probability, n=spec.n, epsilon=spec.epsilon, route="radius", **params)

    e = e_value(t, spec.n)
    if e in ErrorTolerance.domain(t):
        success = success_prob(dist, phase, e)
        tally.at_least(success, target, slack=ctx.tol.probability, n=spec.n, epsilon=spec.epsilon, route="e", **params)
        # the e window sits inside the radius window
        tally.at_most(success, radius, slack=ctx.tol.probability, n=spec.n, epsilon=spec.epsilon, route="nested", **params)


def check_precision_guarantee_analytic(ctx: CheckContext) -> Tally:
    tally = Tally()
    for spec, t in _precision_grid(ctx):
        if t > ctx.config.formula_t_max:
            tally.note(f"n={spec.n}, ε={spec.epsilon} needs t={t}, above formula_t_max")
            continue
        for phase in ctx.phases(t):
            _precision_verdicts(tally, spec, analytic_distribution(phase, t), phase, ctx, t=t, phi=phase)
    return tally


def check_precision_guarantee(ctx: CheckContext) -> Tally:
    tally = Tally()
    for spec, t in _precision_grid(ctx):
        if t + min(ctx.config.s_values) > MAX_QUBITS:
            tally.note(f"n={spec.n}, ε={spec.epsilon} needs t={t}, above the register cap")
            continue
        for params, inst in ctx.instances(t, ctx.phases(t)):
            _precision_verdicts(tally, spec, output_distribution(inst), inst.phase, ctx, **params)
    return tally
