"""Checks on the first-register state and its outcome amplitudes, up to the best-outcome guarantee."""

import math

import numpy as np

from ..utils.analytic import (
    FOUR_OVER_PI_SQUARED,
    PhaseGeometry,
    alpha_geom,
    alpha_m_eval,
    alpha_m_mod_eval,
    big_psi,
    kickback_qubit,
    phased_ket_sum,
    psi_t_sum,
    psi_t_tensor,
)
from ..utils.circuit import factor_first_register, final_state, output_distribution
from ..utils.instances import PhaseKind, diagonal_instance
from ..utils.linalg import StateVector, inner_product, number_ket, tensor_vec
from ..utils.report import Tally
from .context import CheckContext


def check_psi_formula(ctx: CheckContext) -> Tally:
    """Tensor and summation forms of ψ_t agree, along with the identities the induction rests on."""
    tally = Tally()
    tol = ctx.tol.algebra
    for t in ctx.formula_t_values():
        for phase in ctx.phases(t):
            tally.within(psi_t_tensor(phase, t).max_deviation(psi_t_sum(phase, t)), tol, t=t, phi=phase)

    for t in ctx.formula_t_values(highest=ctx.config.formula_t_max - 1):
        size = 2**t
        for phase in ctx.phases(t):
            params = dict(t=t, phi=phase)
            whole = phased_ket_sum(phase, t + 1, range(2 * size))
            lower = phased_ket_sum(phase, t + 1, range(size))
            upper = phased_ket_sum(phase, t + 1, range(size, 2 * size))
            split = StateVector(lower.amplitudes + upper.amplitudes)
            tally.within(whole.max_deviation(split), tol, identity="split", **params)

            shifted = phased_ket_sum(phase, t + 1, range(size), shift=size)
            tally.within(upper.max_deviation(shifted), tol, identity="shift", **params)

            top = kickback_qubit(phase, t)
            psi = psi_t_sum(phase, t)
            recursion = tensor_vec(top, psi)
            tally.within(psi_t_sum(phase, t + 1).max_deviation(recursion), tol, identity="recursion", **params)

            # (a|0> + b|1>) ⊗ ψ = a|0>⊗ψ + b|1>⊗ψ
            linear = StateVector(
                top[0] * tensor_vec(number_ket(0, 1), psi).amplitudes
                + top[1] * tensor_vec(number_ket(1, 1), psi).amplitudes
            )
            tally.within(recursion.max_deviation(linear), tol, identity="linearity", **params)

        for k in range(size):
            tally.holds(
                np.array_equal(tensor_vec(number_ket(0, 1), number_ket(k, t)).amplitudes, number_ket(k, t + 1).amplitudes),
                t=t, k=k, identity="ket zero",
            )
            tally.holds(
                np.array_equal(tensor_vec(number_ket(1, 1), number_ket(k, t)).amplitudes, number_ket(size + k, t + 1).amplitudes),
                t=t, k=k, identity="ket one",
            )
    return tally


def _simulated_psi(ctx: CheckContext, phase, t: int) -> StateVector:
    inst = diagonal_instance(min(ctx.config.s_values), phase, t=t)
    return factor_first_register(final_state(inst), inst.u, ctx.tol.entanglement)


def check_alpha_evaluation(ctx: CheckContext) -> Tally:
    tally = Tally()
    tol = ctx.tol.amplitude
    for t in ctx.t_values():
        outcomes = np.arange(2**t)
        for phase in ctx.phases(t):
            alphas = alpha_m_eval(phase, t, outcomes)
            analytic = big_psi(phase, t)
            projected = np.array([inner_product(number_ket(m, t), analytic) for m in outcomes])
            simulated = _simulated_psi(ctx, phase, t)
            tally.within(float(np.max(np.abs(alphas - projected))), tol, t=t, phi=phase, against="analytic")
            tally.within(float(np.max(np.abs(alphas - simulated.amplitudes))), tol, t=t, phi=phase, against="simulated")
    return tally


def check_alpha_complex(ctx: CheckContext) -> Tally:
    tally = Tally()
    for t in ctx.t_values():
        outcomes = np.arange(2**t)
        for phase in ctx.phases(t):
            alphas = np.asarray(alpha_m_eval(phase, t, outcomes))
            tally.holds(np.iscomplexobj(alphas) and bool(np.all(np.isfinite(alphas))), t=t, phi=phase)
    return tally


def check_alpha_ideal_case(ctx: CheckContext) -> Tally:
    tally = Tally()
    tol = ctx.tol.amplitude
    for t in ctx.t_values():
        for phase in ctx.phases(t, PhaseKind.DYADIC):
            k = int(phase.scaled(t))
            tally.within(abs(alpha_m_eval(phase, t, k) - 1.0), tol, t=t, phi=phase, relation="amplitude")
            tally.within(big_psi(phase, t).max_deviation(number_ket(k, t)), tol, t=t, phi=phase, relation="state")
    return tally


def _extended_outcomes(t: int) -> np.ndarray:
    return np.arange(-(2**t), 2 ** (t + 1))


def check_alpha_mod_evaluation(ctx: CheckContext) -> Tally:
    tally = Tally()
    for t in ctx.t_values():
        ms = _extended_outcomes(t)
        for phase in ctx.phases(t):
            extended = alpha_m_mod_eval(phase, t, ms)
            reduced = alpha_m_eval(phase, t, np.mod(ms, 2**t))
            tally.within(float(np.max(np.abs(extended - reduced))), ctx.tol.amplitude, t=t, phi=phase)
    return tally


def check_alpha_geometric_sum(ctx: CheckContext) -> Tally:
    tally = Tally()
    tol = ctx.tol.amplitude
    for t in ctx.t_values():
        ms = _extended_outcomes(t)
        for phase in ctx.phases(t):
            geometric = alpha_geom(phase, t, ms)
            direct = alpha_m_mod_eval(phase, t, ms)
            tally.within(float(np.max(np.abs(geometric - direct))), tol, t=t, phi=phase, relation="direct sum")

            # ms covers three periods; the middle one is 0..2^t-1
            size = 2**t
            periods = geometric.reshape(3, size)
            tally.within(float(np.max(np.abs(periods[1:] - periods[:-1]))), tol, t=t, phi=phase, relation="periodic")
            tally.within(abs(math.fsum(np.abs(periods[1]) ** 2) - 1.0), tol, t=t, phi=phase, relation="normalized")
    return tally


def _best_probability(phase, t: int) -> float:
    geometry = PhaseGeometry.of(phase, t)
    return abs(alpha_geom(phase, t, geometry.best_outcome)) ** 2


def check_best_guarantee_delta_nonzero(ctx: CheckContext) -> Tally:
    tally = Tally()
    for t in ctx.t_values(lowest=2):
        for phase in ctx.phases(t, PhaseKind.NONDYADIC):
            tally.strictly_above(_best_probability(phase, t), FOUR_OVER_PI_SQUARED, ctx.tol.strict_margin, t=t, phi=phase)
    return tally


def check_best_guarantee_analytic(ctx: CheckContext) -> Tally:
    tally = Tally()
    for t in ctx.t_values(lowest=2):
        for phase in ctx.phases(t):
            tally.strictly_above(_best_probability(phase, t), FOUR_OVER_PI_SQUARED, ctx.tol.strict_margin, t=t, phi=phase)
    return tally


def check_best_guarantee(ctx: CheckContext) -> Tally:
    """The best outcome of every simulated instance beats 4/π², with the δ ≠ 0 branch tracked on its own."""
    tally = Tally()
    branch = Tally()
    for t in ctx.t_values(lowest=2):
        for params, inst in ctx.instances(t, ctx.phases(t)):
            geometry = PhaseGeometry.of(inst.phase, t)
            probability = output_distribution(inst)[geometry.best_outcome]
            tally.strictly_above(probability, FOUR_OVER_PI_SQUARED, ctx.tol.strict_margin, **params)
            if geometry.scaled_delta_br != 0:
                branch.strictly_above(probability, FOUR_OVER_PI_SQUARED, ctx.tol.strict_margin, **params)

    if branch.instances:
        lowest = branch.worst_margin + FOUR_OVER_PI_SQUARED
        tally.note(f"δ≠0 branch: {branch.instances} instances, lowest best-outcome probability {lowest:.9f}")
    return tally
