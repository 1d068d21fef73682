"""Checks on the simulated circuit: instance assumptions, kickback, the stage states and the exact case."""

import math
from typing import Optional

import numpy as np

from ..utils.analytic import big_psi, kickback_qubit, psi_t_sum, psi_t_tensor
from ..utils.circuit import (
    apply_qpe,
    apply_qpe1,
    build_qpe,
    build_qpe1,
    controlled_power,
    factor_first_register,
    final_state,
    input_state,
    inv_qft,
    output_distribution,
    plus_register,
    second_register_overlap,
    stage2_state,
)
from ..utils.instances import PhaseKind
from ..utils.linalg import (
    StateVector,
    UnitaryMatrix,
    apply,
    inner_product,
    number_ket,
    tensor_all,
    tensor_vec,
    unitarity_deviation,
)
from ..utils.report import Tally
from .context import CheckContext


def _grid_instances(ctx: CheckContext, kind: Optional[PhaseKind] = None):
    for t in ctx.t_values():
        yield from ctx.instances(t, ctx.phases(t, kind))


def check_unitary_u(ctx: CheckContext) -> Tally:
    tally = Tally()
    for params, inst in _grid_instances(ctx):
        tally.within(unitarity_deviation(inst.U), ctx.tol.unitarity, **params)
    return tally


def check_normalized_u(ctx: CheckContext) -> Tally:
    tally = Tally()
    for params, inst in _grid_instances(ctx):
        tally.within(abs(inst.u.norm - 1.0), ctx.tol.unitarity, **params)
    return tally


def check_eigenpair(ctx: CheckContext) -> Tally:
    tally = Tally()
    for params, inst in _grid_instances(ctx):
        tally.within(inst.eigen_residual(), ctx.tol.eigen, **params)
    return tally


def check_inverse_qft_entries(ctx: CheckContext) -> Tally:
    tally = Tally()
    for n in ctx.formula_t_values():
        size = 2**n
        ls, ks = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
        expected = np.exp(-2j * np.pi * np.mod(ls * ks, size) / size) / 2 ** (n / 2)
        matrix = inv_qft(n)
        tally.within(float(np.max(np.abs(matrix.entries - expected))), ctx.tol.amplitude, n=n, relation="entries")
        tally.within(unitarity_deviation(matrix), ctx.tol.unitarity, n=n, relation="unitary")
    return tally


def check_phase_kickback(ctx: CheckContext) -> Tally:
    tally = Tally()
    t = ctx.config.t_max
    plus = plus_register(1)
    for params, inst in ctx.instances(t, ctx.phases(t)):
        for j in range(t):
            kicked = apply(controlled_power(inst.U, j), tensor_vec(plus, inst.u))
            expected = tensor_vec(kickback_qubit(inst.phase, j), inst.u)
            tally.within(kicked.max_deviation(expected), ctx.tol.eigen, j=j, **params)
    return tally


def check_register_kickbacks(ctx: CheckContext) -> Tally:
    """QPE1 on the whole register equals the tensor product of single-line kickbacks."""
    tally = Tally()
    plus = plus_register(1)
    for params, inst in _grid_instances(ctx):
        lines = []
        for j in range(inst.t - 1, -1, -1):
            kicked = apply(controlled_power(inst.U, j), tensor_vec(plus, inst.u))
            lines.append(factor_first_register(kicked, inst.u, ctx.tol.entanglement))
        expected = tensor_vec(tensor_all(lines), inst.u)
        after = apply_qpe1(inst.U, inst.t, input_state(inst))
        tally.within(after.max_deviation(expected), ctx.tol.eigen, **params)
    return tally


def _dense_instances(ctx: CheckContext):
    for t in ctx.t_values():
        for params, inst in ctx.instances(t, ctx.phases(t, PhaseKind.NONDYADIC)[:3] + ctx.phases(t, PhaseKind.DYADIC)[:2]):
            if t + inst.s <= ctx.config.dense_qubits:
                yield params, inst


def _random_state(rng: np.random.Generator, dim: int) -> StateVector:
    draw = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(draw / np.linalg.norm(draw))


def check_qpe1_construction(ctx: CheckContext) -> Tally:
    tally = Tally()
    rng = ctx.rng()

    identity_case = build_qpe1(UnitaryMatrix.identity(2), 1)
    tally.within(float(np.max(np.abs(identity_case.entries - np.eye(4)))), ctx.tol.algebra, t=1, relation="identity")

    for params, inst in _dense_instances(ctx):
        dense = build_qpe1(inst.U, inst.t)
        tally.within(unitarity_deviation(dense), ctx.tol.unitarity, relation="unitary", **params)
        for state in (input_state(inst), _random_state(rng, dense.dim)):
            routed = apply_qpe1(inst.U, inst.t, state)
            tally.within(apply(dense, state).max_deviation(routed), ctx.tol.eigen, relation="register", **params)
    return tally


def check_qpe_construction(ctx: CheckContext) -> Tally:
    tally = Tally()
    rng = ctx.rng()
    for params, inst in _dense_instances(ctx):
        dense = build_qpe(inst.U, inst.t)
        tally.within(unitarity_deviation(dense), ctx.tol.unitarity, relation="unitary", **params)
        for state in (input_state(inst), _random_state(rng, dense.dim)):
            routed = apply_qpe(inst.U, inst.t, state)
            tally.within(apply(dense, state).max_deviation(routed), ctx.tol.eigen, relation="register", **params)
    return tally


def check_psi_normalized(ctx: CheckContext) -> Tally:
    tally = Tally()
    for t in ctx.formula_t_values():
        for phase in ctx.phases(t):
            for form, state in (("tensor", psi_t_tensor(phase, t)), ("sum", psi_t_sum(phase, t))):
                tally.within(abs(state.norm - 1.0), ctx.tol.unitarity, t=t, phi=phase, form=form)
    return tally


def check_stage2_output(ctx: CheckContext) -> Tally:
    tally = Tally()
    for params, inst in _grid_instances(ctx):
        psi = stage2_state(inst, ctx.tol.entanglement)
        tally.within(psi.max_deviation(psi_t_tensor(inst.phase, inst.t)), ctx.tol.eigen, **params)
        after = apply_qpe1(inst.U, inst.t, input_state(inst))
        tally.within(abs(second_register_overlap(after, inst.u) - 1.0), ctx.tol.eigen, relation="second register", **params)
    return tally


def check_stage3_output(ctx: CheckContext) -> Tally:
    tally = Tally()
    for params, inst in _grid_instances(ctx):
        state = final_state(inst)
        psi = factor_first_register(state, inst.u, ctx.tol.entanglement)
        tally.within(psi.max_deviation(big_psi(inst.phase, inst.t)), ctx.tol.eigen, **params)
        tally.within(abs(second_register_overlap(state, inst.u) - 1.0), ctx.tol.eigen, relation="second register", **params)
    return tally


def check_big_psi_normalized(ctx: CheckContext) -> Tally:
    tally = Tally()
    for t in ctx.formula_t_values():
        for phase in ctx.phases(t):
            tally.within(abs(big_psi(phase, t).norm - 1.0), ctx.tol.unitarity, t=t, phi=phase)
    return tally


def check_sample_space_bijection(ctx: CheckContext) -> Tally:
    tally = Tally()
    for t in ctx.t_values():
        kets = np.array([number_ket(k, t).amplitudes for k in range(2**t)])
        gram = kets.conj() @ kets.T
        tally.within(float(np.max(np.abs(gram - np.eye(2**t)))), ctx.tol.algebra, t=t, relation="orthonormal")
        tally.holds(np.array_equal(np.argmax(np.abs(kets), axis=1), np.arange(2**t)), t=t, relation="index")
    return tally


def check_sample_space(ctx: CheckContext) -> Tally:
    tally = Tally()
    rng = ctx.rng()
    for params, inst in _grid_instances(ctx):
        dist = output_distribution(inst)
        size = 2**inst.t
        tally.within(abs(math.fsum(dist.probs) - 1.0), ctx.tol.normalization, relation="normalized", **params)
        tally.holds(bool(np.all((dist.probs >= 0) & (dist.probs <= 1))), relation="range", **params)

        events = [range(0, size, 2), range(size // 2), np.flatnonzero(rng.random(size) < 0.5)]
        for event in events:
            inside = dist.event_probability(event)
            outside = dist.event_probability(set(range(size)) - set(int(m) for m in event))
            tally.within(abs(inside - math.fsum(dist.probs[list(event)])), ctx.tol.algebra, relation="additive", **params)
            tally.within(abs(inside + outside - 1.0), ctx.tol.normalization, relation="complement", **params)
    return tally


def check_outcome_probability(ctx: CheckContext) -> Tally:
    """Born-rule probabilities agree with the marginal of the full final register."""
    tally = Tally()
    for params, inst in _grid_instances(ctx):
        dist = output_distribution(inst)
        state = final_state(inst)
        marginal = np.sum(np.abs(state.amplitudes.reshape(2**inst.t, -1)) ** 2, axis=1)
        psi = factor_first_register(state, inst.u, ctx.tol.entanglement)
        born = np.array([abs(inner_product(number_ket(m, inst.t), psi)) ** 2 for m in range(2**inst.t)])
        tally.within(float(np.max(np.abs(dist.probs - marginal))), ctx.tol.probability, relation="marginal", **params)
        tally.within(float(np.max(np.abs(dist.probs - born))), ctx.tol.probability, relation="born", **params)
    return tally


def check_qpe_exact(ctx: CheckContext) -> Tally:
    tally = Tally()
    tol = ctx.tol.probability
    for params, inst in _grid_instances(ctx, kind=PhaseKind.DYADIC):
        dist = output_distribution(inst)
        k = int(inst.phase.scaled(inst.t))
        residual = math.fsum(np.delete(dist.probs, k))
        tally.at_least(dist[k], 1.0 - tol, relation="exact outcome", **params)
        tally.at_most(float(np.max(np.delete(dist.probs, k), initial=0.0)), tol, relation="other outcomes", **params)
        tally.at_most(residual, tol, relation="residual mass", **params)
    return tally


def check_phase_only_dependence(ctx: CheckContext) -> Tally:
    tally = Tally()
    for t in ctx.t_values():
        reference = {}
        for params, inst in ctx.instances(t, ctx.phases(t)):
            dist = output_distribution(inst).probs
            # the first instance of each phase is the diagonal one with the smallest s
            expected = reference.setdefault(params["phi"], dist)
            tally.within(float(np.max(np.abs(dist - expected))), ctx.tol.normalization, **params)
    return tally
