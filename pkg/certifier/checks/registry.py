import logging
from typing import List

from ..utils.configuration import ConfigError, RunConfig
from ..utils.graph import CheckGraph, CheckNode
from . import amplitude_checks as amplitude
from . import circuit_checks as circuit
from . import failure_checks as failure
from . import minor_checks as minor

logger = logging.getLogger(__name__)

INSTANCES = "t ≤ t_max, s_values, phase grid, diagonal + random instances"
FORMULA = "t ≤ formula_t_max, phase grid"
ANALYTIC = "t ≤ t_max, phase grid"
PRECISION = "n_values × epsilons"

# name, prerequisites, runner, grid; declaration order is the tie-break of the topological order
_NODES = [
    # minor theorems
    ("_two_pow_t_is_nat_pos", [], minor.check_register_size, "1 ≤ t ≤ max(t_max, formula_t_max)"),
    ("_two_pow_t_minus_one_is_nat_pos", ["_two_pow_t_is_nat_pos"], minor.check_half_register_size, "1 ≤ t ≤ max(t_max, formula_t_max)"),
    ("_phase_is_real", [], minor.check_phase_is_real, FORMULA),
    ("_best_floor_is_int", ["_phase_is_real", "_two_pow_t_is_nat_pos"], minor.best_floor_is_integer, FORMULA),
    ("_best_round_is_int", ["_phase_is_real", "_two_pow_t_is_nat_pos"], minor.best_round_is_integer, FORMULA),
    ("_delta_b_is_real", ["_phase_is_real"], minor.offset_is_real, FORMULA),
    ("_best_floor_is_in_m_domain", ["_best_floor_is_int"], minor.best_floor_in_outcomes, FORMULA),
    ("_phase_from_best_with_delta_b", ["_delta_b_is_real"], minor.phase_from_best, FORMULA),
    ("_scaled_delta_b_floor_in_interval", ["_best_floor_is_in_m_domain", "_phase_from_best_with_delta_b"], minor.scaled_floor_offset_interval, FORMULA),
    ("_scaled_delta_b_round_in_interval", ["_best_round_is_int", "_phase_from_best_with_delta_b"], minor.scaled_round_offset_interval, FORMULA),
    ("_delta_b_in_interval", ["_scaled_delta_b_floor_in_interval", "_scaled_delta_b_round_in_interval"], minor.offset_interval, FORMULA),
    ("_scaled_delta_b_is_zero_or_non_int", ["_scaled_delta_b_floor_in_interval", "_scaled_delta_b_round_in_interval"], minor.scaled_offset_zero_or_fractional, FORMULA),
    ("_delta_b_is_zero_or_non_int", ["_delta_b_in_interval"], minor.offset_zero_or_fractional, FORMULA),
    ("_scaled_delta_b_not_eq_nonzeroInt", ["_scaled_delta_b_is_zero_or_non_int"], minor.scaled_offset_not_nonzero_integer, FORMULA),
    ("_delta_b_not_eq_scaledNonzeroInt", ["_scaled_delta_b_not_eq_nonzeroInt"], minor.offset_not_scaled_nonzero_integer, FORMULA),
    ("_delta_b_floor_diff_in_interval", ["_scaled_delta_b_floor_in_interval"], minor.floor_offset_difference_interval, FORMULA),
    ("_non_int_delta_b_diff", ["_delta_b_floor_diff_in_interval", "_delta_b_not_eq_scaledNonzeroInt"], minor.offset_difference_not_integer, FORMULA),
    ("_scaled_abs_delta_b_floor_diff_interval", ["_delta_b_floor_diff_in_interval", "_non_int_delta_b_diff"], minor.scaled_floor_difference_angle, FORMULA),
    ("_mod_add_closure", [], minor.check_mod_add_closure, "t ≤ t_max, sampled pairs"),
    ("_modabs_in_full_domain_simp", [], minor.check_mod_abs_full_domain, "t ≤ formula_t_max"),
    ("chord_and_sine_bounds", [], minor.check_chord_and_sine_bounds, "trig_samples angles in [0, 2π]"),
    # instance assumptions and the circuit
    ("_unitary_U", [], circuit.check_unitary_u, INSTANCES),
    ("_normalized_ket_u", [], circuit.check_normalized_u, INSTANCES),
    ("_eigen_uu", ["_unitary_U", "_normalized_ket_u"], circuit.check_eigenpair, INSTANCES),
    ("invFT_on_matrix_elem", [], circuit.check_inverse_qft_entries, "n ≤ formula_t_max"),
    ("phase_kickback", ["_eigen_uu"], circuit.check_phase_kickback, "t = t_max, every control line"),
    ("phase_kickbacks_on_register", ["phase_kickback"], circuit.check_register_kickbacks, INSTANCES),
    ("QPE1_def", ["_unitary_U"], circuit.check_qpe1_construction, "t + s ≤ dense_qubits"),
    ("QPE_def", ["QPE1_def", "invFT_on_matrix_elem"], circuit.check_qpe_construction, "t + s ≤ dense_qubits"),
    ("_psi_t_ket_is_normalized_vec", [], circuit.check_psi_normalized, FORMULA),
    ("_psi_t_output", ["phase_kickbacks_on_register", "QPE1_def", "_psi_t_ket_is_normalized_vec"], circuit.check_stage2_output, INSTANCES),
    ("_psi_t_formula", ["_psi_t_output"], amplitude.check_psi_formula, FORMULA),
    ("_Psi_output", ["_psi_t_formula", "QPE_def"], circuit.check_stage3_output, INSTANCES),
    ("_Psi_ket_is_normalized_vec", ["_Psi_output"], circuit.check_big_psi_normalized, FORMULA),
    ("_sample_space_bijection", [], circuit.check_sample_space_bijection, "t ≤ t_max"),
    ("_Omega_is_sample_space", ["_sample_space_bijection", "_Psi_output", "_Psi_ket_is_normalized_vec"], circuit.check_sample_space, INSTANCES),
    ("_outcome_prob", ["_Psi_output", "_Omega_is_sample_space"], circuit.check_outcome_probability, INSTANCES),
    ("distribution_depends_only_on_phase", ["_outcome_prob"], circuit.check_phase_only_dependence, INSTANCES),
    # amplitudes
    ("_alpha_m_evaluation", ["_psi_t_formula", "invFT_on_matrix_elem"], amplitude.check_alpha_evaluation, ANALYTIC),
    ("_alpha_are_complex", ["_alpha_m_evaluation"], amplitude.check_alpha_complex, ANALYTIC),
    ("_alpha_ideal_case", ["_alpha_m_evaluation"], amplitude.check_alpha_ideal_case, "t ≤ t_max, dyadic phases"),
    ("qpe_exact", ["_alpha_ideal_case", "_outcome_prob", "_Omega_is_sample_space"], circuit.check_qpe_exact, "t ≤ t_max, s_values, dyadic phases"),
    ("_alpha_m_mod_evaluation", ["_alpha_m_evaluation", "_alpha_are_complex"], amplitude.check_alpha_mod_evaluation, ANALYTIC),
    ("_alpha_m_mod_as_geometric_sum", ["_alpha_m_mod_evaluation"], amplitude.check_alpha_geometric_sum, ANALYTIC),
    ("_best_guarantee_delta_nonzero", ["_alpha_m_mod_as_geometric_sum", "_scaled_delta_b_round_in_interval", "chord_and_sine_bounds"], amplitude.check_best_guarantee_delta_nonzero, "2 ≤ t ≤ t_max, non-dyadic phases"),
    ("_best_guarantee", ["_best_guarantee_delta_nonzero", "_alpha_ideal_case"], amplitude.check_best_guarantee_analytic, "2 ≤ t ≤ t_max, phase grid"),
    ("qpe_best_guarantee", ["_best_guarantee", "_outcome_prob"], amplitude.check_best_guarantee, "2 ≤ t ≤ t_max, instances"),
    # failure and success
    ("_alpha_summed", ["_alpha_m_mod_as_geometric_sum", "_non_int_delta_b_diff", "_mod_add_closure"], failure.check_alpha_summed, ANALYTIC),
    ("_fail_sum_prob_conds_equiv_lemma", ["_modabs_in_full_domain_simp", "_mod_add_closure"], failure.check_fail_conditions_equivalent, "3 ≤ t ≤ t_max, every b_f and e"),
    ("_fail_sum", ["_alpha_summed", "_fail_sum_prob_conds_equiv_lemma", "_Omega_is_sample_space"], failure.check_fail_sum, "3 ≤ t ≤ t_max, instances, every e"),
    ("_pfail_in_real", ["_fail_sum"], failure.check_fail_prob_real, "3 ≤ t ≤ t_max, phase grid, every e"),
    ("_alpha_sqrd_upper_bound", ["_alpha_summed", "chord_and_sine_bounds", "_scaled_abs_delta_b_floor_diff_interval"], failure.check_alpha_sqrd_upper_bound, ANALYTIC),
    ("_failure_upper_bound_lemma", ["_fail_sum", "_alpha_sqrd_upper_bound"], failure.check_failure_bound_lemma, "3 ≤ t ≤ t_max, instances, every e"),
    ("_failure_upper_bound", ["_failure_upper_bound_lemma"], failure.check_failure_upper_bound, "3 ≤ t ≤ t_max, instances, every e"),
    ("tight_vs_original_failure_bound", ["_failure_upper_bound"], failure.check_bound_ordering, "2 ≤ e ≤ e_max"),
    ("_success_complements_failure", ["_fail_sum"], failure.check_success_complements_failure, "3 ≤ t ≤ t_max, instances, every e"),
    # precision
    ("_e_value_ge_two", [], failure.check_e_value_ge_two, PRECISION),
    ("_e_value_in_e_domain", ["_e_value_ge_two", "_two_pow_t_minus_one_is_nat_pos"], failure.check_e_value_in_domain, PRECISION),
    ("_precision_guarantee_lemma_01", ["_e_value_ge_two"], failure.check_precision_lemma_one, PRECISION),
    ("_precision_guarantee_lemma_02", ["_modabs_in_full_domain_simp"], failure.check_precision_lemma_two, "n_values, n < t ≤ formula_t_max, every outcome"),
    (
        "_precision_guarantee",
        ["_failure_upper_bound", "_success_complements_failure", "_precision_guarantee_lemma_01", "_precision_guarantee_lemma_02", "_e_value_in_e_domain"],
        failure.check_precision_guarantee_analytic,
        PRECISION + ", analytic distributions",
    ),
    ("qpe_precision_guarantee", ["_precision_guarantee", "_outcome_prob"], failure.check_precision_guarantee, PRECISION + ", instances"),
]


def all_nodes() -> List[CheckNode]:
    return [CheckNode(name, prerequisites, runner, dict(grid=grid)) for name, prerequisites, runner, grid in _NODES]


def build_check_graph(config: RunConfig) -> CheckGraph:
    """The full check graph, narrowed to the config's include/exclude lists."""
    graph = CheckGraph(tuple(all_nodes()))

    unknown = [name for name in config.include + config.exclude if name not in graph]
    if unknown:
        raise ConfigError(f"unknown check name(s): {', '.join(unknown)}")

    if config.include or config.exclude:
        graph = graph.restricted(config.include, config.exclude)
        logger.debug("running %d of %d checks", len(graph), len(_NODES))

    return graph


def registry_listing(graph: CheckGraph) -> str:
    lines = []
    for name in graph.topological_order():
        node = graph.node(name)
        prerequisites = ", ".join(node.prerequisites) or "-"
        lines.append(f"{name:<44} <- {prerequisites}")
    return "\n".join(lines) + "\n"
