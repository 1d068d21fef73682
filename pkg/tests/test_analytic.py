from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from certifier.utils.analytic import (
    FOUR_OVER_PI_SQUARED,
    ErrorTolerance,
    FailMode,
    PhaseGeometry,
    PrecisionSpec,
    SingularityError,
    alpha_closed,
    alpha_geom,
    alpha_m_eval,
    alpha_m_mod_eval,
    alpha_sqrd_bound,
    analytic_distribution,
    best_floor,
    best_round,
    big_psi,
    delta_b,
    e_value,
    fail_ell_range,
    fail_prob,
    failure_bounds,
    mod_abs,
    mod_add,
    original_failure_bound,
    psi_t_sum,
    psi_t_tensor,
    radius_success_prob,
    success_prob,
    t_required,
    trig_bound_checks,
    within_precision_radius,
)
from certifier.utils.circuit import output_distribution
from certifier.utils.instances import diagonal_instance
from certifier.utils.linalg import DomainError, inner_product, number_ket
from certifier.utils.phase import Phase

GRID = [Phase.dyadic(5, 3), Phase.rational(3, 10), Phase.rational(1, 3), Phase.rational(1, 32), Phase.decimal(0.71)]


@pytest.mark.parametrize("x, N, expected", [(0, 8, 0), (3, 8, 3), (5, 8, 3), (-3, 8, 3), (12, 8, 4), (17, 8, 1)])
def test_mod_abs(x, N, expected):
    assert mod_abs(x, N) == expected


def test_mod_abs_keeps_float_type_and_vectorizes():
    assert mod_abs(0.9, 1.0) == pytest.approx(0.1)
    assert np.array_equal(mod_abs(np.arange(-4, 5), 8), [4, 3, 2, 1, 0, 1, 2, 3, 4])

    with pytest.raises(DomainError):
        mod_abs(1, 0)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(st.integers(min_value=-10**6, max_value=10**6), st.integers(min_value=1, max_value=10**4))
def test_mod_abs_range(x, N):
    distance = mod_abs(x, N)
    assert 0 <= distance <= N / 2
    assert (x - distance) % N == 0 or (x + distance) % N == 0


def test_mod_add():
    assert mod_add(7, 3, 3) == 2
    assert mod_add(-1, 0, 3) == 7
    with pytest.raises(DomainError):
        mod_add(1, 1, 0)


@pytest.mark.parametrize(
    "phi, t, b_f, b_r",
    [
        (Phase.decimal(0.3), 3, 2, 2),
        (Phase.rational(3, 10), 3, 2, 2),
        (Phase.dyadic(5, 4), 3, 2, 3),
        (Phase.dyadic(15, 4), 3, 7, 8),
        (Phase.dyadic(0, 1), 2, 0, 0),
    ],
)
def test_best_floor_and_round(phi, t, b_f, b_r):
    assert best_floor(phi, t) == b_f
    assert best_round(phi, t) == b_r


def test_delta_b():
    assert delta_b(Phase.dyadic(5, 3), 3, 5) == 0
    assert delta_b(0.3, 3, 2) == pytest.approx(0.05)


@settings(max_examples=150, deadline=None, derandomize=True)
@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=10**6), st.integers(min_value=1, max_value=10**6))
def test_phase_geometry_intervals(t, p, q):
    phi = Phase.rational(p % q, q)
    geometry = PhaseGeometry.of(phi, t)

    assert 0 <= geometry.b_f <= 2**t - 1
    assert 0 <= geometry.scaled_delta_bf < 1
    assert -Fraction(1, 2) <= geometry.scaled_delta_br < Fraction(1, 2)
    assert geometry.delta_bf_is_zero == phi.is_exact_in(t)
    assert 0 <= geometry.best_outcome < 2**t


def test_ell_domain():
    geometry = PhaseGeometry.of(0.3, 3)
    assert list(geometry.ell_domain()) == [-3, -2, -1, 1, 2, 3, 4]


def test_psi_forms_agree():
    for phi in GRID:
        for t in range(1, 9):
            assert psi_t_tensor(phi, t).max_deviation(psi_t_sum(phi, t)) < 1e-12


def test_psi_quarter_turn():
    assert np.allclose(psi_t_sum(Phase.dyadic(1, 2), 2).amplitudes, np.array([1, 1j, -1, -1j]) / 2, atol=1e-15)


def test_big_psi_of_exact_phase_is_number_ket():
    assert big_psi(Phase.dyadic(5, 3), 3).max_deviation(number_ket(5, 3)) < 1e-10
    assert big_psi(Phase.dyadic(0, 1), 2).max_deviation(number_ket(0, 2)) < 1e-10


def test_alpha_chain_agrees():
    t = 5
    outcomes = np.arange(2**t)
    for phi in GRID:
        direct = alpha_m_eval(phi, t, outcomes)
        geometric = alpha_geom(phi, t, outcomes)
        projected = np.array([inner_product(number_ket(m, t), big_psi(phi, t)) for m in outcomes])

        assert np.max(np.abs(direct - geometric)) < 1e-11
        assert np.max(np.abs(direct - projected)) < 1e-11


def test_alpha_scalar_and_array_forms():
    value = alpha_m_eval(0.3, 3, 2)
    assert isinstance(value, complex)
    assert value == pytest.approx(inner_product(number_ket(2, 3), big_psi(0.3, 3)), abs=1e-12)
    assert alpha_m_eval(Phase.dyadic(3, 3), 3, 3) == pytest.approx(1.0)
    assert alpha_m_eval(0.0, 3, 1) == pytest.approx(0.0, abs=1e-15)

    with pytest.raises(DomainError):
        alpha_m_eval(0.3, 3, 8)


def test_alpha_mod_eval_is_periodic():
    phi = Phase.rational(2, 9)
    ms = np.arange(-8, 16)
    values = alpha_m_mod_eval(phi, 3, ms)
    assert np.max(np.abs(values - alpha_m_eval(phi, 3, np.mod(ms, 8)))) < 1e-12
    assert np.max(np.abs(alpha_geom(phi, 3, ms) - values)) < 1e-12


def test_alpha_closed_matches_geometric_sum():
    for phi in GRID:
        for t in range(2, 8):
            geometry = PhaseGeometry.of(phi, t)
            ells = geometry.ell_domain()
            closed = alpha_closed(phi, t, ells)
            geometric = alpha_geom(phi, t, geometry.b_f + ells)

            assert np.max(np.abs(closed - geometric)) < 1e-11
            assert np.max(np.abs(closed)) <= 1 + 1e-12


def test_alpha_closed_is_exact_zero_for_exact_phases():
    assert np.array_equal(alpha_closed(Phase.dyadic(5, 3), 3, np.array([1, 2, -3])), np.zeros(3))

    with pytest.raises(DomainError):
        alpha_closed(0.3, 3, 0)

    with pytest.raises(DomainError):
        alpha_closed(0.3, 3, 5)


def test_alpha_sqrd_bound():
    assert alpha_sqrd_bound(3, Fraction(0), 1) == pytest.approx(0.25)
    assert alpha_sqrd_bound(3, 0.05, 2) == pytest.approx(0.09765625)

    with pytest.raises(SingularityError):
        alpha_sqrd_bound(3, Fraction(1, 4), 2)

    with pytest.raises(DomainError):
        alpha_sqrd_bound(3, 0.05, 0)


def test_alpha_sqrd_bound_dominates():
    for phi in GRID:
        t = 6
        geometry = PhaseGeometry.of(phi, t)
        delta = geometry.scaled_delta_bf / 2**t
        for ell in geometry.ell_domain():
            magnitude = abs(alpha_closed(phi, t, int(ell))) ** 2
            assert magnitude <= alpha_sqrd_bound(t, delta, int(ell)) + 1e-12


def test_best_outcome_beats_four_over_pi_squared():
    for phi in GRID:
        for t in range(2, 9):
            geometry = PhaseGeometry.of(phi, t)
            assert analytic_distribution(phi, t)[geometry.best_outcome] > FOUR_OVER_PI_SQUARED + 1e-12


def test_failure_modes_agree_and_complement_success():
    t = 5
    for phi in GRID:
        dist = output_distribution(diagonal_instance(1, phi, t=t))
        for e in ErrorTolerance.domain(t):
            by_definition = fail_prob(dist, phi, e, FailMode.DEFINITION)
            by_sum = fail_prob(dist, phi, e, FailMode.SUM)

            assert by_definition == pytest.approx(by_sum, abs=1e-10)
            assert success_prob(dist, phi, e) + by_definition == pytest.approx(1.0, abs=1e-10)
            assert by_definition <= failure_bounds(e).tight + 1e-12


def test_exact_phase_never_fails():
    dist = analytic_distribution(Phase.dyadic(5, 3), 3)
    assert fail_prob(dist, Phase.dyadic(5, 3), 1) == pytest.approx(0.0, abs=1e-12)
    assert success_prob(dist, Phase.dyadic(5, 3), 1) == pytest.approx(1.0)


def test_fail_prob_rejects_e_outside_the_domain():
    dist = analytic_distribution(0.3, 3)
    with pytest.raises(DomainError):
        fail_prob(dist, 0.3, 3)

    with pytest.raises(DomainError):
        success_prob(dist, 0.3, 0)


def test_fail_ell_range():
    assert list(fail_ell_range(4, 2)) == [-7, -6, -5, -4, -3, 3, 4, 5, 6, 7, 8]


@pytest.mark.parametrize("e, tight, original", [(1, 0.75, None), (2, 0.3125, 0.5), (4, 0.140625, 1 / 6)])
def test_failure_bounds(e, tight, original):
    bounds = failure_bounds(e)

    assert bounds.tight == pytest.approx(tight)
    if original is None:
        assert bounds.original is None
    else:
        assert bounds.original == pytest.approx(original)


def test_original_bound_needs_e_two():
    with pytest.raises(DomainError):
        original_failure_bound(1)


def test_tight_bound_beats_original():
    for e in range(2, 8193):
        bounds = failure_bounds(e)
        assert bounds.tight < bounds.original


def test_lemma_form_bounds_the_failure_probability():
    t, phi = 6, Phase.rational(3, 10)
    dist = analytic_distribution(phi, t)
    delta = PhaseGeometry.of(phi, t).delta_bf
    for e in ErrorTolerance.domain(t):
        assert fail_prob(dist, phi, e) <= failure_bounds(e, t, delta).lemma_form + 1e-12


@pytest.mark.parametrize("n, epsilon, t", [(3, 0.25, 5), (1, 1.0, 3), (4, 0.1, 7), (2, 0.5, 4)])
def test_t_required(n, epsilon, t):
    assert t_required(PrecisionSpec(n, epsilon)) == t


def test_precision_spec_validation():
    with pytest.raises(DomainError):
        PrecisionSpec(0, 0.5)

    with pytest.raises(DomainError):
        PrecisionSpec(2, 0.0)


def test_e_value():
    assert e_value(5, 3) == 3
    assert e_value(3, 1) == 3

    with pytest.raises(DomainError):
        e_value(3, 3)


def test_precision_guarantee_on_a_non_exact_phase():
    spec = PrecisionSpec(4, 0.1)
    t = t_required(spec)
    dist = output_distribution(diagonal_instance(1, 0.3, t=t))

    assert radius_success_prob(dist, 0.3, spec.n) >= 1 - spec.epsilon
    assert success_prob(dist, 0.3, e_value(t, spec.n)) >= 1 - spec.epsilon


def test_within_precision_radius_is_exact_at_the_boundary():
    # 1/4 + 1/2^3 sits exactly on the radius around φ = 1/4 for n = 3
    assert within_precision_radius(Phase.dyadic(1, 2), 3, 3, 3)
    assert not within_precision_radius(Phase.dyadic(1, 2), 4, 7, 3)
    assert within_precision_radius(Phase.dyadic(1, 2), 3, np.arange(8), 3).tolist() == [False, True, True, True, False, False, False, False]


def test_trig_bounds_hold_with_equality_points():
    theta = np.concatenate([np.linspace(0, 2 * np.pi, 10000), [np.pi / 2, np.pi]])
    report = trig_bound_checks(theta)

    assert report.all_hold
    assert abs(1 - np.exp(1j * np.pi)) == 2.0
    assert np.sin(np.pi / 2) == 2 * (np.pi / 2) / np.pi


def test_trig_bounds_reject_negative_angles():
    with pytest.raises(DomainError):
        trig_bound_checks([-0.1, 0.2])

    with pytest.raises(DomainError):
        trig_bound_checks([])


def test_trig_bounds_use_each_domain():
    # past π only sin θ < θ applies
    assert trig_bound_checks([4.0, 10.0]).all_hold

    with pytest.raises(DomainError):
        trig_bound_checks([0.5, np.inf])


def test_large_denominators_stay_exact():
    phase = Phase.rational(3 * 10**17 + 1, 10**18 + 9)
    ms = np.arange(16)

    geometric = alpha_geom(phase, 4, ms)
    direct = alpha_m_mod_eval(phase, 4, ms)
    assert np.max(np.abs(geometric - direct)) < 1e-10

    tiny = Phase.parse("1/2^70")
    assert within_precision_radius(tiny, 3, 0, 3)
    assert not within_precision_radius(tiny, 3, 4, 3)
    assert abs(alpha_geom(tiny, 3, 0)) == pytest.approx(1.0, abs=1e-12)
