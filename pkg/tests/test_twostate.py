import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from adiabatic_lab.errors import DomainError
from adiabatic_lab.numkit import hermitian_eig
from adiabatic_lab.twostate import (
    TwoStateModel,
    bessel_series_a,
    delta_e_closed,
    delta_e_series,
    evolve_two_state,
    exact_eigensystem,
    fb_identity_check,
    gtilde_table,
    gtilde_values,
    limit_state,
    phase_f,
    phase_split,
)

# closed-form shift and normalization at delta=1, x=0.5
SHIFT = -0.11803398874989485  # 1 - sqrt(1.25)
NORM = 0.9732489894677302  # 1/sqrt(1 + SHIFT**2/0.25)
# adaptive quadrature of shift(u)/u over [0, 0.5] (scipy.integrate.quad,
# epsabs=1e-14); the live oracle below reproduces it
F_A = -0.06069287469097528

STD = TwoStateModel(mu=0.0, delta=1.0, x=0.5, eps=0.25)


def quad_f_a(delta, x):
    """Independent route to the divergent-phase coefficient:
    integrate shift(u)/u from 0 to x."""
    val, _ = quad(
        lambda u: delta_e_closed(delta, u) / u, 0.0, x, epsabs=1e-14, epsrel=1e-14
    )
    return val


# ---------------------------------------------------------------------------
# model and exact eigensystem


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(mu=0.0, delta=0.0, x=0.5, eps=0.25),
        dict(mu=0.0, delta=1.0, x=0.0, eps=0.25),
        dict(mu=0.0, delta=1.0, x=0.5, eps=0.0),
        dict(mu=0.0, delta=-1.0, x=0.5, eps=0.25),
    ],
)
def test_model_rejects_bad_parameters(kwargs):
    with pytest.raises(DomainError):
        TwoStateModel(**kwargs)


def test_exact_eigensystem_closed_forms():
    es = exact_eigensystem(STD)
    assert es.delta_e == pytest.approx(SHIFT, abs=1e-15)
    assert es.e0 == pytest.approx(-1.1180339887498949, abs=1e-15)
    assert es.e1 == pytest.approx(1.1180339887498949, abs=1e-15)
    assert es.norm_n == pytest.approx(NORM, abs=1e-15)
    assert es.delta_e <= 0 and es.e0 < es.e1
    assert np.linalg.norm(es.psi0) == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.norm(es.psi1) == pytest.approx(1.0, abs=1e-12)
    assert abs(np.vdot(es.psi0, es.psi1)) < 1e-12


def test_exact_eigensystem_weak_coupling_limit():
    es = exact_eigensystem(TwoStateModel(mu=0.3, delta=1.0, x=1e-10, eps=0.25))
    np.testing.assert_allclose(es.psi0.real, [1.0, 0.0], atol=1e-9)
    assert es.e0 == pytest.approx(0.3 - 1.0, abs=1e-12)


@pytest.mark.parametrize("mu,delta,x", [(0.0, 1.0, 0.5), (0.7, 2.0, 1.3), (-1.0, 0.5, 2.0)])
def test_exact_eigensystem_against_eigensolver(mu, delta, x):
    m = TwoStateModel(mu=mu, delta=delta, x=x, eps=0.1)
    es = exact_eigensystem(m)
    w, v = hermitian_eig(m.hamiltonian())
    scale = np.linalg.norm(m.hamiltonian())
    np.testing.assert_allclose(w, [es.e0, es.e1], atol=1e-10 * scale)
    for vec, col in ((es.psi0, v[:, 0]), (es.psi1, v[:, 1])):
        assert abs(abs(np.vdot(vec, col)) - 1.0) < 1e-10


# ---------------------------------------------------------------------------
# recursion coefficients


def test_gtilde_low_order_values():
    g = gtilde_values(1.0, 0.0, 4)
    np.testing.assert_allclose(g, [-0.5, 0.125, -0.0625, 0.0390625], atol=1e-15)


def test_gtilde_first_entry_and_slope():
    table = gtilde_table(1.0, 3, 2)
    assert abs(table.gn(1).value - (-0.5)) < 1e-14
    assert table.slopes()[0] == pytest.approx(-0.25j, abs=1e-15)  # d/deps of -i/(2i+eps)
    assert np.abs(table.values().imag).max() < 1e-12


def test_gtilde_slopes_match_finite_differences():
    delta, h = 1.3, 1e-5
    table = gtilde_table(delta, 8, 1)
    fd = (gtilde_values(delta, h, 8) - gtilde_values(delta, -h, 8)) / (2 * h)
    np.testing.assert_allclose(table.slopes(), fd, atol=1e-8)


def test_gtilde_curvature_matches_finite_differences():
    delta, h = 1.0, 1e-3
    table = gtilde_table(delta, 6, 2)
    c2 = np.array([j.coeffs[2] for j in table.entries])
    fd = (
        gtilde_values(delta, h, 6)
        - 2 * gtilde_values(delta, 0.0, 6)
        + gtilde_values(delta, -h, 6)
    ) / (h * h)
    np.testing.assert_allclose(2 * c2, fd, rtol=1e-4, atol=1e-10)


def test_gtilde_values_match_series_coefficients_of_closed_form():
    # coefficient of x**(2n) in delta - sqrt(delta**2 + x**2) is
    # -binom(1/2, n) * delta**(1 - 2n), computed in exact rational arithmetic
    for delta in (1.0, 2.0):
        g = gtilde_values(delta, 0.0, 10).real
        for n in range(1, 11):
            binom = Fraction(1)
            for k in range(n):
                binom *= Fraction(1, 2) - k
            binom /= math.factorial(n)
            expected = -float(binom) * delta ** (1 - 2 * n)
            assert g[n - 1] == pytest.approx(expected, rel=1e-10)


# ---------------------------------------------------------------------------
# level-shift series


def test_delta_e_closed_values():
    assert delta_e_closed(1.0, 0.0) == 0.0
    assert delta_e_closed(3.0, 4.0) == pytest.approx(-2.0, abs=1e-15)  # 3 - 5
    assert delta_e_closed(1.0, 0.5) == pytest.approx(SHIFT, abs=1e-15)


def test_delta_e_series_converges_to_closed_form():
    partial, value = delta_e_series(1.0, 0.5, 30)
    assert value == pytest.approx(SHIFT, abs=1e-10)
    errors = np.abs(partial - delta_e_closed(1.0, 0.5))
    above_noise = errors > 1e-13
    assert np.all(np.diff(errors[above_noise]) < 0)  # monotone approach
    assert errors[above_noise].size >= 10
    assert partial[0] == pytest.approx(-0.5**2 / 2, abs=1e-15)  # leading term


def test_delta_e_series_satisfies_quadratic():
    for delta, x in ((1.0, 0.5), (1.0, 0.8), (2.0, 1.2)):
        _, value = delta_e_series(delta, x, 60)
        assert abs(value * value - 2 * delta * value - x * x) <= 1e-9


def test_delta_e_series_domain_error():
    with pytest.raises(DomainError, match="radius"):
        delta_e_series(1.0, 1.0, 10)
    with pytest.raises(DomainError, match="radius"):
        delta_e_series(3.0, 4.0, 10)


# ---------------------------------------------------------------------------
# divergent amplitude series


def test_bessel_first_term_closed_form():
    res = bessel_series_a(STD, -0.7, 1)
    x, eps, delta, t = STD.x, STD.eps, STD.delta, -0.7
    expected = -((x * math.exp(eps * t)) ** 2 / eps) / (2 * (eps + 2j * delta))
    first_term = res.value - 1.0
    assert first_term == pytest.approx(expected, abs=1e-15)


def test_bessel_series_trivial_at_vanishing_coupling():
    m = TwoStateModel(mu=0.0, delta=1.0, x=1e-30, eps=0.25)
    res = bessel_series_a(m, 0.0, 20)
    assert res.value == pytest.approx(1.0, abs=1e-45)
    assert np.all(res.term_magnitudes < 1e-50)


def test_bessel_series_agrees_with_ode():
    traj = evolve_two_state(STD, 0.0, 1e-10, start_threshold=1e-9)
    res = bessel_series_a(STD, 0.0, 40)
    assert res.converged
    assert abs(res.value - traj.final_state[0]) < 1e-6


def test_bessel_series_overflow_flagged_not_raised():
    m = TwoStateModel(mu=0.0, delta=1.0, x=0.5, eps=1e-4)
    res = bessel_series_a(m, 0.0, 500)
    assert not res.converged
    assert res.term_magnitudes.max() > 1e200  # blew up before convergence
    assert res.term_magnitudes.size < 500  # stopped early


def test_bessel_divergence_locality():
    # halving the switching rate doubles the worst term while the ODE
    # amplitude stays bounded
    prev = None
    for eps in (0.5, 0.25, 0.125, 0.0625):
        m = TwoStateModel(mu=0.0, delta=1.0, x=0.5, eps=eps)
        worst = bessel_series_a(m, 0.0, 60).term_magnitudes.max()
        if prev is not None:
            assert worst > prev
        prev = worst
        a0 = abs(evolve_two_state(m, 0.0, 1e-10).final_state[0])
        assert a0 <= 1.0 + 1e-9


# ---------------------------------------------------------------------------
# phase-function route


def test_phase_f_trivial_at_vanishing_coupling():
    m = TwoStateModel(mu=0.0, delta=1.0, x=1e-30, eps=0.25)
    assert abs(phase_f(m, 0.0, 10)) < 1e-55


def test_phase_f_matches_bessel_series():
    a_rec = cmath.exp(-1j * phase_f(STD, 0.0, 30) / STD.eps)
    res = bessel_series_a(STD, 0.0, 60, stop_below=1e-12)
    assert abs(a_rec - res.value) < 1e-6


def test_phase_f_reconstruction_satisfies_amplitude_ode():
    # a'' + (2i*delta - eps) a' + x^2 e^{2 eps t} a = 0 under central differences
    h = 1e-4
    t = -0.4

    def a_of(tt):
        return cmath.exp(-1j * phase_f(STD, tt, 30) / STD.eps)

    a_m, a_0, a_p = a_of(t - h), a_of(t), a_of(t + h)
    d1 = (a_p - a_m) / (2 * h)
    d2 = (a_p - 2 * a_0 + a_m) / (h * h)
    residual = d2 + (2j * STD.delta - STD.eps) * d1 + (
        STD.x**2 * math.exp(2 * STD.eps * t)
    ) * a_0
    assert abs(residual) < 1e-6


def test_three_way_agreement_grid():
    for x in (0.25, 0.5):
        for eps in (0.1, 0.25, 0.5):
            m = TwoStateModel(mu=0.0, delta=1.0, x=x, eps=eps)
            for t in (-2.0, -1.0, 0.0):
                a_ode = evolve_two_state(m, t, 1e-10).final_state[0]
                a_ser = bessel_series_a(m, t, 60, stop_below=1e-12).value
                a_rec = cmath.exp(-1j * phase_f(m, t, 60) / eps)
                assert abs(a_ode - a_ser) < 1e-6
                assert abs(a_ode - a_rec) < 1e-6
                assert abs(a_ser - a_rec) < 1e-6


# ---------------------------------------------------------------------------
# phase split


def test_phase_split_divergent_coefficient_against_quadrature():
    split = phase_split(STD, 30)
    assert split.f_a == pytest.approx(F_A, abs=1e-12)
    assert split.f_a == pytest.approx(quad_f_a(1.0, 0.5), abs=1e-10)


def test_phase_split_log_magnitude_matches_normalization():
    split = phase_split(STD, 30)
    assert math.exp(split.f_b) == pytest.approx(NORM, abs=1e-10)
    assert 0.0 < math.exp(split.f_b) <= 1.0
    assert split.delta_e_a == pytest.approx(SHIFT, abs=1e-10)


def test_phase_split_small_coupling_log_magnitude():
    # leading behavior -x**2/(8 delta**2)
    m = TwoStateModel(mu=0.0, delta=1.0, x=0.01, eps=0.25)
    split = phase_split(m, 10)
    assert split.f_b == pytest.approx(-(0.01**2) / 8.0, rel=1e-3)


def test_phase_split_reality_residues():
    for x in (0.1, 0.3, 0.5, 0.7):
        split = phase_split(TwoStateModel(mu=0.0, delta=1.0, x=x, eps=0.25), 40)
        assert split.max_imag_residue <= 1e-10


def test_phase_split_remainder_scales_linearly_with_rate():
    split_1 = phase_split(TwoStateModel(mu=0.0, delta=1.0, x=0.5, eps=0.2), 30)
    split_2 = phase_split(TwoStateModel(mu=0.0, delta=1.0, x=0.5, eps=0.1), 30)
    assert split_2.f_c != 0.0
    ratio = split_1.f_c / split_2.f_c
    assert 1.0 < ratio < 4.0  # linear within a factor of 2


def test_phase_split_domain():
    with pytest.raises(DomainError):
        phase_split(TwoStateModel(mu=0.0, delta=1.0, x=1.5, eps=0.25), 10)


# ---------------------------------------------------------------------------
# normalization identity


def test_fb_identity_on_grid():
    for x in (0.1, 0.3, 0.5, 0.7):
        res = fb_identity_check(1.0, x, 40)
        assert res.residual <= 1e-8
        assert res.shift_quadratic_residual <= 1e-9
        assert res.rate_balance_residual <= 1e-6


def test_fb_identity_weak_coupling():
    res = fb_identity_check(1.0, 1e-6, 10)
    assert res.lhs == pytest.approx(1.0, abs=1e-11)
    assert res.rhs == pytest.approx(1.0, abs=1e-11)


def test_fb_identity_rejects_outside_radius():
    with pytest.raises(DomainError):
        fb_identity_check(3.0, 4.0, 10)


def test_normalization_identity_across_grid():
    for x in (0.1, 0.3, 0.5, 0.7):
        split = phase_split(TwoStateModel(mu=0.0, delta=1.0, x=x, eps=0.25), 40)
        de = delta_e_closed(1.0, x)
        assert math.exp(split.f_b) * math.sqrt(1 + (de / x) ** 2) == pytest.approx(
            1.0, abs=1e-8
        )


# ---------------------------------------------------------------------------
# ODE evolution


def test_evolve_zero_generator_keeps_initial_state():
    # the x = 0 limit of the interaction-picture pair: frozen state
    from adiabatic_lab.numkit import ode_evolve

    rhs = lambda t, y: 0.0 * y
    traj = ode_evolve(rhs, np.array([1.0, 0.0], dtype=complex), -40.0, 0.0, 1e-10)
    np.testing.assert_allclose(traj.states, [[1.0, 0.0]] * traj.times.size)


def test_evolve_weak_coupling_stays_near_initial_state():
    m = TwoStateModel(mu=0.0, delta=1.0, x=1e-3, eps=0.25)
    traj = evolve_two_state(m, 0.0, 1e-10)
    assert abs(traj.final_state[0] - 1.0) < 1e-5  # depletion is O(x**2)
    assert abs(traj.final_state[1]) < 1e-3  # excitation is O(x)


def test_evolve_unitarity_throughout():
    traj = evolve_two_state(STD, 0.0, 1e-10)
    assert np.abs(traj.norms() - 1.0).max() <= 1e-8


def test_evolve_start_threshold_validation():
    with pytest.raises(DomainError):
        evolve_two_state(STD, 0.0, 1e-10, start_threshold=1e-3)
    with pytest.raises(DomainError):
        evolve_two_state(STD, -1e9, 1e-10)  # start not before t_end


def test_evolve_amplitude_converges_to_normalization():
    errors = []
    for eps in (0.2, 0.1, 0.05):
        m = TwoStateModel(mu=0.0, delta=1.0, x=0.5, eps=eps)
        a0 = abs(evolve_two_state(m, 0.0, 1e-10, start_threshold=1e-9).final_state[0])
        errors.append(abs(a0 - NORM))
    assert errors[0] > errors[1] > errors[2]


def test_evolve_component_ratio_approaches_eigenvector():
    m = TwoStateModel(mu=0.0, delta=1.0, x=0.5, eps=0.05)
    final = evolve_two_state(m, 0.0, 1e-10).final_state
    assert abs(final[1] / final[0]) == pytest.approx(abs(SHIFT) / 0.5, rel=1e-2)


# ---------------------------------------------------------------------------
# assembled limit state


def test_limit_state_is_exact_ground_state_at_t0():
    res = limit_state(STD, 0.0, 30)
    es = exact_eigensystem(STD)
    np.testing.assert_allclose(res.state, es.psi0, atol=1e-9)
    h = STD.hamiltonian()
    np.testing.assert_allclose(h @ res.state, es.e0 * res.state, atol=1e-8)


def test_limit_state_weak_coupling_phase_only():
    m = TwoStateModel(mu=0.5, delta=1.0, x=1e-5, eps=0.25)
    t = 2.0
    res = limit_state(m, t, 10)
    expected = cmath.exp(-1j * (m.mu - m.delta) * t) * np.array([1.0, 0.0])
    np.testing.assert_allclose(res.state, expected, atol=1e-4)


def test_limit_state_reports_divergent_coefficient():
    res = limit_state(STD, 0.0, 30)
    assert res.divergent_coefficient == pytest.approx(F_A, abs=1e-12)
    assert res.divergent_coefficient == pytest.approx(quad_f_a(1.0, 0.5), abs=1e-10)
    assert res.secular_phase == 0.0


def test_limit_state_secular_phase():
    res = limit_state(STD, 3.0, 30)
    assert res.secular_phase == pytest.approx(3.0 * SHIFT, abs=1e-9)
