import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from totaldom import ode
from totaldom.ode import DomainError, StopReason, drift_expanded, drift_raw, integrate


def sample_domain(d, eps, k, seed):
    """Uniform points of the box z_0 in (eps, 1+eps), z_j in (-eps/(d-j), 1+eps)."""
    rng = np.random.default_rng(seed)
    lo = np.array([eps] + [-eps / (d - j) for j in range(1, d)])
    return rng.uniform(lo, 1 + eps, size=(k, d))


def rel_err(a, b):
    return np.max(np.abs(a - b)) / np.max(np.abs(a))


@pytest.mark.parametrize("d", range(3, 9))
def test_initial_point_values(d):
    z = np.zeros(d)
    z[0] = 1
    for f in (drift_raw(z), drift_expanded(z)):
        assert f[d] == pytest.approx(2)
        assert f[1] == pytest.approx(2 * (d - 1))
        assert f[0] == pytest.approx(-2 * d)
        assert np.allclose(f[2:d], 0)


def test_phi_definition():
    z = np.array([0.5, 0.2, 0.1, 0.05, 0.02])
    d = 5
    p0 = ode.phi(z, 0)
    assert p0[0] == pytest.approx(-5 * 0.5)
    assert p0[3] == pytest.approx(3 * 0.1 - 2 * 0.05)
    p1 = ode.phi(z, 1)
    assert p1[0] == 0
    assert p1[1] == pytest.approx(-(d - 1) * 0.2)
    assert p1[2] == pytest.approx(p0[2])
    assert ode.s_k(z, 0) == pytest.approx(sum((d - i) * z[i] for i in range(d)))


@pytest.mark.parametrize("d", [3, 4, 5, 8])
def test_dual_forms_agree(d):
    for z in sample_domain(d, 0.05, 1000, seed=d):
        assert rel_err(drift_raw(z), drift_expanded(z)) <= 1e-9


def test_dual_forms_agree_hand_checked_d3():
    # d = 3, z = (1/2, 1/4, 1/8): s0 = 3/2 + 1/2 + 1/8 = 17/8, s1 = 5/8.
    # Only the effect terms were hand-summed; both evaluators must hit it.
    z = np.array([0.5, 0.25, 0.125])
    a, b = drift_raw(z), drift_expanded(z)
    assert np.allclose(a, b, rtol=1e-12, atol=0)
    assert a[3] == pytest.approx(5 / 17 + 2 * 3 * 0.5 / (17 / 8))


def test_fast_integrator_drift_matches_expanded():
    for d in (3, 5, 8):
        fun = ode._fast_drift(d)
        for z in sample_domain(d, 0.05, 200, seed=100 + d):
            y = np.append(z, 0.3)
            assert np.allclose(fun(y), drift_expanded(z), rtol=1e-12, atol=1e-13)


def test_expanded_finite_near_exhaustion():
    d = 5
    z = np.array([1e-9, 0.3, 0.2, 0.1, 0.05])
    r = ode.s_k(z, 1) / ode.s_k(z, 0)
    assert 1 - r < 1e-7
    f = drift_expanded(z)
    assert np.all(np.isfinite(f))


def test_domain_errors():
    with pytest.raises(DomainError):
        drift_expanded(np.zeros(4))
    with pytest.raises(DomainError):
        drift_raw(np.array([-1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        drift_expanded(np.array([1.0, 0.0]))


@settings(max_examples=300, deadline=None)
@given(
    d=st.integers(3, 8),
    data=st.data(),
)
def test_bounds_on_nonnegative_orthant(d, data):
    z = data.draw(arrays(np.float64, d, elements=st.floats(0, 1, allow_nan=False)))
    if ode.s_k(z, 0) <= 1e-6:
        return
    f = drift_expanded(z)
    assert 1 - 1e-12 <= f[d] <= 2 + 1e-12
    assert f[:d].sum() <= -1 + 1e-9


def test_sum_of_drifts_on_d3_box():
    for z in sample_domain(3, 0.1, 1000, seed=7):
        assert drift_expanded(z)[:3].sum() <= -1


@pytest.mark.parametrize("d", [3, 4, 5, 8])
def test_trajectory_structure(d):
    sol = integrate(d)
    assert sol.stop_reason is StopReason.Z0_CROSSED_EPS
    assert 0 < sol.x_star <= 1 + 1e-6
    zs = sol.states[:, :d]
    assert zs.min() >= -1e-9 and zs.max() <= 1 + 1e-9
    assert np.all(np.diff(zs[:, 0]) < 0)
    assert np.all(np.diff(sol.states[:, d]) > 0)
    assert sol.states[-1, 0] == pytest.approx(sol.eps_stop, abs=1e-10)
    for row in sol.states:
        f = drift_expanded(row[:d])
        assert 1 - 1e-9 <= f[d] <= 2 + 1e-9
        assert f[:d].sum() <= -1 + 1e-9


def test_integrate_rejects_bad_arguments():
    with pytest.raises(ValueError):
        integrate(2)
    with pytest.raises(ValueError):
        integrate(3, eps_stop=0.01)
    with pytest.raises(ValueError):
        integrate(3, step=0)


def test_integrate_reports_max_x():
    sol = integrate(5, max_x=0.05, step=1e-3)
    assert sol.stop_reason is StopReason.MAX_X
    assert sol.x_star == pytest.approx(0.05, abs=1e-3)


def test_integrate_reports_domain_exit():
    def bad(z):
        f = drift_expanded(z)
        f[1] = -50.0  # drives z_1 negative immediately
        return f

    sol = integrate(3, drift=bad, step=1e-3)
    assert sol.stop_reason is StopReason.DOMAIN_EXIT


def test_raw_form_integration_matches_expanded():
    a = integrate(4, step=1e-3)
    b = integrate(4, step=1e-3, drift=drift_raw)
    assert a.q_at_x_star == pytest.approx(b.q_at_x_star, abs=1e-10)


def test_step_halving_d5():
    a = integrate(5)
    b = integrate(5, step=0.5e-5)
    assert abs(a.q_at_x_star - b.q_at_x_star) <= 1e-7


def test_round_up():
    assert ode.round_up(0.35720805) == 0.3573
    assert ode.round_up(0.3572) == 0.3572
    assert ode.round_up(0.47611) == 0.4762


def test_result_dict_and_interpolation():
    sol = integrate(3, step=1e-4)
    d = sol.to_dict()
    assert set(d) == {"d", "eps_stop", "step", "x_star", "q_x_star", "q_rounded_up_4dp", "stop_reason"}
    assert np.allclose(sol.z_at(0.0), [1, 0, 0])


@pytest.mark.parametrize("d", range(3, 9))
def test_initial_derivatives(d):
    rep = ode.initial_derivative_check(d)
    assert all(rep["positive"].values())
    for j, slope in rep["slopes"].items():
        assert abs(slope - j) <= 0.1
    assert rep["z1_prime_0"] == pytest.approx(2 * (d - 1), rel=0.01)


def test_initial_derivative_d3_z2_slope():
    rep = ode.initial_derivative_check(3)
    assert 1.9 <= rep["slopes"][2] <= 2.1
