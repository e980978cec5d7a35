import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mziqfi import (
    InterferometerConfig,
    NotAtPurePoint,
    PureStateRegion,
    Regime,
    param_derivatives,
    qfim,
    qfim_mixed,
    qfim_pure_limit,
    qfim_pure_point,
    reduce_to_mode_b,
    two_mode_qfi,
)
from mziqfi.gaussian import symplectic_eigenvalue_closed, williamson_closed_form, output_squeezing
from mziqfi.precision import n_precision_value

H = 1e-5


def _fd(f, cfg, k):
    shift = (lambda c, x: c.with_phi(c.phi + x)) if k == 0 else (lambda c, x: c.with_theta(c.theta + x))
    return (np.asarray(f(shift(cfg, H))) - np.asarray(f(shift(cfg, -H)))) / (2 * H)


def _close(a, b, rel=1e-6):
    a, b = np.asarray(a), np.asarray(b)
    return np.max(np.abs(a - b)) <= rel * max(np.max(np.abs(b)), 1e-12)


def test_derivatives_match_finite_differences():
    cfg = InterferometerConfig.standard(1.2, 0.5, 0.8, 0.3)
    der = param_derivatives(cfg)
    for k in range(2):
        assert _close(der.d_sigma[k], _fd(lambda c: reduce_to_mode_b(c).sigma, cfg, k))
        assert _close(der.d_mean[k], _fd(lambda c: reduce_to_mode_b(c).mean_vector, cfg, k))
        assert _close(der.d_s[k], _fd(lambda c: williamson_closed_form(c).s_matrix, cfg, k))
        for l in range(2):
            assert _close(der.d2_sigma[k, l], _fd(lambda c: param_derivatives(c).d_sigma[l], cfg, k))
    assert _close(der.d_lambda[1], _fd(symplectic_eigenvalue_closed, cfg, 1))
    assert _close(der.d_r_out[1], _fd(output_squeezing, cfg, 1))


def test_lambda_derivatives():
    der = param_derivatives(InterferometerConfig.standard(2, 1.0, math.pi / 2, 0.4))
    assert der.d_lambda[0] == 0
    assert der.d_lambda[1] == pytest.approx(0, abs=1e-15)


def test_j_matches_definition():
    der = param_derivatives(InterferometerConfig.standard(2, 0.6, 1.1, 0.7))
    s = der.s_matrix
    for k, j in enumerate((der.j_phi, der.j_theta)):
        ds = der.d_s[k]
        assert j == pytest.approx(np.conj(s[0, 0]) * ds[0, 1] - s[0, 1] * np.conj(ds[0, 0]))


@pytest.mark.parametrize("alpha_sq, r", [(100, 1.0), (1e3, 0.5), (2.0, 0.0)])
def test_black_fringe_values(alpha_sq, r):
    cfg = InterferometerConfig.standard(math.sqrt(alpha_sq), r, 0.0)
    assert qfim_pure_point(cfg).q_theta_theta == pytest.approx(alpha_sq * math.exp(2 * r), rel=1e-13)
    assert qfim_pure_limit(cfg).q_theta_theta == pytest.approx(two_mode_qfi(alpha_sq, r), rel=1e-13)


def test_frozen_black_fringe_numbers():
    # 100 e^2 and 100 e^2 + sinh^2(1), mpmath
    cfg = InterferometerConfig.standard(10.0, 1.0, 0.0)
    res = qfim(cfg)
    assert res.regime is Regime.PURE_POINT
    assert res.q_theta_theta == pytest.approx(738.905609893065023, rel=1e-14)
    assert res.limit.regime is Regime.PURE_LIMIT
    assert res.limit.q_theta_theta == pytest.approx(740.286707738606838, rel=1e-14)


def test_no_jump_without_squeezing():
    cfg = InterferometerConfig.standard(3.0, 0.0, 0.0)
    assert qfim_pure_limit(cfg).q_theta_theta == pytest.approx(qfim_pure_point(cfg).q_theta_theta)
    assert qfim_pure_point(cfg).q_theta_theta == pytest.approx(9)


@pytest.mark.parametrize("theta", [0.3, 1.0, 2.0, 3.0])
def test_no_squeezing_gives_sql(theta):
    res = qfim(InterferometerConfig.standard(10.0, 0.0, theta))
    assert res.regime is Regime.PURE_LIMIT
    assert res.q_theta_theta == pytest.approx(100 * math.cos(theta / 2) ** 2, rel=1e-13)


def test_dispatch():
    assert qfim(InterferometerConfig.standard(1, 0.5, 0.5)).regime is Regime.MIXED
    near = qfim(InterferometerConfig.standard(1, 0.5, 1e-12))
    assert near.regime is Regime.PURE_LIMIT and near.limit is None
    assert near.q_theta_theta == pytest.approx(two_mode_qfi(1, 0.5), rel=1e-6)
    white = qfim(InterferometerConfig.standard(10, 1.0, 3.14159265358979))
    assert white.regime is Regime.PURE_POINT


def test_branch_preconditions():
    with pytest.raises(PureStateRegion):
        qfim_mixed(InterferometerConfig.standard(1, 0.5, 1e-6))
    with pytest.raises(PureStateRegion):
        qfim_mixed(InterferometerConfig.standard(1, 0.0, 1.0))
    with pytest.raises(NotAtPurePoint):
        qfim_pure_point(InterferometerConfig.standard(1, 0.5, 0.5))
    with pytest.raises(NotAtPurePoint):
        qfim_pure_limit(InterferometerConfig.standard(1, 0.5, 0.5))


configs = st.builds(
    InterferometerConfig.standard,
    st.floats(0, 30),
    st.floats(0, 1.5),
    st.floats(-math.pi, math.pi),
    st.floats(-math.pi, math.pi),
)


@given(configs)
def test_decoupled_and_psd(cfg):
    res = qfim(cfg)
    assert abs(res.q_phi_theta) <= 1e-10
    assert res.q_phi_phi >= 0 and res.q_theta_theta >= -1e-12
    assert res.q_phi_phi * res.q_theta_theta - res.q_phi_theta**2 >= -1e-9


@pytest.mark.parametrize("alpha_sq, r", [(1.44, 0.5), (100, 1.0), (1e3, 1.439)])
def test_bounded_by_two_mode_and_above_counting(alpha_sq, r):
    f0 = two_mode_qfi(alpha_sq, r)
    for theta in np.linspace(1e-3, math.pi - 1e-3, 400):
        cfg = InterferometerConfig.standard(math.sqrt(alpha_sq), r, theta)
        q = qfim(cfg).q_theta_theta
        assert q <= f0 * (1 + 1e-9)
        assert q >= n_precision_value(cfg) - 1e-9 * f0


@pytest.mark.parametrize("r", [0.2, 0.5, 1.0])
def test_jump_size(r):
    cfg = InterferometerConfig.standard(5.0, r, 0.0)
    jump = qfim_pure_limit(cfg).q_theta_theta - qfim_pure_point(cfg).q_theta_theta
    assert jump == pytest.approx(math.sinh(r) ** 2, abs=1e-9)


def test_white_fringe_limit():
    r = 0.7
    res = qfim(InterferometerConfig.standard(3.0, r, math.pi))
    assert res.q_theta_theta == pytest.approx(0, abs=1e-12)
    assert res.limit.q_theta_theta == pytest.approx(math.sinh(r) ** 2, rel=1e-12)
    near = qfim_mixed(InterferometerConfig.standard(3.0, r, math.pi - 1e-3)).q_theta_theta
    assert near == pytest.approx(math.sinh(r) ** 2, rel=1e-5)


def test_mixed_converges_to_limit_quadratically():
    cfg = InterferometerConfig.standard(10.0, 1.0, 0.0)
    target = qfim_pure_limit(cfg).q_theta_theta
    errs = [abs(qfim_mixed(cfg.with_theta(t)).q_theta_theta - target) for t in (1e-2, 5e-3, 2.5e-3)]
    assert errs[0] / errs[1] == pytest.approx(4, rel=0.01)
    assert errs[1] / errs[2] == pytest.approx(4, rel=0.01)


def test_two_mode_qfi():
    assert two_mode_qfi(0, 0.4) == pytest.approx(math.sinh(0.4) ** 2)
    assert two_mode_qfi(7.0, 0) == 7.0
    assert two_mode_qfi(1.44, 0.5) == pytest.approx(4.18586615038864703, rel=1e-14)
    with pytest.raises(ValueError):
        two_mode_qfi(-1, 0)
