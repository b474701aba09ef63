"""Interval-supported Hankel weights: moments, u-transform, model reduction."""
import numpy as np
import pytest

from thdet import (CutProximityError, IntervalWeight, build_J_Lambda,
                   build_J_Theta, build_interval_Y, build_rational_power,
                   constant_symbol, det_ladder, interval_moment_table,
                   interval_moments, interval_ortho, interval_ortho_residual,
                   model_pair, ortho_poly, u_field, verify_interval_Y,
                   verify_u_jump, verify_ut_jump)

# Adaptive-quadrature value of integral_0.2^0.5 x^3 e^x dx.
EXP_M3 = 0.022915741794789685
# det(T_3 + H_3) and h_3 for phi = ((z-0.3)/(z-0.2))^0.3, w == 1 on
# [0.5, 0.7], r = 1, s = 0.
D3_S0 = 0.072447960237036993
H3_S0 = -0.60960680447717286
# Unimodularity report for the same phi against w == 1 on [0.5, 0.7], s = 1.
UNIMODULAR = 0.98506876755508999


def one(x):
    return np.ones_like(np.asarray(x, dtype=float))


@pytest.fixture(scope="module")
def phi():
    return build_rational_power(0.2, 0.3, 0.3)


@pytest.fixture(scope="module")
def iw1():
    return IntervalWeight(fun=one, a=0.5, b=0.7, s=1)


@pytest.fixture(scope="module")
def uf(iw1):
    return u_field(iw1)


def test_weight_validation():
    with pytest.raises(ValueError):
        IntervalWeight(fun=one, a=0.5, b=0.4, s=0)
    with pytest.raises(ValueError):
        IntervalWeight(fun=one, a=0.2, b=1.0, s=0)
    with pytest.raises(ValueError):
        IntervalWeight(fun=lambda x: np.where(x > 0.3, 1.0, np.inf),
                       a=0.2, b=0.5, s=0)


def test_moments_closed_form():
    iw = IntervalWeight(fun=one, a=0.2, b=0.5, s=0)
    k = np.arange(9)
    exact = (0.5 ** (k + 1) - 0.2 ** (k + 1)) / (k + 1)
    assert np.max(np.abs(interval_moments(iw, 8) - exact)) <= 1e-15
    iwx = IntervalWeight(fun=lambda x: x, a=0.2, b=0.5, s=0)
    assert abs(interval_moments(iwx, 0)[0] - exact[1]) <= 1e-16


def test_moment_exp_weight():
    iw = IntervalWeight(fun=np.exp, a=0.2, b=0.5, s=0)
    assert abs(interval_moments(iw, 3)[3] - EXP_M3) <= 1e-13


def test_u_closed_form(uf):
    val = uf.eval(2.0)
    assert abs(val - 2.0 * np.log(1.3 / 1.5)) <= 1e-13
    val = uf.eval(-1.0)
    assert abs(val + np.log(1.7 / 1.5)) <= 1e-13
    assert uf.eval(0.0) == 0.0


def test_u_reflected_decay(uf):
    ratio = abs(uf.eval_reflected(1e3)) / abs(uf.eval_reflected(1e4))
    assert abs(ratio - 10.0) <= 1.0


def test_u_doubling(uf):
    pts = np.array([2.0, 1.0 + 1.0j, 0.3, -0.5, 1e3, 0.2 - 0.4j])
    assert uf.doubling_residual(pts) <= 1e-12


def test_cut_refusal(uf):
    with pytest.raises(CutProximityError):
        uf.eval(0.6)
    with pytest.raises(CutProximityError):
        uf.eval(0.6 + 1e-9j)
    with pytest.raises(CutProximityError):
        uf.eval_reflected(1.0 / 0.6)
    assert np.isfinite(uf.eval(0.6 + 1e-4j))


def test_u_jump_plemelj(uf):
    x = np.array([0.55, 0.6, 0.65])
    assert verify_u_jump(uf, x) <= 1e-8
    assert verify_ut_jump(uf, 1.0 / x) <= 1e-9
    with pytest.raises(ValueError):
        verify_u_jump(uf, 0.4)
    with pytest.raises(ValueError):
        verify_ut_jump(uf, 1.2)


def test_u_jump_coarse_eps(uf):
    resid = verify_u_jump(uf, 0.6, epsilon_list=(1e-3, 5e-4, 2.5e-4))
    assert resid <= 1e-7


def test_interval_ortho_example(phi):
    iw = IntervalWeight(fun=one, a=0.5, b=0.7, s=0)
    mt = interval_moment_table(phi, iw, 4, 1)
    lad = det_ladder(mt, 5)
    res = ortho_poly(mt, 3)
    assert abs(lad[3] / D3_S0 - 1.0) <= 1e-13
    assert abs(res.h / H3_S0 - 1.0) <= 1e-13
    assert abs(res.h * lad[3] - lad[4]) <= 1e-10 * abs(lad[4])
    same = interval_ortho(phi, iw, 3, 1)
    assert np.max(np.abs(same.coeffs - res.coeffs)) <= 1e-15


def test_interval_ladder_and_residual(phi, iw1):
    for iw in (IntervalWeight(fun=one, a=0.5, b=0.7, s=0), iw1):
        mt = interval_moment_table(phi, iw, 12, 1)
        lad = det_ladder(mt, 13)
        for n in range(13):
            res = ortho_poly(mt, n)
            assert abs(res.h * lad[n] - lad[n + 1]) <= 1e-9 * abs(lad[n + 1])
            resid = interval_ortho_residual(res, phi, iw)
            assert resid <= 1e-10 * max(1.0, abs(res.h))


def test_toeplitz_dominated_limit():
    tiny = IntervalWeight(fun=lambda x: 1e-30 * one(x), a=0.5, b=0.7, s=1)
    res = interval_ortho(constant_symbol(1.0), tiny, 4, 0)
    assert res.coeffs[4] == 1.0
    assert np.max(np.abs(res.coeffs[:4])) <= 1e-14
    assert abs(res.h - 1.0) <= 1e-12


def test_model_pair_report(phi, uf):
    pair_eff, resid = model_pair(phi, uf)
    assert pair_eff.phi is phi
    assert abs(resid / UNIMODULAR - 1.0) <= 1e-9
    assert resid >= 0.01
    tiny = IntervalWeight(fun=lambda x: 1e-30 * one(x), a=0.5, b=0.7, s=1)
    _, resid0 = model_pair(phi, u_field(tiny))
    assert resid0 >= 0.99


def test_theta_matches_lambda(phi, uf):
    pair_eff, _ = model_pair(phi, uf)
    z = np.exp(2j * np.pi * (np.arange(16) + 0.31) / 16)
    gap = np.max(np.abs(build_J_Theta(phi, uf, z)
                        - build_J_Lambda(pair_eff, z)))
    assert gap <= 1e-12


def test_interval_Y_jumps(phi, iw1):
    with pytest.raises(ValueError):
        build_interval_Y(phi, iw1, 0, 1)
    for n, circle_tol, cut_tol in ((4, 1e-9, 1e-10), (10, 1e-8, 1e-9)):
        yf = build_interval_Y(phi, iw1, n, 1)
        out = verify_interval_Y(yf, phi, iw1)
        assert out["circle_jump"] <= circle_tol
        assert out["cut_jump"] <= cut_tol
