import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import optimize

from gpcasimir import PhysicalParams, bound_state, kappa_critical
from gpcasimir.errors import NoCriticalMode
from gpcasimir.meanfield import (energy_at_amplitude, first_order_correction, greens_function,
                                 meanfield_energy, meanfield_energy_closed_form, norm_constants,
                                 threshold_expansion, variational_mu)
from gpcasimir.models import Delta, PotentialHole, RobinDirichlet

# frozen oracles: mpmath.findroot on the bound-state conditions written out independently
ROBIN_Q = 1.9150080481545375  # q = kappa tanh(q L), kappa=2, L=1 (mpmath, 30 digits)
HOLE_EPS = 0.7503049565113696  # p cot(p R) = -q, p^2 + q^2 = U0, U0=6, R=1 (mpmath)

CRITICAL = [Delta(1.2), Delta(2.0), Delta(3.5), RobinDirichlet(2.0, 1.0), RobinDirichlet(1.3, 3.0),
            RobinDirichlet(1.05, 2.2), PotentialHole(6.0, 1.0), PotentialHole(12.0, 1.0),
            PotentialHole(3.0, 2.0)]


def _ode_residual(bs, xs):
    h = 1e-3
    f = bs.phi
    d2 = (-f(xs + 2 * h) + 16 * f(xs + h) - 30 * f(xs) + 16 * f(xs - h) - f(xs - 2 * h)) / (12 * h * h)
    cfg = bs.model
    V = np.where(xs < cfg.R, -cfg.U0, 0.0) if isinstance(cfg, PotentialHole) else 0.0
    return np.max(np.abs(-d2 + (bs.m ** 2 + V + bs.epsilon ** 2) * f(xs)))


def _grid(cfg):
    if isinstance(cfg, Delta):
        return np.concatenate([np.linspace(-6, -0.01, 100), np.linspace(0.01, 6, 100)])
    if isinstance(cfg, RobinDirichlet):
        return np.linspace(0.01, cfg.L - 0.01, 200)
    xs = np.linspace(0.01, 4 * cfg.R, 200)
    return xs[np.abs(xs - cfg.R) > 0.01]


def test_delta_closed_form(params):
    bs = bound_state(Delta(2.0), params)
    assert bs.epsilon == pytest.approx(math.sqrt(3), rel=1e-15)
    assert (bs.a, bs.b) == pytest.approx((0.5, 0.25), rel=1e-15)
    assert bs.mu ** 2 == pytest.approx(6.0, rel=1e-14)
    assert bs.energy == pytest.approx(-2.25, rel=1e-14)


def test_robin_root(params):
    bs = bound_state(RobinDirichlet(2.0, 1.0), params)
    assert bs.q == pytest.approx(ROBIN_Q, abs=1e-12)
    assert bs.epsilon == pytest.approx(math.sqrt(ROBIN_Q ** 2 - 1), abs=1e-9)
    assert bs.q == pytest.approx(2.0 * math.tanh(bs.q), abs=1e-12)


def test_hole_root(params):
    bs = bound_state(PotentialHole(6.0, 1.0), params)
    assert bs.epsilon == pytest.approx(HOLE_EPS, abs=1e-11)
    assert bs.q ** 2 == pytest.approx(6.0 - bs.p ** 2, rel=1e-14)


@pytest.mark.parametrize("cfg", CRITICAL, ids=repr)
def test_bound_state_solves_linear_problem(cfg, params):
    bs = bound_state(cfg, params)
    assert bs.epsilon > 0 and bs.a > 0 and bs.b > 0
    assert _ode_residual(bs, _grid(cfg)) < 1e-8 * max(1.0, np.max(np.abs(bs.phi(_grid(cfg)))))


@pytest.mark.parametrize("cfg", CRITICAL, ids=repr)
def test_norm_constants_closed_vs_quad(cfg, params):
    bs = bound_state(cfg, params)
    closed, quad = norm_constants(bs, "closed"), norm_constants(bs, "quad")
    np.testing.assert_allclose(closed, quad, rtol=1e-10)


def test_robin_norm_antiderivative(params):
    # int_0^L (e^{-qx} - e^{q(x-2L)})^2 dx expanded by hand
    bs = bound_state(RobinDirichlet(2.0, 1.0), params)
    q, L = bs.q, 1.0
    a = (1 - math.exp(-2 * q * L)) / (2 * q) - 2 * L * math.exp(-2 * q * L) \
        + (math.exp(-2 * q * L) - math.exp(-4 * q * L)) / (2 * q)
    assert bs.a == pytest.approx(a, rel=1e-12)


@pytest.mark.parametrize("cfg", CRITICAL, ids=repr)
def test_energy_closed_forms(cfg, params):
    bs = bound_state(cfg, params)
    assert meanfield_energy(bs) == pytest.approx(meanfield_energy_closed_form(bs), rel=1e-10)
    assert meanfield_energy(bs) < 0


@pytest.mark.parametrize("cfg", [Delta(0.9), Delta(1.0), RobinDirichlet(1.0, 2.0),
                                 RobinDirichlet(1.02, 2.2), PotentialHole(5.0, 1.0)], ids=repr)
def test_subcritical(cfg, params):
    with pytest.raises(NoCriticalMode):
        bound_state(cfg, params)


@given(st.floats(0.01, 10), st.floats(0.01, 10), st.floats(0.01, 5), st.floats(0.1, 5))
def test_mu_is_minimizer(a, b, eps, lam):
    mu = variational_mu(a, b, eps, lam)
    e0 = energy_at_amplitude(mu, a, b, eps, lam)
    assert energy_at_amplitude(mu * 1.001, a, b, eps, lam) > e0
    assert energy_at_amplitude(mu * 0.999, a, b, eps, lam) > e0


def test_mu_threshold():
    assert variational_mu(1.0, 1.0, 0.0, 1.0) == 0.0


@pytest.mark.parametrize("kappa", [1.0 + 1e-4, 1.0 + 1e-6])
def test_energy_vanishes_at_threshold(kappa, params):
    assert abs(bound_state(Delta(kappa), params).energy) < 10 * (kappa - 1) ** 2


def test_kappa_critical():
    assert kappa_critical(2.2, 1.0) == pytest.approx(1 / math.tanh(2.2), rel=1e-15)
    assert kappa_critical(2.2, 1.0) == pytest.approx(1.025, abs=1e-3)


# --- Green's function and first correction ----------------------------------


@pytest.mark.parametrize("cfg", [Delta(2.0), RobinDirichlet(2.0, 1.0), PotentialHole(6.0, 1.0)],
                         ids=repr)
@pytest.mark.parametrize("xp", [0.2, 0.37, 0.8])
def test_greens_jump(cfg, xp, params):
    G = greens_function(cfg, params)
    assert G.dx(xp, xp, +1) - G.dx(xp, xp, -1) == pytest.approx(-1.0, abs=1e-8)
    assert G(xp, 0.1) == pytest.approx(G(0.1, xp), rel=1e-14)


def test_correction_small_delta(params):
    bs = bound_state(Delta(1.05), params)
    dphi = first_order_correction(bs)
    xs = np.linspace(-8, 8, 41)
    ratio = np.max(np.abs(dphi(xs))) / np.max(np.abs(bs.phi_normalized(xs)))
    assert ratio < 0.1


def test_correction_unprojected_is_not_small(params):
    # the plain inverse sends phi_bs to -phi_bs/eps^2, so the literal form is O(1)
    bs = bound_state(Delta(1.05), params)
    dphi = first_order_correction(bs, projected=False)
    xs = np.linspace(-8, 8, 41)
    assert np.max(np.abs(dphi(xs))) / np.max(np.abs(bs.phi_normalized(xs))) > 1


def test_correction_threshold(params):
    bs = bound_state(Delta(2.0), params)
    bs.epsilon = 0.0
    np.testing.assert_array_equal(first_order_correction(bs)(np.linspace(-1, 1, 5)), 0.0)


def test_correction_linear_in_eps2(params):
    bs = bound_state(RobinDirichlet(1.3, 3.0), params)
    xs = np.array([0.3, 1.1, 2.0])
    base = first_order_correction(bs, projected=False)(xs)
    bs.epsilon *= math.sqrt(2.0)
    np.testing.assert_allclose(first_order_correction(bs, projected=False)(xs), 2 * base, rtol=1e-8)


# --- threshold coefficients -------------------------------------------------


def test_threshold_delta(params):
    assert threshold_expansion(Delta(1.0), params) == 2.0


def test_threshold_robin_long_interval(params):
    assert threshold_expansion(RobinDirichlet(1.0, 40.0), params) == pytest.approx(1.0, rel=1e-12)
    assert threshold_expansion(RobinDirichlet(1.0, 500.0), params) == 1.0


def _fit_c(energy, d):
    # E = -c d^2 + O(d^3): least squares in (d^2, d^3)
    A = np.stack([d ** 2, d ** 3], axis=1)
    return -np.linalg.lstsq(A, energy, rcond=None)[0][0]


@pytest.mark.parametrize("L", [1.0, 2.0, 3.0])
def test_threshold_robin_fit(L, params):
    kc = kappa_critical(L, 1.0)
    d = np.linspace(2e-4, 2e-3, 8)
    E = np.array([bound_state(RobinDirichlet(kc + x, L), params).energy for x in d])
    c = threshold_expansion(RobinDirichlet(kc, L), params)
    assert _fit_c(E, d) == pytest.approx(c, rel=1e-2)


def test_threshold_hole_fit(params):
    from gpcasimir import hole_threshold
    U0c = hole_threshold(1.0, 1.0)
    d = np.linspace(2e-4, 2e-3, 8)
    E = np.array([bound_state(PotentialHole(U0c + x, 1.0), params).energy for x in d])
    c = threshold_expansion(PotentialHole(U0c, 1.0), params)
    assert _fit_c(E, d) == pytest.approx(c, rel=1e-2)
