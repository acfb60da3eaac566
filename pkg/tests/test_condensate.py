import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gpcasimir import bound_state, kappa_critical
from gpcasimir.condensate import (CondensateSolution, KGap, boundary_residuals,
                                  condensate_energy, gp_residual, hole_matching_residual,
                                  hole_threshold, near_threshold_modulus,
                                  robin_matching_residual, robin_thresholds, solve, solve_delta,
                                  solve_hole, solve_robin)
from gpcasimir.ellipj import EllipticModulus, jacobi_sc, sc_derivative
from gpcasimir.errors import NoCriticalMode, NoCriticalRegime, NoSolution, PoleProximity
from gpcasimir.models import Delta, PotentialHole, RobinDirichlet

# frozen values from mpmath at 30 digits
L0, L1, L2 = 0.5493061443340548, 0.5553603672697958, 1.6660811018093873  # kappa=2, m=1
HOLE_P, HOLE_U0C = 2.0287578381104342, 5.1158583656945228  # tan p = -p, R=m=1

SOLUTIONS = [Delta(1.1), Delta(2.0), Delta(4.0),
             RobinDirichlet(2.0, 0.552), RobinDirichlet(2.0, 0.554), RobinDirichlet(2.0, 1.7),
             RobinDirichlet(2.0, 2.2), RobinDirichlet(2.0, 3.0), RobinDirichlet(1.3, 3.0),
             RobinDirichlet(1.05, 2.2), PotentialHole(5.2, 1.0), PotentialHole(6.0, 1.0),
             PotentialHole(12.0, 1.0), PotentialHole(20.0, 1.0)]


# --- thresholds -------------------------------------------------------------


def test_robin_thresholds():
    th = robin_thresholds(2.0, 1.0)
    assert (th.L0, th.L1, th.L2) == pytest.approx((L0, L1, L2), abs=1e-13)
    assert (th.L0, th.L1, th.L2) == pytest.approx((0.549306, 0.55536, 1.66608), abs=1e-5)
    assert th.has_gap and th.L0 < th.L1 < th.L2


def test_robin_thresholds_no_gap():
    th = robin_thresholds(1.3, 1.0)
    assert th.L1 is None and th.L2 is None and not th.has_gap


@pytest.mark.parametrize("kappa", [0.5, 1.0])
def test_no_critical_regime(kappa):
    with pytest.raises(NoCriticalRegime):
        robin_thresholds(kappa, 1.0)


def test_kappa_c_filled():
    assert robin_thresholds(2.0, 1.0, L=2.2).kappa_c == pytest.approx(1 / math.tanh(2.2), rel=1e-15)


@given(st.floats(1.01, 20.0), st.floats(0.2, 3.0))
def test_L0_is_bound_state_threshold(ratio, m):
    # at L0 the critical kappa equals kappa
    kappa = ratio * m
    th = robin_thresholds(kappa, m)
    assert kappa_critical(th.L0, m) == pytest.approx(kappa, rel=1e-11)


def test_hole_threshold():
    U0 = hole_threshold(1.0, 1.0)
    assert U0 == pytest.approx(HOLE_U0C, rel=1e-13)
    p = math.sqrt(U0 - 1.0)
    assert abs(math.tan(p) + p) < 1e-10


@pytest.mark.parametrize("R", [0.5, 2.0, 10.0])
def test_hole_threshold_defining_equation(R):
    U0 = hole_threshold(R, 1.0)
    p = math.sqrt(U0 - 1.0)
    assert abs(math.tan(p * R) + p) < 1e-10 * max(1.0, p)


def test_hole_threshold_wide_limit():
    vals = [hole_threshold(R, 1.0) for R in (5.0, 20.0, 100.0)]
    assert all(v > 1.0 for v in vals) and vals[0] > vals[1] > vals[2]
    assert vals[-1] - 1.0 < 1e-3


# --- delta ------------------------------------------------------------------


def test_delta_solution(params):
    sol = solve_delta(Delta(2.0), params)
    assert sol.x1 == pytest.approx(math.atanh(0.5), rel=1e-15)
    assert abs(boundary_residuals(sol)["jump"]) < 1e-12
    assert sol.energy == pytest.approx(-8 / 3, rel=1e-9)


def test_delta_threshold_limit(params):
    sol = solve_delta(Delta(1.0 + 1e-10), params)
    assert sol.x1 > 10 and abs(sol.phi(0.0)) < 1e-4


def test_delta_subcritical(params):
    with pytest.raises(NoCriticalMode):
        solve_delta(Delta(1.0), params)


@given(st.floats(1.01, 5.0))
@settings(max_examples=25)
def test_delta_energy_closed_form(kappa):
    from gpcasimir import PhysicalParams
    sol = solve_delta(Delta(kappa), PhysicalParams())
    assert sol.energy == pytest.approx(-2 * (kappa + 2) * (kappa - 1) ** 2 / 3, rel=1e-9)


# --- Robin matching ---------------------------------------------------------


def test_residual_sign_change_in_window(params):
    for L in np.linspace(L0, L1, 6)[1:-1]:
        cfg = RobinDirichlet(2.0, L)
        lo = robin_matching_residual(1e-6, cfg, params)
        hi = robin_matching_residual(1 - 1e-9, cfg, params)
        assert lo * hi < 0


def test_residual_zero_at_L0_k0(params):
    assert abs(robin_matching_residual(0.0, RobinDirichlet(2.0, L0), params)) < 1e-12


def test_residual_zero_at_L1_k1(params):
    assert abs(robin_matching_residual(1.0, RobinDirichlet(2.0, L1), params)) < 1e-12


def test_unreduced_residual_vanishes_at_k0(params):
    assert robin_matching_residual(0.0, RobinDirichlet(2.0, 1.0), params, reduced=False) == 0.0


def test_residual_pole(params):
    # x = 0 on the first sc pole: beta L = K(k')
    k = 0.5
    beta = 1.0 / math.sqrt(1.25)
    from gpcasimir.ellipj import complete_K
    L = complete_K(EllipticModulus.from_complement(k)) / beta
    with pytest.raises(PoleProximity):
        robin_matching_residual(k, RobinDirichlet(2.0, L), params)


@pytest.mark.parametrize("L, k", [(0.552, 0.38912), (0.554, 0.60417), (1.7, 0.75226),
                                  (2.2, 0.29703), (3.0, 0.11889)])
def test_robin_roots(L, k, params):
    sol = solve_robin(RobinDirichlet(2.0, L), params)
    assert isinstance(sol, CondensateSolution)
    assert sol.k == pytest.approx(k, abs=1e-5)
    assert abs(boundary_residuals(sol)["robin"]) < 1e-10


@pytest.mark.parametrize("L", [0.56, 0.8, 1.0, 1.3, 1.6])
def test_kgap(L, params):
    gap = solve_robin(RobinDirichlet(2.0, L), params)
    assert isinstance(gap, KGap)
    assert set(gap.rejected_roots) == set(gap.diagnostics["roots"])


def test_robin_subcritical(params):
    with pytest.raises(NoCriticalMode):
        solve_robin(RobinDirichlet(1.0, 2.2), params)


def test_near_threshold_modulus_small_L():
    for L in (0.05, 0.02):
        a = near_threshold_modulus(RobinDirichlet(2.0, L), _p())
        assert a / (-(6.4 / 16) * L ** 3) == pytest.approx(1.0, abs=1e-3)


def _p():
    from gpcasimir import PhysicalParams
    return PhysicalParams()


def _kappa_for(k, L):
    # the reduced matching condition is linear in kappa
    beta = 1.0 / math.sqrt(1 + k * k)
    mod = EllipticModulus.from_complement(k)
    z0 = -beta * L
    return -beta * sc_derivative(z0, mod) / jacobi_sc(z0, mod)


@pytest.mark.parametrize("L", [1.0, 2.0])
def test_near_threshold_modulus_trend(L, params):
    alpha = near_threshold_modulus(RobinDirichlet(2.0, L), params)
    kc = kappa_critical(L, 1.0)
    devs = []
    for k in (0.05, 0.02, 0.01):
        kappa = _kappa_for(k, L)
        assert solve_robin(RobinDirichlet(kappa, L), params).k == pytest.approx(k, abs=1e-9)
        # magnitudes only: the printed sign of alpha is opposite to (kappa - kappa_c) / k^2
        devs.append(abs((kappa - kc) - abs(alpha) * k * k) / (k * k))
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-3 * abs(alpha)
    assert (kappa - kc) > 0 > alpha


# --- hole -------------------------------------------------------------------


def test_hole_solution(params):
    cfg = PotentialHole(6.0, 1.0)
    sol = solve_hole(cfg, params)
    assert 0 < sol.k < 1
    assert abs(hole_matching_residual(sol.k, cfg, params)) < 1e-10
    res = boundary_residuals(sol)
    assert abs(res["continuity"]) < 1e-10 and abs(res["derivative"]) < 1e-10
    phiR = sol.phi(1.0)
    assert 1.0 / math.tanh(1.0 + sol.x1) ** 2 == pytest.approx(1 + 0.5 * phiR ** 2, rel=1e-10)


def test_hole_k_monotone(params):
    ks = [solve_hole(PotentialHole(U, 1.0), params).k for U in (5.2, 6.0, 8.0, 12.0, 20.0)]
    assert np.all(np.diff(ks) > 0)
    np.testing.assert_allclose(ks, [0.0966, 0.303, 0.509, 0.697, 0.852], atol=1e-3)


def test_hole_threshold_limit(params):
    sol = solve_hole(PotentialHole(HOLE_U0C + 1e-6, 1.0), params)
    assert sol.k < 1e-2 and abs(sol.energy) < 1e-10


def test_hole_subcritical(params):
    with pytest.raises(NoCriticalMode):
        solve_hole(PotentialHole(5.0, 1.0), params)


def test_hole_no_solution(params, monkeypatch):
    import gpcasimir.condensate as mod
    monkeypatch.setattr(mod, "_hole_admissible", lambda k, cfg, m: False)
    with pytest.raises(NoSolution) as exc:
        solve_hole(PotentialHole(6.0, 1.0), params)
    assert exc.value.trace


# --- generic properties -----------------------------------------------------


@pytest.mark.parametrize("cfg", SOLUTIONS, ids=repr)
def test_gp_residual(cfg, params):
    sol = solve(cfg, params)
    assert gp_residual(sol, 400) < 1e-6


@pytest.mark.parametrize("cfg", SOLUTIONS, ids=repr)
def test_boundary_conditions(cfg, params):
    sol = solve(cfg, params)
    for name, r in boundary_residuals(sol).items():
        assert abs(r) < 1e-10, name


@pytest.mark.parametrize("cfg", SOLUTIONS, ids=repr)
def test_energy_below_meanfield(cfg, params):
    sol = solve(cfg, params)
    assert sol.energy <= bound_state(cfg, params).energy < 0


def test_delta_residual_small_step(params):
    assert gp_residual(solve(Delta(2.0), params), 400, h=1e-4) < 1e-6


def test_zero_field_residual():
    from gpcasimir import PhysicalParams
    sol = CondensateSolution(RobinDirichlet(2.0, 1.0), 1.0, 1.0, "robin_sc", k=0.0)
    assert gp_residual(sol) == 0.0
    assert condensate_energy(sol) == 0.0


def test_robin_window_energy_close_to_meanfield(params):
    cfg = RobinDirichlet(2.0, 0.552)
    e_c, e_b = solve(cfg, params).energy, bound_state(cfg, params).energy
    assert e_c <= e_b and abs(e_c - e_b) < 1e-2 * abs(e_b)


def test_energy_quadrature_robin_symmetric_profile(params):
    sol = solve(RobinDirichlet(2.0, 2.2), params)
    xs = np.linspace(0, 2.2, 20001)
    trap = -0.25 * np.trapezoid(sol.phi(xs) ** 4, xs)
    assert sol.energy == pytest.approx(trap, rel=1e-7)
