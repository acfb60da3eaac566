"""Vacuum energy of the fluctuations on the Robin-Dirichlet interval.

Fluctuations obey ``(-d^2 + Vf(x)) u = omega^2 u`` with ``Vf = 3 lam phi^2``
and the Robin/Dirichlet conditions; the mass enters only through the lower
limit ``xi = m`` of the imaginary-axis integral.  The mode-generating function
``Phi(i xi) = 2 ut(L)`` comes from integrating

    ut'' = -2 xi ut' + Vf ut,    ut(0) = 1,  ut'(0) = -kappa - xi,

which is ``u = exp(xi x) ut`` with the growing exponential stripped off.
The renormalized energy subtracts ``ln Phi_as = -(2 kappa - int Vf) / (2 xi)``
and, after integrating by parts and substituting ``xi = sqrt(m^2 + t^2)``,
reads ``E = (1/2pi) int_0^inf [ln Phi - ln Phi_as](xi(t)) dt``.
"""

from dataclasses import dataclass, field
import math
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize

from . import _quad
from .errors import CriticalWithoutCondensate, Singularity, UnstableSpectrum, DomainError
from .meanfield import kappa_critical

__all__ = [
    "FluctuationPotential",
    "ModeFunction",
    "VacuumEnergyReport",
    "mode_fn_subcritical",
    "mode_fn_analytic",
    "mode_fn_numeric",
    "mode_fn_numeric_with_derivative",
    "asym_subtraction",
    "heat_kernel_coefficients",
    "vacuum_energy_subcritical",
    "vacuum_energy_renormalized",
    "vacuum_energy_derivative_form",
    "stability_scan",
    "subtracted_log",
    "free_zero",
]

ODE_RTOL = 1e-10
ODE_ATOL = 1e-14
CUTOFF = 200.0
PANEL_ORDER = 20
CHECK_ORDER = 14


@dataclass
class FluctuationPotential:
    """``Vf(x) = 3 lam phi(x)^2`` on ``[0, L]`` with its integral cached."""

    func: Callable
    L: float
    source: str = "zero"  # "zero", "exact" or "approx"
    integral_V: float = field(default=math.nan)

    def __post_init__(self):
        if math.isnan(self.integral_V):
            if self.source == "zero":
                self.integral_V = 0.0
            else:
                self.integral_V = _quad.quad(lambda x: float(self.func(x)), 0.0, self.L, epsrel=1e-12)

    def __call__(self, x):
        return self.func(x)

    @classmethod
    def zero(cls, L):
        return cls(lambda x: 0.0 * np.asarray(x, dtype=float), L, "zero", 0.0)

    @classmethod
    def from_condensate(cls, sol):
        """Background of an exact Robin condensate."""
        lam = sol.lam
        return cls(lambda x: 3.0 * lam * sol.phi(x) ** 2, sol.model.L, "exact")

    @classmethod
    def from_bound_state(cls, bs):
        """Background of the variational approximation ``mu * phi_bs``."""
        lam, mu = bs.lam, bs.mu
        return cls(lambda x: 3.0 * lam * (mu * bs.phi(x)) ** 2, bs.model.L, "approx")


@dataclass
class ModeFunction:
    """Numeric mode-generating function with its heat-kernel data."""

    V: FluctuationPotential
    kappa: float

    @property
    def a0(self):
        return self.V.L

    a_half = 0.0

    @property
    def a1(self):
        return 2.0 * self.kappa - self.V.integral_V

    def __call__(self, xi):
        return mode_fn_numeric(xi, self.V, self.kappa, self.V.L)

    def ln_asymptotic(self, xi):
        return asym_subtraction(xi, self.V, self.kappa)


@dataclass
class VacuumEnergyReport:
    E0_ren: float
    parts: Optional[tuple] = None
    tail_estimate: float = 0.0
    quadrature_error: float = 0.0
    cutoff: float = math.inf
    tolerance: float = ODE_RTOL
    source: str = ""

    @property
    def error_estimate(self):
        return abs(self.tail_estimate) * 0.1 + self.quadrature_error


# --- analytic (free) mode function ----------------------------------------


def mode_fn_analytic(xi, kappa, L):
    """``Phi(i xi) = 2 cosh(xi L) - (2 kappa/xi) sinh(xi L)``."""
    xi = np.asarray(xi, dtype=float)
    return 2.0 * np.cosh(xi * L) - 2.0 * kappa / xi * np.sinh(xi * L)


def mode_fn_subcritical(xi, kappa, L):
    """``(Phi, ln Phi_1, ln Phi_2)`` for the free interval.

    ``ln Phi_1 = ln(1 - kappa/xi) + kappa/xi`` is ``L``-independent,
    ``ln Phi_2 = ln(1 + (xi+kappa)/(xi-kappa) e^{-2 xi L})`` carries the force.
    """
    if xi <= 0:
        raise DomainError("xi must be positive")
    if xi == kappa:
        raise Singularity("ln Phi_1 is singular at xi = kappa")
    phi = float(mode_fn_analytic(xi, kappa, L))
    r = kappa / xi
    ln1 = math.log(abs(1.0 - r)) + r
    ln2 = math.log(abs(1.0 + (xi + kappa) / (xi - kappa) * math.exp(-2.0 * xi * L)))
    return phi, ln1, ln2


def free_zero(kappa, L):
    """Positive zero ``xi*`` of ``Phi(i xi)`` for ``Vf = 0`` (``xi = kappa tanh(xi L)``), or None."""
    if kappa * L <= 1.0:
        return None
    f = lambda x: x - kappa * math.tanh(x * L)
    return optimize.brentq(f, 1e-12 * kappa + 1e-300, kappa, xtol=1e-15)


def _free_subtracted(xi, kappa, L):
    # ln(e^{-xi L} Phi) + kappa/xi, positive argument whenever no zero at xi
    xi = np.asarray(xi, dtype=float)
    w = (1.0 - kappa / xi) + (1.0 + kappa / xi) * np.exp(-2.0 * xi * L)
    return np.log(w) + kappa / xi


# --- numeric mode function ------------------------------------------------


def _rhs_factory(V, xi):
    n = xi.size

    def rhs(x, y):
        u, w = y[:n], y[n:]
        v = float(V(x))
        return np.concatenate([w, -2.0 * xi * w + v * u])

    return rhs


def _integrate(V, kappa, L, xi, rtol, atol, sensitivity=False):
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(xi <= 0):
        raise DomainError("xi must be positive")
    n = xi.size
    if not sensitivity:
        y0 = np.concatenate([np.ones(n), -kappa - xi])
        rhs = _rhs_factory(V, xi)
    else:
        # (ut, ut', d ut/d xi, (d ut/d xi)')
        y0 = np.concatenate([np.ones(n), -kappa - xi, np.zeros(n), -np.ones(n)])

        def rhs(x, y):
            u, w, s, sw = y[:n], y[n:2 * n], y[2 * n:3 * n], y[3 * n:]
            v = float(V(x))
            return np.concatenate([w, -2.0 * xi * w + v * u, sw, -2.0 * xi * sw - 2.0 * w + v * s])

    sol = integrate.solve_ivp(rhs, (0.0, L), y0, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise ArithmeticError(f"mode-function integration failed: {sol.message} "
                              f"(nfev={sol.nfev}, steps={sol.t.size})")
    return sol.y[:, -1], n


def mode_fn_numeric(xi, V, kappa, L=None, rtol=ODE_RTOL, atol=ODE_ATOL):
    """``Phi(i xi) = 2 ut(L)`` for every entry of ``xi`` (one batched integration)."""
    L = V.L if L is None else L
    y, n = _integrate(V, kappa, L, xi, rtol, atol)
    out = 2.0 * y[:n]
    return float(out[0]) if np.ndim(xi) == 0 else out


def mode_fn_numeric_with_derivative(xi, V, kappa, L=None, rtol=ODE_RTOL, atol=ODE_ATOL):
    """``(Phi, dPhi/dxi)`` from the variational (sensitivity) equations."""
    L = V.L if L is None else L
    y, n = _integrate(V, kappa, L, xi, rtol, atol, sensitivity=True)
    return 2.0 * y[:n], 2.0 * y[2 * n:3 * n]


def heat_kernel_coefficients(V, kappa):
    """``(a0, a_1/2, a1) = (L, 0, 2 kappa - int Vf)``."""
    return V.L, 0.0, 2.0 * kappa - V.integral_V


def asym_subtraction(xi, V, kappa):
    """``ln Phi_as = -a1 / (2 xi)``."""
    a1 = 2.0 * kappa - V.integral_V
    return -a1 / (2.0 * np.asarray(xi, dtype=float))


def subtracted_log(xi, V, kappa, rtol=ODE_RTOL):
    """``ln Phi(i xi) - ln Phi_as(xi)``; raises if ``Phi`` is not positive."""
    phi = mode_fn_numeric(np.atleast_1d(xi), V, kappa, rtol=rtol)
    if np.any(phi <= 0):
        bad = np.atleast_1d(xi)[phi <= 0]
        raise UnstableSpectrum(f"Phi(i xi) <= 0 at xi = {bad[:3]}", bad)
    out = np.log(phi) - asym_subtraction(np.atleast_1d(xi), V, kappa)
    return float(out[0]) if np.ndim(xi) == 0 else out


# --- stability ------------------------------------------------------------


def stability_scan(V, params, kappa, L=None, cutoff=CUTOFF, points=500):
    """Zeros of ``Phi(i xi)`` on ``[m (1 + 1e-9), cutoff * m]``; empty for a stable spectrum."""
    m = params.m
    L = V.L if L is None else L
    grid = np.geomspace(m * (1 + 1e-9), cutoff * m, points)
    vals = mode_fn_numeric(grid, V, kappa, L)
    zeros = []
    for i in range(points - 1):
        if vals[i] == 0.0:
            zeros.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0:
            f = lambda x: mode_fn_numeric(x, V, kappa, L)
            zeros.append(optimize.brentq(f, grid[i], grid[i + 1], xtol=1e-12))
    return zeros


# --- energies -------------------------------------------------------------


def _panel_edges(T, m):
    edges = [0.0]
    e = 0.25 * m
    while e < T:
        edges.append(e)
        e *= 2.0
    edges.append(T)
    return np.array(edges)


def _tail_integrals(T, m, Lam):
    # int_T^inf (m^2 + t^2)^(-n/2) dt for n = 2, 3, 4, with Lam = sqrt(m^2 + T^2)
    at = 0.5 * math.pi - math.atan(T / m)
    return np.array([at / m, (1.0 - T / Lam) / m ** 2, at / (2 * m ** 3) - T / (2 * m * m * Lam * Lam)])


def _tail(xi_nodes, f_nodes, T, m, cutoff_xi):
    # least-squares f ~ c2/xi^2 + c3/xi^3 + c4/xi^4 on the last decade
    sel = xi_nodes >= cutoff_xi / 10.0
    x = xi_nodes[sel]
    A = np.stack([x ** -2, x ** -3, x ** -4], axis=1)
    coef, *_ = np.linalg.lstsq(A, f_nodes[sel], rcond=None)
    tail = float(np.dot(coef, _tail_integrals(T, m, cutoff_xi)))
    return tail / (2.0 * math.pi), coef


def vacuum_energy_renormalized(V, params, kappa, L=None, cutoff=CUTOFF, rtol=ODE_RTOL,
                               check_stability=True, order=PANEL_ORDER):
    """Renormalized vacuum energy ``E0_ren`` of the fluctuations.

    ``cutoff`` is ``Lambda/m``; the region beyond is estimated from the fitted
    ``xi^-2`` decay of the subtracted logarithm and added to the result.

    Raises
    ------
    UnstableSpectrum
        If ``Phi(i xi)`` has a zero on ``[m, inf)``.
    """
    m = params.m
    L = V.L if L is None else L
    if check_stability:
        zeros = stability_scan(V, params, kappa, L, cutoff=cutoff)
        if zeros:
            raise UnstableSpectrum(f"Phi(i xi) vanishes at xi = {zeros}", zeros)
    Lam = cutoff * m
    T = math.sqrt(Lam * Lam - m * m)
    edges = _panel_edges(T, m)
    t1, w1 = _quad.gauss_panels(edges, order)
    t2, w2 = _quad.gauss_panels(edges, CHECK_ORDER)
    t_all = np.concatenate([t1, t2])
    xi_all = np.sqrt(m * m + t_all ** 2)
    phi = mode_fn_numeric(xi_all, V, kappa, L, rtol=rtol)
    if np.any(phi <= 0):
        bad = xi_all[phi <= 0]
        raise UnstableSpectrum(f"Phi(i xi) <= 0 at xi = {bad[:3]}", bad)
    f = np.log(phi) - asym_subtraction(xi_all, V, kappa)
    f1, f2 = f[: t1.size], f[t1.size:]
    I1 = float(np.dot(w1, f1)) / (2.0 * math.pi)
    I2 = float(np.dot(w2, f2)) / (2.0 * math.pi)
    tail, _ = _tail(xi_all[: t1.size], f1, T, m, Lam)
    return VacuumEnergyReport(I1 + tail, None, tail, abs(I1 - I2) + 1e-2 * abs(tail),
                              cutoff=Lam, tolerance=rtol, source=V.source)


def vacuum_energy_derivative_form(V, params, kappa, L=None, cutoff=CUTOFF, rtol=ODE_RTOL):
    """Same energy before integrating by parts, with ``d ln Phi/d xi`` from sensitivities.

    ``E = -(1/2pi) int_m^inf sqrt(xi^2 - m^2) d/dxi [ln Phi - ln Phi_as] dxi``.
    """
    m = params.m
    L = V.L if L is None else L
    Lam = cutoff * m
    T = math.sqrt(Lam * Lam - m * m)
    t, w = _quad.gauss_panels(_panel_edges(T, m), PANEL_ORDER)
    xi = np.sqrt(m * m + t * t)
    phi, dphi = mode_fn_numeric_with_derivative(xi, V, kappa, L, rtol=rtol)
    a1 = 2.0 * kappa - V.integral_V
    g = dphi / phi - a1 / (2.0 * xi * xi)
    # d xi = t dt / xi
    integrand = t * t / xi * g
    I = -float(np.dot(w, integrand)) / (2.0 * math.pi)
    # g = d/dxi (c2/xi^2 + c3/xi^3 + c4/xi^4); fit, then integrate the antiderivative form
    sel = xi >= Lam / 10.0
    x = xi[sel]
    A = np.stack([-2 * x ** -3, -3 * x ** -4, -4 * x ** -5], axis=1)
    coef, *_ = np.linalg.lstsq(A, g[sel], rcond=None)
    # -int_Lam^inf sqrt(xi^2-m^2) g dxi = boundary term + int xi/sqrt(..) f dxi
    f_Lam = float(np.dot(coef, [Lam ** -2, Lam ** -3, Lam ** -4]))
    tail = (T * f_Lam + float(np.dot(coef, _tail_integrals(T, m, Lam)))) / (2.0 * math.pi)
    return VacuumEnergyReport(I + tail, None, tail, 0.0, cutoff=Lam, tolerance=rtol, source=V.source)


def vacuum_energy_subcritical(params, kappa, L):
    """Vacuum energy without condensate from the closed-form mode function.

    For ``kappa < m`` the split into the ``L``-independent ``E0^(1)`` and the
    force-carrying ``E0^(2)`` is reported in ``parts``.  For
    ``m <= kappa < kappa_c(L)`` the split has a log singularity inside the
    integration range, so only the total is computed.

    Raises
    ------
    CriticalWithoutCondensate
        If ``Phi(i xi)`` has its zero at ``xi >= m``.
    """
    m = params.m
    xs = free_zero(kappa, L)
    if xs is not None and xs >= m:
        raise CriticalWithoutCondensate(
            f"kappa={kappa} >= kappa_c(L={L})={kappa_critical(L, m):.12g}: "
            "a condensate must be included")

    def tmap(g):
        return lambda t: g(math.sqrt(m * m + t * t))

    def q(g):
        val, err = integrate.quad(tmap(g), 0.0, math.inf, epsabs=1e-13, epsrel=1e-12, limit=500)
        return val / (2.0 * math.pi), err / (2.0 * math.pi)

    if kappa < m:
        ln1 = lambda xi: math.log1p(-kappa / xi) + kappa / xi
        ln2 = lambda xi: math.log1p((xi + kappa) / (xi - kappa) * math.exp(-2.0 * xi * L))
        E1, e1 = q(ln1)
        E2, e2 = q(ln2)
        return VacuumEnergyReport(E1 + E2, (E1, E2), 0.0, e1 + e2, source="zero")
    E, e = q(lambda xi: float(_free_subtracted(xi, kappa, L)))
    return VacuumEnergyReport(E, None, 0.0, e, source="zero")
