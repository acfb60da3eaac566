"""Exact condensate solutions of the static real GP equation.

``(-d^2 + m^2 + V + lam phi0^2) phi0 = 0`` is solved by Jacobi functions in
all three models:

* delta potential: ``phi0 = sqrt(2/lam) m / sinh(m (|x| + x1))``;
* Robin-Dirichlet interval: ``phi0 = A sc(beta (x - L), sqrt(1 - k^2))`` with
  ``A = sqrt(2/lam) m k / sqrt(1 + k^2)`` and ``beta = m / sqrt(1 + k^2)``;
* potential hole: ``A sn(beta x, k)`` inside the well with
  ``A = sqrt(2/lam) P k / sqrt(1+k^2)``, ``beta = P / sqrt(1+k^2)``,
  ``P = sqrt(U0 - m^2)``, glued at ``x = R`` to the tail
  ``sqrt(2/lam) m / sinh(m (x + x1))``.

The matching conditions fix the free modulus ``k`` (and shift ``x1``).
"""

from dataclasses import dataclass, field
import math
from typing import Optional

import numpy as np
from scipy import optimize

from . import _quad
from .ellipj import EllipticModulus, complete_K, jacobi_triple, jacobi_sc, sc_derivative
from .errors import NoCriticalMode, NoCriticalRegime, NoSolution, DomainError
from .meanfield import kappa_critical
from .models import Delta, RobinDirichlet, PotentialHole, potential_eval, domain

__all__ = [
    "CondensateSolution",
    "KGap",
    "RobinThresholds",
    "robin_thresholds",
    "hole_threshold",
    "solve_delta",
    "solve_robin",
    "solve_hole",
    "solve",
    "robin_matching_residual",
    "hole_matching_residual",
    "condensate_energy",
    "gp_residual",
    "boundary_residuals",
    "near_threshold_modulus",
    "K_SCAN_POINTS",
]

K_SCAN_POINTS = 2000
K_TOL = 1e-12


@dataclass
class CondensateSolution:
    model: object
    m: float
    lam: float
    kind: str  # "delta_ds", "robin_sc" or "hole_sn_tail"
    k: Optional[float] = None
    x1: Optional[float] = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        cfg, m, lam = self.model, self.m, self.lam
        self._c = math.sqrt(2.0 / lam)
        if self.kind == "robin_sc":
            k = self.k
            s = math.sqrt(1.0 + k * k)
            self._amp = self._c * m * k / s
            self._beta = m / s
            self._mod = EllipticModulus.from_complement(k)
        elif self.kind == "hole_sn_tail":
            k = self.k
            s = math.sqrt(1.0 + k * k)
            P = math.sqrt(cfg.U0 - m * m)
            self._amp = self._c * P * k / s
            self._beta = P / s
            self._mod = EllipticModulus(k)
            self._tail_sign = math.copysign(1.0, self._inner(cfg.R)[0]) if k > 0 else 1.0

    def _inner(self, x):
        t = jacobi_triple(self._beta * np.asarray(x, dtype=float), self._mod)
        return self._amp * t.sn, self._amp * self._beta * t.cn * t.dn

    def _tail(self, x):
        m = self.m
        y = m * (np.asarray(x, dtype=float) + self.x1)
        v = self._tail_sign * self._c * m / np.sinh(y)
        return v, -m * v / np.tanh(y)

    def _eval(self, x):
        x = np.asarray(x, dtype=float)
        cfg, m = self.model, self.m
        if self.kind == "delta_ds":
            y = m * (np.abs(x) + self.x1)
            v = self._c * m / np.sinh(y)
            return v, np.where(x < 0, 1.0, -1.0) * m * v / np.tanh(y)
        if self.kind == "robin_sc":
            if self.k == 0.0:
                z = np.zeros_like(x)
                return z, z
            z = self._beta * (x - cfg.L)
            return (self._amp * jacobi_sc(z, self._mod, pole_tol=0.0),
                    self._amp * self._beta * sc_derivative(z, self._mod, pole_tol=0.0))
        if self.k == 0.0:
            z = np.zeros_like(x)
            return z, z
        vi, di = self._inner(np.minimum(x, cfg.R))
        vt, dt = self._tail(np.maximum(x, cfg.R))
        inside = x < cfg.R
        return np.where(inside, vi, vt), np.where(inside, di, dt)

    def phi(self, x):
        v = self._eval(x)[0]
        return float(v) if np.ndim(x) == 0 else v

    def dphi(self, x):
        """Derivative; at matching points the right-sided value."""
        d = self._eval(x)[1]
        return float(d) if np.ndim(x) == 0 else d

    def dphi_left(self, x):
        """Left-sided derivative (differs from :meth:`dphi` only at matching points)."""
        cfg = self.model
        if self.kind == "delta_ds" and x == 0.0:
            y = self.m * self.x1
            v = self._c * self.m / math.sinh(y)
            return self.m * v / math.tanh(y)
        if self.kind == "hole_sn_tail" and x == cfg.R and self.k > 0:
            return float(self._inner(x)[1])
        return self.dphi(x)

    @property
    def energy(self):
        return condensate_energy(self)


@dataclass
class KGap:
    """No admissible modulus solves the Robin matching condition."""

    model: object
    rejected_roots: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RobinThresholds:
    kappa: float
    m: float
    L0: float
    L1: Optional[float]
    L2: Optional[float]
    kappa_c: Optional[float] = None

    @property
    def has_gap(self):
        return self.L1 is not None


# --- thresholds -----------------------------------------------------------


def robin_thresholds(kappa, m, L=None):
    """Characteristic lengths of the Robin model at fixed ``kappa``.

    ``L0`` is where the bound state reaches ``eps = 0``; ``L1`` and ``L2``
    bound the k-gap and exist only for ``kappa >= sqrt(2) m``.  If ``L`` is
    given, the critical ``kappa_c(L)`` is filled in as well.
    """
    if kappa <= m:
        raise NoCriticalRegime(f"kappa={kappa} <= m={m}: no critical length exists")
    L0 = math.atanh(m / kappa) / m
    r = math.sqrt(2.0) * m / kappa
    if r <= 1.0:
        s = math.asin(r)
        L1 = s / (math.sqrt(2.0) * m)
        L2 = (math.pi - s) / (math.sqrt(2.0) * m)
    else:
        L1 = L2 = None
    kc = kappa_critical(L, m) if L is not None else None
    return RobinThresholds(kappa, m, L0, L1, L2, kc)


def hole_threshold(R, m):
    """Smallest depth ``U0`` making the hole critical, ``tan(pR) = -p/m``, ``p^2 = U0 - m^2``."""
    if not (R > 0 and m > 0):
        raise DomainError("R and m must be positive")
    f = lambda p: m * math.sin(p * R) + p * math.cos(p * R)
    lo, hi = 0.5 * math.pi / R, math.pi / R
    p = optimize.brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return m * m + p * p


def near_threshold_modulus(cfg, params):
    """Leading coefficient of ``kappa - kappa_c = alpha_tilde k^2`` (Robin)."""
    if not isinstance(cfg, RobinDirichlet):
        raise DomainError("near-threshold modulus relation is defined for the Robin model")
    m, x = params.m, params.m * cfg.L
    return -m * (12 * x - 8 * math.sinh(2 * x) + math.sinh(4 * x)) / (16 * math.sinh(x) ** 2)


# --- delta model ----------------------------------------------------------


def solve_delta(cfg, params):
    m = params.m
    if cfg.kappa <= m:
        raise NoCriticalMode(f"delta model needs kappa > m, got {cfg.kappa}")
    x1 = math.atanh(m / cfg.kappa) / m
    return CondensateSolution(cfg, m, params.lam, "delta_ds", x1=x1)


# --- Robin model ----------------------------------------------------------


def _robin_parts(k, L, m):
    s = math.sqrt(1.0 + k * k)
    beta = m / s
    mod = EllipticModulus.from_complement(k)
    return beta, mod, jacobi_triple(-beta * L, mod)


def _robin_smooth(k, cfg, m):
    # cn^2 * (kappa sc + beta dn/cn^2): same zeros as the residual, no poles
    beta, _, t = _robin_parts(k, cfg.L, m)
    return cfg.kappa * t.sn * t.cn + beta * t.dn


def robin_matching_residual(k, cfg, params, reduced=True):
    """Left-hand side ``kappa phi0(0) + phi0'(0)`` of the Robin condition.

    With ``reduced=True`` the amplitude ``A`` is divided out, which leaves a
    nontrivial function at ``k = 0`` (the bound-state threshold condition).

    Raises
    ------
    PoleProximity
        If ``x = 0`` sits on a pole of ``sc``.
    """
    k = float(k)
    if not 0.0 <= k <= 1.0:
        raise DomainError(f"k must lie in [0, 1], got {k}")
    m = params.m
    s = math.sqrt(1.0 + k * k)
    beta = m / s
    mod = EllipticModulus.from_complement(k)
    z0 = -beta * cfg.L
    r = cfg.kappa * jacobi_sc(z0, mod) + beta * sc_derivative(z0, mod)
    if reduced:
        return r
    return math.sqrt(2.0 / params.lam) * m * k / s * r


def _has_interior_pole(k, L, m):
    if k == 0.0:
        return False
    beta = m / math.sqrt(1.0 + k * k)
    # first pole of sc(beta (x - L)) left of x = L sits at beta (x - L) = -K
    return beta * L >= complete_K(EllipticModulus.from_complement(k))


def _scan_roots(f, lo, hi, n, tol):
    grid = np.linspace(lo, hi, n)
    vals = np.array([f(g) for g in grid])
    roots = []
    for i in range(n - 1):
        a, b, fa, fb = grid[i], grid[i + 1], vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(a)
        elif fa * fb < 0:
            roots.append(optimize.bisect(f, a, b, xtol=tol, maxiter=200))
    if vals[-1] == 0.0:
        roots.append(grid[-1])
    return roots, grid, vals


def solve_robin(cfg, params, n_scan=K_SCAN_POINTS):
    """Condensate on the Robin-Dirichlet interval, or :class:`KGap`.

    Every sign change of the matching condition on ``k in [0, 1]`` is bisected;
    roots whose ``phi0`` has an ``sc`` pole inside ``(0, L)`` are rejected and
    the smallest surviving ``k`` is returned.
    """
    m = params.m
    kc = kappa_critical(cfg.L, m)
    if cfg.kappa <= kc:
        raise NoCriticalMode(f"kappa={cfg.kappa} <= kappa_c(L={cfg.L})={kc:.12g}")
    roots, _, _ = _scan_roots(lambda k: _robin_smooth(k, cfg, m), 0.0, 1.0, n_scan, K_TOL)
    good = [r for r in roots if r > 0.0 and not _has_interior_pole(r, cfg.L, m)]
    bad = [r for r in roots if r not in good]
    diag = {"roots": roots, "rejected": bad}
    if not good:
        return KGap(cfg, bad, diag)
    return CondensateSolution(cfg, m, params.lam, "robin_sc", k=min(good), diagnostics=diag)


# --- potential hole -------------------------------------------------------


def hole_matching_residual(k, cfg, params, reduced=True):
    """``phi0'(R) + phi0(R) sqrt(m^2 + (lam/2) phi0(R)^2)`` for the inner ``sn`` piece."""
    m, lam = params.m, params.lam
    P = math.sqrt(cfg.U0 - m * m)
    s = math.sqrt(1.0 + k * k)
    beta = P / s
    amp = math.sqrt(2.0 / lam) * P * k / s
    t = jacobi_triple(beta * cfg.R, EllipticModulus(k))
    r = beta * t.cn * t.dn + t.sn * math.sqrt(m * m + 0.5 * lam * (amp * t.sn) ** 2)
    return r if reduced else amp * r


def _hole_admissible(k, cfg, m):
    # inner sn piece must not vanish inside (0, R)
    if k >= 1.0:
        return True
    P = math.sqrt(cfg.U0 - m * m)
    beta = P / math.sqrt(1.0 + k * k)
    return beta * cfg.R < 2.0 * complete_K(k)


def solve_hole(cfg, params, n_scan=K_SCAN_POINTS):
    """Condensate in the potential hole; ``x1`` follows from continuity at ``R``.

    Raises
    ------
    NoCriticalMode
        If ``U0`` does not exceed the critical depth.
    NoSolution
        If the matching condition has no admissible root in ``(0, 1]``.
    """
    m, lam = params.m, params.lam
    Uc = hole_threshold(cfg.R, m)
    if cfg.U0 <= Uc:
        raise NoCriticalMode(f"U0={cfg.U0} <= critical depth {Uc:.12g}")
    f = lambda k: hole_matching_residual(k, cfg, params)
    roots, grid, vals = _scan_roots(f, 0.0, 1.0, n_scan, K_TOL)
    good = [r for r in roots if r > 0.0 and _hole_admissible(r, cfg, m)]
    if not good:
        trace = list(zip(grid[:: max(1, n_scan // 50)], vals[:: max(1, n_scan // 50)]))
        raise NoSolution(f"no admissible modulus for {cfg!r}", trace)
    k = min(good)
    P = math.sqrt(cfg.U0 - m * m)
    s = math.sqrt(1.0 + k * k)
    phiR = math.sqrt(2.0 / lam) * P * k / s * jacobi_triple(P / s * cfg.R, EllipticModulus(k)).sn
    x1 = math.asinh(math.sqrt(2.0 / lam) * m / abs(phiR)) / m - cfg.R
    return CondensateSolution(cfg, m, lam, "hole_sn_tail", k=k, x1=x1,
                              diagnostics={"roots": roots})


def solve(cfg, params):
    """Dispatch to the model-specific solver."""
    if isinstance(cfg, Delta):
        return solve_delta(cfg, params)
    if isinstance(cfg, RobinDirichlet):
        return solve_robin(cfg, params)
    if isinstance(cfg, PotentialHole):
        return solve_hole(cfg, params)
    raise DomainError(f"unknown model {cfg!r}")


# --- energy and residual --------------------------------------------------


def condensate_energy(sol):
    """``E_cond = -(lam/4) int phi0^4`` over the model domain."""
    cfg, m, lam = sol.model, sol.m, sol.lam
    f4 = lambda x: sol.phi(x) ** 4
    if isinstance(cfg, Delta):
        total = 2.0 * _quad.quad_tail(f4, 0.0, m)
    elif isinstance(cfg, RobinDirichlet):
        if sol.k == 0.0:
            return 0.0
        total = _quad.quad(f4, 0.0, cfg.L)
    else:
        if sol.k == 0.0:
            return 0.0
        total = _quad.quad(f4, 0.0, cfg.R) + _quad.quad_tail(f4, cfg.R, m)
    return -0.25 * lam * total


def _residual_grid(sol, n, h):
    cfg = sol.model
    pad = 3.0 * h
    if isinstance(cfg, Delta):
        X = sol.x1 + 12.0 / sol.m
        half = n // 2
        right = np.linspace(pad, X, n - half)
        return np.concatenate([-right[::-1][: half], right])
    if isinstance(cfg, RobinDirichlet):
        return np.linspace(pad, cfg.L - pad, n)
    R = cfg.R
    n_in = n // 2
    inner = np.linspace(pad, R - pad, n_in)
    outer = np.linspace(R + pad, R + 12.0 / sol.m, n - n_in)
    return np.concatenate([inner, outer])


def gp_residual(sol, grid_size=400, h=1e-3):
    """Max of ``|-phi0'' + (m^2 + V) phi0 + lam phi0^3|`` with a 5-point second derivative."""
    x = _residual_grid(sol, grid_size, h)
    f = sol.phi
    d2 = (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)
    phi = f(x)
    V = potential_eval(sol.model, x)
    res = -d2 + (sol.m ** 2 + V) * phi + sol.lam * phi ** 3
    return float(np.max(np.abs(res)))


def boundary_residuals(sol):
    """Residuals of the boundary and matching conditions of ``sol``."""
    cfg = sol.model
    if isinstance(cfg, Delta):
        jump = sol.dphi(0.0) - sol.dphi_left(0.0) + 2 * cfg.kappa * sol.phi(0.0)
        return {"jump": jump}
    if isinstance(cfg, RobinDirichlet):
        return {"robin": cfg.kappa * sol.phi(0.0) + sol.dphi(0.0), "dirichlet": sol.phi(cfg.L)}
    R = cfg.R
    if sol.k == 0.0:
        return {"dirichlet": 0.0, "continuity": 0.0, "derivative": 0.0}
    vi, di = sol._inner(R)
    vt, dt = sol._tail(R)
    return {"dirichlet": sol.phi(0.0), "continuity": float(vi - vt), "derivative": float(di - dt)}
