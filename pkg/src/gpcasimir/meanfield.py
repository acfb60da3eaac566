"""Mean-field (bound-state) approximation to the condensate.

The nonlinearity ``lam * phi^2`` is replaced by the constant ``eps^2``, which
turns the GP equation into the linear bound-state problem
``(-d^2 + m^2 + V) phi_bs = -eps^2 phi_bs``.  The amplitude ``mu`` of
``mu * phi_bs`` is then fixed variationally.
"""

from dataclasses import dataclass, field
import math
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from . import _quad
from .errors import NoCriticalMode, SingularOperator, DomainError
from .models import Delta, RobinDirichlet, PotentialHole, domain

__all__ = [
    "BoundStateSolution",
    "GreensFunction",
    "bound_state",
    "norm_constants",
    "variational_mu",
    "meanfield_energy",
    "meanfield_energy_closed_form",
    "energy_at_amplitude",
    "greens_function",
    "first_order_correction",
    "threshold_expansion",
    "robin_q_slope",
    "kappa_critical",
]

ROOT_XTOL = 1e-14


@dataclass
class BoundStateSolution:
    model: object
    lam: float
    m: float
    epsilon: float
    q: float
    p: Optional[float] = None
    a: float = field(default=math.nan)
    b: float = field(default=math.nan)
    mu: float = field(default=math.nan)

    def phi(self, x):
        """Unnormalized bound-state profile ``phi_bs(x)``."""
        x = np.asarray(x, dtype=float)
        cfg, q = self.model, self.q
        if isinstance(cfg, Delta):
            out = np.exp(-q * np.abs(x))
        elif isinstance(cfg, RobinDirichlet):
            # e^{-qx} - e^{q(x-2L)} written without overflow
            out = 2.0 * np.exp(-q * cfg.L) * np.sinh(q * (cfg.L - x))
        else:
            R, p = cfg.R, self.p
            inner = math.exp(-q * R) * np.sin(p * x)
            outer = math.sin(p * R) * np.exp(-q * x)
            out = np.where(x < R, inner, outer)
        return float(out) if out.ndim == 0 else out

    def dphi(self, x):
        x = np.asarray(x, dtype=float)
        cfg, q = self.model, self.q
        if isinstance(cfg, Delta):
            out = -q * np.sign(x) * np.exp(-q * np.abs(x))
        elif isinstance(cfg, RobinDirichlet):
            out = -2.0 * q * np.exp(-q * cfg.L) * np.cosh(q * (cfg.L - x))
        else:
            R, p = cfg.R, self.p
            inner = math.exp(-q * R) * p * np.cos(p * x)
            outer = -q * math.sin(p * R) * np.exp(-q * x)
            out = np.where(x < R, inner, outer)
        return float(out) if out.ndim == 0 else out

    def phi_normalized(self, x):
        """The variational approximation ``mu * phi_bs(x)``."""
        return self.mu * self.phi(x)

    @property
    def energy(self):
        return meanfield_energy(self)


def kappa_critical(L, m):
    """Smallest Robin parameter giving an unstable mode on ``[0, L]``."""
    return m / math.tanh(m * L)


def _solve_robin(cfg, m):
    kc = kappa_critical(cfg.L, m)
    if cfg.kappa <= kc:
        raise NoCriticalMode(f"kappa={cfg.kappa} <= kappa_c(L={cfg.L})={kc:.12g}")
    kappa, L = cfg.kappa, cfg.L

    def f(eps):
        q = math.hypot(eps, m)
        return q - kappa * math.tanh(q * L)

    # f(0) < 0 in the critical regime and f > 0 once q reaches kappa
    top = max(10.0 * m, math.sqrt(kappa * kappa - m * m))
    grid = np.concatenate([[0.0], np.geomspace(1e-6 * m, top, 200)])
    vals = [f(e) for e in grid]
    for lo, hi, flo, fhi in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if flo == 0.0:
            return lo
        if flo * fhi < 0:
            return optimize.brentq(f, lo, hi, xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps)
    raise NoCriticalMode("no sign change of q - kappa tanh(qL)")  # pragma: no cover


def _hole_roots(U0, R, m):
    P = math.sqrt(U0 - m * m) if U0 > m * m else 0.0

    def f(eps):
        q = math.hypot(eps, m)
        p = math.sqrt(max(U0 - q * q, 0.0))
        return q * math.sin(p * R) + p * math.cos(p * R)

    if P == 0.0:
        return [], f
    top = P - 1e-9
    if top <= 1e-6 * m:
        return [], f
    grid = np.concatenate([[0.0], np.geomspace(1e-6 * m, top, 2000)])
    vals = np.array([f(e) for e in grid])
    roots = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0 and grid[i] > 0:
            roots.append(grid[i])
        elif vals[i] * vals[i + 1] < 0:
            roots.append(optimize.brentq(f, grid[i], grid[i + 1], xtol=ROOT_XTOL,
                                         rtol=4 * np.finfo(float).eps))
    return roots, f


def bound_state(cfg, params):
    """Critical bound state of the linear problem, with ``a``, ``b``, ``mu`` filled in.

    Raises
    ------
    NoCriticalMode
        If the model has no bound state with ``eps > 0``.
    """
    m, lam = params.m, params.lam
    if isinstance(cfg, Delta):
        if cfg.kappa <= m:
            raise NoCriticalMode(f"delta model needs kappa > m, got kappa={cfg.kappa}, m={m}")
        eps = math.sqrt((cfg.kappa - m) * (cfg.kappa + m))
        bs = BoundStateSolution(cfg, lam, m, eps, q=cfg.kappa)
    elif isinstance(cfg, RobinDirichlet):
        eps = _solve_robin(cfg, m)
        bs = BoundStateSolution(cfg, lam, m, eps, q=math.hypot(eps, m))
    elif isinstance(cfg, PotentialHole):
        roots, _ = _hole_roots(cfg.U0, cfg.R, m)
        if not roots:
            raise NoCriticalMode(f"potential hole U0={cfg.U0}, R={cfg.R} is subcritical")
        # the deepest level is the ground state
        eps = max(roots)
        q = math.hypot(eps, m)
        bs = BoundStateSolution(cfg, lam, m, eps, q=q, p=math.sqrt(cfg.U0 - q * q))
    else:
        raise DomainError(f"unknown model {cfg!r}")
    bs.a, bs.b = norm_constants(bs)
    bs.mu = variational_mu(bs.a, bs.b, bs.epsilon, lam)
    return bs


def _closed_ab(bs):
    cfg, q = bs.model, bs.q
    if isinstance(cfg, Delta):
        return 1.0 / q, 0.5 / q
    if isinstance(cfg, RobinDirichlet):
        L = cfg.L
        s2, s4 = math.sinh(2 * q * L), math.sinh(4 * q * L)
        e2 = math.exp(-2 * q * L)
        a = 4.0 * e2 * (s2 / (4 * q) - L / 2)
        b = 16.0 * e2 * e2 * (3 * L / 8 - s2 / (4 * q) + s4 / (32 * q))
        return a, b
    R, p = cfg.R, bs.p
    sR = math.sin(p * R)
    e2 = math.exp(-2 * q * R)
    a = e2 * (R / 2 - math.sin(2 * p * R) / (4 * p)) + sR ** 2 * e2 / (2 * q)
    b = e2 * e2 * (3 * R / 8 - math.sin(2 * p * R) / (4 * p) + math.sin(4 * p * R) / (32 * p)) \
        + sR ** 4 * e2 * e2 / (4 * q)
    return a, b


def _quad_ab(bs):
    cfg = bs.model
    f2 = lambda x: bs.phi(x) ** 2
    f4 = lambda x: bs.phi(x) ** 4
    if isinstance(cfg, Delta):
        # symmetric in x
        return 2 * _quad.quad_tail(f2, 0.0, bs.m), 2 * _quad.quad_tail(f4, 0.0, bs.m)
    if isinstance(cfg, RobinDirichlet):
        return _quad.quad(f2, 0.0, cfg.L), _quad.quad(f4, 0.0, cfg.L)
    R = cfg.R
    a = _quad.quad(f2, 0.0, R) + _quad.quad_tail(f2, R, bs.m)
    b = _quad.quad(f4, 0.0, R) + _quad.quad_tail(f4, R, bs.m)
    return a, b


def norm_constants(bs, method="closed"):
    """``(a, b) = (int phi_bs^2, int phi_bs^4)`` over the model domain.

    ``method="closed"`` uses the antiderivatives of the explicit profiles,
    ``method="quad"`` adaptive quadrature (semi-infinite parts mapped to (0, 1]).
    """
    if method == "closed":
        return _closed_ab(bs)
    if method == "quad":
        return _quad_ab(bs)
    raise ValueError(f"unknown method {method!r}")


def energy_at_amplitude(mu, a, b, eps, lam):
    """Energy of ``mu * phi_bs`` inserted into the full energy functional."""
    return -0.5 * eps * eps * mu * mu * a + 0.25 * lam * mu ** 4 * b


def variational_mu(a, b, eps, lam):
    """Minimizer of :func:`energy_at_amplitude` in ``mu``."""
    if not (a > 0 and b > 0 and lam > 0):
        raise DomainError("a, b and lambda must be positive")
    mu = math.sqrt(eps * eps * a / (lam * b))
    if mu > 0:
        # stationarity of -eps^2 mu^2 a/2 + lam mu^4 b/4
        grad = -eps * eps * mu * a + lam * mu ** 3 * b
        assert abs(grad) <= 1e-10 * max(eps * eps * mu * a, 1e-300)
    return mu


def meanfield_energy(bs):
    """``E_bs = -eps^4 a^2 / (4 lam b)``."""
    return -bs.epsilon ** 4 * bs.a ** 2 / (4.0 * bs.lam * bs.b)


def meanfield_energy_closed_form(bs):
    """Model-specific closed form of ``E_bs`` written directly in eps, q, p."""
    cfg, eps, lam, q = bs.model, bs.epsilon, bs.lam, bs.q
    if isinstance(cfg, Delta):
        return -eps ** 4 / (2 * lam * cfg.kappa)
    if isinstance(cfg, RobinDirichlet):
        x = q * cfg.L
        num = (2 * x - math.sinh(2 * x)) ** 2
        den = 2 * lam * q * (12 * x - 8 * math.sinh(2 * x) + math.sinh(4 * x))
        return -num / den * eps ** 4
    p, R, U0 = bs.p, cfg.R, cfg.U0
    num = eps ** 4 * U0 * (1 + q * R) ** 2
    den = 2 * lam * q * (3 * q * q * (1 + q * R) + p * p * (2 + 3 * q * R))
    return -num / den


# --- Green's function -----------------------------------------------------


@dataclass
class GreensFunction:
    """``G(x, x') = -y_left(x<) y_right(x>) / W`` for ``-d^2 + m^2 + V``."""

    y_left: Callable
    y_right: Callable
    dy_left: Callable
    dy_right: Callable
    wronskian: float
    bounds: tuple
    breakpoints: tuple = ()

    def __call__(self, x, xp):
        lo, hi = (x, xp) if x <= xp else (xp, x)
        return -self.y_left(lo) * self.y_right(hi) / self.wronskian

    def dx(self, x, xp, side):
        """``dG/dx`` at ``x = xp`` from the left (side=-1) or right (side=+1)."""
        if side < 0:
            return -self.dy_left(x) * self.y_right(xp) / self.wronskian
        return -self.y_left(xp) * self.dy_right(x) / self.wronskian

    def apply(self, f, x):
        """``int G(x, x') f(x') dx'`` by adaptive quadrature."""
        lo, hi = self.bounds
        yl, yr = self.y_left, self.y_right
        pts = sorted(self.breakpoints)
        left = _integrate(lambda s: yl(s) * f(s), lo, x, pts)
        right = _integrate(lambda s: yr(s) * f(s), x, hi, pts)
        return -(yr(x) * left + yl(x) * right) / self.wronskian


def _integrate(g, a, b, pts):
    if a == b:
        return 0.0
    if math.isinf(a) or math.isinf(b):
        # split finite part at breakpoints, infinite parts handled by quad
        inner = [p for p in pts if a < p < b]
        edges = [a] + inner + [b]
        return sum(_quad.quad(g, u, v, epsrel=1e-10) for u, v in zip(edges[:-1], edges[1:]))
    inner = [p for p in pts if a < p < b]
    return _quad.quad(g, a, b, points=inner or None, epsrel=1e-10)


def greens_function(cfg, params, wronskian_tol=1e-12):
    """Green's function of ``-d^2 + m^2 + V`` with the model's boundary conditions.

    Raises
    ------
    SingularOperator
        If the Wronskian of the boundary-adapted solutions vanishes.
    """
    m = params.m
    if isinstance(cfg, Delta):
        k = cfg.kappa
        A, B = 0.5 * (2 - 2 * k / m), 0.5 * (2 * k / m)  # A + B = 1, A - B = 1 - 2k/m

        def yl(x):
            return math.exp(m * x) if x <= 0 else A * math.exp(m * x) + B * math.exp(-m * x)

        def dyl(x):
            return m * math.exp(m * x) if x <= 0 else m * (A * math.exp(m * x) - B * math.exp(-m * x))

        yr = lambda x: yl(-x)
        dyr = lambda x: -dyl(-x)
        bounds, pts = (-math.inf, math.inf), (0.0,)
    elif isinstance(cfg, RobinDirichlet):
        k, L = cfg.kappa, cfg.L
        yl = lambda x: math.cosh(m * x) - k / m * math.sinh(m * x)
        dyl = lambda x: m * math.sinh(m * x) - k * math.cosh(m * x)
        yr = lambda x: math.sinh(m * (L - x))
        dyr = lambda x: -m * math.cosh(m * (L - x))
        bounds, pts = (0.0, L), ()
    else:
        U0, R = cfg.U0, cfg.R
        if U0 <= m * m:
            raise DomainError("hole Green's function implemented for U0 > m^2")
        P = math.sqrt(U0 - m * m)
        # left solution: sin(Px) inside, continued as C1 combination of e^{+-mx}
        s, c = math.sin(P * R), P * math.cos(P * R)
        Al = 0.5 * (s + c / m) * math.exp(-m * R)
        Bl = 0.5 * (s - c / m) * math.exp(m * R)
        # right solution: e^{-mx} outside, continued inside as cos/sin combination
        v, dv = math.exp(-m * R), -m * math.exp(-m * R)
        Cr = v * math.cos(P * R) - dv / P * math.sin(P * R)
        Dr = v * math.sin(P * R) + dv / P * math.cos(P * R)

        def yl(x):
            return math.sin(P * x) if x < R else Al * math.exp(m * x) + Bl * math.exp(-m * x)

        def dyl(x):
            return P * math.cos(P * x) if x < R else m * (Al * math.exp(m * x) - Bl * math.exp(-m * x))

        def yr(x):
            return Cr * math.cos(P * x) + Dr * math.sin(P * x) if x < R else math.exp(-m * x)

        def dyr(x):
            return P * (-Cr * math.sin(P * x) + Dr * math.cos(P * x)) if x < R else -m * math.exp(-m * x)

        bounds, pts = (0.0, math.inf), (R,)
    # evaluate W away from the matching points
    x0 = {Delta: 1.0, RobinDirichlet: 0.5 * bounds[1]}.get(type(cfg), 0.5 * getattr(cfg, "R", 1.0))
    W = yl(x0) * dyr(x0) - dyl(x0) * yr(x0)
    if abs(W) < wronskian_tol:
        raise SingularOperator(f"Wronskian {W:.3e} vanishes for {cfg!r}")
    return GreensFunction(yl, yr, dyl, dyr, W, bounds, pts)


def first_order_correction(bs, cfg=None, params=None, projected=True):
    """First iteration ``delta_phi(x)`` of the integral form of the GP equation.

    ``delta_phi(x) = -eps^2 sqrt(a/4b) int G(x,x') [phi_bs + (lam a / 4b) phi_bs^3] dx'``

    With ``projected=True`` the Green's function is the reduced resolvent on
    the complement of ``phi_bs``: the operator has eigenvalue ``-eps^2`` on
    ``phi_bs`` so the unreduced ``G`` maps it to ``-phi_bs / eps^2`` and the
    correction would not be small.  ``projected=False`` gives the plain inverse.
    """
    from .models import PhysicalParams

    cfg = cfg or bs.model
    params = params or PhysicalParams(bs.m, bs.lam)
    eps, a, b, lam = bs.epsilon, bs.a, bs.b, bs.lam
    pref = -eps * eps * math.sqrt(a / (4 * b))
    if pref == 0.0:
        return lambda x: 0.0 * np.asarray(x, dtype=float)
    G = greens_function(cfg, params)
    c3 = lam * a / (4 * b)
    source = lambda s: bs.phi(s) + c3 * bs.phi(s) ** 3
    overlap = 0.0
    if projected:
        # <phi_bs, source> / a, removed from the source before inversion
        lo, hi = domain(cfg)
        overlap = _integrate(lambda s: bs.phi(s) * source(s), lo, hi, list(G.breakpoints)) / a

    def delta_phi(x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(xs)
        for i, xi in enumerate(xs):
            val = G.apply(source, float(xi))
            if projected:
                # G(source - overlap*phi) = G source + overlap*phi/eps^2
                val += overlap * bs.phi(float(xi)) / (eps * eps)
            out[i] = pref * val
        return float(out[0]) if np.ndim(x) == 0 else out

    delta_phi.greens_function = G
    return delta_phi


# --- threshold expansions -------------------------------------------------


def robin_q_slope(m, L):
    """``dq/dkappa`` at the Robin threshold ``q = m``."""
    x = m * L
    return 2 * math.sinh(x) ** 2 / (math.sinh(2 * x) - 2 * x)


def threshold_expansion(cfg, params):
    """Coefficient ``c`` of ``E ~ -c * delta^2`` close to the threshold.

    ``delta`` is ``kappa - m`` (delta model), ``kappa - kappa_c(L)`` (Robin) or
    ``U0 - U0_c(R)`` (hole).
    """
    m, lam = params.m, params.lam
    if isinstance(cfg, Delta):
        return 2 * m / lam
    if isinstance(cfg, RobinDirichlet):
        x = m * cfg.L
        if x > 100:
            return m / lam
        return 8 * m * math.sinh(x) ** 4 / (lam * (12 * x - 8 * math.sinh(2 * x) + math.sinh(4 * x)))
    if isinstance(cfg, PotentialHole):
        from .condensate import hole_threshold

        U0, R = hole_threshold(cfg.R, m), cfg.R
        return m * (m + R * U0) ** 2 / (2 * lam * U0 * (m * m + 2 * U0 + 3 * m * R * U0))
    raise DomainError(f"unknown model {cfg!r}")
