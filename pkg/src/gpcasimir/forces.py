"""Casimir forces ``F = -dE/dL`` on the Robin-Dirichlet interval.

``F > 0`` is repulsive.  Derivatives are central differences with one
Richardson step, so the stencil is ``L +- h, L +- 2h``.
"""

from dataclasses import dataclass
import math

from .condensate import KGap, robin_thresholds, solve_robin, condensate_energy
from .errors import BranchCrossing, GPError, NoCriticalRegime, UnstableSpectrum
from .meanfield import bound_state, kappa_critical
from .models import RobinDirichlet
from .spectrum import (FluctuationPotential, vacuum_energy_renormalized,
                       vacuum_energy_subcritical, stability_scan, CUTOFF, ODE_RTOL)

__all__ = ["ForceReport", "force_of", "total_force", "branch_edges", "condensate_energy_of_L",
           "vacuum_energy_of_L", "background_potential", "REL_STEP"]

REL_STEP = 1e-4


@dataclass
class ForceReport:
    F_cond: float
    F_fluct: float
    F_total: float
    step_used: float
    richardson_error: float
    error_cond: float = 0.0
    error_fluct: float = 0.0


def force_of(E, L, h=None, rel_step=REL_STEP):
    """``(F, err)`` with ``F = -dE/dL`` from a Richardson-extrapolated central difference.

    ``E`` may raise or return ``None``/non-finite values where the branch ends;
    both are reported as :class:`BranchCrossing`.
    """
    h = rel_step * L if h is None else h
    vals = {}
    for j in (-2, -1, 1, 2):
        x = L + j * h
        try:
            v = E(x)
        except (GPError, ArithmeticError) as exc:
            raise BranchCrossing(f"energy unavailable at L={x:.12g}: {exc}") from exc
        if v is None or not math.isfinite(v):
            raise BranchCrossing(f"energy unavailable at L={x:.12g}")
        vals[j] = v
    d1 = (vals[1] - vals[-1]) / (2 * h)
    d2 = (vals[2] - vals[-2]) / (4 * h)
    d = (4 * d1 - d2) / 3
    return -d, abs(d - d1)


def branch_edges(kappa, m):
    """Lengths where the Robin condensate branch starts or ends at fixed kappa."""
    try:
        th = robin_thresholds(kappa, m)
    except NoCriticalRegime:
        return []
    return [e for e in (th.L0, th.L1, th.L2) if e is not None]


def _clamped_step(L, kappa, m, rel_step):
    h = rel_step * L
    edges = branch_edges(kappa, m)
    if edges:
        dist = min(abs(L - e) for e in edges)
        # keep the whole stencil (+-2h) at least 5h away from an edge
        h = min(h, dist / 7.0)
    return h


def condensate_energy_of_L(kappa, params):
    def E(L):
        sol = solve_robin(RobinDirichlet(kappa, L), params)
        if isinstance(sol, KGap):
            return None
        return condensate_energy(sol)
    return E


def background_potential(cfg, params, background="exact"):
    """Fluctuation potential of the Robin condensate; ``None`` inside the k-gap."""
    if background == "exact":
        sol = solve_robin(cfg, params)
        if isinstance(sol, KGap):
            return None
        return FluctuationPotential.from_condensate(sol)
    if background == "approx":
        return FluctuationPotential.from_bound_state(bound_state(cfg, params))
    raise ValueError(f"unknown background {background!r}")


def vacuum_energy_of_L(kappa, params, background="exact", cutoff=CUTOFF, rtol=ODE_RTOL):
    """``L -> E0_ren`` with the background re-solved at every ``L``."""
    m = params.m

    def E(L):
        if kappa <= kappa_critical(L, m):
            return vacuum_energy_subcritical(params, kappa, L).E0_ren
        V = background_potential(RobinDirichlet(kappa, L), params, background)
        if V is None:
            return None
        # stability is checked once at the central point by total_force
        return vacuum_energy_renormalized(V, params, kappa, cutoff=cutoff, rtol=rtol,
                                          check_stability=False).E0_ren
    return E


def total_force(cfg, params, background="exact", rel_step=REL_STEP, cutoff=CUTOFF, rtol=ODE_RTOL):
    """Condensate plus fluctuation force at ``cfg.L``.

    In the subcritical regime the condensate force is zero and only the
    fluctuations contribute.
    """
    kappa, L, m = cfg.kappa, cfg.L, params.m
    h = _clamped_step(L, kappa, m, rel_step)
    critical = kappa > kappa_critical(L, m)
    if critical:
        V = background_potential(cfg, params, background)
        if V is None:
            raise BranchCrossing(f"no condensate at L={L} (k-gap)")
        zeros = stability_scan(V, params, kappa, cutoff=cutoff)
        if zeros:
            raise UnstableSpectrum(f"Phi(i xi) vanishes at xi = {zeros}", zeros)
        F_c, e_c = force_of(condensate_energy_of_L(kappa, params), L, h=h)
    else:
        F_c, e_c = 0.0, 0.0
    F_f, e_f = force_of(vacuum_energy_of_L(kappa, params, background, cutoff, rtol), L, h=h)
    return ForceReport(F_c, F_f, F_c + F_f, h, e_c + e_f, e_c, e_f)
