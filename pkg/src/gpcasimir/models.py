"""Physical parameters and the three model geometries.

The delta potential is never represented pointwise; it only enters through
the jump condition ``phi'(+0) - phi'(-0) = -2 kappa phi(0)``.
"""

from dataclasses import dataclass, asdict
import json
import math

import numpy as np

from .errors import DomainError

__all__ = [
    "PhysicalParams",
    "Delta",
    "RobinDirichlet",
    "PotentialHole",
    "BoundaryCondition",
    "boundary_conditions",
    "potential_eval",
    "domain",
    "config_from_dict",
    "load_config",
]


@dataclass(frozen=True)
class PhysicalParams:
    m: float = 1.0
    lam: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise DomainError(f"mass must be positive, got {self.m}")
        if not self.lam > 0:
            raise DomainError(f"coupling must be positive, got {self.lam}")


@dataclass(frozen=True)
class Delta:
    """``V(x) = -2 kappa delta(x)`` on the whole line."""

    kappa: float
    name = "delta"

    def __post_init__(self):
        if not self.kappa > 0:
            raise DomainError(f"kappa must be positive, got {self.kappa}")


@dataclass(frozen=True)
class RobinDirichlet:
    """Free field on ``[0, L]``, Robin ``(kappa + d/dx) phi = 0`` at 0, Dirichlet at L."""

    kappa: float
    L: float
    name = "robin"

    def __post_init__(self):
        if not self.kappa > 0:
            raise DomainError(f"kappa must be positive, got {self.kappa}")
        if not self.L > 0:
            raise DomainError(f"L must be positive, got {self.L}")


@dataclass(frozen=True)
class PotentialHole:
    """Well of depth ``U0`` on ``(0, R)`` on the half line, Dirichlet at 0."""

    U0: float
    R: float
    name = "hole"

    def __post_init__(self):
        if not self.U0 > 0:
            raise DomainError(f"U0 must be positive, got {self.U0}")
        if not self.R > 0:
            raise DomainError(f"R must be positive, got {self.R}")


@dataclass(frozen=True)
class BoundaryCondition:
    kind: str  # "jump", "robin" or "dirichlet"
    location: float
    kappa: float = 0.0

    def residual(self, phi, dphi_left, dphi_right=None):
        """Residual of the condition given field value and one-sided derivatives."""
        if self.kind == "jump":
            return dphi_right - dphi_left + 2.0 * self.kappa * phi
        if self.kind == "robin":
            return self.kappa * phi + dphi_left
        return phi


def boundary_conditions(cfg):
    if isinstance(cfg, Delta):
        return [BoundaryCondition("jump", 0.0, cfg.kappa)]
    if isinstance(cfg, RobinDirichlet):
        return [BoundaryCondition("robin", 0.0, cfg.kappa), BoundaryCondition("dirichlet", cfg.L)]
    return [BoundaryCondition("dirichlet", 0.0)]


def domain(cfg):
    """``(lo, hi)`` of the model's coordinate range."""
    if isinstance(cfg, Delta):
        return (-math.inf, math.inf)
    if isinstance(cfg, RobinDirichlet):
        return (0.0, cfg.L)
    return (0.0, math.inf)


def potential_eval(cfg, x):
    """Pointwise potential ``V(x)``; zero away from the delta point."""
    xa = np.asarray(x, dtype=float)
    lo, hi = domain(cfg)
    if np.any(xa < lo) or np.any(xa > hi) or np.any(np.isnan(xa)):
        raise DomainError(f"x outside the {cfg.name} domain [{lo}, {hi}]")
    if isinstance(cfg, PotentialHole):
        v = np.where(xa < cfg.R, -cfg.U0, 0.0)
    else:
        v = np.zeros_like(xa)
    return float(v) if np.ndim(x) == 0 else v


_KEYS = {"delta": ("kappa",), "robin": ("kappa", "L"), "hole": ("U0", "R")}
_TYPES = {"delta": Delta, "robin": RobinDirichlet, "hole": PotentialHole}


def config_from_dict(d):
    """Parse the JSON config schema into ``(model_config, PhysicalParams)``."""
    try:
        model = d["model"]
        cls = _TYPES[model]
    except KeyError as exc:
        raise DomainError(f"unknown or missing model in config: {d.get('model')!r}") from exc
    missing = [k for k in _KEYS[model] if k not in d]
    if missing:
        raise DomainError(f"config for model {model!r} lacks {missing}")
    params = PhysicalParams(m=float(d.get("m", 1.0)), lam=float(d.get("lambda", 1.0)))
    cfg = cls(**{k: float(d[k]) for k in _KEYS[model]})
    return cfg, params


def config_to_dict(cfg, params):
    d = {"model": cfg.name, "m": params.m, "lambda": params.lam}
    d.update(asdict(cfg))
    return d


def load_config(path):
    with open(path) as fh:
        return config_from_dict(json.load(fh))
