"""Jacobi elliptic functions of real argument and real modulus 0 <= k <= 1.

Everything is built on the arithmetic-geometric mean: the complete integral
``K(k) = pi / (2 agm(1, k'))`` and the descending Landen (Gauss) transformation
for ``sn, cn, dn`` (DLMF 22.20(ii)).  Arguments may be scalars or numpy arrays;
the modulus is always a scalar.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError, PoleProximity

__all__ = [
    "EllipticModulus",
    "JacobiTriple",
    "agm",
    "complete_K",
    "jacobi_triple",
    "jacobi_sc",
    "jacobi_ds",
    "sc_derivative",
    "POLE_TOL",
]

LANDEN_TOL = 1e-15
POLE_TOL = 1e-9
_MAX_STEPS = 60


@dataclass(frozen=True)
class EllipticModulus:
    """Modulus ``k`` with its complement ``kprime = sqrt(1 - k^2)`` cached."""

    k: float
    kprime: float = field(init=False)

    def __post_init__(self):
        k = float(self.k)
        if not (0.0 <= k <= 1.0) or math.isnan(k):
            raise DomainError(f"elliptic modulus must lie in [0, 1], got {k!r}")
        object.__setattr__(self, "k", k)
        # (1-k)(1+k) keeps relative accuracy of k' near k = 1
        object.__setattr__(self, "kprime", math.sqrt((1.0 - k) * (1.0 + k)))

    @classmethod
    def from_complement(cls, kprime):
        """Build the modulus whose complement is ``kprime``."""
        kprime = float(kprime)
        if not (0.0 <= kprime <= 1.0):
            raise DomainError(f"complementary modulus must lie in [0, 1], got {kprime!r}")
        obj = cls(math.sqrt((1.0 - kprime) * (1.0 + kprime)))
        object.__setattr__(obj, "kprime", kprime)
        return obj


@dataclass(frozen=True)
class JacobiTriple:
    sn: object
    cn: object
    dn: object


def _modulus(k):
    return k if isinstance(k, EllipticModulus) else EllipticModulus(k)


def agm(a, b, tol=LANDEN_TOL):
    """Arithmetic-geometric mean of two non-negative numbers."""
    for _ in range(_MAX_STEPS):
        if abs(a - b) <= tol * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_K(k):
    """Complete elliptic integral of the first kind, the quarter period."""
    k = _modulus(k)
    if k.k >= 1.0:
        raise DomainError("K(k) diverges at k = 1")
    return math.pi / (2.0 * agm(1.0, k.kprime))


def _landen_chain(k):
    # AGM sequence (a_n, c_n) starting from a0 = 1, b0 = k', c0 = k
    a, b, c = 1.0, k.kprime, k.k
    aa, cc = [a], [c]
    for _ in range(_MAX_STEPS):
        if c / a < LANDEN_TOL:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        aa.append(a)
        cc.append(c)
    return aa, cc


def jacobi_triple(z, k):
    """Return ``JacobiTriple(sn, cn, dn)`` at argument ``z`` and modulus ``k``.

    The degenerate moduli use their closed forms: ``(sin, cos, 1)`` at ``k = 0``
    and ``(tanh, sech, sech)`` at ``k = 1``.
    """
    k = _modulus(k)
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=float)
    if k.k == 0.0:
        sn, cn, dn = np.sin(z), np.cos(z), np.ones_like(z)
    elif k.k == 1.0:
        sn = np.tanh(z)
        cn = 1.0 / np.cosh(z)
        dn = cn.copy()
    else:
        aa, cc = _landen_chain(k)
        n = len(aa) - 1
        phi = (2.0 ** n) * aa[n] * z
        for j in range(n, 0, -1):
            phi = 0.5 * (phi + np.arcsin(cc[j] / aa[j] * np.sin(phi)))
        sn, cn = np.sin(phi), np.cos(phi)
        # 1 - k^2 sn^2 == cn^2 + k'^2 sn^2, free of cancellation near k = 1
        dn = np.sqrt(cn * cn + (k.kprime * sn) ** 2)
    if scalar:
        return JacobiTriple(float(sn), float(cn), float(dn))
    return JacobiTriple(sn, cn, dn)


def _nearest(z, offset, period):
    # nearest point of the lattice offset + n*period
    n = np.round((np.asarray(z, dtype=float) - offset) / period)
    return offset + n * period


def _check_poles(z, poles, name, tol):
    dist = np.abs(np.asarray(z, dtype=float) - poles)
    if np.any(dist < tol):
        i = int(np.argmin(dist))
        pole = float(np.ravel(poles)[i]) if np.ndim(poles) else float(poles)
        raise PoleProximity(f"{name} evaluated within {tol:g} of its pole at {pole:.15g}", pole)


def jacobi_sc(z, k, pole_tol=POLE_TOL):
    """``sc = sn/cn``; poles at ``z = K (mod 2K)``."""
    k = _modulus(k)
    if k.k < 1.0:
        K = complete_K(k)
        _check_poles(z, _nearest(z, K, 2.0 * K), "sc", pole_tol)
    t = jacobi_triple(z, k)
    return t.sn / t.cn


def jacobi_ds(z, k, pole_tol=POLE_TOL):
    """``ds = dn/sn``; poles at ``z = 0 (mod 2K)``."""
    k = _modulus(k)
    if k.k < 1.0:
        K = complete_K(k)
        poles = _nearest(z, 0.0, 2.0 * K)
    else:
        poles = np.zeros_like(np.asarray(z, dtype=float))
    _check_poles(z, poles, "ds", pole_tol)
    t = jacobi_triple(z, k)
    return t.dn / t.sn


def sc_derivative(z, k, pole_tol=POLE_TOL):
    """d/dz sc(z, k) = dn / cn^2."""
    k = _modulus(k)
    if k.k < 1.0:
        K = complete_K(k)
        _check_poles(z, _nearest(z, K, 2.0 * K), "sc'", pole_tol)
    t = jacobi_triple(z, k)
    return t.dn / (t.cn * t.cn)
