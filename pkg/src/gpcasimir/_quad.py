"""Quadrature helpers used across modules."""

import math

import numpy as np
from scipy import integrate

EPSREL = 1e-12


def quad(f, a, b, points=None, epsrel=EPSREL, epsabs=0.0, limit=400):
    val, _ = integrate.quad(f, a, b, points=points, epsrel=epsrel, epsabs=epsabs, limit=limit)
    return val


def quad_tail(f, x0, rate, epsrel=EPSREL, epsabs=0.0):
    """``int_{x0}^inf f(x) dx`` via ``x = x0 - ln(u)/rate``, u in (0, 1]."""

    def g(u):
        if u <= 0.0:
            return 0.0
        return f(x0 - math.log(u) / rate) / (rate * u)

    val, _ = integrate.quad(g, 0.0, 1.0, epsrel=epsrel, epsabs=epsabs, limit=400)
    return val


def gauss_panels(edges, order):
    """Composite Gauss-Legendre nodes and weights on consecutive panels."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    weights = 0.5 * (hi - lo) * w
    return nodes.ravel(), weights.ravel()
