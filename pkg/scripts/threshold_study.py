"""Near-threshold behavior: quadratic energy coefficients and the Robin modulus.

Fits E_bs and E_cond against the distance to threshold for all three models and
compares with ``threshold_expansion``; then tabulates ``(kappa - kappa_c)/k^2``
for the Robin condensate against ``near_threshold_modulus``.

    python3 scripts/threshold_study.py
"""

import math

import numpy as np

from gpcasimir import PhysicalParams, bound_state, hole_threshold, kappa_critical, solve
from gpcasimir.condensate import near_threshold_modulus
from gpcasimir.ellipj import EllipticModulus, jacobi_sc, sc_derivative
from gpcasimir.meanfield import threshold_expansion
from gpcasimir.models import Delta, PotentialHole, RobinDirichlet

P = PhysicalParams()


def fit_c(make, d):
    out = []
    for energy in (lambda c: bound_state(c, P).energy, lambda c: solve(c, P).energy):
        E = np.array([energy(make(x)) for x in d])
        A = np.stack([d ** 2, d ** 3], axis=1)
        out.append(-np.linalg.lstsq(A, E, rcond=None)[0][0])
    return out


def main():
    d = np.linspace(2e-4, 2e-3, 8)
    U0c = hole_threshold(1.0, 1.0)
    cases = [("delta", lambda x: Delta(1 + x), Delta(1.0))]
    for L in (1.0, 2.2, 5.0):
        kc = kappa_critical(L, 1.0)
        cases.append((f"robin L={L}", lambda x, L=L, kc=kc: RobinDirichlet(kc + x, L),
                      RobinDirichlet(kc, L)))
    cases.append(("hole R=1", lambda x: PotentialHole(U0c + x, 1.0), PotentialHole(U0c, 1.0)))
    print(f"{'model':14s} {'predicted c':>12s} {'fit E_bs':>12s} {'fit E_cond':>12s}")
    for name, make, ref in cases:
        c = threshold_expansion(ref, P)
        cb, cc = fit_c(make, d)
        print(f"{name:14s} {c:12.6f} {cb:12.6f} {cc:12.6f}")

    print("\nRobin modulus: (kappa - kappa_c) / k^2 against alpha_tilde")
    for L in (0.5, 1.0, 2.0):
        alpha = near_threshold_modulus(RobinDirichlet(2.0, L), P)
        kc = kappa_critical(L, 1.0)
        row = []
        for k in (0.05, 0.02, 0.01):
            beta = 1 / math.sqrt(1 + k * k)
            mod = EllipticModulus.from_complement(k)
            kappa = -beta * sc_derivative(-beta * L, mod) / jacobi_sc(-beta * L, mod)
            row.append((kappa - kc) / k ** 2)
        print(f"L={L}: alpha_tilde = {alpha:+.6f}; measured " + ", ".join(f"{r:+.6f}" for r in row))


if __name__ == "__main__":
    main()
