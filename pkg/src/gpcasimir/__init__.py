"""Condensates, vacuum energies and Casimir forces for exactly solvable
(1+1)-dimensional Gross-Pitaevskii models with an unstable mode.

Three backgrounds are covered: an attractive delta potential, a free field on
an interval with Robin and Dirichlet ends, and a finite potential hole.
"""

from .condensate import (CondensateSolution, KGap, RobinThresholds, condensate_energy,
                         gp_residual, hole_threshold, robin_thresholds, solve, solve_delta,
                         solve_hole, solve_robin)
from .ellipj import EllipticModulus, complete_K, jacobi_ds, jacobi_sc, jacobi_triple
from .errors import *  # noqa: F401,F403
from .forces import ForceReport, force_of, total_force
from .meanfield import (BoundStateSolution, bound_state, kappa_critical, meanfield_energy,
                        threshold_expansion)
from .models import (Delta, PhysicalParams, PotentialHole, RobinDirichlet, config_from_dict,
                     load_config)
from .spectrum import (FluctuationPotential, VacuumEnergyReport, mode_fn_numeric,
                       stability_scan, vacuum_energy_renormalized, vacuum_energy_subcritical)

__version__ = "0.1.0"
