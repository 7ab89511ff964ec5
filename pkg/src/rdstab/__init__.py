"""Stability analysis and simulation of the generalized reaction-diffusion system

    u_t - d1 Lap u = (f(u) - lam v) phi(u)
    v_t - d2 Lap v = sigma (g(u) - v) phi(u)

on bounded domains with no-flux boundaries.
"""

from .analysis import (EquilibriumReport, Interval, Rectangle, SpectrumConfig, TuringReport,
                       Verdict, check_global_ode, classify_pde_stability, find_equilibrium,
                       neumann_eigenvalues)
from .bounds import (BoundsReport, Decomposition, check_invariant_rectangle, compute_bounds,
                     decompose)
from .errors import (BlowupError, ConfigError, DomainError, MultiRootError, NonFiniteError,
                     PreconditionError, RDStabError, RootError, StepError, SublinearityError,
                     TruncationError)
from .lyapunov import (GlobalVerdict, LyapunovConfig, attach_lyapunov, eval_H, eval_V,
                       verdict_global)
from .model import (REFERENCE_FHN, REFERENCE_LE, HypothesisReport, ModelSpec, ScalarFn, check_hypotheses,
                    preset_fitzhugh_nagumo, preset_lengyel_epstein)
from .sim import (Constant, Field, Grid1D, Scenario, SinePerturbed, Trajectory, integrate_ode,
                  integrate_pde_1d, sweep)

__version__ = "0.1.0"

__all__ = [
    "BlowupError", "BoundsReport", "ConfigError", "Constant", "Decomposition", "DomainError",
    "EquilibriumReport", "Field", "GlobalVerdict", "Grid1D", "HypothesisReport", "Interval",
    "LyapunovConfig", "ModelSpec", "MultiRootError", "NonFiniteError", "REFERENCE_FHN", "REFERENCE_LE",
    "PreconditionError", "RDStabError", "Rectangle", "RootError", "ScalarFn", "Scenario",
    "SinePerturbed", "SpectrumConfig", "StepError", "SublinearityError", "Trajectory",
    "TruncationError", "TuringReport", "Verdict", "attach_lyapunov", "check_global_ode",
    "check_hypotheses", "check_invariant_rectangle", "classify_pde_stability", "compute_bounds",
    "decompose", "eval_H", "eval_V", "find_equilibrium", "integrate_ode", "integrate_pde_1d",
    "neumann_eigenvalues", "preset_fitzhugh_nagumo", "preset_lengyel_epstein", "sweep",
    "verdict_global",
]
