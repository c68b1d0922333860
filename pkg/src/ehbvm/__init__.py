"""Energy- and invariant-conserving one-step methods for Hamiltonian systems.

Gauss, HBVM(k, s) and Enhanced HBVM(k, s) methods share one implementation;
see :mod:`ehbvm.integrator`.
"""
from .diagnostics import RunSummary, estimate_order, reference_solution, summarize
from .exceptions import (AlphaOverflowWarning, ConfigurationError, DomainError, GridMismatchError,
                         ProblemValidationError, ReferenceConsistencyError, SingularityError,
                         UnsupportedOrderError)
from .integrator import (MethodConfig, StageState, StepResult, build_tableau, integrate,
                         recover_alpha, step)
from .legendre import LegendreTables, build_tables, eval_antiderivatives, eval_basis
from .quadrature import GaussRule, gauss_rule
from .systems import (HamiltonianProblem, apply_J, get_problem, harmonic_oscillator,
                      kepler_problem, quartic_oscillator, register_problem, validate_problem)
from .trajectory import Trajectory

__version__ = "0.1.0"
