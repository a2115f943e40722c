"""Spectral-parameter power series solver for perturbed Bessel operators.

Eigenvalue problems -u'' + (l(l+1)/x^2 + q(x)) u = lam (r1 u' + r0 u) on
(0, a] with a regular endpoint condition at 0 and beta u(a) + gamma u'(a) = 0.
Eigenvalues come out as roots of an explicitly computed polynomial in the
spectral parameter; the coefficients are built by recursive quadrature.

The usual entry points:

>>> from spps import ProblemSpec, SolverSettings, solve
>>> p = ProblemSpec.from_strings(l=0.25, a=1.0, q="0", r0="1", r1="0",
...                              alpha=0.0)
>>> res = solve(p, SolverSettings(N=40, M=5000, shift_s=50, shift_d=2,
...                               n_centers=3, real_mode=True),
...             u0_expr="x^1.25", du0_expr="1.25*x^0.25")
>>> round(res.eigenvalues[0].lam.real, 6)
12.187139
"""

from .expr import EvalError, ParseError, as_callable, evaluate, parse, pretty, sample
from .grid import Grid, GridError, GridFunction, SingularHead, cumulative_integral
from .problem import (ProblemError, ProblemSpec, ValidationReport,
                      sample_coefficients, validate)
from .powers import (BoundReport, FormalPowerSet, PowerBoundError,
                     PowerBoundWarning, PowerConstants, check_bounds,
                     compute_X, compute_Y, compute_Z)
from .usol import (NonvanishingReport, ParticularSolution,
                   ParticularSolutionError, ResidualReport, build_u0_analytic,
                   build_u0_series, build_u0_shifted, check_nonvanishing,
                   from_values, ode_residual, regular_solution_envelope,
                   series_tail_bound)
from .solution import (EvaluationError, SPPSSolution, build_solution,
                       dump_solution, evaluate as evaluate_solution,
                       transmute_power, truncation_bound)
from .spectrum import (CharPoly, EigenRecord, EigenResult, SolverError,
                       SolverSettings, char_tail, characteristic_poly,
                       phi_eval, roots, rouche_radius, solve)
from .bench import (BenchmarkCase, BenchReport, Reference, benchmark_cases,
                    run_benchmark)

__version__ = "0.1.0"

__all__ = [
    "EvalError", "ParseError", "as_callable", "evaluate", "parse", "pretty",
    "sample",
    "Grid", "GridError", "GridFunction", "SingularHead", "cumulative_integral",
    "ProblemError", "ProblemSpec", "ValidationReport", "sample_coefficients",
    "validate",
    "BoundReport", "FormalPowerSet", "PowerBoundError", "PowerBoundWarning",
    "PowerConstants", "check_bounds", "compute_X", "compute_Y", "compute_Z",
    "NonvanishingReport", "ParticularSolution", "ParticularSolutionError",
    "ResidualReport", "build_u0_analytic", "build_u0_series",
    "build_u0_shifted", "check_nonvanishing", "from_values", "ode_residual",
    "regular_solution_envelope", "series_tail_bound",
    "EvaluationError", "SPPSSolution", "build_solution", "dump_solution",
    "evaluate_solution", "transmute_power", "truncation_bound",
    "CharPoly", "EigenRecord", "EigenResult", "SolverError", "SolverSettings",
    "char_tail", "characteristic_poly", "phi_eval", "roots", "rouche_radius",
    "solve",
    "BenchmarkCase", "BenchReport", "Reference", "benchmark_cases",
    "run_benchmark",
    "__version__",
]
