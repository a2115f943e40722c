"""Solution series in the spectral parameter, and what follows from it.

Given the recursive power family around a center and the particular
solution that generated it, this module evaluates the solution and its
derivative at arbitrary spectral points, bounds the truncation error, and
applies the transmutation mapping that sends pure powers of x to scaled
members of the family.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .grid import GridFunction
from .powers import FormalPowerSet, compute_Z, _log_poch
from .problem import sample_coefficients
from .usol import ParticularSolution

__all__ = [
    "EvaluationError", "SPPSSolution", "build_solution", "evaluate",
    "truncation_bound", "transmute_power", "dump_solution",
]


class EvaluationError(ArithmeticError):
    """Series evaluation left the floating-point range."""


@dataclass
class SPPSSolution:
    """Power family + particular solution, ready for spectral evaluation.

    ``lam`` records the last point handed to :func:`evaluate`; it is purely
    informational (evaluation is pure).
    """

    powers: FormalPowerSet
    u0: ParticularSolution
    N: int
    lam: Optional[complex] = None

    @property
    def grid(self):
        return self.powers.grid

    @property
    def lambda0(self) -> complex:
        return complex(self.powers.lambda0)


def build_solution(u0sol: ParticularSolution, N: int, J: int = 10,
                   bounds: str = "sampled",
                   strict: bool = False) -> SPPSSolution:
    """Run the main recursion to order 2N around u0sol's center."""
    pset = compute_Z(u0sol.problem, u0sol.u0, u0sol.du0, u0sol.lambda0, N,
                     u0sol.grid, J=J, bounds=bounds, strict=strict,
                     leading_coeff=u0sol.leading_coeff)
    return SPPSSolution(powers=pset, u0=u0sol, N=N)


def _horner(powers: list, lam: complex, odd: bool) -> np.ndarray:
    """sum_k lam^k P[2k] (even) or sum_{k>=1} lam^k P[2k-1] (odd)."""
    idx = range(1, len(powers), 2) if odd else range(0, len(powers), 2)
    idx = list(idx)
    acc = powers[idx[-1]].astype(np.result_type(powers[idx[-1]], lam),
                                 copy=True)
    for i in reversed(idx[:-1]):
        acc *= lam
        acc += powers[i]
    if odd:
        acc *= lam
    return acc


def evaluate(sol: SPPSSolution, lam: complex
             ) -> Tuple[GridFunction, GridFunction]:
    """Solution u(., lam) and its derivative on the grid.

    u = u0 * S_even and u' = u0' * S_even - S_odd / (p u0), where S_even
    and S_odd are the Horner-evaluated partial sums in (lam - center).
    The subtraction-safe derivative form never divides u by u0.
    """
    g = sol.grid
    lt = complex(lam) - sol.lambda0
    lam_s: complex | float = lt.real if lt.imag == 0.0 else lt
    S_even = _horner(sol.powers.powers, lam_s, odd=False)
    S_odd = _horner(sol.powers.powers, lam_s, odd=True)
    u0v = sol.u0.u0.values
    du0v = sol.u0.du0.values
    pv = sol.powers.pfun
    u = u0v * S_even
    du = np.empty_like(u)
    du[1:] = du0v[1:] * S_even[1:] - S_odd[1:] / (pv[1:] * u0v[1:])
    du[0] = du0v[0]
    if not (np.all(np.isfinite(u[1:])) and np.all(np.isfinite(du[1:]))):
        raise EvaluationError(
            f"series evaluation overflowed at |lam - center| = {abs(lt):.3g}"
            "; rebuild the family around a center closer to lam "
            "(spectral shift) or reduce N")
    sol.lam = complex(lam)
    return GridFunction(g, u), GridFunction(g, du)


# ---------------------------------------------------------------------------
# Truncation error
# ---------------------------------------------------------------------------

def _log_tail_sum(log_term, start: int, hint_peak: float) -> float:
    """Sum exp(log_term(k)) for k >= start, stably in the log domain."""
    logs = []
    top = -math.inf
    k = start
    limit = start + 200000
    while k < limit:
        lt = log_term(k)
        logs.append(lt)
        top = max(top, lt)
        # stop once terms are decreasing and too small to matter
        if k > hint_peak and lt < top - 45.0:
            break
        k += 1
    if top == -math.inf:
        return 0.0
    acc = sum(math.exp(lt - top) for lt in logs)
    return math.exp(top) * acc


def truncation_bound(sol: SPPSSolution, lam: complex,
                     x: Optional[float] = None) -> float:
    """Rigorous bound for |u - u_N| at spectral point ``lam``.

    Sums the envelope tail directly: the general weight is
    (|lam| C^2 x)^k / (2l+2)_k; with no first-order coefficient the sharper
    (|lam| C^2 x^2 / 4)^k / (k! (l+3/2)_k) applies with its own constant.
    Monotone nonincreasing in N, zero at lam = center.
    """
    pw = sol.powers
    g = sol.grid
    if x is None:
        x = g.a
    r = abs(complex(lam) - sol.lambda0)
    if r == 0.0 or x <= 0.0:
        return 0.0
    nodes = g.nodes
    hi = int(np.searchsorted(nodes, x * (1 + 1e-12), side="right"))
    u0max = float(np.max(np.abs(sol.u0.u0.values[:hi])))
    l = pw.l
    cst = pw.constants
    N = sol.N

    if pw.r1_zero and cst.C_refined is not None:
        base = math.log(r * cst.C_refined ** 2 * x * x / 4.0) \
            if cst.C_refined > 0 else -math.inf
        if base == -math.inf:
            return 0.0

        def log_term(k: int) -> float:
            return k * base - math.lgamma(k + 1.0) - _log_poch(l + 1.5, k)

        peak = r * cst.C_refined ** 2 * x * x / 4.0
    else:
        base = math.log(r * cst.C ** 2 * x)

        def log_term(k: int) -> float:
            return k * base - _log_poch(2.0 * l + 2.0, k)

        peak = r * cst.C ** 2 * x
    tail = _log_tail_sum(log_term, N + 1, peak)
    return u0max * tail


# ---------------------------------------------------------------------------
# Transmutation mapping
# ---------------------------------------------------------------------------

def transmute_power(sol: SPPSSolution, k: int) -> GridFunction:
    """Image of x^{2k+l+1} under the transmutation operator.

    Only meaningful in the plain weight setting (unit zero-order
    coefficient, no first-order coefficient), where the operator
    intertwines the perturbed and unperturbed singular operators.
    """
    pw = sol.powers
    if not pw.r1_zero:
        raise ValueError("transmutation mapping requires no first-order "
                         "coefficient")
    p = sol.u0.problem
    r0v = sample_coefficients(p, sol.grid.nodes)[1]
    if not np.allclose(r0v[1:], 1.0, rtol=0, atol=1e-14):
        raise ValueError("transmutation mapping requires a unit "
                         "zero-order weight")
    if k < 0 or 2 * k >= len(pw.powers):
        raise ValueError(f"power index {k} outside the computed family")
    l = pw.l
    coef = (-1.0) ** k * 4.0 ** k * math.gamma(k + 1.0) \
        * math.exp(_log_poch(l + 1.5, k))
    return GridFunction(sol.grid,
                        coef * sol.u0.u0.values * pw.powers[2 * k])


def dump_solution(path, u: GridFunction, du: Optional[GridFunction] = None,
                  stride: int = 1) -> None:
    """CSV of (x, Re u, Im u[, Re u', Im u']) rows."""
    g = u.grid
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        head = ["x", "re_u", "im_u"]
        if du is not None:
            head += ["re_du", "im_du"]
        wr.writerow(head)
        for j in range(0, g.M + 1, stride):
            row = [f"{g.nodes[j]:.15g}", f"{u.values[j].real:.15g}",
                   f"{complex(u.values[j]).imag:.15g}"]
            if du is not None:
                row += [f"{du.values[j].real:.15g}",
                        f"{complex(du.values[j]).imag:.15g}"]
            wr.writerow(row)
