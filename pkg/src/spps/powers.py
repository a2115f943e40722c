"""Recursive families of formal powers.

Three families of grid functions drive everything downstream.  All of them
are built by alternating cumulative integrals, so no numerical
differentiation ever happens:

* X-type: the coefficient sequence of the eigenvalue power series around
  center 0, generated from a particular solution u0 of the lam = 0 equation.
  Odd members integrate (weight * previous even - r1 * previous odd); even
  members integrate -(previous odd) / (p u0^2).
* Y-type: the auxiliary family that *builds* u0 itself out of the potential
  (odd members integrate previous * p * x^{2(l+1)} * q_eff, even members
  previous * x^{-2(l+1)} / p).
* Z-type: same recursion as X but around a nonzero center lambda0, with the
  weight p(x) = exp(lambda0 * int_0^x r1).

Each family obeys explicit nodewise growth bounds (geometric in the
constants estimated here, factorially damped in the order); `check_bounds`
verifies them with 1e-10 slack and warns — or raises under strict mode — on
violation.

Near the origin every odd power behaves like A x^kappa with a known kappa.
The first few computed values sit on the steep part of that law where
quadrature noise would be amplified by the division through u0^2, so the
leading J nodes of each odd power are replaced by the law anchored at
x_{J+1} (the classic stabilization for these recursions).  kappa depends on
whether the problem has a first-order eigenvalue term: with r1 absent the
odd powers vanish to two extra orders per step.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from .grid import (Grid, GridFunction, SingularHead, _cumulative_values,
                   cumulative_integral)
from .problem import ProblemSpec, sample_coefficients

__all__ = [
    "FormalPowerSet", "PowerConstants", "BoundReport",
    "PowerBoundWarning", "PowerBoundError",
    "compute_X", "compute_Y", "compute_Z", "estimate_constants", "dump_powers",
]


class PowerBoundWarning(UserWarning):
    pass


class PowerBoundError(RuntimeError):
    pass


@dataclass(frozen=True)
class PowerConstants:
    """Growth constants entering the nodewise bounds.

    C1 bounds |p u0 (r0 u0 + r1 u0')| / x^{2l+1}, C2 bounds
    x^{2l+2} / |p u0^2|, C3 bounds |r1|; C = max(1, C1, C2, C3).  When r1
    vanishes identically the sharper pair (C1 without the r1 part measured
    against x^{2l+2}, and the same C2) gives the refined constant
    ``C_refined`` = max of the two — note no clamping at 1.
    """

    C: float
    C1: float
    C2: float
    C3: float
    C_refined: Optional[float] = None
    C1_refined: Optional[float] = None
    growth_C: Optional[float] = None      # sup |q_eff| x^{-alpha_eff}  (Y only)
    alpha_eff: Optional[float] = None


@dataclass
class BoundReport:
    checked: str                  # 'full' | 'sampled' | 'off'
    families: tuple[str, ...] = ()
    max_ratio: float = 0.0        # worst |power| / allowed bound
    violations: int = 0
    worst_order: int = -1
    worst_node: int = -1


@dataclass
class FormalPowerSet:
    """The first 2N+1 members of one family, plus everything needed to
    reason about their accuracy."""

    kind: Literal["X", "Y", "Z"]
    order: int
    grid: Grid
    l: float
    lambda0: complex
    powers: list[np.ndarray] = field(repr=False)
    pfun: np.ndarray = field(repr=False)
    constants: PowerConstants
    r1_zero: bool
    J: int
    bound_report: BoundReport

    def power(self, n: int) -> GridFunction:
        """n-th member; n = -1 gives the identically-zero convention."""
        if n == -1:
            return GridFunction(self.grid, np.zeros(self.grid.M + 1))
        return GridFunction(self.grid, self.powers[n])

    def __len__(self):
        return len(self.powers)


# ---------------------------------------------------------------------------
# Integration with origin handling
# ---------------------------------------------------------------------------

def _integrate(vals: np.ndarray, grid: Grid, exponent: float, coeff: complex,
               exact_zone: int = 0) -> np.ndarray:
    """Cumulative integral of an integrand known to behave like
    coeff * x^exponent near 0.

    exact_zone >= 5 promises the law is exact on that many leading nodes.
    Otherwise node 0 gets the analytic limit, and non-polynomial heads get
    the first-panel analytic correction.
    """
    if exact_zone >= 5:
        head = SingularHead(exponent, coeff, exact_nodes=exact_zone)
        return _cumulative_values(vals, grid, head)
    vals[0] = coeff if exponent == 0.0 else 0.0
    head = None
    if coeff != 0 and exponent != 0.0 and exponent > -1.0:
        if not (float(exponent).is_integer() and 0 <= exponent <= 5):
            head = SingularHead(exponent, coeff, exact_nodes=0)
    return _cumulative_values(vals, grid, head)


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

def _values(f) -> np.ndarray:
    """Accept a GridFunction or a bare node array."""
    return np.asarray(getattr(f, "values", f))


def _constants_from_arrays(l: float, nodes: np.ndarray, w_odd: np.ndarray,
                           recip_scaled: np.ndarray, r1v: np.ndarray,
                           r1_zero: bool,
                           r0_part: Optional[np.ndarray] = None
                           ) -> PowerConstants:
    xi = nodes[1:]
    C1 = float(np.max(np.abs(w_odd[1:]) / xi ** (2 * l + 1)))
    C2 = float(np.max(recip_scaled[1:]))
    C3 = float(np.max(np.abs(r1v)))
    C = max(1.0, C1, C2, C3)
    C1r = Cr = None
    if r1_zero and r0_part is not None:
        C1r = float(np.max(np.abs(r0_part[1:]) / xi ** (2 * l + 2)))
        Cr = max(C1r, C2)
    return PowerConstants(C=C, C1=C1, C2=C2, C3=C3,
                          C_refined=Cr, C1_refined=C1r)


def estimate_constants(p: ProblemSpec, u0, du0, pfun, grid: Grid
                       ) -> PowerConstants:
    """Sup-based growth constants over the interior nodes.

    C1 bounds the odd-step weight p u0 (r0 u0 + r1 u0') against x^{2l+1},
    C2 bounds x^{2l+2}/|p u0^2|, C3 = max |r1|.  With r1 absent the refined
    pair (|r0 u0^2| against x^{2l+2}, and C2) is attached as well.
    """
    nodes = grid.nodes
    u0v, du0v, pv = _values(u0), _values(du0), _values(pfun)
    _qv, r0v, r1v = sample_coefficients(p, nodes)
    r1_zero = not np.any(r1v)
    w_odd = np.zeros(nodes.shape[0],
                     dtype=np.result_type(pv, u0v, du0v, r0v, r1v))
    w_odd[1:] = pv[1:] * u0v[1:] * (r0v[1:] * u0v[1:] + r1v[1:] * du0v[1:])
    with np.errstate(divide="ignore", over="ignore"):
        recip_scaled = nodes[1:] ** (2 * p.l + 2) / np.abs(
            pv[1:] * u0v[1:] * u0v[1:])
    recip_scaled = np.concatenate([[0.0], recip_scaled])
    r0_part = pv * r0v * u0v * u0v if r1_zero else None
    return _constants_from_arrays(p.l, nodes, w_odd, recip_scaled, r1v,
                                  r1_zero, r0_part)


# ---------------------------------------------------------------------------
# Bound suite
# ---------------------------------------------------------------------------

def _log_poch(a: float, n: int) -> float:
    """log (a)_n for a > 0 via lgamma."""
    if n == 0:
        return 0.0
    return math.lgamma(a + n) - math.lgamma(a)

def _xz_log_bounds(n: int, l: float, C: float, lx: np.ndarray,
                   refined: Optional[float], r1_zero: bool) -> np.ndarray:
    """log of the allowed envelope for the n-th X/Z power on nodes > 0.

    The plain family bound always applies; with r1 absent the refined
    (factorially smaller) envelope applies as well and we use the tighter
    of the two.
    """
    logC = math.log(C) if C > 0 else -math.inf
    if n % 2 == 0:
        k = n // 2
        plain = 2 * k * logC + k * lx - _log_poch(2 * l + 2, k)
    else:
        k = (n - 1) // 2
        plain = (math.log(k + 1) + (2 * k + 1) * logC
                 + (2 * (l + 1) + k) * lx - _log_poch(2 * l + 2, k + 1))
    if not (r1_zero and refined is not None and refined > 0):
        return plain
    logCr = math.log(refined)
    if n % 2 == 0:
        k = n // 2
        ref = (2 * k * logCr + 2 * k * lx - 2 * k * math.log(2.0)
               - math.lgamma(k + 1) - _log_poch(l + 1.5, k))
    else:
        k = (n - 1) // 2
        ref = ((2 * k + 1) * logCr + (2 * k + 1 + 2 * (l + 1)) * lx
               - (2 * k + 1) * math.log(2.0) - math.lgamma(k + 1)
               - _log_poch(l + 1.5, k + 1))
    return np.minimum(plain, ref)


def _y_log_bounds(n: int, l: float, growth_C: float, alpha: float,
                  lx: np.ndarray) -> np.ndarray:
    """log envelope for the n-th Y power (n even: index 2k; odd: 2k-1)."""
    if n == 0:
        return np.zeros(lx.shape)
    if growth_C == 0.0:
        return np.full(lx.shape, -math.inf)
    two_a = 2.0 + alpha
    omega = (2 * l + 1) / two_a
    logC = math.log(growth_C)
    if n % 2 == 0:
        k = n // 2
        return (k * logC + k * two_a * lx - 2 * k * math.log(two_a)
                - math.lgamma(k + 1) - _log_poch(omega + 1, k))
    k = (n + 1) // 2
    return (k * logC + (2 * l + 1 + k * two_a) * lx
            - (2 * k - 1) * math.log(two_a) - math.lgamma(k)
            - _log_poch(omega + 1, k))


def check_bounds(pset: "FormalPowerSet", nodes_mode: str = "full",
                 strict: bool = False) -> BoundReport:
    """Verify the family's nodewise envelopes with small relative slack.

    The slack grows linearly with the member order — each chained
    quadrature hands its relative error down the recursion, and for
    monomial coefficients the envelope is saturated (every inequality in
    its derivation is an equality), so the member's own roundoff is the
    only separation available.  nodes_mode 'full' checks every interior
    node; 'sampled' checks a fixed geometric subset (what the solver hot
    loop uses).  Violations emit :class:`PowerBoundWarning`, or raise
    :class:`PowerBoundError` under strict mode.
    """
    grid = pset.grid
    M = grid.M
    if nodes_mode == "sampled":
        idx = np.unique(np.clip(np.concatenate([
            np.geomspace(1, M, 48).astype(int), [pset.J + 1, M]]), 1, M))
    else:
        idx = np.arange(1, M + 1)
    x = grid.nodes[idx]
    lx = np.log(x)

    cst = pset.constants
    report = BoundReport(checked=nodes_mode)
    fams = []
    worst = 0.0
    violations = 0
    w_order = w_node = -1
    for n in range(len(pset.powers)):
        if pset.kind in ("X", "Z"):
            lb = _xz_log_bounds(n, pset.l, cst.C, lx, cst.C_refined, pset.r1_zero)
        else:
            lb = _y_log_bounds(n, pset.l, cst.growth_C or 0.0,
                               cst.alpha_eff if cst.alpha_eff is not None else 0.0,
                               lx)
        with np.errstate(over="ignore"):
            allowed = np.exp(lb) * (1.0 + 1e-10 * (n + 1.0)) + 1e-300
        vals = np.abs(pset.powers[n][idx])
        ratio = vals / allowed
        mx = float(ratio.max()) if ratio.size else 0.0
        if mx > worst:
            worst = mx
            w_order = n
            w_node = int(idx[int(ratio.argmax())])
        violations += int((ratio > 1.0).sum())
    if pset.kind in ("X", "Z"):
        fams.append("plain")
        if pset.r1_zero and cst.C_refined is not None:
            fams.append("refined")
    else:
        fams.append("potential-growth")
    report.families = tuple(fams)
    report.max_ratio = worst
    report.violations = violations
    report.worst_order = w_order
    report.worst_node = w_node
    if violations:
        msg = (f"{pset.kind}-family bound exceeded at {violations} node(s); "
               f"worst ratio {worst:.6g} at order {w_order}, node {w_node}")
        if strict:
            raise PowerBoundError(msg)
        warnings.warn(msg, PowerBoundWarning, stacklevel=2)
    return report


# ---------------------------------------------------------------------------
# X / Z recursion
# ---------------------------------------------------------------------------

def _odd_kappa(l: float, m: int, r1_zero: bool) -> float:
    """Leading exponent of the (2m-1)-th X/Z power near the origin."""
    if r1_zero:
        return 2.0 * (l + 1.0) + 2.0 * (m - 1) + 1.0
    return 2.0 * (l + 1.0) + (m - 1)


# Power-law anchoring.  A cumulative quadrature value of x^kappa is reliable
# only where the panel width resolves the law, i.e. x >> kappa * h; anchoring
# the near-origin extrapolation at a fixed early node would fit the law to
# quadrature noise as soon as kappa grows past ~10.  The factor below puts
# the fit where the local panel error of x^kappa is ~1e-12.
_ANCHOR_FACTOR = 48


def _anchor_node(kappa: float, J: int, M: int) -> int:
    return int(min(max(J + 1, math.ceil(_ANCHOR_FACTOR * kappa)), M))


def _law_coeff(value, x: float, expo: float):
    """value / x**expo, or 0 when the power underflows (values that tiny sit
    below the denormal floor and carry no usable law information)."""
    den = x ** expo
    if den == 0.0 or value == 0.0 or not math.isfinite(den):
        return 0.0
    return value / den


def _law_quadrature(integ: np.ndarray, grid: Grid, expo: float, c1,
                    law: np.ndarray, anchor: int) -> np.ndarray:
    """Cumulative integral of an integrand whose leading behaviour is a
    known steep power law c*x^expo.

    Plain panel quadrature of x^expo is accurate only where the panels
    resolve the law (x >> expo*h); the stretch just past the anchor is the
    dominant error source of the whole recursion, and it compounds because
    every later order integrates over it again.  Splitting the law off makes
    it a non-issue: fit c at the anchor node, integrate integ - c*x^expo
    numerically, and add c*x^(expo+1)/(expo+1) back in closed form.  When
    the fit degenerates (law underflow, non-finite ratio) fall back to the
    plain rule.
    """
    den = law[anchor]
    if den != 0.0 and math.isfinite(den):
        cs = integ[anchor] / den
        if cs != 0.0 and np.all(np.isfinite(cs)):
            g = integ - cs * law
            out = _integrate(g, grid, expo, c1 - cs)
            out += (cs / (expo + 1.0)) * (law * grid.nodes)
            return out
    return _integrate(integ, grid, expo, c1)


def _run_xz(kind: str, p: ProblemSpec, u0v: np.ndarray, du0v: np.ndarray,
            leading_coeff: complex, lambda0: complex, N: int, grid: Grid,
            J: int, bounds: str, strict: bool) -> FormalPowerSet:
    nodes = grid.nodes
    _qv, r0v, r1v = sample_coefficients(p, nodes)
    r1_zero = not np.any(r1v)

    if u0v.shape != nodes.shape or du0v.shape != nodes.shape:
        raise ValueError("particular solution not sampled on this grid")
    if not np.abs(u0v[1:]).all():
        j = 1 + int(np.argmin(np.abs(u0v[1:])))
        raise ValueError(
            f"particular solution vanishes at node {j} (x={nodes[j]:.6g}); "
            "the recursion divides by its square there — use a shifted "
            "center with a nonvanishing solution")

    if lambda0 == 0:
        pv = np.ones(grid.M + 1)
    else:
        # keep real-axis centers in float64
        lam_s = lambda0.real if lambda0.imag == 0 else lambda0
        R1 = cumulative_integral(GridFunction(grid, r1v))
        pv = np.exp(lam_s * R1.values)

    l = p.l
    # node 0 is assigned by its limit below; du0v[0] may legitimately be
    # infinite for -1/2 <= l < 0 and must never enter the arithmetic
    w_odd = np.empty(grid.M + 1,
                     dtype=np.result_type(pv, u0v, du0v, r0v, r1v))
    w_odd[1:] = pv[1:] * u0v[1:] * (r0v[1:] * u0v[1:] + r1v[1:] * du0v[1:])
    if l == -0.5:
        # u0 u0' tends to leading^2 / 2 instead of 0 at the edge case
        lim = 0.5 * complex(leading_coeff) ** 2 * complex(pv[0]) * complex(r1v[0])
        w_odd[0] = lim if np.iscomplexobj(w_odd) else lim.real
    else:
        w_odd[0] = 0.0

    recip = np.zeros(grid.M + 1, dtype=np.result_type(pv, u0v))
    recip[1:] = 1.0 / (pv[1:] * u0v[1:] * u0v[1:])
    dtype = np.result_type(w_odd, recip)

    r0_part = None
    if r1_zero:
        r0_part = pv * r0v * u0v * u0v
    constants = _constants_from_arrays(
        l, nodes,
        w_odd,
        np.abs(recip) * nodes ** (2 * l + 2),
        r1v, r1_zero, r0_part)

    one = np.ones(grid.M + 1, dtype=dtype)
    powers: list[np.ndarray] = [one]
    zero = np.zeros(grid.M + 1, dtype=dtype)

    # running x^expo arrays for the leading law of each integrand; the
    # exponents advance by 2 per order when r1 vanishes, else by 1
    xstep = nodes * nodes if r1_zero else nodes
    law_odd = nodes ** (_odd_kappa(l, 1, r1_zero) - 1.0)
    law_even = nodes ** (_odd_kappa(l, 1, r1_zero) - (2.0 * l + 2.0))

    for m in range(1, N + 1):
        prev_even = powers[2 * m - 2]
        prev_odd = powers[2 * m - 3] if m >= 2 else zero
        kappa = _odd_kappa(l, m, r1_zero)
        anchor = _anchor_node(kappa, J, grid.M)
        xa = nodes[anchor]

        integ = w_odd * prev_even
        if not r1_zero:
            integ = integ - r1v * prev_odd
        c = _law_coeff(integ[1], nodes[1], kappa - 1.0)
        raw = _law_quadrature(integ, grid, kappa - 1.0, c, law_odd, anchor)
        A = _law_coeff(raw[anchor], xa, kappa)
        raw[1:anchor] = A * nodes[1:anchor] ** kappa
        raw[0] = 0.0
        powers.append(raw)

        integ_e = raw * recip
        p_e = kappa - (2 * l + 2.0)
        ce = _law_coeff(integ_e[1], nodes[1], p_e)
        even = -_law_quadrature(integ_e, grid, p_e, ce, law_even, anchor)
        B = _law_coeff(even[anchor], xa, p_e + 1.0)
        even[1:anchor] = B * nodes[1:anchor] ** (p_e + 1.0)
        powers.append(even)

        law_odd *= xstep
        law_even *= xstep

    pset = FormalPowerSet(kind=kind, order=N, grid=grid, l=l, lambda0=lambda0,
                          powers=powers, pfun=pv, constants=constants,
                          r1_zero=r1_zero, J=J,
                          bound_report=BoundReport(checked="off"))
    if bounds != "off":
        pset.bound_report = check_bounds(pset, bounds, strict)
    return pset


def compute_X(p: ProblemSpec, u0, du0, N: int,
              grid: Grid, J: int = 10, bounds: str = "sampled",
              strict: bool = False,
              leading_coeff: complex = 1.0) -> FormalPowerSet:
    """X-type family around center 0 from a particular solution's nodal
    values (GridFunctions or bare arrays).  powers[0] is identically 1;
    indices run to 2N."""
    return _run_xz("X", p, _values(u0), _values(du0), leading_coeff, 0.0,
                   N, grid, J, bounds, strict)


def compute_Z(p: ProblemSpec, u0, du0,
              lambda0: complex, N: int, grid: Grid, J: int = 10,
              bounds: str = "sampled", strict: bool = False,
              leading_coeff: complex = 1.0) -> FormalPowerSet:
    """Z-type family around a (generally complex) center lambda0.

    With lambda0 = 0 this reduces exactly to :func:`compute_X` (the weight
    p collapses to 1)."""
    return _run_xz("Z", p, _values(u0), _values(du0), leading_coeff,
                   complex(lambda0), N, grid, J, bounds, strict)


# ---------------------------------------------------------------------------
# Y recursion (builds particular solutions)
# ---------------------------------------------------------------------------

def compute_Y(p: ProblemSpec, N: int, grid: Grid, J: int = 10,
              lambda0: complex = 0.0, bounds: str = "sampled",
              strict: bool = False) -> FormalPowerSet:
    """Y-type family: the series ingredients of the regular particular
    solution, optionally for the lambda0-shifted operator.

    For lambda0 != 0 the recursion runs with the weight p(x) and the
    effective potential q - lambda0 r0 - lambda0 (l+1) r1 / x, so that
    x^{l+1} * sum(even members) solves the shifted equation.
    """
    nodes = grid.nodes
    qv, r0v, r1v = sample_coefficients(p, nodes)
    l = p.l

    lam0 = complex(lambda0)
    alpha_parts = [p.alpha]
    q_eff = qv.copy()
    if lam0 != 0:
        lam_s = lam0.real if lam0.imag == 0 else lam0
        if r0v.any():
            q_eff = q_eff - lam_s * r0v
            alpha_parts.append(0.0)
        if r1v.any():
            corr = np.zeros(grid.M + 1, dtype=np.result_type(r1v, q_eff))
            corr[1:] = (l + 1.0) * r1v[1:] / nodes[1:]
            q_eff = q_eff - lam_s * corr
            alpha_parts.append(-1.0)
        R1 = cumulative_integral(GridFunction(grid, r1v))
        pv = np.exp(lam_s * R1.values)
    else:
        pv = np.ones(grid.M + 1)
    alpha_eff = min(alpha_parts)

    # The envelope constant pairs one odd step with one even step, so it
    # must absorb the exponential weight on both: the odd integrand carries
    # p, the even one 1/p.  sup 1/|p| >= 1 (p(0) = 1), which keeps the
    # paired constant valid for the odd members as well.
    with np.errstate(all="ignore"):
        if lam0 == 0:
            growth = np.abs(q_eff[1:]) * nodes[1:] ** (-alpha_eff)
            inv_p_sup = 1.0
        else:
            growth = np.abs(pv[1:] * q_eff[1:]) * nodes[1:] ** (-alpha_eff)
            inv_p_sup = float(np.max(1.0 / np.abs(pv)))
    growth_C = (float(np.nanmax(growth)) if growth.size else 0.0) * inv_p_sup

    w_odd = np.empty(grid.M + 1, dtype=np.result_type(pv, q_eff))
    w_odd[0] = 0.0
    w_odd[1:] = pv[1:] * nodes[1:] ** (2.0 * (l + 1.0)) * q_eff[1:]
    w_even = np.empty(grid.M + 1, dtype=pv.dtype)
    w_even[0] = 0.0
    w_even[1:] = nodes[1:] ** (-2.0 * (l + 1.0)) / pv[1:]
    exact_even_law = lam0 == 0          # then w_even is exactly a power law

    if np.all(q_eff[1:] == 0.0):
        # unperturbed problem: u0 is exactly x^{l+1}; all higher members 0
        dtype = np.result_type(w_odd, w_even)
        powers = [np.ones(grid.M + 1, dtype=dtype)]
        for _ in range(N):
            powers.append(np.zeros(grid.M + 1, dtype=dtype))
            powers.append(np.zeros(grid.M + 1, dtype=dtype))
        constants = PowerConstants(C=0, C1=0, C2=0, C3=0, growth_C=0.0,
                                   alpha_eff=alpha_eff)
        return FormalPowerSet(kind="Y", order=N, grid=grid, l=l,
                              lambda0=lam0, powers=powers, pfun=pv,
                              constants=constants, r1_zero=True, J=J,
                              bound_report=BoundReport(checked="off"))

    two_a = 2.0 + alpha_eff
    powers = [np.ones(grid.M + 1, dtype=np.result_type(w_odd, w_even))]

    for m in range(1, N + 1):
        prev = powers[2 * m - 2]
        kappa = 2 * l + 1 + m * two_a
        anchor = _anchor_node(kappa, J, grid.M)
        xa = nodes[anchor]

        integ = w_odd * prev
        ph = kappa - 1.0
        c = _law_coeff(integ[1], nodes[1], ph)
        raw = _integrate(integ, grid, ph, c)
        A = _law_coeff(raw[anchor], xa, kappa)
        raw[1:anchor] = A * nodes[1:anchor] ** kappa
        raw[0] = 0.0
        powers.append(raw)

        integ_e = raw * w_even
        p_e = kappa - 2.0 * (l + 1.0)       # = m(2+alpha) - 1 > -1
        zone = min((anchor // 5) * 5, grid.M - 5)
        if exact_even_law and zone >= 5:
            # below the anchor the integrand is exactly A x^{p_e}
            even = _integrate(integ_e, grid, p_e, A, exact_zone=zone)
        else:
            ce = _law_coeff(integ_e[1], nodes[1], p_e)
            even = _integrate(integ_e, grid, p_e, ce)
            B = _law_coeff(even[anchor], xa, p_e + 1.0)
            even[1:anchor] = B * nodes[1:anchor] ** (p_e + 1.0)
        powers.append(even)

    constants = PowerConstants(C=0, C1=0, C2=0, C3=0, growth_C=growth_C,
                               alpha_eff=alpha_eff)
    pset = FormalPowerSet(kind="Y", order=N, grid=grid, l=l, lambda0=lam0,
                          powers=powers, pfun=pv, constants=constants,
                          r1_zero=bool(np.all(r1v == 0.0)), J=J,
                          bound_report=BoundReport(checked="off"))
    if bounds != "off":
        pset.bound_report = check_bounds(pset, bounds, strict)
    return pset


# ---------------------------------------------------------------------------
# CSV dump
# ---------------------------------------------------------------------------

def dump_powers(pset: FormalPowerSet, path, stride: int = 1) -> None:
    """Write the family to CSV in long format: order, x, Re, Im."""
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["order", "x", "re", "im"])
        x = pset.grid.nodes
        for n, arr in enumerate(pset.powers):
            vals = np.asarray(arr, dtype=np.complex128)
            for j in range(0, pset.grid.M + 1, stride):
                w.writerow([n, repr(float(x[j])),
                            repr(float(vals[j].real)), repr(float(vals[j].imag))])
