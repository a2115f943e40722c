"""Uniform grid, grid functions, and cumulative high-order quadrature.

Everything downstream lives on a uniform mesh of M+1 nodes over [0, a] with
M divisible by 5.  Integrals are *cumulative*: F(x_j) = int_0^{x_j} f for
every node j, built panel by panel from groups of six nodes.  Inside a panel
the integrand is replaced by its degree-5 interpolant, which is integrated
exactly from the panel start to each interior node; the per-node weights are
derived once from exact rational arithmetic.

Two escape hatches deal with the origin, where integrands produced by the
power recursions are 0/0 forms or genuinely unbounded:

* a plain call requires a finite value at node 0 (the caller substitutes the
  analytic limit), and
* a :class:`SingularHead` tells the integrator that f behaves like
  c*x**p near 0 — either exactly on a leading block of nodes (the integral
  is then taken analytically there) or asymptotically (the first panel is
  integrated as analytic-law + interpolated residual).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

__all__ = ["Grid", "GridFunction", "SingularHead", "cumulative_integral",
           "divide_flagged", "GridError"]


class GridError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Cumulative Newton-Cotes weights on six unit-spaced nodes
# ---------------------------------------------------------------------------

def _cumulative_weights() -> np.ndarray:
    """W[j, m] = integral over [0, j] of the m-th Lagrange basis polynomial
    on nodes {0,1,2,3,4,5}, computed in exact rational arithmetic.

    Row 5 reproduces the classic closed 6-point rule (19 75 50 50 75 19)/288*5.
    """
    W = np.empty((6, 6), dtype=np.float64)
    for m in range(6):
        # coefficients of prod_{k != m} (s - k) / (m - k), lowest power first
        coeffs = [Fraction(1)]
        denom = Fraction(1)
        for k in range(6):
            if k == m:
                continue
            denom *= (m - k)
            # multiply polynomial by (s - k)
            nxt = [Fraction(0)] * (len(coeffs) + 1)
            for d, c in enumerate(coeffs):
                nxt[d + 1] += c
                nxt[d] -= c * k
            coeffs = nxt
        coeffs = [c / denom for c in coeffs]
        anti = [c / (d + 1) for d, c in enumerate(coeffs)]   # antiderivative
        for j in range(6):
            W[j, m] = float(sum(c * Fraction(j) ** (d + 1) for d, c in enumerate(anti)))
    return W


_CUM_W = _cumulative_weights()
# rows 1..5 transposed, ready for (panels, 6) @ (6, 5)
_CUM_WT = np.ascontiguousarray(_CUM_W[1:, :].T)

_WEIGHT_CACHE: dict = {}


def _cum_weights(h: float, dtype) -> np.ndarray:
    """(6, 5) panel weight matrix scaled by h, cached per (h, dtype) so the
    hot loop's matmul needs no per-call upcast."""
    key = (h, np.dtype(dtype).char)
    W = _WEIGHT_CACHE.get(key)
    if W is None:
        W = np.asarray(_CUM_WT * h, dtype=dtype)
        if len(_WEIGHT_CACHE) > 64:
            _WEIGHT_CACHE.clear()
        _WEIGHT_CACHE[key] = W
    return W


# ---------------------------------------------------------------------------
# Grid / GridFunction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """Uniform mesh on [0, a] with M+1 nodes, M a multiple of 5."""

    a: float
    M: int

    def __post_init__(self):
        if not (self.a > 0):
            raise GridError(f"interval length must be positive, got a={self.a}")
        if self.M < 5 or self.M % 5 != 0:
            raise GridError(f"M must be a positive multiple of 5, got M={self.M}")

    @property
    def h(self) -> float:
        return self.a / self.M

    @cached_property
    def nodes(self) -> np.ndarray:
        # x_0 = 0 and x_M = a hold exactly in floating point
        x = self.a * (np.arange(self.M + 1, dtype=np.float64) / self.M)
        x.flags.writeable = False
        return x

    @property
    def panel_count(self) -> int:
        return self.M // 5


def _coerce(values: np.ndarray) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype == np.complex128 or arr.dtype == np.float64:
        return arr
    if np.iscomplexobj(arr):
        return arr.astype(np.complex128)
    return arr.astype(np.float64)


@dataclass
class GridFunction:
    """Nodal values of a function on a :class:`Grid`.

    Values at interior nodes must be finite; node 0 may carry an infinite
    limit (derivatives of x^s with 0 < s < 1 do, legitimately) and every
    consumer treats it as such.
    """

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = _coerce(self.values)
        if self.values.shape != (self.grid.M + 1,):
            raise GridError(
                f"expected {self.grid.M + 1} nodal values, got shape {self.values.shape}")
        if not np.isfinite(self.values[1:]).all():
            j = 1 + int(np.argmax(~np.isfinite(self.values[1:])))
            raise GridError(f"non-finite value at node {j} (x={self.grid.nodes[j]:.6g})")

    # -- pointwise algebra -------------------------------------------------

    def _other_values(self, other):
        if isinstance(other, GridFunction):
            if other.grid != self.grid:
                raise GridError("grid mismatch in pointwise operation")
            return other.values
        return other    # scalar

    def __add__(self, other):
        return GridFunction(self.grid, self.values + self._other_values(other))

    __radd__ = __add__

    def __sub__(self, other):
        return GridFunction(self.grid, self.values - self._other_values(other))

    def __rsub__(self, other):
        return GridFunction(self.grid, self._other_values(other) - self.values)

    def __mul__(self, other):
        return GridFunction(self.grid, self.values * self._other_values(other))

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(self.grid, -self.values)

    def __truediv__(self, other):
        ov = self._other_values(other)
        o = np.asarray(ov)
        if (o == 0).any():
            j = int(np.argmax(np.asarray(o == 0)))
            raise GridError(
                f"division by zero at node {j}; use divide_flagged() to handle 0/0 nodes")
        return GridFunction(self.grid, self.values / ov)

    # -- conveniences --------------------------------------------------------

    def __len__(self):
        return self.values.shape[0]

    def max_abs(self) -> float:
        return float(np.abs(self.values).max())

    def copy(self) -> "GridFunction":
        return GridFunction(self.grid, self.values.copy())


def divide_flagged(num: GridFunction, den: GridFunction, fill=0.0):
    """Pointwise num/den with explicit underflow handling.

    Nodes where |den| is zero or subnormal are *flagged*: the quotient there
    is set to ``fill`` and the sorted array of flagged node indices is
    returned alongside.  Callers substitute the analytic limit at flagged
    nodes (typically just node 0).
    """
    if num.grid != den.grid:
        raise GridError("grid mismatch in divide_flagged")
    d = den.values
    bad = np.abs(d) < np.finfo(np.float64).tiny
    out_dtype = np.result_type(num.values, d)
    out = np.empty(num.values.shape, dtype=out_dtype)
    good = ~bad
    out[good] = num.values[good] / d[good]
    out[bad] = fill
    return GridFunction(num.grid, out), np.nonzero(bad)[0]


# ---------------------------------------------------------------------------
# Cumulative integration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularHead:
    """Leading behavior f(x) ~ coeff * x**exponent near the origin.

    exponent must exceed -1 (integrable).  ``exact_nodes`` > 0 promises the
    law holds *exactly* on nodes 1..exact_nodes (a multiple of 5): the
    integral is then analytic on that whole block.  ``exact_nodes == 0``
    applies a first-panel correction only: the law is integrated analytically
    over [0, x_5] and the interpolated residual f - law (which tends to 0 at
    the origin) is added back.
    """

    exponent: float
    coeff: complex
    exact_nodes: int = 0

    def __post_init__(self):
        if not (self.exponent > -1.0):
            raise GridError(
                f"head exponent must be > -1 for an integrable singularity, "
                f"got {self.exponent}")
        if self.exact_nodes % 5 != 0:
            raise GridError("exact_nodes must be a multiple of 5")

    def primitive(self, x: np.ndarray):
        """Exact integral of the law from 0 to x."""
        p1 = self.exponent + 1.0
        return self.coeff * np.power(x, p1) / p1


def _scan_sums(a: np.ndarray) -> np.ndarray:
    """Cumulative sum by recursive doubling.

    A straight running sum rounds once per element, so its error grows
    linearly with position — at 1e4+ panels that alone eats the 1e-12
    budget, and it compounds over chained indefinite integrals.  Doubling
    the stride each pass assembles every prefix out of ~log2(n) additions,
    so the rounding chain stays a dozen terms deep regardless of n.
    """
    out = a.copy()
    n = out.shape[0]
    shift = 1
    while shift < n:
        out[shift:] = out[shift:] + out[:-shift]
        shift <<= 1
    return out


def _accumulate(values: np.ndarray, h: float) -> np.ndarray:
    """Cumulative panel quadrature of a length-(5P+1) segment of nodal values.

    The segment's first node acts as the lower limit; the result starts at 0.
    """
    P = (values.shape[0] - 1) // 5
    V = np.empty((P, 6), dtype=values.dtype)
    V[:, :5] = values[:-1].reshape(P, 5)
    V[:, 5] = values[5::5]
    dtype = np.result_type(values.dtype, np.float64)
    out = np.empty(values.shape[0], dtype=dtype)
    out[0] = 0.0
    part = out[1:].reshape(P, 5)             # nodes 1..5 of each panel
    np.matmul(V, _cum_weights(h, dtype), out=part)
    offsets = np.empty(P, dtype=dtype)
    offsets[0] = 0.0
    offsets[1:] = _scan_sums(part[:-1, 4])
    part += offsets[:, None]
    return out


def _cumulative_values(v: np.ndarray, grid: Grid,
                       head: SingularHead | None = None) -> np.ndarray:
    """Array-level core of :func:`cumulative_integral` (no wrapping checks)."""
    h = grid.h
    if head is None:
        return _accumulate(v, h)

    x = grid.nodes
    if head.exact_nodes >= 5:
        # the law is exact on nodes 0..Z: analytic there, quadrature beyond
        Z = min(head.exact_nodes, grid.M)
        law = head.primitive(x[: Z + 1])
        out = np.empty(grid.M + 1, dtype=np.result_type(v, law))
        out[: Z + 1] = law
        if Z < grid.M:
            seg = _accumulate(v[Z:], h)
            out[Z:] = law[Z] + seg
        return out

    # first-panel correction: integrate the law analytically over [0, x_5]
    # and add the quadrature of the residual f - law, whose limit at 0 is 0.
    res = v[:6].astype(np.result_type(v, head.coeff), copy=True)
    res[0] = 0.0
    res[1:] -= head.coeff * np.power(x[1:6], head.exponent)
    p0 = _accumulate(res, h)
    law = head.primitive(x[:6])
    out = np.empty(grid.M + 1, dtype=np.result_type(p0, law, v))
    out[:6] = law + p0
    if grid.M > 5:
        seg = _accumulate(v[5:], h)
        out[5:] = out[5] + seg
    return out


def cumulative_integral(f: GridFunction, head: SingularHead | None = None) -> GridFunction:
    """F with F(x_j) = integral of f from 0 to x_j, F(0) = 0.

    Inside each group of six nodes the integrand is represented by its
    degree-5 interpolant, integrated exactly up to every node of the group;
    polynomials of degree <= 5 therefore integrate exactly (up to roundoff).
    ``head`` activates the near-origin handling described on
    :class:`SingularHead` (node 0 of ``f`` is then treated as a placeholder
    and never read).
    """
    return GridFunction(f.grid, _cumulative_values(f.values, f.grid, head))
