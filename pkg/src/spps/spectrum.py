"""Eigenvalue search: characteristic polynomials, roots, shifts, trust.

The boundary condition turns the solution series into a polynomial in the
shifted spectral parameter whose roots approximate eigenvalues near the
expansion center.  This module builds that polynomial, finds and polishes
all of its roots, bounds the region where the polynomial can be trusted
(via the envelope tail and Rouche's theorem), and walks chains of centers
across the spectrum — a linear schedule for mostly-real spectra, an
adaptive root-following chain for genuinely complex ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .grid import Grid, GridFunction
from .powers import FormalPowerSet, PowerConstants
from .problem import ProblemSpec, sample_coefficients
from .solution import SPPSSolution, build_solution, evaluate
from .usol import (ParticularSolution, build_u0_analytic, build_u0_series,
                   build_u0_shifted, from_values)

__all__ = [
    "SolverError", "CharPoly", "SolverSettings", "EigenRecord",
    "EigenResult", "characteristic_poly", "phi_eval", "roots",
    "rouche_radius", "char_tail", "solve",
]

#: roots closer than rtol * (1 + |lam|) are one eigenvalue
_DEDUP_RTOL = 1e-6
#: real-spectrum filter: |Im| <= rtol * (1 + |Re|)
_IMAG_RTOL = 1e-6


class SolverError(RuntimeError):
    """Eigenvalue search could not proceed."""


# ---------------------------------------------------------------------------
# Characteristic polynomial
# ---------------------------------------------------------------------------

@dataclass
class CharPoly:
    """Boundary-form polynomial around one center.

    coeffs[k] multiplies (lam - center)^k; coeffs[0] is exactly
    beta u_0(a) + gamma u_0'(a).  The envelope data (constants, max |u_0|,
    endpoint values) feeds the truncation tail used for trust radii.
    """

    center: complex
    coeffs: np.ndarray
    beta: complex
    gamma: complex
    a: float
    l: float
    r1_zero: bool
    constants: PowerConstants
    u0_max: float
    u0_at_a: complex
    du0_at_a: complex
    inv_pu0_at_a: float

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1


def characteristic_poly(p: ProblemSpec, powers: FormalPowerSet,
                        u0: ParticularSolution) -> CharPoly:
    """Polynomial whose roots approximate eigenvalues near the center.

    Imposing beta u(a) + gamma u'(a) = 0 on the evaluated series gives the
    coefficients c0 * E_k - (gamma / (p(a) u0(a))) * O_k with E_k, O_k the
    even/odd family members at the right endpoint and c0 the boundary form
    of u0 itself.
    """
    if powers.grid is not u0.grid and powers.grid.M != u0.grid.M:
        raise ValueError("power family and particular solution grids differ")
    u0a = complex(u0.u0.values[-1])
    du0a = complex(u0.du0.values[-1])
    if u0a == 0:
        raise SolverError("particular solution vanishes at the right "
                          "endpoint; the boundary coefficients divide by it")
    pa = complex(powers.pfun[-1])
    beta, gamma = complex(p.beta), complex(p.gamma)
    c0 = beta * u0a + gamma * du0a
    N = powers.order
    coeffs = np.empty(N + 1, dtype=complex)
    coeffs[0] = c0
    gam_w = gamma / (pa * u0a)
    for k in range(1, N + 1):
        even_a = complex(powers.powers[2 * k][-1])
        odd_a = complex(powers.powers[2 * k - 1][-1])
        coeffs[k] = c0 * even_a - gam_w * odd_a
    if not np.all(np.isfinite(coeffs.view(float))):
        raise SolverError("characteristic coefficients are not finite")
    return CharPoly(
        center=complex(powers.lambda0), coeffs=coeffs, beta=beta,
        gamma=gamma, a=powers.grid.a, l=powers.l, r1_zero=powers.r1_zero,
        constants=powers.constants,
        u0_max=float(np.max(np.abs(u0.u0.values))),
        u0_at_a=u0a, du0_at_a=du0a,
        inv_pu0_at_a=float(1.0 / abs(pa * u0a)))


def phi_eval(poly: CharPoly, lam) -> np.ndarray | complex:
    """Polynomial value at spectral point(s) lam (Horner in lam - center)."""
    z = np.asarray(lam, dtype=complex) - poly.center
    acc = np.full_like(z, poly.coeffs[-1])
    for c in poly.coeffs[-2::-1]:
        acc = acc * z + c
    return acc if acc.shape else complex(acc)


# ---------------------------------------------------------------------------
# Roots
# ---------------------------------------------------------------------------

def _scaled(poly: CharPoly) -> Tuple[np.ndarray, float]:
    """Coefficients in mu = (lam - center)/rho with max |b_k| = 1."""
    c = poly.coeffs
    n = len(c) - 1
    lead = abs(c[-1])
    head = abs(c[0])
    if lead > 0 and head > 0 and n > 0:
        rho = (head / lead) ** (1.0 / n)
    else:
        mags = np.abs(c)
        nz = np.flatnonzero(mags)
        rho = 1.0
        if nz.size >= 2:
            k0, k1 = nz[0], nz[-1]
            rho = (mags[k0] / mags[k1]) ** (1.0 / (k1 - k0))
    if not (np.isfinite(rho) and rho > 0):
        rho = 1.0
    b = c * rho ** np.arange(n + 1)
    m = np.max(np.abs(b))
    if m > 0:
        b = b / m
    return b, rho


def roots(poly: CharPoly) -> List[Tuple[complex, float, bool]]:
    """All roots with scaled residuals and convergence flags.

    The polynomial is normalized in a radius-scaled variable, solved by the
    companion matrix, and every root is polished by Newton iteration until
    the scaled residual drops below 1e-13 * max(1, |mu|)^N (roots far
    outside the unit scale are intrinsically ill-conditioned, which the
    threshold reflects).  Returns (lam, residual, converged).
    """
    b, rho = _scaled(poly)
    # drop an (extremely rare) negligible leading block to keep the
    # companion matrix well formed
    lead = len(b) - 1
    while lead > 0 and abs(b[lead]) < 1e-250:
        lead -= 1
    if lead == 0:
        return []
    bb = b[:lead + 1]
    mu = np.roots(bb[::-1])
    db = bb[1:] * np.arange(1, lead + 1)

    def val(z, arr):
        acc = np.full_like(z, arr[-1])
        for c in arr[-2::-1]:
            acc = acc * z + c
        return acc

    for _ in range(40):
        f = val(mu, bb)
        tol = 1e-13 * np.maximum(1.0, np.abs(mu)) ** lead
        live = np.abs(f) > tol
        if not live.any():
            break
        fp = val(mu[live], db)
        step = np.where(fp != 0, f[live] / np.where(fp == 0, 1, fp), 0)
        # damp absurd steps (near-multiple roots)
        big = np.abs(step) > 0.5 * (1.0 + np.abs(mu[live]))
        step[big] *= 0.3
        mu[live] = mu[live] - step
    f = np.abs(val(mu, bb))
    tol = 1e-13 * np.maximum(1.0, np.abs(mu)) ** lead
    out = []
    for z, r, ok in zip(mu, f, f <= tol):
        out.append((poly.center + rho * complex(z), float(r), bool(ok)))
    return out


# ---------------------------------------------------------------------------
# Envelope tails and trust radii
# ---------------------------------------------------------------------------

class _LogSeqTable:
    """Cached cumulative sums of log(base + j) for vectorized tail sums.

    cum[k] = log of the rising product base (base+1) ... (base+k-1); with
    base = 1 this is log k!.
    """

    def __init__(self, base: float):
        self.base = base
        self._cum = np.zeros(1)

    def upto(self, n: int) -> np.ndarray:
        if n >= self._cum.shape[0]:
            m = max(n + 1, 2 * self._cum.shape[0])
            ks = np.arange(self._cum.shape[0] - 1, m, dtype=float)
            ext = np.cumsum(np.log(self.base + ks))
            self._cum = np.concatenate([self._cum, self._cum[-1] + ext])
        return self._cum[:n + 1]


_SEQ_CACHE: dict = {}


def _seq_table(base: float) -> _LogSeqTable:
    t = _SEQ_CACHE.get(base)
    if t is None:
        t = _LogSeqTable(base)
        _SEQ_CACHE[base] = t
    return t


def _series_tail(first: int, B: float, denom_base: float,
                 factorial: bool = False, linear_weight: bool = False
                 ) -> float:
    """sum_{k >= first} w(k) B^k / (denom_base)_k, summed from above.

    w(k) = k when linear_weight; the denominator gains a k! when
    ``factorial``.  The peak term is located analytically first, so a
    divergently large tail short-circuits to infinity without building
    arrays, and a geometric remainder closes the truncation rigorously.
    """
    if B <= 0.0:
        return 0.0
    if not math.isfinite(B):
        return math.inf
    logB = math.log(B)
    if factorial:
        k_peak = int(math.sqrt(B)) + 1
    else:
        k_peak = int(B - denom_base) + 1
    k_peak = max(k_peak, first)
    peak_log = (k_peak * logB + math.lgamma(denom_base)
                - math.lgamma(denom_base + k_peak))
    if factorial:
        peak_log -= math.lgamma(k_peak + 1.0)
    if linear_weight:
        peak_log += math.log(k_peak)
    if peak_log > 700.0:
        return math.inf
    kmax = k_peak + int(12.0 * math.sqrt(k_peak + 1.0)) + 400
    ks = np.arange(first, kmax + 1)
    logs = ks * logB - _seq_table(denom_base).upto(kmax)[ks]
    if factorial:
        logs -= _seq_table(1.0).upto(kmax)[ks]
    if linear_weight:
        logs += np.log(ks)
    top = float(np.max(logs))
    if top > 700.0:
        return math.inf
    total = float(np.exp(logs - top).sum() * math.exp(top))
    # close the remainder geometrically
    ratio = B / (denom_base + kmax + 1.0)
    if factorial:
        ratio /= (kmax + 2.0)
    if linear_weight:
        ratio *= (kmax + 2.0) / (kmax + 1.0)
    if ratio >= 1.0:
        return math.inf
    last = math.exp(logs[-1]) if logs[-1] > -700.0 else 0.0
    return total + last * ratio / (1.0 - ratio)


def char_tail(poly: CharPoly, r: float) -> float:
    """Bound for |Phi - Phi_N| on the circle |lam - center| = r.

    Weighs the solution tail by |beta| and, for derivative conditions, the
    derivative tail (endpoint-value and reciprocal-weight pieces) by
    |gamma|; each member tail is an envelope sum closed from above.
    """
    if r <= 0.0:
        return 0.0
    N = poly.N
    l, a = poly.l, poly.a
    cst = poly.constants
    C = cst.C
    even_tail = _series_tail(N + 1, r * C * C * a, 2.0 * l + 2.0)
    if poly.r1_zero and cst.C_refined and cst.C_refined > 0:
        Cr = cst.C_refined
        alt = _series_tail(N + 1, r * Cr * Cr * a * a / 4.0, l + 1.5,
                           factorial=True)
        even_tail = min(even_tail, alt)

    out = abs(poly.beta) * poly.u0_max * even_tail
    if poly.gamma != 0:
        # odd member 2k-1 envelope: k C^{2k-1} a^{2l+1+k} / (2l+2)_k,
        # i.e. (a^{2l+1}/C) * k (C^2 a r)^k / (2l+2)_k
        odd_tail = (a ** (2.0 * l + 1.0) / C) * _series_tail(
            N + 1, r * C * C * a, 2.0 * l + 2.0, linear_weight=True)
        out += abs(poly.gamma) * (abs(poly.du0_at_a) * even_tail
                                  + poly.inv_pu0_at_a * odd_tail)
    return out


def rouche_radius(poly: CharPoly,
                  bound: Optional[Callable[[float], float]] = None,
                  angles: int = 512, r_max: float = 1e9,
                  known_roots: Optional[Sequence[complex]] = None) -> float:
    """Largest circle radius on which the polynomial dominates its tail.

    Within that circle the polynomial and the full characteristic function
    have equally many zeros, so roots inside are trustworthy.  ``bound``
    maps a radius to a tail estimate (default :func:`char_tail`); the
    radius is found by geometric growth refined by bisection.  Returns
    infinity when domination never fails below ``r_max`` (e.g. a tail that
    is identically zero).

    The circle minimum of |Phi_N| is sampled on a uniform angle grid plus
    the angles of the polynomial's own roots, then the best dip is polished
    by golden section.  Dips of an analytic function on a circle sit at the
    angles of near-circle zeros, so probing those angles directly catches
    every dip the uniform grid could miss; a global Lipschitz allowance
    would instead be driven by the circle's loudest point and over-punish
    small radii by orders of magnitude.  ``known_roots`` skips the internal
    root solve when the caller already has the roots (absolute positions,
    as returned by :func:`roots`).
    """
    if bound is None:
        bound = lambda rr: char_tail(poly, rr)
    _b, rho = _scaled(poly)
    th = np.linspace(0.0, 2.0 * math.pi, angles, endpoint=False)
    ring = np.exp(1j * th)
    if known_roots is None:
        known_roots = [z for z, _res, _ok in roots(poly)]
    w = np.asarray([complex(z) - poly.center for z in known_roots],
                   dtype=complex)
    w_abs = np.abs(w)
    w_ang = np.angle(w)

    def phi_abs(theta, r: float):
        z = r * np.exp(1j * np.atleast_1d(theta))
        acc = np.full_like(z, poly.coeffs[-1])
        for cc in poly.coeffs[-2::-1]:
            acc = acc * z + cc
        return np.abs(acc)

    def ring_min(r: float) -> float:
        near = w_ang[(w_abs > 0.3 * r) & (w_abs < 3.0 * r)]
        thetas = np.concatenate([th, near]) if near.size else th
        vals = phi_abs(thetas, r)
        j = int(np.argmin(vals))
        # golden-section polish of the winning dip, bracketed by one grid
        # arc on either side
        half = math.pi / angles
        lo_t, hi_t = thetas[j] - half, thetas[j] + half
        glo, ghi = lo_t + 0.381966 * (hi_t - lo_t), hi_t - 0.381966 * (hi_t - lo_t)
        flo, fhi = float(phi_abs(glo, r)[0]), float(phi_abs(ghi, r)[0])
        best = float(vals[j])
        for _ in range(28):
            if flo < fhi:
                hi_t, ghi, fhi = ghi, glo, flo
                glo = lo_t + 0.381966 * (hi_t - lo_t)
                flo = float(phi_abs(glo, r)[0])
            else:
                lo_t, glo, flo = glo, ghi, fhi
                ghi = hi_t - 0.381966 * (hi_t - lo_t)
                fhi = float(phi_abs(ghi, r)[0])
        return min(best, flo, fhi)

    def holds(r: float) -> bool:
        t = bound(r)
        if t == 0.0:
            return True
        if not math.isfinite(t):
            return False
        m = ring_min(r)
        # an overflowed circle sample says nothing about domination
        return math.isfinite(m) and m > t

    lo = max(rho * 1e-3, 1e-12)
    if not holds(lo):
        return 0.0
    hi = None
    r = max(rho * 1e-2, 2.0 * lo)
    while r <= r_max:
        if holds(r):
            lo = r
            r *= 1.7
        else:
            hi = r
            break
    if hi is None:
        return math.inf
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# Solver driver
# ---------------------------------------------------------------------------

@dataclass
class SolverSettings:
    """Knobs of one eigenvalue run (see README for the strategies)."""

    N: int = 40
    M: int = 10000
    strategy: str = "linear"          # linear | adaptive
    shift_s: float = 0.0              # linear: center_n = s n + i(d n + e)
    shift_d: float = 0.0
    shift_e: float = 0.0
    n_centers: int = 1
    real_mode: bool = False
    delta: complex = 0j               # adaptive: next center = root + delta
    count: int = 0                    # adaptive: eigenvalues to claim
    J: int = 10
    bounds: str = "sampled"
    strict: bool = False
    eigenfunctions: bool = False
    trust_radii: bool = True
    lambda0: complex = 0j             # starting center / shift for u0


@dataclass
class EigenRecord:
    lam: complex
    residual: float
    shift_index: int
    trusted: bool
    trust_radius: float
    u: Optional[GridFunction] = field(default=None, repr=False)
    du: Optional[GridFunction] = field(default=None, repr=False)


@dataclass
class EigenResult:
    eigenvalues: List[EigenRecord]
    chain: List[complex]
    settings: SolverSettings
    problem: ProblemSpec
    u0_source: str

    def lams(self) -> np.ndarray:
        return np.array([r.lam for r in self.eigenvalues])

    def to_dict(self) -> dict:
        return {
            "u0_source": self.u0_source,
            "chain": [[c.real, c.imag] for c in self.chain],
            "eigenvalues": [
                {"re": r.lam.real, "im": r.lam.imag,
                 "residual": r.residual, "shift_index": r.shift_index,
                 "trusted": r.trusted, "trust_radius": r.trust_radius}
                for r in self.eigenvalues],
        }


def _strategy_name(s: str) -> str:
    s = s.lower()
    if s.startswith("linear"):
        return "linear"
    if s.startswith("adaptive"):
        return "adaptive"
    raise ValueError(f"unknown strategy {s!r}")


def _initial_u0(p: ProblemSpec, st: SolverSettings, grid: Grid,
                u0_expr, du0_expr, u0_fn, du0_fn) -> ParticularSolution:
    if (u0_expr is None) != (du0_expr is None) or \
            (u0_fn is None) != (du0_fn is None):
        raise SolverError("a particular solution needs both u0 and u0'")
    if u0_expr is not None and u0_fn is not None:
        raise SolverError("give the particular solution as expressions or "
                          "as callables, not both")
    if u0_expr is not None or u0_fn is not None:
        src = u0_expr if u0_expr is not None else u0_fn
        dsrc = du0_expr if du0_expr is not None else du0_fn
        sol = build_u0_analytic(p, src, dsrc, grid,
                                lambda0=complex(st.lambda0))
        if not sol.nonvanishing:
            raise SolverError(
                f"supplied particular solution vanishes near "
                f"x={sol.zero_location:.6g}")
        return sol
    lam0 = complex(st.lambda0)
    sol = build_u0_shifted(p, lam0, st.N, grid, J=st.J, bounds=st.bounds,
                           strict=st.strict) if lam0 != 0 else \
        build_u0_series(p, st.N, grid, J=st.J, bounds=st.bounds,
                        strict=st.strict)
    if sol.nonvanishing:
        return sol
    # fall back to a spectral shift below the potential's infimum
    qv = sample_coefficients(p, grid.nodes)[0]
    if np.iscomplexobj(qv) and np.any(qv.imag):
        raise SolverError(
            "series particular solution has an interior zero near "
            f"x={sol.zero_location:.6g} and the potential is complex, so "
            "the lower-bound shift is unavailable; supply u0 analytically "
            "or set settings.lambda0")
    q0 = float(np.min(qv[1:].real))
    sol = build_u0_shifted(p, q0, st.N, grid, J=st.J, bounds=st.bounds,
                           strict=st.strict)
    if not sol.nonvanishing:
        raise SolverError(
            "shifted particular solution still vanishes near "
            f"x={sol.zero_location:.6g}; no viable starting center found")
    return sol


def _hop(sol: SPPSSolution, center: complex) -> ParticularSolution:
    """Particular solution at a new center from the current solution."""
    u, du = evaluate(sol, center)
    return from_values(sol.u0.problem, sol.grid, u.values, du.values,
                       lambda0=center, source="shifted",
                       require_asymptotics=False)


def _push(records: List[EigenRecord], rec: EigenRecord,
          store_fn) -> None:
    """Dedup-insert: nearby roots are one eigenvalue, best residual wins."""
    for i, old in enumerate(records):
        if abs(old.lam - rec.lam) <= _DEDUP_RTOL * (1.0 + abs(old.lam)):
            if rec.residual < old.residual:
                if store_fn is not None:
                    store_fn(rec)
                records[i] = rec
            return
    if store_fn is not None:
        store_fn(rec)
    records.append(rec)


def solve(p: ProblemSpec, settings: SolverSettings,
          u0_expr=None, du0_expr=None,
          u0_fn=None, du0_fn=None) -> EigenResult:
    """Run the full eigenvalue search.

    Builds the particular solution (from supplied expressions/callables,
    else by series, else by a lower-bound spectral shift), then walks shift
    centers per the strategy, at each center running the main recursion,
    forming the boundary polynomial, and harvesting its converged roots.

    linear: centers s n + i(d n + e) are fixed up front; a root is accepted
    by the center whose real part is nearest (so each window claims its own
    stretch of the spectrum), optionally filtered to near-real roots.

    adaptive: each step claims the nearest not-yet-claimed root (preferring
    roots inside the trust radius) and recenters at that root plus delta.
    """
    st = settings
    strategy = _strategy_name(st.strategy)
    grid = Grid(p.a, st.M)
    u0sol = _initial_u0(p, st, grid, u0_expr, du0_expr, u0_fn, du0_fn)
    u0_source = u0sol.source

    records: List[EigenRecord] = []
    chain: List[complex] = []
    cur = build_solution(u0sol, st.N, J=st.J, bounds=st.bounds,
                         strict=st.strict)

    def center_solution(c: complex, idx: int) -> Optional[SPPSSolution]:
        nonlocal cur
        if c == cur.lambda0:
            return cur
        base = cur
        for jit in (0.0, 0.37j, -0.37j, 0.81j):
            cc = c + jit * max(1.0, abs(st.shift_d), abs(st.delta))
            try:
                hopped = _hop(base, cc)
            except Exception:
                continue
            if not hopped.nonvanishing:
                continue
            cur = build_solution(hopped, st.N, J=st.J, bounds=st.bounds,
                                 strict=st.strict)
            return cur
        return None

    def harvest(sol: SPPSSolution, idx: int):
        poly = characteristic_poly(p, sol.powers, sol.u0)
        rts = roots(poly)
        radius = math.nan
        if st.trust_radii:
            radius = rouche_radius(poly,
                                   known_roots=[z for z, _r, _c in rts])
        return poly, rts, radius

    def store_fn(rec: EigenRecord):
        if not st.eigenfunctions:
            return
        u, du = evaluate(cur, rec.lam)
        rec.u, rec.du = u, du

    if strategy == "linear":
        centers = [complex(st.shift_s * n, st.shift_d * n + st.shift_e)
                   for n in range(st.n_centers)]
        if complex(st.lambda0) != 0 and centers:
            centers[0] = complex(st.lambda0)
        re_centers = np.array([c.real for c in centers])
        for idx, c in enumerate(centers):
            sol = center_solution(c, idx)
            if sol is None:
                chain.append(c)
                continue
            chain.append(sol.lambda0)
            _poly, rts, radius = harvest(sol, idx)
            for lam, res, ok in rts:
                if not ok:
                    continue
                if st.real_mode:
                    if abs(lam.imag) > _IMAG_RTOL * (1.0 + abs(lam.real)):
                        continue
                    lam = complex(lam.real, 0.0)
                # the nearest center owns this stretch of the spectrum
                owner = int(np.argmin(np.abs(re_centers - lam.real)))
                if owner != idx:
                    continue
                trusted = bool(st.trust_radii
                               and abs(lam - sol.lambda0) <= radius)
                _push(records,
                      EigenRecord(lam, res, idx, trusted, radius),
                      store_fn)
    else:
        # A problem with real coefficients and real boundary weights has a
        # conjugate-symmetric spectrum; report the upper-half representative
        # of each pair so chains are deterministic.
        probe = grid.nodes[:: max(1, st.M // 256)]
        qs, r0s, r1s = sample_coefficients(p, probe)
        conj_sym = (not any(np.iscomplexobj(v) and np.any(v.imag)
                            for v in (qs, r0s, r1s))
                    and p.beta.imag == 0.0 and p.gamma.imag == 0.0)
        want = st.count if st.count > 0 else 10
        claimed: List[complex] = []
        idx = 0
        center = complex(st.lambda0)
        guard = 0
        approach = 0
        while len(claimed) < want and guard < 8 * want + 24:
            guard += 1
            sol = center_solution(center, idx)
            if sol is None:
                raise SolverError(
                    f"no nonvanishing particular solution reachable at "
                    f"center {center:.6g}")
            chain.append(sol.lambda0)
            _poly, rts, radius = harvest(sol, idx)
            fresh = []
            for lam, res, ok in rts:
                if not ok:
                    continue
                # a real center of a real-coefficient problem gives a
                # conjugate-symmetric polynomial: fold the pair onto its
                # upper-half representative (a complex center's polynomial
                # has no such symmetry, so folding would invent roots)
                if conj_sym and sol.lambda0.imag == 0.0 and lam.imag < 0.0:
                    lam = lam.conjugate()
                if any(abs(lam - cl) <= _DEDUP_RTOL * (1.0 + abs(cl))
                       for cl in claimed):
                    continue
                fresh.append((lam, res,
                              abs(lam - sol.lambda0) <= radius
                              if st.trust_radii else True))
            if not fresh:
                raise SolverError(
                    f"no new roots near center {sol.lambda0:.6g}; "
                    "increase N or adjust delta")
            lam, res, tr = min(fresh, key=lambda f: abs(f[0] - sol.lambda0))
            dist = abs(lam - sol.lambda0)
            if (not tr and st.trust_radii and approach < 6
                    and radius > 0.04 * dist):
                # candidate sits outside the trust circle, where spurious
                # roots live; recenter so the candidate falls just inside
                # and look again (true roots persist between centers,
                # spurious rings move with the family)
                approach += 1
                frac = 1.0 - 0.9 * radius / dist
                center = sol.lambda0 + frac * (lam - sol.lambda0)
                continue
            approach = 0
            _push(records, EigenRecord(lam, res, idx, bool(tr), radius),
                  store_fn)
            claimed.append(lam)
            center = lam + complex(st.delta)
            idx += 1

    if st.real_mode:
        records.sort(key=lambda r: r.lam.real)
    else:
        records.sort(key=lambda r: (abs(r.lam), r.lam.imag))
    return EigenResult(eigenvalues=records, chain=chain, settings=st,
                       problem=p, u0_source=u0_source)
