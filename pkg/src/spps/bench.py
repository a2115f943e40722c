"""Benchmark problems and the self-contained special-function oracles.

The package never imports scipy/mpmath: the handful of special functions the
worked problems need (J_nu, I_nu, their zeros, one closed-form characteristic
function) are implemented here from their power series.

The cancellation problem and why `decimal` shows up
---------------------------------------------------
J_nu(x) = (x/2)^nu / Gamma(nu+1) * S(nu; -x^2/4) with
S(nu; w) = sum_k w^k / (k! (nu+1)_k).  For alternating w the partial sums
pass through terms of size ~e^{2 sqrt|w|} while the result is O(1): at
x ~ 50 every double-precision digit is gone.  The oracle therefore sums S
with stdlib `decimal` at a precision chosen from |w| (roughly 0.45 digits
per unit of cancellation), which keeps the zero finder trustworthy to 1e-13
out to the hundredth zero.  Real nonnegative arguments of I_nu have no
cancellation and take the fast float path.

Reference eigenvalues for the seven stock problems are frozen below with a
source tag; `run_benchmark` re-solves a case and reports per-index errors
against them.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from typing import Callable, Optional

import numpy as np

from .problem import ProblemSpec

__all__ = [
    "SeriesError", "gamma_real", "pochhammer",
    "bessel_j", "bessel_i", "bessel_j_array", "bessel_i_array", "bessel_zero",
    "exact_phi_ex6", "exact_phi_ex6_prime",
    "Reference", "BenchmarkCase", "benchmark_cases", "run_benchmark", "BenchReport",
]


class SeriesError(ArithmeticError):
    """A power series failed to converge within the term budget."""

    def __init__(self, message: str, terms: int):
        super().__init__(f"{message} (after {terms} terms)")
        self.terms = terms


# ---------------------------------------------------------------------------
# Gamma / Pochhammer
# ---------------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_real(x: float) -> float:
    """Gamma function for real arguments (Lanczos, g=7, 9 terms)."""
    if x < 0.5:
        s = math.sin(math.pi * x)
        if s == 0.0:
            raise ValueError(f"gamma pole at x={x}")
        return math.pi / (s * gamma_real(1.0 - x))
    x -= 1.0
    acc = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def pochhammer(a: float, n: int) -> float:
    """(a)_n = a (a+1) ... (a+n-1); (a)_0 = 1."""
    acc = 1.0
    for k in range(n):
        acc *= a + k
    return acc


# ---------------------------------------------------------------------------
# The series engine
# ---------------------------------------------------------------------------

_FLOAT_TERM_CAP = 2000
_DEC_TERM_CAP = 200_000
_MAX_DEC_PREC = 20_000


def _float_hyp_array(nu: float, w: np.ndarray) -> np.ndarray:
    """S(nu; w) = sum w^k / (k! (nu+1)_k), vectorized, float path."""
    w = np.asarray(w)
    term = np.ones(w.shape, dtype=w.dtype)
    total = term.copy()
    for k in range(_FLOAT_TERM_CAP):
        term = term * w / ((k + 1.0) * (nu + k + 1.0))
        total += term
        if np.abs(term).max() < 1e-17 * max(np.abs(total).max(), 1e-300):
            return total
    raise SeriesError(f"hypergeometric series did not settle (nu={nu})",
                      _FLOAT_TERM_CAP)


def _dec_hyp(nu: float, w: complex, prec: int, derivative: bool = False):
    """S(nu; w) (and optionally dS/dw) summed in `decimal` at ``prec`` digits.

    Returns Decimal pairs (re, im).  Works for any complex w; a purely real w
    runs a cheaper real-arithmetic loop.
    """
    if prec > _MAX_DEC_PREC:
        raise SeriesError(
            f"argument too large: would need ~{prec} decimal digits", 0)
    nud = Decimal(nu)
    with localcontext() as ctx:
        ctx.prec = prec
        stop_exp = -prec - 5
        if w.imag == 0.0:
            wr = Decimal(w.real)
            t = Decimal(1)
            s = Decimal(1)
            d = Decimal(0)      # derivative sum, real
            dt = None
            peak = Decimal(1)
            for k in range(_DEC_TERM_CAP):
                if derivative:
                    if k == 0:
                        dt = 1 / (nud + 1)
                    else:
                        dt = dt * wr / (k * (nud + k + 1))
                    d += dt
                t = t * wr / ((k + 1) * (nud + k + 1))
                s += t
                at = abs(t)
                if at > peak:
                    peak = at
                elif at == 0 or at.adjusted() - peak.adjusted() < stop_exp:
                    break
            else:
                raise SeriesError("decimal series did not settle", _DEC_TERM_CAP)
            if derivative:
                return (s, Decimal(0), d, Decimal(0))
            return (s, Decimal(0))

        wr, wi = Decimal(w.real), Decimal(w.imag)
        tr, ti = Decimal(1), Decimal(0)
        sr, si = Decimal(1), Decimal(0)
        dr, di = Decimal(0), Decimal(0)
        dtr = dti = None
        peak = Decimal(1)
        for k in range(_DEC_TERM_CAP):
            if derivative:
                if k == 0:
                    dtr, dti = 1 / (nud + 1), Decimal(0)
                else:
                    den = k * (nud + k + 1)
                    dtr, dti = ((dtr * wr - dti * wi) / den,
                                (dtr * wi + dti * wr) / den)
                dr += dtr
                di += dti
            den = (k + 1) * (nud + k + 1)
            tr, ti = (tr * wr - ti * wi) / den, (tr * wi + ti * wr) / den
            s_abs = abs(tr) + abs(ti)
            sr += tr
            si += ti
            if s_abs > peak:
                peak = s_abs
            elif s_abs == 0 or s_abs.adjusted() - peak.adjusted() < stop_exp:
                break
        else:
            raise SeriesError("decimal series did not settle", _DEC_TERM_CAP)
        if derivative:
            return (sr, si, dr, di)
        return (sr, si)


def _j_cancellation_digits(x: float) -> int:
    return int(0.45 * abs(x)) + 30


# ---------------------------------------------------------------------------
# Bessel functions of the first kind and modified of the first kind
# ---------------------------------------------------------------------------

_J_FLOAT_CUTOFF = 8.0


def bessel_j(nu: float, x: float) -> float:
    """J_nu(x) for real nu > -1 and real x >= 0, from the power series.

    Small arguments take the float path (terms stop at 1e-17 of the partial
    sum); larger ones are summed in `decimal` to beat the alternating-series
    cancellation.
    """
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    if x < 0:
        raise ValueError("bessel_j oracle is defined for x >= 0")
    pref = (x / 2.0) ** nu / gamma_real(nu + 1.0)
    if x <= _J_FLOAT_CUTOFF:
        s = _float_hyp_array(nu, np.array([-x * x / 4.0]))[0]
        return pref * float(s)
    sr, _ = _dec_hyp(nu, complex(-x * x / 4.0), _j_cancellation_digits(x))
    return pref * float(sr)


def bessel_i(nu: float, z) -> complex | float:
    """I_nu(z) for real nu > -1; z real nonnegative (float path, monotone
    series, no cancellation) or complex (decimal path)."""
    if isinstance(z, (int, float)) and z >= 0:
        if z == 0.0:
            return 1.0 if nu == 0.0 else 0.0
        if z > 1400.0:
            raise SeriesError("bessel_i float path would overflow", 0)
        pref = (z / 2.0) ** nu / gamma_real(nu + 1.0)
        s = _float_hyp_array(nu, np.array([z * z / 4.0]))[0]
        return pref * float(s)
    zc = complex(z)
    if zc == 0:
        return 1.0 + 0j if nu == 0.0 else 0.0 + 0j
    w = zc * zc / 4.0
    prec = 40 + int(0.45 * (abs(zc) - zc.real)) + int(0.1 * abs(zc))
    sr, si = _dec_hyp(nu, w, prec)
    pref = (zc / 2.0) ** nu / gamma_real(nu + 1.0)
    return pref * complex(float(sr), float(si))


def bessel_j_array(nu: float, xs: np.ndarray) -> np.ndarray:
    """Vectorized J_nu over a nonnegative float array (float path only;
    intended for grid sampling with moderate arguments)."""
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size and xs.max() > _J_FLOAT_CUTOFF:
        # fall back node by node through the decimal path
        return np.array([bessel_j(nu, float(v)) for v in xs])
    out = np.zeros(xs.shape, dtype=np.float64)
    pos = xs > 0
    if pos.any():
        xp = xs[pos]
        s = _float_hyp_array(nu, -xp * xp / 4.0)
        out[pos] = (xp / 2.0) ** nu / gamma_real(nu + 1.0) * s
    out[~pos] = 1.0 if nu == 0.0 else 0.0
    return out


def bessel_i_array(nu: float, zs: np.ndarray) -> np.ndarray:
    """Vectorized I_nu over a nonnegative float array (float path)."""
    zs = np.asarray(zs, dtype=np.float64)
    out = np.zeros(zs.shape, dtype=np.float64)
    pos = zs > 0
    if pos.any():
        zp = zs[pos]
        s = _float_hyp_array(nu, zp * zp / 4.0)
        out[pos] = (zp / 2.0) ** nu / gamma_real(nu + 1.0) * s
    out[~pos] = 1.0 if nu == 0.0 else 0.0
    return out


_zero_cache: dict[tuple[float, int], float] = {}


def bessel_zero(nu: float, k: int) -> float:
    """k-th positive zero of J_nu (k = 1, 2, ...), to ~1e-13 relative.

    Newton iteration on the cancellation-free decimal series, started from
    the large-zero asymptotic guess; each zero is cached.
    """
    if k < 1:
        raise ValueError("zero index starts at 1")
    key = (float(nu), int(k))
    if key in _zero_cache:
        return _zero_cache[key]

    beta = (k + nu / 2.0 - 0.25) * math.pi
    x = beta - (4.0 * nu * nu - 1.0) / (8.0 * beta)
    prec = _j_cancellation_digits(x) + 10
    for _ in range(60):
        sr, _si, dr, _di = _dec_hyp(nu, complex(-x * x / 4.0), prec,
                                    derivative=True)
        # f(x) = S(nu; -x^2/4),  f'(x) = -x/2 * dS/dw... with dw/dx = -x/2
        denom = dr * Decimal(-x / 2.0)
        if denom == 0:
            raise ArithmeticError("flat Newton step while locating a zero")
        step = float(sr / denom)
        step = max(-1.0, min(1.0, step))
        x -= step
        if abs(step) < 1e-14 * x:
            break
    else:
        raise ArithmeticError(f"zero search for J_{nu} #{k} did not converge")
    _zero_cache[key] = x
    return x


# ---------------------------------------------------------------------------
# Closed-form characteristic function of the complex-derivative problem
# ---------------------------------------------------------------------------

def _phi6_parts(lam: complex, derivative: bool):
    """Decimal I0, I1 at z = lam/2 and the bracket W = (1+lam) I1 - lam I0.

    Returns complex (W, Wprime or None).  All cancellation-prone arithmetic
    stays in Decimal; only the final bracket is converted.
    """
    z = lam / 2.0
    w = z * z / 4.0
    prec = 60 + int(0.5 * (abs(z) - z.real)) + int(0.1 * abs(z))
    s0r, s0i = _dec_hyp(0.0, w, prec)
    s1r, s1i = _dec_hyp(1.0, w, prec)
    with localcontext() as ctx:
        ctx.prec = prec
        lr, li = Decimal(lam.real), Decimal(lam.imag)
        zr, zi = lr / 2, li / 2
        # I0 = S0;  I1 = (z/2) * S1
        i0r, i0i = s0r, s0i
        i1r = (zr * s1r - zi * s1i) / 2
        i1i = (zr * s1i + zi * s1r) / 2
        # W = (1+lam) I1 - lam I0
        onr, oni = 1 + lr, li
        wr = (onr * i1r - oni * i1i) - (lr * i0r - li * i0i)
        wi = (onr * i1i + oni * i1r) - (lr * i0i + li * i0r)
        W = complex(float(wr), float(wi))
        if not derivative:
            return W, None
        # dW/dlam = I1 + (1+lam) I1'(z)/2 - I0 - lam I0'(z)/2,
        # I0'(z) = I1(z),  I1'(z) = I0(z) - I1(z)/z
        zz = complex(float(zr), float(zi))
        I0 = complex(float(i0r), float(i0i))
        I1 = complex(float(i1r), float(i1i))
        i1p = I0 - I1 / zz
        Wp = I1 + (1 + lam) * i1p / 2.0 - I0 - lam * I1 / 2.0
        return W, Wp


def exact_phi_ex6(lam: complex) -> complex:
    """Exact characteristic value whose zeros are the complex-derivative
    problem's eigenvalues; equals 3/2 at lam = 0."""
    lam = complex(lam)
    if abs(lam) < 1e-8:
        return cmath.exp(-lam / 2.0) * (1.5 - 0.5 * lam)
    W, _ = _phi6_parts(lam, derivative=False)
    return -2.0 * cmath.exp(-lam / 2.0) * W / lam


def exact_phi_ex6_prime(lam: complex) -> complex:
    """d/dlam of :func:`exact_phi_ex6` (local scale for residual checks)."""
    lam = complex(lam)
    if abs(lam) < 1e-8:
        return cmath.exp(-lam / 2.0) * (-1.25 + lam * (0.25 + 7.0 / 32.0))
    W, Wp = _phi6_parts(lam, derivative=True)
    return -2.0 * cmath.exp(-lam / 2.0) * (
        Wp / lam - W / (lam * lam) - W / (2.0 * lam))


# ---------------------------------------------------------------------------
# Benchmark registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Reference:
    n: int                  # eigenvalue index, 1-based
    value: complex          # sqrt(lam) for sqrt_mode cases, else lam
    source: str             # provenance tag of the frozen number
    tol: float              # acceptance tolerance for run_benchmark
    absolute: bool = False  # compare |err| instead of |err|/|ref|


@dataclass(frozen=True)
class BenchmarkCase:
    id: str
    problem: ProblemSpec
    settings: dict
    references: tuple[Reference, ...]
    sqrt_mode: bool = False           # references store sqrt(lam)
    u0_expr: Optional[str] = None     # analytic particular solution, grammar
    du0_expr: Optional[str] = None
    u0_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    du0_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    notes: str = ""


def _boyd_u0(x: np.ndarray) -> np.ndarray:
    return np.sqrt(x) * bessel_j_array(1.0, 2.0 * np.sqrt(x))


def _boyd_du0(x: np.ndarray) -> np.ndarray:
    return bessel_j_array(0.0, 2.0 * np.sqrt(x))


def _harmonic_u0(x: np.ndarray) -> np.ndarray:
    return 4.0 * np.sqrt(x) * bessel_i_array(1.0, x * x / 2.0)


def _harmonic_du0(x: np.ndarray) -> np.ndarray:
    z = x * x / 2.0
    out = 4.0 * x ** 1.5 * bessel_i_array(0.0, z)
    pos = x > 0
    out[pos] -= 6.0 / np.sqrt(x[pos]) * bessel_i_array(1.0, z[pos])
    return out


def _refs(pairs, source, tol, absolute=False):
    return tuple(Reference(n, v, source, tol, absolute) for n, v in pairs)


def benchmark_cases() -> dict[str, BenchmarkCase]:
    """The stock problems, their frozen references, and recommended settings."""
    pi = math.pi
    cases = {}

    cases["bessel-5-16"] = BenchmarkCase(
        id="bessel-5-16",
        problem=ProblemSpec.from_strings(
            l=0.25, a=1.0, q="0", r0="1", r1="0", alpha=0.0, beta=1, gamma=0),
        settings=dict(N=40, M=50000, strategy="linear", shift_s=50.0,
                      shift_d=2.0, shift_e=0.0, n_centers=500, real_mode=True),
        references=_refs(
            [(1, 12.1871394680951), (2, 44.257559403502), (3, 96.071604838843),
             (4, 167.62571242058), (5, 258.91930035744), (6, 369.95220926235),
             (7, 500.72438147579), (8, 651.23579210254), (9, 821.48642898238),
             (10, 1011.47628560802), (30, 8956.5077203636)],
            "t2", 1e-11)
        + _refs([(50, 24797.222775294)], "t2", 1e-9),
        u0_expr="x^1.25", du0_expr="1.25*x^0.25",
        notes="unperturbed centrifugal problem; eigenvalues are squared "
              "Bessel zeros, so every digit is independently checkable",
    )

    cases["boyd"] = BenchmarkCase(
        id="boyd",
        problem=ProblemSpec.from_strings(
            l=0.0, a=1.0, q="-1/x", r0="1", r1="0", alpha=-1.0, beta=1, gamma=0),
        settings=dict(N=40, M=50000, strategy="linear", shift_s=50.0,
                      shift_d=2.0, shift_e=0.5, n_centers=82, real_mode=True),
        references=_refs([(1, 7.3739850151751)], "t3", 1e-10)
        + _refs(
            [(2, 36.3360195952318), (3, 85.292582094137), (4, 154.098623739767),
             (5, 242.705559362911), (6, 351.091167129418), (8, 627.155044324564),
             (10, 982.239093680188), (13, 1662.98063088578),
             (20, 3942.42966385102)],
            "t3", 1e-9),
        u0_fn=_boyd_u0, du0_fn=_boyd_du0,
        notes="attractive 1/x well on top of l=0; analytic particular "
              "solution in terms of J0/J1",
    )

    cases["harmonic-bessel"] = BenchmarkCase(
        id="harmonic-bessel",
        problem=ProblemSpec.from_strings(
            l=1.5, a=pi, q="x^2", alpha=2.0, r0="1", r1="0", beta=1, gamma=0),
        settings=dict(N=50, M=50000, strategy="linear", shift_s=10.0,
                      shift_d=1.0, shift_e=1.0, n_centers=280, real_mode=True),
        references=_refs(
            [(1, 2.4629499739740), (2, 3.2883529299426), (3, 4.1498642187448),
             (4, 5.0636688237341), (5, 6.0075814581160), (7, 7.9397373768993),
             (10, 10.8861250916173), (15, 15.8426318195682),
             (20, 20.8202301908124), (30, 30.7973502195868),
             (50, 50.77867680951)],
            "t4", 1e-9),
        sqrt_mode=True,
        u0_fn=_harmonic_u0, du0_fn=_harmonic_du0,
        notes="oscillator well over an l=3/2 core; references stored as "
              "sqrt(lam)",
    )

    cases["hydrogen"] = BenchmarkCase(
        id="hydrogen",
        problem=ProblemSpec.from_strings(
            l=2.0, a=pi, q="1/x", alpha=-1.0, r0="1", r1="0", beta=1, gamma=0),
        settings=dict(N=40, M=50000, strategy="linear", shift_s=10.0,
                      shift_d=1.0, shift_e=1.0, n_centers=280, real_mode=True),
        references=_refs(
            [(1, 1.97027445061572), (2, 3.00436042551857), (3, 4.01515351791736),
             (4, 5.0193472218612), (5, 6.0210053515488), (7, 8.0215089715478),
             (10, 11.0202653559399), (15, 16.0176675547294),
             (20, 21.0155251794156), (30, 31.0125189152597)],
            "t5", 1e-9)
        + _refs([(50, 51.00916429551)], "t5", 1e-8),
        sqrt_mode=True,
        notes="repulsive Coulomb tail over an l=2 core; particular solution "
              "built by the series route",
    )

    cases["hydrogen-edge"] = BenchmarkCase(
        id="hydrogen-edge",
        problem=ProblemSpec.from_strings(
            l=-0.5, a=pi, q="1/x", alpha=-1.0, r0="1", r1="0", beta=1, gamma=0),
        settings=dict(N=40, M=1000000, strategy="linear", shift_s=10.0,
                      shift_d=1.0, shift_e=1.0, n_centers=16, real_mode=True),
        references=_refs(
            [(1, 1.23016889677731), (2, 2.08993389042595), (3, 3.00935958601542),
             (4, 3.95944604922178), (5, 4.92592904738969),
             (10, 9.84954778773776)],
            "fig4-sleign2", 1e-6),
        sqrt_mode=True,
        notes="edge of the admissible l range; references derived offline "
              "from the confluent-hypergeometric characteristic equation "
              "(see scripts/make_edge_references.py)",
    )

    cases["sin-perturbed"] = BenchmarkCase(
        id="sin-perturbed",
        problem=ProblemSpec.from_strings(
            l=1.0, a=pi, q="sin(x)", alpha=1.0, r0="1", r1="0", beta=1, gamma=0),
        settings=dict(N=40, M=50000, strategy="linear", shift_s=10.0,
                      shift_d=1.0, shift_e=1.0, n_centers=280, real_mode=True),
        references=_refs(
            [(1, 1.69965392162512)], "t6", 1e-9)
        + _refs(
            [(2, 2.60438727880111), (3, 3.56972957088910), (4, 4.55232022604096),
             (5, 5.54189892161906), (7, 7.53001773432606),
             (10, 10.5211087141255), (15, 15.5141539227760),
             (20, 20.5106568768319), (30, 30.5071385063018),
             (50, 50.5043027452760)],
            "t6", 1e-8),
        sqrt_mode=True,
        notes="smooth bounded perturbation; cross-method consistency case",
    )

    cases["complex-derivative"] = BenchmarkCase(
        id="complex-derivative",
        problem=ProblemSpec.from_strings(
            l=0.5, a=1.0, q="0", r0="0", r1="1", alpha=0.0, beta=0, gamma=1),
        settings=dict(N=50, M=200000, strategy="adaptive", delta=-1j,
                      count=10, real_mode=False),
        references=_refs(
            [(1, 4.47123493371 + 6.76481747480j),
             (2, 5.63553225515 + 13.37799928396j),
             (3, 6.35749327947 + 19.82515033081j),
             (4, 6.88515095992 + 26.20887598266j),
             (5, 7.30184486294 + 32.56088281579j),
             (10, 8.62739882786 + 64.14303168978j)],
            "t7", 1e-8, absolute=True),
        u0_expr="x^1.5", du0_expr="1.5*x^0.5",
        notes="eigenvalue multiplies u' only; genuinely complex spectrum, "
              "walked by the adaptive chain",
    )

    return cases


@dataclass
class BenchRow:
    n: int
    computed: complex
    reference: complex
    rel_err: float
    abs_err: float
    passed: bool


@dataclass
class BenchReport:
    case_id: str
    rows: list[BenchRow]
    ok: bool
    seconds: float
    settings: dict = field(default_factory=dict)
    missing: list[int] = field(default_factory=list)


def run_benchmark(case_id: str, overrides: Optional[dict] = None) -> BenchReport:
    """Solve a stock problem and compare against its frozen references.

    ``overrides`` patches the recommended settings (smaller M/N/center count
    for quick runs).  The report's ``ok`` is True only if every reference
    with an index the run reached passes its tolerance and none is missing.
    """
    import time

    from .spectrum import SolverSettings, solve

    cases = benchmark_cases()
    if case_id not in cases:
        raise KeyError(f"unknown benchmark case {case_id!r}; "
                       f"known: {sorted(cases)}")
    case = cases[case_id]
    cfg = dict(case.settings)
    if overrides:
        cfg.update(overrides)
    settings = SolverSettings(**cfg)

    t0 = time.perf_counter()
    result = solve(case.problem, settings,
                   u0_expr=case.u0_expr, du0_expr=case.du0_expr,
                   u0_fn=case.u0_fn, du0_fn=case.du0_fn)
    dt = time.perf_counter() - t0

    rows: list[BenchRow] = []
    missing: list[int] = []
    for ref in case.references:
        if ref.n > len(result.eigenvalues):
            missing.append(ref.n)
            continue
        lam = result.eigenvalues[ref.n - 1].lam
        computed = cmath.sqrt(lam) if case.sqrt_mode else lam
        abs_err = abs(computed - ref.value)
        rel_err = abs_err / max(abs(ref.value), 1e-300)
        err = abs_err if ref.absolute else rel_err
        rows.append(BenchRow(ref.n, computed, ref.value, rel_err, abs_err,
                             err <= ref.tol))
    ok = bool(rows) and all(r.passed for r in rows) and not missing
    return BenchReport(case.id, rows, ok, dt, cfg, missing)
