"""Problem definition and validation.

The operator under study acts on (0, a] as

    L u = -u'' + ( l(l+1)/x^2 + q(x) ) u,

with the eigenvalue entering through lam * (r1(x) u' + r0(x) u).  The
centrifugal strength l >= -1/2 is held as a number here — the 1/x^2 term is
*not* part of q.  q may blow up at the origin no faster than C x^alpha with
alpha > -2; the user declares alpha and `validate` estimates C on a
logarithmic mesh (and flags declarations the samples contradict).

The boundary condition at the right endpoint is beta*u(a) + gamma*u'(a) = 0;
(1, 0) is Dirichlet, (0, 1) Neumann.  At the origin the regular solution
u ~ x^{l+1} is selected automatically by construction, which is the correct
limit condition for every l >= -1/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import expr as ex

__all__ = ["ProblemSpec", "ValidationReport", "ProblemError", "validate",
           "DIRICHLET", "NEUMANN"]

DIRICHLET = (1.0 + 0j, 0.0 + 0j)
NEUMANN = (0.0 + 0j, 1.0 + 0j)


class ProblemError(ValueError):
    pass


@dataclass(frozen=True)
class ProblemSpec:
    """Immutable description of one spectral problem."""

    l: float
    a: float
    q: ex.Expr
    r0: ex.Expr
    r1: ex.Expr
    alpha: float
    beta: complex = 1.0 + 0j
    gamma: complex = 0.0 + 0j

    def __post_init__(self):
        if not (self.l >= -0.5):
            raise ProblemError(f"l must be >= -1/2, got l={self.l}")
        if not (self.a > 0):
            raise ProblemError(f"a must be positive, got a={self.a}")
        if not (self.alpha > -2):
            raise ProblemError(
                f"alpha must exceed -2 for an admissible potential, got {self.alpha}")
        if self.beta == 0 and self.gamma == 0:
            raise ProblemError("beta and gamma cannot both vanish")

    @classmethod
    def from_strings(cls, l: float, a: float, q: str, r0: str, r1: str,
                     alpha: float, beta: complex = 1.0 + 0j,
                     gamma: complex = 0.0 + 0j) -> "ProblemSpec":
        return cls(l=float(l), a=float(a), q=ex.parse(q), r0=ex.parse(r0),
                   r1=ex.parse(r1), alpha=float(alpha),
                   beta=complex(beta), gamma=complex(gamma))


@dataclass
class ValidationReport:
    ok: bool
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    growth_constant: Optional[float] = None   # estimated sup |q| x^{-alpha}

    def raise_if_failed(self):
        if not self.ok:
            raise ProblemError("; ".join(self.errors))


def validate(p: ProblemSpec, mesh_points: int = 400) -> ValidationReport:
    """Sample-based admissibility check.

    Estimates C = sup_x |q(x)| x^{-alpha} on a logarithmic mesh reaching nine
    decades below a.  The declared alpha is taken at face value unless the
    samples contradict it: if the weighted samples keep growing as x -> 0
    (smallest decade dwarfing the bulk), the declaration is reported as an
    error.  r0 and r1 must evaluate finitely on [0, a], q on (0, a].
    """
    rep = ValidationReport(ok=True)

    xs = np.geomspace(p.a * 1e-9, p.a, mesh_points)
    try:
        qv = ex.sample(p.q, xs)
    except ex.EvalError as err:
        rep.ok = False
        rep.errors.append(f"q: {err}")
        return rep

    with np.errstate(all="ignore"):
        weighted = np.abs(qv) * xs ** (-p.alpha)
    C = float(weighted.max())
    rep.growth_constant = C

    # divergence heuristic: compare the smallest half-decade with the bulk
    lo = weighted[xs < p.a * 10 ** (-8.5)]
    bulk = weighted[xs >= p.a * 1e-2]
    if lo.size and bulk.size and bulk.max() > 0 and lo.max() > 1e3 * bulk.max():
        rep.ok = False
        rep.errors.append(
            f"q grows faster than the declared x^{p.alpha} law near 0 "
            f"(|q| x^-alpha reaches {lo.max():.3g} below x={p.a * 1e-8:.2g} "
            f"vs {bulk.max():.3g} in the bulk)")
    elif lo.size and bulk.size and bulk.max() > 0 and lo.max() > 10 * bulk.max():
        rep.warnings.append(
            "q's declared growth exponent looks tight; the constant estimate "
            "may be unreliable")

    lin = np.linspace(0.0, p.a, mesh_points)
    for name, e in (("r0", p.r0), ("r1", p.r1)):
        try:
            ex.sample(e, lin)
        except ex.EvalError as err:
            rep.ok = False
            rep.errors.append(f"{name} must be finite on [0, a]: {err}")

    return rep


def _realify(a: np.ndarray) -> np.ndarray:
    """Drop an identically-zero imaginary part (keeps real problems in
    float64 all the way down)."""
    if np.iscomplexobj(a) and not a.imag.any():
        return np.ascontiguousarray(a.real)
    return a


def sample_coefficients(p: ProblemSpec, nodes: np.ndarray):
    """Nodal values of (q, r0, r1) with q's node-0 entry set to 0 as a
    placeholder (q may be singular there; no consumer reads it)."""
    r0v = _realify(ex.sample(p.r0, nodes))
    r1v = _realify(ex.sample(p.r1, nodes))
    qv = np.empty(len(nodes), dtype=np.complex128)
    qv[0] = 0.0
    qv[1:] = ex.sample(p.q, nodes[1:])
    return _realify(qv), r0v, r1v
