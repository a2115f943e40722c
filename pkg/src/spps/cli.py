"""Command-line front end: problem files in, tables/CSV/JSON out.

A problem file is a flat JSON document; expression-valued coefficients are
strings in the closed grammar of :mod:`spps.expr`, complex numbers are
written ``"a+bi"`` (a bare real also works).  Keys::

    l, a, alpha        numbers
    q, r0, r1          expression strings
    beta, gamma        complex literals (optional, default 1 and 0)
    u0, du0            optional expression strings (analytic particular
                       solution; both or neither)
    solver             optional block: N, M, strategy, shift_s, shift_d,
                       shift_e, n_centers, delta, count, lambda0,
                       real_mode, J_regularization, strict

Unknown keys are rejected.  Exit codes: 0 ok, 2 parse error, 3 validation
error, 4 particular-solution failure, 5 solver failure.  All numeric output
is printed with 15 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import expr as ex
from .grid import Grid
from .problem import ProblemError, ProblemSpec, validate
from .usol import ParticularSolutionError, build_u0_analytic, build_u0_series
from .powers import compute_X
from .solution import build_solution, dump_solution, transmute_power
from .spectrum import EigenResult, SolverError, SolverSettings, solve

_TOP_KEYS = {"l", "a", "alpha", "q", "r0", "r1", "beta", "gamma",
             "u0", "du0", "solver"}
_SOLVER_KEYS = {"N", "M", "strategy", "shift_s", "shift_d", "shift_e",
                "n_centers", "delta", "count", "lambda0", "real_mode",
                "J_regularization", "strict"}

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATE = 3
EXIT_U0 = 4
EXIT_SOLVER = 5


class CliError(Exception):
    """Carries the exit code alongside the message."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _g(v: float) -> str:
    return f"{float(v):.15g}"


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0.0:
        return _g(z.real)
    return f"{z.real:.15g}{z.imag:+.15g}i"


def _parse_complex(v, where: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, str):
        try:
            return complex(v.strip().replace(" ", "").replace("i", "j"))
        except ValueError:
            pass
    raise CliError(EXIT_PARSE, f"{where}: expected a number or 'a+bi' "
                               f"literal, got {v!r}")


def _parse_number(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise CliError(EXIT_PARSE, f"{where}: expected a number, got {v!r}")
    return float(v)


def _parse_string(v, where: str) -> str:
    if not isinstance(v, str):
        raise CliError(EXIT_PARSE, f"{where}: expected a string, got {v!r}")
    return v


class ProblemFile:
    """Parsed problem document: spec + solver settings + optional u0."""

    def __init__(self, spec: ProblemSpec, settings: dict,
                 u0_expr: Optional[str], du0_expr: Optional[str]):
        self.spec = spec
        self.settings = settings
        self.u0_expr = u0_expr
        self.du0_expr = du0_expr


def load_problem_file(path: str) -> ProblemFile:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as err:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {err}")
    except json.JSONDecodeError as err:
        raise CliError(EXIT_PARSE, f"{path}: not valid JSON: {err}")
    if not isinstance(doc, dict):
        raise CliError(EXIT_PARSE, f"{path}: top level must be an object")

    unknown = sorted(set(doc) - _TOP_KEYS)
    if unknown:
        raise CliError(EXIT_PARSE, f"{path}: unknown keys {unknown}")
    missing = sorted({"l", "a", "alpha", "q", "r0", "r1"} - set(doc))
    if missing:
        raise CliError(EXIT_PARSE, f"{path}: missing keys {missing}")

    try:
        spec = ProblemSpec.from_strings(
            l=_parse_number(doc["l"], "l"),
            a=_parse_number(doc["a"], "a"),
            q=_parse_string(doc["q"], "q"),
            r0=_parse_string(doc["r0"], "r0"),
            r1=_parse_string(doc["r1"], "r1"),
            alpha=_parse_number(doc["alpha"], "alpha"),
            beta=_parse_complex(doc.get("beta", 1.0), "beta"),
            gamma=_parse_complex(doc.get("gamma", 0.0), "gamma"))
    except ex.ParseError as err:
        raise CliError(EXIT_PARSE, f"{path}: {err}")
    except ProblemError as err:
        raise CliError(EXIT_VALIDATE, f"{path}: {err}")

    u0_expr = du0_expr = None
    if ("u0" in doc) != ("du0" in doc):
        raise CliError(EXIT_PARSE, f"{path}: u0 and du0 must be given "
                                   "together")
    if "u0" in doc:
        u0_expr = _parse_string(doc["u0"], "u0")
        du0_expr = _parse_string(doc["du0"], "du0")
        for name, src in (("u0", u0_expr), ("du0", du0_expr)):
            try:
                ex.parse(src)
            except ex.ParseError as err:
                raise CliError(EXIT_PARSE, f"{path}: {name}: {err}")

    settings: dict = {}
    block = doc.get("solver", {})
    if not isinstance(block, dict):
        raise CliError(EXIT_PARSE, f"{path}: solver must be an object")
    unknown = sorted(set(block) - _SOLVER_KEYS)
    if unknown:
        raise CliError(EXIT_PARSE, f"{path}: unknown solver keys {unknown}")
    for key, val in block.items():
        where = f"solver.{key}"
        if key in ("N", "M", "n_centers", "count"):
            n = _parse_number(val, where)
            if n != int(n):
                raise CliError(EXIT_PARSE, f"{where}: expected an integer")
            settings[key] = int(n)
        elif key in ("shift_s", "shift_d", "shift_e"):
            settings[key] = _parse_number(val, where)
        elif key in ("delta", "lambda0"):
            settings[key] = _parse_complex(val, where)
        elif key in ("real_mode", "strict"):
            if not isinstance(val, bool):
                raise CliError(EXIT_PARSE, f"{where}: expected true/false")
            settings[key] = val
        elif key == "strategy":
            settings[key] = _parse_string(val, where)
        elif key == "J_regularization":
            n = _parse_number(val, where)
            settings["J"] = int(n)
    return ProblemFile(spec, settings, u0_expr, du0_expr)


# ---------------------------------------------------------------------------
# flag plumbing
# ---------------------------------------------------------------------------

def _apply_overrides(settings: dict, args) -> dict:
    out = dict(settings)
    if args.N is not None:
        out["N"] = args.N
    if args.M is not None:
        out["M"] = args.M
    if args.strategy is not None:
        out["strategy"] = args.strategy
    if args.shift is not None:
        parts = args.shift.split(",")
        if len(parts) not in (2, 3):
            raise CliError(EXIT_PARSE,
                           '--shift expects "s,d" or "s,d,e"')
        try:
            vals = [float(s) for s in parts]
        except ValueError:
            raise CliError(EXIT_PARSE, f"--shift: bad number in {args.shift!r}")
        out["shift_s"], out["shift_d"] = vals[0], vals[1]
        if len(vals) == 3:
            out["shift_e"] = vals[2]
    if args.delta is not None:
        out["delta"] = _parse_complex(args.delta, "--delta")
    if getattr(args, "n_centers", None) is not None:
        out["n_centers"] = args.n_centers
    if getattr(args, "count", None) is not None:
        out["count"] = args.count
    if args.real_mode:
        out["real_mode"] = True
    if args.strict:
        out["strict"] = True
    return out


def _parse_indices(text: str) -> list[int]:
    """'1,3,5' / '1..10' / mixtures of both -> sorted unique indices."""
    out: set[int] = set()
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if ".." in piece:
            lo_s, _, hi_s = piece.partition("..")
            try:
                lo, hi = int(lo_s), int(hi_s)
            except ValueError:
                raise CliError(EXIT_PARSE, f"bad index range {piece!r}")
            out.update(range(lo, hi + 1))
        else:
            try:
                out.add(int(piece))
            except ValueError:
                raise CliError(EXIT_PARSE, f"bad index {piece!r}")
    bad = sorted(k for k in out if k < 1)
    if bad:
        raise CliError(EXIT_PARSE, f"eigenvalue indices are 1-based: {bad}")
    return sorted(out)


def _build_settings(cfg: dict) -> SolverSettings:
    try:
        return SolverSettings(**cfg)
    except TypeError as err:
        raise CliError(EXIT_PARSE, f"bad solver settings: {err}")


def _run_validation(spec: ProblemSpec) -> None:
    rep = validate(spec)
    if not rep.ok:
        raise CliError(EXIT_VALIDATE, "; ".join(rep.errors))


def _u0_for(pf: ProblemFile, st: SolverSettings, grid: Grid):
    if pf.u0_expr is not None:
        return build_u0_analytic(pf.spec, pf.u0_expr, pf.du0_expr, grid)
    return build_u0_series(pf.spec, st.N, grid, J=st.J)


# ---------------------------------------------------------------------------
# renderers
# ---------------------------------------------------------------------------

def _solve_table(result: EigenResult) -> str:
    rows = [("n", "lambda", "residual", "trusted", "trust_radius", "center")]
    for i, rec in enumerate(result.eigenvalues, 1):
        lam = rec.lam.real if result.settings.real_mode else rec.lam
        radius = "-" if not np.isfinite(rec.trust_radius) else _g(rec.trust_radius)
        rows.append((str(i), _fmt_complex(lam), _g(rec.residual),
                     "yes" if rec.trusted else "no", radius,
                     str(rec.shift_index)))
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    lines = []
    for r in rows:
        lines.append("  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


def _solve_csv(result: EigenResult) -> str:
    import io
    buf = io.StringIO()
    wr = csv.writer(buf)
    wr.writerow(["n", "re_lambda", "im_lambda", "residual", "trusted",
                 "trust_radius", "shift_index"])
    for i, rec in enumerate(result.eigenvalues, 1):
        wr.writerow([i, _g(rec.lam.real), _g(rec.lam.imag), _g(rec.residual),
                     int(rec.trusted),
                     "" if not np.isfinite(rec.trust_radius) else _g(rec.trust_radius),
                     rec.shift_index])
    return buf.getvalue().rstrip("\n")


def _result_json(result: EigenResult) -> str:
    return json.dumps(result.to_dict(), indent=2, sort_keys=True)


def _write_powers_csv(fh, grid: Grid, members: list[np.ndarray]) -> None:
    is_complex = any(np.iscomplexobj(m) for m in members)
    wr = csv.writer(fh)
    head = ["x"]
    for n in range(len(members)):
        head += [f"p{n}_re", f"p{n}_im"] if is_complex else [f"p{n}"]
    wr.writerow(head)
    for j in range(grid.M + 1):
        row = [_g(grid.nodes[j])]
        for m in members:
            v = complex(m[j])
            row.append(_g(v.real))
            if is_complex:
                row.append(_g(v.imag))
        wr.writerow(row)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_solve(args) -> int:
    pf = load_problem_file(args.problem)
    cfg = _apply_overrides(pf.settings, args)
    st = _build_settings(cfg)
    _run_validation(pf.spec)

    want_fns = _parse_indices(args.eigenfunctions) if args.eigenfunctions else []
    if want_fns:
        st = SolverSettings(**{**cfg, "eigenfunctions": True})

    result = solve(pf.spec, st, u0_expr=pf.u0_expr, du0_expr=pf.du0_expr)

    if args.format == "json":
        print(_result_json(result))
    elif args.format == "csv":
        print(_solve_csv(result))
    else:
        print(_solve_table(result))

    out_dir = args.out_dir or "."
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "eigenvalues.json"), "w") as fh:
        fh.write(_result_json(result) + "\n")

    missing = [k for k in want_fns if k > len(result.eigenvalues)]
    if missing:
        raise CliError(EXIT_SOLVER,
                       f"eigenfunctions {missing} not reached "
                       f"(found {len(result.eigenvalues)} eigenvalues)")
    for k in want_fns:
        rec = result.eigenvalues[k - 1]
        dump_solution(os.path.join(out_dir, f"eigenfunction_{k:03d}.csv"),
                      rec.u, rec.du)

    if args.dump_powers:
        grid = Grid(pf.spec.a, st.M)
        u0 = _u0_for(pf, st, grid)
        sol = build_solution(u0, st.N, J=st.J)
        with open(os.path.join(out_dir, "powers.csv"), "w", newline="") as fh:
            _write_powers_csv(fh, grid, sol.powers.powers)
    return EXIT_OK


def cmd_validate(args) -> int:
    pf = load_problem_file(args.problem)
    rep = validate(pf.spec)
    status = "ok" if rep.ok else "invalid"
    print(f"{args.problem}: {status}")
    if rep.growth_constant is not None:
        print(f"  growth constant sup |q| x^-alpha ~ {_g(rep.growth_constant)}")
    for w in rep.warnings:
        print(f"  warning: {w}")
    for e in rep.errors:
        print(f"  error: {e}")
    return EXIT_OK if rep.ok else EXIT_VALIDATE


def cmd_bench(args) -> int:
    from .bench import benchmark_cases, run_benchmark

    cases = benchmark_cases()
    if args.case == "all":
        ids = list(cases)
    elif args.case in cases:
        ids = [args.case]
    else:
        raise CliError(EXIT_PARSE,
                       f"unknown case {args.case!r}; known: "
                       f"{', '.join(cases)} or 'all'")
    overrides = {}
    if args.N is not None:
        overrides["N"] = args.N
    if args.M is not None:
        overrides["M"] = args.M
    if args.n_centers is not None:
        overrides["n_centers"] = args.n_centers

    all_ok = True
    for cid in ids:
        rep = run_benchmark(cid, overrides or None)
        all_ok &= rep.ok
        print(f"{cid}: {'pass' if rep.ok else 'FAIL'}")
        for row in rep.rows:
            print(f"  n={row.n}: computed {_fmt_complex(row.computed)} "
                  f"reference {_fmt_complex(row.reference)} "
                  f"rel_err {_g(row.rel_err)} "
                  f"[{'ok' if row.passed else 'FAIL'}]")
        for n in rep.missing:
            print(f"  n={n}: not reached [FAIL]")
        print(f"  ({rep.seconds:.1f}s)", file=sys.stderr)
    return EXIT_OK if all_ok else EXIT_SOLVER


def cmd_powers(args) -> int:
    pf = load_problem_file(args.problem)
    cfg = dict(pf.settings)
    if args.N is not None:
        cfg["N"] = args.N
    if args.M is not None:
        cfg["M"] = args.M
    st = _build_settings(cfg)
    _run_validation(pf.spec)
    grid = Grid(pf.spec.a, st.M)
    u0 = _u0_for(pf, st, grid)
    pset = compute_X(pf.spec, u0.u0, u0.du0, st.N, grid, J=st.J,
                     strict=st.strict)
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        with open(os.path.join(args.out_dir, "powers.csv"), "w",
                  newline="") as fh:
            _write_powers_csv(fh, grid, pset.powers)
    else:
        _write_powers_csv(sys.stdout, grid, pset.powers)
    return EXIT_OK


def cmd_transmute(args) -> int:
    pf = load_problem_file(args.problem)
    cfg = dict(pf.settings)
    if args.N is not None:
        cfg["N"] = args.N
    if args.M is not None:
        cfg["M"] = args.M
    st = _build_settings(cfg)
    _run_validation(pf.spec)
    if args.kmax < 0 or args.kmax > st.N:
        raise CliError(EXIT_PARSE,
                       f"--kmax must be in [0, N={st.N}], got {args.kmax}")
    grid = Grid(pf.spec.a, st.M)
    u0 = _u0_for(pf, st, grid)
    sol = build_solution(u0, st.N, J=st.J)
    try:
        images = [transmute_power(sol, k) for k in range(args.kmax + 1)]
    except ValueError as err:
        raise CliError(EXIT_VALIDATE, str(err))
    members = [im.values for im in images]
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        with open(os.path.join(args.out_dir, "transmuted.csv"), "w",
                  newline="") as fh:
            _write_powers_csv(fh, grid, members)
    else:
        _write_powers_csv(sys.stdout, grid, members)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _add_common_solver_flags(sp, centers: bool = True):
    sp.add_argument("--N", type=int, default=None,
                    help="truncation order of the power series")
    sp.add_argument("--M", type=int, default=None,
                    help="number of quadrature panels (multiple of 5)")
    if centers:
        sp.add_argument("--strategy", choices=("linear", "adaptive"),
                        default=None)
        sp.add_argument("--shift", default=None, metavar="S,D[,E]",
                        help="linear schedule: center_n = S*n + i(D*n + E)")
        sp.add_argument("--delta", default=None, metavar="A+Bi",
                        help="adaptive chain increment")
        sp.add_argument("--n-centers", dest="n_centers", type=int,
                        default=None, help="linear schedule length")
        sp.add_argument("--count", type=int, default=None,
                        help="adaptive: how many eigenvalues to chase")
        sp.add_argument("--real-mode", action="store_true",
                        help="keep only (and realify) real eigenvalues")
        sp.add_argument("--strict", action="store_true",
                        help="escalate bound violations to errors")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spps",
        description="Eigenvalue solver for perturbed Bessel operators "
                    "via spectral-parameter power series.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve a problem file's spectrum")
    sp.add_argument("problem", help="path to a JSON problem file")
    _add_common_solver_flags(sp)
    sp.add_argument("--format", choices=("table", "json", "csv"),
                    default="table")
    sp.add_argument("--out-dir", default=None,
                    help="directory for eigenvalues.json and CSVs "
                         "(default: current directory)")
    sp.add_argument("--eigenfunctions", default=None, metavar="K1,K2|A..B",
                    help="write eigenfunction CSVs for these 1-based indices")
    sp.add_argument("--dump-powers", action="store_true",
                    help="also write the center family's powers.csv")
    sp.set_defaults(fn=cmd_solve)

    sp = sub.add_parser("validate", help="check a problem file's coefficients")
    sp.add_argument("problem")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("bench", help="run stock benchmark cases")
    sp.add_argument("case", help="case id or 'all'")
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--M", type=int, default=None)
    sp.add_argument("--n-centers", dest="n_centers", type=int, default=None)
    sp.set_defaults(fn=cmd_bench)

    sp = sub.add_parser("powers",
                        help="emit the formal power family as CSV")
    sp.add_argument("problem")
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--M", type=int, default=None)
    sp.add_argument("--out-dir", default=None)
    sp.set_defaults(fn=cmd_powers)

    sp = sub.add_parser("transmute",
                        help="emit transmuted power images as CSV")
    sp.add_argument("problem")
    sp.add_argument("--kmax", type=int, required=True)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--M", type=int, default=None)
    sp.add_argument("--out-dir", default=None)
    sp.set_defaults(fn=cmd_transmute)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as err:
        print(f"spps: {err}", file=sys.stderr)
        return err.code
    except ex.ParseError as err:
        print(f"spps: {err}", file=sys.stderr)
        return EXIT_PARSE
    except ProblemError as err:
        print(f"spps: {err}", file=sys.stderr)
        return EXIT_VALIDATE
    except ParticularSolutionError as err:
        print(f"spps: {err}", file=sys.stderr)
        return EXIT_U0
    except SolverError as err:
        print(f"spps: {err}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
