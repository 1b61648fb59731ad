"""Command-line entry point: ``lforge <subcommand> ...``.

Exit codes: 0 the check passed (or the command only reports), 2 the check
failed, 1 bad input.  A one-line summary goes to stdout; ``--out`` writes the
full JSON report.  Every flag can also be set through an ``LFORGE_*``
environment variable (``LFORGE_SEED``, ``LFORGE_DEGREE_CAP``, ...); explicit
flags win.

The ``timing`` key is the only part of a report that varies between
identical runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import List, Optional

from . import __version__
from .algebra import GradedSubalgebra
from .classifiers import jordan_closure_check, munzner_check
from .errors import LforgeError
from .fiber_lab import (
    DEFAULT_EPS,
    DEFAULT_TOL_VALUE,
    RANK_THRESHOLD,
    b_matrix,
    connectivity_report,
    equidistance_report,
    sample_fibers,
    stratify,
    transcendence_degree,
)
from .invariants import (
    dihedral_invariants,
    builtin_group,
    invariant_ring,
    parse_builtin,
    verify_reynolds_equals_average,
)
from .io import load_algebra, load_group
from .laplacian import is_laplacian, laplacian_closure, required_degree
from .poly import parse

EXIT_PASS, EXIT_ERROR, EXIT_FAIL = 0, 1, 2
TIMING_KEY = "timing"


@dataclass
class RunConfig:
    command: str
    inputs: List[str] = field(default_factory=list)
    dimension: Optional[int] = None
    degree_cap: Optional[int] = None
    seed: int = 0
    tol_value: float = DEFAULT_TOL_VALUE
    eps: float = DEFAULT_EPS
    rank_threshold: float = RANK_THRESHOLD
    out: Optional[str] = None

    def validate(self):
        if self.tol_value <= 0 or self.eps <= 0 or self.rank_threshold <= 0:
            raise ValueError("tolerances must be positive")
        if self.degree_cap is not None and self.degree_cap < 0:
            raise ValueError("degree cap must be non-negative")


def _env(name, cast, default=None):
    raw = os.environ.get("LFORGE_" + name)
    if raw is None:
        return default
    return cast(raw)


# ----------------------------------------------------------------------
# input helpers
# ----------------------------------------------------------------------

def _algebra(args) -> GradedSubalgebra:
    """Algebra from --builtin, a spec file, or inline --gen strings."""
    if getattr(args, "builtin", None):
        name, params = parse_builtin(args.builtin)
        if name == "dihedral":
            A = dihedral_invariants(*params)
        else:
            A = invariant_ring(builtin_group(args.builtin), args.degree_cap)
        args.dimension = A.n
        return A
    if getattr(args, "algebra", None):
        spec = load_algebra(args.algebra)
        if args.degree_cap is None and spec.degree_cap is not None:
            args.degree_cap = spec.degree_cap
        args.dimension = spec.dimension
        return spec.algebra()
    if getattr(args, "gen", None):
        if args.dimension is None:
            raise ValueError("inline generators need -n/--dimension")
        return GradedSubalgebra([parse(s, args.dimension) for s in args.gen], args.dimension)
    raise ValueError("give an algebra file, --gen strings, or --builtin")


def _group(args):
    if getattr(args, "builtin", None):
        return builtin_group(args.builtin)
    if getattr(args, "group", None):
        return load_group(args.group)
    raise ValueError("give a group file or --builtin")


def _strs(polys):
    return [str(p) for p in polys]


# ----------------------------------------------------------------------
# commands; each returns (passed, summary, verdicts, witnesses)
# ----------------------------------------------------------------------

def cmd_check_laplacian(args):
    A = _algebra(args)
    D = args.degree_cap if args.degree_cap is not None else required_degree(A.generators)
    rep = is_laplacian(A, D)
    verdicts = {
        "is_laplacian": rep.is_laplacian_up_to_checks,
        "checked_pairs": rep.checked_pairs,
        "generators": _strs(A.generators),
        "degree_cap": D,
    }
    witnesses = [{"polynomial": str(p), "reason": r} for p, r in rep.witnesses]
    summary = "laplacian: pass" if rep else "laplacian: FAIL " + "; ".join(
        f"{w['reason']}: {w['polynomial']}" for w in witnesses
    )
    return rep.is_laplacian_up_to_checks, summary, verdicts, witnesses


def cmd_laplacian_closure(args):
    A = _algebra(args)
    D = args.degree_cap if args.degree_cap is not None else required_degree(A.generators)
    closed, saturated = laplacian_closure(A.generators, D, args.max_generators)
    verdicts = {"saturated": saturated, "generators": _strs(closed.generators), "max_degree": D}
    summary = ("saturated: " if saturated else "NOT saturated (cap): ") + ", ".join(verdicts["generators"])
    return saturated, summary, verdicts, []


def cmd_reynolds(args):
    A = _algebra(args)
    f = parse(args.poly, A.n)
    res = A.reynolds(f)
    verdicts = {
        "input": str(f),
        "projection": str(res.projection),
        "residual": str(res.residual),
        "member": res.member,
    }
    summary = f"projection: {res.projection}\nresidual: {res.residual}\nmember: {str(res.member).lower()}"
    return True, summary, verdicts, []


def cmd_contains(args):
    A = _algebra(args)
    f = parse(args.poly, A.n)
    res = A.reynolds(f)
    verdicts = {"input": str(f), "member": res.member, "residual": str(res.residual)}
    return res.member, f"member: {str(res.member).lower()}", verdicts, []


def cmd_invariant_ring(args):
    if args.builtin and parse_builtin(args.builtin)[0] == "dihedral":
        A = dihedral_invariants(*parse_builtin(args.builtin)[1])
        D = None
        order = 2 * parse_builtin(args.builtin)[1][0]
    else:
        G = _group(args)
        D = args.degree_cap if args.degree_cap is not None else G.order
        A = invariant_ring(G, D)
        order = G.order
    rep = is_laplacian(A, required_degree(A.generators))
    verdicts = {
        "generators": _strs(A.generators),
        "group_order": order,
        "degree_cap": D,
        "is_laplacian": rep.is_laplacian_up_to_checks,
    }
    return True, "generators: " + ", ".join(verdicts["generators"]), verdicts, []


def cmd_verify_reynolds_average(args):
    G = _group(args)
    D = args.degree_cap if args.degree_cap is not None else G.order
    ok = verify_reynolds_equals_average(G, D, args.trials, args.seed)
    verdicts = {"agree": ok, "group_order": G.order, "degree_cap": D, "trials": args.trials}
    return ok, f"reynolds == average: {'pass' if ok else 'FAIL'}", verdicts, []


def cmd_munzner(args):
    if args.dimension is None:
        raise ValueError("munzner needs -n/--dimension")
    F = parse(args.poly, args.dimension)
    rep = munzner_check(F)
    c = rep.laplacian_constant
    verdicts = {
        "polynomial": str(F),
        "degree": rep.degree,
        "laplacian_constant": "fail" if c is None else str(c),
        "norm_identity_holds": rep.norm_identity_holds,
        "passes": rep.passes,
        "radial": rep.radial,
    }
    summary = f"munzner: {'pass' if rep.passes else 'FAIL'}, c = {verdicts['laplacian_constant']}"
    if rep.radial:
        summary += " (radial)"
    return rep.passes, summary, verdicts, []


def cmd_jordan(args):
    if args.dimension is None:
        raise ValueError("jordan needs -n/--dimension")
    qs = [parse(s, args.dimension) for s in args.polys]
    rep = jordan_closure_check(qs)
    verdicts = {
        "closed": rep.closed,
        "r2_in_span": rep.r2_in_span,
        "dimension_of_span": rep.dimension_of_span,
        "failing_pair": list(rep.failing_pair) if rep.failing_pair else None,
    }
    witnesses = []
    if rep.escaping_product is not None:
        witnesses.append({"polynomial": str(rep.escaping_product), "reason": "product_escapes"})
    elif not rep.r2_in_span:
        witnesses.append({"polynomial": "r^2", "reason": "r2_missing"})
    return rep.closed, f"jordan: {'closed' if rep.closed else 'NOT closed'}", verdicts, witnesses


def cmd_b_matrix(args):
    A = _algebra(args)
    B = b_matrix(A.generators)
    verdicts = {
        "generators": _strs(A.generators),
        "entries": [[str(e) for e in row] for row in B.entries],
        "determinant": str(B.determinant()),
    }
    return True, f"det B = {verdicts['determinant']}", verdicts, []


def cmd_transcendence_degree(args):
    A = _algebra(args)
    t = transcendence_degree(A.generators, args.trials, args.seed)
    verdicts = {"transcendence_degree": t, "trials": args.trials}
    return True, f"transcendence degree: {t}", verdicts, []


def cmd_fiber_report(args):
    A = _algebra(args)
    gens = list(A.generators)
    strat = stratify(gens, args.samples, args.seed, threshold=args.rank_threshold)
    values = "auto"
    if args.values:
        values = [[float(v) for v in s.split(",")] for s in args.values]
    fibers = sample_fibers(gens, values, args.samples, args.seed, args.tol_value, args.eps)
    conn = connectivity_report(fibers, args.eps)
    verdicts = {
        "generators": _strs(gens),
        "stratification": strat.to_dict(),
        "fibers": fibers.to_dict(),
        "connectivity": conn,
    }
    nonempty = [c for c in range(len(fibers.base_values)) if c not in fibers.empty]
    if len(nonempty) >= 2:
        verdicts["equidistance"] = equidistance_report(fibers, (nonempty[0], nonempty[1]))
    summary = f"generic rank {strat.generic_rank}; components per fiber {conn['components']} (evidence)"
    return True, summary, verdicts, []


COMMANDS = {
    "check-laplacian": cmd_check_laplacian,
    "laplacian-closure": cmd_laplacian_closure,
    "reynolds": cmd_reynolds,
    "contains": cmd_contains,
    "invariant-ring": cmd_invariant_ring,
    "verify-reynolds-average": cmd_verify_reynolds_average,
    "munzner": cmd_munzner,
    "jordan": cmd_jordan,
    "b-matrix": cmd_b_matrix,
    "transcendence-degree": cmd_transcendence_degree,
    "fiber-report": cmd_fiber_report,
}


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", "--dimension", type=int, default=_env("DIMENSION", int))
    common.add_argument("-D", "--degree-cap", type=int, default=_env("DEGREE_CAP", int))
    common.add_argument("--seed", type=int, default=_env("SEED", int, 0))
    common.add_argument("--tol-value", type=float, default=_env("TOL_VALUE", float, DEFAULT_TOL_VALUE))
    common.add_argument("--eps", type=float, default=_env("EPS", float, DEFAULT_EPS))
    common.add_argument("--rank-threshold", type=float, default=_env("RANK_THRESHOLD", float, RANK_THRESHOLD))
    common.add_argument("--out", default=_env("OUT", str), help="write the full JSON report here")
    common.add_argument("--json", action="store_true", help="print the JSON report instead of a summary")
    common.add_argument("--builtin", default=_env("BUILTIN", str),
                        help="built-in group, e.g. dihedral:3, neg_id(2), signed_permutations:2")

    parser = argparse.ArgumentParser(prog="lforge", description="Laplacian polynomial algebra toolkit")
    parser.add_argument("--version", action="version", version=f"lforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def algebra_cmd(name, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.add_argument("algebra", nargs="?", help="algebra spec file (YAML/JSON)")
        p.add_argument("-g", "--gen", action="append", help="inline generator (repeatable)")
        return p

    algebra_cmd("check-laplacian", "certify the Laplacian property")
    p = algebra_cmd("laplacian-closure", "saturate generators toward Laplacian closure")
    p.add_argument("--max-generators", type=int, default=20)
    for name, help in (("reynolds", "project a polynomial onto the algebra"),
                       ("contains", "membership test for a polynomial")):
        p = sub.add_parser(name, parents=[common], help=help)
        p.add_argument("algebra", nargs="?")
        p.add_argument("-g", "--gen", action="append")
        p.add_argument("-p", "--poly", required=True, help="polynomial to project")
    for name, help in (("invariant-ring", "generators of a finite group's invariant ring"),
                       ("verify-reynolds-average", "compare projection with group averaging")):
        p = sub.add_parser(name, parents=[common], help=help)
        p.add_argument("group", nargs="?", help="group spec file (YAML/JSON)")
        if name == "verify-reynolds-average":
            p.add_argument("--trials", type=int, default=50)
    p = sub.add_parser("munzner", parents=[common], help="Cartan–Münzner check")
    p.add_argument("poly")
    p = sub.add_parser("jordan", parents=[common], help="Jordan closure of quadratics")
    p.add_argument("polys", nargs="+")
    algebra_cmd("b-matrix", "gradient-pairing matrix and its determinant")
    p = algebra_cmd("transcendence-degree", "generic Jacobian rank")
    p.add_argument("--trials", type=int, default=5)
    p = algebra_cmd("fiber-report", "numerical fiber laboratory")
    p.add_argument("--samples", type=int, default=_env("SAMPLES", int, 2000))
    p.add_argument("--values", action="append", help="base value as comma-separated floats (repeatable)")
    return parser


def _config(args) -> RunConfig:
    inputs = [v for v in (getattr(args, "algebra", None), getattr(args, "group", None)) if v]
    inputs += list(getattr(args, "gen", None) or [])
    for key in ("poly", "builtin"):
        if getattr(args, key, None):
            inputs.append(getattr(args, key))
    inputs += list(getattr(args, "polys", None) or [])
    cfg = RunConfig(
        command=args.command,
        inputs=inputs,
        dimension=args.dimension,
        degree_cap=args.degree_cap,
        seed=args.seed,
        tol_value=args.tol_value,
        eps=args.eps,
        rank_threshold=args.rank_threshold,
        out=args.out,
    )
    cfg.validate()
    return cfg


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_PASS
    start = time.perf_counter()
    try:
        _config(args)
        passed, summary, verdicts, witnesses = COMMANDS[args.command](args)
        cfg = _config(args)
    except (LforgeError, ValueError, OSError) as exc:
        print(f"lforge {args.command}: error: {exc}", file=stderr)
        return EXIT_ERROR
    report = {
        "command": args.command,
        "config": asdict(cfg),
        "verdicts": verdicts,
        "witnesses": witnesses,
        "passed": passed,
        "version": __version__,
        TIMING_KEY: {"seconds": round(time.perf_counter() - start, 6)},
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text if args.json else summary, file=stdout)
    return EXIT_PASS if passed else EXIT_FAIL


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
