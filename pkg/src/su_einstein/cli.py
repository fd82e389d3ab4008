"""Command-line front end: basis validation, Einstein checks, solving, catalog.

Commands
  basis    build a generator basis, validate it, print class/Gram/sparsity info
  check    test whether a given x-vector is an Einstein metric
  solve    closed forms + multistart for one (scheme, n, p) configuration
  catalog  enumerate all configurations for n and classify by I1

Exit codes: 0 success, 1 validation or verdict failure, 2 usage error.
JSON output is canonical: sorted keys, floats with 17 significant digits, so
parse -> re-serialize is byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import numpy as np

from . import cache, catalog, curvature, liealg, solver

SCHEMA_VERSION = 1


# -- canonical JSON ----------------------------------------------------------

def _json_scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if v != v or v in (float("inf"), float("-inf")):
            return '"%s"' % v  # JSON has no NaN/Inf; stringify
        return format(v, ".17g")
    if isinstance(v, str):
        out = v.replace("\\", "\\\\").replace('"', '\\"')
        out = out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
        return f'"{out}"'
    raise TypeError(f"cannot serialize {type(v)}")


def canonical_json(obj, indent: int = 0) -> str:
    """Deterministic JSON: sorted keys, fixed float formatting."""
    pad = "  " * indent
    pad_in = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad_in}{_json_scalar(str(k))}: {canonical_json(v, indent + 1)}'
            for k, v in sorted(obj.items())
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad_in}{canonical_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return _json_scalar(obj)


def emit_json(command: str, params: dict, results, diagnostics: dict) -> str:
    return canonical_json({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "results": results,
        "diagnostics": diagnostics,
    })


# -- config ------------------------------------------------------------------

class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    scheme: int | None
    n: int
    p: int | None
    x: tuple[float, ...] | None
    tol: float
    starts: int
    seed: int
    fmt: str
    cache_dir: str | None
    exact: bool


def _validate(args: argparse.Namespace) -> RunConfig:
    scheme = getattr(args, "scheme", None)
    p = getattr(args, "p", None)
    n = args.n
    if n < 2:
        raise UsageError(f"--n must be at least 2 (got {n})")
    if scheme == 1 and p is not None:
        raise UsageError("--p only applies to --scheme 2")
    if scheme == 2:
        if p is None:
            raise UsageError("--scheme 2 requires --p")
        if args.command == "solve":
            if not 1 <= p <= n - 1:
                raise UsageError(
                    f"--p must be in 1..n-1 for solving (got p={p}, n={n}); "
                    "p = 0 or p = n is the scheme-1 configuration")
        elif not 0 <= p <= n:
            raise UsageError(f"--p must be in 0..n (got p={p}, n={n})")
    x = None
    if getattr(args, "x", None) is not None:
        try:
            x = tuple(float(t) for t in args.x.split(","))
        except ValueError as exc:
            raise UsageError(f"could not parse --x {args.x!r}: {exc}") from None
        want = 3 if scheme == 1 else 4
        if len(x) != want:
            raise UsageError(f"--x needs {want} comma-separated values for scheme {scheme}")
        if any(t <= 0 for t in x):
            raise UsageError("--x entries must be strictly positive")
    fmt = getattr(args, "format", "table")
    if fmt == "csv" and args.command in ("basis", "check"):
        raise UsageError(f"csv output is not defined for '{args.command}'")
    return RunConfig(
        command=args.command,
        scheme=scheme,
        n=n,
        p=p,
        x=x,
        tol=getattr(args, "tol", curvature.DEFAULT_EINSTEIN_TOL),
        starts=getattr(args, "starts", 400),
        seed=getattr(args, "seed", 0),
        fmt=fmt,
        cache_dir=getattr(args, "cache_dir", None),
        exact=getattr(args, "exact", False),
    )


def _sc_for(cfg: RunConfig) -> liealg.StructureConstants:
    cache_dir = cache.resolve_cache_dir(cfg.cache_dir)
    return cache.fetch_structure_constants(cfg.scheme, cfg.n, cfg.p, cache_dir)


# -- commands ----------------------------------------------------------------

def cmd_basis(cfg: RunConfig) -> int:
    if cfg.scheme == 1:
        basis = liealg.build_scheme1_basis(cfg.n)
    else:
        basis = liealg.build_scheme2_basis(cfg.n, cfg.p)
    report = liealg.validate_basis(basis)
    sc = _sc_for(cfg)
    nnz = int(np.count_nonzero(np.abs(sc.f) > cache.SPARSE_EPS))
    total = sc.d**3
    exact_result = None
    if cfg.exact:
        exact_result = liealg.exact_validate(basis)

    if cfg.fmt == "json":
        gram_diag, counts = np.unique(report.gram_diagonal, return_counts=True)
        results = {
            "passed": report.passed,
            "dim": report.dim,
            "class_sizes": list(report.class_sizes),
            "gram_diagonal_values": [
                {"value": float(v), "count": int(c)} for v, c in zip(gram_diag, counts)
            ],
            "f_nonzeros": nnz,
            "f_entries": total,
            "problems": report.problems,
        }
        if exact_result is not None:
            results["exact"] = {k: v for k, v in exact_result.items() if k != "gram_diagonal"}
        print(emit_json("basis", _params(cfg), results, {}))
    else:
        for line in report.summary_lines():
            print(line)
        gram_diag, counts = np.unique(np.round(report.gram_diagonal, 12),
                                      return_counts=True)
        print("gram diagonal: " + ", ".join(
            f"{v:g} x{c}" for v, c in zip(gram_diag, counts)))
        print(f"f sparsity: {nnz} nonzero of {total} ({100.0 * nnz / total:.2f}%)")
        if exact_result is not None:
            print("exact validation: " + ("PASS" if exact_result["all_passed"] else "FAIL"))
    ok = report.passed and (exact_result is None or exact_result["all_passed"])
    return 0 if ok else 1


def cmd_check(cfg: RunConfig) -> int:
    sc = _sc_for(cfg)
    metric = curvature.MetricSpec.from_x(sc, cfg.x)
    residual, lam = curvature.einstein_residual(metric, sc)
    einstein = residual <= cfg.tol
    I1 = curvature.invariant_I1(metric, sc, tol=cfg.tol) if einstein else None
    verdict = "EINSTEIN" if einstein else "NOT-EINSTEIN"

    if cfg.fmt == "json":
        results = {
            "x": list(cfg.x),
            "lambda": lam,
            "residual": residual,
            "I1": I1,
            "verdict": verdict,
        }
        print(emit_json("check", _params(cfg), results, {"tol": cfg.tol}))
    else:
        print(f"x = ({', '.join(repr(t) for t in cfg.x)})")
        print(f"lambda = {lam!r}")
        print(f"residual = {residual:.3e}  (threshold {cfg.tol:.1e})")
        if I1 is not None:
            print(f"I1 = {I1!r}")
        print(f"verdict: {verdict}")
    return 0 if einstein else 1


_RECORD_FIELDS = ("scheme", "n", "p", "x", "lambda", "I1",
                  "provenance", "residual", "eq_class")


def _record_rows(records) -> list[list]:
    rows = []
    for r in records:
        d = r.as_dict()
        rows.append([d[k] if k != "x" else ",".join(repr(t) for t in r.x)
                     for k in _RECORD_FIELDS])
    return rows


def _print_record_table(records) -> None:
    rows = [[str(c) for c in row] for row in _record_rows(records)]
    header = list(_RECORD_FIELDS)
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i])
              for i in range(len(header))]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


def _print_record_csv(records) -> None:
    out = csv.writer(sys.stdout)
    out.writerow(_RECORD_FIELDS)
    for row in _record_rows(records):
        out.writerow(row)


def cmd_solve(cfg: RunConfig) -> int:
    result = solver.solve_configuration(cfg.scheme, cfg.n, cfg.p,
                                        n_starts=cfg.starts, seed=cfg.seed,
                                        engine_tol=cfg.tol)
    if cfg.fmt == "json":
        print(emit_json("solve", _params(cfg),
                        [r.as_dict() for r in result.records], result.diagnostics))
    elif cfg.fmt == "csv":
        _print_record_csv(result.records)
    else:
        _print_record_table(result.records)
        print(f"{len(result.records)} distinct Einstein metric(s)")
        if result.diagnostics["search_missed"]:
            print("WARNING: multistart missed closed forms: "
                  + ", ".join(result.diagnostics["search_missed"]))
    return 0


def cmd_catalog(cfg: RunConfig) -> int:
    entry = catalog.enumerate_metrics(cfg.n, n_starts=cfg.starts, seed=cfg.seed,
                                      engine_tol=cfg.tol)
    if cfg.fmt == "json":
        d = entry.as_dict()
        records = d.pop("records")
        diagnostics = d.pop("diagnostics")
        d["records"] = records
        print(emit_json("catalog", _params(cfg), d, diagnostics))
    elif cfg.fmt == "csv":
        _print_record_csv(entry.records)
    else:
        _print_record_table(entry.records)
        print(f"inequivalent classes (by I1): {entry.count_inequivalent}")
        print(f"closed-form count: {entry.paper_count}")
        print(f"agreement: {entry.agreement}")
        if not entry.search_complete:
            print("WARNING: search under-resolved for at least one configuration")
    return 0


def _params(cfg: RunConfig) -> dict:
    params = {"n": cfg.n}
    if cfg.scheme is not None:
        params["scheme"] = cfg.scheme
    if cfg.p is not None:
        params["p"] = cfg.p
    if cfg.x is not None:
        params["x"] = list(cfg.x)
    if cfg.command in ("solve", "catalog"):
        params["starts"] = cfg.starts
        params["seed"] = cfg.seed
    return params


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="su-einstein",
        description="Left-invariant Einstein metrics on SU(n) from structure constants.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scheme=True):
        if scheme:
            p.add_argument("--scheme", type=int, choices=(1, 2), required=True)
            p.add_argument("--p", type=int, default=None,
                           help="block size for scheme 2 (q = n - p)")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--cache-dir", default=None,
                       help=f"structure-constant cache directory (or ${cache.ENV_CACHE_DIR})")

    p_basis = sub.add_parser("basis", help="build and validate a generator basis")
    common(p_basis)
    p_basis.add_argument("--exact", action="store_true",
                         help="additionally run the symbolic exact validation (small n)")

    p_check = sub.add_parser("check", help="Einstein check for a metric x-vector")
    common(p_check)
    p_check.add_argument("--x", required=True,
                         help="comma-separated metric constants, e.g. 7,1,7")
    p_check.add_argument("--tol", type=float, default=curvature.DEFAULT_EINSTEIN_TOL)

    p_solve = sub.add_parser("solve", help="find all Einstein metrics of a configuration")
    common(p_solve)
    p_solve.add_argument("--starts", type=int, default=400)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--tol", type=float, default=curvature.DEFAULT_EINSTEIN_TOL)

    p_cat = sub.add_parser("catalog", help="enumerate and classify all metrics for n")
    common(p_cat, scheme=False)
    p_cat.add_argument("--starts", type=int, default=400)
    p_cat.add_argument("--seed", type=int, default=0)
    p_cat.add_argument("--tol", type=float, default=curvature.DEFAULT_EINSTEIN_TOL)

    return parser


_DISPATCH = {
    "basis": cmd_basis,
    "check": cmd_check,
    "solve": cmd_solve,
    "catalog": cmd_catalog,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _validate(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return _DISPATCH[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
