"""Command-line entry point.

Exit codes: 0 success, 1 a check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from .io import SchemaError, load_current_file, validate_document
from .lie_core import AlgebraInputError, load_algebra, validate_algebra
from .lp import LpError
from .rumin import build_rumin_complex, verify_complex

EXIT_OK, EXIT_CHECK, EXIT_INPUT = 0, 1, 2


@dataclass
class CliConfig:
    command: str
    algebra: str | None = None
    format: str = "pretty"
    mode: str = "exact"
    seed: int = 0
    dump_operators: bool = False
    timing: bool = False


class InputError(Exception):
    pass


def _num(v):
    return str(v) if isinstance(v, Fraction) else v


def _emit(doc: dict, rows: list[list], header: list[str], pretty: str, cfg: CliConfig, out) -> None:
    if cfg.format == "json":
        out.write(json.dumps(doc, indent=2) + "\n")
    elif cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write(pretty.rstrip("\n") + "\n")


def _load_valid_algebra(source: str | None):
    if not source:
        raise InputError("no algebra given (positional argument or --algebra)")
    try:
        alg = load_algebra(source)
    except (AlgebraInputError, KeyError) as exc:
        raise InputError(exc.args[0] if exc.args else str(exc)) from exc
    return alg, validate_algebra(alg)


# --------------------------------------------------------------------------- commands


def cmd_complex(cfg: CliConfig, out=sys.stdout) -> int:
    alg, report = _load_valid_algebra(cfg.algebra)
    if not report.ok:
        out.write(f"algebra {alg.name} fails validation:\n{report}\n")
        return EXIT_CHECK
    t0 = time.perf_counter()
    rc = build_rumin_complex(alg)
    doc = rc.table()
    for entry in doc["degrees"]:
        entry["basis"] = rc.e0_labels(entry["degree"])
    if cfg.dump_operators:
        doc["operators"] = {
            f"d_c^{k}": rc.dc[k].dump(rc.e0_labels(k + 1), rc.e0_labels(k)) for k in range(rc.n)
        }
    if cfg.timing:
        doc["timing_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    validate_document(doc, "complex_report")

    lines = [f"{alg.name}: n = {rc.n}, Q = {rc.Q}, delta = {rc.delta}",
             f"{'k':>2}  {'dim':>4}  {'weights':<24} d_c orders"]
    rows = []
    for e in doc["degrees"]:
        w = " ".join(map(str, e["weights"]))
        o = " ".join(map(str, e["dc_orders"])) or "-"
        lines.append(f"{e['degree']:>2}  {e['dim']:>4}  {w:<24} {o}")
        rows.append([e["degree"], e["dim"], w, o])
    if cfg.dump_operators:
        for name, text in doc["operators"].items():
            lines += ["", f"{name}:", text or "  0"]
    if cfg.timing:
        lines.append(f"built in {doc['timing_ms']} ms")
    _emit(doc, rows, ["degree", "dim", "weights", "dc_orders"], "\n".join(lines), cfg, out)
    return EXIT_OK


def cmd_verify(cfg: CliConfig, out=sys.stdout) -> int:
    alg, report = _load_valid_algebra(cfg.algebra)
    if not report.ok:
        doc = {"algebra": alg.name, "ok": False, "checks": {"validation": "fail"},
               "validation": [f"{ax}: {msg}" for ax, msg in report.failures]}
        rows = [["validation", "fail"]]
        pretty = f"{alg.name}: validation FAILED\n{report}"
        _emit(doc, rows, ["check", "status"], pretty, cfg, out)
        return EXIT_CHECK
    t0 = time.perf_counter()
    rc = build_rumin_complex(alg)
    rep = verify_complex(rc)
    status = {k: ("out-of-hypothesis" if v is None else "pass" if v else "fail") for k, v in rep.checks.items()}
    doc = {"algebra": alg.name, "ok": rep.ok, "checks": status,
           "details": {k: str(v) for k, v in rep.details.items()}}
    if cfg.timing:
        doc["timing_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    validate_document(doc, "verify_report")
    lines = [f"{alg.name}: {'all checks pass' if rep.ok else 'FAILED: ' + ', '.join(rep.failed())}"]
    for k, v in status.items():
        extra = f"  ({doc['details'][k]})" if k in doc["details"] else ""
        lines.append(f"  {k:<24} {v}{extra}")
    if cfg.timing:
        lines.append(f"verified in {doc['timing_ms']} ms")
    _emit(doc, [[k, v] for k, v in status.items()], ["check", "status"], "\n".join(lines), cfg, out)
    return EXIT_OK if rep.ok else EXIT_CHECK


def cmd_flatnorm(cfg: CliConfig, path: str, out=sys.stdout, err=sys.stderr) -> int:
    from .discrete.norms import (MarginError, boundary, check_margin, dc_operator, flat_norm_dual,
                                 flat_norm_primal, flat_primal_lp, mass)

    try:
        rc, grid, T = load_current_file(path, cfg.algebra)
    except (AlgebraInputError, KeyError) as exc:
        raise InputError(str(exc)) from exc
    except ValueError as exc:          # schema, grid and index errors
        raise InputError(str(exc)) from exc
    if cfg.mode == "exact":
        if not T.is_exact:
            T = type(T)(grid, T.dimension, T.basis_dim, {k: Fraction(v) for k, v in T.coeffs.items()})
    else:
        T = T.as_float()
    t0 = time.perf_counter()
    zero = Fraction(0) if cfg.mode == "exact" else 0.0
    try:
        if T.dimension < rc.n:
            check_margin(T, dc_operator(rc, grid, T.dimension, exact=cfg.mode == "exact"))
        M = mass(T)
        N = M + mass(boundary(rc, grid, T)) if T.dimension > 0 else M
    except MarginError as exc:
        out.write(f"margin error: {exc}\n")
        return EXIT_INPUT
    if T.dimension >= rc.n:
        raise InputError(f"flat norm needs an (m+1)-current space; m = {T.dimension} is the top degree")
    if T.coeffs:
        if cfg.dump_operators:
            err.write(flat_primal_lp(rc, grid, T, exact=True)[0].dump() + "\n")
        primal = flat_norm_primal(rc, grid, T, cfg.mode)
        dual = flat_norm_dual(rc, grid, T, cfg.mode)
        value, S, R = primal.value, primal.S, primal.R
    else:
        value = dual = zero
        S = R = None
    gap = abs(value - dual)
    doc = {"algebra": rc.alg.name, "dimension": T.dimension, "mode": cfg.mode,
           "mass": _num(M), "normal_mass": _num(N), "flat_primal": _num(value), "flat_dual": _num(dual),
           "gap": _num(gap),
           "witness": {"mass_S": _num(mass(S) if S else zero), "mass_R": _num(mass(R) if R else zero),
                       "support_S": len(S.coeffs) if S else 0, "support_R": len(R.coeffs) if R else 0}}
    if cfg.timing:
        doc["timing_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    validate_document(doc, "flatnorm_report")
    keys = ["mass", "normal_mass", "flat_primal", "flat_dual", "gap"]
    lines = [f"{rc.alg.name} {T.dimension}-current, {len(T.coeffs)} coefficients, {cfg.mode} mode"]
    lines += [f"  {k:<12} {doc[k]}" for k in keys]
    w = doc["witness"]
    lines.append(f"  witness      M(S) = {w['mass_S']} on {w['support_S']} dofs, "
                 f"M(R) = {w['mass_R']} on {w['support_R']} dofs")
    if cfg.timing:
        lines.append(f"solved in {doc['timing_ms']} ms")
    _emit(doc, [[k, doc[k]] for k in keys], ["quantity", "value"], "\n".join(lines), cfg, out)
    tol = 0 if cfg.mode == "exact" else 1e-9 * (1 + abs(float(value)))
    return EXIT_OK if gap <= tol else EXIT_CHECK


def cmd_compactness(cfg: CliConfig, args: argparse.Namespace, out=sys.stdout) -> int:
    from .discrete.probe import ProbeBudgetError, ProbeConfig, compactness_probe

    alg, report = _load_valid_algebra(cfg.algebra or "heisenberg(1)")
    if not report.ok:
        out.write(f"algebra {alg.name} fails validation:\n{report}\n")
        return EXIT_CHECK
    try:
        box = tuple(tuple(Fraction(x) for x in iv.split(":")) for iv in args.box.split(",")) if args.box else None
        kw = dict(dimension=args.dimension, h=Fraction(args.h), nu=args.nu, eps=args.eps, samples=args.samples,
                  levels=args.levels, seed=cfg.seed, mode=cfg.mode, timing=cfg.timing)
        if box is not None:
            kw["box"] = box
        pc = ProbeConfig(**kw)
    except (ValueError, ZeroDivisionError, ProbeBudgetError) as exc:
        raise InputError(f"bad probe parameters: {exc}") from exc
    rc = build_rumin_complex(alg)
    if len(pc.box) != rc.n:
        raise InputError(f"--box needs {rc.n} intervals")
    try:
        rep = compactness_probe(rc, pc)
    except LpError as exc:
        out.write(f"LP failure: {exc}\n")
        return EXIT_CHECK
    doc = rep.to_json()
    validate_document(doc, "probe_report")
    rows = [[lv["h"], lv["net_size"], lv["max_pairwise_flat"], lv["runtime_ms"]] for lv in doc["levels"]]
    lines = [f"{alg.name}: {pc.samples} samples of {pc.dimension}-currents, nu = {pc.nu}, eps = {pc.eps}, "
             f"seed = {pc.seed}, {pc.mode} mode",
             f"  {'h':<8} {'net size':>8}  max pairwise flat"]
    for h, size, widest, ms in rows:
        lines.append(f"  {h:<8} {size:>8}  {widest}" + (f"  ({ms} ms)" if ms is not None else ""))
    sizes = rep.net_sizes
    lines.append(f"covering numbers {sizes}; within factor 2 of the coarsest level: {rep.within_factor(2)}")
    _emit(doc, rows, ["h", "net_size", "max_pairwise_flat", "runtime_ms"], "\n".join(lines), cfg, out)
    return EXIT_OK


# --------------------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", help="catalog name (abelian(n), heisenberg(k), engel) or algebra JSON path")
    common.add_argument("--format", choices=("pretty", "json", "csv"), default="pretty")
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--dump-operators", action="store_true",
                        help="print d_c matrices (complex) or the flat-norm LP in CPLEX text (flatnorm, to stderr)")
    common.add_argument("--timing", action="store_true")

    p = argparse.ArgumentParser(prog="ruminkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, hlp in (("complex", "weights, dimensions and d_c orders per degree"),
                      ("verify", "exact identities of the Rumin complex")):
        c = sub.add_parser(name, parents=[common], help=hlp)
        c.add_argument("source", nargs="?", help="same as --algebra")
    f = sub.add_parser("flatnorm", parents=[common], help="mass, normal mass and flat norm of a current file")
    f.add_argument("current", help="current JSON file")
    c = sub.add_parser("compactness", parents=[common], help="covering-number probe under the flat distance")
    c.add_argument("--dimension", type=int, default=1)
    c.add_argument("--box", help="support box as lo:hi,lo:hi,... (rationals)")
    c.add_argument("--h", default="1/2", help="coarsest grid parameter")
    c.add_argument("--nu", type=float, default=1.0)
    c.add_argument("--eps", type=float, default=0.2)
    c.add_argument("--samples", type=int, default=50)
    c.add_argument("--levels", type=int, default=2)
    c.set_defaults(mode=None)
    return p


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    mode = args.mode or ("float" if args.command == "compactness" else "exact")
    cfg = CliConfig(args.command, args.algebra or getattr(args, "source", None), args.format, mode,
                    args.seed, args.dump_operators, args.timing)
    try:
        if args.command == "complex":
            return cmd_complex(cfg, out)
        if args.command == "verify":
            return cmd_verify(cfg, out)
        if args.command == "flatnorm":
            return cmd_flatnorm(cfg, args.current, out, err)
        return cmd_compactness(cfg, args, out)
    except (InputError, SchemaError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
