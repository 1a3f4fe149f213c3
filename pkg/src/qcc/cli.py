"""Command-line interface.

Results go to stdout and are byte-identical across runs with the same
arguments; timings and progress go to stderr.  Exit codes: 0 success,
1 a verification failed, 2 bad usage or input, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import charclass as cc
from .errors import InputError, InternalError, MissingBasicClass, QccError
from .hall import Mode
from .kernels import BACKEND
from .quiver import (
    KostantPartition, Quiver, kostant_partitions, positive_roots, reineke_order,
    type_a_open_orbit_diagram,
)
from .repalg import (
    StabilityFunction, generic_kostant_partition, orbit_codimension, random_generic_stability,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
BUNDLED = ("a2", "a3", "d4", "d5", "e6")
DEFAULT_LIMIT = 6


class UsageError(InputError):
    pass


def load_quiver(spec: str) -> Quiver:
    """A path to a JSON quiver file, or the name of a bundled quiver."""
    path = Path(spec)
    if path.exists():
        return Quiver.load(path)
    name = spec.lower().removesuffix(".json")
    if name in BUNDLED:
        text = resources.files("qcc").joinpath("quivers", f"{name}.json").read_text()
        return Quiver.from_dict(json.loads(text), name)
    raise UsageError(f"no quiver file {spec!r} (bundled: {', '.join(BUNDLED)})")


def parse_vector(text: str) -> tuple[int, ...]:
    body = text.strip().removeprefix("(").removesuffix(")")
    try:
        return tuple(int(x) for x in body.split(","))
    except ValueError as exc:
        raise UsageError(f"bad dimension vector {text!r}") from exc


def fmt_vec(v: Sequence[int]) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def fmt_support(m: KostantPartition) -> str:
    return " + ".join(f"{k}*{fmt_vec(r)}" if k > 1 else fmt_vec(r) for r, k in m.support().items()) or "0"


class Context:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.quiver = load_quiver(args.quiver)
        self.json = args.format == "json"
        self.limit = args.limit
        self._t0 = time.perf_counter()

    def dim(self, text: str) -> tuple[int, ...]:
        g = self.quiver.check_dim(parse_vector(text))
        if any(x > self.limit for x in g):
            raise UsageError(f"coordinates above the limit {self.limit}: {fmt_vec(g)}")
        return g

    def log(self, msg: str) -> None:
        print(f"[{time.perf_counter() - self._t0:7.2f}s] {msg}", file=sys.stderr)

    def emit(self, text_lines: list[str], data) -> None:
        if self.json:
            print(json.dumps(data, sort_keys=True, indent=2))
        else:
            for line in text_lines:
                print(line)

    def table_path(self) -> Path | None:
        p = self.args.table or os.environ.get("QCC_TABLE_CACHE")
        return Path(p) if p else None

    def table(self, mode: Mode, roots_needed: Sequence[Sequence[int]]) -> cc.BasicClassTable:
        """Load the cached table if any and fill in whatever is missing."""
        path = self.table_path()
        table = None
        if path and path.exists():
            table = cc.BasicClassTable.load(path, self.quiver)
        table = table or cc.BasicClassTable(self.quiver)
        missing = [tuple(r) for r in roots_needed if not table.has(r, mode)]
        if missing:
            before = len(table.entries)
            cc.build_basic_table(self.quiver, mode, self.args.strategy, whitelist=missing, table=table,
                                 jobs=self.args.jobs, log=self.log)
            if path and len(table.entries) != before:
                table.save(path)
        return table


def roots_below(q: Quiver, g: Sequence[int]) -> list[tuple[int, ...]]:
    return [r for r in positive_roots(q) if all(x <= y for x, y in zip(r, g))]


# commands --------------------------------------------------------------------------

def cmd_roots(ctx: Context) -> int:
    roots = positive_roots(ctx.quiver)
    ctx.emit([f"{len(roots)} positive roots of {ctx.quiver.name or 'quiver'}"] + [fmt_vec(r) for r in roots],
             {"quiver": ctx.quiver.name, "roots": [list(r) for r in roots]})
    return EXIT_OK


def cmd_reineke(ctx: Context) -> int:
    order = reineke_order(ctx.quiver)
    ctx.emit([" < ".join(fmt_vec(r) for r in order)], {"order": [list(r) for r in order]})
    return EXIT_OK


def cmd_kostant(ctx: Context) -> int:
    g = ctx.dim(ctx.args.gamma)
    parts = kostant_partitions(ctx.quiver, g)
    generic = generic_kostant_partition(ctx.quiver, g, ctx.args.seed)
    lines = [f"{len(parts)} Kostant partitions of {fmt_vec(g)}"]
    data = []
    for m in parts:
        codim = orbit_codimension(m, ctx.args.seed)
        tag = "  open" if m == generic else ""
        lines.append(f"{m}  {fmt_support(m)}  codim {codim}{tag}")
        data.append({"multiplicities": list(m.multiplicities), "codimension": codim, "open": m == generic})
    if ctx.args.diagram:
        d = type_a_open_orbit_diagram(ctx.quiver, g)
        lines += ["", d.text]
    ctx.emit(lines, {"gamma": list(g), "partitions": data})
    return EXIT_OK


def _partition(ctx: Context) -> KostantPartition:
    a = ctx.args
    if a.partition:
        m = KostantPartition(ctx.quiver, parse_vector(a.partition))
        ctx.dim(fmt_vec(m.gamma))
        return m
    if a.gamma:
        return generic_kostant_partition(ctx.quiver, ctx.dim(a.gamma), a.seed)
    raise UsageError("give --partition or --gamma (open orbit)")


def cmd_class(ctx: Context) -> int:
    a = ctx.args
    mode = Mode.of(a.mode)
    m = _partition(ctx)
    table = ctx.table(mode, list(m.support()))
    t0 = time.perf_counter()
    if a.method == "v1":
        poly = cc.orbit_class_v1(ctx.quiver, m, mode, table)
    else:
        poly = cc.orbit_class_v2(ctx.quiver, m, mode, table)
    ctx.log(f"class computed in {time.perf_counter() - t0:.3f}s ({BACKEND} kernels)")
    codim = orbit_codimension(m, a.seed)
    ctx.emit(
        [f"orbit {m} = {fmt_support(m)} of {fmt_vec(m.gamma)}",
         f"mode {mode.value}, method {a.method}, codimension {codim}",
         poly.to_text()],
        {"partition": list(m.multiplicities), "gamma": list(m.gamma), "mode": mode.value,
         "method": a.method, "codimension": codim, "class": poly.to_json()})
    return EXIT_OK


def _report(ctx: Context, name: str, results: list[tuple[str, cc.VerificationResult]]) -> int:
    ok = all(r.passed for _, r in results)
    lines = []
    for label, r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {name} {label}")
        if not r.passed and r.failures:
            lines.append("  " + r.failures[0])
    ctx.emit(lines, {"check": name, "passed": ok,
                     "results": [{"case": l, "passed": r.passed, "failures": r.failures[:1]} for l, r in results]})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(ctx: Context) -> int:
    a = ctx.args
    q = ctx.quiver
    mode = Mode.of(a.mode)
    if a.which == "sum":
        g = ctx.dim(a.gamma)
        table = ctx.table(mode, roots_below(q, g))
        return _report(ctx, "sum", [(fmt_vec(g), cc.verify_sum_identity(q, g, mode, table))])
    if a.which == "conjecture":
        if mode is not Mode.COHOMOLOGY:
            raise UsageError("the conjecture concerns cohomology classes")
        betas = [ctx.dim(a.beta)] if a.beta else positive_roots(q)
        table = ctx.table(mode, betas)
        return _report(ctx, "conjecture", [(fmt_vec(b), cc.check_conjecture(q, b, table)) for b in betas])
    if a.which == "dt":
        cutoff = ctx.dim(a.cutoff)
        rng = random.Random(a.seed)
        z1 = StabilityFunction.parse(a.z1) if a.z1 else random_generic_stability(q, cutoff, rng)
        z2 = StabilityFunction.parse(a.z2) if a.z2 else random_generic_stability(q, cutoff, rng)
        table = ctx.table(mode, roots_below(q, cutoff))
        res = cc.verify_dt_invariance(q, z1, z2, cutoff, mode, table)
        return _report(ctx, "dt", [(f"Z1={z1} Z2={z2} cutoff {fmt_vec(cutoff)}", res)])
    if a.which == "associativity":
        res = cc.verify_associativity(q, mode, a.trials, a.seed)
        return _report(ctx, "associativity", [(f"{a.trials} random triples", res)])
    raise UsageError(f"unknown check {a.which!r}")


def cmd_table(ctx: Context) -> int:
    a = ctx.args
    mode = Mode.of(a.mode)
    path = ctx.table_path()
    table = cc.BasicClassTable.load(path, ctx.quiver) if path and path.exists() else None
    whitelist = [ctx.dim(b) for b in a.beta] if a.beta else None
    table = cc.build_basic_table(ctx.quiver, mode, a.strategy, whitelist=whitelist, table=table,
                                 validation=a.validation, use_inj=a.inj, jobs=a.jobs, log=ctx.log)
    if path:
        table.save(path)
    lines, data = [], []
    for r in table.roots(mode):
        e = table.entry(r, mode)
        lines.append(f"{fmt_vec(r)} [{e.provenance}] {e.poly.to_text()}")
        data.append({"root": list(r), "provenance": e.provenance, "class": e.poly.to_json()})
    ctx.emit(lines, {"mode": mode.value, "entries": data})
    return EXIT_OK


# argument parsing -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", required=True, help="quiver JSON file or bundled name (a2, a3, d4, d5, e6)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="largest allowed coordinate")
    common.add_argument("--jobs", type=int, default=None, help="worker processes for sieve steps")
    common.add_argument("--table", default=None, help="basic class cache (default: $QCC_TABLE_CACHE)")
    common.add_argument("--strategy", choices=cc.STRATEGIES[:2], default="commutator-first")

    def with_mode(p):
        p.add_argument("--mode", default="cohomology", help="cohomology (csm) or ktheory (mC)")
        return p

    parser = argparse.ArgumentParser(prog="qcc", description="Characteristic classes of Dynkin quiver orbits.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("roots", parents=[common], help="list positive roots")
    sub.add_parser("reineke", parents=[common], help="print a Reineke order")
    p = sub.add_parser("kostant", parents=[common], help="list orbits of Rep_gamma")
    p.add_argument("--gamma", required=True)
    p.add_argument("--diagram", action="store_true", help="also draw the open orbit (type A only)")
    p = with_mode(sub.add_parser("class", parents=[common], help="CSM/MC class of an orbit"))
    p.add_argument("--partition", help="multiplicities in canonical root order")
    p.add_argument("--gamma", help="use the open orbit of Rep_gamma")
    p.add_argument("--method", choices=("v1", "v2"), default="v2")
    p = with_mode(sub.add_parser("verify", parents=[common], help="run an identity check"))
    p.add_argument("which", choices=("sum", "dt", "conjecture", "associativity"))
    p.add_argument("--gamma")
    p.add_argument("--beta")
    p.add_argument("--z1")
    p.add_argument("--z2")
    p.add_argument("--cutoff")
    p.add_argument("--trials", type=int, default=10)
    p = with_mode(sub.add_parser("table", parents=[common], help="compute basic classes"))
    p.add_argument("--beta", action="append", help="restrict to roots below this one (repeatable)")
    p.add_argument("--validation", choices=("exact", "pointwise", "auto"), default="pointwise")
    p.add_argument("--inj", action="store_true", help="sieve inside the injective locus")
    return parser


COMMANDS = {"roots": cmd_roots, "reineke": cmd_reineke, "kostant": cmd_kostant, "class": cmd_class,
            "verify": cmd_verify, "table": cmd_table}


def _required(args) -> None:
    need = {("verify", "sum"): ["gamma"], ("verify", "dt"): ["cutoff"]}
    for name in need.get((args.command, getattr(args, "which", None)), []):
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for {args.command} {args.which}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _required(args)
        ctx = Context(args)
        return COMMANDS[args.command](ctx)
    except (InputError, MissingBasicClass) as exc:
        print(f"qcc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InternalError, QccError, AssertionError) as exc:
        print(f"qcc: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
