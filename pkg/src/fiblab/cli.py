"""Command-line front end.

Every subcommand writes its records to stdout, or to ``--out PATH``. With
``--format json`` each record is one JSON object per line; the default text
format is one human-readable line per record. Exit status is 0 on success,
1 when some entry fails and 2 on usage errors.

Set ``FIBLAB_THREADS=N`` to spread per-entry work over N worker processes.
Output order never depends on it.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from . import catalog as _catalog
from . import discovery, tiling
from .classifier import class_slug, classify
from .dsl import DSLError, Identity, Meta, parse, parse_grid, render
from .dsl.umbral import expand_umbral
from .evaluator import check_identity
from .prover import FALSIFIED, PROVEN, worst
from .prover import prove as _prove

__all__ = ["run", "main", "load_identities", "build_parser"]


class UsageError(Exception):
    pass


# -- input ------------------------------------------------------------------


def load_identities(path: str) -> list[tuple[str, Optional[Identity], Optional[str]]]:
    """``(id, identity, error)`` per entry of a corpus file or a plain DSL file.

    A file whose first record line is ``[identity]`` is read as a corpus;
    otherwise every non-blank line not starting with ``#`` is one identity.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    lines = [ln.strip() for ln in text.splitlines()]
    body = [ln for ln in lines if ln and not ln.startswith("#")]
    if body and body[0] == "[identity]":
        try:
            cat = _catalog.load(text)
        except _catalog.CatalogError as exc:
            raise UsageError(f"{path}: {exc}") from None
        return [(e.id, e.identity, None) for e in cat]
    out = []
    for lineno, ln in enumerate(lines, 1):
        if not ln or ln.startswith("#"):
            continue
        ident_id = f"line-{lineno}"
        try:
            out.append((ident_id, parse(ln, Meta(id=ident_id)), None))
        except DSLError as exc:
            out.append((ident_id, None, str(exc)))
    return out


def _workers() -> int:
    raw = os.environ.get("FIBLAB_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _pmap(fn: Callable, items: Sequence) -> list:
    n = min(_workers(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# -- output -----------------------------------------------------------------


class _Emitter:
    def __init__(self, stream, fmt: str):
        self.stream = stream
        self.fmt = fmt

    def record(self, rec: dict, text: str) -> None:
        if self.fmt == "json":
            self.stream.write(json.dumps(rec, sort_keys=True, default=str) + "\n")
        else:
            self.stream.write(text + "\n")

    def raw(self, data: str) -> None:
        self.stream.write(data)


@contextmanager
def _output(path: Optional[str]):
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8") as fh:
        yield fh


# -- subcommands ------------------------------------------------------------


def _check_one(item):
    ident, sweep = item
    return check_identity(ident, sweep=sweep)


def cmd_check(args, out: _Emitter) -> int:
    entries = load_identities(args.file)
    sweep = args.range
    good = [(i, ident) for i, ident, err in entries if ident is not None]
    reports = dict(zip((i for i, _ in good), _pmap(_check_one, [(ident, sweep) for _, ident in good])))
    status = 0
    for ident_id, ident, err in entries:
        if ident is None:
            status = 1
            out.record({"id": ident_id, "status": "ParseError", "error": err}, f"{ident_id}: ParseError: {err}")
            continue
        rep = reports[ident_id]
        if not rep.ok:
            status = 1
            text = f"{ident_id}: {rep.status} at {rep.assignment} ({rep.left} != {rep.right})"
        else:
            text = f"{ident_id}: {rep.status} over {rep.count} assignments"
        out.record(rep.to_dict(), text)
    return status


def _prove_one(item):
    ident, grid = item
    return _prove(ident, grid)


def cmd_prove(args, out: _Emitter) -> int:
    grid = parse_grid(args.grid) if args.grid else None
    entries = load_identities(args.file)
    good = [(i, ident) for i, ident, err in entries if ident is not None]
    results = dict(zip((i for i, _ in good), _pmap(_prove_one, [(ident, grid) for _, ident in good])))
    status = 0
    for ident_id, ident, err in entries:
        if ident is None:
            status = 1
            out.record({"id": ident_id, "status": "ParseError", "error": err}, f"{ident_id}: ParseError: {err}")
            continue
        outcomes = results[ident_id]
        w = worst(outcomes)
        if w == FALSIFIED:
            status = 1
        rec = {"id": ident_id, "status": w, "outcomes": [o.to_dict() for o in outcomes]}
        methods = sorted({o.method for o in outcomes})
        text = f"{ident_id}: {w} ({', '.join(methods)}; {len(outcomes)} instance(s))"
        bad = next((o for o in outcomes if o.counterexample), None)
        if bad is not None:
            text += f" counterexample {bad.counterexample}"
        out.record(rec, text)
    return status


def cmd_classify(args, out: _Emitter) -> int:
    path = Path(args.file)
    entries = load_identities(args.file)
    claimed: dict[str, str] = {}
    try:
        claimed = {e.id: e.claimed_class for e in _catalog.load(path.read_text(encoding="utf-8"))}
    except _catalog.CatalogError:
        pass
    status = 0
    mismatches = []
    for ident_id, ident, err in entries:
        if ident is None:
            status = 1
            out.record({"id": ident_id, "status": "ParseError", "error": err}, f"{ident_id}: ParseError: {err}")
            continue
        verdict = classify(ident)
        rec = {"id": ident_id, "class": verdict}
        want = claimed.get(ident_id)
        # warm-up rows carry no cubic class to compare against
        if want and want != "warmup":
            rec["claimed"] = want
            rec["match"] = class_slug(verdict) == want
            if not rec["match"]:
                mismatches.append(ident_id)
        out.record(rec, f"{ident_id}: {verdict}" + ("" if rec.get("match", True) else f" (claimed {want})"))
    out.record({"mismatches": mismatches}, f"mismatches: {', '.join(mismatches) if mismatches else 'none'}")
    return status


def _verify_one(item):
    cat, ident_id, mode, sweep = item
    return _catalog.verify_all(cat, mode, sweep=sweep, ids=[ident_id])[0]


def cmd_catalog(args, out: _Emitter) -> int:
    cat = _catalog.load_file(args.corpus) if args.corpus else _catalog.shipped()
    ids = [e.id for e in cat]
    results = _pmap(_verify_one, [(cat, i, args.mode, args.range) for i in ids])
    status = 0
    for r in results:
        if not r.ok:
            status = 1
        parts = [r.id]
        if r.numeric_status is not None:
            parts.append(f"numeric={r.numeric_status}")
        if r.symbolic_status is not None:
            parts.append(f"symbolic={r.symbolic_status}")
        parts.append(f"{r.elapsed:.3f}s")
        out.record(r.to_dict(), " ".join(parts))
    summary = _catalog.summarize(results)
    text = "summary: " + "; ".join(f"{k} {v}" for k, v in summary.items() if v)
    out.record({"summary": summary}, text)
    return status


def _window(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        return range(int(lo), int(hi) + 1)
    except ValueError:
        raise UsageError(f"bad window {text!r}; expected A..B") from None


def cmd_search(args, out: _Emitter) -> int:
    window = _window(args.window)
    try:
        targets = discovery.parse_targets(args.targets) if args.targets else []
        basis = discovery.make_basis(window, args.kinds.split(","), targets)
    except (ValueError, DSLError) as exc:
        raise UsageError(str(exc)) from None
    samples = None
    if args.samples is not None:
        start = max(0, -basis.min_offset())
        samples = range(start, start + args.samples)
    try:
        cands = discovery.search(window, targets, samples=samples, basis=basis)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    found = discovery.confirm(cands)
    if out.fmt == "json":
        for ident, outcome in found:
            out.record({"id": ident.meta.id, "identity": render(ident), "status": outcome.status, "class": classify(ident)}, "")
    else:
        out.raw(discovery.to_catalog(found))
    return 0


def cmd_spiral(args, out: _Emitter) -> int:
    boxes = tiling.generate(args.map, args.n)
    out.raw(tiling.export(boxes, args.format).decode())
    if not args.check:
        return 0
    rep = tiling.analyze(boxes, args.map)
    d = rep.to_dict()
    if args.report == "json":
        line = json.dumps(d, sort_keys=True)
    else:
        line = (
            f"map {rep.map_id}: {len(boxes)} cubes, sides Fibonacci {rep.sides_are_fib}, "
            f"coplanar {rep.coplanar}, x=y {rep.diagonal_plane}, disjoint {rep.disjoint}"
            + (f" (overlap {rep.overlap})" if rep.overlap else "")
            + (f", last ratio {rep.ratios[-1]:.10f}" if rep.ratios else "")
        )
    sys.stderr.write(line + "\n")
    return 0 if rep.disjoint and rep.sides_are_fib else 1


def cmd_umbral(args, out: _Emitter) -> int:
    try:
        ident = expand_umbral(args.p, args.variant)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    outcome = _prove(ident)[0]
    rec = {"id": ident.meta.id, "identity": render(ident), "status": outcome.status, "method": outcome.method}
    out.record(rec, f"{render(ident)}  [{outcome.status}]")
    return 0 if outcome.status == PROVEN else 1


# -- wiring -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fiblab", description="Exact checks, proofs and searches for Fibonacci identities.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, structured: bool = True):
        sp.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
        if structured:
            sp.add_argument("--format", choices=("text", "json"), default="text", help="text lines or JSON lines")

    sp = sub.add_parser("check", help="exact falsification sweep")
    sp.add_argument("file")
    sp.add_argument("--range", type=int, metavar="N", help="values per index from each condition bound (default 300)")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("prove", help="symbolic proof")
    sp.add_argument("file")
    sp.add_argument("--grid", metavar="SPEC", help='parameter ranges, e.g. "k:1..3, m:0..2"')
    common(sp)
    sp.set_defaults(func=cmd_prove)

    sp = sub.add_parser("classify", help="cubic class of each identity")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("catalog", help="operations on a corpus")
    csub = sp.add_subparsers(dest="action", required=True)
    vp = csub.add_parser("verify", help="check and/or prove every entry")
    vp.add_argument("--mode", choices=("numeric", "symbolic", "both"), default="both")
    vp.add_argument("--range", type=int, metavar="N", help="numeric sweep length per index")
    vp.add_argument("--corpus", metavar="PATH", help="corpus file (default: the shipped one)")
    common(vp)
    vp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("search", help="integer relations among cubic monomials")
    sp.add_argument("--window", required=True, metavar="A..B")
    sp.add_argument("--targets", default="", metavar="LIST", help='e.g. "F[3n], sign:0..6"')
    sp.add_argument("--samples", type=int, metavar="N")
    sp.add_argument("--kinds", default="cubes", help="comma list of cubes, distinct, split12")
    common(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("spiral", help="Fibonacci cube spiral geometry")
    sp.add_argument("--map", type=int, choices=tiling.MAPS, required=True)
    sp.add_argument("--n", type=int, default=15, help="number of cubes")
    sp.add_argument("--format", choices=("json", "obj"), default="json")
    sp.add_argument("--check", action="store_true", help="print a packing report to stderr")
    sp.add_argument("--report", choices=("text", "json"), default="text", help="packing report format")
    common(sp, structured=False)
    sp.set_defaults(func=cmd_spiral)

    sp = sub.add_parser("umbral", help="generate and prove an umbral identity")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--variant", choices=("plus", "minus"), default="plus")
    common(sp)
    sp.set_defaults(func=cmd_umbral)
    return p


def run(argv: Optional[Iterable[str]] = None) -> int:
    parser = build_parser()
    raw = list(sys.argv[1:] if argv is None else argv)
    # a negative window such as "-3..3" would otherwise read as an option
    argv: list[str] = []
    i = 0
    while i < len(raw):
        if raw[i] == "--window" and i + 1 < len(raw) and raw[i + 1].startswith("-"):
            argv.append(f"--window={raw[i + 1]}")
            i += 2
            continue
        argv.append(raw[i])
        i += 1
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "spiral" and args.n < 1:
        parser.print_usage(sys.stderr)
        sys.stderr.write("fiblab: error: --n must be >= 1\n")
        return 2
    try:
        with _output(args.out) as stream:
            return args.func(args, _Emitter(stream, getattr(args, "format", "text")))
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"fiblab: error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
