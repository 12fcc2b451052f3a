"""The shipped identity corpus: loading, rendering and batch verification.

Corpus files are UTF-8 text. Records are separated by blank lines, each
starting with an ``[identity]`` line followed by ``key = value`` lines. String
values use JSON string syntax; ``year`` is a bare integer and ``class`` a bare
word. Lines starting with ``#`` are comments, except the header directives
``# format: N`` and ``# exclude: ...``.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Optional, Union

from .classifier import class_slug, classify
from .dsl import DSLError, Identity, Meta, parse
from .evaluator import CheckReport, check_identity
from .prover import BOUNDED, FALSIFIED, PROVEN, VERIFIED, ProofOutcome, prove, worst

__all__ = [
    "CatalogError",
    "CatalogEntry",
    "Catalog",
    "EntryResult",
    "load",
    "load_file",
    "shipped",
    "verify_all",
    "summarize",
    "table_mismatches",
    "CLASSES",
    "TABLE_CLASS",
]

FORMAT_VERSION = 1
CLASSES = ("homogeneous-cubic", "nonhomogeneous-cubic", "general", "warmup")
TABLE_CLASS = {"I": "homogeneous-cubic", "II": "nonhomogeneous-cubic", "III": "general"}

_KEYS = ("id", "eq", "cond", "params", "year", "authors", "paper_tag", "class", "table", "rediscovered", "xref")
_REQUIRED = ("id", "eq", "paper_tag", "class")


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    eq: str
    identity: Identity
    cond: str = ""
    params: str = ""
    year: Optional[int] = None
    authors: str = ""
    paper_tag: str = ""
    claimed_class: str = ""
    tables: tuple[str, ...] = ()
    rediscovered: tuple[str, ...] = ()
    xref: str = ""

    @property
    def dsl(self) -> str:
        return _dsl_text(self.eq, self.cond, self.params)

    def placements(self) -> list[tuple[str, str]]:
        """``(table, expected class)`` for each table the row appears in."""
        return [(t, TABLE_CLASS[t]) for t in self.tables]


@dataclass
class Catalog:
    entries: list[CatalogEntry] = field(default_factory=list)
    version: int = FORMAT_VERSION
    exclusions: str = ""

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, key: str) -> CatalogEntry:
        for e in self.entries:
            if e.id == key:
                return e
        raise KeyError(key)

    def get(self, key: str) -> Optional[CatalogEntry]:
        try:
            return self[key]
        except KeyError:
            return None

    def ids(self) -> list[str]:
        return [e.id for e in self.entries]

    def render(self) -> str:
        out = [f"# format: {self.version}"]
        if self.exclusions:
            out.append(f"# exclude: {self.exclusions}")
        out.append("")
        for e in self.entries:
            out.extend(render_entry(e))
            out.append("")
        return "\n".join(out)


def _params_dsl(params: str) -> str:
    parts = []
    for item in filter(None, (p.strip() for p in params.split(","))):
        name, sep, rng = item.partition(":")
        if not sep:
            raise CatalogError(f"bad params item {item!r}; expected name:lo..hi")
        parts.append(f"{name.strip()} in {rng.strip()}")
    return ", ".join(parts)


def _dsl_text(eq: str, cond: str, params: str) -> str:
    tail = ", ".join(filter(None, (cond.strip(), _params_dsl(params))))
    return f"{eq} ; {tail}" if tail else eq


def render_entry(e: CatalogEntry) -> list[str]:
    q = lambda s: json.dumps(s, ensure_ascii=False)  # noqa: E731
    lines = ["[identity]", f"id = {q(e.id)}", f"eq = {q(e.eq)}", f"cond = {q(e.cond)}"]
    if e.params:
        lines.append(f"params = {q(e.params)}")
    if e.year is not None:
        lines.append(f"year = {e.year}")
    lines.append(f"authors = {q(e.authors)}")
    lines.append(f"paper_tag = {q(e.paper_tag)}")
    lines.append(f"class = {e.claimed_class}")
    if e.tables:
        lines.append(f"table = {q('; '.join(e.tables))}")
    if e.rediscovered:
        lines.append(f"rediscovered = {q('; '.join(e.rediscovered))}")
    if e.xref:
        lines.append(f"xref = {q(e.xref)}")
    return lines


def _value(raw: str, lineno: int):
    raw = raw.strip()
    if raw.startswith('"'):
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"line {lineno}: bad string value: {exc.msg}") from None
    if raw.lstrip("-").isdigit():
        return int(raw)
    return raw


def _split_list(s: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in s.split(";") if p.strip())


def _entry(fields: dict, start: int) -> CatalogEntry:
    for k in _REQUIRED:
        if k not in fields:
            raise CatalogError(f"record at line {start}: missing {k!r}")
    eid = str(fields["id"])
    cls = str(fields["class"])
    if cls not in CLASSES:
        raise CatalogError(f"entry {eid!r}: unknown class {cls!r}")
    tables = _split_list(str(fields.get("table", "")))
    for t in tables:
        if t not in TABLE_CLASS:
            raise CatalogError(f"entry {eid!r}: unknown table {t!r}")
    year = fields.get("year")
    if year is not None and not isinstance(year, int):
        raise CatalogError(f"entry {eid!r}: year must be an integer")
    eq, cond, params = str(fields["eq"]), str(fields.get("cond", "")), str(fields.get("params", ""))
    meta = Meta(id=eid, year=year, authors=str(fields.get("authors", "")), paper_tag=str(fields["paper_tag"]), claimed_class=cls)
    text = _dsl_text(eq, cond, params)
    try:
        ident = parse(text, meta)
    except DSLError as exc:
        raise CatalogError(f"entry {eid!r} (record at line {start}): {exc}") from None
    return CatalogEntry(
        id=eid,
        eq=eq,
        identity=ident,
        cond=cond,
        params=params,
        year=year,
        authors=meta.authors,
        paper_tag=meta.paper_tag,
        claimed_class=cls,
        tables=tables,
        rediscovered=_split_list(str(fields.get("rediscovered", ""))),
        xref=str(fields.get("xref", "")),
    )


def load(text: str) -> Catalog:
    """Parse corpus text; every entry goes through the DSL parser."""
    cat = Catalog()
    records: list[tuple[int, dict]] = []
    current: Optional[dict] = None
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s:
            current = None
            continue
        if s.startswith("#"):
            body = s[1:].strip()
            if body.startswith("format:"):
                cat.version = int(body.split(":", 1)[1])
                if cat.version != FORMAT_VERSION:
                    raise CatalogError(f"unsupported corpus format {cat.version}")
            elif body.startswith("exclude:"):
                cat.exclusions = body.split(":", 1)[1].strip()
            continue
        if s == "[identity]":
            current = {}
            records.append((lineno, current))
            continue
        if current is None:
            raise CatalogError(f"line {lineno}: field outside an [identity] record")
        key, sep, raw = s.partition("=")
        key = key.strip()
        if not sep or key not in _KEYS:
            raise CatalogError(f"line {lineno}: unknown field {key!r}")
        if key in current:
            raise CatalogError(f"line {lineno}: repeated field {key!r}")
        current[key] = _value(raw, lineno)
    seen: set[str] = set()
    tags: set[str] = set()
    for start, fields in records:
        e = _entry(fields, start)
        if e.id in seen:
            raise CatalogError(f"duplicate id {e.id!r}")
        if e.paper_tag in tags:
            raise CatalogError(f"duplicate paper_tag {e.paper_tag!r} (entry {e.id!r})")
        seen.add(e.id)
        tags.add(e.paper_tag)
        cat.entries.append(e)
    return cat


def load_file(path: Union[str, Path]) -> Catalog:
    return load(Path(path).read_text(encoding="utf-8"))


def shipped() -> Catalog:
    """The corpus bundled with the package."""
    return load(resources.files("fiblab").joinpath("data/corpus.fib").read_text(encoding="utf-8"))


# -- batch verification -----------------------------------------------------


@dataclass
class EntryResult:
    id: str
    numeric: Optional[CheckReport] = None
    outcomes: list[ProofOutcome] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def numeric_status(self) -> Optional[str]:
        return None if self.numeric is None else self.numeric.status

    @property
    def symbolic_status(self) -> Optional[str]:
        """Worst proof status; bounded-only entries report ``BoundedOnly``."""
        if not self.outcomes:
            return None
        w = worst(self.outcomes)
        if w == FALSIFIED:
            return FALSIFIED
        if any(o.method == BOUNDED for o in self.outcomes):
            return BOUNDED
        return w

    @property
    def ok(self) -> bool:
        if self.numeric is not None and not self.numeric.ok:
            return False
        return self.symbolic_status in (None, PROVEN, BOUNDED, VERIFIED)

    def to_dict(self) -> dict:
        d: dict = {"id": self.id}
        if self.numeric is not None:
            d["numeric"] = self.numeric_status
            d["assignments"] = self.numeric.count
            if not self.numeric.ok:
                d["counterexample"] = self.numeric.to_dict()
        if self.outcomes:
            d["symbolic"] = self.symbolic_status
            d["instances"] = len(self.outcomes)
            bad = [o.to_dict() for o in self.outcomes if o.status == FALSIFIED]
            if bad:
                d["falsified"] = bad[0]
        d["elapsed"] = round(self.elapsed, 6)
        return d


def verify_all(
    cat: Catalog,
    mode: str = "both",
    sweep: Union[None, int] = None,
    ids: Optional[list[str]] = None,
) -> list[EntryResult]:
    """Check and/or prove every entry, in catalog order."""
    if mode not in ("numeric", "symbolic", "both"):
        raise ValueError(f"mode must be numeric, symbolic or both, got {mode!r}")
    out = []
    for e in cat:
        if ids is not None and e.id not in ids:
            continue
        t0 = time.perf_counter()
        res = EntryResult(e.id)
        if mode in ("numeric", "both"):
            res.numeric = check_identity(e.identity, sweep=sweep)
        if mode in ("symbolic", "both"):
            res.outcomes = prove(e.identity)
        res.elapsed = time.perf_counter() - t0
        out.append(res)
    return out


def summarize(results: list[EntryResult]) -> dict[str, dict[str, int]]:
    """Counts by status, separately for the numeric and symbolic passes."""
    num: dict[str, int] = {}
    sym: dict[str, int] = {}
    for r in results:
        if r.numeric_status is not None:
            num[r.numeric_status] = num.get(r.numeric_status, 0) + 1
        if r.symbolic_status is not None:
            sym[r.symbolic_status] = sym.get(r.symbolic_status, 0) + 1
    return {"numeric": num, "symbolic": sym}


def table_mismatches(cat: Catalog) -> list[tuple[str, str, str]]:
    """``(id, table, verdict)`` wherever the classifier disagrees with a table placement."""
    out = []
    for e in cat:
        verdict = classify(e.identity)
        for table, expected in e.placements():
            if class_slug(verdict) != expected:
                out.append((e.id, table, verdict))
    return out
