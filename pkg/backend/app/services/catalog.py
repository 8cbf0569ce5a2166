"""
Matroid Catalog
===============
Reads the public small-matroid database files (one basis string per line,
'*' = basis, '0' = nonbasis, d-subsets in a fixed order), filters them and
runs batch realizability with a persistent verdict cache.

File format:
    optional header line "d n count"
    one encoding per line; blank lines and '#' comments are ignored
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional

from app.config import CATALOG_SUBSET_ORDER, Config, ResourceCaps
from app.services.matroid import Matroid, MatroidError, SubsetEnumeration, elements_of, mask_of
from app.services.planner import k_flats_property
from app.services.presentation import (
    NoReferenceCircuit,
    find_reference_circuit,
    realization_presentation,
    stratum_presentation,
)
from app.services.reduction import reduce
from app.services.smoothness import UNDECIDED, is_realizable
from app.services.workers import map_ordered

logger = logging.getLogger(__name__)


class CatalogFormatError(ValueError):
    """A catalog line or header is malformed."""


@dataclass(frozen=True)
class CatalogEntry:
    d: int
    n: int
    encoding: str
    matroid: Matroid
    line: int

    @property
    def key(self) -> str:
        return verdict_key(self.d, self.n, self.encoding)

    def to_json(self) -> dict:
        return {"d": self.d, "n": self.n, "line": self.line, "encoding": self.encoding}


# =============================================================================
# ENCODING
# =============================================================================

def parse_revlex(line: str, d: int, n: int, order: str = CATALOG_SUBSET_ORDER,
                 validate: bool = True) -> Matroid:
    text = line.strip()
    expected = comb(n, d)
    if len(text) != expected:
        raise CatalogFormatError(f"encoding has length {len(text)}, expected C({n},{d}) = {expected}")
    if set(text) - {"*", "0"}:
        raise CatalogFormatError(f"encoding uses characters other than '*' and '0': {sorted(set(text) - {'*', '0'})}")
    enum = SubsetEnumeration(n, d, order)
    masks = [mask_of(enum.unrank(k)) for k, ch in enumerate(text) if ch == "*"]
    try:
        return Matroid.from_masks(d, n, masks, validate=validate)
    except MatroidError as e:
        raise CatalogFormatError(f"corrupt encoding: {e}") from e


def encode_revlex(Q: Matroid, order: str = CATALOG_SUBSET_ORDER) -> str:
    enum = SubsetEnumeration(Q.n, Q.d, order)
    chars = ["0"] * enum.size
    for b in Q.bases:
        chars[enum.rank(elements_of(b))] = "*"
    return "".join(chars)


def _header(line: str) -> Optional[tuple[int, int, int]]:
    parts = line.split()
    if len(parts) == 3 and all(p.isdigit() for p in parts):
        d, n, count = map(int, parts)
        return d, n, count
    return None


def _parse_lines(lines: Iterable[str], d: Optional[int], n: Optional[int], order: str,
                 validate: bool, source: str) -> Iterator[CatalogEntry]:
    seen_content = False
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        if not seen_content and (header := _header(text)):
            if d is not None and (d, n) != header[:2]:
                raise CatalogFormatError(f"{source}: header says {header[:2]}, expected {(d, n)}")
            d, n, _ = header
            seen_content = True
            continue
        seen_content = True
        if d is None or n is None:
            raise CatalogFormatError(f"{source}: no header and no (d, n) given")
        yield CatalogEntry(d, n, text, parse_revlex(text, d, n, order, validate), lineno)


def read_catalog(path: Path, d: Optional[int] = None, n: Optional[int] = None,
                 order: str = CATALOG_SUBSET_ORDER, validate: bool = True) -> Iterator[CatalogEntry]:
    """Stream entries; a header 'd n count' supplies d and n when they are not given."""
    with open(path, encoding="utf-8") as fh:
        yield from _parse_lines(fh, d, n, order, validate, str(path))


def read_catalog_text(text: str, d: Optional[int] = None, n: Optional[int] = None,
                      order: str = CATALOG_SUBSET_ORDER) -> list[CatalogEntry]:
    """read_catalog for an in-memory upload."""
    return list(_parse_lines(text.splitlines(), d, n, order, True, "upload"))


# =============================================================================
# FILTERS
# =============================================================================

def _rank_is(Q: Matroid, d: int) -> bool:
    return Q.d == d


PREDICATES: dict[str, Callable[[Matroid], bool]] = {
    "simple": lambda Q: Q.is_simple(),
    "connected": lambda Q: Q.is_connected(),
    "three_lines": lambda Q: _rank_is(Q, 3) and k_flats_property(Q, 3),
    "three_planes": lambda Q: _rank_is(Q, 4) and k_flats_property(Q, 3),
    "four_planes": lambda Q: _rank_is(Q, 4) and k_flats_property(Q, 4),
}

STAGES = tuple(PREDICATES) + ("realizable",)


@dataclass
class FilterReport:
    counts: dict = field(default_factory=dict)
    survivors: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"counts": self.counts, "survivors": len(self.survivors)}


def filter_entries(entries: Iterable[CatalogEntry], stages: Iterable[str]) -> FilterReport:
    """Apply combinatorial predicates in order, counting survivors after each."""
    stages = list(stages)
    unknown = [s for s in stages if s not in PREDICATES]
    if unknown:
        raise ValueError(f"unknown filter stages {unknown}; known: {list(PREDICATES)}")
    report = FilterReport(counts={"total": 0, **{s: 0 for s in stages}})
    for entry in entries:
        report.counts["total"] += 1
        passed = True
        for stage in stages:
            if not PREDICATES[stage](entry.matroid):
                passed = False
                break
            report.counts[stage] += 1
        if passed:
            report.survivors.append(entry)
    return report


# =============================================================================
# VERDICT CACHE
# =============================================================================

def verdict_key(d: int, n: int, encoding: str) -> str:
    return hashlib.sha256(f"{d} {n} {encoding}".encode()).hexdigest()


class VerdictCache:
    """JSON-lines sidecar of realizability verdicts, keyed by content hash."""

    def __init__(self, path: Optional[Path]):
        self.path = Path(path) if path else None
        self._verdicts: dict[str, str] = {}
        if self.path and self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for raw in fh:
                    try:
                        item = json.loads(raw)
                        self._verdicts[item["key"]] = item["realizable"]
                    except (json.JSONDecodeError, KeyError):
                        logger.warning("skipping malformed cache line in %s", self.path)

    def get(self, key: str) -> Optional[str]:
        return self._verdicts.get(key)

    def put(self, key: str, verdict: str) -> None:
        self._verdicts[key] = verdict
        if self.path is None or verdict == UNDECIDED:
            return
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps({"key": key, "realizable": verdict}, sort_keys=True) + "\n")

    def __len__(self) -> int:
        return len(self._verdicts)


# =============================================================================
# BATCH
# =============================================================================

def realizability_verdict(Q: Matroid, caps: Optional[ResourceCaps] = None) -> str:
    """Reduce a presentation of Q, then decide emptiness of the localized quotient."""
    try:
        if Q.is_connected():
            P = realization_presentation(Q, find_reference_circuit(Q))
        else:
            P = stratum_presentation(Q)
    except NoReferenceCircuit:
        P = stratum_presentation(Q)
    reduced = reduce(P, caps=caps).result
    if reduced.is_unit_ideal:
        return "no"
    return is_realizable(reduced, caps)


def _verdict_job(job: tuple) -> str:
    d, n, encoding, order, caps = job
    Q = parse_revlex(encoding, d, n, order, validate=False)
    return realizability_verdict(Q, ResourceCaps(**caps))


@dataclass
class BatchReport:
    counts: dict = field(default_factory=dict)
    summaries: list = field(default_factory=list)

    @property
    def undecided(self) -> int:
        return sum(1 for s in self.summaries if s.get("realizable") == UNDECIDED)

    def to_json(self) -> dict:
        return {"counts": self.counts, "undecided": self.undecided}


def batch(entries: Iterable[CatalogEntry], stages: Iterable[str], config: Config,
          order: str = CATALOG_SUBSET_ORDER) -> BatchReport:
    stages = list(stages)
    combinatorial = [s for s in stages if s != "realizable"]
    filtered = filter_entries(entries, combinatorial)
    report = BatchReport(counts=dict(filtered.counts))
    survivors = filtered.survivors

    if "realizable" in stages:
        cache = VerdictCache(config.cache_path)
        verdicts: dict[str, str] = {}
        todo = []
        for entry in survivors:
            cached = cache.get(entry.key)
            if cached is not None:
                verdicts[entry.key] = cached
            elif entry.key not in verdicts:
                verdicts[entry.key] = UNDECIDED
                todo.append(entry)
        logger.info("%d cached verdicts, %d to compute", len(survivors) - len(todo), len(todo))
        caps = config.caps.model_dump()
        jobs = [(e.d, e.n, e.encoding, order, caps) for e in todo]
        for entry, verdict in zip(todo, map_ordered(_verdict_job, jobs, config.workers)):
            verdicts[entry.key] = verdict
            cache.put(entry.key, verdict)
        report.counts["realizable"] = sum(1 for e in survivors if verdicts[e.key] == "yes")
        report.counts["undecided"] = sum(1 for e in survivors if verdicts[e.key] == UNDECIDED)
        report.summaries = [dict(e.to_json(), realizable=verdicts[e.key]) for e in survivors]
    else:
        report.summaries = [e.to_json() for e in survivors]
    return report
