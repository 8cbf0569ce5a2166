"""
Matroid Core
============
Rank-d matroids on the ground set [n] = {1, ..., n}, stored by their bases.

Features:
- subset enumeration (colex / lex / revlex) with rank and unrank
- rank, closure, flats, hyperplanes, lines and planes, circuits
- loops, coloops, parallel classes, connected components
- duality, deletion, contraction, restriction, direct sums
- paving tests (by circuits and by cyclic flats), Z1(Q, a)
- isomorphism search, linear matroids over exact fields

Elements are 1-indexed labels at the API; internally a subset is an int
bitmask with bit e-1 standing for element e.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, Optional, Sequence

from sympy.polys.matrices import DomainMatrix

from app.config import VALIDATE_MATROIDS
from app.services.fields import CoefficientField

logger = logging.getLogger(__name__)

EXHAUSTIVE_EXCHANGE_LIMIT = 1000
SAMPLED_EXCHANGE_PAIRS = 20000


class MatroidError(ValueError):
    """Invalid matroid data or an operation outside its domain."""


# =============================================================================
# SUBSETS
# =============================================================================

def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if e < 1:
            raise MatroidError(f"ground set labels start at 1, got {e}")
        mask |= 1 << (e - 1)
    return mask


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def _full(n: int) -> int:
    return (1 << n) - 1


class SubsetEnumeration:
    """Bijection between 0..C(n,d)-1 and the d-subsets of [n]."""

    ORDERS = ("colex", "lex", "revlex")

    def __init__(self, n: int, d: int, order: str = "colex"):
        if order not in self.ORDERS:
            raise MatroidError(f"unknown subset order {order!r}")
        if not 0 <= d <= n:
            raise MatroidError(f"need 0 <= d <= n, got d={d}, n={n}")
        self.n, self.d, self.order = n, d, order
        self.size = comb(n, d)

    def _colex_rank(self, zero_based: Sequence[int]) -> int:
        return sum(comb(c, i + 1) for i, c in enumerate(sorted(zero_based)))

    def _colex_unrank(self, r: int) -> list[int]:
        out = []
        for i in range(self.d, 0, -1):
            c = i - 1
            while comb(c + 1, i) <= r:
                c += 1
            out.append(c)
            r -= comb(c, i)
        return sorted(out)

    def _mirror(self, zero_based: Iterable[int]) -> list[int]:
        return [self.n - 1 - c for c in zero_based]

    def rank(self, subset: Iterable[int]) -> int:
        zb = sorted(e - 1 for e in subset)
        if len(zb) != self.d or len(set(zb)) != self.d or (zb and (zb[0] < 0 or zb[-1] >= self.n)):
            raise MatroidError(f"{sorted(subset)} is not a {self.d}-subset of [{self.n}]")
        if self.order == "colex":
            return self._colex_rank(zb)
        mirrored = self._colex_rank(self._mirror(zb))
        return mirrored if self.order == "revlex" else self.size - 1 - mirrored

    def unrank(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise MatroidError(f"index {index} out of range")
        if self.order == "colex":
            zb = self._colex_unrank(index)
        else:
            r = index if self.order == "revlex" else self.size - 1 - index
            zb = sorted(self._mirror(self._colex_unrank(r)))
        return tuple(c + 1 for c in zb)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for i in range(self.size):
            yield self.unrank(i)


# =============================================================================
# FLATS
# =============================================================================

@dataclass(frozen=True)
class Flat:
    elements: frozenset
    rank: int

    @property
    def mask(self) -> int:
        return mask_of(self.elements)

    @property
    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, e) -> bool:
        return e in self.elements

    def to_json(self) -> list[int]:
        return list(self.sorted)


@dataclass(frozen=True)
class StructureFlags:
    loops: tuple[int, ...]
    coloops: tuple[int, ...]
    parallel_classes: tuple[tuple[int, ...], ...]
    is_simple: bool
    is_connected: bool
    components: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "loops": list(self.loops),
            "coloops": list(self.coloops),
            "parallel_classes": [list(c) for c in self.parallel_classes],
            "is_simple": self.is_simple,
            "is_connected": self.is_connected,
            "components": [list(c) for c in self.components],
        }


# =============================================================================
# MATROID
# =============================================================================

@dataclass(frozen=True)
class Matroid:
    d: int
    n: int
    bases: frozenset  # of element bitmasks
    name: str = field(default="", compare=False)
    _ranks: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    # ---- construction ------------------------------------------------------

    @classmethod
    def from_masks(cls, d: int, n: int, masks: Iterable[int], name: str = "",
                   validate: Optional[bool] = None) -> "Matroid":
        q = cls(d, n, frozenset(masks), name)
        q._check_shape()
        if VALIDATE_MATROIDS if validate is None else validate:
            q.check_exchange()
        return q

    @classmethod
    def from_bases(cls, n: int, bases: Iterable[Iterable[int]], name: str = "",
                   validate: Optional[bool] = None) -> "Matroid":
        masks = [mask_of(b) for b in bases]
        if not masks:
            raise MatroidError("a matroid needs at least one basis")
        return cls.from_masks(masks[0].bit_count(), n, masks, name, validate)

    @classmethod
    def from_nonbases(cls, d: int, n: int, nonbases: Iterable[Iterable[int]], name: str = "",
                      validate: Optional[bool] = None) -> "Matroid":
        bad = {mask_of(b) for b in nonbases}
        masks = [m for m in _subsets(n, d) if m not in bad]
        return cls.from_masks(d, n, masks, name, validate)

    @classmethod
    def from_hyperplanes(cls, d: int, n: int, hyperplanes: Iterable[Iterable[int]], name: str = "",
                         validate: Optional[bool] = None) -> "Matroid":
        """Nonbases are the d-subsets lying inside one of the listed hyperplanes."""
        hmasks = [mask_of(h) for h in hyperplanes]
        masks = [m for m in _subsets(n, d) if not any(m & h == m for h in hmasks)]
        return cls.from_masks(d, n, masks, name, validate)

    @classmethod
    def uniform(cls, d: int, n: int) -> "Matroid":
        return cls.from_masks(d, n, _subsets(n, d), f"U_{d},{n}", validate=False)

    @classmethod
    def empty(cls) -> "Matroid":
        return cls(0, 0, frozenset({0}), "empty")

    def _check_shape(self) -> None:
        if not self.bases:
            raise MatroidError("a matroid needs at least one basis")
        full = _full(self.n)
        for b in self.bases:
            if b & ~full or b.bit_count() != self.d:
                raise MatroidError(f"{elements_of(b)} is not a {self.d}-subset of [{self.n}]")

    def check_exchange(self, rng: Optional[random.Random] = None) -> None:
        """Basis exchange: exhaustive up to C(n,d) = 1000, sampled beyond."""
        bases = sorted(self.bases)
        if comb(self.n, self.d) <= EXHAUSTIVE_EXCHANGE_LIMIT:
            pairs: Iterable = itertools.product(bases, repeat=2)
        else:
            rng = rng or random.Random(0)
            pairs = ((rng.choice(bases), rng.choice(bases)) for _ in range(SAMPLED_EXCHANGE_PAIRS))
        for b1, b2 in pairs:
            only1 = b1 & ~b2
            only2 = b2 & ~b1
            while only1:
                low = only1 & -only1
                only1 ^= low
                rest = b1 ^ low
                cands = only2
                found = False
                while cands:
                    f = cands & -cands
                    cands ^= f
                    if rest | f in self.bases:
                        found = True
                        break
                if not found:
                    raise MatroidError(
                        f"basis exchange fails for {elements_of(b1)}, {elements_of(b2)}"
                    )

    # ---- basic queries -----------------------------------------------------

    @property
    def ground(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    @property
    def nonbases(self) -> list[int]:
        return [m for m in _subsets(self.n, self.d) if m not in self.bases]

    def is_basis(self, subset: Iterable[int]) -> bool:
        return mask_of(subset) in self.bases

    def rank_mask(self, mask: int) -> int:
        cached = self._ranks.get(mask)
        if cached is None:
            cached = max((mask & b).bit_count() for b in self.bases)
            self._ranks[mask] = cached
        return cached

    def rank(self, subset: Iterable[int]) -> int:
        return self.rank_mask(mask_of(subset))

    def closure_mask(self, mask: int) -> int:
        r = self.rank_mask(mask)
        out = mask
        for e in range(self.n):
            bit = 1 << e
            if not mask & bit and self.rank_mask(mask | bit) == r:
                out |= bit
        return out

    def closure(self, subset: Iterable[int]) -> Flat:
        mask = self.closure_mask(mask_of(subset))
        return Flat(frozenset(elements_of(mask)), self.rank_mask(mask))

    def flat(self, mask: int) -> Flat:
        return Flat(frozenset(elements_of(mask)), self.rank_mask(mask))

    def flats(self) -> list[Flat]:
        """Every flat, by breadth-first closure from cl(empty set)."""
        start = self.closure_mask(0)
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for f in frontier:
                for e in range(self.n):
                    if not f & (1 << e):
                        g = self.closure_mask(f | (1 << e))
                        if g not in seen:
                            seen.add(g)
                            nxt.append(g)
            frontier = nxt
        return sorted((self.flat(m) for m in seen), key=lambda F: (F.rank, F.sorted))

    def hyperplanes(self) -> list[Flat]:
        if self.d == 0:
            return []
        found = set()
        for combo in itertools.combinations(range(self.n), self.d - 1):
            m = sum(1 << c for c in combo)
            if self.rank_mask(m) == self.d - 1:
                found.add(self.closure_mask(m))
        return sorted((self.flat(m) for m in found), key=lambda F: F.sorted)

    def nontrivial_hyperplanes(self) -> list[Flat]:
        """Hyperplanes with at least d elements (lines in rank 3, planes in rank 4)."""
        return [H for H in self.hyperplanes() if len(H) >= self.d]

    def lines(self) -> list[Flat]:
        if self.d != 3:
            raise MatroidError(f"lines are defined for rank 3, matroid has rank {self.d}")
        return self.nontrivial_hyperplanes()

    def planes(self) -> list[Flat]:
        if self.d != 4:
            raise MatroidError(f"planes are defined for rank 4, matroid has rank {self.d}")
        return self.nontrivial_hyperplanes()

    def _is_cyclic(self, mask: int) -> bool:
        r = self.rank_mask(mask)
        return all(self.rank_mask(mask & ~(1 << e)) == r for e in range(self.n) if mask & (1 << e))

    def cyclic_flats(self) -> list[Flat]:
        return [F for F in self.flats() if self._is_cyclic(F.mask)]

    def cyclic_hyperplanes(self) -> list[Flat]:
        """Z1(Q): hyperplanes whose restriction has no coloops."""
        return [H for H in self.hyperplanes() if self._is_cyclic(H.mask)]

    def z1_through(self, a: int) -> list[Flat]:
        """Hyperplanes H containing a such that a is not a coloop of Q|H."""
        bit = mask_of([a])
        return [
            H for H in self.hyperplanes()
            if H.mask & bit and self.rank_mask(H.mask & ~bit) == H.rank
        ]

    def circuits(self, max_size: Optional[int] = None) -> list[tuple[int, ...]]:
        top = self.d + 1 if max_size is None else min(max_size, self.d + 1)
        out = []
        for k in range(1, top + 1):
            for combo in itertools.combinations(range(self.n), k):
                m = sum(1 << c for c in combo)
                if self.rank_mask(m) != k - 1:
                    continue
                if all(self.rank_mask(m & ~(1 << c)) == k - 1 for c in combo):
                    out.append(tuple(c + 1 for c in combo))
        return out

    # ---- structure ---------------------------------------------------------

    def loops(self) -> tuple[int, ...]:
        union = 0
        for b in self.bases:
            union |= b
        return elements_of(_full(self.n) & ~union)

    def coloops(self) -> tuple[int, ...]:
        inter = _full(self.n)
        for b in self.bases:
            inter &= b
        return elements_of(inter)

    def parallel_classes(self) -> tuple[tuple[int, ...], ...]:
        loops = set(self.loops())
        classes: list[list[int]] = []
        for e in self.ground:
            if e in loops:
                continue
            for cls in classes:
                if self.rank([cls[0], e]) == 1:
                    cls.append(e)
                    break
            else:
                classes.append([e])
        return tuple(tuple(c) for c in classes if len(c) > 1)

    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components from the fundamental circuits of one basis."""
        parent = list(range(self.n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        b0 = min(self.bases)
        loops = set(self.loops())
        for e in self.ground:
            bit = 1 << (e - 1)
            if b0 & bit or e in loops:
                continue
            for b in elements_of(b0):
                if (b0 & ~(1 << (b - 1))) | bit in self.bases:
                    parent[find(e)] = find(b)
        groups: dict[int, list[int]] = {}
        for e in self.ground:
            groups.setdefault(find(e), []).append(e)
        comps = tuple(sorted(tuple(g) for g in groups.values()))
        for c in comps:
            m = mask_of(c)
            if self.rank_mask(m) + self.rank_mask(_full(self.n) & ~m) != self.d:
                raise MatroidError(f"component {c} is not a separator")
        return comps

    def structure_flags(self) -> StructureFlags:
        loops = self.loops()
        parallel = self.parallel_classes()
        comps = self.components()
        return StructureFlags(
            loops=loops,
            coloops=self.coloops(),
            parallel_classes=parallel,
            is_simple=not loops and not parallel,
            is_connected=len(comps) <= 1,
            components=comps,
        )

    def is_simple(self) -> bool:
        return not self.loops() and not self.parallel_classes()

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_paving_by_circuits(self) -> bool:
        return self.d <= 1 or not self.circuits(max_size=self.d - 1)

    def is_paving_by_cyclic_flats(self) -> bool:
        if self.d >= 2 and self.loops():
            return False
        allowed = {0, self.d - 1, self.d}
        return all(F.rank in allowed for F in self.cyclic_flats())

    def is_paving(self) -> bool:
        by_circuits = self.is_paving_by_circuits()
        if by_circuits != self.is_paving_by_cyclic_flats():
            raise MatroidError("paving criteria disagree")
        return by_circuits

    # ---- constructions -----------------------------------------------------

    def dual(self) -> "Matroid":
        full = _full(self.n)
        name = f"{self.name}^dual" if self.name else ""
        return Matroid(self.n - self.d, self.n, frozenset(full & ~b for b in self.bases), name)

    def delete(self, eta: Iterable[int]) -> tuple["Matroid", dict[int, int]]:
        eta_mask = mask_of(eta)
        if eta_mask & ~_full(self.n):
            raise MatroidError(f"{sorted(eta)} is not a subset of [{self.n}]")
        keep = [e for e in self.ground if not eta_mask & (1 << (e - 1))]
        relabel = {old: new for new, old in enumerate(keep, start=1)}
        keep_mask = mask_of(keep)
        r = self.rank_mask(keep_mask)
        masks = {_remap(b & keep_mask, relabel) for b in self.bases if (b & keep_mask).bit_count() == r}
        return Matroid(r, len(keep), frozenset(masks)), relabel

    def contract(self, eta: Iterable[int]) -> tuple["Matroid", dict[int, int]]:
        minor, relabel = self.dual().delete(eta)
        return minor.dual(), relabel

    def restriction(self, subset: Iterable[int]) -> tuple["Matroid", dict[int, int]]:
        keep = mask_of(subset)
        return self.delete(elements_of(_full(self.n) & ~keep))

    def relabel(self, perm: dict[int, int]) -> "Matroid":
        """Image of Q under the ground-set bijection `perm` (label -> label)."""
        if sorted(perm) != list(self.ground) or sorted(perm.values()) != list(self.ground):
            raise MatroidError("relabeling must be a permutation of the ground set")
        return Matroid(self.d, self.n, frozenset(_remap(b, perm) for b in self.bases), self.name)

    def direct_sum(self, other: "Matroid") -> "Matroid":
        shift = self.n
        masks = {b1 | (b2 << shift) for b1 in self.bases for b2 in other.bases}
        return Matroid(self.d + other.d, self.n + other.n, frozenset(masks))

    # ---- dense view --------------------------------------------------------

    def basis_bitset(self, order: str = "colex") -> int:
        enum = SubsetEnumeration(self.n, self.d, order)
        bits = 0
        for b in self.bases:
            bits |= 1 << enum.rank(elements_of(b))
        return bits

    @classmethod
    def from_basis_bitset(cls, d: int, n: int, bits: int, order: str = "colex",
                          validate: Optional[bool] = None) -> "Matroid":
        enum = SubsetEnumeration(n, d, order)
        masks = [mask_of(enum.unrank(i)) for i in range(enum.size) if bits >> i & 1]
        return cls.from_masks(d, n, masks, validate=validate)

    # ---- isomorphism -------------------------------------------------------

    def _element_invariants(self) -> dict[int, tuple]:
        hyper = self.nontrivial_hyperplanes() if self.d >= 2 else []
        out = {}
        for e in self.ground:
            bit = 1 << (e - 1)
            degree = sum(1 for b in self.bases if b & bit)
            sizes = tuple(sorted(len(H) for H in hyper if e in H))
            out[e] = (degree, sizes)
        return out

    def is_isomorphic(self, other: "Matroid") -> Optional[dict[int, int]]:
        """A permutation mapping self onto other, or None."""
        if (self.d, self.n, len(self.bases)) != (other.d, other.n, len(other.bases)):
            return None
        inv1 = self._element_invariants()
        inv2 = other._element_invariants()
        if sorted(inv1.values()) != sorted(inv2.values()):
            return None
        order = sorted(self.ground, key=lambda e: (sum(1 for v in inv1.values() if v == inv1[e]), e))
        assignment: dict[int, int] = {}
        used: set[int] = set()

        def consistent(x: int, y: int) -> bool:
            placed = list(assignment)
            for combo in itertools.combinations(placed, self.d - 1) if self.d >= 1 else []:
                src = mask_of(combo) | (1 << (x - 1))
                dst = mask_of(assignment[c] for c in combo) | (1 << (y - 1))
                if (src in self.bases) != (dst in other.bases):
                    return False
            return True

        def search(k: int) -> bool:
            if k == len(order):
                return True
            x = order[k]
            for y in other.ground:
                if y in used or inv2[y] != inv1[x] or not consistent(x, y):
                    continue
                assignment[x] = y
                used.add(y)
                if search(k + 1):
                    return True
                del assignment[x]
                used.discard(y)
            return False

        if self.d == 0:
            return {e: e for e in self.ground}
        return dict(assignment) if search(0) else None

    # ---- JSON --------------------------------------------------------------

    def to_json(self) -> dict:
        nonbases = self.nonbases
        data = {"d": self.d, "n": self.n}
        if self.name:
            data["name"] = self.name
        if len(nonbases) <= len(self.bases):
            data["nonbases"] = sorted(list(elements_of(m)) for m in nonbases)
        else:
            data["bases"] = sorted(list(elements_of(m)) for m in self.bases)
        return data

    @classmethod
    def from_json(cls, data: dict, validate: Optional[bool] = None) -> "Matroid":
        name = data.get("name", "")
        try:
            if "matrix" in data:
                fld = CoefficientField.parse(data.get("field", "QQ"))
                q = linear_matroid(data["matrix"], fld)
                return Matroid(q.d, q.n, q.bases, name)
            d, n = int(data["d"]), int(data["n"])
            if "bases" in data:
                q = cls.from_bases(n, data["bases"], name, validate)
                if q.d != d:
                    raise MatroidError(f"bases have size {q.d}, expected {d}")
                return q
            if "hyperplanes" in data:
                return cls.from_hyperplanes(d, n, data["hyperplanes"], name, validate)
            return cls.from_nonbases(d, n, data.get("nonbases", []), name, validate)
        except KeyError as e:
            raise MatroidError(f"matroid JSON is missing {e}") from e

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"Matroid({self.d},{self.n}{label}, {len(self.bases)} bases)"


def _subsets(n: int, d: int) -> list[int]:
    return [sum(1 << c for c in combo) for combo in itertools.combinations(range(n), d)]


def _remap(mask: int, relabel: dict[int, int]) -> int:
    return mask_of(relabel[e] for e in elements_of(mask))


# =============================================================================
# LINEAR MATROIDS
# =============================================================================

def _domain_matrix(rows: Sequence[Sequence], fld: CoefficientField) -> DomainMatrix:
    if not rows:
        raise MatroidError("empty matrix")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise MatroidError("matrix rows have different lengths")
    K = fld.domain
    return DomainMatrix([[fld.element(x) for x in r] for r in rows], (len(rows), width), K)


def maximal_minors(rows: Sequence[Sequence], fld: Optional[CoefficientField] = None) -> dict:
    """Every d x d minor (d = number of rows), keyed by 1-indexed column tuples."""
    fld = fld or CoefficientField.rationals()
    M = _domain_matrix(rows, fld)
    d, n = M.shape
    out = {}
    for cols in itertools.combinations(range(n), d):
        out[tuple(c + 1 for c in cols)] = M.extract(list(range(d)), list(cols)).det()
    return out


def linear_matroid(rows: Sequence[Sequence], fld: Optional[CoefficientField] = None) -> Matroid:
    fld = fld or CoefficientField.rationals()
    M = _domain_matrix(rows, fld)
    d, n = M.shape
    if d > n:
        raise MatroidError(f"{d} rows but only {n} columns")
    if M.rank() != d:
        raise MatroidError("matrix does not have full row rank")
    masks = [mask_of(cols) for cols, det in maximal_minors(rows, fld).items() if not fld.is_zero(det)]
    return Matroid.from_masks(d, n, masks, validate=False)
