"""
Matroid Subdivisions
====================
Corank vectors, the cells they induce on the hypersimplex, and the
star-shaped subdivision of a paving matroid:

- corank_vector / cell_matroid (argmin of <e_lambda, v> + w_lambda)
- leaf and edge matroids for each cyclic hyperplane
- star subdivision with facet inequalities sum_{i in eta} x_i <= d-1
- dimension bookkeeping for the inverse limit
- t-adic witness matrices whose minor valuations reproduce corank(Q_sing)
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from app.config import ResourceCaps
from app.services import gallery
from app.services.fields import CoefficientField
from app.services.matroid import Matroid, MatroidError, elements_of, mask_of
from app.services.planner import stratum_dimension
from app.services.presentation import SymbolicMatrix
from app.services.smoothness import classify
from app.services.tvaluation import TPolynomialMatrix, t_valuation_of_minors

logger = logging.getLogger(__name__)


class NonMatroidalCell(ValueError):
    """The argmin set of a probe is not the basis set of a matroid."""


class UnsupportedWitness(ValueError):
    """No exact witness construction for this (d, n)."""


# =============================================================================
# CORANK VECTORS
# =============================================================================

@dataclass(frozen=True)
class CorankVector:
    d: int
    n: int
    values: dict  # d-subset mask -> int, minimum 0

    def __getitem__(self, subset: Iterable[int]) -> int:
        return self.values[mask_of(subset)]

    def shifted(self, k: int) -> "CorankVector":
        """w + k * (1, ..., 1); renormalized to minimum 0 when stored."""
        return CorankVector.normalized(self.d, self.n, {m: v + k for m, v in self.values.items()})

    @classmethod
    def normalized(cls, d: int, n: int, values: dict) -> "CorankVector":
        low = min(values.values())
        return cls(d, n, {m: v - low for m, v in values.items()})

    def support(self) -> list[tuple[int, ...]]:
        return sorted(elements_of(m) for m, v in self.values.items() if v)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "nonzero": [[list(elements_of(m)), v] for m, v in sorted(self.values.items(), key=lambda kv: elements_of(kv[0])) if v],
        }


def corank_vector(Q: Matroid) -> CorankVector:
    values = {
        sum(1 << c for c in combo): Q.d - Q.rank_mask(sum(1 << c for c in combo))
        for combo in itertools.combinations(range(Q.n), Q.d)
    }
    w = CorankVector(Q.d, Q.n, values)
    if max(values.values(), default=0) > 1 and Q.is_paving_by_circuits():
        raise MatroidError("paving matroid with corank above 1")
    return w


def cell_matroid(w: CorankVector, v: Sequence) -> Matroid:
    if len(v) != w.n:
        raise ValueError(f"probe has length {len(v)}, expected {w.n}")
    probe = [Fraction(x) for x in v]
    scores = {m: sum(probe[e - 1] for e in elements_of(m)) + val for m, val in w.values.items()}
    low = min(scores.values())
    masks = [m for m, s in scores.items() if s == low]
    try:
        return Matroid.from_masks(w.d, w.n, masks, validate=True)
    except MatroidError as e:
        raise NonMatroidalCell(f"non-matroidal cell: {e}") from e


def indicator_probe(eta: Iterable[int], n: int) -> list[int]:
    """-e*_eta: minus one on eta, zero elsewhere."""
    members = set(eta)
    return [-1 if e in members else 0 for e in range(1, n + 1)]


# =============================================================================
# LEAVES AND EDGES
# =============================================================================

def _counting_matroid(eta: Iterable[int], d: int, n: int, keep) -> Matroid:
    eta_mask = mask_of(eta)
    if eta_mask.bit_count() < d:
        raise MatroidError(f"|eta| = {eta_mask.bit_count()} < d = {d}")
    masks = [
        m for m in (sum(1 << c for c in combo) for combo in itertools.combinations(range(n), d))
        if keep((m & eta_mask).bit_count())
    ]
    return Matroid.from_masks(d, n, masks, validate=False)


def leaf_matroid(eta: Iterable[int], d: int, n: int) -> Matroid:
    return _counting_matroid(eta, d, n, lambda k: k >= d - 1)


def edge_matroid(eta: Iterable[int], d: int, n: int) -> Matroid:
    return _counting_matroid(eta, d, n, lambda k: k == d - 1)


@dataclass(frozen=True)
class Leaf:
    eta: tuple[int, ...]
    leaf: Matroid
    edge: Matroid

    def to_json(self) -> dict:
        return {"eta": list(self.eta), "leaf": self.leaf.to_json(), "edge": self.edge.to_json()}


@dataclass(frozen=True)
class SubdivisionStar:
    center: Matroid
    leaves: tuple[Leaf, ...]
    covered: bool
    facets: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "center": self.center.to_json(),
            "leaves": [leaf.to_json() for leaf in self.leaves],
            "covered": self.covered,
            "facets": list(self.facets),
        }


def star_subdivision(Q: Matroid) -> SubdivisionStar:
    """Center Q with one leaf per cyclic hyperplane; Q must be paving and connected."""
    if not Q.is_paving():
        raise MatroidError(f"{Q} is not paving")
    if not Q.is_connected():
        raise MatroidError(f"{Q} is not connected")
    leaves = []
    covered = set(Q.bases)
    for H in Q.cyclic_hyperplanes():
        leaf = leaf_matroid(H.elements, Q.d, Q.n)
        leaves.append(Leaf(H.sorted, leaf, edge_matroid(H.elements, Q.d, Q.n)))
        covered |= leaf.bases
    total = math.comb(Q.n, Q.d)
    if len(covered) != total:
        logger.warning("star of %s leaves %d subsets uncovered", Q, total - len(covered))
    facets = tuple({"eta": list(leaf.eta), "rhs": Q.d - 1} for leaf in leaves)
    return SubdivisionStar(Q, tuple(leaves), len(covered) == total, facets)


# =============================================================================
# DIMENSIONS
# =============================================================================

def leaf_dimension(eta_size: int, d: int, n: int) -> int:
    return (d - 1) * eta_size + n - d * d + d - 1


def edge_dimension(eta_size: int, d: int, n: int) -> int:
    return (d - 2) * eta_size + n - d * d + 2 * d - 2


@dataclass(frozen=True)
class LimitDimension:
    total: int
    center: int
    leaves: tuple[dict, ...]

    def to_json(self) -> dict:
        return {"total": self.total, "center": self.center, "leaves": list(self.leaves)}


def center_dimension(Q: Matroid, caps: Optional[ResourceCaps] = None) -> Optional[int]:
    """Dimension of the stratum of Q from its classified realization space."""
    report = classify(Q, caps)
    if report.dimension is None:
        return None
    if report.presentation_kind == "stratum":
        return report.dimension
    return stratum_dimension(report.dimension, Q.n)


def limit_dimension(star: SubdivisionStar, dim_center_stratum: int) -> LimitDimension:
    d, n = star.center.d, star.center.n
    extra = sum(len(leaf.eta) - d + 1 for leaf in star.leaves)
    leaves = tuple(
        {
            "eta": list(leaf.eta),
            "leaf": leaf_dimension(len(leaf.eta), d, n),
            "edge": edge_dimension(len(leaf.eta), d, n),
        }
        for leaf in star.leaves
    )
    return LimitDimension(dim_center_stratum + extra, dim_center_stratum, leaves)


# =============================================================================
# WITNESSES
# =============================================================================

WITNESS_SHIFT = [
    [1, 0, 2, -1, 1, 0, -1, 1, 0, 1, 1, 1],
    [-1, 0, 1, 1, 1, 0, 3, 0, 1, 1, 1, -1],
    [0, 0, -1, 1, 0, 1, -1, -1, 1, 1, 1, 0],
]

CYCLOTOMIC = "QQ<w: w^2 - w + 1>"


@dataclass(frozen=True)
class Witness:
    label: str
    field: str
    matches: bool
    mismatches: tuple = ()
    valuations: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "point": self.label,
            "field": self.field,
            "matches_corank": self.matches,
            "mismatches": [list(s) for s in self.mismatches],
            "valuations": {",".join(map(str, k)): v for k, v in self.valuations.items()},
        }


@dataclass(frozen=True)
class WitnessReport:
    d: int
    n: int
    witnesses: tuple[Witness, ...]

    @property
    def matches(self) -> bool:
        return all(w.matches for w in self.witnesses)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "valuations_match_corank": self.matches,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def _witness(label: str, fld: CoefficientField, y, w: CorankVector) -> Witness:
    A = SymbolicMatrix.from_text(gallery.Q_SING_MATRIX, fld).at_point({"x": 3, "y": y})
    C = TPolynomialMatrix.from_parts(fld, A, WITNESS_SHIFT)
    vals = t_valuation_of_minors(C, 3)
    mismatches = tuple(k for k, v in vals.items() if v.valuation != w[k])
    valuations = {k: (None if v.is_zero else int(v.valuation)) for k, v in vals.items()}
    return Witness(label, str(fld), not mismatches, mismatches, valuations)


def witness_valuations(d: int, n: int) -> WitnessReport:
    """Minor valuations of A_i + t B at three points of the singular realization space."""
    if (d, n) != (3, 12):
        raise UnsupportedWitness(f"exact witnesses are only available for (3,12), got ({d},{n})")
    w = corank_vector(gallery.q_sing())
    rationals = CoefficientField.rationals()
    ext = CoefficientField.parse(CYCLOTOMIC)
    omega = ext.generator_element()
    witnesses = (
        _witness("(3,-3)", rationals, -3, w),
        _witness("(3,w)", ext, omega, w),
        _witness("(3,1-w)", ext, ext.domain.one - omega, w),
    )
    logger.info("witness valuations match corank: %s", all(x.matches for x in witnesses))
    return WitnessReport(d, n, witnesses)
