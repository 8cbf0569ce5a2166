"""
Realization Presentations
=========================
Coordinate rings of matroid strata and realization spaces as localized
quotients U^-1 B / I, built from the maximal minors of a matrix of variables.

Features:
- stratum presentation [I | X] from a reference basis
- realization presentation pinned by a reference circuit (identity + column of ones)
- verification of explicit symbolic realization matrices
- quadratic Pluecker relations and the generic matrix used to check them

Variables are numbered x1, x2, ... column by column; the provenance records
the (row, column) position of each one.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from sympy.polys.matrices import DomainMatrix

from app.config import ResourceCaps
from app.services.fields import CoefficientField, PolyRing
from app.services.gallery import MatrixText
from app.services.groebner import Ideal, groebner_basis, normal_form, saturate_by
from app.services.matroid import Matroid, elements_of, mask_of, maximal_minors
from app.services.polynomials import (
    evaluate,
    factor_polynomial,
    format_polynomial,
    normalize,
    parse_many,
    parse_polynomial,
    total_degree,
)

logger = logging.getLogger(__name__)


class PresentationError(ValueError):
    """A presentation cannot be built from the given data."""


class NoReferenceCircuit(PresentationError):
    """The matroid has no circuit of size d+1."""


# =============================================================================
# SYMBOLIC MATRICES
# =============================================================================

@dataclass(frozen=True)
class SymbolicMatrix:
    ring: PolyRing
    rows: tuple

    @classmethod
    def from_entries(cls, ring: PolyRing, rows: Sequence[Sequence]) -> "SymbolicMatrix":
        out = []
        for row in rows:
            line = []
            for e in row:
                if isinstance(e, str):
                    e = parse_polynomial(e, ring)
                elif isinstance(e, int):
                    e = ring.constant(e)
                ring.check(e)
                line.append(e)
            out.append(tuple(line))
        if len({len(r) for r in out}) > 1:
            raise PresentationError("matrix rows have different lengths")
        return cls(ring, tuple(out))

    @classmethod
    def from_text(cls, text: MatrixText, fld: Optional[CoefficientField] = None) -> "SymbolicMatrix":
        ring = PolyRing(fld or CoefficientField.rationals(), tuple(text.variables))
        return cls.from_entries(ring, text.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def minor(self, cols: Sequence[int]):
        """Determinant of the columns `cols` (1-indexed) taken in the given order."""
        d = len(self.rows)
        if len(cols) != d:
            raise PresentationError(f"a maximal minor needs {d} columns")
        dom = self.ring.sympy_ring.to_domain()
        sub = [[self.rows[i][c - 1] for c in cols] for i in range(d)]
        return DomainMatrix(sub, (d, d), dom).det()

    def maximal_minors(self) -> dict[tuple[int, ...], object]:
        d, n = self.shape
        return {cols: self.minor(cols) for cols in itertools.combinations(range(1, n + 1), d)}

    def at_point(self, point: dict) -> list[list]:
        """Entries evaluated at a point (variable name -> field value)."""
        return [[evaluate(e, point, self.ring.field) for e in row] for row in self.rows]

    def to_json(self) -> dict:
        return {
            "vars": list(self.ring.variables),
            "field": str(self.ring.field),
            "rows": [[format_polynomial(e) for e in row] for row in self.rows],
        }


def generic_matrix(d: int, n: int) -> SymbolicMatrix:
    """[I_d | x_ij | y]: identity, free variables, and a last column of variables y_b."""
    if n < d + 1:
        raise PresentationError("the generic matrix needs n >= d+1")
    names = [f"x{i}_{j}" for j in range(1, n - d) for i in range(1, d + 1)]
    names += [f"y{b}" for b in range(1, d + 1)]
    ring = PolyRing(CoefficientField.rationals(), tuple(names))
    rows = []
    for i in range(1, d + 1):
        row = [1 if k == i else 0 for k in range(1, d + 1)]
        row += [f"x{i}_{j}" for j in range(1, n - d)]
        row.append(f"y{i}")
        rows.append(row)
    return SymbolicMatrix.from_entries(ring, rows)


# =============================================================================
# PRESENTATIONS
# =============================================================================

@dataclass(frozen=True)
class Presentation:
    ring: PolyRing
    ideal_gens: tuple
    semigroup_gens: tuple
    provenance: dict = field(default_factory=dict, compare=False)
    matrix: Optional[SymbolicMatrix] = field(default=None, compare=False, repr=False)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.ring.variables

    @property
    def num_vars(self) -> int:
        return self.ring.nvars

    @property
    def is_unit_ideal(self) -> bool:
        return any(g.is_ground for g in self.ideal_gens)

    def ideal(self) -> Ideal:
        return Ideal.of(self.ring, self.ideal_gens)

    def saturated(self, caps: Optional[ResourceCaps] = None) -> Ideal:
        return saturate_by(self.ideal(), self.semigroup_gens, caps)

    def to_json(self) -> dict:
        return {
            "vars": list(self.ring.variables),
            "field": str(self.ring.field),
            "ideal": [format_polynomial(g) for g in self.ideal_gens],
            "semigroup": [format_polynomial(g) for g in self.semigroup_gens],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        try:
            ring = PolyRing(CoefficientField.parse(data.get("field", "QQ")), tuple(data["vars"]))
            ideal = parse_many(data.get("ideal", []), ring)
            semigroup = parse_many(data.get("semigroup", []), ring)
        except KeyError as e:
            raise PresentationError(f"presentation JSON is missing {e}") from e
        return build(ring, ideal, semigroup, data.get("provenance", {}))


def _key(p) -> tuple:
    return (total_degree(p), format_polynomial(p))


def normalize_ideal(gens: Sequence) -> tuple:
    """Nonzero generators, normalized and deduplicated; a constant collapses to <1>."""
    out = {}
    for g in gens:
        if not g:
            continue
        if g.is_ground:
            return (g.ring.one,)
        g = normalize(g)
        out[format_polynomial(g)] = g
    return tuple(sorted(out.values(), key=_key))


def semigroup_factors(gens: Sequence) -> tuple:
    """Normalized non-constant factors of the nonzero `gens`, deduplicated."""
    out = {}
    for g in gens:
        if not g:
            raise PresentationError("zero cannot be inverted")
        for f, _ in factor_polynomial(g):
            out[format_polynomial(f)] = f
    return tuple(sorted(out.values(), key=_key))


def build(ring: PolyRing, ideal: Sequence, semigroup: Sequence, provenance: Optional[dict] = None,
          matrix: Optional[SymbolicMatrix] = None) -> Presentation:
    ring.check(*ideal, *semigroup)
    if any(not s for s in semigroup):
        return Presentation(ring, (ring.one(),), (), dict(provenance or {}, empty_reason="zero basis minor"), matrix)
    return Presentation(ring, normalize_ideal(ideal), semigroup_factors(semigroup), dict(provenance or {}), matrix)


def _from_matrix(Q: Matroid, M: SymbolicMatrix, provenance: dict) -> Presentation:
    ideal, semigroup = [], []
    for cols, minor in M.maximal_minors().items():
        if mask_of(cols) in Q.bases:
            semigroup.append(minor)
        elif minor:
            ideal.append(minor)
    P = build(M.ring, ideal, semigroup, provenance, M)
    logger.debug(
        "presentation of %s: %d vars, %d ideal gens, %d semigroup gens",
        Q, P.num_vars, len(P.ideal_gens), len(P.semigroup_gens),
    )
    return P


def _permutation(first: Sequence[int], n: int) -> dict[int, int]:
    """Send `first` to 1..k in order and the remaining labels after them, in order."""
    order = list(first) + [e for e in range(1, n + 1) if e not in set(first)]
    return {old: new for new, old in enumerate(order, start=1)}


def _provenance(Q: Matroid, kind: str, reference: Sequence[int], perm: dict, positions: dict, **extra) -> dict:
    return {
        "matroid": Q.name or f"({Q.d},{Q.n})",
        "kind": kind,
        "reference": list(reference),
        "permutation": [[old, new] for old, new in sorted(perm.items())],
        "positions": positions,
        **extra,
    }


# =============================================================================
# REFERENCE CIRCUITS
# =============================================================================

@dataclass(frozen=True)
class ReferenceCircuit:
    circuit: tuple[int, ...]
    permutation: dict

    @classmethod
    def of(cls, circuit: Sequence[int], n: int) -> "ReferenceCircuit":
        circuit = tuple(sorted(circuit))
        return cls(circuit, _permutation(circuit, n))

    def to_json(self) -> dict:
        return {
            "circuit": list(self.circuit),
            "permutation": [[old, new] for old, new in sorted(self.permutation.items())],
        }


def reference_circuits(Q: Matroid) -> Iterator[ReferenceCircuit]:
    """Every (d+1)-circuit in lexicographic order."""
    for combo in itertools.combinations(Q.ground, Q.d + 1):
        m = mask_of(combo)
        if all(m & ~(1 << (e - 1)) in Q.bases for e in combo):
            yield ReferenceCircuit(combo, _permutation(combo, Q.n))


def find_reference_circuit(Q: Matroid) -> ReferenceCircuit:
    for ref in reference_circuits(Q):
        return ref
    raise NoReferenceCircuit(f"{Q} has no circuit of size {Q.d + 1}")


# =============================================================================
# STRATA AND REALIZATION SPACES
# =============================================================================

def stratum_presentation(Q: Matroid, basis: Optional[Sequence[int]] = None) -> Presentation:
    """Presentation of the stratum from the matrix [I | X] after moving `basis` to [d]."""
    if basis is None:
        basis = min(elements_of(b) for b in Q.bases)
    basis = tuple(sorted(basis))
    if mask_of(basis) not in Q.bases:
        raise PresentationError(f"{list(basis)} is not a basis")
    d, n = Q.d, Q.n
    perm = _permutation(basis, n)
    P = Q.relabel(perm)
    pivot = mask_of(range(1, d + 1))

    names, positions, cells = [], {}, {}
    for j in range(1, n - d + 1):
        for i in range(1, d + 1):
            if (pivot & ~(1 << (i - 1))) | (1 << (d + j - 1)) in P.bases:
                name = f"x{len(names) + 1}"
                names.append(name)
                positions[name] = [i, d + j]
                cells[(i, d + j)] = name
    ring = PolyRing(CoefficientField.rationals(), tuple(names))
    rows = [
        [1 if c == i else 0 for c in range(1, d + 1)] + [cells.get((i, c), 0) for c in range(d + 1, n + 1)]
        for i in range(1, d + 1)
    ]
    M = SymbolicMatrix.from_entries(ring, rows)
    return _from_matrix(P, M, _provenance(Q, "stratum", basis, perm, positions))


def realization_presentation(Q: Matroid, reference: Optional[ReferenceCircuit] = None) -> Presentation:
    """Presentation of the realization space with the reference circuit pinned to [I | 1]."""
    if not Q.is_connected():
        raise PresentationError(f"{Q} is not connected")
    ref = reference or find_reference_circuit(Q)
    if len(ref.circuit) != Q.d + 1 or not all(
        mask_of(ref.circuit) & ~(1 << (e - 1)) in Q.bases for e in ref.circuit
    ):
        raise PresentationError(f"{list(ref.circuit)} is not a circuit of size {Q.d + 1}")
    d, n = Q.d, Q.n
    P = Q.relabel(ref.permutation)
    pivot = mask_of(range(1, d + 1))

    def is_basis(i: int, col: int) -> bool:
        return (pivot & ~(1 << (i - 1))) | (1 << (col - 1)) in P.bases

    names, positions, cells, pivots = [], {}, {}, {}
    for col in range(d + 2, n + 1):
        rows_ok = [i for i in range(1, d + 1) if is_basis(i, col)]
        if not rows_ok:
            raise PresentationError(f"column {col} is a loop")
        mu = max(rows_ok)
        pivots[str(col)] = mu
        for i in range(1, d + 1):
            if i == mu:
                cells[(i, col)] = 1
            elif is_basis(i, col):
                name = f"x{len(names) + 1}"
                names.append(name)
                positions[name] = [i, col]
                cells[(i, col)] = name
    ring = PolyRing(CoefficientField.rationals(), tuple(names))
    rows = [
        [1 if c == i else 0 for c in range(1, d + 1)] + [1] + [cells.get((i, c), 0) for c in range(d + 2, n + 1)]
        for i in range(1, d + 1)
    ]
    M = SymbolicMatrix.from_entries(ring, rows)
    return _from_matrix(P, M, _provenance(Q, "realization", ref.circuit, ref.permutation, positions, pivots=pivots))


# =============================================================================
# EXPLICIT MATRICES
# =============================================================================

@dataclass(frozen=True)
class MatrixCheck:
    ideal: Ideal  # saturated by the semigroup
    semigroup: tuple
    consistent: bool
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "ideal": self.ideal.to_strings(),
            "semigroup": [format_polynomial(g) for g in self.semigroup],
            "consistent": self.consistent,
            "reason": self.reason,
        }


def verify_matrix_presentation(Q: Matroid, M: SymbolicMatrix, caps: Optional[ResourceCaps] = None) -> MatrixCheck:
    """Check that a symbolic matrix realizes Q on the complement of its degenerate locus."""
    if M.shape != (Q.d, Q.n):
        raise PresentationError(f"matrix has shape {M.shape}, expected {(Q.d, Q.n)}")
    ideal, basis_minors = [], []
    for cols, minor in M.maximal_minors().items():
        if mask_of(cols) in Q.bases:
            basis_minors.append(minor)
        elif minor:
            ideal.append(minor)
    if any(not m for m in basis_minors):
        I = groebner_basis(Ideal.of(M.ring, [M.ring.one()]), caps)
        return MatrixCheck(I, (), False, "a basis minor vanishes identically")
    semigroup = semigroup_factors(basis_minors)
    sat = saturate_by(Ideal.of(M.ring, ideal), semigroup, caps)
    if sat.is_unit:
        return MatrixCheck(sat, semigroup, False, "saturated ideal is <1>")
    bad = [m for m in basis_minors if not normal_form(m, sat)]
    if bad:
        return MatrixCheck(sat, semigroup, False, f"{len(bad)} basis minors vanish on the space")
    return MatrixCheck(sat, semigroup, True)


# =============================================================================
# PLUECKER RELATIONS
# =============================================================================

def pluecker_variable(subset: Sequence[int]) -> str:
    return "p_" + "_".join(str(e) for e in sorted(subset))


def pluecker_ring(d: int, n: int) -> PolyRing:
    names = tuple(pluecker_variable(c) for c in itertools.combinations(range(1, n + 1), d))
    return PolyRing(CoefficientField.rationals(), names)


def _signed_coordinate(ring: PolyRing, seq: Sequence[int]):
    if len(set(seq)) < len(seq):
        return ring.zero()
    inversions = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    gen = ring.gen(pluecker_variable(seq))
    return -gen if inversions % 2 else gen


def pluecker_relation(d: int, n: int, lam: Sequence[int], mu: Sequence[int]):
    """sum_b (-1)^b p(lam, mu_b) p(mu without mu_b), b counted from 0."""
    if len(lam) != d - 1 or len(mu) != d + 1:
        raise PresentationError(f"need |lam| = {d - 1} and |mu| = {d + 1}")
    if any(not 1 <= e <= n for e in list(lam) + list(mu)):
        raise PresentationError(f"sequences must take values in [1, {n}]")
    ring = pluecker_ring(d, n)
    total = ring.zero()
    for b, m in enumerate(mu):
        rest = list(mu[:b]) + list(mu[b + 1:])
        term = _signed_coordinate(ring, list(lam) + [m]) * _signed_coordinate(ring, rest)
        total += -term if b % 2 else term
    return total


def pluecker_point(rows: Sequence[Sequence], fld: Optional[CoefficientField] = None) -> dict[str, object]:
    """Pluecker coordinates of a numeric matrix, keyed by `pluecker_ring` variable names."""
    return {pluecker_variable(cols): m for cols, m in maximal_minors(rows, fld).items()}
