"""
t-adic valuations of maximal minors for matrices over F[t].
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement

from app.services.fields import CoefficientField, PolyRing


@dataclass(frozen=True)
class MinorValuation:
    valuation: float  # math.inf for an identically zero minor
    leading: Optional[object] = None

    @property
    def is_zero(self) -> bool:
        return self.valuation == math.inf


class TPolynomialMatrix:
    """Rectangular matrix of polynomials in t over one coefficient field."""

    def __init__(self, field: CoefficientField, rows: Sequence[Sequence]):
        self.field = field
        self.ring = PolyRing(field, ("t",), "lex")
        R = self.ring.sympy_ring
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError("matrix rows have different lengths")
        self.rows = [[self._coerce(R, e) for e in row] for row in rows]

    def _coerce(self, R, entry):
        if isinstance(entry, PolyElement):
            if entry.ring != R:
                raise ValueError("entry does not live in F[t]")
            return entry
        return R.ground_new(_as_element(self.field, entry))

    @classmethod
    def from_parts(cls, field: CoefficientField, constant: Sequence[Sequence], linear: Sequence[Sequence]) -> "TPolynomialMatrix":
        """Entries constant[i][j] + linear[i][j] * t (field elements or ints)."""
        ring = PolyRing(field, ("t",), "lex")
        R = ring.sympy_ring
        t = R.gens[0]
        rows = []
        for crow, lrow in zip(constant, linear):
            rows.append([
                R.ground_new(_as_element(field, c)) + t * R.ground_new(_as_element(field, l))
                for c, l in zip(crow, lrow)
            ])
        return cls(field, rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def scale_column(self, j: int, factor) -> "TPolynomialMatrix":
        rows = [list(r) for r in self.rows]
        for r in rows:
            r[j] = r[j] * factor
        return TPolynomialMatrix(self.field, rows)

    def minor(self, rows: Sequence[int], cols: Sequence[int]):
        dom = self.ring.sympy_ring.to_domain()
        sub = [[self.rows[i][j] for j in cols] for i in rows]
        return DomainMatrix(sub, (len(rows), len(cols)), dom).det()


def _as_element(field: CoefficientField, value):
    """ints, fractions and strings are converted; anything else is taken as a field element."""
    if isinstance(value, (int, str, Fraction)):
        return field.element(value)
    return value


def valuation_of(p) -> MinorValuation:
    if not p:
        return MinorValuation(math.inf, None)
    low = min(m[0] for m in p.itermonoms())
    return MinorValuation(low, dict(p.iterterms())[(low,)])


def t_valuation_of_minors(
    M: TPolynomialMatrix, d: int, rows: Optional[Sequence[int]] = None
) -> dict[tuple[int, ...], MinorValuation]:
    """Valuation and lowest coefficient of every d x d minor (1-indexed column subsets)."""
    nrows, ncols = M.shape
    rows = list(rows) if rows is not None else list(range(d))
    if len(rows) != d or nrows < d:
        raise ValueError(f"need {d} rows, matrix has {nrows}")
    out = {}
    for cols in itertools.combinations(range(ncols), d):
        det = M.minor(rows, cols)
        out[tuple(c + 1 for c in cols)] = valuation_of(det)
    return out
