"""
Named matroids and symbolic matrices used as fixtures and CLI shortcuts.

Lookup: named("q_sing"), named("tab39_3"), named("uniform_3_7") ...
"""

from dataclasses import dataclass
from typing import Callable, Optional

from app.services.fields import CoefficientField
from app.services.matroid import Matroid, MatroidError, linear_matroid


def _sets(text: str) -> list[list[int]]:
    """'1268 137 1-9-12' -> [[1,2,6,8], [1,3,7], [1,9,12]]; dashes separate multi-digit labels."""
    out = []
    for word in text.split():
        if "-" in word:
            out.append([int(x) for x in word.split("-")])
        else:
            out.append([int(c) for c in word])
    return out


# =============================================================================
# MATROIDS
# =============================================================================

Q_SING_LINES = "1268 1357 1-9-12 2459 2-7-11 346 389 3-10-12 478 4-10-11 5-6-10 8-11-12"

EX_3_9_LINES = "125 139 147 168 237 246 289 345 578 679"

EX_3_10_LINES = "125 136 148 237 249 2-6-10 345 467 5-9-10 689 7-8-10"


@dataclass(frozen=True)
class TableRow:
    name: str
    d: int
    n: int
    hyperplanes: str
    polynomial: str


TABLE_3_9 = [
    TableRow("tab39_1", 3, 9, "127 138 145 246 258 347 356 678", "x^2 - x + 1"),
    TableRow("tab39_2", 3, 9, "128 135 147 239 245 267 346 378 568", "x^2 - x + 1"),
    TableRow("tab39_3", 3, 9, "127 138 145 169 239 246 258 347 356 489 579 678", "x^2 - x + 1"),
    TableRow("tab39_4", 3, 9, EX_3_9_LINES, "x^2 + 1"),
    TableRow("tab39_5", 3, 9, "1258 136 149 237 269 345 467 579", "x^2 - x + 1"),
    TableRow("tab39_6", 3, 9, "1258 136 179 237 249 345 389 468 567", "x^2 + x - 1"),
    TableRow("tab39_7", 3, 9, "1258 136 237 269 345 389 468 479 567", "x^2 + x + 1"),
    TableRow("tab39_8", 3, 9, "1259 1367 238 247 345 469 568 789", "x^2 - x + 1"),
]

TABLE_4_8 = [
    TableRow("tab48_1", 4, 8, "3467 2567 2458 2378 1568 1357 1348 1247 1236", "x^2 - 3x + 1"),
    TableRow("tab48_2", 4, 8, "4568 3467 2567 2378 1357 1348 1258 1247 1236", "3x^2 - 3x + 1"),
    TableRow("tab48_3", 4, 8, "12367 5678 3456 2478 2358 1457 1248 1268 1256 1246", "3x^2 - x + 1"),
]


def from_lines(d: int, n: int, text: str, name: str) -> Matroid:
    return Matroid.from_hyperplanes(d, n, _sets(text), name)


def q_sing() -> Matroid:
    return from_lines(3, 12, Q_SING_LINES, "q_sing")


def ex_3_9() -> Matroid:
    return from_lines(3, 9, EX_3_9_LINES, "ex_3_9")


def ex_3_10() -> Matroid:
    return from_lines(3, 10, EX_3_10_LINES, "ex_3_10")


def table_row(row: TableRow) -> Matroid:
    return from_lines(row.d, row.n, row.hyperplanes, row.name)


def not_smooth_4_10() -> Matroid:
    """Rank 4 on 10 elements; deleting 10 gives U(4,9) but the deletion map is not smooth."""
    return Matroid.from_nonbases(4, 10, _sets("1-2-3-10 4-5-6-10 7-8-9-10"), "not_smooth_4_10")


F2_EIGHT_POINTS = [
    [0, 1, 0, 0, 1, 1, 0, 1],
    [0, 0, 1, 0, 1, 0, 1, 1],
    [0, 0, 0, 1, 0, 1, 1, 1],
    [1, 1, 1, 1, 1, 1, 1, 1],
]


def f2_eight_points() -> Matroid:
    q = linear_matroid(F2_EIGHT_POINTS, CoefficientField.prime(2))
    return Matroid(q.d, q.n, q.bases, "f2_eight_points")


NOT_SMOOTH_B = [
    [1, 0, 0, 0, 1, 2, -2, 3, 5],
    [0, 1, 0, 0, 1, 3, 4, -4, -5],
    [0, 0, 1, 0, 1, 4, 7, -14, -18],
    [0, 0, 0, 1, 1, 1, 1, 1, 1],
]


# =============================================================================
# SYMBOLIC MATRICES (entries as polynomial text in the listed variables)
# =============================================================================

@dataclass(frozen=True)
class MatrixText:
    variables: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]


Q_SING_MATRIX = MatrixText(
    ("x", "y"),
    (
        ("1", "0", "0", "1", "1", "1", "y-1", "1", "1", "x", "y-1", "x"),
        ("0", "1", "0", "1", "0", "1", "0", "y", "y", "y", "-x*y^2+2*y^2-y", "y"),
        ("0", "0", "1", "1", "1", "0", "y", "0", "1", "x-y", "y", "1"),
    ),
)

EX_3_10_MATRIX = MatrixText(
    ("x", "y"),
    (
        ("1", "0", "0", "1", "1", "x", "0", "x^2-x*y-1", "1", "x"),
        ("0", "1", "0", "1", "1", "0", "x", "x-y-1", "-x+y+1", "y"),
        ("0", "0", "1", "1", "0", "1", "x-1", "x-y-1", "1", "1"),
    ),
)

EX_3_9_MATRIX = MatrixText(
    ("x1", "x2", "x3", "x4", "x5", "x6", "x7"),
    (
        ("1", "0", "0", "1", "x1", "x2", "0", "x5", "x7"),
        ("0", "1", "0", "1", "1", "x3", "x4", "x6", "0"),
        ("0", "0", "1", "1", "0", "1", "1", "1", "1"),
    ),
)

EX_3_9_IDEAL = ("x1-1", "x2-1", "x3-x7-1", "x4-1", "x5-x7", "x6-x7-1", "x7^2+1")

EX_3_10_POLYNOMIAL = "x^2*y - x^2 - x*y^2 + x*y - y"

Q_SING_POLYNOMIAL = "(x*y + x - 2*y)*(y^2 - y + 1)"

Q_SING_SEMIGROUP = (
    "x", "y", "x-1", "x-2", "y-1", "y+1", "x-y", "x-2*y", "x-y-1", "x*y-y+1",
    "x*y-2*y+1", "x+y^2-y", "x*y-2*y+2", "x+y^2-2*y", "x+y^2-y-1", "x*y-y^2-y+1",
    "x*y^2-y^2+y-1", "x*y^2-2*y^2+y-1", "x*y^2-2*y^2+2*y-1", "x^2*y-x*y^2-2*x*y+x+2*y^2",
)

EX_3_10_SEMIGROUP = (
    "x", "y", "x-1", "y-1", "x-y", "x-y-1", "x*y-x+1", "x*y-x-y", "x^2-x*y-1",
    "x^2-x*y+y", "x^2-x*y-x+y+1", "x^3-2*x^2-x*y^2+2*x*y-2*y",
)


# =============================================================================
# LOOKUP
# =============================================================================

_NAMED: dict[str, Callable[[], Matroid]] = {
    "q_sing": q_sing,
    "ex_3_9": ex_3_9,
    "ex_3_10": ex_3_10,
    "not_smooth_4_10": not_smooth_4_10,
    "f2_eight_points": f2_eight_points,
}
for _row in TABLE_3_9 + TABLE_4_8:
    _NAMED[_row.name] = (lambda r: lambda: table_row(r))(_row)


def names() -> list[str]:
    return sorted(_NAMED) + ["uniform_<d>_<n>"]


def named(name: str) -> Matroid:
    if name.startswith("uniform_"):
        try:
            d, n = (int(x) for x in name.split("_")[1:])
        except ValueError:
            raise MatroidError(f"expected uniform_<d>_<n>, got {name!r}") from None
        return Matroid.uniform(d, n)
    factory: Optional[Callable[[], Matroid]] = _NAMED.get(name)
    if factory is None:
        raise MatroidError(f"unknown gallery matroid {name!r}; known: {', '.join(names())}")
    return factory()


def table_rows() -> list[TableRow]:
    return TABLE_3_9 + TABLE_4_8
