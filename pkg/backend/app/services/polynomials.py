"""
Polynomial Utilities
====================
Text grammar, normalization, derivatives, content splitting and rational
factorization for polynomials living in a `PolyRing`.

Grammar: integer (or a/b) coefficients, `^` powers, `*` optional, variable
names `[A-Za-z][A-Za-z0-9_]*`. Example: "x^2 y - 3x + 1".
"""

import logging
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Optional

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)

from app.services.fields import PolyRing, RingMismatchError

logger = logging.getLogger(__name__)

_ALLOWED = re.compile(r"^[A-Za-z0-9_+\-*^/()\s]*$")
_TRANSFORMS = standard_transformations + (convert_xor, implicit_multiplication)


class PolynomialParseError(ValueError):
    """Text does not follow the polynomial grammar or uses unknown variables."""


# =============================================================================
# TEXT I/O
# =============================================================================

def parse_polynomial(text: str, ring: PolyRing):
    if not text or not text.strip():
        raise PolynomialParseError("empty polynomial")
    if not _ALLOWED.match(text):
        raise PolynomialParseError(f"illegal characters in {text!r}")
    local = {name: sympy.Symbol(name) for name in ring.variables}
    try:
        expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMS)
    except Exception as e:
        raise PolynomialParseError(f"cannot parse {text!r}: {e}") from e
    stray = {str(s) for s in expr.free_symbols} - set(ring.variables)
    if stray:
        raise PolynomialParseError(f"unknown variables {sorted(stray)} in {text!r}")
    try:
        return ring.sympy_ring.from_expr(expr)
    except ValueError as e:
        raise PolynomialParseError(f"{text!r} is not a polynomial: {e}") from e


def parse_many(texts: Iterable[str], ring: PolyRing) -> list:
    return [parse_polynomial(t, ring) for t in texts]


def format_polynomial(p) -> str:
    return str(p).replace("**", "^")


# =============================================================================
# ARITHMETIC HELPERS
# =============================================================================

def arith(p, q, op: str):
    if p.ring != q.ring:
        raise RingMismatchError("operands live in different rings")
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(p, var: int):
    return p.diff(var)


def total_degree(p) -> int:
    if not p:
        return -1
    return max(sum(m) for m in p.itermonoms())


def degree_in(p, var: int) -> int:
    if not p:
        return -1
    return max(m[var] for m in p.itermonoms())


def support(p) -> set[int]:
    """Indices of the variables occurring in p."""
    used = set()
    for m in p.itermonoms():
        used.update(i for i, e in enumerate(m) if e)
    return used


def coefficients_in(p, var: int) -> dict:
    """View p as univariate in `var`: exponent -> coefficient polynomial free of `var`."""
    R = p.ring
    parts: dict[int, dict] = {}
    for monom, coeff in p.iterterms():
        e = monom[var]
        parts.setdefault(e, {})[monom[:var] + (0,) + monom[var + 1:]] = coeff
    return {e: R.from_dict(terms) for e, terms in parts.items()}


def normalize(p):
    """Primitive over the integers with positive leading coefficient (monic off Q)."""
    if not p:
        return p
    if p.ring.domain.is_QQ or p.ring.domain.is_ZZ:
        _, p = p.clear_denoms()
        _, p = p.primitive()
        if p.LC < 0:
            p = -p
        return p
    return p.monic()


def evaluate(p, point: dict, field):
    """Evaluate at `point` (variable name -> value in `field`), returning a field element."""
    K = field.domain
    names = [str(s) for s in p.ring.symbols]
    values = [field.element(point[n]) if n in point else None for n in names]
    total = K.zero
    for monom, coeff in p.iterterms():
        term = K.convert(coeff, p.ring.domain)
        for v, e in zip(values, monom):
            if e:
                if v is None:
                    raise ValueError("point does not assign every variable that occurs")
                term = term * v**e
        total = total + term
    return total


# =============================================================================
# CONTENT AND FACTORS
# =============================================================================

def content_factor(p, var: int):
    """Split p = content * primitive with respect to `var`."""
    if not p:
        raise ValueError("content of the zero polynomial is undefined")
    coeffs = list(coefficients_in(p, var).values())
    content = normalize(reduce(lambda a, b: a.gcd(b), coeffs))
    return content, p.exquo(content)


@dataclass(frozen=True)
class UnivariateFactor:
    factor: object
    multiplicity: int
    degree: int
    discriminant: Optional[Fraction] = None
    # degree >= 3 factors are irreducible over Q but not split further
    unsplit: bool = False

    @property
    def kind(self) -> str:
        if self.degree == 1:
            return "linear"
        if self.degree == 2:
            return "quadratic"
        return "higher"

    @property
    def splits_over_reals(self) -> Optional[bool]:
        if self.discriminant is None:
            return None
        return self.discriminant > 0


@dataclass(frozen=True)
class Factorization:
    constant: object
    factors: tuple[UnivariateFactor, ...]

    def expand(self):
        ring = self.factors[0].factor.ring if self.factors else None
        result = None
        for f in self.factors:
            term = f.factor**f.multiplicity
            result = term if result is None else result * term
        if result is None:
            return self.constant
        return result.mul_ground(self.constant) if ring is not None else result


def _quadratic_discriminant(f, var: int) -> Fraction:
    coeffs = {m[var]: c for m, c in f.iterterms()}
    a, b, c = (Fraction(str(coeffs.get(k, 0))) for k in (2, 1, 0))
    return b * b - 4 * a * c


def univariate_rational_factors(p) -> Factorization:
    """Exact factorization over Q of a polynomial in at most one variable."""
    used = support(p)
    if len(used) > 1:
        raise ValueError("polynomial is not univariate")
    if not p.ring.domain.is_QQ:
        raise ValueError("univariate factorization is only provided over Q")
    if not used:
        return Factorization(constant=p.LC if p else p.ring.domain.zero, factors=())
    var = next(iter(used))
    _, raw = p.factor_list()
    factors = []
    for f, k in raw:
        f = normalize(f)
        deg = degree_in(f, var)
        disc = _quadratic_discriminant(f, var) if deg == 2 else None
        factors.append(UnivariateFactor(f, k, deg, disc, unsplit=deg >= 3))
    factors.sort(key=lambda u: (u.degree, format_polynomial(u.factor)))
    product = p.ring.one
    for u in factors:
        product *= u.factor**u.multiplicity
    constant = p.LC / product.LC
    return Factorization(constant=constant, factors=tuple(factors))


@lru_cache(maxsize=8192)
def factor_polynomial(p) -> tuple:
    """Normalized irreducible non-constant factors of p with multiplicities.

    Factorization goes through sympy's `factor_list`. Over GF(p) sympy only
    factors in one-variable rings, so there the polynomial is split by content
    extraction and each univariate piece is factored on its own.
    """
    if not p or not support(p):
        return ()
    out: Counter = Counter()
    try:
        _, raw = p.factor_list()
    except NotImplementedError:
        _split(p, out)
    else:
        for f, mult in raw:
            if support(f):
                out[normalize(f)] += mult
    return tuple(sorted(out.items(), key=lambda kv: (total_degree(kv[0]), format_polynomial(kv[0]))))


def _split(p, out: Counter) -> None:
    used = sorted(support(p))
    if not used:
        return
    if len(used) == 1:
        x = p.ring.symbols[used[0]]
        _, raw = sympy.Poly(p.as_expr(), x, domain=p.ring.domain).factor_list()
        for f, k in raw:
            g = p.ring(f.as_expr())
            if support(g):
                out[normalize(g)] += k
        return
    for var in used:
        content, primitive = content_factor(p, var)
        if support(content):
            _split(content, out)
            _split(primitive, out)
            return
    out[normalize(p)] += 1


def is_multivariate(p) -> bool:
    return len(support(p)) > 1
