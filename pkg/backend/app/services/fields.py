"""
Coefficient Fields and Polynomial Rings
=======================================
Exact coefficient fields (rationals, prime fields, simple algebraic
extensions of Q) and polynomial rings over them, backed by sympy's sparse
polynomial rings.

Monomial orders:
- grevlex (default)
- lex
- block:k  two grevlex blocks, the first k variables eliminated first
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Optional

import sympy
from sympy import GF, QQ
from sympy.polys.orderings import ProductOrder, grevlex, lex
from sympy.polys.rings import PolyRing as SympyPolyRing

logger = logging.getLogger(__name__)

VARIABLE_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")

# Internal generator for rings without variables; never serialized.
_PLACEHOLDER = "c__"

WORD_SIZE = 2**63


class FieldError(ValueError):
    """Invalid coefficient field or ring specification."""


class RingMismatchError(ValueError):
    """Polynomials from different rings were combined."""


# =============================================================================
# COEFFICIENT FIELDS
# =============================================================================

@dataclass(frozen=True)
class CoefficientField:
    kind: str = "rationals"  # rationals | prime | extension
    modulus: Optional[int] = None
    minimal_polynomial: Optional[str] = None
    generator: str = "w"
    # Set when irreducibility of the minimal polynomial was not verified
    irreducibility_assumed: bool = field(default=False, compare=False)

    @classmethod
    def rationals(cls) -> "CoefficientField":
        return cls()

    @classmethod
    def prime(cls, p: int) -> "CoefficientField":
        if not (2 <= p < WORD_SIZE) or not sympy.isprime(p):
            raise FieldError(f"modulus must be a word-size prime, got {p}")
        return cls(kind="prime", modulus=p)

    @classmethod
    def extension(cls, minimal_polynomial: str, generator: str = "w") -> "CoefficientField":
        if not VARIABLE_NAME.match(generator):
            raise FieldError(f"bad generator name {generator!r}")
        gen = sympy.Symbol(generator)
        try:
            poly = sympy.Poly(
                sympy.sympify(minimal_polynomial.replace("^", "**"), locals={generator: gen}),
                gen,
                domain=QQ,
            )
        except (sympy.SympifyError, sympy.PolynomialError) as e:
            raise FieldError(f"cannot read minimal polynomial {minimal_polynomial!r}: {e}") from e
        if poly.degree() < 1 or poly.LC() != 1:
            raise FieldError("minimal polynomial must be monic of positive degree")

        assumed = False
        if poly.degree() == 2:
            _, b, c = poly.all_coeffs()
            disc = b * b - 4 * c
            if sympy.sqrt(disc).is_rational:
                raise FieldError(f"{minimal_polynomial} splits over Q (discriminant {disc})")
        elif poly.degree() > 2:
            assumed = True
            logger.info("accepting degree %d minimal polynomial without irreducibility proof", poly.degree())

        text = str(poly.as_expr()).replace("**", "^")
        return cls(kind="extension", minimal_polynomial=text, generator=generator,
                   irreducibility_assumed=assumed)

    @classmethod
    def parse(cls, text: str) -> "CoefficientField":
        """Read 'QQ', 'GF(p)' or 'QQ<w: w^2-w+1>'."""
        text = text.strip()
        if text in {"QQ", "Q", "rationals"}:
            return cls.rationals()
        m = re.fullmatch(r"(?:GF|F)\((\d+)\)", text)
        if m:
            return cls.prime(int(m.group(1)))
        m = re.fullmatch(r"QQ<\s*([A-Za-z][A-Za-z0-9_]*)\s*:\s*(.+)>", text)
        if m:
            return cls.extension(m.group(2), m.group(1))
        raise FieldError(f"unknown field {text!r}")

    def __str__(self) -> str:
        if self.kind == "prime":
            return f"GF({self.modulus})"
        if self.kind == "extension":
            return f"QQ<{self.generator}: {self.minimal_polynomial}>"
        return "QQ"

    @cached_property
    def _defining_poly(self) -> sympy.Poly:
        gen = sympy.Symbol(self.generator)
        expr = sympy.sympify(self.minimal_polynomial.replace("^", "**"), locals={self.generator: gen})
        return sympy.Poly(expr, gen, domain=QQ)

    @cached_property
    def root(self) -> sympy.Expr:
        """The complex root standing for the generator (extensions only)."""
        poly = self._defining_poly
        if poly.degree() <= 2:
            return sorted(sympy.roots(poly, multiple=True), key=sympy.default_sort_key)[0]
        return sympy.CRootOf(poly, 0)

    @cached_property
    def domain(self) -> Any:
        if self.kind == "prime":
            return GF(self.modulus)
        if self.kind == "extension":
            return QQ.algebraic_field(self.root)
        return QQ

    @property
    def is_rationals(self) -> bool:
        return self.kind == "rationals"

    def generator_element(self):
        if self.kind != "extension":
            raise FieldError("only simple extensions have a generator")
        return self.domain.from_sympy(self.root)

    def conjugate_generator(self):
        """The other root of a quadratic minimal polynomial, as a field element."""
        poly = self._defining_poly
        if poly.degree() != 2:
            raise FieldError("conjugation is only provided for quadratic extensions")
        _, b, _ = poly.all_coeffs()
        K = self.domain
        return K.convert(QQ(-int(b.p), int(b.q)), QQ) - self.generator_element()

    def element(self, value: Any):
        """Convert an int, Fraction, 'a/b' string or sympy number into the field."""
        K = self.domain
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, sympy.Basic):
            if self.kind == "extension":
                return K.from_sympy(value)
            value = Fraction(str(sympy.nsimplify(value)))
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return K.convert(value)
        if isinstance(value, Fraction):
            if self.kind == "prime":
                if value.denominator % self.modulus == 0:
                    raise FieldError(f"{value} is not defined modulo {self.modulus}")
                return K(value.numerator) / K(value.denominator)
            return K.convert(QQ(value.numerator, value.denominator), QQ)
        try:
            return K.convert(value)
        except Exception as e:
            raise FieldError(f"cannot convert {value!r} into {self}") from e

    def is_zero(self, value) -> bool:
        return self.domain.is_zero(value)


# =============================================================================
# POLYNOMIAL RINGS
# =============================================================================

@lru_cache(maxsize=None)
def block_order(split: int) -> ProductOrder:
    """Elimination order: grevlex on the first `split` variables, then grevlex on the rest.

    Cached so that equal splits give identical order objects (sympy rings compare orders).
    """
    return ProductOrder(
        (grevlex, lambda m: m[:split]),
        (grevlex, lambda m: m[split:]),
    )


def _order_object(tag: str):
    if tag == "grevlex":
        return grevlex
    if tag == "lex":
        return lex
    m = re.fullmatch(r"block:(\d+)", tag)
    if m:
        return block_order(int(m.group(1)))
    raise FieldError(f"unknown monomial order {tag!r}")


@dataclass(frozen=True)
class PolyRing:
    field: CoefficientField = field(default_factory=CoefficientField)
    variables: tuple[str, ...] = ()
    order: str = "grevlex"

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise FieldError(f"duplicate variable names in {self.variables}")
        for name in self.variables:
            if not VARIABLE_NAME.match(name) or name == _PLACEHOLDER:
                raise FieldError(f"bad variable name {name!r}")
        _order_object(self.order)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @cached_property
    def sympy_ring(self) -> SympyPolyRing:
        symbols = self.variables or (_PLACEHOLDER,)
        return SympyPolyRing(symbols, self.field.domain, _order_object(self.order))

    @property
    def gens(self) -> tuple:
        return tuple(self.sympy_ring.gens[: self.nvars])

    def gen(self, name: str):
        return self.sympy_ring.gens[self.index(name)]

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise FieldError(f"{name!r} is not a variable of this ring") from None

    def zero(self):
        return self.sympy_ring.zero

    def one(self):
        return self.sympy_ring.one

    def constant(self, value):
        return self.sympy_ring.ground_new(self.field.element(value))

    def with_order(self, order: str) -> "PolyRing":
        return PolyRing(self.field, self.variables, order)

    def with_variables(self, variables) -> "PolyRing":
        return PolyRing(self.field, tuple(variables), self.order)

    def owns(self, p) -> bool:
        return p.ring == self.sympy_ring

    def check(self, *polys) -> None:
        for p in polys:
            if not self.owns(p):
                raise RingMismatchError("polynomial belongs to a different ring")

    def convert(self, p):
        """Move a polynomial into this ring (matching variables by name)."""
        if self.owns(p):
            return p
        source = p.ring
        target = self.sympy_ring
        names = [str(s) for s in source.symbols]
        positions = []
        for name in names:
            if name in self.variables:
                positions.append(self.variables.index(name))
            else:
                positions.append(None)
        terms = {}
        K = target.domain
        for monom, coeff in p.iterterms():
            exps = [0] * target.ngens
            for pos, e in zip(positions, monom):
                if e == 0:
                    continue
                if pos is None:
                    raise RingMismatchError("polynomial uses a variable missing from the target ring")
                exps[pos] = e
            key = tuple(exps)
            terms[key] = terms.get(key, K.zero) + K.convert(coeff, source.domain)
        return target.from_dict({m: c for m, c in terms.items() if c})
