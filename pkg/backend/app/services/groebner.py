"""
Groebner Bases
==============
Buchberger's algorithm over sympy sparse polynomials with:
- Gebauer-Moeller pair elimination
- normal selection strategy
- hard caps on basis size and total degree (ResourceLimitExceeded)

Built on top: normal forms, saturation, elimination and the analysis of
the quotient ring (vector dimension, standard monomials, Krull dimension).
"""

import itertools
import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from app.config import ResourceCaps, default_caps
from app.services.fields import PolyRing
from app.services.polynomials import format_polynomial, total_degree

logger = logging.getLogger(__name__)


class ResourceLimitExceeded(Exception):
    """A configured cap stopped the computation; the answer is unknown."""

    def __init__(self, what: str, limit: int):
        super().__init__(f"{what} exceeded cap {limit}")
        self.what = what
        self.limit = limit


# =============================================================================
# IDEALS
# =============================================================================

@dataclass(frozen=True)
class Ideal:
    ring: PolyRing
    generators: tuple = ()
    basis: Optional[tuple] = field(default=None, compare=False)

    @classmethod
    def of(cls, ring: PolyRing, gens: Iterable) -> "Ideal":
        gens = tuple(g for g in gens if g)
        ring.check(*gens)
        return cls(ring, gens)

    @property
    def has_basis(self) -> bool:
        return self.basis is not None

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_unit(self) -> bool:
        if self.basis is None:
            raise ValueError("call groebner_basis first")
        return len(self.basis) == 1 and self.basis[0].is_ground

    def same_as(self, other: "Ideal") -> bool:
        """Equality as ideals: identical reduced bases in the same ring."""
        if self.basis is None or other.basis is None:
            raise ValueError("both ideals need reduced bases")
        return self.ring == other.ring and list(self.basis) == list(other.basis)

    def to_strings(self) -> list[str]:
        return [format_polynomial(p) for p in (self.basis if self.basis is not None else self.generators)]


# =============================================================================
# BUCHBERGER
# =============================================================================

def _spoly(f, g):
    R = f.ring
    lcm = R.monomial_lcm(f.LM, g.LM)
    return f.mul_monom(R.monomial_div(lcm, f.LM)) - g.mul_monom(R.monomial_div(lcm, g.LM))


def _select(G, P):
    """Normal strategy: the pair with the smallest lcm of leading monomials."""
    R = G[0].ring
    return min(P, key=lambda p: R.order(R.monomial_lcm(G[p[0]].LM, G[p[1]].LM)))


def _update(G, P, f):
    """Add f to G and the surviving new pairs to P (Gebauer-Moeller)."""
    R = f.ring
    lcm, mul, div = R.monomial_lcm, R.monomial_mul, R.monomial_div
    lmf = f.LM

    def can_drop(p):
        i, j = p
        gam = lcm(G[i].LM, G[j].LM)
        return div(gam, lmf) is not None and gam != lcm(G[i].LM, lmf) and gam != lcm(G[j].LM, lmf)

    P[:] = [p for p in P if not can_drop(p)]

    lcms: dict = {}
    for i in range(len(G)):
        lcms.setdefault(lcm(G[i].LM, lmf), []).append(i)
    min_lcms = []
    fresh = []
    for gam in sorted(lcms, key=R.order):
        if all(div(gam, m) is None for m in min_lcms):
            min_lcms.append(gam)
            if not any(lcm(G[i].LM, lmf) == mul(G[i].LM, lmf) for i in lcms[gam]):
                fresh.append((lcms[gam][0], len(G)))
    P.extend(fresh)
    G.append(f)


def _minimalize(G):
    R = G[0].ring
    kept = []
    for f in sorted(G, key=lambda h: R.order(h.LM)):
        if all(R.monomial_div(f.LM, g.LM) is None for g in kept):
            kept.append(f)
    return kept


def _interreduce(G):
    reduced = []
    for i, g in enumerate(G):
        r = g.rem(G[:i] + G[i + 1:])
        reduced.append(r.monic())
    return reduced


def _check_caps(G, r, caps: ResourceCaps):
    if len(G) >= caps.max_basis:
        raise ResourceLimitExceeded("basis size", caps.max_basis)
    deg = total_degree(r)
    if deg > caps.max_degree:
        raise ResourceLimitExceeded("total degree", caps.max_degree)


def buchberger(polys: Sequence, caps: Optional[ResourceCaps] = None) -> list:
    """Reduced Groebner basis (sorted by decreasing leading monomial) of nonzero `polys`."""
    caps = caps or default_caps()
    polys = [p for p in polys if p]
    if not polys:
        return []
    R = polys[0].ring
    if any(p.is_ground for p in polys):
        return [R.one]
    if max(total_degree(p) for p in polys) > caps.max_degree:
        raise ResourceLimitExceeded("total degree", caps.max_degree)

    G: list = []
    P: list = []
    for f in polys:
        _update(G, P, f.monic())
    while P:
        i, j = _select(G, P)
        P.remove((i, j))
        r = _spoly(G[i], G[j]).rem(G)
        if r:
            if r.is_ground:
                return [R.one]
            _check_caps(G, r, caps)
            _update(G, P, r.monic())
    basis = _interreduce(_minimalize(G))
    basis.sort(key=lambda p: R.order(p.LM), reverse=True)
    logger.debug("groebner basis of %d generators has %d elements", len(polys), len(basis))
    return basis


def groebner_basis(I: Ideal, caps: Optional[ResourceCaps] = None) -> Ideal:
    if I.basis is not None:
        return I
    return replace(I, basis=tuple(buchberger(list(I.generators), caps)))


def normal_form(p, I: Ideal):
    if I.basis is None:
        raise ValueError("normal_form needs a reduced basis; call groebner_basis first")
    I.ring.check(p)
    if not I.basis:
        return p
    return p.rem(list(I.basis))


def contains(I: Ideal, p, caps: Optional[ResourceCaps] = None) -> bool:
    return not normal_form(p, groebner_basis(I, caps))


# =============================================================================
# SATURATION AND ELIMINATION
# =============================================================================

def _fresh(names: Sequence[str], stem: str) -> str:
    k = 0
    while f"{stem}{k}" in names:
        k += 1
    return f"{stem}{k}"


def eliminate(I: Ideal, names: Iterable[str], caps: Optional[ResourceCaps] = None) -> Ideal:
    """I intersected with the subring on the remaining variables."""
    ring = I.ring
    drop = [v for v in ring.variables if v in set(names)]
    keep = [v for v in ring.variables if v not in set(names)]
    sub = PolyRing(ring.field, tuple(keep), "grevlex" if ring.order.startswith("block") else ring.order)
    if not drop:
        return groebner_basis(Ideal.of(sub, [sub.convert(g) for g in I.generators]), caps)
    big = PolyRing(ring.field, tuple(drop + keep), f"block:{len(drop)}")
    basis = buchberger([big.convert(g) for g in I.generators], caps)
    k = len(drop)
    kept = [sub.convert(p) for p in basis if all(not any(m[:k]) for m in p.itermonoms())]
    return groebner_basis(Ideal.of(sub, kept), caps)


def saturate(I: Ideal, g, caps: Optional[ResourceCaps] = None) -> Ideal:
    """I : g^infinity via one auxiliary variable z and the relation g*z - 1."""
    if not g:
        raise ValueError("cannot saturate by zero")
    ring = I.ring
    ring.check(g)
    I = groebner_basis(I, caps)
    if g.is_ground or not I.basis or I.is_unit:
        return I
    aux = _fresh(ring.variables, "zsat")
    big = PolyRing(ring.field, (aux,) + ring.variables, "block:1")
    z = big.gen(aux)
    gens = [big.convert(p) for p in I.basis] + [big.convert(g) * z - 1]
    basis = buchberger(gens, caps)
    kept = [ring.convert(p) for p in basis if all(m[0] == 0 for m in p.itermonoms())]
    return groebner_basis(Ideal.of(ring, kept), caps)


def saturate_by(I: Ideal, gens: Iterable, caps: Optional[ResourceCaps] = None) -> Ideal:
    """Saturation by the product of `gens`, one factor at a time."""
    I = groebner_basis(I, caps)
    for g in gens:
        if I.is_zero or I.is_unit:
            break
        I = saturate(I, g, caps)
    return I


# =============================================================================
# QUOTIENT RING ANALYSIS
# =============================================================================

@dataclass(frozen=True)
class QuotientDimension:
    dimension: Optional[int]  # None when infinite
    standard_monomials: tuple[str, ...]
    krull_dimension: int

    @property
    def is_finite(self) -> bool:
        return self.dimension is not None

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "standard_monomials": list(self.standard_monomials),
            "krull_dimension": self.krull_dimension,
        }


def _monomial_text(names, exps) -> str:
    parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]
    return "*".join(parts) or "1"


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def quotient_vector_dimension(I: Ideal) -> QuotientDimension:
    if I.basis is None:
        raise ValueError("quotient_vector_dimension needs a reduced basis")
    n = I.ring.nvars
    if I.basis and I.is_unit:
        return QuotientDimension(0, (), -1)
    leads = [p.LM[:n] for p in I.basis]

    krull = 0
    for size in range(n, -1, -1):
        if any(
            not any(all(lm[k] == 0 for k in range(n) if k not in subset) for lm in leads)
            for subset in map(set, itertools.combinations(range(n), size))
        ):
            krull = size
            break

    bounds = []
    for k in range(n):
        pure = [lm[k] for lm in leads if lm[k] and all(lm[j] == 0 for j in range(n) if j != k)]
        if not pure:
            return QuotientDimension(None, (), krull)
        bounds.append(min(pure))

    names = I.ring.variables
    standard = [
        exps for exps in itertools.product(*(range(b) for b in bounds))
        if not any(_divides(lm, exps) for lm in leads)
    ]
    standard.sort(key=lambda e: (sum(e), tuple(reversed(e))))
    return QuotientDimension(len(standard), tuple(_monomial_text(names, e) for e in standard), krull)
