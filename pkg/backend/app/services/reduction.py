"""
Reduction Engine
================
Shrinks a presentation U^-1 B / I by eliminating variables with generators
of the form c*x + r, where c is a unit of the localization and x does not
occur in r or c.

- substitution is fraction free: h -> sum_e h_e (-r)^e c^(m-e)
- semigroup factors are stripped from ideal generators before every scan
- when no generator applies, one saturation pass runs and the scan resumes
- every step is recorded; `replay` re-applies a trace and `lift` maps points
  of the reduced space back to the original coordinates
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from app.config import ResourceCaps, default_caps
from app.services.fields import PolyRing
from app.services.groebner import Ideal, ResourceLimitExceeded, saturate_by
from app.services.polynomials import (
    coefficients_in,
    degree_in,
    evaluate,
    factor_polynomial,
    format_polynomial,
    normalize,
    total_degree,
)
from app.services.presentation import Presentation, normalize_ideal

logger = logging.getLogger(__name__)


# =============================================================================
# TRACE
# =============================================================================

@dataclass(frozen=True)
class ReductionStep:
    kind: str  # eliminate | saturate
    variable: Optional[str] = None
    generator: object = None
    coefficient: object = None
    remainder: object = None

    def to_json(self) -> dict:
        if self.kind == "saturate":
            return {"kind": "saturate"}
        return {
            "kind": "eliminate",
            "variable": self.variable,
            "generator": format_polynomial(self.generator),
            "substitution": {
                "numerator": format_polynomial(-self.remainder),
                "denominator": format_polynomial(self.coefficient),
            },
        }


@dataclass(frozen=True)
class ReductionTrace:
    source: Presentation
    steps: tuple[ReductionStep, ...]
    result: Presentation
    stopped: str = "done"  # done | budget | resource | empty

    @property
    def eliminated(self) -> list[str]:
        return [s.variable for s in self.steps if s.kind == "eliminate"]

    def to_json(self) -> dict:
        return {
            "before": {"vars": self.source.num_vars, "ideal": len(self.source.ideal_gens)},
            "after": {"vars": self.result.num_vars, "ideal": len(self.result.ideal_gens)},
            "steps": [s.to_json() for s in self.steps],
            "stopped": self.stopped,
            "result": self.result.to_json(),
        }


# =============================================================================
# STATE
# =============================================================================

def _text(p) -> str:
    return format_polynomial(p)


def _scan_key(p) -> tuple:
    return (total_degree(p), _text(p))


@dataclass
class _State:
    ring: PolyRing
    ideal: list
    semigroup: dict  # normalized text -> factor
    eliminated: list = field(default_factory=list)
    empty: bool = False

    @classmethod
    def of(cls, P: Presentation) -> "_State":
        state = cls(P.ring, [], {_text(s): s for s in P.semigroup_gens})
        state.set_ideal(P.ideal_gens)
        return state

    def strip(self, h):
        """Remove every factor of h that is already inverted."""
        for f, mult in factor_polynomial(h):
            if _text(f) in self.semigroup:
                h = h.exquo(f**mult)
        return h

    def set_ideal(self, gens) -> None:
        stripped = [self.strip(g) for g in gens if g]
        if any(g.is_ground for g in stripped):
            self.empty = True
            self.ideal = [self.ring.one()]
            return
        self.ideal = sorted(normalize_ideal(stripped), key=_scan_key)

    def is_unit(self, c) -> bool:
        if not c:
            return False
        return c.is_ground or all(_text(f) in self.semigroup for f, _ in factor_polynomial(c))

    def find_pivot(self):
        for g in self.ideal:
            for k, name in enumerate(self.ring.variables):
                if name in self.eliminated or degree_in(g, k) != 1:
                    continue
                parts = coefficients_in(g, k)
                c = parts[1]
                if self.is_unit(c):
                    return g, k, c, parts.get(0, self.ring.zero())
        return None

    def substitute(self, h, k: int, c, r):
        parts = coefficients_in(h, k)
        m = max(parts)
        out = self.ring.zero()
        for e, he in parts.items():
            out += he * (-r) ** e * c ** (m - e)
        return out

    def eliminate(self, g, k: int, c, r) -> None:
        self.eliminated.append(self.ring.variables[k])
        new_factors = {}
        for s in self.semigroup.values():
            if degree_in(s, k) <= 0:
                new_factors[_text(s)] = s
                continue
            image = self.substitute(s, k, c, r)
            if not image:
                self.empty = True
                self.ideal = [self.ring.one()]
                return
            for f, _ in factor_polynomial(image):
                new_factors[_text(f)] = f
        self.semigroup = new_factors
        self.set_ideal([self.substitute(h, k, c, r) for h in self.ideal if h != g])

    def saturate(self, caps: ResourceCaps) -> bool:
        """One saturation pass; True when the generators changed."""
        sat = saturate_by(Ideal.of(self.ring, self.ideal), list(self.semigroup.values()), caps)
        before = [_text(g) for g in self.ideal]
        self.set_ideal(list(sat.basis))
        return [_text(g) for g in self.ideal] != before

    def presentation(self, source: Presentation) -> Presentation:
        survivors = tuple(v for v in self.ring.variables if v not in self.eliminated)
        ring = PolyRing(self.ring.field, survivors, self.ring.order)
        provenance = dict(source.provenance, eliminated=list(self.eliminated))
        if self.empty:
            return Presentation(ring, (ring.one(),), (), provenance)
        semigroup = sorted((ring.convert(s) for s in self.semigroup.values()), key=_scan_key)
        ideal = [ring.convert(g) for g in self.ideal]
        return Presentation(ring, tuple(ideal), tuple(semigroup), provenance)


# =============================================================================
# OPERATIONS
# =============================================================================

def reduce(P: Presentation, budget: Optional[int] = None, caps: Optional[ResourceCaps] = None) -> ReductionTrace:
    caps = caps or default_caps()
    budget = caps.budget if budget is None else budget
    state = _State.of(P)
    steps: list[ReductionStep] = []
    stopped = "done"
    saturated = False
    while not state.empty:
        if len(steps) >= budget:
            stopped = "budget"
            break
        pivot = state.find_pivot()
        if pivot is not None:
            g, k, c, r = pivot
            steps.append(ReductionStep("eliminate", state.ring.variables[k], g, c, r))
            state.eliminate(g, k, c, r)
            saturated = False
            continue
        if saturated or not state.ideal:
            break
        try:
            changed = state.saturate(caps)
        except ResourceLimitExceeded as e:
            logger.info("reduction stopped: %s", e)
            stopped = "resource"
            break
        saturated = True
        if changed or state.empty:
            steps.append(ReductionStep("saturate"))
    if state.empty:
        stopped = "empty"
    result = state.presentation(P)
    logger.debug("reduced %d -> %d variables in %d steps", P.num_vars, result.num_vars, len(steps))
    return ReductionTrace(P, tuple(steps), result, stopped)


def replay(trace: ReductionTrace, caps: Optional[ResourceCaps] = None) -> Presentation:
    """Re-apply the recorded steps to the source presentation."""
    caps = caps or default_caps()
    state = _State.of(trace.source)
    for step in trace.steps:
        if state.empty:
            break
        if step.kind == "saturate":
            state.saturate(caps)
        else:
            k = state.ring.index(step.variable)
            state.eliminate(step.generator, k, step.coefficient, step.remainder)
    return state.presentation(trace.source)


def lift(trace: ReductionTrace, point: dict) -> dict:
    """Extend a point of the reduced space to the source coordinates."""
    fld = trace.source.ring.field
    values = {name: fld.element(v) for name, v in point.items()}
    for step in reversed(trace.steps):
        if step.kind != "eliminate":
            continue
        c = evaluate(step.coefficient, values, fld)
        if fld.is_zero(c):
            raise ValueError(f"denominator of {step.variable} vanishes at the point")
        values[step.variable] = -evaluate(step.remainder, values, fld) / c
    return values


# =============================================================================
# INVARIANTS
# =============================================================================

@dataclass(frozen=True)
class PresentationInvariants:
    num_vars: int
    ideal_kind: str  # zero | principal | other
    is_unit: bool
    principal_generator: object = None
    saturated: Optional[Ideal] = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "ideal_kind": self.ideal_kind,
            "is_unit": self.is_unit,
            "principal_generator": (
                format_polynomial(self.principal_generator) if self.principal_generator is not None else None
            ),
        }


def invariants_of(P: Presentation, caps: Optional[ResourceCaps] = None) -> PresentationInvariants:
    """Shape of the saturated ideal; raises ResourceLimitExceeded when a cap is hit."""
    sat = P.saturated(caps)
    if not sat.basis:
        return PresentationInvariants(P.num_vars, "zero", False, None, sat)
    if sat.is_unit:
        return PresentationInvariants(P.num_vars, "principal", True, P.ring.one(), sat)
    if len(sat.basis) == 1:
        return PresentationInvariants(P.num_vars, "principal", False, normalize(sat.basis[0]), sat)
    return PresentationInvariants(P.num_vars, "other", False, None, sat)
