"""
Smoothness Analyzer
===================
Realizability, smoothness, component counts and node certificates for
reduced presentations, and the end-to-end `classify` pipeline:

    reference circuit -> presentation -> reduce -> saturate
        -> singular locus -> components -> nodes

Verdicts are "yes" / "no" / "undecided"; undecided always carries a reason.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Optional

from app.config import MAX_REFERENCE_CIRCUITS, ResourceCaps, default_caps
from app.services.groebner import (
    Ideal,
    ResourceLimitExceeded,
    groebner_basis,
    quotient_vector_dimension,
    saturate_by,
)
from app.services.matroid import Matroid
from app.services.polynomials import (
    factor_polynomial,
    format_polynomial,
    is_multivariate,
    partial_derivative,
    total_degree,
)
from app.services.presentation import (
    Presentation,
    realization_presentation,
    reference_circuits,
    stratum_presentation,
)
from app.services.reduction import PresentationInvariants, ReductionTrace, invariants_of, reduce

logger = logging.getLogger(__name__)

YES, NO, UNDECIDED = "yes", "no", "undecided"


class AnalysisUndecided(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


# =============================================================================
# REALIZABILITY AND SINGULAR LOCUS
# =============================================================================

def is_realizable(P: Presentation, caps: Optional[ResourceCaps] = None) -> str:
    try:
        sat = P.saturated(caps)
    except ResourceLimitExceeded as e:
        logger.info("realizability undecided: %s", e)
        return UNDECIDED
    return NO if sat.is_unit else YES


def _unit_ideal(P: Presentation, caps) -> Ideal:
    return groebner_basis(Ideal.of(P.ring, [P.ring.one()]), caps)


def singular_locus(P: Presentation, invariants: PresentationInvariants,
                   caps: Optional[ResourceCaps] = None) -> Ideal:
    """<f, df/dx_1, ..., df/dx_m> saturated by the semigroup; <1> for a zero ideal."""
    if invariants.ideal_kind == "zero":
        return _unit_ideal(P, caps)
    if invariants.ideal_kind != "principal":
        raise AnalysisUndecided("ideal is neither zero nor principal")
    f = invariants.principal_generator
    jacobian = [f] + [partial_derivative(f, k) for k in range(P.num_vars)]
    return saturate_by(Ideal.of(P.ring, jacobian), P.semigroup_gens, caps)


# =============================================================================
# COMPONENTS
# =============================================================================

@dataclass(frozen=True)
class ComponentFactor:
    factor: object
    multiplicity: int
    degree: int
    components: int
    multivariate: bool

    def to_json(self) -> dict:
        return {
            "factor": format_polynomial(self.factor),
            "multiplicity": self.multiplicity,
            "degree": self.degree,
            "components": self.components,
            "multivariate": self.multivariate,
        }


@dataclass(frozen=True)
class ComponentAnalysis:
    factors: tuple[ComponentFactor, ...]
    count: int
    irreducibility_assumed: bool
    discarded: tuple = ()

    def to_json(self) -> dict:
        return {
            "factors": [f.to_json() for f in self.factors],
            "component_count": self.count,
            "irreducibility_assumed": self.irreducibility_assumed,
            "discarded_units": [format_polynomial(g) for g in self.discarded],
        }


def component_analysis(P: Presentation, f) -> ComponentAnalysis:
    """Count components over C of V(f) in the localized space from factors over Q."""
    inverted = {format_polynomial(s) for s in P.semigroup_gens}
    kept, discarded = [], []
    assumed = False
    for g, mult in factor_polynomial(f):
        if format_polynomial(g) in inverted:
            discarded.append(g)
            continue
        if is_multivariate(g):
            assumed = True
            kept.append(ComponentFactor(g, mult, total_degree(g), 1, True))
        else:
            # irreducible over Q, hence separable: one component per complex root
            deg = total_degree(g)
            kept.append(ComponentFactor(g, mult, deg, deg, False))
    return ComponentAnalysis(tuple(kept), sum(c.components for c in kept), assumed, tuple(discarded))


# =============================================================================
# NODES
# =============================================================================

@dataclass(frozen=True)
class NodeCertificate:
    pair: tuple
    intersection_dimension: Optional[int]
    transverse: bool
    outside_space: tuple
    nodes: int

    def to_json(self) -> dict:
        return {
            "pair": [format_polynomial(p) for p in self.pair],
            "intersection_dimension": self.intersection_dimension,
            "transverse": self.transverse,
            "outside_space": [format_polynomial(g) for g in self.outside_space],
            "nodes": self.nodes,
        }


def _is_unit_mod(J: Ideal, g, caps) -> bool:
    return groebner_basis(Ideal.of(J.ring, list(J.basis) + [g]), caps).is_unit


def certify_nodes(P: Presentation, factors: list, caps: Optional[ResourceCaps] = None) -> list[NodeCertificate]:
    """Pairwise transversality of branches in a 2-variable presentation."""
    caps = caps or default_caps()
    if P.num_vars != 2:
        raise AnalysisUndecided("node certificates need exactly two variables")
    out = []
    for f1, f2 in itertools.combinations(factors, 2):
        J = groebner_basis(Ideal.of(P.ring, [f1, f2]), caps)
        if J.is_unit:
            out.append(NodeCertificate((f1, f2), 0, True, (), 0))
            continue
        dim = quotient_vector_dimension(J).dimension
        det = partial_derivative(f1, 0) * partial_derivative(f2, 1) - partial_derivative(f1, 1) * partial_derivative(f2, 0)
        outside = tuple(g for g in P.semigroup_gens if not _is_unit_mod(J, g, caps))
        local = saturate_by(J, P.semigroup_gens, caps) if outside else J
        if local.is_unit:
            out.append(NodeCertificate((f1, f2), dim, True, outside, 0))
            continue
        transverse = dim is not None and _is_unit_mod(local, det, caps)
        nodes = quotient_vector_dimension(local).dimension if transverse else 0
        out.append(NodeCertificate((f1, f2), dim, transverse, outside, nodes or 0))
    return out


# =============================================================================
# CLASSIFICATION
# =============================================================================

@dataclass
class ClassificationReport:
    matroid: str
    d: int
    n: int
    presentation_kind: str = "realization"  # realization | stratum
    reference: Optional[list] = None
    realizable: str = UNDECIDED
    smooth: str = UNDECIDED
    dimension: Optional[int] = None
    component_count: Optional[int] = None
    irreducibility_assumed: bool = False
    principal_generator: Optional[str] = None
    ideal_kind: Optional[str] = None
    singular_dimension: Optional[int] = None
    nodes: Optional[int] = None
    components: Optional[ComponentAnalysis] = None
    certificates: list = field(default_factory=list)
    reasons: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    attempts: int = 0
    trace: Optional[ReductionTrace] = field(default=None, repr=False)

    @property
    def undecided(self) -> bool:
        return UNDECIDED in (self.realizable, self.smooth)

    def to_json(self) -> dict:
        return {
            "matroid": self.matroid,
            "d": self.d,
            "n": self.n,
            "presentation_kind": self.presentation_kind,
            "reference": self.reference,
            "realizable": self.realizable,
            "smooth": self.smooth,
            "dimension": self.dimension,
            "component_count": self.component_count,
            "irreducibility_assumed": self.irreducibility_assumed,
            "ideal_kind": self.ideal_kind,
            "principal_generator": self.principal_generator,
            "singular_points": {
                "quotient_dimension": self.singular_dimension,
                "nodes": self.nodes,
                "certificates": [c.to_json() for c in self.certificates],
            },
            "components": self.components.to_json() if self.components else None,
            "reasons": self.reasons,
            "notes": self.notes,
            "attempts": self.attempts,
            "reduction": self.trace.to_json() if self.trace else None,
        }


def _presentations(Q: Matroid, report: ClassificationReport, limit: int):
    """Realization presentations for the first `limit` reference circuits, else the stratum."""
    refs = []
    if Q.is_connected():
        refs = list(itertools.islice(reference_circuits(Q), limit))
    else:
        report.notes.append("matroid is disconnected; using the stratum presentation")
    if not refs:
        if Q.is_connected():
            report.notes.append(
                f"no circuit of size {Q.d + 1}; stratum presentation, dim R = dim Gr - (n - 1)"
            )
        report.presentation_kind = "stratum"
        P = stratum_presentation(Q)
        yield P, P.provenance["reference"]
        return
    for ref in refs:
        yield realization_presentation(Q, ref), list(ref.circuit)


def classify(Q: Matroid, caps: Optional[ResourceCaps] = None,
             max_circuits: int = MAX_REFERENCE_CIRCUITS) -> ClassificationReport:
    caps = caps or default_caps()
    report = ClassificationReport(Q.name or f"({Q.d},{Q.n})", Q.d, Q.n)

    chosen = None
    for P, reference in _presentations(Q, report, max_circuits):
        report.attempts += 1
        trace = reduce(P, caps=caps)
        try:
            inv = invariants_of(trace.result, caps)
        except ResourceLimitExceeded as e:
            report.reasons.append(f"resource: {e}")
            chosen = chosen or (trace, None, reference)
            continue
        chosen = (trace, inv, reference)
        if inv.ideal_kind != "other":
            break

    trace, inv, report.reference = chosen
    report.trace = trace
    if inv is None:
        return report
    R = trace.result
    report.ideal_kind = inv.ideal_kind
    report.reasons = []

    if inv.is_unit:
        report.realizable, report.smooth, report.component_count = NO, YES, 0
        report.notes.append("empty realization space; smooth vacuously")
        return report
    report.realizable = YES
    report.dimension = quotient_vector_dimension(inv.saturated).krull_dimension

    if inv.ideal_kind == "zero":
        report.smooth, report.component_count, report.singular_dimension = YES, 1, 0
        return report
    if inv.ideal_kind == "other":
        report.reasons.append("ideal_kind other")
        return report

    f = inv.principal_generator
    report.principal_generator = format_polynomial(f)
    try:
        J = singular_locus(R, inv, caps)
        analysis = component_analysis(R, f)
    except ResourceLimitExceeded as e:
        report.reasons.append(f"resource: {e}")
        return report
    report.components = analysis
    report.component_count = analysis.count
    report.irreducibility_assumed = analysis.irreducibility_assumed
    if J.is_unit:
        report.smooth, report.singular_dimension = YES, 0
        return report

    report.smooth = NO
    report.singular_dimension = quotient_vector_dimension(J).dimension
    if R.num_vars == 2:
        try:
            report.certificates = certify_nodes(R, [c.factor for c in analysis.factors], caps)
            report.nodes = sum(c.nodes for c in report.certificates)
        except ResourceLimitExceeded as e:
            report.notes.append(f"node certification stopped: {e}")
    logger.info("%s: smooth=%s components=%s", report.matroid, report.smooth, report.component_count)
    return report
