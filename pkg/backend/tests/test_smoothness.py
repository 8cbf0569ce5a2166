import itertools
from fractions import Fraction
from math import isqrt

import pytest

from app.config import ResourceCaps
from app.services import gallery
from app.services.fields import CoefficientField, PolyRing
from app.services.groebner import quotient_vector_dimension
from app.services.matroid import Matroid
from app.services.polynomials import (
    format_polynomial,
    is_multivariate,
    normalize,
    parse_many,
    parse_polynomial,
    univariate_rational_factors,
)
from app.services.presentation import (
    SymbolicMatrix,
    build,
    realization_presentation,
    reference_circuits,
    verify_matrix_presentation,
)
from app.services.reduction import invariants_of, reduce
from app.services.smoothness import (
    NO,
    UNDECIDED,
    YES,
    AnalysisUndecided,
    certify_nodes,
    classify,
    component_analysis,
    is_realizable,
    singular_locus,
)


def matrix_presentation(Q, text):
    M = SymbolicMatrix.from_text(text)
    check = verify_matrix_presentation(Q, M)
    assert check.consistent
    return build(M.ring, list(check.ideal.basis), list(check.semigroup))


def is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    return all(isqrt(v) ** 2 == v for v in (q.numerator, q.denominator))


# =============================================================================
# BUILDING BLOCKS
# =============================================================================

def test_realizability(ring_xy):
    ok = build(ring_xy, parse_many(["x - y"], ring_xy), parse_many(["x"], ring_xy))
    empty = build(ring_xy, parse_many(["x*y - x"], ring_xy), parse_many(["x", "y - 1"], ring_xy))
    assert is_realizable(ok) == YES
    assert is_realizable(empty) == NO


def test_realizability_undecided_under_caps(ring_xy):
    P = build(ring_xy, parse_many(["x^2*y - y^3 + x*y^2 - 1", "x^3 + y^3 - 2*x*y"], ring_xy),
              parse_many(["x", "y"], ring_xy))
    assert is_realizable(P, ResourceCaps(max_degree=40, max_basis=1, budget=10)) == UNDECIDED


def test_q_sing_singular_points(q_sing):
    P = matrix_presentation(q_sing, gallery.Q_SING_MATRIX)
    inv = invariants_of(P)
    assert inv.ideal_kind == "principal"

    J = singular_locus(P, inv)
    assert not J.is_unit
    assert quotient_vector_dimension(J).dimension == 2

    analysis = component_analysis(P, inv.principal_generator)
    assert analysis.count == 3
    assert analysis.irreducibility_assumed

    certificates = certify_nodes(P, [c.factor for c in analysis.factors])
    assert all(c.transverse for c in certificates if c.nodes)
    assert sum(c.nodes for c in certificates) == 2


def test_ex_3_10_is_smooth(ex_3_10):
    P = matrix_presentation(ex_3_10, gallery.EX_3_10_MATRIX)
    inv = invariants_of(P)
    assert singular_locus(P, inv).is_unit


def test_component_analysis_drops_inverted_factors(ring_xy):
    P = build(ring_xy, [], parse_many(["x"], ring_xy))
    f = parse_polynomial("x*(y^2 - 2)", ring_xy)
    analysis = component_analysis(P, f)
    assert analysis.count == 2
    assert [format_polynomial(g) for g in analysis.discarded] == ["x"]
    assert not analysis.irreducibility_assumed


def test_singular_locus_needs_principal_ideal():
    ring = PolyRing(CoefficientField.rationals(), ("x", "y", "z"))
    P = build(ring, parse_many(["x*y - z", "x*z - y"], ring), parse_many(["x", "y", "z"], ring))
    inv = invariants_of(P)
    assert inv.ideal_kind == "other"
    with pytest.raises(AnalysisUndecided):
        singular_locus(P, inv)


def test_nodes_need_two_variables():
    ring = PolyRing(CoefficientField.rationals(), ("x",))
    P = build(ring, parse_many(["x^2 - 1"], ring), [])
    with pytest.raises(AnalysisUndecided):
        certify_nodes(P, parse_many(["x - 1", "x + 1"], ring))


# =============================================================================
# CLASSIFY
# =============================================================================

def test_classify_uniform():
    report = classify(Matroid.uniform(2, 4))
    assert (report.realizable, report.smooth) == (YES, YES)
    assert report.ideal_kind == "zero"
    assert report.component_count == 1
    assert report.dimension == 1
    assert report.reference == [1, 2, 3]


def test_classify_ex_3_9(ex_3_9):
    report = classify(ex_3_9)
    assert (report.realizable, report.smooth) == (YES, YES)
    assert report.principal_generator == "x7^2 + 1"
    assert report.component_count == 2
    assert report.dimension == 0
    assert not report.undecided
    data = report.to_json()
    assert data["reduction"]["result"]["vars"] == ["x7"]


def test_classify_disconnected_uses_stratum():
    Q = Matroid.uniform(1, 2).direct_sum(Matroid.uniform(1, 2))
    report = classify(Q)
    assert report.presentation_kind == "stratum"
    assert report.realizable == YES
    assert any("disconnected" in note for note in report.notes)


def test_classify_undecided_under_tight_caps(ex_3_9):
    report = classify(ex_3_9, ResourceCaps(max_degree=40, max_basis=1, budget=50), max_circuits=2)
    assert report.undecided
    assert report.reasons
    assert report.attempts == 2


@pytest.mark.slow
def test_classify_q_sing(q_sing):
    report = classify(q_sing)
    assert (report.realizable, report.smooth) == (YES, NO)
    assert report.ideal_kind == "principal"
    assert report.component_count == 3
    assert report.nodes == 2
    assert report.dimension == 1


@pytest.mark.slow
def test_classify_ex_3_10(ex_3_10):
    report = classify(ex_3_10)
    assert (report.realizable, report.smooth) == (YES, YES)
    assert report.singular_dimension == 0
    assert not report.undecided


@pytest.mark.slow
def test_q_sing_answers_do_not_depend_on_reference_circuit(q_sing):
    answers = []
    for ref in itertools.islice(reference_circuits(q_sing), 4):
        R = reduce(realization_presentation(q_sing, ref)).result
        inv = invariants_of(R)
        if inv.ideal_kind != "principal":
            continue
        smooth = singular_locus(R, inv).is_unit
        answers.append((smooth, component_analysis(R, inv.principal_generator).count))
    assert answers
    assert set(answers) == {(False, 3)}

    report = classify(q_sing, max_circuits=4)
    assert (report.smooth, report.component_count) == (NO, 3)


@pytest.mark.slow
def test_classify_f2_eight_points(f2_eight):
    report = classify(f2_eight)
    assert report.presentation_kind == "stratum"
    assert report.realizable == NO
    assert report.component_count == 0


@pytest.mark.slow
@pytest.mark.parametrize("row", gallery.table_rows(), ids=lambda r: r.name)
def test_table_rows_are_two_points_of_a_quadratic(row):
    report = classify(gallery.table_row(row))
    assert (report.realizable, report.smooth) == (YES, YES)
    assert report.component_count == 2

    R = report.trace.result
    f = normalize(parse_polynomial(report.principal_generator, R.ring))
    assert not is_multivariate(f)
    found = univariate_rational_factors(f).factors[0].discriminant

    ring = PolyRing(CoefficientField.rationals(), ("x",))
    listed = univariate_rational_factors(parse_polynomial(row.polynomial, ring)).factors[0].discriminant
    # same splitting field Q(sqrt(disc))
    assert is_rational_square(Fraction(found) / Fraction(listed))
