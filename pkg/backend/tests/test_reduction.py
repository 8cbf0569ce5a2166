import pytest

from app.config import ResourceCaps
from app.services.fields import CoefficientField, PolyRing
from app.services.matroid import Matroid
from app.services.polynomials import format_polynomial, parse_many
from app.services.presentation import build, realization_presentation
from app.services.reduction import invariants_of, lift, reduce, replay


def texts(polys):
    return sorted(format_polynomial(p) for p in polys)


@pytest.fixture
def linear_pair(ring_xy):
    """<x - y, y^2 - 1> with x inverted."""
    return build(ring_xy, parse_many(["x - y", "y^2 - 1"], ring_xy), parse_many(["x"], ring_xy))


def test_eliminates_linear_variable(linear_pair):
    trace = reduce(linear_pair)
    assert trace.stopped == "done"
    assert trace.eliminated == ["x"]
    assert trace.result.variables == ("y",)
    assert texts(trace.result.ideal_gens) == ["y^2 - 1"]
    assert texts(trace.result.semigroup_gens) == ["y"]
    assert trace.result.provenance["eliminated"] == ["x"]


def test_trace_json(linear_pair):
    data = reduce(linear_pair).to_json()
    assert data["before"] == {"vars": 2, "ideal": 2}
    assert data["after"] == {"vars": 1, "ideal": 1}
    step = data["steps"][0]
    assert step["variable"] == "x"
    assert step["substitution"] == {"numerator": "y", "denominator": "1"}


def test_lift_recovers_eliminated_coordinate(linear_pair):
    point = lift(reduce(linear_pair), {"y": -1})
    assert point["x"] == -1
    assert point["y"] == -1


def test_replay_matches(linear_pair):
    trace = reduce(linear_pair)
    assert replay(trace) == trace.result


def test_budget_stops_early(linear_pair):
    trace = reduce(linear_pair, budget=0)
    assert trace.stopped == "budget"
    assert trace.steps == ()
    assert trace.result.variables == ("x", "y")


def test_inverted_generator_empties_space(ring_xy):
    x = parse_many(["x"], ring_xy)
    trace = reduce(build(ring_xy, x, x))
    assert trace.stopped == "empty"
    assert trace.result.is_unit_ideal


def test_stripping_unlocks_pivot(ring_xy):
    # x*(y - 1) with x inverted strips to y - 1
    P = build(ring_xy, parse_many(["x*y - x"], ring_xy), parse_many(["x"], ring_xy))
    trace = reduce(P)
    assert trace.eliminated == ["y"]
    assert trace.result.variables == ("x",)
    assert trace.result.ideal_gens == ()


def test_pivot_coefficient_may_be_one_factor_of_an_inverted_product():
    R = PolyRing(CoefficientField.rationals(), ("x", "y", "z"))
    P = build(R, parse_many(["(x - y)*z - 1"], R), parse_many(["x^2 - y^2"], R))
    assert texts(P.semigroup_gens) == ["x + y", "x - y"]
    trace = reduce(P)
    assert trace.eliminated == ["z"]
    assert trace.result.variables == ("x", "y")
    assert trace.result.ideal_gens == ()
    assert trace.to_json()["steps"][0]["substitution"]["denominator"] == "x - y"


def test_uniform_has_nothing_to_reduce():
    P = realization_presentation(Matroid.uniform(2, 4))
    trace = reduce(P)
    assert trace.stopped == "done"
    assert trace.steps == ()
    assert invariants_of(trace.result).ideal_kind == "zero"


def test_ex_3_9_reduces_to_quadratic(ex_3_9):
    trace = reduce(realization_presentation(ex_3_9))
    assert trace.stopped == "done"
    assert trace.result.variables == ("x7",)
    assert texts(trace.result.ideal_gens) == ["x7^2 + 1"]
    assert set(texts(trace.result.semigroup_gens)) == {"x7", "x7 - 1", "x7 + 1"}

    inv = invariants_of(trace.result)
    assert inv.ideal_kind == "principal"
    assert format_polynomial(inv.principal_generator) == "x7^2 + 1"


def test_replay_of_ex_3_9(ex_3_9):
    trace = reduce(realization_presentation(ex_3_9))
    again = replay(trace)
    assert again.variables == trace.result.variables
    assert texts(again.ideal_gens) == texts(trace.result.ideal_gens)


def test_resource_cap_stops_saturation(ring_xy):
    P = build(ring_xy, parse_many(["x^2*y - y^3 + x*y^2 - 1", "x^3 + y^3 - 2*x*y"], ring_xy),
              parse_many(["x", "y"], ring_xy))
    trace = reduce(P, caps=ResourceCaps(max_degree=40, max_basis=1, budget=10))
    assert trace.stopped == "resource"
