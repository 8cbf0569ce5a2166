import random

import pytest

from app.config import ResourceCaps
from app.services.fields import CoefficientField, PolyRing
from app.services.groebner import (
    Ideal,
    ResourceLimitExceeded,
    contains,
    eliminate,
    groebner_basis,
    normal_form,
    quotient_vector_dimension,
    saturate,
    saturate_by,
)
from app.services.polynomials import parse_many, parse_polynomial


def ideal(ring, *texts):
    return Ideal.of(ring, parse_many(texts, ring))


def test_reduced_basis(ring_xy):
    G = groebner_basis(ideal(ring_xy, "x - y", "y^2 - 1"))
    assert sorted(G.to_strings()) == ["x - y", "y^2 - 1"]
    assert not G.is_unit


def test_membership(ring_xy):
    I = ideal(ring_xy, "x - y", "y^2 - 1")
    assert contains(I, parse_polynomial("x^2 - 1", ring_xy))
    assert not contains(I, parse_polynomial("x - 1", ring_xy))


def test_unit_ideal(ring_xy):
    assert groebner_basis(ideal(ring_xy, "x", "x - 1")).is_unit


def test_normal_form_needs_basis(ring_xy):
    with pytest.raises(ValueError):
        normal_form(parse_polynomial("x", ring_xy), ideal(ring_xy, "x"))


def test_saturation_removes_component(ring_xy):
    x = parse_polynomial("x", ring_xy)
    assert saturate(ideal(ring_xy, "x^2"), x).is_unit
    # x^2 lies in the ideal, so inverting x leaves nothing
    assert saturate(ideal(ring_xy, "x*y", "x^2"), x).is_unit
    assert saturate(ideal(ring_xy, "x*y"), x).to_strings() == ["y"]

    J = saturate(ideal(ring_xy, "x*y - x"), x)
    assert J.to_strings() == ["y - 1"]


def test_saturation_is_idempotent(ring_xy):
    x = parse_polynomial("x", ring_xy)
    once = saturate(ideal(ring_xy, "x*y - x", "x^3 + x^2"), x)
    twice = saturate(once, x)
    assert twice.same_as(once)
    assert once.same_as(groebner_basis(ideal(ring_xy, "y - 1", "x + 1")))


def test_saturation_by_several_factors(ring_xy):
    I = ideal(ring_xy, "x*y*(y - 1)")
    sat = saturate_by(I, parse_many(["x", "y"], ring_xy))
    assert sat.to_strings() == ["y - 1"]


def test_elimination():
    ring = PolyRing(CoefficientField.rationals(), ("t", "x", "y"))
    I = ideal(ring, "x - t^2", "y - t^3")
    E = eliminate(I, ["t"])
    assert E.ring.variables == ("x", "y")
    assert len(E.basis) == 1
    assert contains(E, parse_polynomial("x^3 - y^2", E.ring))


def test_quotient_dimension(ring_xy):
    Q = quotient_vector_dimension(groebner_basis(ideal(ring_xy, "x^2", "y^2")))
    assert Q.dimension == 4
    assert Q.standard_monomials == ("1", "x", "y", "x*y")
    assert Q.krull_dimension == 0

    line = quotient_vector_dimension(groebner_basis(ideal(ring_xy, "x")))
    assert line.dimension is None
    assert line.krull_dimension == 1


def test_quotient_of_zero_ideal(ring_xy):
    Q = quotient_vector_dimension(groebner_basis(Ideal.of(ring_xy, [])))
    assert Q.krull_dimension == 2
    assert not Q.is_finite


def test_basis_cap(ring_xy):
    caps = ResourceCaps(max_degree=40, max_basis=1, budget=10)
    with pytest.raises(ResourceLimitExceeded):
        groebner_basis(ideal(ring_xy, "x*y - 1", "x^2 - y"), caps)


def test_degree_cap_applies_to_generators(ring_xy):
    caps = ResourceCaps(max_degree=3, max_basis=2000, budget=10)
    with pytest.raises(ResourceLimitExceeded):
        groebner_basis(ideal(ring_xy, "x^4 - y", "x*y - 1"), caps)


def test_membership_of_combinations(ring_xy):
    """a*f + b*g lies in <f, g> for random small f, g, a, b."""
    rng = random.Random(7)
    x, y = ring_xy.gens

    def rand_poly(deg):
        p = ring_xy.zero()
        for i in range(deg + 1):
            for j in range(deg + 1 - i):
                p += rng.randint(-3, 3) * x**i * y**j
        return p

    for _ in range(5):
        f, g = rand_poly(2), rand_poly(2)
        if not f or not g:
            continue
        I = groebner_basis(Ideal.of(ring_xy, [f, g]))
        combo = rand_poly(1) * f + rand_poly(1) * g
        assert contains(I, combo)
        assert not normal_form(combo, I)
