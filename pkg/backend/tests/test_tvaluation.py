import math

import pytest

from app.services.fields import CoefficientField
from app.services.tvaluation import TPolynomialMatrix, t_valuation_of_minors


def test_valuations_of_small_matrix():
    Q = CoefficientField.rationals()
    M = TPolynomialMatrix.from_parts(
        Q,
        [[1, 0, 0], [0, 1, 0]],
        [[0, 1, 1], [1, 0, 0]],
    )
    vals = t_valuation_of_minors(M, 2)
    # det [[1, t], [t, 1]] = 1 - t^2
    assert vals[(1, 2)].valuation == 0
    # det [[1, t], [t, 0]] = -t^2
    assert vals[(1, 3)].valuation == 2
    # det [[t, t], [1, 0]] = -t
    assert vals[(2, 3)].valuation == 1
    assert vals[(2, 3)].leading == -1


def test_identically_zero_minor():
    M = TPolynomialMatrix.from_parts(CoefficientField.rationals(), [[1, 2], [2, 4]], [[0, 0], [0, 0]])
    v = t_valuation_of_minors(M, 2)[(1, 2)]
    assert v.is_zero
    assert v.valuation == math.inf


def test_too_few_rows():
    M = TPolynomialMatrix.from_parts(CoefficientField.rationals(), [[1, 0]], [[0, 1]])
    with pytest.raises(ValueError):
        t_valuation_of_minors(M, 2)


def test_valuations_over_extension():
    ext = CoefficientField.parse("QQ<w: w^2 - w + 1>")
    w = ext.generator_element()
    M = TPolynomialMatrix.from_parts(ext, [[1, w], [1, ext.domain.one - w]], [[0, 0], [0, 1]])
    # det = (1 - w + t) - w = 1 - 2w + t, and 1 - 2w is nonzero
    assert t_valuation_of_minors(M, 2)[(1, 2)].valuation == 0


def test_column_scaling_shifts_valuations():
    M = TPolynomialMatrix.from_parts(
        CoefficientField.rationals(),
        [[1, 0, 2, 1], [0, 1, 1, 3]],
        [[0, 1, 1, 0], [1, 0, 0, 1]],
    )
    t = M.ring.sympy_ring.gens[0]
    before = t_valuation_of_minors(M, 2)
    after = t_valuation_of_minors(M.scale_column(1, 3 * t**2), 2)
    for cols, v in before.items():
        if 2 in cols:
            assert after[cols].valuation == v.valuation + 2
            assert after[cols].leading == 3 * v.leading
        else:
            assert after[cols] == v
