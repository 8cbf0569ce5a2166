import random

import pytest

from app.services import gallery
from app.services.fields import CoefficientField
from app.services.matroid import (
    Matroid,
    MatroidError,
    SubsetEnumeration,
    elements_of,
    linear_matroid,
    mask_of,
    maximal_minors,
)


# =============================================================================
# SUBSET ORDERS
# =============================================================================

def test_colex_order():
    enum = SubsetEnumeration(4, 2, "colex")
    assert list(enum) == [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]
    assert enum.rank((3, 4)) == 5
    assert enum.unrank(2) == (2, 3)


def test_lex_order():
    assert list(SubsetEnumeration(4, 2, "lex")) == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def test_unknown_order():
    with pytest.raises(MatroidError):
        SubsetEnumeration(4, 2, "shuffled")


# =============================================================================
# CONSTRUCTION
# =============================================================================

def test_uniform():
    U = Matroid.uniform(2, 4)
    assert len(U.bases) == 6
    assert U.is_simple()
    assert U.is_connected()
    assert U.is_paving()


def test_exchange_failure():
    with pytest.raises(MatroidError):
        Matroid.from_bases(4, [[1, 2], [3, 4]], validate=True)


def test_bad_subset_size():
    with pytest.raises(MatroidError):
        Matroid.from_bases(4, [[1, 2], [1, 2, 3]], validate=True)


def test_json_formats_agree(q_sing):
    via_bases = Matroid.from_json({"d": 3, "n": 12, "bases": [list(elements_of(b)) for b in q_sing.bases]})
    via_json = Matroid.from_json(q_sing.to_json())
    assert via_bases == q_sing
    assert via_json == q_sing


def test_matrix_json():
    Q = Matroid.from_json({"matrix": [[1, 0, 1, 1], [0, 1, 1, 2]], "field": "QQ"})
    assert Q == Matroid.uniform(2, 4)
    Q2 = Matroid.from_json({"matrix": [[1, 0, 1, 1], [0, 1, 1, 2]], "field": "GF(2)"})
    assert not Q2.is_basis([1, 4])


def test_missing_field():
    with pytest.raises(MatroidError):
        Matroid.from_json({"d": 2})


def test_basis_bitset_round_trip(ex_3_9):
    bits = ex_3_9.basis_bitset("colex")
    assert Matroid.from_basis_bitset(3, 9, bits, "colex") == ex_3_9


# =============================================================================
# STRUCTURE
# =============================================================================

def test_q_sing_structure(q_sing):
    assert len(q_sing.lines()) == 12
    assert len(q_sing.cyclic_hyperplanes()) == 12
    assert q_sing.is_simple()
    assert q_sing.is_connected()
    assert q_sing.is_paving()
    assert q_sing.closure([1, 2]).sorted == (1, 2, 6, 8)


def test_loops_and_components():
    loop = Matroid.from_masks(0, 1, [0])
    Q = Matroid.uniform(2, 3).direct_sum(loop)
    flags = Q.structure_flags()
    assert flags.loops == (4,)
    assert not flags.is_simple
    assert not flags.is_connected
    assert not Q.is_paving()


def test_parallel_class():
    Q = Matroid.from_nonbases(2, 4, [[1, 4]])
    assert Q.parallel_classes() == ((1, 4),)
    assert not Q.is_simple()


def test_components_of_direct_sum():
    Q = Matroid.uniform(1, 2).direct_sum(Matroid.uniform(1, 2))
    assert Q.components() == ((1, 2), (3, 4))


def test_lines_need_rank_three():
    with pytest.raises(MatroidError):
        Matroid.uniform(4, 8).lines()


def test_cyclic_flats_of_uniform():
    flats = Matroid.uniform(2, 4).cyclic_flats()
    assert [F.sorted for F in flats] == [(), (1, 2, 3, 4)]


def test_z1_through(not_smooth):
    hyperplanes = sorted(H.sorted for H in not_smooth.z1_through(10))
    assert hyperplanes == [(1, 2, 3, 10), (4, 5, 6, 10), (7, 8, 9, 10)]


# =============================================================================
# MINORS AND DUALITY
# =============================================================================

def test_dual_is_involution(q_sing):
    assert q_sing.dual().dual() == q_sing
    assert q_sing.dual().d == 9


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_delete_contract_duality(seed, ex_3_9, q_sing):
    rng = random.Random(seed)
    for Q in (ex_3_9, q_sing, Matroid.uniform(3, 6)):
        eta = rng.sample(Q.ground, 2)
        deleted, relabel = Q.delete(eta)
        contracted_dual, relabel_dual = Q.dual().contract(eta)
        assert relabel == relabel_dual
        assert deleted.dual() == contracted_dual


def test_delete_outside_ground():
    with pytest.raises(MatroidError):
        Matroid.uniform(2, 3).delete([4])


def test_delete_everything():
    minor, relabel = Matroid.uniform(2, 3).delete([1, 2, 3])
    assert (minor.d, minor.n) == (0, 0)
    assert minor.bases == frozenset({0})
    assert relabel == {}


@pytest.mark.parametrize("seed", [11, 12])
def test_paving_criteria_agree(seed):
    rng = random.Random(seed)
    candidates = [gallery.named(name) for name in ("q_sing", "ex_3_9", "ex_3_10", "not_smooth_4_10")]
    candidates.append(Matroid.uniform(2, 3).direct_sum(Matroid.uniform(1, 2)))
    for Q in rng.sample(candidates, len(candidates)):
        assert Q.is_paving_by_circuits() == Q.is_paving_by_cyclic_flats()


def test_isomorphism_of_relabeled(ex_3_10, rng):
    labels = list(ex_3_10.ground)
    rng.shuffle(labels)
    perm = dict(zip(ex_3_10.ground, labels))
    image = ex_3_10.relabel(perm)
    found = ex_3_10.is_isomorphic(image)
    assert found is not None
    assert ex_3_10.relabel(found) == image
    assert ex_3_10.is_isomorphic(Matroid.uniform(3, 10)) is None


# =============================================================================
# LINEAR MATROIDS
# =============================================================================

def test_f2_eight_points(f2_eight):
    assert (f2_eight.d, f2_eight.n) == (4, 8)
    assert all(len(c) <= 4 for c in f2_eight.circuits())
    rebuilt = linear_matroid(gallery.F2_EIGHT_POINTS, CoefficientField.prime(2))
    assert rebuilt == f2_eight


def test_not_smooth_matrix_minors():
    minors = maximal_minors(gallery.NOT_SMOOTH_B)
    assert len(minors) == 126
    assert all(minors.values())

    def B(*cols):
        return minors[cols]

    assert B(3, 4, 5, 6) == 1
    assert B(1, 7, 8, 9) * B(3, 4, 5, 6) - B(1, 4, 5, 6) * B(3, 7, 8, 9) == 0
    assert B(2, 7, 8, 9) * B(3, 4, 5, 6) - B(2, 4, 5, 6) * B(3, 7, 8, 9) == 0


def test_linear_matroid_needs_full_rank():
    with pytest.raises(MatroidError):
        linear_matroid([[1, 2], [2, 4]])


def test_mask_of_rejects_nonpositive():
    with pytest.raises(MatroidError):
        mask_of([0, 1])
