import pytest

from app.services.matroid import Matroid, MatroidError
from app.services.planner import (
    OutOfRange,
    build_Q_dn_sing,
    deletion_reducible,
    describe,
    detect_principal_coextension,
    detect_principal_extension,
    flag_extension,
    free_coextension,
    k_flats_property,
    plan,
    principal_coextension,
    principal_extension,
    q_sing_pairs,
    stratum_dimension,
)


# =============================================================================
# EXTENSIONS
# =============================================================================

def test_free_extension_of_uniform():
    assert principal_extension(Matroid.uniform(2, 3), [1, 2, 3]) == Matroid.uniform(2, 4)


def test_extension_needs_flat(q_sing):
    with pytest.raises(MatroidError):
        principal_extension(q_sing, [1, 2])


def test_extension_on_a_line_lands_on_it(q_sing):
    Q = principal_extension(q_sing, [3, 4, 6])
    assert not Q.is_basis([3, 4, 13])
    assert Q.is_basis([1, 2, 13])
    assert (Q.d, Q.n) == (3, 13)


def test_coextension_is_dual_of_extension():
    U = Matroid.uniform(2, 4)
    assert principal_coextension(U, U.ground) == principal_extension(U.dual(), U.ground).dual()
    assert free_coextension(U) == Matroid.uniform(3, 5)


def test_detect_free_element():
    eta = detect_principal_extension(Matroid.uniform(2, 4), 4)
    assert eta.sorted == (1, 2, 3)
    assert eta.rank == 2


def test_detect_parallel_element():
    Q = Matroid.from_nonbases(2, 4, [[1, 4]])
    assert detect_principal_extension(Q, 4).sorted == (1,)


def test_detect_fails_on_q_sing(q_sing):
    assert detect_principal_extension(q_sing, 1) is None


def test_detect_coextension():
    assert detect_principal_coextension(Matroid.uniform(3, 5), 5) is not None


# =============================================================================
# CRITERIA
# =============================================================================

def test_deletion_criterion(not_smooth):
    assert not deletion_reducible(not_smooth, 10)
    assert deletion_reducible(not_smooth, 1)


def test_three_lines(q_sing):
    assert k_flats_property(q_sing, 3)
    assert not k_flats_property(q_sing, 4)


def test_planes_property_rank_check():
    with pytest.raises(MatroidError):
        k_flats_property(Matroid.uniform(2, 5), 3)


def test_describe_q_sing(q_sing):
    data = describe(q_sing)
    assert data["num_bases"] == 199
    assert data["paving"] is True
    assert len(data["hyperplanes"]) == 12
    assert data["three_lines"] is True
    assert data["small_circuits"]


def test_describe_rank_two():
    data = describe(Matroid.uniform(2, 4))
    assert "three_lines" not in data
    assert data["structure"]["is_simple"] is True


# =============================================================================
# PLANS
# =============================================================================

def test_plan_of_uniform_peels_everything():
    result = plan(Matroid.uniform(2, 4))
    assert [m.kind for m in result.moves] == ["delete", "dualize", "delete", "delete"]
    assert result.moves[0].elements == (1,)
    assert result.moves[0].detail["eta"] == [2, 3, 4]
    assert result.terminals == []


def test_plan_splits_components():
    Q = Matroid.uniform(1, 2).direct_sum(Matroid.uniform(1, 2))
    result = plan(Q)
    first = result.moves[0]
    assert first.kind == "split"
    assert first.detail["components"] == [[1, 2], [3, 4]]


def test_plan_of_q_sing_is_terminal(q_sing):
    result = plan(q_sing)
    assert result.is_empty
    assert len(result.terminals) == 1
    assert result.terminals[0].labels == tuple(range(1, 13))


def test_plan_deletes_through_z1(not_smooth):
    result = plan(not_smooth)
    first = result.moves[0]
    assert first.kind == "delete"
    assert first.justification == "z1-size"
    assert first.elements == (1,)


# =============================================================================
# SINGULAR FAMILY AND FLAGS
# =============================================================================

def test_q_sing_family_base_case(q_sing):
    assert build_Q_dn_sing(3, 12) == q_sing


def test_q_sing_family_grows():
    Q = build_Q_dn_sing(4, 13)
    assert (Q.d, Q.n) == (4, 13)
    assert Q.name == "q_sing_4_13"


def test_q_sing_family_range():
    with pytest.raises(OutOfRange):
        build_Q_dn_sing(3, 11)
    assert q_sing_pairs(13) == [(3, 12), (3, 13), (4, 13)]


def test_stratum_dimension():
    assert stratum_dimension(1, 12) == 12


def test_flag_of_uniform():
    flag = flag_extension(Matroid.uniform(2, 3))
    Q1, Q2, Q3 = flag.constituents
    assert Q1.bases == Matroid.from_bases(3, [[1], [3]]).bases
    assert Q2 == Matroid.uniform(2, 3)
    assert Q3 == Matroid.uniform(3, 3)


def test_flag_needs_leading_basis():
    Q = Matroid.from_nonbases(2, 3, [[1, 2]])
    with pytest.raises(MatroidError):
        flag_extension(Q)
