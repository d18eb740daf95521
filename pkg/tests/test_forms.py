import json
import random

import pytest
from hypothesis import given, strategies as st

from netforms.algebra import GF, QQ, ZZ, Matrix, RingError, determinant, rank
from netforms.forms import (AlternatingNet, BasisChange, DegenerateNet, TernarySymForm,
                            apply_basis_change, certify_rank4, is_rank4_net, principal_pfaffians,
                            rank4_by_enumeration, rank4_witness, signature_pair, similar_forms,
                            split_form, split_net, transform_form)


def random_invertible(F, n, rng):
    while True:
        M = Matrix(F, [[F.random_element(rng) for _ in range(n)] for _ in range(n)])
        if determinant(M) != 0:
            return M


def random_net(F, rng):
    mats = []
    for _ in range(3):
        m = [[F.zero] * 5 for _ in range(5)]
        for i in range(5):
            for j in range(i + 1, 5):
                v = F.random_element(rng)
                m[i][j], m[j][i] = v, F.neg(v)
        mats.append(Matrix(F, m))
    return AlternatingNet(F, *mats)


def test_split_form_entries():
    Q = split_form(ZZ).Q
    assert Q[0, 1] == Q[1, 0] == -1 and Q[2, 2] == 1
    assert [Q[0, 0], Q[1, 1], Q[0, 2], Q[1, 2]] == [0, 0, 0, 0]


def test_split_net_entries():
    net = split_net(ZZ)
    expected = {"A": {(1, 4): -1, (2, 3): 1}, "B": {(0, 3): -1, (1, 2): 1}, "C": {(0, 4): -1, (1, 3): 1}}
    for name, X in zip("ABC", net.matrices):
        for i in range(5):
            for j in range(i + 1, 5):
                assert X[i, j] == expected[name].get((i, j), 0)


def test_net_rejects_non_alternating():
    bad = Matrix.identity(ZZ, 5)
    with pytest.raises(ValueError):
        AlternatingNet(ZZ, bad, bad, bad)
    with pytest.raises(ValueError):
        TernarySymForm(ZZ, Matrix.from_ints(ZZ, [[0, 1, 0], [0, 0, 0], [0, 0, 1]]))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_split_net_is_rank4(q):
    net = split_net(GF(q))
    assert is_rank4_net(net)
    assert rank4_by_enumeration(net) is None
    certify_rank4(net)


def test_split_net_rank4_over_integers():
    certify_rank4(split_net(ZZ))


def test_zero_member_is_degenerate():
    F = GF(3)
    net = split_net(F)
    flat = AlternatingNet(F, net.A, net.B, Matrix.zeros(F, 5))
    assert not is_rank4_net(flat)
    with pytest.raises(DegenerateNet) as info:
        certify_rank4(flat)
    assert info.value.point == (0, 0, 1)


def test_degenerate_integer_net_has_witness():
    net = split_net(ZZ)
    flat = AlternatingNet(ZZ, net.A, net.B, Matrix.zeros(ZZ, 5))
    with pytest.raises(DegenerateNet) as info:
        certify_rank4(flat)
    assert info.value.point == (0, 0, 1)


def test_members_have_rank_four_at_every_point():
    F = GF(3)
    net = split_net(F)
    from netforms.algebra.projective import projective_points
    assert {rank(net.at(*p)) for p in projective_points(F, 2)} == {4}


@given(st.integers(0, 2 ** 32))
def test_macaulay_criterion_matches_enumeration(seed):
    # enumeration up to degree 4 is an oracle for the closure: five conics
    # with a common zero have one of degree at most 4
    F = GF(2)
    net = random_net(F, random.Random(seed))
    assert is_rank4_net(net) == (rank4_by_enumeration(net) is None)


def test_rank4_needs_a_field():
    with pytest.raises(RingError):
        is_rank4_net(split_net(ZZ))


def test_principal_pfaffians_are_conics():
    for f in principal_pfaffians(split_net(ZZ)):
        assert f.is_zero() or f.total_degree() == 2


@given(st.integers(0, 2 ** 32))
def test_basis_change_preserves_rank4(seed):
    rng = random.Random(seed)
    F = GF(5)
    g = BasisChange(random_invertible(F, 5, rng), random_invertible(F, 3, rng))
    assert is_rank4_net(apply_basis_change(split_net(F), g))


@given(st.integers(0, 2 ** 32))
def test_basis_change_is_an_action(seed):
    rng = random.Random(seed)
    F = GF(3)
    g = BasisChange(random_invertible(F, 5, rng), random_invertible(F, 3, rng))
    h = BasisChange(random_invertible(F, 5, rng), random_invertible(F, 3, rng))
    net = random_net(F, rng)
    assert apply_basis_change(net, g.compose(h)) == apply_basis_change(apply_basis_change(net, h), g)
    ident = BasisChange(Matrix.identity(F, 5), Matrix.identity(F, 3))
    assert apply_basis_change(net, ident) == net


@given(st.integers(0, 2 ** 32))
def test_rank_is_invariant_under_basis_change(seed):
    rng = random.Random(seed)
    F = GF(7)
    net = random_net(F, rng)
    g = BasisChange(random_invertible(F, 5, rng), Matrix.identity(F, 3))
    moved = apply_basis_change(net, g)
    for X, Y in zip(net.matrices, moved.matrices):
        assert rank(X) == rank(Y)


def test_singular_basis_change_rejected():
    F = GF(3)
    g = BasisChange(Matrix.zeros(F, 5), Matrix.identity(F, 3))
    with pytest.raises(RingError):
        apply_basis_change(split_net(F), g)


def check_witness(q1, q2, hit):
    T, lam = hit
    assert determinant(T) != 0
    assert transform_form(q1, T).Q == q2.Q.scale(lam)


def test_identity_similar_to_split_in_odd_characteristic():
    F = GF(3)
    ident = TernarySymForm(F, Matrix.identity(F, 3))
    hit = similar_forms(ident, split_form(F))
    assert hit is not None
    check_witness(ident, split_form(F), hit)


def test_identity_similar_to_split_over_f2():
    F = GF(2)
    ident = TernarySymForm(F, Matrix.identity(F, 3))
    hit = similar_forms(ident, split_form(F))
    check_witness(ident, split_form(F), hit)


def test_alternating_part_blocks_similarity_over_f2():
    # a form whose diagonal vanishes is alternating and cannot be nondegenerate in odd
    # rank, but one with a single nonzero diagonal entry is still similar to the split form
    F = GF(2)
    q = TernarySymForm(F, Matrix.from_ints(F, [[1, 1, 0], [1, 0, 1], [0, 1, 0]]))
    assert determinant(q.Q) == 1
    check_witness(q, split_form(F), similar_forms(q, split_form(F)))


def test_similar_forms_is_deterministic():
    F = GF(5)
    ident = TernarySymForm(F, Matrix.identity(F, 3))
    assert similar_forms(ident, split_form(F)) == similar_forms(ident, split_form(F))


def test_similar_forms_limits():
    with pytest.raises(RingError):
        similar_forms(split_form(ZZ), split_form(ZZ))
    F = GF(11)
    with pytest.raises(RingError):
        similar_forms(split_form(F), split_form(F))


def test_signatures():
    assert signature_pair(split_form(ZZ)) == (2, 1)
    assert signature_pair(TernarySymForm(ZZ, Matrix.identity(ZZ, 3))) == (3, 0)
    assert signature_pair(TernarySymForm(ZZ, Matrix.diagonal(ZZ, [-1, -2, 5]))) == (1, 2)
    with pytest.raises(ValueError):
        signature_pair(TernarySymForm(ZZ, Matrix.diagonal(ZZ, [1, 0, 1])))


small = st.integers(-4, 4)


@given(st.lists(small, min_size=9, max_size=9), st.lists(small, min_size=6, max_size=6))
def test_signature_is_a_congruence_invariant(entries, sym):
    a, b, c, d, e, f = sym
    Q = Matrix(QQ, [[a, d, e], [d, b, f], [e, f, c]])
    T = Matrix(QQ, [entries[0:3], entries[3:6], entries[6:9]])
    if determinant(Q) == 0 or determinant(T) == 0:
        return
    q = TernarySymForm(QQ, Q)
    assert signature_pair(transform_form(q, T)) == signature_pair(q)
    pos, neg = signature_pair(q)
    assert pos + neg == 3
    assert signature_pair(transform_form(q, T, scalar=-1)) == (neg, pos)


def test_json_round_trip():
    for R in (ZZ, GF(4)):
        net = split_net(R)
        assert AlternatingNet.from_json(json.loads(json.dumps(net.to_json()))) == net
        q = split_form(R)
        assert TernarySymForm.from_json(json.loads(json.dumps(q.to_json()))) == q


def test_reduction_mod_p():
    assert split_net(ZZ).reduce(GF(2)) == split_net(GF(2))
    assert split_form(ZZ).reduce(GF(3)) == split_form(GF(3))


def test_rank4_witness_none_for_split():
    assert rank4_witness(split_net(GF(3))) is None
