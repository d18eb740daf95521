import random

import pytest
from hypothesis import given, settings, strategies as st

from netforms.algebra import GF, ZZ, Matrix, RingError, adjugate, determinant
from netforms.correspondence import (RoundTripFailure, beta_vector, degree_audit, form_roundtrip,
                                     gram_matrix, net_from_form, net_roundtrip_witness, p_prime,
                                     phi_from_net, theta_from_products, theta_of, theta_prime,
                                     trilinear, verify_master_identity)
from netforms.forms import (AlternatingNet, BasisChange, TernarySymForm, apply_basis_change,
                            generic_net, is_rank4_net, similar_forms, split_form, split_net,
                            variable_groups)
from netforms.verify import random_unimodular_form
from test_forms import random_invertible, random_net


def zero_net(R):
    Z = Matrix.zeros(R, 5)
    return AlternatingNet(R, Z, Z, Z)


def test_gram_matrix_of_split_net():
    # column j is the image of the wedge of all basis vectors but e_{j+1};
    # rows are alpha^2, beta*gamma, beta^2, gamma*alpha, gamma^2, alpha*beta
    expected = [
        [-1, 0, 0, 0, 0],
        [0, 0, 0, -1, 0],
        [0, 0, 0, 0, -1],
        [0, -1, 0, 0, 0],
        [0, 0, -1, 0, 0],
        [0, 0, -1, 0, 0],
    ]
    assert gram_matrix(split_net(ZZ)) == Matrix.from_ints(ZZ, expected)
    assert gram_matrix(zero_net(ZZ)) == Matrix.zeros(ZZ, 6, 5)


def test_gram_matrix_degrees():
    net, R = generic_net(ZZ)
    M = gram_matrix(net)
    bounds = [(2, 0, 0), (0, 1, 1), (0, 2, 0), (1, 0, 1), (0, 0, 2), (1, 1, 0)]
    groups = variable_groups()
    for row, bound in zip(M.rows, bounds):
        for entry in row:
            assert entry.multidegrees(groups) == {bound}


def test_phi_of_split_net():
    # the unnormalized minors give the split form up to the unit -1
    assert phi_from_net(split_net(ZZ)).Q == split_form(ZZ).Q.scale(-1)
    assert phi_from_net(split_net(GF(2))).Q == Matrix.from_ints(GF(2), [[0, 1, 0], [1, 0, 0], [0, 0, 1]])


def test_psi_of_split_form():
    assert net_from_form(split_form(ZZ)) == split_net(ZZ)
    assert net_from_form(split_form(GF(2))) == split_net(GF(2))


def test_psi_of_identity_is_rank4():
    F = GF(3)
    assert is_rank4_net(net_from_form(TernarySymForm(F, Matrix.identity(F, 3))))


def test_psi_rejects_degenerate():
    with pytest.raises(RingError):
        net_from_form(TernarySymForm(ZZ, Matrix.diagonal(ZZ, [1, 2, 1])))


@pytest.mark.parametrize("q", [3, 5, 7])
def test_phi_nondegenerate_on_rank4_nets(q):
    F = GF(q)
    rng = random.Random(q)
    for _ in range(30):
        net = random_net(F, rng)
        assert is_rank4_net(net) == (determinant(phi_from_net(net).Q) != 0)


def test_beta_of_split_alpha():
    assert beta_vector(split_net(ZZ).A) == [-1, 0, 0, 0, 0]


@given(st.integers(0, 2 ** 32))
def test_beta_polarization_symmetric(seed):
    F = GF(7)
    net = random_net(F, random.Random(seed))
    X, Y = net.A, net.B
    assert beta_vector(X, Y) == beta_vector(Y, X)
    # polarization of the quadratic map: beta(X, X) = 2 beta(X)
    assert beta_vector(X, X) == [F.mul(2, v) for v in beta_vector(X)]


def test_trilinear_with_zero_matrix():
    Z = Matrix.zeros(ZZ, 5)
    assert trilinear([1, 2, 3, 4, 5], Z, [5, 4, 3, 2, 1]) == 0


def test_p_prime_of_split_net():
    P = p_prime(split_net(ZZ))
    assert determinant(P) == -1
    assert adjugate(P) == phi_from_net(split_net(ZZ)).Q
    assert P @ phi_from_net(split_net(ZZ)).Q == Matrix.identity(ZZ, 3).scale(determinant(P))
    assert p_prime(zero_net(ZZ)) == Matrix.zeros(ZZ, 3)


def test_p_prime_multidegrees():
    net, _ = generic_net(ZZ)
    P = p_prime(net)
    groups = variable_groups()
    assert P[0, 0].multidegrees(groups) == {(3, 1, 1)}
    audit = degree_audit(phi_from_net(net).Q, P)
    assert audit["ok"] and audit["Q_nu_degrees"] == [10]


def test_theta_of_identity():
    row = [
        [0, 0, 0, 0, 0, -1, 0, 1, 0, 0, 0, 0, 0, -1, 0],
        [0, 0, -1, 0, 0, 0, 0, 0, 1, 0, 0, 0, -1, 0, 0],
        [0, 0, 0, 0, 1, 0, -1, 0, 0, 0, 0, -1, 0, 0, 0],
    ]
    assert theta_of(Matrix.identity(ZZ, 3)) == Matrix.from_ints(ZZ, row)


@given(st.lists(st.integers(-9, 9), min_size=6, max_size=6))
def test_theta_table_matches_products(vals):
    a, b, c, d, e, f = vals
    P = Matrix(ZZ, [[a, d, e], [d, b, f], [e, f, c]])
    assert theta_of(P) == theta_from_products(P)


def test_theta_prime_small_cases():
    assert theta_prime(zero_net(ZZ)) == Matrix.zeros(ZZ, 3, 15)
    s = split_net(ZZ)
    assert theta_prime(s) == theta_of(p_prime(s))


@given(st.integers(0, 2 ** 32))
def test_theta_prime_random(seed):
    net = random_net(GF(101), random.Random(seed))
    assert theta_prime(net) == theta_of(p_prime(net))


def test_master_identity_randomized():
    rep = verify_master_identity("randomized", samples=200, seed=1)
    assert rep["status"] == "pass", rep["witness"]
    assert rep["details"]["samples"] == 200


@pytest.mark.slow
def test_master_identity_randomized_thousand():
    rep = verify_master_identity("randomized", samples=1000, seed=7)
    assert rep["status"] == "pass", rep["witness"]


def test_master_identity_budget_is_reported():
    rep = verify_master_identity("symbolic", budget=1000)
    assert rep["status"] == "budget_exceeded"
    assert "error" in rep["details"]


def test_master_identity_rejects_unknown_mode():
    with pytest.raises(ValueError):
        verify_master_identity("heuristic")


@given(st.integers(0, 2 ** 32))
def test_master_identity_on_integer_nets(seed):
    rng = random.Random(seed)
    mats = []
    for _ in range(3):
        m = [[0] * 5 for _ in range(5)]
        for i in range(5):
            for j in range(i + 1, 5):
                m[i][j] = rng.randint(-3, 3)
                m[j][i] = -m[i][j]
        mats.append(Matrix(ZZ, m))
    net = AlternatingNet(ZZ, *mats)
    P, Q = p_prime(net), phi_from_net(net).Q
    assert adjugate(P) == Q
    assert determinant(Q) == determinant(P) ** 2


def test_roundtrip_identity_witness():
    q = TernarySymForm(ZZ, Matrix.diagonal(ZZ, [1, -1, 1]))
    back, T, lam = form_roundtrip(q)
    assert T == Matrix.identity(ZZ, 3) and lam == -1
    assert back.Q.scale(lam) == q.Q


@given(st.integers(0, 2 ** 32))
def test_roundtrip_random_unimodular(seed):
    q = random_unimodular_form(random.Random(seed))
    back, T, lam = form_roundtrip(q)
    assert (T.T @ q.Q @ T) == back.Q.scale(lam)
    g = net_roundtrip_witness(net_from_form(q))
    assert apply_basis_change(net_from_form(q), g) == net_from_form(phi_from_net(net_from_form(q)))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_roundtrip_random_forms_over_fields(q):
    F = GF(q)
    rng = random.Random(q)
    done = 0
    while done < 10:
        M = Matrix(F, [[F.random_element(rng) for _ in range(3)] for _ in range(3)])
        Q = M + M.T if F.characteristic != 2 else M.T @ M
        if determinant(Q) == 0:
            continue
        form_roundtrip(TernarySymForm(F, Q))
        done += 1


@given(st.integers(0, 2 ** 32))
def test_psi_phi_roundtrip_on_moved_split_nets(seed):
    rng = random.Random(seed)
    F = GF(5)
    g = BasisChange(random_invertible(F, 5, rng), random_invertible(F, 3, rng))
    net = apply_basis_change(split_net(F), g)
    w = net_roundtrip_witness(net)
    assert apply_basis_change(net, w) == net_from_form(phi_from_net(net))


# the exhaustive similarity search over GF(7) is the costly oracle here
@settings(max_examples=12)
@given(st.integers(0, 2 ** 32))
def test_similarity_class_functoriality(seed):
    rng = random.Random(seed)
    F = GF(7)
    g = BasisChange(random_invertible(F, 5, rng), random_invertible(F, 3, rng))
    image = phi_from_net(apply_basis_change(split_net(F), g))
    hit = similar_forms(image, split_form(F))
    assert hit is not None
    T, lam = hit
    assert T.T @ image.Q @ T == split_form(F).Q.scale(lam)


def test_roundtrip_failure_is_an_assertion():
    assert issubclass(RoundTripFailure, AssertionError)
