import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from netforms.algebra import GF, QQ, Matrix, PolyRing, RingError, determinant
from netforms.groups import (GroupElement2, act_on_point, embed_pgl2, embed_sl2_char2,
                             equal_up_to_scalar, g_char2_action, g_char2_element, h_action_matrix,
                             h_element, h_fixed_quadrics, is_fixed, k_element, nilpotent_ring,
                             preserves_quadric_span, preserves_split_form, pullback, sigma,
                             sigma_prime, sigma_printed, sl2_elements, stabilizer_values)
from netforms.models import membership, rational_points, y_split_ideal
from netforms.verify import generic_embedding_check, random_sl2_rational


def test_sigma_of_identity():
    I = GroupElement2.from_ints(QQ, 1, 0, 0, 1)
    assert sigma(I) == Matrix.identity(QQ, 7)


def test_sigma_of_diagonal_element():
    g = GroupElement2(QQ, Fraction(2), Fraction(0), Fraction(0), Fraction(1, 2))
    s, t = Fraction(3), Fraction(-5)
    image = sigma(g) @ [0, s, 0, 0, 0, t, 0]
    assert image == [0, 16 * s, 0, 0, 0, Fraction(1, 16) * t, 0]


def test_sigma_needs_two_invertible():
    with pytest.raises(RingError):
        sigma(GroupElement2.from_ints(GF(2), 1, 0, 0, 1))
    with pytest.raises(RingError):
        sigma_prime(GroupElement2.from_ints(GF(3), 1, 0, 0, 1))


def test_group_element_validation():
    with pytest.raises(RingError):
        GroupElement2.from_ints(QQ, 1, 1, 1, 1)
    with pytest.raises(RingError):
        GroupElement2.from_ints(QQ, 2, 0, 0, 1, special=True)


@given(st.integers(0, 2 ** 32))
def test_sigma_multiplicative(seed):
    rng = random.Random(seed)
    g, h = random_sl2_rational(rng), random_sl2_rational(rng)
    assert equal_up_to_scalar(sigma(g) @ sigma(h), sigma(g @ h))


def test_printed_sigma_is_not_a_homomorphism():
    rng = random.Random(3)
    failures = 0
    for _ in range(5):
        g, h = random_sl2_rational(rng), random_sl2_rational(rng)
        if not equal_up_to_scalar(sigma_printed(g) @ sigma_printed(h), sigma_printed(g @ h)):
            failures += 1
    assert failures > 0
    g = random_sl2_rational(random.Random(4))
    assert not preserves_quadric_span(sigma_printed(g), y_split_ideal(QQ))


def model_points_over_q():
    # points on the lines {(0,0,0,0,0,s,t)} and {(0,s,0,0,0,t,0)}, moved by a few group elements
    base = [(0, 0, 0, 0, 0, s, t) for s, t in ((1, 0), (0, 1), (1, 2), (3, -1))]
    base += [(0, s, 0, 0, 0, t, 0) for s, t in ((1, 1), (2, -3))]
    base.append((1, 0, 0, 0, 0, 0, 0))
    rng = random.Random(0)
    moved = []
    for p in base:
        g = random_sl2_rational(rng)
        moved.append(tuple(sigma(g) @ [Fraction(x) for x in p]))
    return [tuple(Fraction(x) for x in p) for p in base] + moved


def test_sigma_moves_model_points_to_model_points():
    Y = y_split_ideal(QQ)
    pts = model_points_over_q()
    assert all(membership(p, Y) for p in pts)
    rng = random.Random(1)
    for _ in range(100):
        g = random_sl2_rational(rng)
        p = rng.choice(pts)
        assert membership(sigma(g) @ list(p), Y)


def test_sigma_preserves_quadric_span():
    rng = random.Random(2)
    Y = y_split_ideal(QQ)
    for _ in range(5):
        assert preserves_quadric_span(sigma(random_sl2_rational(rng)), Y)


def test_random_matrix_does_not_preserve_span():
    rng = random.Random(5)
    M = Matrix(QQ, [[Fraction(rng.randint(-3, 3)) for _ in range(7)] for _ in range(7)])
    assert determinant(M) != 0
    assert not preserves_quadric_span(M, y_split_ideal(QQ))


def test_sigma_prime_fixture():
    F = GF(2)
    g = GroupElement2.from_ints(F, 1, 1, 0, 1, special=True)
    assert act_on_point(sigma_prime(g), (0, 0, 0, 0, 0, 1, 0), F) == (0, 1, 0, 0, 0, 1, 0)


@pytest.mark.parametrize("q", [2, 4])
def test_sigma_prime_strict_homomorphism(q):
    G = sl2_elements(GF(q))
    assert len(G) == q * (q * q - 1)
    mats = [sigma_prime(g) for g in G]
    for g, A in zip(G, mats):
        for h, B in zip(G, mats):
            assert A @ B == sigma_prime(g @ h)


def test_sigma_prime_permutes_model_points():
    F = GF(2)
    Y = y_split_ideal(F)
    pts = set(rational_points(Y, F))
    assert len(pts) == 15
    for g in sl2_elements(F):
        assert {act_on_point(sigma_prime(g), p, F) for p in pts} == pts
        assert preserves_quadric_span(sigma_prime(g), Y)


def test_embeddings_satisfy_stabilizer_equations():
    assert generic_embedding_check(False)
    assert generic_embedding_check(True)


def test_char2_embedding_needs_determinant_one():
    R = PolyRing(GF(2), ["a", "b", "c", "d"])
    a, b, c, d = R.gens()
    from types import SimpleNamespace
    vals = stabilizer_values(embed_sl2_char2(SimpleNamespace(ring=R, a=a, b=b, c=c, d=d)))
    assert any(not v.is_zero() for v in vals)
    assert all(v.is_zero() or v == a * d + b * c + R.one for v in vals)


def gl3(F):
    els = list(F.elements())
    for entries in product(els, repeat=9):
        M = Matrix(F, [list(entries[0:3]), list(entries[3:6]), list(entries[6:9])])
        if determinant(M) != 0:
            yield M


@pytest.mark.slow
def test_stabilizer_equations_cut_out_similitudes_over_f3():
    F = GF(3)
    count = 0
    for A in gl3(F):
        holds = all(v == 0 for v in stabilizer_values(A))
        assert holds == (preserves_split_form(A) is not None)
        count += holds
    # PGL2(F3) has 24 elements, each with q - 1 = 2 scalar lifts in GL3
    assert count == 48


def test_pgl2_embedding_preserves_split_form():
    rng = random.Random(9)
    for _ in range(10):
        g = random_sl2_rational(rng)
        assert preserves_split_form(embed_pgl2(g)) is not None


def test_h_action_matrix_from_group_element():
    T = nilpotent_ring()
    f1, f2 = T.gens()
    assert g_char2_action(h_element(f1, f2, T)) == h_action_matrix(T)


def test_h_fixes_squares():
    T = nilpotent_ring()
    M = h_action_matrix(T)
    quads = h_fixed_quadrics(T)
    for q in quads[:7]:
        assert is_fixed(q, M)


def test_h_moves_seventh_quadric_by_model_equations():
    # not fixed literally, only modulo the model: the difference is f1 Q2 + f2 Q4 + f1 f2 Q3
    T = nilpotent_ring()
    M = h_action_matrix(T)
    seventh = h_fixed_quadrics(T)[7]
    Y = y_split_ideal(T).generators
    P = PolyRing(T, list(seventh.vars))
    F1, F2 = (P.from_element(T.gen(n)) for n in ("f1", "f2"))
    assert not is_fixed(seventh, M)
    assert pullback(seventh, M) - seventh == F1 * Y[1] + F2 * Y[3] + F1 * F2 * Y[2]


def test_mixed_quadric_is_not_fixed():
    T = nilpotent_ring()
    P = PolyRing(T, [f"a{k}" for k in range(7)])
    a0, a1 = P.gen("a0"), P.gen("a1")
    assert not is_fixed(a0 * a1, h_action_matrix(T))


def test_k_squares_to_identity():
    R = nilpotent_ring(("f",))
    k = k_element(R.gen("f"), R)
    assert (k @ k).matrix() == Matrix.identity(R, 3)
    assert g_char2_action(k) @ g_char2_action(k) == Matrix.identity(R, 7)


def test_g_group_law():
    T = nilpotent_ring(("f1", "f2", "g1", "g2"))
    f1, f2, g1, g2 = T.gens()
    x = g_char2_element(T.one + f1 * f2, T.zero, T.zero, T.one, f1, f2, T)
    y = h_element(g1, g2, T)
    z = g_char2_element(T.one, T.one, T.zero, T.one, T.zero, T.zero, T)
    assert ((x @ y) @ z).matrix() == (x @ (y @ z)).matrix()
    for u, v in ((x, y), (y, z), (x, z)):
        assert equal_up_to_scalar(g_char2_action(u @ v), g_char2_action(u) @ g_char2_action(v))


def test_g_element_validation():
    T = nilpotent_ring()
    f1, f2 = T.gens()
    with pytest.raises(RingError):
        g_char2_element(T.one, T.zero, T.zero, T.one, f1, f2, T)
    with pytest.raises(RingError):
        g_char2_element(T.one, T.zero, T.zero, T.one, T.zero, T.zero, GF(3))
