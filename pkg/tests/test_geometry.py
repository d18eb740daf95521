import random

import pytest
from hypothesis import given, settings, strategies as st

from netforms.algebra import GF, QQ, field_extension
from netforms.algebra.projective import normalize, projective_points
from netforms.geometry import (EXPECTED_LINES, EXCEPTIONAL, O1, O1_PRIME, O2, O3, ORDINARY, SPECIAL, LineInY,
                               census, classify_point, divisor_value, line_from_net_point,
                               line_profile, lines_through, model_points, nu, nu_prime,
                               nu_prime_preimage, on_model, parse_point, plane_of_point,
                               point_of_plane, sigma_orbits_on_lines, trisecant_points,
                               veronese_preimage, veronese_projection)
from netforms.groups import embed_pgl2, sigma, sl2_elements
from netforms.verify import nu_check, nu_prime_check


def line(F, *basis):
    return LineInY(F, tuple(tuple(F.coerce(x) for x in p) for p in basis))


@pytest.mark.parametrize("q", [2, 3, 5])
def test_printed_lines_of_the_split_net(q):
    F = GF(q)
    assert line_from_net_point((0, 1, 0), F) == line(F, (0, 0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 0, 1))
    assert line_from_net_point((0, 0, 1), F) == line(F, (0, 1, 0, 0, 0, 0, 0), (0, 0, 0, 0, 0, 1, 0))


def test_char2_line_through_all_ones():
    F = GF(2)
    l = line_from_net_point((1, 1, 1), F)
    # (s, t, t, s + t, t, t, s)
    assert l == line(F, (1, 0, 0, 1, 0, 0, 1), (0, 1, 1, 1, 1, 1, 0))
    assert l.kind == ORDINARY


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_labelled_lines_lie_on_the_model(q):
    F = GF(q)
    for P in projective_points(F, 2):
        l = line_from_net_point(P, F)
        for s, t in projective_points(F, 1):
            assert on_model(l.point(s, t), F)


def test_veronese_projection_example():
    assert veronese_projection((1, 1, 1), QQ) == (-1, 1, -2, 1, -1)
    with pytest.raises(ValueError):
        veronese_projection((0, 0, 0), QQ)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_veronese_preimage_inverts_projection(q):
    F = GF(q)
    for P in projective_points(F, 2):
        assert veronese_preimage(veronese_projection(P, F), F) == P


def ps(F, *vals):
    return normalize([F.coerce(v) for v in vals], F)


@pytest.mark.parametrize("q", [5, 7])
def test_trisecant_example_odd(q):
    F = GF(q)
    tri = trisecant_points((0, F.from_int(-4), 0, 0, 0, 1, 0), F)
    assert tri.field == F and tri.profile == (1, 1, 1)
    hits = {normalize(veronese_projection(P, F), F) for P, _ in tri.points}
    assert hits == {ps(F, 0, 0, 1, 0, 0), ps(F, 4, 0, -2, 0, 1), ps(F, 4, 0, 2, 0, 1)}


def test_trisecant_example_char2():
    tri = trisecant_points((1, 0, 0, 1, 0, 0, 1), GF(2))
    E = tri.field
    assert E.q == 4 and tri.profile == (1, 1, 1)
    w = E.parse("w")
    w2 = E.mul(w, w)
    assert E.add(E.add(w2, w), 1) == 0
    hits = {normalize(veronese_projection(P, E), E) for P, _ in tri.points}
    expected = {normalize(v, E) for v in [(1, 1, 0, 1, 1), (w2, w, 0, w2, w), (w, w2, 0, w, w2)]}
    assert hits == expected


@pytest.mark.parametrize("q", [3, 5, 7])
def test_triple_point_on_closed_orbit(q):
    F = GF(q)
    tri = trisecant_points((0, 0, 0, 0, 0, 0, 1), F)
    assert tri.profile == (3,)
    assert classify_point((0, 0, 0, 0, 0, 0, 1), F) == O1


@pytest.mark.parametrize("point,q,label", [
    ((0, 1, 0, 0, 0, 1, 0), 3, O3),
    ((0, 0, 0, 0, 0, 1, 1), 2, O2),
    ((0, 0, 0, 0, 0, 1, 0), 2, O1_PRIME),
    ((0, 0, 0, 0, 0, 1, 0), 3, O2),
    ((0, 0, 0, 0, 0, 0, 1), 2, O1),
])
def test_orbit_representatives(point, q, label):
    assert classify_point(point, GF(q)) == label


def test_classify_rejects_points_off_the_model():
    with pytest.raises(ValueError):
        classify_point((1, 1, 0, 0, 0, 0, 1), GF(5))


def test_three_lines_through_general_point():
    F = GF(7)
    p = (0, F.from_int(-4), 0, 0, 0, 1, 0)
    lines = set(lines_through(p, F))
    t_point = (0, -4, 0, 0, 0, 1, 0)
    expected = {line_from_net_point((0, 0, 1), F),
                line(F, (8, 0, 4, 0, -2, 0, -1), t_point),
                line(F, (8, 0, -4, 0, -2, 0, 1), t_point)}
    assert lines == expected
    assert line_profile(lines) == (ORDINARY, ORDINARY, ORDINARY)


def test_two_lines_in_char2():
    F = GF(2)
    lines = lines_through((0, 0, 0, 0, 0, 1, 1), F)
    assert set(lines) == {line_from_net_point((0, 1, 0), F),
                          line(F, (0, 1, 1, 1, 1, 0, 1), (0, 0, 0, 0, 0, 1, 1))}
    assert line_profile(lines) == (ORDINARY, SPECIAL)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_unique_line_through_closed_orbit_point(q):
    F = GF(q)
    lines = lines_through((0, 0, 0, 0, 0, 0, 1), F)
    assert lines == [line_from_net_point((0, 1, 0), F)]
    assert lines[0].kind == SPECIAL


def test_exceptional_line_in_char2():
    F = GF(2)
    lines = lines_through((0, 0, 0, 0, 0, 1, 0), F)
    assert line_profile(lines) == (EXCEPTIONAL, SPECIAL)


def test_points_on_a_line_see_its_label():
    F = GF(5)
    for P in projective_points(F, 2):
        l = line_from_net_point(P, F)
        for s, t in projective_points(F, 1):
            labels = [Q for Q, _ in trisecant_points(l.point(s, t), F).points]
            assert normalize(P, F) in labels


def test_line_equivariance():
    F = GF(5)
    rng = random.Random(0)
    G = sl2_elements(F)
    pts = list(projective_points(F, 2))
    for _ in range(60):
        g = rng.choice(G)
        P = rng.choice(pts)
        A, S = embed_pgl2(g), sigma(g)
        moved = line_from_net_point(normalize(A @ list(P), F), F)
        l = line_from_net_point(P, F)
        image = LineInY(F, tuple(tuple(S @ list(b)) for b in l.basis))
        assert moved == image


def test_plane_round_trip():
    F = GF(3)
    for p in model_points(F):
        u, v = plane_of_point(p, F)
        assert normalize(point_of_plane(u, v, F), F) == normalize(p, F)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_census_table(q):
    c = census(q)
    assert c["total"] == c["expected_total"] == 1 + q + q * q + q ** 3
    assert c["consistent"], c["mismatches"][:3]
    sizes = c["orbits"]
    assert sizes[O3] == q ** 3 - q and sizes[O1] == q + 1
    if q % 2:
        assert sizes[O2] == q * q + q and O1_PRIME not in sizes
    else:
        assert sizes[O2] == q * q - 1 and sizes[O1_PRIME] == q + 1


def test_census_over_f2_counts():
    c = census(2)
    assert c["total"] == 15
    assert c["orbits"][O1_PRIME] == 3 and c["orbits"][O1] == 3


def test_census_polarization_agrees():
    assert census(3, use_polarization=True)["consistent"]


@pytest.mark.slow
@pytest.mark.parametrize("q", [7])
def test_census_larger_field(q):
    assert census(q)["consistent"]


@pytest.mark.parametrize("q", [3, 5, 7])
def test_divisor_separates_open_orbit(q):
    F = GF(q)
    for p in model_points(F):
        assert (classify_point(p, F) == O3) == (not F.is_zero(divisor_value(p, F)))


@pytest.mark.parametrize("q", [3, 5])
def test_nu_onto_divisor(q):
    ok, detail = nu_check(q)
    assert ok, detail
    assert detail["image"] == detail["D"] == (q + 1) ** 2


def test_nu_is_injective_not_two_to_one():
    F = GF(5)
    P1 = list(projective_points(F, 1))
    images = [normalize(nu(P, Q, F), F) for P in P1 for Q in P1]
    assert len(set(images)) == len(images)


@pytest.mark.parametrize("q", [2, 4, 8])
def test_nu_prime_bijection(q):
    ok, detail = nu_prime_check(q)
    assert ok, detail
    assert detail["D_red"] == (q + 1) ** 2


@pytest.mark.parametrize("q", [2, 4])
def test_nu_prime_preimage_round_trip(q):
    F = GF(q)
    for P in projective_points(F, 2):
        if F.is_zero(P[0]) and F.is_zero(P[1]):
            continue
        assert nu_prime_preimage(nu_prime(P, F), F) == ("plane", P)


def test_line_strata_of_p2():
    res = sigma_orbits_on_lines(3)
    assert len(res["parts"][SPECIAL]) == 4 and res["preserved"]
    res = sigma_orbits_on_lines(2)
    sizes = {k: len(v) for k, v in res["parts"].items()}
    assert sizes == {EXCEPTIONAL: 1, SPECIAL: 3, ORDINARY: 3} and res["preserved"]
    assert res["parts"][EXCEPTIONAL] == [(0, 0, 1)]


def test_stabilizer_of_special_label_is_lower_triangular():
    F = GF(5)
    P = (0, 1, 0)
    assert F.is_zero(F.sub(F.mul(P[2], P[2]), F.mul(2, F.mul(P[0], P[1]))))
    for g in sl2_elements(F):
        fixed = normalize(embed_pgl2(g) @ list(P), F) == P
        assert fixed == F.is_zero(g.b)


def test_parse_point():
    F = GF(4)
    assert parse_point("w,w+1,0,1", F) == (2, 3, 0, 1)
    assert parse_point("0,-4,0", GF(5)) == (0, 1, 0)


def embedded(point, F, E):
    if E == F:
        return tuple(point)
    k = 1
    while F.q ** k != E.q:
        k += 1
    big, emb = field_extension(F, k)
    assert big == E
    return tuple(emb[x] for x in point)


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 4, 5]))
def test_lines_through_random_point(index, q):
    F = GF(q)
    pts = model_points(F)
    p = pts[index % len(pts)]
    lines = lines_through(p, F)
    for l in lines:
        E = l.field
        assert l.contains(embedded(p, F, E))
        for s, t in ((1, 0), (0, 1), (1, 1)):
            assert on_model(l.point(s, t), E)
    assert len(lines) == len(EXPECTED_LINES[classify_point(p, F)])
    # the rational ones, by brute force over every label of P^2(F)
    through = {line_from_net_point(P, F) for P in projective_points(F, 2)
               if line_from_net_point(P, F).contains(p)}
    assert {l for l in lines if l.field == F} == through
