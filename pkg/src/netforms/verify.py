"""Verification suites shared by the command line and the test-suite.

Each suite returns a list of check records ``{"name", "status", "detail"}``
with status "pass" or "fail"; a failing record carries a witness in its
detail.  Randomized checks draw from ``random.Random(seed)`` only, so a suite
is a pure function of its arguments.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from types import SimpleNamespace

from .algebra import GF, QQ, ZZ, Matrix, PolyRing, determinant
from .algebra.projective import normalize, projective_points

SUITES = ("identities", "roundtrip", "actions", "geometry", "arithmetic")
MODES = ("symbolic", "randomized")


def record(name, ok, **detail):
    return {"name": name, "status": "pass" if ok else "fail", "detail": detail}


# -- identities -------------------------------------------------------------------------

def suite_identities(mode="symbolic", samples=20, seed=0):
    from .correspondence import (_random_net, p_prime, phi_from_net, net_from_form, theta_of,
                                 theta_prime, verify_master_identity)
    from .forms import generic_net, split_form, split_net
    from .models import grassmannian_section, y_split_ideal
    out = []
    rep = verify_master_identity(mode, samples=samples, seed=seed)
    out.append(record("adjugate(P′) = Q_ν", rep["status"] == "pass", mode=mode,
                      witness=rep["witness"], terms=rep["terms"]))
    if mode == "symbolic":
        net, _ = generic_net(ZZ)
        out.append(record("Θ′ = Θ(P′)", theta_prime(net) == theta_of(p_prime(net)), mode=mode))
    else:
        F = GF(2 ** 31 - 1, 1)
        rng = random.Random(seed)
        bad = None
        for s in range(samples):
            net = _random_net(F, rng)
            if theta_prime(net) != theta_of(p_prime(net)):
                bad = s
                break
        out.append(record("Θ′ = Θ(P′)", bad is None, mode=mode, samples=samples, failed_sample=bad))
    for R in (ZZ, GF(2)):
        # the signed minors give the split form with lambda = -1 (T = I)
        out.append(record(f"Φ(split net) = split form over {R!r}",
                          phi_from_net(split_net(R)).Q == split_form(R).Q.scale(R.from_int(-1)),
                          witness={"T": "I", "lambda": -1}))
        out.append(record(f"Ψ(split form) = split net over {R!r}",
                          net_from_form(split_form(R)) == split_net(R)))
    sec = grassmannian_section(split_net(ZZ))
    out.append(record("Pfaffian section = split quadrics", sec.generators == y_split_ideal(ZZ).generators))
    return out


# -- round trips ------------------------------------------------------------------------

def symmetric_matrices(field):
    els = list(field.elements())
    for a, b, c, d, e, f in product(els, repeat=6):
        yield Matrix(field, [[a, d, e], [d, b, f], [e, f, c]])


def random_unimodular_form(rng, steps=6, bound=3):
    """T^T D T with D a diagonal unimodular form and T a random product of
    elementary integer matrices."""
    from .forms import TernarySymForm
    D = Matrix.diagonal(ZZ, [rng.choice((-1, 1)) for _ in range(3)])
    T = Matrix.identity(ZZ, 3)
    for _ in range(steps):
        i, j = rng.sample(range(3), 2)
        E = [[int(r == c) for c in range(3)] for r in range(3)]
        E[i][j] = rng.randint(-bound, bound)
        T = T @ Matrix(ZZ, E)
    return TernarySymForm(ZZ, T.T @ D @ T)


def suite_roundtrip(mode="symbolic", samples=20, seed=0):
    from .correspondence import RoundTripFailure, form_roundtrip, net_from_form, net_roundtrip_witness
    from .forms import TernarySymForm
    out = []
    F = GF(3)
    forms = [M for M in symmetric_matrices(F) if determinant(M) != 0]
    if mode == "randomized":
        rng = random.Random(seed)
        forms = rng.sample(forms, min(samples, len(forms)))
    failed = None
    for M in forms:
        try:
            form_roundtrip(TernarySymForm(F, M))
        except RoundTripFailure:
            failed = M.tolist()
            break
    out.append(record("Φ∘Ψ = id up to similarity over GF(3)", failed is None,
                      forms=len(forms), witness=failed))
    rng = random.Random(seed)
    count = 50 if mode == "symbolic" else samples
    failed = None
    for _ in range(count):
        q = random_unimodular_form(rng)
        try:
            _, T, lam = form_roundtrip(q)
            net_roundtrip_witness(net_from_form(q))
        except RoundTripFailure as exc:
            failed = {"form": q.Q.tolist(), "error": str(exc)}
            break
    out.append(record("round trips for random unimodular integral forms", failed is None,
                      forms=count, witness=failed))
    return out


# -- actions -----------------------------------------------------------------------------

def random_sl2_rational(rng, bound=5):
    from .groups import GroupElement2
    x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    y = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    z = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    m = (Matrix(QQ, [[1, x], [0, 1]]) @ Matrix(QQ, [[1, 0], [y, 1]])
         @ Matrix(QQ, [[1, z], [0, 1]]))
    return GroupElement2(QQ, m[0, 0], m[0, 1], m[1, 0], m[1, 1], special=True)


def generic_embedding_check(char2: bool):
    """The stabilizer equations at the embedding of a generic element; in
    characteristic 2 the values must be multiples of det - 1."""
    from .groups import embed_pgl2, embed_sl2_char2, stabilizer_values
    R = PolyRing(GF(2) if char2 else QQ, ["a", "b", "c", "d"])
    a, b, c, d = R.gens()
    g = SimpleNamespace(ring=R, a=a, b=b, c=c, d=d)
    vals = stabilizer_values(embed_sl2_char2(g) if char2 else embed_pgl2(g))
    if not char2:
        return all(v.is_zero() for v in vals)
    det1 = a * d - b * c - R.one
    ok = True
    for v in vals:
        if v.is_zero():
            continue
        try:
            ok &= (v.exact_div(det1) * det1) == v
        except (ArithmeticError, ValueError):
            ok = False
    return ok


def suite_actions(mode="symbolic", samples=20, seed=0):
    from .groups import (equal_up_to_scalar, preserves_quadric_span, sigma, sigma_prime,
                         sl2_elements)
    from .models import y_split_ideal
    out = []
    rng = random.Random(seed)
    pairs = 100 if mode == "symbolic" else samples
    bad = None
    for k in range(pairs):
        g, h = random_sl2_rational(rng), random_sl2_rational(rng)
        if not equal_up_to_scalar(sigma(g) @ sigma(h), sigma(g @ h)):
            bad = {"pair": k, "g": [str(x) for x in (g.a, g.b, g.c, g.d)],
                   "h": [str(x) for x in (h.a, h.b, h.c, h.d)]}
            break
    out.append(record("σ multiplicative up to scalar on SL2(Q)", bad is None, pairs=pairs, witness=bad))
    YQ = y_split_ideal(QQ)
    rng = random.Random(seed + 1)
    ok = all(preserves_quadric_span(sigma(random_sl2_rational(rng)), YQ) for _ in range(min(pairs, 10)))
    out.append(record("σ preserves the quadric span", ok))
    for q in (2, 4):
        F = GF(q)
        G = sl2_elements(F)
        mats = {id(g): sigma_prime(g) for g in G}
        bad = None
        for g in G:
            for h in G:
                if mats[id(g)] @ mats[id(h)] != sigma_prime(g @ h):
                    bad = [g.a, g.b, g.c, g.d, h.a, h.b, h.c, h.d]
                    break
            if bad:
                break
        out.append(record(f"σ′ multiplicative on SL2(GF({q}))", bad is None, elements=len(G), witness=bad))
        Y = y_split_ideal(F)
        out.append(record(f"σ′ preserves the quadric span over GF({q})",
                          all(preserves_quadric_span(mats[id(g)], Y) for g in G)))
    out.append(record("PGL2 embedding satisfies the stabilizer equations", generic_embedding_check(False)))
    out.append(record("SL2 embedding in characteristic 2 satisfies the stabilizer equations",
                      generic_embedding_check(True)))
    return out


# -- geometry ----------------------------------------------------------------------------

POINT_COUNT_FIELDS = (2, 3, 4, 5, 7, 8, 9)
CENSUS_FIELDS = (2, 3, 4, 5)


def nu_check(q):
    from .geometry import O1, O2, classify_point, nu
    F = GF(q)
    P1 = list(projective_points(F, 1))
    images = {}
    labels_ok = True
    for P in P1:
        for Q in P1:
            p = normalize(nu(P, Q, F), F)
            images.setdefault(p, []).append((P, Q))
            labels_ok &= classify_point(p, F) == (O1 if P == Q else O2)
    from .geometry import divisor_value, model_points
    D = {p for p in model_points(F) if F.is_zero(divisor_value(p, F))}
    injective = all(len(v) == 1 for v in images.values())
    return labels_ok and injective and set(images) == D, {"q": q, "image": len(images), "D": len(D)}


def nu_prime_check(q):
    from .geometry import model_points, nu_prime, nu_prime_exceptional
    F = GF(q)
    imgs = [normalize(nu_prime(P, F), F) for P in projective_points(F, 2)
            if not (F.is_zero(P[0]) and F.is_zero(P[1]))]
    imgs += [normalize(nu_prime_exceptional(P, F), F) for P in projective_points(F, 1)]
    D = {p for p in model_points(F) if F.is_zero(p[3])}
    return len(imgs) == len(set(imgs)) and set(imgs) == D, {"q": q, "image": len(set(imgs)), "D_red": len(D)}


def suite_geometry(mode="symbolic", samples=20, seed=0):
    from .geometry import census, model_points, trisecant_points
    out = []
    for q in POINT_COUNT_FIELDS:
        n = len(model_points(GF(q)))
        out.append(record(f"#Y(GF({q})) = 1 + q + q^2 + q^3", n == 1 + q + q * q + q ** 3, count=n))
    for q in CENSUS_FIELDS:
        c = census(q)
        out.append(record(f"census over GF({q})", c["consistent"], orbits=c["orbits"],
                          mismatches=c["mismatches"][:3]))
    F5 = GF(5)
    tri = trisecant_points((0, F5.from_int(-4), 0, 0, 0, 1, 0), F5)
    out.append(record("trisecant of (0,-4,0,0,0,1,0)", [P for P, _ in tri.points] ==
                      [(0, 0, 1), (1, 2, 0), (1, 3, 0)], points=[list(P) for P, _ in tri.points]))
    tri = trisecant_points((1, 0, 0, 1, 0, 0, 1), GF(2))
    out.append(record("trisecant of (1,0,0,1,0,0,1) over GF(4)",
                      tri.field.q == 4 and tri.profile == (1, 1, 1),
                      points=[[tri.field.format(x) for x in P] for P, _ in tri.points]))
    for q in (3, 5):
        ok, det = nu_check(q)
        out.append(record(f"ν bijects P1 x P1 onto D over GF({q})", ok, **det))
    for q in (2, 4, 8):
        ok, det = nu_prime_check(q)
        out.append(record(f"ν′ bijects onto D_red over GF({q})", ok, **det))
    return out


# -- arithmetic ---------------------------------------------------------------------------

ORACLE_PRIMES = (2, 3, 5, 7, 11, 13)


def random_rational(rng, bound=60):
    return Fraction(rng.choice((-1, 1)) * rng.randint(1, bound), rng.randint(1, 6))


def suite_arithmetic(mode="symbolic", samples=20, seed=0):
    from .arithmetic import (CLASS_DEFINITE, CLASS_SPLIT_MODEL, INFINITY, diagonal_form,
                             hilbert_oracle, hilbert_symbol, prime_factors, shafarevich_count,
                             z_classification)
    from .forms import split_form
    out = []
    rng = random.Random(seed)
    n = 500 if mode == "symbolic" else samples
    bad = None
    for _ in range(n):
        a, b = random_rational(rng), random_rational(rng)
        v = rng.choice(ORACLE_PRIMES + (INFINITY,))
        if hilbert_symbol(a, b, v) != hilbert_oracle(a, b, v):
            bad = [str(a), str(b), str(v)]
            break
    out.append(record("Hilbert symbol agrees with the mod p^N oracle", bad is None, cases=n, witness=bad))
    n = 200 if mode == "symbolic" else samples
    bad = None
    for _ in range(n):
        a, b = random_rational(rng), random_rational(rng)
        places = {2, INFINITY}
        for x in (a, b):
            places.update(prime_factors(x.numerator))
            places.update(prime_factors(x.denominator))
        prod = 1
        for v in places:
            prod *= hilbert_symbol(a, b, v)
        if prod != 1:
            bad = [str(a), str(b)]
            break
    out.append(record("product formula", bad is None, pairs=n, witness=bad))
    for S in ([], [3], [3, 5], [3, 5, 7], [3, 5, 7, 11]):
        r = shafarevich_count(S)
        ok = r.verified and r.count == 2 ** (len(r.places) - 1)
        out.append(record(f"Shafarevich count for S = {S}", ok, count=r.count))
    ok = (z_classification(split_form(ZZ)) == CLASS_SPLIT_MODEL
          and z_classification(diagonal_form(1, 1, 1)) == CLASS_DEFINITE)
    out.append(record("Z-classification separates the split and definite forms", ok))
    return out


SUITE_FUNCTIONS = {
    "identities": suite_identities,
    "roundtrip": suite_roundtrip,
    "actions": suite_actions,
    "geometry": suite_geometry,
    "arithmetic": suite_arithmetic,
}


def run_suites(names, mode="symbolic", samples=20, seed=0) -> list:
    if samples < 1:
        raise ValueError("samples must be positive")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    out = []
    for name in names:
        for rec in SUITE_FUNCTIONS[name](mode=mode, samples=samples, seed=seed):
            out.append({"suite": name, **rec})
    return out
