"""The correspondence between rank-4 nets and nondegenerate ternary forms.

Symmetric squares of N3 = <alpha, beta, gamma> are indexed in the order
alpha^2, beta*gamma, beta^2, gamma*alpha, gamma^2, alpha*beta (the row order
of the Gram matrix below).  A linear functional on the symmetric square is
represented by the symmetric 3x3 matrix of its values on products, so the
dual of alpha*beta is E12 + E21 and no division by 2 is ever needed.
"""
from __future__ import annotations

import random
from itertools import combinations

from .algebra import (QQ, ZZ, FiniteField, GF, IntegerRing, Matrix, RingError, adjugate,
                      determinant, inverse, pfaffian)
from .forms import (AlternatingNet, BasisChange, TernarySymForm, apply_basis_change,
                    generic_net, variable_groups)

# (row, column) index pairs of the symmetric-square basis
SYM_BASIS = [(0, 0), (1, 2), (1, 1), (2, 0), (2, 2), (0, 1)]
SYM_NAMES = ["alpha^2", "beta*gamma", "beta^2", "gamma*alpha", "gamma^2", "alpha*beta"]

# Slots of the five-dimensional module in terms of monomial duals, with signs.
# The pivot monomial (first with a unit coefficient in Q) is dropped and the
# remaining five, in this order, become e1..e5.
U5_SLOTS = [((0, 0), -1), ((2, 0), 1), ((2, 2), -1), ((0, 1), -1), ((1, 2), 1), ((1, 1), -1)]

PAIRS6 = list(combinations(range(6), 2))


def _pf_minor(X: Matrix, j: int):
    return pfaffian(X.delete(j, j))


def gram_matrix(net: AlternatingNet) -> Matrix:
    """6x5 matrix whose column j holds the Pfaffian data of the 4x4 principal
    submatrices with index j removed, in the symmetric-square row order."""
    R = net.ring
    A, B, C = net.matrices
    cols = []
    for j in range(5):
        pa, pb, pc = (_pf_minor(X, j) for X in (A, B, C))
        pbc = R.sub(R.sub(_pf_minor(B + C, j), pb), pc)
        pca = R.sub(R.sub(_pf_minor(C + A, j), pc), pa)
        pab = R.sub(R.sub(_pf_minor(A + B, j), pa), pb)
        cols.append([pa, pbc, pb, pca, pc, pab])
    return Matrix(R, [list(r) for r in zip(*cols)])


def cokernel_vector(M: Matrix) -> list:
    """Signed maximal minors ((-1)^i det M_i), i = 1..6: spans the kernel of M^T."""
    R = M.ring
    out = []
    for i in range(6):
        d = determinant(M.delete(i, None))
        out.append(R.neg(d) if i & 1 else d)
    return out


def form_from_sym_functional(R, v) -> Matrix:
    """Symmetric matrix of a functional given by its values on SYM_BASIS."""
    m = [[R.zero] * 3 for _ in range(3)]
    for (i, j), x in zip(SYM_BASIS, v):
        m[i][j] = x
        m[j][i] = x
    return Matrix(R, m)


def phi_from_net(net: AlternatingNet) -> TernarySymForm:
    """The ternary form of a net: the functional killing the image of the
    Gram matrix, read off from the signed 5x5 minors."""
    M = gram_matrix(net)
    return TernarySymForm(net.ring, form_from_sym_functional(net.ring, cokernel_vector(M)))


# -- the beta vector, trilinear pairing and P' --------------------------------------

def beta_vector(X: Matrix, Y: Matrix | None = None) -> list:
    """beta(X) with entries (-1)^(j-1) Pf(X_j), or, with two arguments, its
    polarization (-1)^(j-1) [Pf((X+Y)_j) - Pf(X_j) - Pf(Y_j)]."""
    R = X.ring
    out = []
    for j in range(5):
        if Y is None:
            v = _pf_minor(X, j)
        else:
            v = R.sub(R.sub(_pf_minor(X + Y, j), _pf_minor(X, j)), _pf_minor(Y, j))
        out.append(R.neg(v) if j & 1 else v)
    return out


def trilinear(xi, X: Matrix, eta):
    """<xi | X | eta> = sum xi_i X_ij eta_j."""
    R = X.ring
    acc = R.zero
    for i in range(5):
        if R.is_zero(xi[i]):
            continue
        row = R.zero
        for j in range(5):
            if R.is_zero(X[i, j]) or R.is_zero(eta[j]):
                continue
            row = R.add(row, R.mul(X[i, j], eta[j]))
        if not R.is_zero(row):
            acc = R.add(acc, R.mul(xi[i], row))
    return acc


def p_prime(net: AlternatingNet) -> Matrix:
    """The symmetric 3x3 matrix of quintic invariants whose adjugate is the
    form of the net."""
    R = net.ring
    A, B, C = net.matrices
    bAA, bBB, bCC = beta_vector(A), beta_vector(B), beta_vector(C)
    bAB, bBC, bCA = beta_vector(A, B), beta_vector(B, C), beta_vector(C, A)
    p11 = trilinear(bAA, C, bAB)
    p22 = trilinear(bBB, A, bBC)
    p33 = trilinear(bCC, B, bCA)
    p12 = trilinear(bAA, C, bBB)
    p23 = trilinear(bBB, A, bCC)
    p13 = trilinear(bCC, B, bAA)
    return Matrix(R, [[p11, p12, p13], [p12, p22, p23], [p13, p23, p33]])


# -- Theta maps -----------------------------------------------------------------------

def theta_of(P: Matrix) -> Matrix:
    """The 3x15 matrix attached to a symmetric 3x3 matrix P; columns are the
    pairs (i, j), i < j, of symmetric-square indices in lexicographic order."""
    R = P.ring
    p11, p12, p13, p22, p23, p33 = P[0, 0], P[0, 1], P[0, 2], P[1, 1], P[1, 2], P[2, 2]
    z = R.zero
    n = R.neg
    rows = [
        [z, z, z, z, z, n(p22), p13, p33, n(p12), p12, p23, z, z, n(p11), n(p13)],
        [n(p12), z, n(p11), n(p13), z, z, p23, z, p22, z, z, z, n(p33), p12, p23],
        [p13, p12, z, z, p11, z, n(p33), z, n(p23), n(p23), z, n(p22), z, p13, z],
    ]
    return Matrix(R, rows)


def _alt_coords(R, m: Matrix):
    """(Alt_23, Alt_31, Alt_12) of Alt(m) = m - m^T."""
    return [R.sub(m[1, 2], m[2, 1]), R.sub(m[2, 0], m[0, 2]), R.sub(m[0, 1], m[1, 0])]


def theta_from_products(P: Matrix) -> Matrix:
    """Columns Alt(E_i P E_j) for the monomial-dual matrices E_i (oracle for the
    hard-coded table in :func:`theta_of`)."""
    R = P.ring
    duals = [form_from_sym_functional(R, [R.one if k == i else R.zero for k in range(6)])
             for i in range(6)]
    cols = [_alt_coords(R, duals[i] @ P @ duals[j]) for i, j in PAIRS6]
    return Matrix(R, [list(r) for r in zip(*cols)])


def theta_prime(net: AlternatingNet) -> Matrix:
    """Column (i, j) is the net evaluated on m^(i) ^ m^(j), where m^(i) is the
    i-th row of the Gram matrix: sum over k < l of (-1)^(k+l) times the 2x2
    minor of rows i, j and columns k, l times the (k, l) entry."""
    R = net.ring
    M = gram_matrix(net)
    A, B, C = net.matrices
    cols = []
    for i, j in PAIRS6:
        col = [R.zero, R.zero, R.zero]
        for k in range(5):
            for l in range(k + 1, 5):
                mn = R.sub(R.mul(M[i, k], M[j, l]), R.mul(M[i, l], M[j, k]))
                if R.is_zero(mn):
                    continue
                if (k + l) & 1:
                    mn = R.neg(mn)
                for t, X in enumerate((A, B, C)):
                    if not R.is_zero(X[k, l]):
                        col[t] = R.add(col[t], R.mul(mn, X[k, l]))
        cols.append(col)
    return Matrix(R, [list(r) for r in zip(*cols)])


# -- the inverse construction ------------------------------------------------------------

def _quotient_basis(q: TernarySymForm):
    """Five symmetric matrices whose classes modulo Q form a basis of the dual of
    the kernel of Q, following U5_SLOTS; over ZZ without a unit coordinate a
    unimodular completion is used instead."""
    R = q.ring
    Q = q.Q
    coords = [Q[i, j] for i, j in SYM_BASIS]
    dual = {}
    for k, (i, j) in enumerate(SYM_BASIS):
        dual[(i, j)] = form_from_sym_functional(R, [R.one if t == k else R.zero for t in range(6)])
    pivot = next((ij for ij, c in zip(SYM_BASIS, coords) if R.is_unit(c)), None)
    if pivot is not None:
        chosen = [(ij, s) for ij, s in U5_SLOTS if ij != pivot]
        return [dual[ij].scale(R.from_int(s)) for ij, s in chosen], pivot
    if not isinstance(R, IntegerRing):
        raise RingError("form has no unit coordinate")
    return _unimodular_completion(coords), None


def _unimodular_completion(v):
    """Integer 6x6 unimodular matrix with first column v (primitive); returns
    the other five columns as symmetric matrices."""
    n = len(v)
    # reduce v to e1 by elementary column operations recorded on an identity
    ops = [[int(i == j) for j in range(n)] for i in range(n)]  # rows of U with U v = e1
    w = list(v)

    def addrow(dst, src, f):
        w[dst] += f * w[src]
        ops[dst] = [a + f * b for a, b in zip(ops[dst], ops[src])]

    while sum(1 for x in w if x) > 1 or not w[0]:
        nz = [i for i in range(n) if w[i]]
        piv = min(nz, key=lambda i: abs(w[i]))
        for i in nz:
            if i != piv:
                addrow(i, piv, -(w[i] // w[piv]))
        if sum(1 for x in w if x) == 1 and not w[0]:
            addrow(0, piv, 1)
            addrow(piv, 0, -1)
    if w[0] == -1:
        w[0] = 1
        ops[0] = [-a for a in ops[0]]
    if w[0] != 1:
        raise RingError("form coordinates are not primitive")
    Uinv = inverse(Matrix.from_ints(QQ, ops))
    cols = [[int(Uinv[i, k]) for i in range(n)] for k in range(1, n)]
    return [form_from_sym_functional(ZZ, c) for c in cols]


def net_from_form(q: TernarySymForm) -> AlternatingNet:
    """The net of a nondegenerate form: e_k ^ e_l goes to Alt(P_k Q^-1 P_l),
    read in N3 through (Alt_23, Alt_31, Alt_12)."""
    R = q.ring
    if not R.is_unit(determinant(q.Q)):
        raise RingError("form is degenerate (determinant is not a unit)")
    Qinv = adjugate(q.Q).scale(R.inv(determinant(q.Q)))
    basis, _ = _quotient_basis(q)
    mats = [[[R.zero] * 5 for _ in range(5)] for _ in range(3)]
    for k in range(5):
        for l in range(k + 1, 5):
            a, b, c = _alt_coords(R, basis[k] @ Qinv @ basis[l])
            for t, v in enumerate((a, b, c)):
                mats[t][k][l] = v
                mats[t][l][k] = R.neg(v)
    return AlternatingNet(R, *(Matrix(R, m) for m in mats))


# -- round trips ------------------------------------------------------------------------

class RoundTripFailure(AssertionError):
    pass


def form_roundtrip(q: TernarySymForm):
    """Send q to its net and back.  Returns (form, T, lam) with
    T^T q T = lam * form; the expected witness is T = I and a unit lam
    (depending on the pivot chosen for the quotient basis)."""
    from .forms import similar_forms
    R = q.ring
    back = phi_from_net(net_from_form(q))
    I = Matrix.identity(R, 3)
    if isinstance(R, IntegerRing):
        candidates = [R.one, R.neg(R.one)]
    else:
        pos = next(((i, j) for i in range(3) for j in range(3) if R.is_unit(back.Q[i, j])), None)
        candidates = [] if pos is None else [R.mul(q.Q[pos], R.inv(back.Q[pos]))]
    for lam in candidates:
        if R.is_unit(lam) and q.Q == back.Q.scale(lam):
            return back, I, lam
    if isinstance(R, FiniteField) and R.q <= 9:
        hit = similar_forms(q, back)
        if hit:
            return back, hit[0], hit[1]
    raise RoundTripFailure("no similarity witness for the form round trip")


def net_roundtrip_witness(net: AlternatingNet) -> BasisChange:
    """BasisChange g with g . net equal to the net of the form of ``net``.

    U has columns D M^T p_k, where p_k are the symmetric matrices chosen for
    the form (as vectors of pairing values), M is the Gram matrix and
    D = diag(1, -1, 1, -1, 1); W is 1/F times the identity, F = det P'.
    """
    R = net.ring
    q = phi_from_net(net)
    target = net_from_form(q)
    M = gram_matrix(net)
    basis, _ = _quotient_basis(q)
    cols = []
    for P in basis:
        u = M.T @ [P[i, j] for i, j in SYM_BASIS]
        cols.append([R.neg(x) if i & 1 else x for i, x in enumerate(u)])
    U = Matrix(R, [list(r) for r in zip(*cols)])
    F = determinant(p_prime(net))
    g = BasisChange(U, Matrix.identity(R, 3).scale(R.inv(F)))
    if apply_basis_change(net, g) != target:
        raise RoundTripFailure("constructed basis change does not match")
    return g


# -- the master identity ----------------------------------------------------------------

DEFAULT_PRIME = 2 ** 31 - 1


def _first_mismatch(X: Matrix, Y: Matrix):
    for i in range(X.nrows):
        for j in range(X.ncols):
            if X[i, j] != Y[i, j]:
                return i, j
    return None


def degree_audit(Q: Matrix, P: Matrix) -> dict:
    """Degree facts for the symbolic matrices: Q_nu entries homogeneous of degree
    10; P'_ij multihomogeneous of degree (1,1,1) + e_i + e_j."""
    groups = variable_groups()
    q_deg = sorted({d for i in range(3) for j in range(3) for d in Q[i, j].degrees()})
    p_md = {}
    ok = q_deg == [10]
    for i in range(3):
        for j in range(i, 3):
            md = P[i, j].multidegrees(groups)
            want = tuple(1 + (k == i) + (k == j) for k in range(3))
            p_md[f"{i + 1}{j + 1}"] = sorted(md)
            ok = ok and md == {want}
    return {"ok": ok, "Q_nu_degrees": q_deg, "P_prime_multidegrees": {k: [list(t) for t in v] for k, v in p_md.items()}}


def verify_master_identity(mode: str = "symbolic", *, samples: int = 20, seed: int = 0,
                           prime: int = DEFAULT_PRIME, budget: int | None = None,
                           expand_det: bool = True) -> dict:
    """Check adj(P') = Q_nu for the generic net.

    ``symbolic`` works over ZZ in the 30 net coefficients and, when
    ``expand_det`` is set, also expands F = det P' to report its multidegree.
    ``randomized`` evaluates at random nets over GF(prime); each sample misses a
    nonzero difference with probability at most 10/prime.
    """
    from .algebra import TermBudget, BudgetExceeded
    if mode not in ("symbolic", "randomized"):
        raise ValueError(f"unknown mode {mode!r}")
    report = {"identity": "adj(P') = Q_nu", "mode": mode, "status": "pass", "witness": None,
              "terms": 0, "details": {}}
    with TermBudget(budget) as tb:
        try:
            if mode == "symbolic":
                _symbolic(report, expand_det)
            else:
                _randomized(report, samples, seed, prime)
        except BudgetExceeded as exc:
            report["status"] = "budget_exceeded"
            report["details"]["error"] = str(exc)
        report["terms"] = tb.used
    return report


def _symbolic(report, expand_det):
    net, R = generic_net(ZZ)
    Q = phi_from_net(net).Q
    P = p_prime(net)
    adj = adjugate(P)
    bad = _first_mismatch(adj, Q)
    d = report["details"]
    d["Q_nu_terms"] = [[len(Q[i, j]) for j in range(3)] for i in range(3)]
    d["P_prime_terms"] = [[len(P[i, j]) for j in range(3)] for i in range(3)]
    if bad:
        report["status"] = "fail"
        report["witness"] = {"entry": [bad[0] + 1, bad[1] + 1]}
        return
    d["degree_audit"] = degree_audit(Q, P)
    if not d["degree_audit"]["ok"]:
        report["status"] = "fail"
    d["corollaries"] = {
        "P' Q_nu = F E": "implied: P' adj(P') = det(P') E",
        "det Q_nu = F^2": "implied: det adj(X) = det(X)^2 for 3x3 X",
    }
    if expand_det:
        F = P[0, 0] * Q[0, 0] + P[0, 1] * Q[1, 0] + P[0, 2] * Q[2, 0]
        md = sorted(F.multidegrees(variable_groups()))
        d["F"] = {"terms": len(F), "total_degrees": sorted(F.degrees()), "multidegrees": [list(t) for t in md]}
        split_value = F.evaluate(_split_assignment(R), ZZ)
        d["F"]["value_at_split_net"] = split_value
        if md != [(5, 5, 5)] or split_value == 0:
            report["status"] = "fail"


def _split_assignment(R):
    from .forms import split_net, PAIRS
    s = split_net(ZZ)
    vals = {}
    for l, X in zip("abc", s.matrices):
        for i, j in PAIRS:
            vals[f"{l}{i + 1}{j + 1}"] = X[i, j]
    return vals


def _random_net(F, rng):
    from .forms import PAIRS
    mats = []
    for _ in range(3):
        m = [[0] * 5 for _ in range(5)]
        for i, j in PAIRS:
            v = F.random_element(rng)
            m[i][j] = v
            m[j][i] = F.neg(v)
        mats.append(Matrix(F, m))
    return AlternatingNet(F, *mats)


def _randomized(report, samples, seed, prime):
    if samples < 1:
        raise ValueError("samples must be positive")
    F = GF(prime, 1)
    rng = random.Random(seed)
    checked = 0
    for s in range(samples):
        net = _random_net(F, rng)
        Q = phi_from_net(net).Q
        P = p_prime(net)
        det_p = determinant(P)
        checks = {
            "adj(P') = Q_nu": adjugate(P) == Q,
            "P' Q_nu = F E": P @ Q == Matrix.identity(F, 3).scale(det_p),
            "det Q_nu = F^2": determinant(Q) == F.mul(det_p, det_p),
        }
        checked += 1
        failed = [k for k, v in checks.items() if not v]
        if failed:
            report["status"] = "fail"
            report["witness"] = {"sample": s, "failed": failed, "net": net.to_json()}
            break
    report["details"] = {"prime": prime, "samples": checked, "seed": seed,
                         "false_pass_bound": f"(10/{prime})^{checked}"}
