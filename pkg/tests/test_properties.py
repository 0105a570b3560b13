"""Property tests for the algebraic invariants the library relies on."""

from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from kellerlab.jordanlab import check_jordan_vector_form, is_triangularizable_over_K, jordan_with_vector
from kellerlab.mpoly import Poly
from kellerlab.polymap import (
    PolyMap,
    PolyMatrix,
    compose,
    conjugate,
    image_exponent,
    jacobian,
    preimage_exponent,
)
from kellerlab.scalars import QQ, Matrix, invert

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
small = st.integers(-3, 3)


def exact_degree(n, d):
    """Exponent tuples of total degree d, built from cut points without filtering."""
    cuts = st.lists(st.integers(0, d), min_size=n - 1, max_size=n - 1).map(sorted)
    return cuts.map(lambda c: tuple(b - a for a, b in zip([0, *c], [*c, d])))


def exponents(n, maxdeg):
    return st.integers(0, maxdeg).flatmap(lambda d: exact_degree(n, d))


def polys(n=3, maxdeg=3, max_terms=4):
    return st.dictionaries(exponents(n, maxdeg), coeffs, max_size=max_terms).map(
        lambda d: Poly(QQ, n, {e: c for e, c in d.items() if c})
    )


def forms(n, d, max_terms=3):
    return st.dictionaries(exact_degree(n, d), coeffs, max_size=max_terms).map(lambda t: Poly(QQ, n, {e: c for e, c in t.items() if c}))


@st.composite
def invertible(draw, n):
    """A product of unit lower and upper triangular matrices, so never singular."""
    L = Matrix(QQ, [[1 if i == j else (draw(small) if i > j else 0) for j in range(n)] for i in range(n)])
    U = Matrix(QQ, [[1 if i == j else (draw(small) if i < j else 0) for j in range(n)] for i in range(n)])
    perm = draw(st.permutations(range(n)))
    return Matrix.permutation(QQ, perm) @ L @ U


@st.composite
def triangular_maps(draw, n, d):
    """Homogeneous maps whose k-th component only involves x1..x_{k-1}."""
    comps = [Poly.zero(QQ, n)]
    for k in range(1, n):
        p = draw(forms(k, d))
        comps.append(Poly(QQ, n, {e + (0,) * (n - k): c for e, c in p.terms.items()}))
    return PolyMap(comps, n, QQ)


def xs(n):
    return tuple(Poly.gens(QQ, n))


# polynomial ring


@SETTINGS
@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - a).is_zero()


@SETTINGS
@given(polys(), st.integers(0, 2), st.integers(0, 2))
def test_mixed_partials_commute(p, i, j):
    assert p.diff(i).diff(j) == p.diff(j).diff(i)


@SETTINGS
@given(polys(maxdeg=2), st.lists(polys(maxdeg=2, max_terms=2), min_size=3, max_size=3),
       st.lists(polys(maxdeg=1, max_terms=2), min_size=3, max_size=3))
def test_substitution_composes(p, q, r):
    assert p.subs(q).subs(r) == p.subs([qi.subs(r) for qi in q])


@SETTINGS
@given(st.integers(1, 4).flatmap(lambda d: st.tuples(st.just(d), forms(3, d))))
def test_euler_identity(dp):
    d, p = dp
    x = xs(3)
    assert sum((x[i] * p.diff(i) for i in range(3)), Poly.zero(QQ, 3)) == p.scale(Fraction(d))


# maps


@SETTINGS
@given(st.lists(polys(maxdeg=2, max_terms=3), min_size=3, max_size=3),
       st.lists(polys(maxdeg=2, max_terms=2), min_size=3, max_size=3))
def test_chain_rule(f, g):
    F, G = PolyMap(f, 3, QQ), PolyMap(g, 3, QQ)
    assert jacobian(compose(F, G)) == jacobian(F).subs(list(G)) @ jacobian(G)


@SETTINGS
@given(st.lists(polys(maxdeg=3, max_terms=3), min_size=3, max_size=3), invertible(3))
def test_conjugation_jacobian_identity(h, T):
    H = PolyMap(h, 3, QQ)
    Tx = [Poly.linear_form(QQ, row) for row in T.rows]
    rhs = PolyMatrix.constant(invert(T), 3) @ jacobian(H).subs(Tx) @ PolyMatrix.constant(T, 3)
    assert jacobian(conjugate(H, T)) == rhs


@SETTINGS
@given(st.integers(2, 4).flatmap(lambda d: st.tuples(st.just(d), st.lists(forms(3, d), min_size=3, max_size=3))))
def test_homogeneous_jh_h_identity(dh):
    # JH x = d H, hence (JH)^2 x = d JH H
    d, h = dh
    H = PolyMap(h, 3, QQ)
    J = jacobian(H)
    x = PolyMatrix([[xi] for xi in xs(3)])
    lhs = J @ PolyMatrix([[c] for c in H])
    rhs = J @ J @ x
    assert all(lhs[i, 0] == rhs[i, 0].scale(Fraction(1, d)) for i in range(3))


# exponents of nilpotent matrices


def single_block(n):
    return Matrix(QQ, [[1 if i == j + 1 else 0 for j in range(n)] for i in range(n)])


@SETTINGS
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(invertible(n), st.lists(small, min_size=n, max_size=n))))
def test_exponents_add_up_for_one_block(Tv):
    T, v = Tv
    n = T.nrows
    if not any(v):
        v[0] = 1
    M = T @ single_block(n) @ invert(T)
    assert image_exponent(M, v) + preimage_exponent(M, v) == n - 1


@SETTINGS
@given(triangular_maps(3, 2), invertible(3))
def test_quadratic_preimage_exponent_vanishes(H, T):
    H = conjugate(H, T)
    assert preimage_exponent(jacobian(H), xs(3)) == 0


@SETTINGS
@given(triangular_maps(4, 3), invertible(4), st.lists(small, min_size=4, max_size=4))
def test_jordan_form_at_points(H, T, point):
    M = jacobian(conjugate(H, T)).evaluate(point)
    v = [1, 0, 0, 0]
    form = jordan_with_vector(M, v)
    check_jordan_vector_form(M, v, form)
    assert invert(form.T) @ M @ form.T == form.N
    # block sizes are a similarity invariant
    S = Matrix(QQ, [[1, 1, 0, 0], [0, 1, 2, 0], [0, 0, 1, 1], [1, 0, 0, 1]])
    other = jordan_with_vector(invert(S) @ M @ S, invert(S).apply(v))
    assert sorted(form.block_sizes) == sorted(other.block_sizes)


@SETTINGS
@given(triangular_maps(3, 3), invertible(3))
def test_triangularizability_survives_conjugation(H, T):
    res = is_triangularizable_over_K(jacobian(conjugate(H, T)))
    assert res is not None
