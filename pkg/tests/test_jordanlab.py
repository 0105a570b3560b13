import pytest

from kellerlab.errors import HypothesisFailed, NotNilpotent, ZeroVector
from kellerlab.jordanlab import (
    check_jordan_vector_form,
    is_strictly_lower_triangular,
    is_triangularizable_over_K,
    jordan_point_search,
    jordan_with_vector,
    normalize_jordancor,
)
from kellerlab.mpoly import Poly
from kellerlab.polymap import PolyMap, PolyMatrix, conjugate, jacobian
from kellerlab.problem import parse_map, parse_poly
from kellerlab.scalars import QQ, Matrix, invert

RANK2 = ["x1*x3*x4 - x2*x4^2", "x1*x3^2 - x2*x3*x4", "0", "0"]


def subdiagonal(n):
    return Matrix(QQ, [[1 if i == j + 1 else 0 for j in range(n)] for i in range(n)])


def test_jordan_with_vector_corank_one_example():
    M = Matrix(QQ, [[0, 0], [1, 0]])
    form = jordan_with_vector(M, (1, 1))
    assert form.N == M
    assert form.w == (1, 0)
    assert form.T == Matrix(QQ, [[1, 0], [1, 1]])
    check_jordan_vector_form(M, (1, 1), form)


def test_jordan_with_vector_zero_matrix():
    M = Matrix(QQ, [[0] * 3] * 3)
    form = jordan_with_vector(M, (0, 2, 5))
    assert form.N == M
    assert sum(1 for a in form.w if a) == 1
    assert form.ie_chain == (0,) and form.pe_chain == (0,)


def test_jordan_with_vector_already_normal():
    N = subdiagonal(3)
    form = jordan_with_vector(N, (0, 1, 0))
    assert form.N == N and form.w == (0, 1, 0)
    assert form.ie_chain == (1,) and form.pe_chain == (1,)


def test_jordan_with_vector_errors():
    with pytest.raises(ZeroVector):
        jordan_with_vector(subdiagonal(2), (0, 0))
    with pytest.raises(NotNilpotent):
        jordan_with_vector(Matrix.identity(QQ, 2), (1, 0))


def test_point_search_cubic():
    H = parse_map(["x2^3", "0", "0"])
    res = jordan_point_search(H)
    assert sorted(res.form.block_sizes, reverse=True) == [2, 1]
    w = invert(res.T).apply(res.v)
    assert jacobian(conjugate(H, res.T)).evaluate(w) == res.N


def test_point_search_zero_map():
    res = jordan_point_search(PolyMap.zero(QQ, 3))
    assert res.N.is_zero()
    assert res.form.w == (1, 0, 0)


def test_point_search_rank2_form():
    res = jordan_point_search(parse_map(RANK2))
    assert res.ie == 1 and res.pe == 0
    assert sorted(res.form.block_sizes, reverse=True) == [3, 1]
    w = invert(res.T).apply(res.v)
    assert jacobian(conjugate(parse_map(RANK2), res.T)).evaluate(w) == res.N


def test_normalize_jordancor_examples():
    e1 = (1, 0, 0)
    T, Ht, N = normalize_jordancor(parse_map(["0", "x1^2", "0"]), 2)
    assert jacobian(Ht).evaluate(e1) == N
    assert N == Matrix(QQ, [[0, 0, 0], [1, 0, 0], [0, 0, 0]])
    T, Ht, N = normalize_jordancor(parse_map(["x2^3", "0"]), 2)
    assert N == Matrix(QQ, [[0, 0], [1, 0]])
    assert jacobian(Ht).evaluate((1, 0)) == N
    with pytest.raises(HypothesisFailed):
        normalize_jordancor(parse_map(["x2^3", "0"]), 1)


def test_triangularizability_examples():
    T = is_triangularizable_over_K(jacobian(parse_map(["x2^3", "0"])))
    assert T is not None
    assert is_strictly_lower_triangular(PolyMatrix.constant(invert(T.matrix), 2) @ jacobian(parse_map(["x2^3", "0"])) @ PolyMatrix.constant(T.matrix, 2))
    block = PolyMatrix([[parse_poly(t, 4) for t in row] for row in (("x3*x4", "-x4^2"), ("x3^2", "-x3*x4"))])
    assert is_triangularizable_over_K(block) is None
    zero = PolyMatrix([[Poly.zero(QQ, 2)] * 2] * 2)
    assert is_triangularizable_over_K(zero).matrix == Matrix.identity(QQ, 2)
    with pytest.raises(NotNilpotent):
        is_triangularizable_over_K(PolyMatrix.identity(QQ, 2, 2))


def test_triangularizability_is_conjugation_invariant():
    H = parse_map(["0", "x1^3", "x1*x2^2 - x1^3"])
    T = Matrix(QQ, [[1, 2, -1], [0, 1, 3], [2, 0, 1]])
    assert is_triangularizable_over_K(jacobian(H)) is not None
    assert is_triangularizable_over_K(jacobian(conjugate(H, T))) is not None
    G = conjugate(parse_map(RANK2), Matrix(QQ, [[1, 1, 0, 0], [0, 1, 2, 0], [0, 0, 1, 1], [1, 0, 0, 1]]))
    assert is_triangularizable_over_K(jacobian(G)) is None
