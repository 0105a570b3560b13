from fractions import Fraction

import pytest

from kellerlab.errors import NotNilpotent, Singular
from kellerlab.scalars import (
    QQ,
    Field,
    Matrix,
    det,
    invert,
    jordan_block_sizes,
    jordan_nilpotent,
    nilpotency_index,
    nullspace,
    rank,
    solve,
)

GF7 = Field(7)


def test_field_canonical_forms():
    assert QQ("3/6") == Fraction(1, 2)
    assert GF7(-1) == 6
    assert GF7(Fraction(1, 2)) == 4
    assert str(GF7) == "GF(7)" and str(QQ) == "Q"
    with pytest.raises(ValueError):
        Field(9)
    with pytest.raises(ZeroDivisionError):
        GF7(Fraction(1, 7))


def test_sixth_gate():
    assert QQ.has_sixth and GF7.has_sixth
    assert not Field(2).has_sixth and not Field(3).has_sixth


def test_nullspace_examples():
    assert nullspace(Matrix(QQ, [[1, 0], [0, 0]])) == [(0, 1)]
    zero = Matrix(QQ, [[0] * 3] * 3)
    basis = nullspace(zero)
    assert len(basis) == 3 and rank(Matrix(QQ, basis)) == 3
    assert nullspace(Matrix(GF7, [[0, 3], [0, 0]])) == [(1, 0)]


def test_nullspace_rank_consistency():
    M = Matrix(QQ, [[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]])
    ker = nullspace(M)
    assert len(ker) + rank(M) == M.ncols
    for v in ker:
        assert all(a == 0 for a in M.apply(v))


def test_jordan_nilpotent_examples():
    T, N = jordan_nilpotent(Matrix(QQ, [[0, 0], [0, 0]]))
    assert T == Matrix.identity(QQ, 2) and N == Matrix(QQ, [[0, 0], [0, 0]])
    T, N = jordan_nilpotent(Matrix(QQ, [[0, 1], [0, 0]]))
    assert N == Matrix(QQ, [[0, 0], [1, 0]])
    assert T == Matrix(QQ, [[0, 1], [1, 0]])
    M = Matrix(QQ, [[0, 0], [1, 0]])
    T, N = jordan_nilpotent(M)
    assert T == Matrix.identity(QQ, 2) and N == M


def test_jordan_nilpotent_rejects_non_nilpotent():
    with pytest.raises(NotNilpotent):
        jordan_nilpotent(Matrix(QQ, [[1, 0], [0, 0]]))


def test_jordan_blocks_match_corank_sequence():
    # conjugate of blocks (3, 2, 1) by a fixed invertible matrix
    N0 = Matrix(QQ, [[1 if (i == j + 1 and i not in (3, 5)) else 0 for j in range(6)] for i in range(6)])
    P = Matrix(QQ, [[1, 2, 0, 0, 1, 0], [0, 1, 3, 0, 0, 0], [0, 0, 1, 0, 0, 2], [1, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 1, 0, 0, 0, 1]])
    M = P @ N0 @ invert(P)
    T, N = jordan_nilpotent(M)
    assert invert(T) @ M @ T == N
    assert sorted(jordan_block_sizes(N), reverse=True) == [3, 2, 1]
    assert nilpotency_index(M) == 3


def test_invert_solve_rank_examples():
    I3 = Matrix.identity(QQ, 3)
    assert invert(I3) == I3
    assert rank(Matrix(QQ, [[1, 2], [2, 4]])) == 1
    assert tuple(solve(Matrix(QQ, [[1, 1], [0, 1]]), (3, 2))) == (1, 2)
    with pytest.raises(Singular):
        invert(Matrix(QQ, [[1, 2], [2, 4]]))


def test_inverse_identity_over_gf7():
    M = Matrix(GF7, [[2, 1, 0], [0, 3, 5], [1, 0, 4]])
    assert det(M) != 0
    assert M @ invert(M) == Matrix.identity(GF7, 3)
