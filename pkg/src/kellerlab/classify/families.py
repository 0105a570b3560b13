"""Seeded random representatives of every normal-form family.

Each builder draws the free parameters of a normal form with small
rational coefficients, then conjugates by a random ``T`` with entries in
``[-5, 5]``.  The result is a map the matching classifier must recover.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable

from ..mpoly import Poly
from ..polymap import PolyMap, conjugate, is_nilpotent, jacobian, rank_over_Kx
from ..scalars import QQ, Field, Matrix, det
from . import cubic, quartic
from .core import component_span, linearly_dependent


def small_scalar(K: Field, rng: random.Random, nonzero: bool = False):
    while True:
        q = Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2, 3)))
        if K.p and q.denominator % K.p == 0:
            continue
        v = K(q)
        if v != 0 or not nonzero:
            return v


def random_invertible(K: Field, n: int, rng: random.Random, bound: int = 5) -> Matrix:
    while True:
        M = Matrix(K, [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])
        if det(M) != 0:
            return M


def random_form(K: Field, nvars: int, degree: int, variables, rng: random.Random, density: float = 0.6) -> Poly:
    """Random homogeneous polynomial of the given degree in ``variables``."""
    terms = {}
    for combo in combinations_with_replacement(sorted(variables), degree):
        if rng.random() < density:
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            terms[tuple(e)] = small_scalar(K, rng)
    return Poly(K, nvars, terms)


def random_poly(K: Field, nvars: int, degree: int, variables, rng: random.Random, density: float = 0.6) -> Poly:
    out = Poly.zero(K, nvars)
    for d in range(degree + 1):
        out = out + random_form(K, nvars, d, variables, rng, density)
    return out


def shifted(H: PolyMap, s) -> PolyMap:
    x = Poly.gens(H.field, H.nvars)
    return H([xi + Poly.const(H.field, H.nvars, si) for xi, si in zip(x, s)])


def _finish(Ht: PolyMap, rng: random.Random) -> PolyMap:
    T = random_invertible(Ht.field, Ht.nvars, rng)
    return conjugate(Ht, T.inverse())


# ---------------------------------------------------------------------------
# cubic families


def cubic_rows(K, rng, n=4):
    x = Poly.gens(K, n)
    r = rng.choice((1, 2))
    while True:
        fs = [random_form(K, n, 3, range(n), rng) for _ in range(r)]
        if any(f.diff(0).is_zero() for f in fs):
            continue
        Ht = PolyMap(fs + [Poly.zero(K, n)] * (n - r))
        if rank_over_Kx(jacobian(Ht)) == r and not _nilpotent(Ht):
            return _finish(Ht, rng)


def cubic_columns2(K, rng, n=4):
    while True:
        Ht = PolyMap([random_form(K, n, 3, [0, 1], rng, 0.8) for _ in range(n)])
        if rank_over_Kx(jacobian(Ht)) == 2 and len(_span(Ht)) > 2 and not _nilpotent(Ht):
            return _finish(Ht, rng)


def cubic_x3_quadratic_span(K, rng, n=4):
    x = Poly.gens(K, n)
    quads = [x[0] * x[0], x[0] * x[1], x[1] * x[1]]
    while True:
        comps = []
        for _ in range(n):
            q = sum((q.scale(small_scalar(K, rng)) for q in quads), Poly.zero(K, n))
            comps.append(x[2] * q)
        Ht = PolyMap(comps)
        if len(_span(Ht)) == 3 and not _nilpotent(Ht):
            return _finish(Ht, rng)


def cubic_rank1_form(K, rng, n=4):
    while True:
        f = random_form(K, n, 3, range(1, n), rng)
        if not f.is_zero():
            return _finish(PolyMap([f] + [Poly.zero(K, n)] * (n - 1)), rng)


def cubic_rank2_form(K, rng, n=4):
    x = Poly.gens(K, n)
    t1 = random_form(K, n, 3, range(2, n), rng, 0.4)
    t2 = random_form(K, n, 3, range(2, n), rng, 0.4)
    Ht = PolyMap(
        [x[0] * x[2] * x[3] - x[1] * x[3] * x[3] + t1, x[0] * x[2] * x[2] - x[1] * x[2] * x[3] + t2]
        + [Poly.zero(K, n)] * (n - 2)
    )
    return _finish(Ht, rng)


def cubic_dim4_rank3(K, rng):
    n = 4
    x = Poly.gens(K, n)
    t1 = random_form(K, n, 3, [2, 3], rng, 0.5)
    t2 = random_form(K, n, 3, [2, 3], rng, 0.5)
    alpha = small_scalar(K, rng, nonzero=True)
    Ht = PolyMap(
        [
            x[0] * x[2] * x[3] - x[1] * x[3] * x[3] + t1,
            x[0] * x[2] * x[2] - x[1] * x[2] * x[3] + t2,
            x[3] ** 3 * alpha,
            Poly.zero(K, n),
        ]
    )
    return _finish(Ht, rng)


def cubic_dim3_affine(K, rng):
    n = 3
    x = Poly.gens(K, n)
    f = random_poly(K, n, 3, [2], rng, 0.5)
    g = random_poly(K, n, 3, [2], rng, 0.5)
    kappa = Poly.const(K, n, small_scalar(K, rng))
    Ht = PolyMap([x[0] * x[2] - x[1] + f, x[0] * x[2] * x[2] - x[1] * x[2] + g, kappa])
    s = [small_scalar(K, rng) for _ in range(n)]
    return _finish(shifted(Ht, s), rng)


# ---------------------------------------------------------------------------
# quartic families


def quartic_rank2_form(K, rng):
    x = Poly.gens(K, 3)
    u, v, w = (small_scalar(K, rng) for _ in range(3))
    x1, x2 = x[0], x[1]
    Ht = PolyMap(
        [
            Poly.zero(K, 3),
            (x1**4).scale(K(Fraction(1, 4))),
            x1**3 * x2 + (x1**2 * x2**2).scale(u) + (x1 * x2**3).scale(v) + (x2**4).scale(w),
        ]
    )
    return _finish(Ht, rng)


def quartic_rank1_form(K, rng):
    x = Poly.gens(K, 3)
    u, v, w = (small_scalar(K, rng) for _ in range(3))
    x1, x3 = x[0], x[2]
    h = (x1**4).scale(K(Fraction(1, 4))) + (x1**2 * x3**2).scale(u) + (x1 * x3**3).scale(v) + (x3**4).scale(w)
    return _finish(PolyMap([Poly.zero(K, 3), h, Poly.zero(K, 3)]), rng)


def _affine_block_seed(K, rng, n: int):
    """``(c b (a x1 - b x2) + p1, c a (a x1 - b x2) + p2, kappa)`` over ``K[x3]``, degree 4."""
    x = Poly.gens(K, n)
    x3 = x[2]
    while True:
        a = x3.scale(small_scalar(K, rng)) + Poly.const(K, n, small_scalar(K, rng))
        b = x3.scale(small_scalar(K, rng)) + Poly.const(K, n, small_scalar(K, rng))
        c = x3.scale(small_scalar(K, rng)) + Poly.const(K, n, small_scalar(K, rng, nonzero=True))
        if linearly_dependent([a, b]):
            continue
        p1 = random_poly(K, n, 4, [2], rng, 0.5)
        p2 = random_poly(K, n, 4, [2], rng, 0.5)
        L = a * x[0] - b * x[1]
        Ht = PolyMap([c * b * L + p1, c * a * L + p2, Poly.const(K, n, small_scalar(K, rng))])
        if Ht.degree() == 4:
            return Ht


def quartic_affine_in_x1x2(K, rng):
    Ht = _affine_block_seed(K, rng, 3)
    s = [small_scalar(K, rng) for _ in range(3)]
    return _finish(shifted(Ht, s), rng)


def parabolic_seed(K, n: int = 3) -> PolyMap:
    x = Poly.gens(K, n)
    q = x[1] - x[0] * x[0]
    return PolyMap([q, 2 * x[0] * q + x[2], -(q * q)])


def quartic_parabolic(K, rng):
    # translations leave this family (they move H(0) away from 0)
    return _finish(parabolic_seed(K), rng)


def homogenize_quartic(G: PolyMap) -> PolyMap:
    """``(x4^4 G(x/x4), 0)`` for a three-variable map of degree at most four."""
    K = G.field
    y = Poly.gens(K, 4)
    comps = []
    for g in G:
        out = Poly.zero(K, 4)
        for e, c in g.terms.items():
            out = out + Poly(K, 4, {tuple(e) + (4 - sum(e),): c})
        comps.append(out)
    return PolyMap(comps + [Poly.zero(K, 4)])


def quartic_dim4_affine(K, rng):
    Ht = homogenize_quartic(_affine_block_seed(K, rng, 3))
    return _finish(Ht, rng)


def parabolic_dim4_seed(K) -> PolyMap:
    return homogenize_quartic(parabolic_seed(K))


def quartic_dim4_parabolic(K, rng):
    return _finish(parabolic_dim4_seed(K), rng)


# ---------------------------------------------------------------------------


def _nilpotent(H: PolyMap) -> bool:
    return is_nilpotent(jacobian(H))[0]


def _span(H: PolyMap):
    return component_span(H)


FAMILIES: dict[str, Callable] = {
    cubic.ROWS: cubic_rows,
    cubic.COLUMNS2: cubic_columns2,
    cubic.X3_QUADRATIC_SPAN: cubic_x3_quadratic_span,
    cubic.RANK1_FORM: cubic_rank1_form,
    cubic.RANK2_FORM: cubic_rank2_form,
    cubic.DIM4_RANK3: cubic_dim4_rank3,
    cubic.DIM3_AFFINE: cubic_dim3_affine,
    quartic.RANK2_FORM: quartic_rank2_form,
    quartic.RANK1_FORM: quartic_rank1_form,
    quartic.AFFINE_IN_X1X2: quartic_affine_in_x1x2,
    quartic.PARABOLIC: quartic_parabolic,
    quartic.DIM4_AFFINE_IN_X1X2: quartic_dim4_affine,
    quartic.DIM4_PARABOLIC: quartic_dim4_parabolic,
}

NON_TRIANGULARIZABLE = {
    cubic.RANK2_FORM,
    cubic.DIM4_RANK3,
    cubic.DIM3_AFFINE,
    quartic.AFFINE_IN_X1X2,
    quartic.PARABOLIC,
    quartic.DIM4_AFFINE_IN_X1X2,
    quartic.DIM4_PARABOLIC,
}

NOT_NILPOTENT = {cubic.ROWS, cubic.COLUMNS2, cubic.X3_QUADRATIC_SPAN}


def sample(family: str, seed: int, field: Field | None = None) -> PolyMap:
    rng = random.Random(f"{family}:{seed}")
    return FAMILIES[family](field or QQ, rng)
