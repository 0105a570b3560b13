"""Jordan forms with a distinguished vector, evaluation-point search and
triangularizability of polynomial matrices over the constant field."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from .errors import FieldTooSmall, HypothesisFailed, NotNilpotent, SearchExhausted, ZeroVector
from .mpoly import Poly
from .polymap import (
    LinearMap,
    PolyMap,
    PolyMatrix,
    conjugate,
    generic_power_ranks,
    image_exponent,
    is_nilpotent,
    jacobian,
    preimage_exponent,
)
from .scalars import (
    Matrix,
    complete_basis,
    invert,
    jordan_nilpotent,
    left_nullspace,
    nilpotency_index,
    nullspace,
    rank,
    span_rank,
    unit_vector,
)


@dataclass(frozen=True)
class JordanVectorForm:
    """``N = T^{-1} M T`` in Jordan form and ``w = T^{-1} v`` a sum of unit vectors.

    ``indices`` lists the positions of the ones in ``w`` ordered by
    increasing preimage exponent; ``ie_chain`` and ``pe_chain`` hold the
    exponents of the matching unit vectors.
    """

    T: Matrix
    N: Matrix
    w: tuple
    indices: tuple
    ie_chain: tuple
    pe_chain: tuple
    block_sizes: tuple


def _blocks(sizes):
    out, off = [], 0
    for k in sizes:
        out.append((off, k))
        off += k
    return out


def _commuting_shift(F, n, src, dst, delta):
    """Identity plus the block morphism ``e_{src+k} -> e_{dst+k+delta}``."""
    (so, sa), (do, db) = src, dst
    rows = [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]
    for k in range(sa):
        t = k + delta
        if 0 <= t < db:
            rows[do + t][so + k] = F.add(rows[do + t][so + k], F.one)
    return Matrix(F, rows)


def jordan_with_vector(M: Matrix, v: Sequence) -> JordanVectorForm:
    F = M.field
    n = M.nrows
    v = tuple(F(a) for a in v)
    if all(a == 0 for a in v):
        raise ZeroVector("distinguished vector is zero")
    nilpotency_index(M)
    T0, N = jordan_nilpotent(M)
    sizes = _block_sizes_of(N)
    blocks = _blocks(sizes)
    w = invert(T0).apply(v)

    # make w a unit vector inside every block it touches
    rows = [[F.zero] * n for _ in range(n)]
    heads = []
    for bi, (o, k) in enumerate(blocks):
        local = w[o:o + k]
        nz = [j for j, a in enumerate(local) if a != 0]
        if not nz:
            for j in range(k):
                rows[o + j][o + j] = F.one
            continue
        i = nz[0]
        # S = sum_j w_{i+j} N^j restricted to the block
        for col in range(k):
            for j in range(k - i):
                r = col + j
                if r < k:
                    rows[o + r][o + col] = F.add(rows[o + r][o + col], local[i + j])
        heads.append((bi, i))
    T = T0 @ Matrix(F, rows)

    def ie_pe(h):
        bi, i = h
        return sizes[bi] - 1 - i, i

    # merge dominated pairs until the exponents form strict chains
    changed = True
    while changed:
        changed = False
        for a, b in ((a, b) for a in heads for b in heads if a != b):
            ie_a, pe_a = ie_pe(a)
            ie_b, pe_b = ie_pe(b)
            if pe_a <= pe_b and ie_a >= ie_b:
                S = _commuting_shift(F, n, blocks[a[0]], blocks[b[0]], b[1] - a[1])
                T = T @ S
                heads.remove(b)
                changed = True
                break

    heads.sort(key=lambda h: ie_pe(h)[1])
    indices = tuple(blocks[bi][0] + i for bi, i in heads)
    wvec = tuple(F.one if j in indices else F.zero for j in range(n))
    form = JordanVectorForm(
        T=T,
        N=N,
        w=wvec,
        indices=indices,
        ie_chain=tuple(ie_pe(h)[0] for h in heads),
        pe_chain=tuple(ie_pe(h)[1] for h in heads),
        block_sizes=tuple(sizes),
    )
    check_jordan_vector_form(M, v, form)
    return form


def _block_sizes_of(N: Matrix) -> list[int]:
    n = N.nrows
    sizes, k = [], 1
    for i in range(1, n + 1):
        if i < n and N[i, i - 1] != 0:
            k += 1
        else:
            sizes.append(k)
            k = 1
    return sizes


def check_jordan_vector_form(M: Matrix, v: Sequence, form: JordanVectorForm) -> None:
    """Re-verify every invariant of ``form``; raises ``AssertionError``."""
    F = M.field
    n = M.nrows
    Tinv = invert(form.T)
    assert Tinv @ M @ form.T == form.N, "T^-1 M T != N"
    assert Tinv.apply(tuple(F(a) for a in v)) == form.w, "T^-1 v != w"
    ies = [image_exponent(form.N, unit_vector(F, n, i)) for i in form.indices]
    pes = [preimage_exponent(form.N, unit_vector(F, n, i)) for i in form.indices]
    assert tuple(ies) == form.ie_chain and tuple(pes) == form.pe_chain
    assert all(a < b for a, b in zip(ies, ies[1:])), "IE chain not increasing"
    assert all(a < b for a, b in zip(pes, pes[1:])), "PE chain not increasing"
    assert ies[-1] == image_exponent(form.N, form.w)
    assert pes[0] == preimage_exponent(form.N, form.w)
    assert len(form.indices) <= math.isqrt(n - 1) + 1, "too many unit vectors in w"


# ---------------------------------------------------------------------------
# evaluation-point search


@dataclass(frozen=True)
class PointSearchResult:
    T: Matrix
    v: tuple
    w: tuple
    N: Matrix
    form: JordanVectorForm
    generic_ranks: tuple
    ie: int
    pe: int
    candidates_tried: int


def candidate_points(F, n: int, limit: int):
    """Candidate evaluation points in the documented enumeration order."""
    seen = set()
    m = math.isqrt(n - 1) + 1
    for k in range(1, min(m, n) + 1):
        for combo in combinations(range(n), k):
            pt = tuple(F.one if i in combo else F.zero for i in range(n))
            seen.add(pt)
            yield pt
    radius_cap = (F.p - 1) // 2 if F.p else None
    R = 1
    while radius_cap is None or R <= radius_cap:
        vals = range(-R, R + 1)
        for raw in product(vals, repeat=n):
            if max(abs(a) for a in raw) != R:
                continue
            pt = tuple(F(a) for a in raw)
            if pt in seen:
                continue
            seen.add(pt)
            yield pt
        R += 1


def _cardinality_bound(JH: PolyMatrix, H: PolyMap, ie: int) -> int:
    x = [Poly.var(H.field, H.nvars, i) for i in range(H.nvars)]
    vec = tuple(x)
    for _ in range(ie):
        vec = JH.apply(vec)
    f = next((c for c in vec if not c.is_zero()), None)
    if f is None:
        return 1
    d = int(f.degree())
    return d if H.is_homogeneous() else d + 1


def jordan_point_search(H: PolyMap, budget: int = 100_000) -> PointSearchResult:
    """Find ``T`` and ``v`` with ``J(T^{-1}H(Tx))|_{x=T^{-1}v} = N`` in Jordan form."""
    F = H.field
    n = H.nvars
    JH = jacobian(H)
    ok, _ = is_nilpotent(JH)
    if not ok:
        raise NotNilpotent("JH is not nilpotent")
    ranks = tuple(generic_power_ranks(JH))
    xs = tuple(Poly.gens(F, n))
    ie = image_exponent(JH, xs)
    pe = preimage_exponent(JH, xs)

    tried = 0
    exhausted_space = True
    for pt in candidate_points(F, n, budget):
        if tried >= budget:
            exhausted_space = False
            break
        tried += 1
        M = JH.evaluate(pt)
        if not _ranks_match(M, ranks):
            continue
        if image_exponent(M, pt) != ie or preimage_exponent(M, pt) != pe:
            continue
        form = jordan_with_vector(M, pt)
        Ht = conjugate(H, form.T)
        assert jacobian(Ht).evaluate(form.w) == form.N
        return PointSearchResult(form.T, pt, form.w, form.N, form, ranks, ie, pe, tried)
    if F.p:
        bound = _cardinality_bound(JH, H, ie)
        if exhausted_space or F.p < bound:
            raise FieldTooSmall(f"GF({F.p}) has no suitable evaluation point (bound {bound})")
    raise SearchExhausted(f"no evaluation point among {tried} candidates")


def _ranks_match(M: Matrix, ranks: Sequence[int]) -> bool:
    P = M
    for k in range(1, len(ranks)):
        if rank(P) != ranks[k]:
            return False
        P = P @ M
    return True


def normalize_jordancor(H: PolyMap, s: int, budget: int = 100_000):
    """Conjugate ``H`` so that ``J H~`` at ``e1`` is in Jordan form with a leading ``s``-block.

    Returns ``(T, H~, N)``.
    """
    F = H.field
    n = H.nvars
    JH = jacobian(H)
    powers = JH.powers(s)
    if not powers[s].is_zero():
        raise HypothesisFailed(f"(JH)^{s} is not zero")
    xs = tuple(Poly.gens(F, n))
    if s < 1 or all(c.is_zero() for c in powers[s - 1].apply(xs)):
        raise HypothesisFailed(f"(JH)^{s - 1} x is zero")
    res = jordan_point_search(H, budget)
    sizes = list(res.form.block_sizes)
    blocks = _blocks(sizes)
    (head,) = res.form.indices
    bi = next(i for i, (o, k) in enumerate(blocks) if o == head)
    assert sizes[bi] == s
    order = [bi] + [i for i in range(len(blocks)) if i != bi]
    perm_cols = [blocks[i][0] + j for i in order for j in range(blocks[i][1])]
    P = Matrix(F, [[F.one if perm_cols[j] == i else F.zero for j in range(n)] for i in range(n)])
    T = res.T @ P
    N = invert(P) @ res.N @ P
    Ht = conjugate(H, T)
    e1 = unit_vector(F, n, 0)
    assert jacobian(Ht).evaluate(e1) == N
    return T, Ht, N


# ---------------------------------------------------------------------------
# triangularizability over the constant field


def is_triangularizable_over_K(M: PolyMatrix):
    """``T`` with ``T^{-1} M T`` strictly lower triangular, or ``None``."""
    F = M.field
    n = M.nrows
    ok, _ = is_nilpotent(M)
    if not ok:
        raise NotNilpotent("matrix is not nilpotent")
    coeffs = list(M.coefficient_matrices().values())
    if not coeffs:
        return LinearMap(Matrix.identity(F, n))
    chosen: list[tuple] = []  # chosen[0] becomes the last column
    while len(chosen) < n:
        if chosen:
            Q = left_nullspace(Matrix.from_columns(F, chosen))
        else:
            Q = [unit_vector(F, n, i) for i in range(n)]
        stack = []
        for A in coeffs:
            QA = Matrix(F, Q) @ A if Q else None
            if QA is not None:
                stack.extend(QA.rows)
        space = nullspace(Matrix(F, stack)) if stack else [unit_vector(F, n, i) for i in range(n)]
        added = False
        for u in space:
            if span_rank(chosen + [u], F) > len(chosen):
                chosen.append(u)
                added = True
        if not added:
            return None
    T = Matrix.from_columns(F, list(reversed(chosen)))
    Tinv = invert(T)
    for A in coeffs:
        B = Tinv @ A @ T
        assert all(B[i, j] == 0 for i in range(n) for j in range(i, n)), "not strictly lower triangular"
    return LinearMap(T)


def is_strictly_lower_triangular(M: PolyMatrix) -> bool:
    return all(M[i, j].is_zero() for i in range(M.nrows) for j in range(i, M.ncols))
