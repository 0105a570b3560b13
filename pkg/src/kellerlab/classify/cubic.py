"""Classifiers for cubic maps: rank at most two, nilpotent up to dimension
four, and the inhomogeneous three-dimensional case."""

from __future__ import annotations

from ..errors import HypothesisFailed, UnsupportedGcdShape, Unresolved
from ..jordanlab import is_strictly_lower_triangular, is_triangularizable_over_K
from ..mpoly import Poly, linear_form_of
from ..polymap import (
    PolyMap,
    components_dependencies,
    conjugate,
    constant_left_kernel,
    constant_right_kernel,
    general_sl_transform,
    jacobian,
    rank_over_Kx,
)
from ..scalars import Matrix, invert, nullspace, span_rank
from .core import (
    ClassificationReport,
    basis_matrix,
    block_diag,
    component_span,
    factor_nilpotent_2x2,
    finish_report,
    free_of,
    linearly_dependent,
    only_in,
    require_homogeneous,
    require_nilpotent,
    require_sixth,
    require_square,
    with_completion,
)

ROWS = "cubic-rows"
COLUMNS2 = "cubic-columns2"
X3_QUADRATIC_SPAN = "cubic-x3-quadratic-span"
TRIANGULARIZABLE = "triangularizable"
RANK1_FORM = "cubic-rank1-form"
RANK2_FORM = "cubic-rank2-form"
DIM4_RANK3 = "cubic-dim4-rank3"
DIM3_AFFINE = "cubic-dim3-affine"


# ---------------------------------------------------------------------------
# rank at most two, arbitrary number of components


def classify_cubic_rank_le2(H: PolyMap) -> ClassificationReport:
    """Two-sided normal form ``S H(T x)`` of a cubic homogeneous map with ``rk JH`` in {1, 2}."""
    require_sixth(H)
    require_homogeneous(H, 3)
    K = H.field
    n, m = H.nvars, H.m
    trace: list = []
    r = rank_over_Kx(jacobian(H))
    trace.append(f"rk JH = {r}")
    if r not in (1, 2):
        raise HypothesisFailed(f"rank of JH is {r}, expected 1 or 2")

    span = component_span(H)
    trace.append(f"components span a space of dimension {len(span)}")
    if len(span) <= r:
        Sinv = basis_matrix(K, with_completion(K, m, span))
        if m == n:
            T, S = Sinv, None
        else:
            T, S = Matrix.identity(K, n), invert(Sinv)
        rep = ClassificationReport(ROWS, T, _apply(H, S, T), H, S, {"r": r}, trace=trace)
        return finish_report(rep, lambda G: all(c.is_zero() for c in G.components[r:]))

    if r == 2:
        kernel = constant_right_kernel(jacobian(H))
        trace.append(f"constant right kernel of JH has dimension {len(kernel)}")
        if len(kernel) >= n - 2:
            cols = with_completion(K, n, kernel)
            T = basis_matrix(K, cols[len(kernel):] + cols[:len(kernel)])
            S = None if m == n else Matrix.identity(K, m)
            rep = ClassificationReport(COLUMNS2, T, _apply(H, S, T), H, S, trace=trace)
            return finish_report(rep, lambda G: all(only_in(c, [0, 1]) for c in G))
        if len(span) == 3 and len(kernel) == n - 3:
            T = _x3_quadratic_witness(H, kernel, trace)
            S = None if m == n else Matrix.identity(K, m)
            rep = ClassificationReport(X3_QUADRATIC_SPAN, T, _apply(H, S, T), H, S, trace=trace)
            return finish_report(rep, _is_x3_quadratic_span)
    raise Unresolved("no rank-two family matched", trace)


def _apply(H: PolyMap, S, T: Matrix) -> PolyMap:
    return general_sl_transform(H, S if S is not None else invert(T), T)


def _x3_quadratic_witness(H: PolyMap, kernel, trace) -> Matrix:
    """``T`` making every component ``x3`` times a quadratic form in ``x1, x2``."""
    K = H.field
    n = H.nvars
    cols = with_completion(K, n, kernel)
    T0 = basis_matrix(K, cols[len(kernel):] + cols[:len(kernel)])
    H0 = conjugate(H, T0)
    # H0 depends on x1, x2, x3 only; look for u with d_u^2 f = 0 on the span
    x3vars = Poly.gens(K, 3)
    pad = x3vars + [Poly.zero(K, 3)] * (n - 3)
    fs = [c.subs(pad) for c in H0 if not c.is_zero()]
    pairs = [(i, j) for i in range(3) for j in range(i, 3)]
    rows = []
    for f in fs:
        second = [f.diff(i).diff(j).scale(1 if i == j else 2) for i, j in pairs]
        monos = sorted({e for p in second for e in p.terms})
        for e in monos:
            rows.append([p.coefficient(e) for p in second])
    sols = nullspace(Matrix(K, rows))
    trace.append(f"symmetric solutions of the second-derivative system: {len(sols)}")
    if len(sols) != 1:
        raise Unresolved("second-derivative system is not one-dimensional", trace)
    U = [[K.zero] * 3 for _ in range(3)]
    for (i, j), val in zip(pairs, sols[0]):
        U[i][j] = U[j][i] = val
    u = next(tuple(row) for row in U if any(a != 0 for a in row))
    f = fs[0]
    g = f.directional(u)
    try:
        ell = f.exact_div(g)
    except ArithmeticError:
        raise Unresolved("components do not share a linear factor", trace)
    lc = linear_form_of(ell)
    if lc is None:
        raise Unresolved("common factor is not a linear form", trace)
    scale = sum((K.mul(a, b) for a, b in zip(lc, u)), K.zero)
    if scale == 0:
        raise Unresolved("common factor vanishes on the special direction", trace)
    plane = nullspace(Matrix(K, [list(lc)]))
    # columns: two vectors with ell = 0, then u scaled so that ell(u) = 1
    T3 = basis_matrix(K, plane + [tuple(K.div(a, scale) for a in u)])
    return T0 @ block_diag(K, T3, Matrix.identity(K, n - 3)) if n > 3 else T0 @ T3


def _is_x3_quadratic_span(G: PolyMap) -> bool:
    K = G.field
    n = G.nvars
    x = Poly.gens(K, n)
    target = [x[2] * x[0] * x[0], x[2] * x[0] * x[1], x[2] * x[1] * x[1]]
    comps = [c for c in G if not c.is_zero()]
    if not comps:
        return False
    full = comps + target
    return _poly_rank(full) == 3 and _poly_rank(target) == 3 and _poly_rank(comps) == 3


def _poly_rank(polys) -> int:
    K = polys[0].field
    monos = sorted({e for p in polys for e in p.terms})
    if not monos:
        return 0
    return span_rank([[p.coefficient(e) for e in monos] for p in polys], K)


# ---------------------------------------------------------------------------
# nilpotent cubic homogeneous maps


def classify_nilpotent_cubic(H: PolyMap) -> ClassificationReport:
    """Conjugation normal form of a cubic homogeneous map with nilpotent Jacobian."""
    require_sixth(H)
    require_square(H)
    require_homogeneous(H, 3)
    K = H.field
    n = H.nvars
    trace: list = []
    require_nilpotent(H, trace)
    JH = jacobian(H)
    r = rank_over_Kx(JH)
    trace.append(f"rk JH = {r}")
    if r > 2 and n != 4:
        raise HypothesisFailed("rank above two is only covered in dimension four")

    if r == 0:
        return _triangular_report(H, Matrix.identity(K, n), trace)

    if r == 1:
        span = component_span(H)
        if len(span) != 1:
            raise Unresolved("rank one but components span more than a line", trace)
        T = _identity_if(H, _is_rank1_form, trace) or basis_matrix(K, with_completion(K, n, span))
        rep = ClassificationReport(RANK1_FORM, T, conjugate(H, T), H, trace=trace)
        rep.residual_params["H1"] = rep.normal_form[0]
        return finish_report(rep, _is_rank1_form)

    tri = is_triangularizable_over_K(JH)
    if tri is not None:
        trace.append("JH is similar over K to a triangular matrix")
        return _triangular_report(H, tri.matrix, trace)
    trace.append("JH is not similar over K to a triangular matrix")

    if r == 2:
        span = component_span(H)
        if len(span) != 2:
            raise Unresolved("rank two but components do not span a plane", trace)

        def pattern(G):
            return _is_rank2_form(G, list(range(2, n)), zero_from=2)

        T = _identity_if(H, pattern, trace)
        if T is None:
            T0 = basis_matrix(K, with_completion(K, n, span))
            T = T0 @ _align_rank2_block(conjugate(H, T0), keep_last=False, trace=trace)
        rep = ClassificationReport(RANK2_FORM, T, conjugate(H, T), H, trace=trace)
        rep.residual_params.update(_tails(rep.normal_form))
        return finish_report(rep, pattern)

    # n = 4, rank 3
    T = _identity_if(H, _is_dim4_rank3_form, trace)
    if T is not None:
        return _dim4_rank3_report(H, T, trace)
    deps = components_dependencies(H)
    if len(deps) != 1:
        raise Unresolved("expected exactly one linear relation among the components", trace)
    ell = deps[0]
    U1 = nullspace(Matrix(K, [list(ell)]))
    left = constant_left_kernel(JH @ JH)
    U2 = nullspace(Matrix(K, left)) if left else []
    trace.append(f"relation {ell}; annihilator of the left kernel of (JH)^2 has dimension {len(U2)}")
    if len(U2) != 2 or span_rank(U1 + U2, K) != 3:
        raise Unresolved("unexpected kernel structure in dimension four", trace)
    t3 = next(u for u in U1 if span_rank(U2 + [u], K) == 3)
    T0 = basis_matrix(K, with_completion(K, n, U2 + [t3]))
    T = T0 @ _align_rank2_block(conjugate(H, T0), keep_last=True, trace=trace)
    return _dim4_rank3_report(H, T, trace)


def _dim4_rank3_report(H: PolyMap, T: Matrix, trace) -> ClassificationReport:
    rep = ClassificationReport(DIM4_RANK3, T, conjugate(H, T), H, trace=trace)
    rep.residual_params.update(_tails(rep.normal_form))
    rep.residual_params["H3"] = rep.normal_form[2]
    return finish_report(rep, _is_dim4_rank3_form)


def _identity_if(H: PolyMap, pattern, trace):
    """``I`` when ``H`` already has the normal form shape, else ``None``."""
    if pattern(H):
        trace.append("input already has the normal form shape")
        return Matrix.identity(H.field, H.nvars)
    return None


def _triangular_report(H: PolyMap, T: Matrix, trace) -> ClassificationReport:
    rep = ClassificationReport(TRIANGULARIZABLE, T, conjugate(H, T), H, trace=trace)
    return finish_report(rep, lambda G: is_strictly_lower_triangular(jacobian(G)))


def _align_rank2_block(Hp: PolyMap, keep_last: bool, trace) -> Matrix:
    """Block-diagonal ``diag(Q, R)`` turning the ``x1, x2`` block into ``[[x3x4, -x4^2], [x3^2, -x3x4]]``.

    ``Hp`` must have its ``x1, x2`` Jacobian block equal to
    ``c [[ab, -b^2], [a^2, -ab]]`` with ``c`` a constant and ``a``, ``b``
    independent linear forms free of ``x1, x2``.  With ``keep_last`` the
    ``x4`` axis is preserved (``n = 4``).
    """
    K = Hp.field
    n = Hp.nvars
    block = jacobian(PolyMap(Hp.components[:2]), [0, 1])
    try:
        a, b, c, tri = factor_nilpotent_2x2(block)
    except UnsupportedGcdShape as exc:
        raise Unresolved(f"2x2 block factorization failed: {exc}", trace)
    trace.append(f"2x2 block factors with a = {a}, b = {b}, c = {c}")
    if tri or not c.is_constant() or not (free_of(a, [0, 1]) and free_of(b, [0, 1])):
        raise Unresolved("2x2 block is not of the expected shape", trace)
    la, lb = linear_form_of(a), linear_form_of(b)
    if la is None or lb is None:
        raise Unresolved("a and b are not linear forms", trace)
    kappa = c.constant_term()
    la, lb = la[2:], lb[2:]
    if keep_last:
        a3, a4 = la
        b3, b4 = lb
        delta = K.sub(K.mul(a3, b4), K.mul(a4, b3))
        r33 = K.inv(K.mul(kappa, delta))
        Q = Matrix(K, [[b4, K.mul(b3, r33)], [a4, K.mul(a3, r33)]])
        R = Matrix(K, [[r33, 0], [0, 1]])
    else:
        rows = [[K.mul(kappa, v) for v in la], list(lb)]
        Rinv = Matrix(K, with_completion(K, n - 2, rows))
        R = invert(Rinv)
        Q = Matrix(K, [[1, 0], [0, K.inv(kappa)]])
    return block_diag(K, Q, R)


def _tails(G: PolyMap) -> dict:
    x = Poly.gens(G.field, G.nvars)
    return {
        "tail1": G[0] - (x[0] * x[2] * x[3] - x[1] * x[3] * x[3]),
        "tail2": G[1] - (x[0] * x[2] * x[2] - x[1] * x[2] * x[3]),
    }


def _is_rank1_form(G: PolyMap) -> bool:
    return free_of(G[0], [0]) and all(c.is_zero() for c in G.components[1:])


def _is_rank2_form(G: PolyMap, tail_vars, zero_from: int) -> bool:
    t = _tails(G)
    return (
        only_in(t["tail1"], tail_vars)
        and only_in(t["tail2"], tail_vars)
        and all(c.is_zero() for c in G.components[zero_from:])
    )


def _is_dim4_rank3_form(G: PolyMap) -> bool:
    return _is_rank2_form(G, [2, 3], zero_from=3) and only_in(G[2], [3])


# ---------------------------------------------------------------------------
# inhomogeneous cubic maps in dimension three


def homogenize(H: PolyMap) -> PolyMap:
    """``(x4^3 H(x/x4), 0)`` for a map of degree at most three in three variables."""
    K = H.field
    n = H.nvars
    y = Poly.gens(K, n + 1)
    comps = []
    for h in H:
        out = Poly.zero(K, n + 1)
        for e, c in h.terms.items():
            mono = Poly.const(K, n + 1, c)
            for i, k in enumerate(e):
                mono = mono * y[i] ** k
            out = out + mono * y[n] ** (3 - sum(e))
        comps.append(out)
    return PolyMap(comps + [Poly.zero(K, n + 1)])


def classify_cubic_dim3_general(H: PolyMap) -> ClassificationReport:
    """Normal form of a cubic map in three variables with nilpotent Jacobian."""
    require_sixth(H)
    require_square(H)
    K = H.field
    n = H.nvars
    if n != 3:
        raise HypothesisFailed("three variables required")
    if H.degree() > 3:
        raise HypothesisFailed("map has degree above three")
    trace: list = []
    require_nilpotent(H, trace)
    trace.append(f"homogenization: {homogenize(H)}")
    JH = jacobian(H)
    tri = is_triangularizable_over_K(JH)
    if tri is not None:
        trace.append("JH is similar over K to a triangular matrix")
        return _triangular_report(H, tri.matrix, trace)
    trace.append("JH is not similar over K to a triangular matrix")

    # covectors y with y . H constant
    varying = PolyMap([h - Poly.const(K, n, h.constant_term()) for h in H])
    ys = components_dependencies(varying)
    trace.append(f"covectors making H constant: {len(ys)}")
    if len(ys) != 1:
        raise Unresolved("expected a single covector annihilating the non-constant part", trace)
    y3 = ys[0]
    plane = nullspace(Matrix(K, [list(y3)]))
    j = next(i for i, a in enumerate(y3) if a != 0)
    t3 = tuple(K.inv(y3[j]) if i == j else K.zero for i in range(n))
    T0 = basis_matrix(K, plane + [t3])
    Hp = conjugate(H, T0)
    block = jacobian(PolyMap(Hp.components[:2]), [0, 1])
    try:
        a, b, c, tri2 = factor_nilpotent_2x2(block)
    except UnsupportedGcdShape as exc:
        raise Unresolved(f"2x2 block factorization failed: {exc}", trace)
    trace.append(f"2x2 block factors with a = {a}, b = {b}, c = {c}")
    if tri2 or not c.is_constant() or not (only_in(a, [2]) and only_in(b, [2])):
        raise Unresolved("2x2 block is not of the expected shape", trace)
    if a.degree() > 1 or b.degree() > 1:
        raise Unresolved("a or b has degree above one", trace)
    e3 = (0, 0, 1)
    a0, a1 = a.constant_term(), a.coefficient(e3)
    b0, b1 = b.constant_term(), b.coefficient(e3)
    delta = K.sub(K.mul(a1, b0), K.mul(a0, b1))
    r = K.inv(K.mul(c.constant_term(), delta))
    U = Matrix(K, [[b0, K.mul(b1, r), 0], [a0, K.mul(a1, r), 0], [0, 0, r]])
    T = T0 @ U
    rep = ClassificationReport(DIM3_AFFINE, T, conjugate(H, T), H, trace=trace)
    G = rep.normal_form
    x = Poly.gens(K, n)
    rep.residual_params.update(
        {"tail1": G[0] - (x[0] * x[2] - x[1]), "tail2": G[1] - (x[0] * x[2] * x[2] - x[1] * x[2]), "H3": G[2]}
    )
    return finish_report(rep, _is_dim3_affine_form)


def _is_dim3_affine_form(G: PolyMap) -> bool:
    x = Poly.gens(G.field, 3)
    return (
        only_in(G[0] - (x[0] * x[2] - x[1]), [2])
        and only_in(G[1] - (x[0] * x[2] * x[2] - x[1] * x[2]), [2])
        and G[2].is_constant()
    )
