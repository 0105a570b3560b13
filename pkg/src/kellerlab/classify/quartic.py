"""Classifiers for quartic maps in dimension three and for dependent
quartic homogeneous maps in dimension four."""

from __future__ import annotations

from fractions import Fraction

from ..errors import HypothesisFailed, KellerError, UnsupportedGcdShape, Unresolved
from ..jordanlab import candidate_points, is_strictly_lower_triangular, is_triangularizable_over_K
from ..mpoly import Poly
from ..polymap import PolyMap, components_dependencies, conjugate, jacobian, rank_over_Kx
from ..scalars import Matrix, invert, nullspace, rank, solve, span_rank
from .core import (
    ClassificationReport,
    basis_matrix,
    component_span,
    factor_nilpotent_2x2,
    finish_report,
    only_in,
    require_homogeneous,
    require_nilpotent,
    require_sixth,
    require_square,
    with_completion,
)

RANK2_FORM = "quartic-rank2-form"
RANK1_FORM = "quartic-rank1-form"
AFFINE_IN_X1X2 = "quartic-affine-in-x1x2"
PARABOLIC = "quartic-parabolic"
DIM4_AFFINE_IN_X1X2 = "quartic-dim4-affine-in-x1x2"
DIM4_PARABOLIC = "quartic-dim4-parabolic"
TRIANGULARIZABLE = "triangularizable"


def _mono(*e):
    return tuple(e)


# ---------------------------------------------------------------------------
# homogeneous quartic maps in dimension three


def classify_quartic_dim3_hmg(H: PolyMap) -> ClassificationReport:
    """Normal form ``(0, x1^4/4, x1^3 x2 + ...)`` or ``(0, x1^4/4 + ..., 0)``."""
    require_sixth(H)
    require_square(H)
    if H.nvars != 3:
        raise HypothesisFailed("three variables required")
    require_homogeneous(H, 4)
    K = H.field
    trace: list = []
    require_nilpotent(H, trace)
    r = rank_over_Kx(jacobian(H))
    trace.append(f"rk JH = {r}")
    if r == 0:
        raise HypothesisFailed("H = 0 has degree below four")
    if r == 2:
        return _quartic_rank2(H, trace)
    return _quartic_rank1(H, trace)


def _quartic_rank2(H: PolyMap, trace) -> ClassificationReport:
    K = H.field
    tri = is_triangularizable_over_K(jacobian(H))
    if tri is None:
        raise Unresolved("quartic Jacobian is not triangularizable", trace)
    T0 = tri.matrix
    Hp = conjugate(H, T0)
    trace.append(f"triangularized: {Hp}")
    alpha = Hp[1].coefficient(_mono(4, 0, 0))
    g = Hp[2]
    if not Hp[0].is_zero() or not only_in(Hp[1], [0]) or not only_in(g, [0, 1]) or alpha == 0:
        raise Unresolved("triangularized map has an unexpected shape", trace)
    l22 = K.mul(4, alpha)
    for t in range(0, 64):
        l21 = K(t // 2 if t % 2 == 0 else -(t // 2 + 1))
        point = (K.one, l21, K.zero)
        d2 = g.diff(1).evaluate(point)
        if d2 != 0:
            break
    else:
        raise Unresolved("no admissible shear found", trace)
    g1 = g.evaluate(point)
    l33 = K.mul(l22, d2)
    l32 = K.div(K.mul(g1, l22), alpha)
    L = Matrix(K, [[1, 0, 0], [l21, l22, 0], [0, l32, l33]])
    T = T0 @ L
    rep = ClassificationReport(RANK2_FORM, T, conjugate(H, T), H, trace=trace)
    h3 = rep.normal_form[2]
    rep.residual_params.update(
        {
            "u3": h3.coefficient(_mono(2, 2, 0)),
            "v3": h3.coefficient(_mono(1, 3, 0)),
            "w3": h3.coefficient(_mono(0, 4, 0)),
        }
    )
    return finish_report(rep, _is_rank2_form)


def _quartic_rank1(H: PolyMap, trace) -> ClassificationReport:
    K = H.field
    span = component_span(H)
    if len(span) != 1:
        raise Unresolved("rank one but components span more than a line", trace)
    c = span[0]
    j = next(i for i, a in enumerate(c) if a != 0)
    h = H[j].scale(K.inv(c[j]))
    t1 = None
    for pt in candidate_points(K, 3, 10_000):
        if span_rank([c, pt], K) == 2 and h.evaluate(pt) != 0:
            t1 = pt
            break
    if t1 is None:
        raise Unresolved("no point with h != 0 found", trace)
    h1 = h.evaluate(t1)
    lam = K.mul(4, h1)
    t3 = with_completion(K, 3, [t1, c])[2]
    grad = [h.diff(i).evaluate(t1) for i in range(3)]
    mu = K.div(sum((K.mul(a, b) for a, b in zip(grad, t3)), K.zero), lam)
    t3 = tuple(K.sub(a, K.mul(mu, b)) for a, b in zip(t3, t1))
    T = basis_matrix(K, [t1, tuple(K.mul(lam, a) for a in c), t3])
    rep = ClassificationReport(RANK1_FORM, T, conjugate(H, T), H, trace=trace)
    h2 = rep.normal_form[1]
    rep.residual_params.update(
        {
            "u2": h2.coefficient(_mono(2, 0, 2)),
            "v2": h2.coefficient(_mono(1, 0, 3)),
            "w2": h2.coefficient(_mono(0, 0, 4)),
        }
    )
    return finish_report(rep, _is_rank1_form)


def _quarter(K):
    return K(Fraction(1, 4))


def _is_rank2_form(G: PolyMap) -> bool:
    K = G.field
    x1, x2, _ = Poly.gens(K, 3)
    rest = G[2] - x1**3 * x2
    allowed = {_mono(2, 2, 0), _mono(1, 3, 0), _mono(0, 4, 0)}
    return G[0].is_zero() and G[1] == (x1**4).scale(_quarter(K)) and set(rest.terms) <= allowed


def _is_rank1_form(G: PolyMap) -> bool:
    K = G.field
    x1 = Poly.var(K, 3, 0)
    rest = G[1] - (x1**4).scale(_quarter(K))
    allowed = {_mono(2, 0, 2), _mono(1, 0, 3), _mono(0, 0, 4)}
    return G[0].is_zero() and G[2].is_zero() and set(rest.terms) <= allowed


# ---------------------------------------------------------------------------
# general quartic maps in dimension three


def parabolic_normal_form(K, n: int = 3) -> PolyMap:
    x = Poly.gens(K, n)
    q = x[1] - x[0] * x[0]
    return PolyMap([q, 2 * x[0] * q + x[2], -(q * q)])


def parabolic_dim4_normal_form(K) -> PolyMap:
    x1, x2, x3, x4 = Poly.gens(K, 4)
    q = x2 * x4 - x1 * x1
    return PolyMap([x4 * x4 * q, 2 * x1 * x4 * q + x3 * x4**3, -(q * q), Poly.zero(K, 4)])


def classify_quartic_dim3_general(H: PolyMap) -> ClassificationReport:
    """Triangularizable, affine in ``x1, x2`` over ``K[x3]``, or the parabolic map."""
    require_sixth(H)
    require_square(H)
    if H.nvars != 3:
        raise HypothesisFailed("three variables required")
    if H.degree() > 4:
        raise HypothesisFailed("map has degree above four")
    trace: list = []
    require_nilpotent(H, trace)
    _record_quartic_part(H, trace)
    I3 = Matrix.identity(H.field, 3)
    target = parabolic_normal_form(H.field)
    if H == target:
        trace.append("input is the parabolic normal form")
        return finish_report(ClassificationReport(PARABOLIC, I3, H, H, trace=trace), lambda G: G == target)
    if _is_affine_form(H):
        trace.append("input already has the affine normal form shape")
        rep = ClassificationReport(AFFINE_IN_X1X2, I3, H, H, trace=trace)
        rep.residual_params.update(_block_data(H, trace))
        return finish_report(rep, _is_affine_form)
    tri = is_triangularizable_over_K(jacobian(H))
    if tri is not None:
        trace.append("JH is similar over K to a triangular matrix")
        rep = ClassificationReport(TRIANGULARIZABLE, tri.matrix, conjugate(H, tri.matrix), H, trace=trace)
        return finish_report(rep, lambda G: is_strictly_lower_triangular(jacobian(G)))
    trace.append("JH is not similar over K to a triangular matrix")

    T = _affine_witness(H, trace)
    if T is not None:
        rep = ClassificationReport(AFFINE_IN_X1X2, T, conjugate(H, T), H, trace=trace)
        rep.residual_params.update(_block_data(rep.normal_form, trace))
        return finish_report(rep, _is_affine_form)

    if any(a != 0 for a in H.evaluate((0, 0, 0))):
        raise Unresolved("H(0) != 0, so H is no linear conjugate of the parabolic map", trace)
    T2, _ = _parabolic_witness(H, trace)
    rep = ClassificationReport(PARABOLIC, T2, conjugate(H, T2), H, trace=trace)
    return finish_report(rep, lambda G: G == target)


def _record_quartic_part(H: PolyMap, trace) -> None:
    Q = H.homogeneous_part(4)
    if Q.is_zero():
        trace.append("quartic part is zero")
        return
    try:
        rep = classify_quartic_dim3_hmg(Q)
    except KellerError as exc:
        trace.append(f"quartic part not normalized: {type(exc).__name__}")
        return
    trace.append(f"quartic part normalizes to {rep.family} via T = {rep.T.render()}")


def _affine_witness(H: PolyMap, trace):
    """``T`` with third component constant and degree one in ``x1, x2``, or ``None``."""
    K = H.field
    varying = PolyMap([h - Poly.const(K, 3, h.constant_term()) for h in H])
    ys = components_dependencies(varying)
    trace.append(f"covectors making H constant: {len(ys)}")
    if len(ys) != 1:
        return None
    y3 = ys[0]
    plane = nullspace(Matrix(K, [list(y3)]))
    j = next(i for i, a in enumerate(y3) if a != 0)
    t3 = tuple(K.inv(y3[j]) if i == j else K.zero for i in range(3))
    T = basis_matrix(K, plane + [t3])
    return T if _is_affine_form(conjugate(H, T)) else None


def _is_affine_form(G: PolyMap) -> bool:
    return G[2].is_constant() and all(max((e[0] + e[1] for e in c.terms), default=0) <= 1 for c in G)


def _block_data(G: PolyMap, trace) -> dict:
    block = jacobian(PolyMap(G.components[:2]), [0, 1])
    try:
        a, b, c, _ = factor_nilpotent_2x2(block)
    except UnsupportedGcdShape as exc:
        trace.append(f"2x2 block not factored: {exc}")
        return {}
    trace.append(f"2x2 block factors with a = {a}, b = {b}, c = {c}")
    return {"a": a, "b": b, "c": c}


def _parabolic_witness(G: PolyMap, trace, shift: tuple | None = None):
    """``(T, shift)`` with ``T^{-1} G(T x + shift)`` the parabolic normal form."""
    K = G.field
    x = Poly.gens(K, 3)
    if shift is None:
        shift = (K.zero,) * 3
    Gs = G([xi + Poly.const(K, 3, s) for xi, s in zip(x, shift)]) if any(shift) else G
    span = component_span(Gs.homogeneous_part(4))
    if len(span) != 1:
        raise Unresolved("quartic part is not a single direction", trace)
    c = span[0]
    A = jacobian(Gs).evaluate((0, 0, 0))
    Ac = A.apply(c)
    T1 = Matrix.from_columns(K, [A.apply(Ac), Ac, c])
    if rank(T1) < 3:
        raise Unresolved("linear part does not generate a cyclic basis", trace)
    Q = conjugate(Gs, T1)
    coef = Q.homogeneous_part(2)[0].coefficient(_mono(2, 0, 0))
    if coef == 0:
        raise Unresolved("quadratic part has an unexpected shape", trace)
    s = K.neg(K.inv(coef))
    T = T1.scale(s)
    trace.append(f"cyclic basis from the linear part, scale {K.render(s)}")
    return T, shift


# ---------------------------------------------------------------------------
# dependent homogeneous quartic maps in dimension four


def classify_quartic_dim4_dependent(H: PolyMap) -> ClassificationReport:
    """Normal form of a quartic homogeneous map in four variables with dependent components."""
    require_sixth(H)
    require_square(H)
    if H.nvars != 4:
        raise HypothesisFailed("four variables required")
    require_homogeneous(H, 4)
    K = H.field
    trace: list = []
    deps = components_dependencies(H)
    if not deps:
        raise HypothesisFailed("components are linearly independent over K")
    require_nilpotent(H, trace)
    tri = is_triangularizable_over_K(jacobian(H))
    if tri is not None:
        trace.append("JH is similar over K to a triangular matrix")
        rep = ClassificationReport(TRIANGULARIZABLE, tri.matrix, conjugate(H, tri.matrix), H, trace=trace)
        return finish_report(rep, lambda G: is_strictly_lower_triangular(jacobian(G)))
    trace.append("JH is not similar over K to a triangular matrix")

    ell = deps[0]
    plane = nullspace(Matrix(K, [list(ell)]))
    j = next(i for i, a in enumerate(ell) if a != 0)
    t4 = tuple(K.inv(ell[j]) if i == j else K.zero for i in range(4))
    T0 = basis_matrix(K, plane + [t4])
    Hp = conjugate(H, T0)
    x = Poly.gens(K, 3)
    chart = x + [Poly.const(K, 3, 1)]
    G = PolyMap([Hp[i].subs(chart) for i in range(3)])
    trace.append(f"dehomogenized: {G}")

    Tt = _affine_witness(G, trace)
    if Tt is not None:
        T = T0 @ _extend(K, Tt, (K.zero,) * 3)
        rep = ClassificationReport(DIM4_AFFINE_IN_X1X2, T, conjugate(H, T), H, trace=trace)
        return finish_report(rep, _is_dim4_affine_form)

    xstar = _parabolic_base_point(G, trace)
    T2, _ = _parabolic_witness(G, trace, xstar)
    T = T0 @ _extend(K, T2, xstar)
    rep = ClassificationReport(DIM4_PARABOLIC, T, conjugate(H, T), H, trace=trace)
    rep.residual_params["base_point"] = list(xstar)
    target = parabolic_dim4_normal_form(K)
    return finish_report(rep, lambda Gt: Gt == target)


def _extend(K, T3: Matrix, shift) -> Matrix:
    rows = [list(T3.rows[i]) + [shift[i]] for i in range(3)]
    rows.append([0, 0, 0, 1])
    return Matrix(K, rows)


def _is_dim4_affine_form(G: PolyMap) -> bool:
    K = G.field
    x4 = Poly.var(K, 4, 3)
    h3 = G[2]
    h3_ok = h3.is_zero() or (set(h3.terms) == {_mono(0, 0, 0, 4)})
    return (
        h3_ok
        and G[3].is_zero()
        and all(max((e[0] + e[1] for e in c.terms), default=0) <= 1 for c in G)
    )


def _parabolic_base_point(G: PolyMap, trace) -> tuple:
    """A zero of ``G`` on the plane where the quartic direction form vanishes."""
    K = G.field
    if all(a == 0 for a in G.evaluate((0, 0, 0))):
        return (K.zero,) * 3
    Q = G.homogeneous_part(4)
    ell = _quartic_linear_form(Q, trace)
    P = nullspace(Matrix(K, [list(ell)]))
    y = Poly.gens(K, 2)
    along = [y[0].scale(P[0][i]) + y[1].scale(P[1][i]) for i in range(3)]
    gs = [g.subs(along) for g in G]
    high = sorted({e for g in gs for e in g.terms if sum(e) >= 2})
    M = Matrix(K, [[g.coefficient(e) for g in gs] for e in high]) if high else None
    lams = nullspace(M) if M is not None else [tuple(K.one if i == j else K.zero for i in range(3)) for j in range(3)]
    if len(lams) < 2:
        raise Unresolved("fewer than two combinations are affine on the plane", trace)
    rows, rhs = [], []
    for lam in lams[:2]:
        f = sum((g.scale(a) for g, a in zip(gs, lam)), Poly.zero(K, 2))
        rows.append([f.coefficient((1, 0)), f.coefficient((0, 1))])
        rhs.append(K.neg(f.constant_term()))
    if rank(Matrix(K, rows)) < 2:
        raise Unresolved("affine equations on the plane have no unique solution", trace)
    sol = solve(Matrix(K, rows), rhs)
    xstar = tuple(K.add(K.mul(sol[0], P[0][i]), K.mul(sol[1], P[1][i])) for i in range(3))
    if any(a != 0 for a in G.evaluate(xstar)):
        raise Unresolved("base point is not a zero of G", trace)
    trace.append(f"base point {[K.render(a) for a in xstar]}")
    return xstar


def _quartic_linear_form(Q: PolyMap, trace) -> tuple:
    """``l`` with every component of ``Q`` a multiple of ``l^4``."""
    K = Q.field
    f = next((c for c in Q if not c.is_zero()), None)
    if f is None:
        raise Unresolved("quartic part vanishes", trace)
    # the gradient of l^4 at any point is proportional to l
    for pt in candidate_points(K, 3, 1000):
        ell = tuple(f.diff(i).evaluate(pt) for i in range(3))
        if not any(ell):
            continue
        l4 = Poly.linear_form(K, ell) ** 4
        for g in Q:
            if g.is_zero():
                continue
            e, cg = g.leading_term()
            ce = l4.coefficient(e)
            if ce == 0 or l4.scale(K.div(cg, ce)) != g:
                raise Unresolved("quartic part is not a fourth power", trace)
        return ell
    raise Unresolved("quartic part has vanishing gradient", trace)
