"""Shared classifier plumbing: reports, hypothesis gates, point normalization
and the 2x2 nilpotent factorization."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

from ..errors import (
    FieldLacksInverses,
    FieldTooSmall,
    HypothesisFailed,
    NotNilpotent,
    RankMismatch,
    SearchExhausted,
    Unresolved,
    UnsupportedGcdShape,
)
from ..jordanlab import candidate_points
from ..mpoly import Poly, _rank_one_square, univariate_gcd, univariate_sqrt
from ..polymap import (
    LinearMap,
    PolyMap,
    PolyMatrix,
    conjugate,
    general_sl_transform,
    is_nilpotent,
    jacobian,
    rank_over_Kx,
)
from ..scalars import Matrix, complete_basis, independent_subset, invert, nullspace, rank, span_rank


@dataclass
class ClassificationReport:
    """Family tag, witness transformation and normal form of a classified map."""

    family: str
    T: Matrix
    normal_form: PolyMap
    source: PolyMap
    S: Matrix | None = None
    residual_params: dict = dc_field(default_factory=dict)
    verified: bool = False
    trace: list = dc_field(default_factory=list)
    seed: int | None = None

    def reverse_check(self) -> bool:
        """``S H(T x) = normal_form`` with ``S = T^{-1}`` unless given."""
        S = self.S if self.S is not None else invert(self.T)
        return general_sl_transform(self.source, S, self.T) == self.normal_form

    def to_dict(self) -> dict:
        K = self.T.field

        def enc(v):
            if isinstance(v, Poly):
                return str(v)
            if isinstance(v, (list, tuple)):
                return [enc(a) for a in v]
            if isinstance(v, bool) or v is None:
                return v
            if isinstance(v, int) and not K.p:
                return str(v)
            try:
                return K.render(K(v))
            except (TypeError, ValueError):
                return str(v)

        out = {
            "family": self.family,
            "verified": self.verified,
            "T": self.T.render(),
            "normal_form": self.normal_form.render(),
            "residual_params": {k: enc(v) for k, v in self.residual_params.items()},
            "trace": list(self.trace),
        }
        if self.S is not None:
            out["S"] = self.S.render()
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def finish_report(report: ClassificationReport, pattern: Callable[[PolyMap], bool]) -> ClassificationReport:
    """Run the reverse-conjugation and pattern checks; raise if either fails."""
    ok_rev = report.reverse_check()
    ok_pat = pattern(report.normal_form)
    report.trace.append(f"reverse transformation reproduces normal form: {ok_rev}")
    report.trace.append(f"normal form matches the {report.family} pattern: {ok_pat}")
    report.verified = ok_rev and ok_pat
    if not report.verified:
        raise Unresolved(f"constructed witness failed verification for {report.family}", report.trace)
    return report


# ---------------------------------------------------------------------------
# gates


def require_sixth(H: PolyMap) -> None:
    if H.field.p in (2, 3):
        raise FieldLacksInverses(f"{H.field} does not contain 1/6")


def require_square(H: PolyMap) -> None:
    if H.m != H.nvars:
        raise HypothesisFailed("map must have as many components as variables")


def require_nilpotent(H: PolyMap, trace: list) -> int:
    JH = jacobian(H)
    tr = JH.trace()
    if not tr.is_zero():
        raise HypothesisFailed("trace of JH is nonzero, so JH is not nilpotent")
    trace.append("tr JH = 0")
    ok, s = is_nilpotent(JH)
    if not ok:
        raise HypothesisFailed("JH is not nilpotent")
    trace.append(f"JH nilpotent with index {s}")
    return s


def require_homogeneous(H: PolyMap, d: int) -> None:
    for c in H:
        if any(sum(e) != d for e in c.terms):
            raise HypothesisFailed(f"map is not homogeneous of degree {d}")


def require_degree(H: PolyMap, d: int) -> None:
    if H.degree() > d:
        raise HypothesisFailed(f"map has degree above {d}")


# ---------------------------------------------------------------------------
# small helpers


def free_of(p: Poly, variables: Sequence[int]) -> bool:
    vs = set(variables)
    return not (p.variables() & vs)


def only_in(p: Poly, variables: Sequence[int]) -> bool:
    return p.variables() <= set(variables)


def basis_matrix(K, columns: Sequence[Sequence]) -> Matrix:
    return Matrix.from_columns(K, [tuple(c) for c in columns])


def with_completion(K, n: int, first: Sequence[Sequence]) -> list[tuple]:
    """``first`` followed by unit vectors completing it to a basis."""
    return complete_basis(list(first), K, n)


def span_basis(K, vectors: Sequence[Sequence]) -> list[tuple]:
    return independent_subset(vectors, K)


def component_span(H: PolyMap) -> list[tuple]:
    """Basis (as constant vectors) of the K-span of the vector-valued monomial coefficients.

    ``H = sum_alpha x^alpha h_alpha``; the returned vectors span
    ``{h_alpha}``, i.e. the smallest subspace ``V`` with ``H in V (x) K[x]``.
    """
    K = H.field
    monos = {e for c in H for e in c.terms}
    vecs = [tuple(c.terms.get(e, K.zero) for c in H) for e in sorted(monos)]
    return independent_subset(vecs, K)


def block_diag(K, *blocks: Matrix) -> Matrix:
    n = sum(b.nrows for b in blocks)
    rows = [[K.zero] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.nrows):
            for j in range(b.ncols):
                rows[off + i][off + j] = b[i, j]
        off += b.nrows
    return Matrix(K, rows)


# ---------------------------------------------------------------------------
# point normalization


def normalize_rkform(H: PolyMap, r: int | None = None, budget: int = 100_000):
    """``(S, T, H~)`` with ``J(S H(T x))`` equal to ``diag(I_r, 0)`` at the base point.

    The base point is ``e_{r+1}`` when ``JH x = 0`` and ``e_1`` otherwise.
    Returns also the case label and the point ``w`` in a dict.
    """
    K = H.field
    n, m = H.nvars, H.m
    JH = jacobian(H)
    actual = rank_over_Kx(JH)
    if r is None:
        r = actual
    elif r != actual:
        raise RankMismatch(f"rank of JH is {actual}, not {r}")
    xs = tuple(Poly.gens(K, n))
    case_i = all(c.is_zero() for c in JH.apply(xs))
    if r == 0:
        S, T = Matrix.identity(K, m), Matrix.identity(K, n)
        return S, T, H, {"case": "i" if case_i else "ii", "w": None}
    tried = 0
    w = None
    for pt in candidate_points(K, n, budget):
        if tried >= budget:
            break
        tried += 1
        M = JH.evaluate(pt)
        if rank(M) != r:
            continue
        if not case_i and all(a == 0 for a in M.apply(pt)):
            continue
        w = pt
        break
    if w is None:
        if K.p and tried < budget:
            raise FieldTooSmall(f"no admissible point over {K}")
        raise SearchExhausted(f"no admissible point among {tried} candidates")
    M = JH.evaluate(w)
    kernel = nullspace(M)
    if case_i:
        kern = [w] + independent_subset(kernel, K, [w])
        full = complete_basis(kern, K, n)
        comp = full[len(kern):]
        cols = comp + kern
    else:
        full = complete_basis([w] + kernel, K, n)
        comp = full[1 + len(kernel):]
        cols = [w] + comp + kernel
    T = basis_matrix(K, cols)
    A = M @ T
    first = [A.col(j) for j in range(r)]
    Sinv = basis_matrix(K, complete_basis(first, K, m))
    S = invert(Sinv)
    Ht = general_sl_transform(H, S, T)
    base = tuple(K.one if j == (r if case_i else 0) else K.zero for j in range(n))
    target = Matrix(K, [[K.one if (i == j and i < r) else K.zero for j in range(n)] for i in range(m)])
    assert jacobian(Ht).evaluate(base) == target
    return S, T, Ht, {"case": "i" if case_i else "ii", "w": w}


# ---------------------------------------------------------------------------
# 2x2 nilpotent matrices


def _univariate_factor(n11: Poly, n12: Poly, n21: Poly):
    K = n11.field
    nv = n11.nvars
    g = univariate_gcd(univariate_gcd(n21, n12), n11) if not (n21.is_zero() and n12.is_zero()) else n11.monic()
    if n21.is_zero():
        a = Poly.zero(K, nv)
        q = (-n12).exact_div(g)
        lam = q.leading_coefficient()
        c = g.scale(lam)
        b = univariate_sqrt(q.scale(K.inv(lam)))
        if b is None:
            raise UnsupportedGcdShape("-N12 / c is not a square")
        return a, b, c
    q = n21.exact_div(g)
    lam = q.leading_coefficient()
    c = g.scale(lam)
    a = univariate_sqrt(q.scale(K.inv(lam)))
    if a is None:
        raise UnsupportedGcdShape("N21 / c is not a square")
    b = n11.exact_div(c * a)
    return a, b, c


def _quadratic_factor(n11: Poly, n12: Poly, n21: Poly):
    K = n11.field
    nv = n11.nvars
    if n21.is_zero():
        kappa, m, _ = _rank_one_square(-n12)
        if kappa is None:
            raise UnsupportedGcdShape("-N12 is not a scalar times a square of a linear form")
        return Poly.zero(K, nv), m, Poly.const(K, nv, kappa)
    kappa, m, _ = _rank_one_square(n21)
    if kappa is None:
        raise UnsupportedGcdShape("N21 is not a scalar times a square of a linear form")
    c = Poly.const(K, nv, kappa)
    b = n11.exact_div(c * m)
    return m, b, c


def factor_nilpotent_2x2(N: PolyMatrix):
    """``(a, b, c, triangularizable)`` with ``N = c [[ab, -b^2], [a^2, -ab]]``.

    Supported shapes: entries that are quadratic forms (products of linear
    forms) or polynomials in one common variable.
    """
    if N.shape != (2, 2):
        raise ValueError("2x2 matrix required")
    K = N.field
    nv = N.nvars
    n11, n12, n21, n22 = N[0, 0], N[0, 1], N[1, 0], N[1, 1]
    if not (n11 + n22).is_zero() or not (n11 * n22 - n12 * n21).is_zero():
        raise NotNilpotent("2x2 matrix is not nilpotent")
    zero = Poly.zero(K, nv)
    if N.is_zero():
        return zero, zero, zero, True
    if K.p == 2:
        raise UnsupportedGcdShape("characteristic 2 is not supported")
    entries = [n11, n12, n21]
    vars_used = set()
    for e in entries:
        vars_used |= e.variables()
    nonzero = [e for e in entries if not e.is_zero()]
    if len(vars_used) <= 1:
        a, b, c = _univariate_factor(n11, n12, n21)
    elif all(e.is_homogeneous() and e.degree() == 2 for e in nonzero):
        a, b, c = _quadratic_factor(n11, n12, n21)
    else:
        raise UnsupportedGcdShape("entries are neither quadratic forms nor univariate")
    rebuilt = [[c * a * b, -(c * b * b)], [c * a * a, -(c * a * b)]]
    if [[n11, n12], [n21, n22]] != rebuilt:
        raise UnsupportedGcdShape("factorization check failed")
    tri = linearly_dependent([a, b])
    return a, b, c, tri


def linearly_dependent(polys: Sequence[Poly]) -> bool:
    K = polys[0].field
    monos = sorted({e for p in polys for e in p.terms})
    if not monos:
        return True
    M = Matrix(K, [[p.terms.get(e, K.zero) for e in monos] for p in polys])
    return rank(M) < len(polys)


@dataclass
class TwoByTwoResult:
    case: str
    T: Matrix
    normal_form: PolyMap
    a: Poly | None
    b: Poly | None
    c: Poly | None


def classify_2x2_nilpotent_cubic(H: PolyMap) -> TwoByTwoResult:
    """Normalize a cubic homogeneous ``H in K[x]^2`` with nilpotent ``J_{x1,x2} H``.

    ``T`` acts on ``x1, x2`` only; the normal form is
    ``T^{-1} H(T(x1, x2), x3, ..., xn)``.
    """
    K = H.field
    n = H.nvars
    if H.m != 2 or n < 2:
        raise HypothesisFailed("need two components in at least two variables")
    require_homogeneous(H, 3)
    J = jacobian(H, [0, 1])
    if not J.trace().is_zero() or not (J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]).is_zero():
        raise HypothesisFailed("J_{x1,x2} H is not nilpotent")
    a, b, c, tri = factor_nilpotent_2x2(J)

    def apply(T2: Matrix):
        T = block_diag(K, T2, Matrix.identity(K, n - 2)) if n > 2 else T2
        subs = [Poly.linear_form(K, row) for row in T.rows]
        return PolyMap([h.subs(subs) for h in H]).left_multiply(invert(T2))

    if tri:
        if a.is_zero() and b.is_zero():
            T2 = Matrix.identity(K, 2)
        else:
            g = b if not b.is_zero() else a
            beta = _ratio(b, g)
            alpha = _ratio(a, g)
            T2 = basis_matrix(K, complete_basis([(beta, alpha)], K, 2))
        Ht = apply(T2)
        Jt = jacobian(Ht, [0, 1])
        assert Jt[1, 0].is_zero() or Jt[0, 1].is_zero()
        return TwoByTwoResult("triangular", T2, Ht, a, b, c)
    kappa = c.constant_term()
    if not c.is_constant() or kappa == 0:
        raise HypothesisFailed("c is not a nonzero constant")
    T2 = Matrix(K, [[kappa, 0], [0, 1]])
    Ht = apply(T2)
    x = Poly.gens(K, n)
    stretch = [x[0].scale(kappa)] + x[1:]
    at = a.subs(stretch).scale(kappa)
    bt = b.subs(stretch)
    _check_block(Ht, at, bt)
    lam = at.coefficient(_unit_exp(n, 1))
    mu = bt.coefficient(_unit_exp(n, 0))
    if lam == 0 and mu == 0:
        if not (free_of(at, [0, 1]) and free_of(bt, [0, 1])):
            raise Unresolved("a~, b~ depend on x1, x2")
        return TwoByTwoResult("case2", T2, Ht, at, bt, Poly.const(K, n, 1))
    if K.p != 3 or lam != mu:
        raise Unresolved("unexpected coupling between a~ and b~")
    T2 = T2 @ Matrix(K, [[K.inv(lam), 0], [0, K.inv(lam)]])
    Ht = apply(T2)
    shrink = [x[0].scale(K.inv(lam)), x[1].scale(K.inv(lam))] + x[2:]
    at, bt = at.subs(shrink), bt.subs(shrink)
    _check_block(Ht, at, bt)
    jab = jacobian(PolyMap([at, bt]), [0, 1])
    assert jab.evaluate((0,) * n) == Matrix(K, [[0, 1], [1, 0]])
    return TwoByTwoResult("case3", T2, Ht, at, bt, Poly.const(K, n, 1))


def _check_block(Ht: PolyMap, a: Poly, b: Poly) -> None:
    J = jacobian(Ht, [0, 1])
    want = [[a * b, -(b * b)], [a * a, -(a * b)]]
    if [list(r) for r in J.rows] != want:
        raise Unresolved("2x2 block does not have the expected shape")


def _unit_exp(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


def _ratio(p: Poly, g: Poly):
    """Scalar ``s`` with ``p = s g`` (``p`` may be zero)."""
    K = p.field
    if p.is_zero():
        return K.zero
    e, cg = g.leading_term()
    return K.div(p.coefficient(e), cg)
