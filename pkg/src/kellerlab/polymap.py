"""Polynomial maps, polynomial matrices and Jacobian calculus."""

from __future__ import annotations

import functools
from itertools import combinations_with_replacement
from typing import Sequence

from .errors import (
    ArityMismatch,
    CharacteristicTooSmall,
    FieldMismatch,
    NoPolynomialInverseWithinCap,
    NotNilpotent,
    Singular,
    ZeroVector,
)
from .mpoly import Poly, _grlex_key, coefficient_matrix, sum_of_products
from .scalars import Field, Matrix, invert, nilpotency_index, nullspace, rank


class PolyMap:
    """Tuple of ``m`` polynomials in ``n`` variables."""

    __slots__ = ("field", "nvars", "components")

    def __init__(self, components: Sequence[Poly], nvars: int | None = None, field: Field | None = None):
        comps = tuple(components)
        if comps:
            field = comps[0].field if field is None else field
            nvars = comps[0].nvars if nvars is None else nvars
        if field is None or nvars is None:
            raise ValueError("empty map needs explicit field and nvars")
        for c in comps:
            if c.field != field:
                raise FieldMismatch(f"{c.field} vs {field}")
            if c.nvars != nvars:
                raise ArityMismatch(f"component in {c.nvars} variables, expected {nvars}")
        self.field = field
        self.nvars = nvars
        self.components = comps

    @classmethod
    def identity(cls, field: Field, n: int) -> "PolyMap":
        return cls(Poly.gens(field, n), n, field)

    @classmethod
    def zero(cls, field: Field, n: int, m: int | None = None) -> "PolyMap":
        return cls([Poly.zero(field, n)] * (n if m is None else m), n, field)

    @classmethod
    def linear(cls, A: Matrix) -> "PolyMap":
        """The map ``x -> A x``."""
        F = A.field
        x = Poly.gens(F, A.ncols)
        return cls([_linear_combination(F, A.ncols, r, x) for r in A.rows], A.ncols, F)

    @property
    def m(self) -> int:
        return len(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def _same_shape(self, other):
        if self.m != other.m or self.nvars != other.nvars:
            raise ArityMismatch("maps of different shapes")

    def __add__(self, other: "PolyMap") -> "PolyMap":
        self._same_shape(other)
        return PolyMap([a + b for a, b in zip(self, other)], self.nvars, self.field)

    def __sub__(self, other: "PolyMap") -> "PolyMap":
        self._same_shape(other)
        return PolyMap([a - b for a, b in zip(self, other)], self.nvars, self.field)

    def __neg__(self):
        return PolyMap([-a for a in self], self.nvars, self.field)

    def scale(self, c) -> "PolyMap":
        return PolyMap([a.scale(c) for a in self], self.nvars, self.field)

    def __call__(self, values: Sequence[Poly] | "PolyMap", maxdeg: int | None = None) -> "PolyMap":
        """Composition ``self(values)``."""
        vals = list(values)
        if len(vals) != self.nvars:
            raise ArityMismatch(f"{len(vals)} values for {self.nvars} variables")
        nv = vals[0].nvars if vals else self.nvars
        cache: dict = {}
        return PolyMap([c.subs(vals, maxdeg, cache) for c in self], nv, self.field)

    def evaluate(self, point: Sequence) -> tuple:
        return tuple(c.evaluate(point) for c in self)

    def degree(self):
        return max((c.degree() for c in self), default=float("-inf"))

    def low_degree(self):
        return min((c.low_degree() for c in self if c), default=float("-inf"))

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for c in self for e in c.terms}
        return len(degs) <= 1

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self)

    def homogeneous_part(self, d: int) -> "PolyMap":
        return PolyMap([c.homogeneous_part(d) for c in self], self.nvars, self.field)

    def truncate(self, d: int) -> "PolyMap":
        return PolyMap([c.truncate(d) for c in self], self.nvars, self.field)

    def left_multiply(self, A: Matrix) -> "PolyMap":
        """The map ``A * self`` for a constant matrix ``A``."""
        if A.ncols != self.m:
            raise ArityMismatch("matrix width does not match map length")
        return PolyMap([_linear_combination(self.field, self.nvars, r, self.components) for r in A.rows], self.nvars, self.field)

    def embed(self, nvars: int, positions: Sequence[int] | None = None) -> "PolyMap":
        return PolyMap([c.embed(nvars, positions) for c in self], nvars, self.field)

    def render(self) -> list[str]:
        return [str(c) for c in self]

    def __str__(self):
        return "(" + ", ".join(self.render()) + ")"

    def __repr__(self):
        return f"PolyMap({self.field}, {self.nvars}, {self.render()})"


def _linear_combination(F: Field, nvars: int, coeffs, polys) -> Poly:
    out = Poly.zero(F, nvars)
    for c, p in zip(coeffs, polys):
        if c:
            out = out + p.scale(c)
    return out


class LinearMap:
    """Invertible constant matrix with a cached exact inverse."""

    __slots__ = ("matrix", "_inverse")

    def __init__(self, matrix: Matrix):
        if matrix.nrows != matrix.ncols:
            raise Singular("non-square matrix is not invertible")
        self.matrix = matrix
        self._inverse = None
        self.inverse  # raises Singular

    @classmethod
    def of(cls, T) -> "LinearMap":
        return T if isinstance(T, LinearMap) else cls(T)

    @classmethod
    def identity(cls, field: Field, n: int) -> "LinearMap":
        return cls(Matrix.identity(field, n))

    @property
    def inverse(self) -> Matrix:
        if self._inverse is None:
            self._inverse = invert(self.matrix)
        return self._inverse

    @property
    def field(self):
        return self.matrix.field

    @property
    def n(self):
        return self.matrix.nrows

    def __matmul__(self, other):
        if isinstance(other, LinearMap):
            return LinearMap(self.matrix @ other.matrix)
        return self.matrix @ other

    def inv(self) -> "LinearMap":
        out = LinearMap.__new__(LinearMap)
        out.matrix = self.inverse
        out._inverse = self.matrix
        return out

    def __eq__(self, other):
        if isinstance(other, LinearMap):
            return self.matrix == other.matrix
        if isinstance(other, Matrix):
            return self.matrix == other
        return NotImplemented

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"LinearMap({self.matrix.render()})"


def _as_matrix(T) -> Matrix:
    return T.matrix if isinstance(T, LinearMap) else T


# ---------------------------------------------------------------------------
# polynomial matrices


class PolyMatrix:
    """Dense matrix with :class:`Poly` entries sharing one ring."""

    __slots__ = ("field", "nvars", "rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence[Poly]], field: Field | None = None, nvars: int | None = None, ncols: int | None = None):
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        first = next((a for r in self.rows for a in r), None)
        self.field = first.field if first is not None else field
        self.nvars = first.nvars if first is not None else nvars

    @classmethod
    def identity(cls, field: Field, nvars: int, n: int) -> "PolyMatrix":
        one, zero = Poly.const(field, nvars, 1), Poly.zero(field, nvars)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], field, nvars)

    @classmethod
    def constant(cls, A: Matrix, nvars: int) -> "PolyMatrix":
        F = A.field
        return cls([[Poly.const(F, nvars, a) for a in r] for r in A.rows], F, nvars, A.ncols)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if isinstance(other, PolyMatrix):
            return self.rows == other.rows
        return NotImplemented

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other):
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.field, self.nvars)

    def __sub__(self, other):
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.field, self.nvars)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            other = PolyMatrix.constant(other, self.nvars)
        if isinstance(other, PolyMatrix):
            if self.ncols != other.nrows:
                raise ArityMismatch(f"shape mismatch {self.shape} @ {other.shape}")
            cols = list(zip(*other.rows))
            F, nv = self.field, self.nvars
            out = [[sum_of_products(zip(r, c), F, nv) for c in cols] for r in self.rows]
            return PolyMatrix(out, F, nv, other.ncols)
        return self.apply(other)

    def __rmatmul__(self, other):
        if isinstance(other, Matrix):
            return PolyMatrix.constant(other, self.nvars) @ self
        return NotImplemented

    def apply(self, v: Sequence) -> tuple:
        """Matrix times a vector of polynomials or scalars."""
        F = self.field
        vec = [a if isinstance(a, Poly) else Poly.const(F, self.nvars, a) for a in v]
        zero = Poly.zero(F, self.nvars)
        out = []
        for r in self.rows:
            s = zero
            for a, b in zip(r, vec):
                if a.terms and b.terms:
                    s = s + a * b
            out.append(s)
        return tuple(out)

    def __pow__(self, k: int) -> "PolyMatrix":
        result = PolyMatrix.identity(self.field, self.nvars, self.nrows)
        for _ in range(k):
            result = result @ self
        return result

    def powers(self, k: int) -> list["PolyMatrix"]:
        """``[M^0, M^1, ..., M^k]`` with early stop once a power vanishes."""
        out = [PolyMatrix.identity(self.field, self.nvars, self.nrows)]
        for _ in range(k):
            if out[-1].is_zero():
                out.append(out[-1])
            else:
                out.append(out[-1] @ self)
        return out

    @property
    def T(self) -> "PolyMatrix":
        return PolyMatrix(list(zip(*self.rows)), self.field, self.nvars, self.nrows)

    def is_zero(self) -> bool:
        return all(not a.terms for r in self.rows for a in r)

    def trace(self) -> Poly:
        s = Poly.zero(self.field, self.nvars)
        for i in range(min(self.nrows, self.ncols)):
            s = s + self.rows[i][i]
        return s

    def evaluate(self, point: Sequence) -> Matrix:
        return Matrix(self.field, [[a.evaluate(point) for a in r] for r in self.rows])

    def subs(self, values: Sequence[Poly]) -> "PolyMatrix":
        nv = values[0].nvars if values else self.nvars
        return PolyMatrix([[a.subs(values) for a in r] for r in self.rows], self.field, nv, self.ncols)

    def embed(self, nvars: int, positions=None) -> "PolyMatrix":
        return PolyMatrix([[a.embed(nvars, positions) for a in r] for r in self.rows], self.field, nvars, self.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self.rows[i][j] for j in cols] for i in rows], self.field, self.nvars, len(cols))

    def coefficient_matrices(self) -> dict[tuple, Matrix]:
        """``{alpha: M_alpha}`` with ``M = sum_alpha x^alpha M_alpha``."""
        F = self.field
        monos = {e for r in self.rows for a in r for e in a.terms}
        out = {}
        for e in sorted(monos, key=_grlex_key, reverse=True):
            out[e] = Matrix(F, [[a.terms.get(e, F.zero) for a in r] for r in self.rows])
        return out

    def render(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self.rows]

    def __repr__(self):
        return f"PolyMatrix({self.render()})"


# ---------------------------------------------------------------------------
# Jacobian calculus


def jacobian(H: PolyMap, wrt: Sequence[int] | None = None) -> PolyMatrix:
    """Entry ``(i, j)`` is ``dH_i / dx_{wrt[j]}`` (0-based indices)."""
    cols = list(range(H.nvars)) if wrt is None else list(wrt)
    return PolyMatrix([[h.diff(j) for j in cols] for h in H], H.field, H.nvars, len(cols))


@functools.lru_cache(maxsize=128)
def is_nilpotent(M: PolyMatrix):
    """``(True, s)`` with ``s`` minimal such that ``M^s = 0``, else ``(False, None)``."""
    n = M.nrows
    if M.nrows != M.ncols:
        raise ArityMismatch("square matrix required")
    if not M.trace().is_zero():
        return False, None
    if M.is_zero():
        return True, 0 if n == 0 else 1
    P = M
    for s in range(1, n + 1):
        if P.is_zero():
            return True, s
        if s == n:
            break
        P = P @ M
    return False, None


def _bareiss(M: PolyMatrix):
    """Fraction-free elimination; returns ``(rank, last pivot, sign)``."""
    F = M.field
    a = [list(r) for r in M.rows]
    m, n = M.nrows, M.ncols
    prev = Poly.const(F, M.nvars, 1)
    sign = 1
    r = 0
    for k in range(min(m, n)):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                e = a[i][j]
                if e.terms:
                    key = (e.degree(), len(e.terms))
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            sign = -sign
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, m):
            aik = a[i][k]
            for j in range(k + 1, n):
                v = piv * a[i][j]
                if aik.terms and a[k][j].terms:
                    v = v - aik * a[k][j]
                a[i][j] = v.exact_div(prev) if not prev.is_constant() else v.scale(F.inv(prev.constant_term()))
            a[i][k] = Poly.zero(F, M.nvars)
        prev = piv
        r += 1
    return r, prev, sign, a


def rank_over_Kx(M: PolyMatrix) -> int:
    """Rank of ``M`` over the rational function field ``K(x)``."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return _bareiss(M)[0]


def det_poly(M: PolyMatrix) -> Poly:
    if M.nrows != M.ncols:
        raise ArityMismatch("square matrix required")
    n = M.nrows
    if n == 0:
        return Poly.const(M.field, M.nvars, 1)
    r, last, sign, _ = _bareiss(M)
    if r < n:
        return Poly.zero(M.field, M.nvars)
    return last if sign > 0 else -last


def is_keller(F: PolyMap) -> bool:
    if F.m != F.nvars:
        raise ArityMismatch("Keller test needs a square map")
    d = det_poly(jacobian(F))
    return d.is_constant() and not d.is_zero()


def linear_substitution(T, nvars: int | None = None) -> list[Poly]:
    """Components of ``x -> T x`` as polynomials."""
    A = _as_matrix(T)
    F = A.field
    x = Poly.gens(F, A.ncols if nvars is None else nvars)
    return [_linear_combination(F, len(x), r, x) for r in A.rows]


def conjugate(H: PolyMap, T) -> PolyMap:
    """``T^{-1} H(T x)``."""
    T = LinearMap.of(T)
    if H.m != H.nvars or T.n != H.nvars:
        raise ArityMismatch("conjugation needs a square map of matching size")
    return H(linear_substitution(T.matrix)).left_multiply(T.inverse)


def compose(F: PolyMap, G: PolyMap) -> PolyMap:
    """``F(G(x))``."""
    if F.nvars != G.m:
        raise ArityMismatch(f"cannot compose: F has {F.nvars} inputs, G has {G.m} outputs")
    return F(G.components)


def general_sl_transform(H: PolyMap, S, T) -> PolyMap:
    """``S H(T x)``."""
    S, T = _as_matrix(S), _as_matrix(T)
    if S.ncols != H.m or T.nrows != H.nvars:
        raise ArityMismatch("transform sizes do not match the map")
    return H(linear_substitution(T)).left_multiply(S)


# ---------------------------------------------------------------------------
# inversion


def invert_keller(F: PolyMap, degree_cap: int | None = None, witness=None) -> PolyMap:
    """Polynomial inverse ``G`` of the Keller map ``F = x + H``.

    The affine part of ``F`` is split off first, the formal inverse of the
    remaining map is built degree by degree, and candidates are tested exactly
    in both composition orders.

    ``witness`` is an optional invertible ``T`` for which ``T^-1 F(T x)`` is
    sparse (a classification transform).  The inverse is then computed and
    verified in those coordinates and conjugated back; conjugation by ``T``
    is a ring automorphism, so the exact check there is equivalent to the
    check on ``F`` itself but avoids expanding dense compositions.
    """
    if witness is not None:
        T = _as_matrix(witness)
        Gt = invert_keller(conjugate(F, T), degree_cap)
        return conjugate(Gt, T.inverse())
    n = F.nvars
    K = F.field
    if F.m != n:
        raise ArityMismatch("inversion needs a square map")
    H = F - PolyMap.identity(K, n)
    ok, _ = is_nilpotent(jacobian(H))
    if not ok:
        raise NotNilpotent("JH is not nilpotent")
    d = max(int(H.degree()), 1) if not H.is_zero() else 1
    cap = degree_cap if degree_cap is not None else max(d ** (n - 1), 1)

    b = [c.constant_term() for c in F]
    A = Matrix(K, [c.linear_coefficients() for c in F])
    Ainv = invert(A)
    rest = PolyMap([c.truncate(1) for c in F], n, K)
    Nl = F - rest  # terms of degree >= 2
    x = Poly.gens(K, n)
    G = PolyMap.linear(Ainv)
    if Nl.is_zero():
        return _finish_inverse(F, G, b, x, cap)
    dN = int(Nl.degree())
    schedule = {d**k for k in range(1, n + 1)}
    zero_run = 0
    for j in range(2, cap + 1):
        # degree-j part of A^{-1}(x - N(G)) only needs G up to degree j-1
        NG = Nl(G.components, maxdeg=j)
        newG = PolyMap(
            [gi.truncate(1) - s for gi, s in zip(PolyMap.linear(Ainv), NG.left_multiply(Ainv))], n, K
        ).truncate(j)
        part_zero = newG.homogeneous_part(j).is_zero()
        G = newG
        zero_run = zero_run + 1 if part_zero else 0
        if j == cap or j in schedule or zero_run >= max(dN - 1, 1):
            try:
                return _finish_inverse(F, G, b, x, cap)
            except NoPolynomialInverseWithinCap:
                pass
    raise NoPolynomialInverseWithinCap(f"no polynomial inverse of degree <= {cap}")


def _finish_inverse(F, G0, b, x, cap):
    K = F.field
    n = F.nvars
    shifted = [xi - bi for xi, bi in zip(x, b)]
    G = G0(shifted)
    ident = PolyMap.identity(K, n)
    if G.degree() > cap:
        raise NoPolynomialInverseWithinCap("candidate exceeds the degree cap")
    if compose(F, G) == ident and compose(G, F) == ident:
        return G
    raise NoPolynomialInverseWithinCap("candidate is not an inverse")


# ---------------------------------------------------------------------------
# image and preimage exponents


def _matrix_power_list(M, limit):
    out = [M.__class__.identity(M.field, M.nrows) if isinstance(M, Matrix) else PolyMatrix.identity(M.field, M.nvars, M.nrows)]
    for _ in range(limit):
        out.append(out[-1] @ M)
    return out


def _check_nilpotent(M) -> int:
    if isinstance(M, Matrix):
        return nilpotency_index(M)
    ok, s = is_nilpotent(M)
    if not ok:
        raise NotNilpotent("matrix is not nilpotent")
    return s


def _is_zero_vector(v) -> bool:
    return all((a.is_zero() if isinstance(a, Poly) else a == 0) for a in v)


def image_exponent(M, v: Sequence) -> int:
    """Largest ``i`` with ``M^i v != 0``."""
    if _is_zero_vector(v):
        raise ZeroVector("image exponent of the zero vector")
    s = _check_nilpotent(M)
    ie = 0
    w = tuple(v)
    for i in range(1, s + 1):
        w = M.apply(w)
        if _is_zero_vector(w):
            break
        ie = i
    return ie


def preimage_exponent(M, v: Sequence) -> int:
    """Largest ``i`` with ``v`` in the image of ``M^i``."""
    if _is_zero_vector(v):
        raise ZeroVector("preimage exponent of the zero vector")
    s = _check_nilpotent(M)
    pe = 0
    P = M
    for i in range(1, s + 1):
        if not _in_column_space(P, v):
            break
        pe = i
        P = P @ M
    return pe


def _in_column_space(P, v) -> bool:
    if isinstance(P, Matrix):
        aug = Matrix(P.field, [list(r) + [a] for r, a in zip(P.rows, v)])
        return rank(aug) == rank(P)
    vec = [a if isinstance(a, Poly) else Poly.const(P.field, P.nvars, a) for a in v]
    aug = PolyMatrix([list(r) + [a] for r, a in zip(P.rows, vec)], P.field, P.nvars)
    return rank_over_Kx(aug) == rank_over_Kx(P)


def generic_power_ranks(M: PolyMatrix) -> list[int]:
    """``[rank M^0, rank M^1, ..., rank M^s]`` over ``K(x)`` for nilpotent ``M``."""
    s = _check_nilpotent(M)
    return [rank_over_Kx(P) if k else M.nrows for k, P in enumerate(_matrix_power_list(M, s))]


# ---------------------------------------------------------------------------
# algebraic relations


def _monomials_upto(m: int, d: int):
    out = []
    for deg in range(d + 1):
        for combo in combinations_with_replacement(range(m), deg):
            e = [0] * m
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def find_algebraic_relation(H: PolyMap, dmax: int):
    """Nonzero ``f`` of least degree ``<= dmax`` with ``f(H) = 0``, or ``None``.

    ``f`` lives in a ring with ``m = len(H)`` variables ``y1..ym``.
    """
    if dmax < 1:
        raise ValueError("dmax must be at least 1")
    K = H.field
    m = H.m
    one = Poly.const(K, H.nvars, 1)
    cache: dict = {(0,) * m: one}

    def power(e):
        r = cache.get(e)
        if r is None:
            i = max(k for k in range(m) if e[k])
            prev = list(e)
            prev[i] -= 1
            r = power(tuple(prev)) * H[i]
            cache[e] = r
        return r

    for d in range(1, dmax + 1):
        monos = _monomials_upto(m, d)
        values = [power(e) for e in monos]
        C, cols = coefficient_matrix(values)
        if not cols:
            continue
        null = nullspace(C.T)
        if not null:
            continue
        # prefer the relation with the fewest terms
        vec = min(null, key=lambda v: sum(1 for a in v if a))
        f = Poly(K, m, {e: c for e, c in zip(monos, vec) if c}).monic()
        if not f.subs(list(H.components)).is_zero():
            raise AssertionError("relation check failed")
        return f
    return None


# ---------------------------------------------------------------------------
# identity checks


def check_trdeg1(F: PolyMap) -> dict:
    """Evaluate det JF = 1, nilpotency of JH and JH * JH|_{x=y} = 0."""
    n = F.nvars
    K = F.field
    H = F - PolyMap.identity(K, n)
    JF = jacobian(F)
    JH = jacobian(H)
    det_one = det_poly(JF) == 1
    nilp, _ = is_nilpotent(JH)
    big = JH.embed(2 * n)
    y = [Poly.var(K, 2 * n, n + i) for i in range(n)]
    JHy = JH.subs(y)
    prod_zero = (big @ JHy).is_zero()
    return {"detJF_is_1": det_one, "JH_nilpotent": nilp, "bivariate_product_zero": prod_zero}


def check_qt(H: PolyMap) -> dict:
    """Evaluate JH H = 0 and, when it holds, H(x + tH) = H and nilpotency."""
    K = H.field
    n = H.nvars
    deg = H.degree()
    if K.p and deg != float("-inf") and K.p <= deg:
        raise CharacteristicTooSmall(f"characteristic {K.p} does not exceed deg H = {int(deg)}")
    JH = jacobian(H)
    jhh = all(c.is_zero() for c in JH.apply(H.components))
    report = {"JHH_zero": jhh, "H_fixed_under_shift": None, "nilpotent": None}
    if not jhh:
        return report
    t = Poly.var(K, n + 1, n)
    Hb = H.embed(n + 1)
    shift = [Poly.var(K, n + 1, i) + t * h for i, h in enumerate(Hb)]
    report["H_fixed_under_shift"] = H(shift) == Hb
    report["nilpotent"] = is_nilpotent(JH)[0]
    return report


def constant_left_kernel(M: PolyMatrix) -> list[tuple]:
    """Basis of ``{c in K^m : c^T M = 0}``."""
    F = M.field
    blocks = []
    for A in M.coefficient_matrices().values():
        blocks.extend(A.T.rows)
    if not blocks:
        return [tuple(F.one if i == j else F.zero for i in range(M.nrows)) for j in range(M.nrows)]
    return nullspace(Matrix(F, blocks))


def constant_right_kernel(M: PolyMatrix) -> list[tuple]:
    """Basis of ``{u in K^n : M u = 0}``."""
    return constant_left_kernel(M.T)


def rows_independent_over_K(M: PolyMatrix) -> bool:
    return not constant_left_kernel(M)


def components_dependencies(H: PolyMap) -> list[tuple]:
    """Constant vectors ``c`` with ``sum c_i H_i = 0``."""
    return constant_left_kernel(PolyMatrix([[h] for h in H], H.field, H.nvars, 1))
