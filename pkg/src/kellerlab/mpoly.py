"""Sparse multivariate polynomials and rational functions over a :class:`Field`.

A :class:`Poly` maps exponent tuples to nonzero field elements.  Variables are
positional and rendered ``x1 .. xn``.  Terms are ordered graded
lexicographically with ``x1 > x2 > ...``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    ArityMismatch,
    DivisionByZero,
    FieldMismatch,
    IndexOutOfRange,
    UnsupportedGcdShape,
)
from .scalars import Field, Matrix, nullspace

NEG_INF = float("-inf")
"""Degree of the zero polynomial."""


def _grlex_key(e):
    return (sum(e), e)


class Poly:
    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: Field, nvars: int, terms: Mapping | None = None):
        self.field = field
        self.nvars = nvars
        self._hash = None
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise ArityMismatch(f"exponent {e} has wrong length for {nvars} variables")
                c = field(c)
                if c != 0:
                    clean[e] = c
        self.terms = clean

    @classmethod
    def _raw(cls, field, nvars, terms):
        p = cls.__new__(cls)
        p.field = field
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, field: Field, nvars: int) -> "Poly":
        return cls._raw(field, nvars, {})

    @classmethod
    def const(cls, field: Field, nvars: int, c) -> "Poly":
        c = field(c)
        return cls._raw(field, nvars, {(0,) * nvars: c} if c != 0 else {})

    @classmethod
    def var(cls, field: Field, nvars: int, i: int) -> "Poly":
        """The variable ``x_{i+1}`` (``i`` is 0-based)."""
        if not 0 <= i < nvars:
            raise IndexOutOfRange(f"variable index {i} outside 0..{nvars - 1}")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(field, nvars, {tuple(e): field.one})

    @classmethod
    def gens(cls, field: Field, nvars: int) -> list["Poly"]:
        return [cls.var(field, nvars, i) for i in range(nvars)]

    @classmethod
    def linear_form(cls, field: Field, coeffs: Sequence) -> "Poly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(field, n, terms)

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            if other.nvars != self.nvars:
                raise ArityMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.field, self.nvars, other)
        return NotImplemented

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e)
            if v is None:
                t[e] = c
            else:
                v = (v + c) % p if p else v + c
                if v:
                    t[e] = v
                else:
                    del t[e]
        return Poly._raw(self.field, self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return Poly._raw(self.field, self.nvars, {e: (-c % p if p else -c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Poly._raw(self.field, self.nvars, _mul_terms(self.field.p, self.terms, other.terms, None, self.nvars))

    __rmul__ = __mul__

    def mul_trunc(self, other: "Poly", maxdeg: int) -> "Poly":
        """Product with all terms of total degree above ``maxdeg`` dropped."""
        return Poly._raw(self.field, self.nvars, _mul_terms(self.field.p, self.terms, other.terms, maxdeg, self.nvars))

    def scale(self, c) -> "Poly":
        F = self.field
        c = F(c)
        if c == 0:
            return Poly.zero(F, self.nvars)
        p = F.p
        return Poly._raw(F, self.nvars, {e: (v * c % p if p else v * c) for e, v in self.terms.items()})

    def __truediv__(self, c):
        if isinstance(c, Poly):
            return self.exact_div(c)
        return self.scale(self.field.inv(self.field(c)))

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative exponent")
        result = Poly.const(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(self.field, self.nvars, other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # structure --------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise DivisionByZero("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def leading_coefficient(self):
        return self.leading_term()[1]

    def degree(self):
        """Total degree; :data:`NEG_INF` for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def degree_in(self, variables: Iterable[int]):
        vs = list(variables)
        if not self.terms:
            return NEG_INF
        return max(sum(e[i] for i in vs) for e in self.terms)

    def low_degree(self):
        if not self.terms:
            return NEG_INF
        return min(sum(e) for e in self.terms)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._raw(self.field, self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def homogeneous_parts(self) -> dict[int, "Poly"]:
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: Poly._raw(self.field, self.nvars, t) for d, t in parts.items()}

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def truncate(self, maxdeg: int) -> "Poly":
        return Poly._raw(self.field, self.nvars, {e: c for e, c in self.terms.items() if sum(e) <= maxdeg})

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def coefficient(self, e: Sequence[int]):
        return self.terms.get(tuple(e), self.field.zero)

    def variables(self) -> set[int]:
        """0-based indices of the variables that occur."""
        out = set()
        for e in self.terms:
            out.update(i for i, a in enumerate(e) if a)
        return out

    def linear_coefficients(self) -> tuple:
        """Coefficient vector of the degree-one part."""
        F = self.field
        out = [F.zero] * self.nvars
        for e, c in self.terms.items():
            if sum(e) == 1:
                out[e.index(1)] = c
        return tuple(out)

    # calculus and substitution ----------------------------------------------

    def diff(self, i: int) -> "Poly":
        """Formal partial derivative in ``x_{i+1}``."""
        if not 0 <= i < self.nvars:
            raise IndexOutOfRange(f"variable index {i} outside 0..{self.nvars - 1}")
        p = self.field.p
        t = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                v = c * k
                if p:
                    v %= p
                if v:
                    ne = list(e)
                    ne[i] = k - 1
                    t[tuple(ne)] = v
        return Poly._raw(self.field, self.nvars, t)

    def directional(self, u: Sequence) -> "Poly":
        """``sum_i u_i d/dx_i``."""
        out = Poly.zero(self.field, self.nvars)
        for i, a in enumerate(u):
            if a:
                out = out + self.diff(i).scale(a)
        return out

    def evaluate(self, point: Sequence):
        F = self.field
        if len(point) != self.nvars:
            raise ArityMismatch(f"point has {len(point)} coordinates, expected {self.nvars}")
        p = F.p
        pt = [F(a) for a in point]
        total = 0
        for e, c in self.terms.items():
            v = c
            for a, k in zip(pt, e):
                if k:
                    v = v * a**k
                    if p:
                        v %= p
            total += v
        return F(total)

    def subs(self, values: Sequence["Poly"], maxdeg: int | None = None, cache: dict | None = None) -> "Poly":
        """Composition ``p(values)``; all values share one ambient ring.

        ``cache`` may be shared between calls with the same ``values`` and
        ``maxdeg`` to reuse powers and monomials.
        """
        if len(values) != self.nvars:
            raise ArityMismatch(f"{len(values)} values for {self.nvars} variables")
        if not values:
            return self
        F = self.field
        target = values[0].nvars
        for v in values:
            if v.nvars != target:
                raise ArityMismatch("substituted values live in different rings")
            if v.field != F:
                raise FieldMismatch(f"{F} vs {v.field}")
        if cache is None:
            cache = {}
        powers = cache.setdefault("powers", {})
        monos = cache.setdefault("monomials", {})

        def mul(a, b):
            return a * b if maxdeg is None else a.mul_trunc(b, maxdeg)

        def pw(i, k):
            key = (i, k)
            r = powers.get(key)
            if r is None:
                if k == 1:
                    r = values[i]
                else:
                    h = pw(i, k // 2)
                    r = mul(h, h)
                    if k % 2:
                        r = mul(r, values[i])
                powers[key] = r
            return r

        def mono(e):
            r = monos.get(e)
            if r is None:
                last = max(i for i, k in enumerate(e) if k)
                rest = e[:last] + (0,) * (len(e) - last)
                r = pw(last, e[last])
                if any(rest):
                    r = mul(mono(rest), r)
                monos[e] = r
            return r

        # accumulate on integers over one common denominator
        p = F.p
        ints = cache.setdefault("integer", {})
        const_key = (0,) * target
        parts = []
        L = 1
        for e, c in self.terms.items():
            if not any(e):
                m = ([(_pack(const_key), 1, 0)], 1)
            else:
                m = ints.get(e)
                if m is None:
                    m = ints[e] = _integer_terms(mono(e).terms, p)
            cn, cd = (c, 1) if p else (c.numerator, c.denominator)
            d = cd * m[1]
            if not p:
                L = L * d // math.gcd(L, d)
            parts.append((cn, d, m[0]))
        acc: dict = {}
        get = acc.get
        for cn, d, terms in parts:
            f = cn if p else cn * (L // d)
            for k, tc, _ in terms:
                acc[k] = get(k, 0) + f * tc
        return Poly._raw(F, target, _finish_terms(acc, p, L, target))

    def embed(self, nvars: int, positions: Sequence[int] | None = None) -> "Poly":
        """Same polynomial in a ring with ``nvars`` variables.

        Variable ``i`` becomes variable ``positions[i]`` (default: ``i``).
        """
        pos = list(positions) if positions is not None else list(range(self.nvars))
        t = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for i, k in enumerate(e):
                if k:
                    ne[pos[i]] = k
            t[tuple(ne)] = c
        return Poly._raw(self.field, nvars, t)

    def drop_variables(self, keep: Sequence[int]) -> "Poly":
        """Project onto the variables in ``keep``; others must not occur."""
        if self.variables() - set(keep):
            raise ArityMismatch("polynomial uses variables outside the kept set")
        t = {tuple(e[i] for i in keep): c for e, c in self.terms.items()}
        return Poly._raw(self.field, len(keep), t)

    def coefficients_in(self, variables: Sequence[int]) -> dict[tuple, "Poly"]:
        """Expand as a polynomial in ``variables`` with coefficients in the rest."""
        vs = list(variables)
        out: dict[tuple, dict] = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in vs)
            rest = list(e)
            for i in vs:
                rest[i] = 0
            out.setdefault(key, {})[tuple(rest)] = c
        return {k: Poly._raw(self.field, self.nvars, t) for k, t in out.items()}

    # division -----------------------------------------------------------------

    def divmod_lead(self, q: "Poly"):
        """Division by leading terms; returns ``(quotient, remainder)``.

        The remainder is zero whenever ``q`` divides ``self``.
        """
        if not q.terms:
            raise DivisionByZero("division by the zero polynomial")
        F = self.field
        qe, qc = q.leading_term()
        qinv = F.inv(qc)
        rem = dict(self.terms)
        quot: dict = {}
        rest: dict = {}
        p = F.p
        while rem:
            e = max(rem, key=_grlex_key)
            c = rem[e]
            if all(a >= b for a, b in zip(e, qe)):
                me = tuple(a - b for a, b in zip(e, qe))
                mc = c * qinv % p if p else c * qinv
                quot[me] = mc
                for te, tc in q.terms.items():
                    ne = tuple(a + b for a, b in zip(me, te))
                    v = rem.get(ne, 0) - mc * tc
                    if p:
                        v %= p
                    if v:
                        rem[ne] = v
                    else:
                        rem.pop(ne, None)
            else:
                rest[e] = c
                del rem[e]
        return Poly._raw(F, self.nvars, quot), Poly._raw(F, self.nvars, rest)

    def exact_div(self, q: "Poly") -> "Poly":
        quot, rem = self.divmod_lead(q)
        if rem:
            raise ArithmeticError("division is not exact")
        return quot

    def divides(self, other: "Poly") -> bool:
        if not self.terms:
            return not other.terms
        return not other.divmod_lead(self)[1]

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(self.field.inv(self.leading_coefficient()))

    # rendering -----------------------------------------------------------------

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"Poly({self.field}, {self.nvars}, '{render_poly(self)}')"



_SHIFT = 20


def _pack(e) -> int:
    k = 0
    for i, a in enumerate(e):
        k |= a << (_SHIFT * i)
    return k


def _unpack(k: int, n: int) -> tuple:
    mask = (1 << _SHIFT) - 1
    return tuple((k >> (_SHIFT * i)) & mask for i in range(n))


def _common_denominator(terms) -> int:
    d = 1
    for c in terms.values():
        q = c.denominator
        if q != 1:
            d = d * q // math.gcd(d, q)
    return d


def _integer_terms(terms: dict, p: int, scale: int = 1):
    """``[(packed exponent, integer coefficient, degree)]`` and the denominator used."""
    if p:
        return [(_pack(e), c, sum(e)) for e, c in terms.items()], 1
    d = _common_denominator(terms)
    return [(_pack(e), c.numerator * (d // c.denominator) * scale, sum(e)) for e, c in terms.items()], d


def _check_degree_room(ia, ib) -> None:
    if ia and ib and max(g for _, _, g in ia) + max(g for _, _, g in ib) >= 1 << _SHIFT:
        raise OverflowError("exponent too large for packed multiplication")


def _finish_terms(t: dict, p: int, den: int, n: int) -> dict:
    if p:
        return {_unpack(k, n): c % p for k, c in t.items() if c % p}
    if den == 1:
        return {_unpack(k, n): Fraction(c) for k, c in t.items() if c}
    return {_unpack(k, n): Fraction(c, den) for k, c in t.items() if c}


def _mul_terms(p: int, a: dict, b: dict, maxdeg, n: int | None = None) -> dict:
    """Coefficient dict of a product; the inner loop runs on integers."""
    if n is None:
        n = len(next(iter(a))) if a else 0
    ia, da = _integer_terms(a, p)
    ib, db = _integer_terms(b, p)
    _check_degree_room(ia, ib)
    t: dict = {}
    get = t.get
    for k1, c1, d1 in ia:
        for k2, c2, d2 in ib:
            if maxdeg is not None and d1 + d2 > maxdeg:
                continue
            k = k1 + k2
            t[k] = get(k, 0) + c1 * c2
    return _finish_terms(t, p, da * db, n)


def sum_of_products(pairs, field: Field, nvars: int) -> "Poly":
    """``sum a_k * b_k`` accumulated in one pass."""
    p = field.p
    prepared = []
    L = 1
    for a, b in pairs:
        if not a.terms or not b.terms:
            continue
        ia, da = _integer_terms(a.terms, p)
        ib, db = _integer_terms(b.terms, p)
        _check_degree_room(ia, ib)
        d = da * db
        L = L * d // math.gcd(L, d)
        prepared.append((ia, ib, d))
    t: dict = {}
    get = t.get
    for ia, ib, d in prepared:
        f = L // d
        if f != 1:
            ia = [(k, c * f, g) for k, c, g in ia]
        for k1, c1, _ in ia:
            for k2, c2, _ in ib:
                k = k1 + k2
                t[k] = get(k, 0) + c1 * c2
    return Poly._raw(field, nvars, _finish_terms(t, p, L, nvars))


def render_monomial(e: Sequence[int], names: Sequence[str] | None = None) -> str:
    parts = []
    for i, k in enumerate(e):
        if k:
            name = names[i] if names else f"x{i + 1}"
            parts.append(name if k == 1 else f"{name}^{k}")
    return "*".join(parts)


def render_poly(p: Poly, names: Sequence[str] | None = None) -> str:
    """Canonical text, e.g. ``x1*x3*x4 - x2*x4^2``."""
    if not p.terms:
        return "0"
    F = p.field
    out = []
    for idx, (e, c) in enumerate(p.sorted_terms()):
        mono = render_monomial(e, names)
        if F.p:
            neg = False
            mag = c
        else:
            neg = c < 0
            mag = -c if neg else c
        coef = F.render(mag)
        if mono:
            body = mono if coef == "1" else f"{coef}*{mono}"
        else:
            body = coef
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# ---------------------------------------------------------------------------
# restricted gcd machinery


def _univariate_var(polys: Sequence[Poly]):
    vs = set()
    for p in polys:
        vs |= p.variables()
    if len(vs) > 1:
        return None
    return next(iter(vs)) if vs else -1


def univariate_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd of polynomials in (at most) one common variable."""
    if _univariate_var([a, b]) is None:
        raise UnsupportedGcdShape("univariate gcd needs a single common variable")
    while b:
        _, r = a.divmod_lead(b)
        a, b = b, r
    return a.monic()


def univariate_sqrt(p: Poly):
    """Square root of a univariate polynomial, or ``None``."""
    if not p:
        return p
    v = _univariate_var([p])
    if v is None:
        raise UnsupportedGcdShape("not univariate")
    F = p.field
    if v == -1:
        r = F.sqrt(p.constant_term())
        return None if r is None else Poly.const(F, p.nvars, r)
    d = p.degree()
    if d % 2:
        return None
    lc = p.leading_coefficient()
    r0 = F.sqrt(lc)
    if r0 is None:
        return None
    x = Poly.var(F, p.nvars, v)
    k = d // 2
    coef = [F.zero] * (k + 1)
    coef[k] = r0
    pc = {e[v]: c for e, c in p.terms.items()}
    two_r0 = F.mul(2, r0)
    for j in range(k - 1, -1, -1):
        # coefficient of x^(k + j) in the square
        s = pc.get(k + j, F.zero)
        for i in range(j + 1, k):
            s = F.sub(s, F.mul(coef[i], coef[k + j - i]))
        coef[j] = F.div(s, two_r0)
    root = Poly.zero(F, p.nvars)
    for i, c in enumerate(coef):
        if c:
            root = root + (x**i).scale(c)
    return root if root * root == p else None


def linear_form_of(p: Poly):
    """Coefficient vector if ``p`` is a homogeneous linear form, else ``None``."""
    if not p.terms or any(sum(e) != 1 for e in p.terms):
        return None
    return p.linear_coefficients()


def split_quadratic_form(q: Poly):
    """Factor a quadratic form as ``c * l1 * l2`` with linear forms over K.

    Returns ``(c, l1, l2)`` with ``l1``, ``l2`` normalized to leading
    coefficient 1.  Raises :class:`UnsupportedGcdShape` when ``q`` is not a
    product of two linear forms over K.
    """
    F = q.field
    n = q.nvars
    if not q or any(sum(e) != 2 for e in q.terms):
        raise UnsupportedGcdShape("not a nonzero quadratic form")
    if F.p == 2:
        raise UnsupportedGcdShape("quadratic forms are not split in characteristic 2")
    x = Poly.gens(F, n)
    sq = [i for i in range(n) if q.coefficient(tuple(2 if k == i else 0 for k in range(n)))]
    if sq:
        j = sq[0]
        # q = a x_j^2 + b x_j + g, with b linear and g quadratic in the others
        a = q.coefficient(tuple(2 if k == j else 0 for k in range(n)))
        parts = q.coefficients_in([j])
        b = parts.get((1,), Poly.zero(F, n))
        g = parts.get((0,), Poly.zero(F, n))
        disc = b * b - g.scale(F.mul(4, a))
        if not disc:
            root = b.scale(F.inv(F.mul(2, a)))
            l1 = x[j] + root
            return a, l1.monic(), l1.monic()
        c, m1, m2 = _rank_one_square(disc)
        if m1 is None:
            raise UnsupportedGcdShape("discriminant is not a square")
        s = F.sqrt(c)
        if s is None:
            raise UnsupportedGcdShape("factors are not defined over K")
        # disc = (s*m)^2, roots x_j = (-b +- s m) / 2a
        inv2a = F.inv(F.mul(2, a))
        r1 = x[j] + (b - m1.scale(s)).scale(inv2a)
        r2 = x[j] + (b + m1.scale(s)).scale(inv2a)
        l1, l2 = r1.monic(), r2.monic()
        c0 = q.exact_div(l1 * l2)
        return c0.constant_term(), l1, l2
    # no square terms: q = x_j * L + g with g free of x_j
    j = min(q.variables())
    parts = q.coefficients_in([j])
    L = parts[(1,)]
    g = parts.get((0,), Poly.zero(F, n))
    if not L.terms or any(sum(e) != 1 for e in L.terms):
        raise UnsupportedGcdShape("unexpected shape")
    try:
        m = g.exact_div(L) if g else Poly.zero(F, n)
    except ArithmeticError:
        raise UnsupportedGcdShape("quadratic form does not split over K") from None
    l1 = x[j] + m
    l2 = L
    lc2 = l2.leading_coefficient()
    return lc2, l1.monic(), l2.monic()


def _rank_one_square(q: Poly):
    """Write ``q = c * m^2`` with ``m`` a monic linear form; ``(c, m, m)`` or ``(None,)*3``."""
    F = q.field
    n = q.nvars
    for j in range(n):
        ej = tuple(2 if k == j else 0 for k in range(n))
        a = q.coefficient(ej)
        if a:
            coeffs = [F.zero] * n
            coeffs[j] = F.one
            for i in range(n):
                if i != j:
                    e = [0] * n
                    e[i] += 1
                    e[j] += 1
                    coeffs[i] = F.div(q.coefficient(tuple(e)), F.mul(2, a))
            m = Poly.linear_form(F, coeffs)
            if m * m * a == q:
                lead = m.leading_coefficient()
                m2 = m.monic()
                return F.mul(a, F.mul(lead, lead)), m2, m2
            return None, None, None
    return None, None, None


def linear_factors(p: Poly):
    """``(c, [linear forms])`` for a linear form, a quadratic form, or a constant."""
    if p.is_zero():
        raise UnsupportedGcdShape("zero polynomial")
    if p.is_constant():
        return p.constant_term(), []
    lf = linear_form_of(p)
    if lf is not None:
        lc = p.leading_coefficient()
        return lc, [p.monic()]
    c, l1, l2 = split_quadratic_form(p)
    return c, [l1, l2]


def gcd_linear_case(p: Poly, q: Poly) -> Poly:
    """gcd of two products of at most two linear forms (up to a scalar).

    Covers the shapes that arise for 2x2 nilpotent matrices of quadratic
    forms.  Other shapes raise :class:`UnsupportedGcdShape`.
    """
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    _, fp = linear_factors(p)
    _, fq = linear_factors(q)
    common = Poly.const(p.field, p.nvars, 1)
    rest = list(fq)
    for f in fp:
        if f in rest:
            rest.remove(f)
            common = common * f
    return common


def supported_gcd(a: Poly, b: Poly) -> Poly:
    """gcd where one of the supported shapes applies (scalar, univariate, linear)."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return Poly.const(a.field, a.nvars, 1)
    if _univariate_var([a, b]) is not None:
        return univariate_gcd(a, b)
    if a.degree() <= 2 and b.degree() <= 2 and a.is_homogeneous() and b.is_homogeneous():
        return gcd_linear_case(a, b)
    raise UnsupportedGcdShape("general multivariate gcd is not supported")


def content_and_primitive(p: Poly, wrt: Sequence[int] | None = None):
    """Split ``p = content * primitive`` with respect to the variables ``wrt``.

    With ``wrt`` covering all variables the content is a scalar (over Q: the
    positive rational making the primitive part integral with coprime
    coefficients; over GF(p): the leading coefficient).  Otherwise the content
    is the gcd of the coefficients in the remaining variables, which must fall
    in a supported gcd shape.
    """
    F = p.field
    n = p.nvars
    vs = list(range(n)) if wrt is None else sorted(wrt)
    if p.is_zero():
        return Poly.zero(F, n), p
    if len(vs) == n:
        if F.p:
            c = p.leading_coefficient()
        else:
            from math import gcd, lcm

            nums = [abs(c.numerator) for c in p.terms.values()]
            dens = [c.denominator for c in p.terms.values()]
            g = 0
            for a in nums:
                g = gcd(g, a)
            c = Fraction(g, lcm(*dens))
            if p.leading_coefficient() < 0:
                c = -c
        return Poly.const(F, n, c), p.scale(F.inv(c))
    coeffs = list(p.coefficients_in(vs).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        g = supported_gcd(g, c)
    return g, p.exact_div(g)


# ---------------------------------------------------------------------------
# rational functions


class RatFunc:
    """Element of K(x) as ``num/den``; equality by cross multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.const(num.field, num.nvars, 1)
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        self.num, self.den = _reduce(num, den)

    @property
    def field(self):
        return self.num.field

    @property
    def nvars(self):
        return self.num.nvars

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc(Poly.const(self.field, self.nvars, other))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def invert(self) -> "RatFunc":
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.invert()

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.num * o.den == o.num * self.den

    __hash__ = None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _reduce(num: Poly, den: Poly):
    F = num.field
    if num.is_zero():
        return num, Poly.const(F, num.nvars, 1)
    if den.is_constant():
        return num.scale(F.inv(den.constant_term())), Poly.const(F, num.nvars, 1)
    q, r = num.divmod_lead(den)
    if not r:
        return q, Poly.const(F, num.nvars, 1)
    try:
        g = supported_gcd(num, den)
    except UnsupportedGcdShape:
        g = None
    if g is not None and not g.is_constant():
        try:
            num, den = num.exact_div(g), den.exact_div(g)
        except ArithmeticError:
            pass
    lc = den.leading_coefficient()
    return num.scale(F.inv(lc)), den.scale(F.inv(lc))


def coefficient_matrix(polys: Sequence[Poly]):
    """Rows = polynomials, columns = the union of their monomials (sorted)."""
    if not polys:
        raise ValueError("empty list")
    F = polys[0].field
    monos = sorted({e for p in polys for e in p.terms}, key=_grlex_key, reverse=True)
    rows = [[p.terms.get(e, F.zero) for e in monos] for p in polys]
    return Matrix(F, rows, ncols=len(monos)) if rows else None, monos


def linear_dependencies(polys: Sequence[Poly]) -> list[tuple]:
    """Basis of ``{c : sum c_i polys[i] = 0}`` over K."""
    F = polys[0].field
    M, monos = coefficient_matrix(polys)
    if not monos:
        return [tuple(F.one if i == j else F.zero for i in range(len(polys))) for j in range(len(polys))]
    return nullspace(M.T)
