"""Exact scalars and dense linear algebra over Q or GF(p).

Elements of Q are :class:`fractions.Fraction`; elements of GF(p) are plain
ints in ``range(p)``.  A :class:`Field` converts arbitrary input to that
canonical form, so equality of elements is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .errors import FieldMismatch, NotNilpotent, Singular


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13):
        if p % q == 0:
            return p == q
    f = 17
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """The constant field: ``p == 0`` means Q, otherwise GF(p)."""

    p: int = 0

    def __post_init__(self):
        if self.p and not _is_prime(self.p):
            raise ValueError(f"GF({self.p}): modulus is not prime")
        if self.p >= 2**31:
            raise ValueError("prime fields are limited to p < 2^31")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def gf(cls, p: int) -> "Field":
        return cls(p)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def cardinality(self):
        """Number of elements, or ``None`` for Q."""
        return self.p or None

    @property
    def has_sixth(self) -> bool:
        return self.p not in (2, 3)

    def __str__(self):
        return f"GF({self.p})" if self.p else "Q"

    def __call__(self, x):
        p = self.p
        if isinstance(x, str):
            x = Fraction(x)
        if p:
            if isinstance(x, Fraction):
                if x.denominator % p == 0:
                    raise ZeroDivisionError(f"{x} has no image in GF({p})")
                return x.numerator * pow(x.denominator, -1, p) % p
            return int(x) % p
        return Fraction(x)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, -1, self.p)
        return 1 / a

    def div(self, a, b):
        if self.p:
            return a * self.inv(b) % self.p
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return a / b

    def mul(self, a, b):
        return a * b % self.p if self.p else a * b

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def neg(self, a):
        return -a % self.p if self.p else -a

    def sqrt(self, a):
        """A square root of ``a`` in the field, or ``None``."""
        if a == 0:
            return self.zero
        if not self.p:
            if a < 0:
                return None
            n, d = isqrt(a.numerator), isqrt(a.denominator)
            if n * n == a.numerator and d * d == a.denominator:
                return Fraction(n, d)
            return None
        p = self.p
        if p == 2:
            return a
        if pow(a, (p - 1) // 2, p) != 1:
            return None
        # Tonelli-Shanks
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
        return r

    def small(self, k: int):
        """Image of the integer ``k``; used to enumerate candidate points."""
        return self(k)

    def render(self, a) -> str:
        if self.p:
            return str(a)
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def bitsize(self, a) -> int:
        if self.p:
            return 0
        return a.numerator.bit_length() + a.denominator.bit_length()


QQ = Field(0)


class Matrix:
    """Immutable dense matrix over a :class:`Field`."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field: Field, rows: Iterable[Iterable], ncols: int | None = None):
        conv = field
        self.field = field
        self.rows = tuple(tuple(conv(a) for a in r) for r in rows)
        self.nrows = len(self.rows)
        if self.nrows:
            self.ncols = len(self.rows[0])
            if any(len(r) != self.ncols for r in self.rows):
                raise ValueError("ragged matrix")
        else:
            self.ncols = ncols or 0

    @classmethod
    def _raw(cls, field, rows, ncols):
        m = cls.__new__(cls)
        m.field = field
        m.rows = tuple(tuple(r) for r in rows)
        m.nrows = len(m.rows)
        m.ncols = ncols
        return m

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        one, zero = field.one, field.zero
        return cls._raw(field, [[one if i == j else zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field: Field, m: int, n: int) -> "Matrix":
        return cls._raw(field, [[field.zero] * n for _ in range(m)], n)

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence]) -> "Matrix":
        n = len(cols[0])
        return cls(field, [[c[i] for c in cols] for i in range(n)])

    @classmethod
    def permutation(cls, field: Field, perm: Sequence[int]) -> "Matrix":
        """Matrix with ``P e_j = e_{perm[j]}``."""
        n = len(perm)
        rows = [[field.zero] * n for _ in range(n)]
        for j, i in enumerate(perm):
            rows[i][j] = field.one
        return cls._raw(field, rows, n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.ncols)]

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.field, list(zip(*self.rows)) if self.nrows else [], self.nrows)

    def _check(self, other):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.field, self.rows))

    def __add__(self, other):
        self._check(other)
        F = self.field
        return Matrix._raw(F, [[F.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other):
        self._check(other)
        F = self.field
        return Matrix._raw(F, [[F.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        F = self.field
        return Matrix._raw(F, [[F.neg(a) for a in r] for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        F = self.field
        c = F(c)
        return Matrix._raw(F, [[F.mul(c, a) for a in r] for r in self.rows], self.ncols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            self._check(other)
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            p = self.field.p
            cols = other.columns()
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    s = sum(a * b for a, b in zip(r, c) if a and b)
                    row.append(s % p if p else s)
                out.append(row)
            return Matrix._raw(self.field, out, other.ncols)
        return self.apply(other)

    def apply(self, v: Sequence) -> tuple:
        p = self.field.p
        out = []
        for r in self.rows:
            s = sum(a * b for a, b in zip(r, v) if a and b)
            out.append(self.field(s) if p else Fraction(s))
        return tuple(out)

    def __pow__(self, k: int) -> "Matrix":
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.field, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def inverse(self) -> "Matrix":
        return invert(self)

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def render(self) -> list[list[str]]:
        return [[self.field.render(a) for a in r] for r in self.rows]

    def __repr__(self):
        return f"Matrix({self.field}, {self.render()})"


# ---------------------------------------------------------------------------
# elimination


def rref(M: Matrix):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``.

    Over Q the pivot within a column is the candidate entry of smallest bit
    length.
    """
    F = M.field
    p = F.p
    A = [list(r) for r in M.rows]
    m, n = M.nrows, M.ncols
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        cands = [i for i in range(r, m) if A[i][c] != 0]
        if not cands:
            continue
        if p:
            piv = cands[0]
        else:
            piv = min(cands, key=lambda i: F.bitsize(A[i][c]))
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(inv, a) for a in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                Ar = A[r]
                if p:
                    A[i] = [(a - f * b) % p for a, b in zip(A[i], Ar)]
                else:
                    A[i] = [a - f * b if b else a for a, b in zip(A[i], Ar)]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M: Matrix) -> int:
    return len(rref(M)[1])


def nullspace(M: Matrix) -> list[tuple]:
    """Basis of ``{v : M v = 0}``, one vector per free column."""
    F = M.field
    A, pivots = rref(M)
    n = M.ncols
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [F.zero] * n
        v[f] = F.one
        for i, c in enumerate(pivots):
            v[c] = F.neg(A[i][f])
        basis.append(tuple(v))
    return basis


def left_nullspace(M: Matrix) -> list[tuple]:
    """Basis of ``{c : c^T M = 0}``."""
    return nullspace(M.T)


def solve(M: Matrix, b: Sequence):
    """One solution of ``M x = b``; raises :class:`Singular` if none exists."""
    F = M.field
    aug = Matrix(F, [list(r) + [bi] for r, bi in zip(M.rows, b)])
    A, pivots = rref(aug)
    n = M.ncols
    if pivots and pivots[-1] == n:
        raise Singular("inconsistent linear system")
    x = [F.zero] * n
    for i, c in enumerate(pivots):
        x[c] = A[i][n]
    return tuple(x)


def is_solvable(M: Matrix, b: Sequence) -> bool:
    try:
        solve(M, b)
    except Singular:
        return False
    return True


def invert(M: Matrix) -> Matrix:
    if M.nrows != M.ncols:
        raise Singular("non-square matrix")
    F = M.field
    n = M.nrows
    I = Matrix.identity(F, n)
    aug = Matrix._raw(F, [list(r) + list(s) for r, s in zip(M.rows, I.rows)], 2 * n)
    A, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise Singular("matrix is not invertible")
    return Matrix._raw(F, [row[n:] for row in A], n)


def det(M: Matrix):
    F = M.field
    A = [list(r) for r in M.rows]
    n = M.nrows
    d = F.one
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return F.zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = F.neg(d)
        d = F.mul(d, A[c][c])
        inv = F.inv(A[c][c])
        for i in range(c + 1, n):
            if A[i][c] != 0:
                f = F.mul(A[i][c], inv)
                A[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(A[i], A[c])]
    return d


def span_rank(vectors: Sequence[Sequence], field: Field) -> int:
    if not vectors:
        return 0
    return rank(Matrix(field, vectors))


def complete_basis(vectors: Sequence[Sequence], field: Field, n: int) -> list[tuple]:
    """Extend independent ``vectors`` to a basis of ``K^n`` with unit vectors."""
    basis = [tuple(field(a) for a in v) for v in vectors]
    r = span_rank(basis, field)
    if r != len(basis):
        raise Singular("vectors are linearly dependent")
    for i in range(n):
        if len(basis) == n:
            break
        e = tuple(field.one if j == i else field.zero for j in range(n))
        if span_rank(basis + [e], field) > len(basis):
            basis.append(e)
    return basis


def independent_subset(vectors: Sequence[Sequence], field: Field, start: Sequence[Sequence] = ()) -> list[tuple]:
    """Greedily pick members of ``vectors`` independent of ``start`` and each other."""
    chosen = [tuple(v) for v in start]
    picked = []
    for v in vectors:
        if span_rank(chosen + [tuple(v)], field) > len(chosen):
            chosen.append(tuple(v))
            picked.append(tuple(v))
    return picked


def unit_vector(field: Field, n: int, i: int) -> tuple:
    return tuple(field.one if j == i else field.zero for j in range(n))


# ---------------------------------------------------------------------------
# Jordan form of constant nilpotent matrices


def nilpotency_index(M: Matrix) -> int:
    """Smallest ``s`` with ``M^s = 0``; raises :class:`NotNilpotent`."""
    n = M.nrows
    P = Matrix.identity(M.field, n)
    for s in range(n + 1):
        if P.is_zero():
            return s
        P = P @ M
    raise NotNilpotent("matrix power M^n is nonzero")


def jordan_block_sizes(M: Matrix) -> list[int]:
    """Jordan block sizes of a nilpotent matrix from the ranks of its powers."""
    n = M.nrows
    s = nilpotency_index(M)
    ranks = [n]
    P = Matrix.identity(M.field, n)
    for _ in range(s + 1):
        P = P @ M
        ranks.append(rank(P))
    sizes = []
    for k in range(s, 0, -1):
        # blocks of size >= k: rank(M^{k-1}) - rank(M^k)
        at_least = ranks[k - 1] - ranks[k]
        at_least_next = ranks[k] - ranks[k + 1]
        sizes += [k] * (at_least - at_least_next)
    return sizes


def jordan_matrix(field: Field, sizes: Sequence[int]) -> Matrix:
    """Block-diagonal matrix of subdiagonal Jordan blocks of the given sizes."""
    n = sum(sizes)
    rows = [[field.zero] * n for _ in range(n)]
    off = 0
    for k in sizes:
        for i in range(1, k):
            rows[off + i][off + i - 1] = field.one
        off += k
    return Matrix._raw(field, rows, n)


def jordan_nilpotent(M: Matrix):
    """Return ``(T, N)`` with ``N = T^{-1} M T`` in subdiagonal Jordan form.

    Blocks are ordered by decreasing size.  Column ``j`` of ``T`` inside a
    block of size ``k`` starting at ``b`` is ``M^{j-b} u`` for the chain head
    ``u``.
    """
    if M.nrows != M.ncols:
        raise ValueError("square matrix required")
    F = M.field
    n = M.nrows
    s = nilpotency_index(M)
    powers = [Matrix.identity(F, n)]
    for _ in range(s):
        powers.append(powers[-1] @ M)
    kernels = [[]] + [nullspace(powers[k]) for k in range(1, s + 1)]

    columns: list[tuple] = []
    sizes: list[int] = []
    chains: list[list[tuple]] = []
    for k in range(s, 0, -1):
        # vectors at level k already produced by longer chains
        level = [ch[len(ch) - k] for ch in chains if len(ch) >= k]
        base = list(kernels[k - 1]) + level
        for u in kernels[k]:
            if span_rank(base + [u], F) > span_rank(base, F):
                base.append(u)
                chain = [u]
                for _ in range(k - 1):
                    chain.append(M.apply(chain[-1]))
                chains.append(chain)
                sizes.append(k)
    # chains were produced in decreasing size order already
    for ch in chains:
        columns.extend(ch)
    T = Matrix.from_columns(F, columns) if columns else Matrix.identity(F, n)
    N = jordan_matrix(F, sizes)
    return T, N
