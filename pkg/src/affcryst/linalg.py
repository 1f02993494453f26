"""Dense exact linear algebra over Q and Q(sqrt d): matrices and univariate polynomials."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import FieldMismatchError, InvariantError
from .scalar import QuadNumber, Scalar, as_scalar, field_of

ZERO = Fraction(0)
ONE = Fraction(1)


def _common_field(entries: Iterable[Scalar]) -> int | None:
    d = None
    for x in entries:
        e = field_of(x)
        if e is not None:
            if d is None:
                d = e
            elif d != e:
                raise FieldMismatchError(f"entries over Q(sqrt {d}) and Q(sqrt {e})")
    return d


def integer_scaled(rows: tuple) -> tuple[list[list[int]], int] | None:
    """Scale a rational matrix to integers: ``(num, den)`` with ``rows = num / den``, or None."""
    den = 1
    for r in rows:
        for x in r:
            if type(x) is not Fraction:
                return None
            q = x.denominator
            if q != 1 and den % q:
                den = den * q // math.gcd(den, q)
    return [[x.numerator * (den // x.denominator) for x in r] for r in rows], den


def integer_matmul(na: list[list[int]], nb: list[list[int]], ncols: int) -> list[list[int]]:
    cols = list(zip(*nb)) if nb else [() for _ in range(ncols)]
    out = []
    for r in na:
        nz = [(k, x) for k, x in enumerate(r) if x]
        out.append([sum(x * c[k] for k, x in nz) for c in cols])
    return out


def _rational_matmul(a: tuple, b: tuple, ncols: int) -> tuple | None:
    # integer products with one normalization per entry; None if either side has surds
    ia = integer_scaled(a)
    if ia is None:
        return None
    ib = integer_scaled(b)
    if ib is None:
        return None
    (na, da), (nb, db) = ia, ib
    den = da * db
    return tuple(tuple(Fraction(x, den) for x in r) for r in integer_matmul(na, nb, ncols))


def _split(rows: tuple) -> tuple[tuple, tuple, int | None] | None:
    """Rational and surd parts of a Q(sqrt d) matrix; None on mixed fields."""
    d = None
    ra, rb = [], []
    for r in rows:
        xa, xb = [], []
        for x in r:
            if type(x) is Fraction:
                xa.append(x)
                xb.append(ZERO)
            else:
                if x.b:
                    if d is None:
                        d = x.d
                    elif d != x.d:
                        return None
                xa.append(x.a)
                xb.append(x.b)
        ra.append(tuple(xa))
        rb.append(tuple(xb))
    return tuple(ra), tuple(rb), d


def _quadratic_matmul(a: tuple, b: tuple, ncols: int) -> tuple | None:
    # (A1 + A2 s)(B1 + B2 s) = A1 B1 + d A2 B2 + (A1 B2 + A2 B1) s with s = sqrt d
    sa, sb = _split(a), _split(b)
    if sa is None or sb is None:
        return None
    (a1, a2, da), (b1, b2, db) = sa, sb
    if da is not None and db is not None and da != db:
        return None
    d = da if da is not None else db
    if d is None:
        return _rational_matmul(a1, b1, ncols)
    p11 = _rational_matmul(a1, b1, ncols)
    p22 = _rational_matmul(a2, b2, ncols)
    p12 = _rational_matmul(a1, b2, ncols)
    p21 = _rational_matmul(a2, b1, ncols)
    out = []
    for i in range(len(a)):
        row = []
        for j in range(ncols):
            re = p11[i][j] + d * p22[i][j]
            im = p12[i][j] + p21[i][j]
            row.append(QuadNumber._make(re, im, d) if im else re)
        out.append(tuple(row))
    return tuple(out)


class Matrix:
    """Immutable rectangular matrix of exact scalars."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(as_scalar(x) for x in r) for r in rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise InvariantError("ragged matrix rows")
        _common_field(x for r in rows for x in r)
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple) -> Matrix:
        # trusted constructor: rows already a tuple of tuples of scalars
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = len(rows[0]) if rows else 0
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> Matrix:
        ncols = nrows if ncols is None else ncols
        return cls._raw(tuple((ZERO,) * ncols for _ in range(nrows)))

    @classmethod
    def diag(cls, entries: Sequence) -> Matrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> Matrix:
        return cls(zip(*cols)) if cols else cls([])

    @classmethod
    def block_diag(cls, *blocks: Matrix) -> Matrix:
        n = sum(b.nrows for b in blocks)
        rows = [[ZERO] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    rows[off + i][off + j] = b.rows[i][j]
            off += b.nrows
        return cls(rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    @property
    def field(self) -> int | None:
        return _common_field(x for r in self.rows for x in r)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> Matrix:
        return Matrix._raw(tuple(zip(*self.rows))) if self.rows else self

    def flat(self) -> tuple:
        return tuple(x for r in self.rows for x in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise InvariantError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise InvariantError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> Matrix:
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, c) -> Matrix:
        c = as_scalar(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self.rows))

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise InvariantError(f"shape mismatch {self.shape} @ {other.shape}")
            fast = _rational_matmul(self.rows, other.rows, other.ncols)
            if fast is None:
                fast = _quadratic_matmul(self.rows, other.rows, other.ncols)
            if fast is not None:
                return Matrix._raw(fast)
            cols = list(zip(*other.rows)) if other.rows else []
            out = []
            for r in self.rows:
                nz = [(k, a) for k, a in enumerate(r) if a]
                row = []
                for c in cols:
                    s = ZERO
                    for k, a in nz:
                        b = c[k]
                        if b:
                            s = s + a * b
                    row.append(s)
                out.append(tuple(row))
            return Matrix._raw(tuple(out))
        # matrix times vector
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise InvariantError("vector length mismatch")
        return tuple(_dot(r, vec) for r in self.rows)

    def __pow__(self, k: int) -> Matrix:
        if not self.is_square:
            raise InvariantError("power of a non-square matrix")
        if k < 0:
            return self.inv() ** (-k)
        result = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def trace(self):
        return sum((self.rows[i][i] for i in range(self.nrows)), ZERO)

    def commutator(self, other: Matrix) -> Matrix:
        return self @ other - other @ self

    def det(self):
        return det(self)

    def inv(self) -> Matrix:
        return inverse(self)

    def rank(self) -> int:
        return len(_rref([list(r) for r in self.rows], self.ncols)[1])

    def nullspace(self) -> list[tuple]:
        return nullspace(self)

    def char_poly(self) -> Polynomial:
        return char_poly(self)

    def __repr__(self):
        return "Matrix([" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "])"

    __str__ = __repr__


def _dot(u, v):
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s = s + a * b
    return s


def _rref(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form in place; returns (nonzero rows, pivot columns).

    Pivots are searched in the first ``ncols`` columns only; extra (augmented) columns
    are carried along.
    """
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        inv = ONE / pr[c]
        if inv != 1:
            pr = rows[r] = [x * inv if x else x for x in pr]
        nzc = [k for k in range(c, len(pr)) if pr[k]]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    for k in nzc:
                        ri[k] = ri[k] - f * pr[k]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


def row_reduce(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list], list[int]]:
    """Return the nonzero rows of the reduced row echelon form and the pivot columns."""
    work = [[as_scalar(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(work[0]) if work else 0
    return _rref(work, ncols)


def det(m: Matrix):
    """Determinant by Gaussian elimination with exact pivoting."""
    if not m.is_square:
        raise InvariantError(f"determinant of non-square {m.shape} matrix")
    n = m.nrows
    a = [list(r) for r in m.rows]
    result = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            result = -result
        pivot = a[c][c]
        result = result * pivot
        inv = ONE / pivot
        pc = a[c]
        for i in range(c + 1, n):
            f = a[i][c]
            if f:
                f = f * inv
                ai = a[i]
                for k in range(c + 1, n):
                    if pc[k]:
                        ai[k] = ai[k] - f * pc[k]
    return result


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise InvariantError("inverse of a non-square matrix")
    n = m.nrows
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(m.rows)]
    rows, pivots = _rref(aug, n)
    if pivots != list(range(n)):
        raise InvariantError("matrix is singular")
    return Matrix._raw(tuple(tuple(r[n:]) for r in rows))


def nullspace(m: Matrix) -> list[tuple]:
    """Basis of the kernel; each vector scaled so its first nonzero entry is 1."""
    n = m.ncols
    rows, pivots = _rref([list(r) for r in m.rows], n)
    pivset = set(pivots)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for r, p in zip(rows, pivots):
            if r[f]:
                v[p] = -r[f]
        lead = next(x for x in v if x)
        if lead != 1:
            inv = ONE / lead
            v = [x * inv for x in v]
        basis.append(tuple(v))
    return basis


def solve(m: Matrix, rhs: Sequence) -> tuple | None:
    """One exact solution of ``m x = rhs`` (free variables set to 0), or None."""
    n = m.ncols
    aug = [list(r) + [as_scalar(b)] for r, b in zip(m.rows, rhs)]
    rows, pivots = _rref(aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [ZERO] * n
    for r, p in zip(rows, pivots):
        x[p] = r[n]
    return tuple(x)


def span_basis(vectors: Iterable[Sequence]) -> list[tuple]:
    """Greedy basis: keep each vector that is independent of the ones kept before it."""
    kept: list[tuple] = []
    echelon: list[list] = []
    pivots: list[int] = []
    for v in vectors:
        w = [as_scalar(x) for x in v]
        for r, p in zip(echelon, pivots):
            f = w[p]
            if f:
                w = [a - f * b for a, b in zip(w, r)]
        lead = next((k for k, x in enumerate(w) if x), None)
        if lead is None:
            continue
        inv = ONE / w[lead]
        w = [x * inv for x in w]
        for idx, r in enumerate(echelon):
            f = r[lead]
            if f:
                echelon[idx] = [a - f * b for a, b in zip(r, w)]
        echelon.append(w)
        pivots.append(lead)
        kept.append(tuple(as_scalar(x) for x in v))
    return kept


def coordinates(basis: Sequence[Sequence], v: Sequence) -> tuple | None:
    """Coefficients of ``v`` in the (independent) ``basis``, or None if ``v`` is outside the span."""
    if not basis:
        return () if not any(v) else None
    m = Matrix.from_columns(basis)
    return solve(m, v)


# -- polynomials ------------------------------------------------------------------------


class Polynomial:
    """Univariate polynomial with exact coefficients, stored lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_scalar(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c=1) -> Polynomial:
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> Polynomial:
        p = cls([1])
        for r in roots:
            p = p * cls([-as_scalar(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else ZERO

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: Polynomial) -> Polynomial:
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Polynomial((a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO) for i in range(n))

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = as_scalar(other)
            return Polynomial(c * x for x in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = out[i + j] + x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        result = Polynomial([1])
        for _ in range(k):
            result = result * self
        return result

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv = ONE / other.lead
        quot = [ZERO] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] * inv
            quot[k] = c
            if c:
                for j, y in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * y
        return Polynomial(quot), Polynomial(rem[:db] if db > 0 else [])

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        inv = ONE / self.lead
        return Polynomial(c * inv for c in self.coeffs)

    def derivative(self) -> Polynomial:
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def __call__(self, x):
        """Horner evaluation at a scalar or a square matrix."""
        if isinstance(x, Matrix):
            n = x.nrows
            acc = Matrix.zeros(n)
            eye = Matrix.identity(n)
            for c in reversed(self.coeffs):
                acc = acc @ x + eye.scale(c)
            return acc
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                cs = f"({c})" if isinstance(c, QuadNumber) and c.b else str(c)
                terms.append(cs + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ")


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic greatest common divisor by the Euclidean algorithm."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_inverse_mod(a: Polynomial, m: Polynomial) -> Polynomial:
    """Inverse of ``a`` modulo ``m`` via the extended Euclidean algorithm."""
    r0, r1 = m, a % m
    s0, s1 = Polynomial(), Polynomial([1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise InvariantError("polynomial is not invertible modulo the given modulus")
    return (s0 * (ONE / r0.lead)) % m


def char_poly(m: Matrix) -> Polynomial:
    """Monic characteristic polynomial det(T*I - m) by the Faddeev-LeVerrier recursion."""
    if not m.is_square:
        raise InvariantError(f"characteristic polynomial of non-square {m.shape} matrix")
    n = m.nrows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    eye = Matrix.identity(n)
    mk = Matrix.zeros(n)
    c = ONE
    for k in range(1, n + 1):
        mk = m @ (mk + eye.scale(c))
        c = -(mk.trace()) / k
        coeffs[n - k] = c
    return Polynomial(coeffs)


def squarefree_part(p: Polynomial) -> Polynomial:
    """``p / gcd(p, p')`` made monic: the product of the distinct irreducible factors."""
    if p.is_zero():
        raise InvariantError("squarefree part of the zero polynomial")
    if p.degree == 0:
        return Polynomial([1])
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()
