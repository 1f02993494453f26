"""Affine maps as block matrices, exact exp/log on the nilpotent/unipotent locus,
the multiplicative Jordan-Chevalley decomposition, and Engel flags."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InternalInvariantError, InvariantError
from .linalg import (
    ONE,
    ZERO,
    Matrix,
    Polynomial,
    char_poly,
    integer_matmul,
    integer_scaled,
    nullspace,
    poly_inverse_mod,
    span_basis,
    squarefree_part,
)
from .scalar import as_scalar


def _check_square(m: Matrix) -> None:
    if not m.is_square:
        raise InvariantError(f"expected a square matrix, got shape {m.shape}")


class AffineMap(Matrix):
    """Element ``[[A, v], [0, 1]]`` of Aff(V), stored as an (n+1)x(n+1) matrix."""

    __slots__ = ()

    def __init__(self, rows):
        super().__init__(rows.rows if isinstance(rows, Matrix) else rows)
        _check_square(self)
        n = self.nrows - 1
        if n < 0 or any(self.rows[n][j] for j in range(n)) or self.rows[n][n] != 1:
            raise InvariantError("affine map must have last row (0, ..., 0, 1)")

    @classmethod
    def from_parts(cls, linear: Matrix, translation: Sequence = None) -> AffineMap:
        n = linear.nrows
        v = tuple(translation) if translation is not None else (ZERO,) * n
        rows = [list(linear.rows[i]) + [v[i]] for i in range(n)]
        rows.append([ZERO] * n + [ONE])
        return cls(rows)

    @classmethod
    def translation_by(cls, v: Sequence) -> AffineMap:
        return cls.from_parts(Matrix.identity(len(v)), v)

    @property
    def dim(self) -> int:
        return self.nrows - 1

    @property
    def linear_part(self) -> Matrix:
        n = self.dim
        return self.submatrix(range(n), range(n))

    @property
    def translation(self) -> tuple:
        n = self.dim
        return tuple(self.rows[i][n] for i in range(n))

    def apply(self, x: Sequence) -> tuple:
        return (self @ (tuple(x) + (ONE,)))[:-1]

    def inverse(self) -> AffineMap:
        return AffineMap(self.inv())


class AffineLieElement(Matrix):
    """Element ``(M, w)`` of the affine Lie algebra, stored as ``[[M, w], [0, 0]]``."""

    __slots__ = ()

    def __init__(self, rows):
        super().__init__(rows.rows if isinstance(rows, Matrix) else rows)
        _check_square(self)
        if self.nrows < 1 or any(self.rows[-1]):
            raise InvariantError("affine Lie element must have a zero last row")

    @classmethod
    def from_parts(cls, linear: Matrix, translation: Sequence) -> AffineLieElement:
        n = linear.nrows
        v = tuple(translation)
        rows = [list(linear.rows[i]) + [v[i]] for i in range(n)]
        rows.append([ZERO] * (n + 1))
        return cls(rows)

    @property
    def dim(self) -> int:
        return self.nrows - 1

    @property
    def linear_part(self) -> Matrix:
        n = self.dim
        return self.submatrix(range(n), range(n))

    @property
    def translation(self) -> tuple:
        n = self.dim
        return tuple(self.rows[i][n] for i in range(n))

    def orbit_derivative(self, x: Sequence) -> tuple:
        """``o_x(M, w) = M x + w``: the velocity of the orbit through ``x``."""
        return (self @ (tuple(x) + (ONE,)))[:-1]


def is_nilpotent(m: Matrix) -> bool:
    _check_square(m)
    return (m ** m.nrows).is_zero()


def is_unipotent(m: Matrix) -> bool:
    _check_square(m)
    return is_nilpotent(m - Matrix.identity(m.nrows))


_NOT_NILPOTENT = object()


def _integer_series(x: Matrix, unit: bool, coef) -> Matrix | None:
    # rational x = N / D: sum_k p_k N^k / (q_k D^k) over one common denominator
    scaled = integer_scaled(x.rows)
    if scaled is None or not x.nrows:
        return None
    N, D = scaled
    size = x.nrows
    powers = []
    power = [[int(i == j) for j in range(size)] for i in range(size)]
    for k in range(1, size + 1):
        power = integer_matmul(power, N, size)
        if not any(any(r) for r in power):
            break
        powers.append(power)
    else:
        return _NOT_NILPOTENT
    coefs = [Fraction(coef(k)) for k in range(1, len(powers) + 1)]
    m = len(powers)
    lcm = 1
    for c in coefs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    Q = lcm * D**m
    total = [[Q if (unit and i == j) else 0 for j in range(size)] for i in range(size)]
    for k, (c, pw) in enumerate(zip(coefs, powers), start=1):
        factor = c.numerator * (lcm // c.denominator) * D ** (m - k)
        for i in range(size):
            ti, pi = total[i], pw[i]
            for j in range(size):
                if pi[j]:
                    ti[j] += factor * pi[j]
    return Matrix._raw(tuple(tuple(Fraction(v, Q) for v in r) for r in total))


def _nilpotent_series(x: Matrix, unit: bool, coef) -> Matrix | None:
    """``[I +] sum_k coef(k) x^k``; None when ``x^size != 0`` (x not nilpotent)."""
    fast = _integer_series(x, unit, coef)
    if fast is _NOT_NILPOTENT:
        return None
    if fast is not None:
        return fast
    size = x.nrows
    acc = Matrix.identity(size) if unit else Matrix.zeros(size)
    power = Matrix.identity(size)
    for k in range(1, size + 1):
        power = power @ x
        if power.is_zero():
            return acc
        if k < size:
            acc = acc + power.scale(coef(k))
    return None


def _nilpotent_log_series(nil: Matrix) -> Matrix | None:
    return _nilpotent_series(nil, False, lambda k: Fraction((-1) ** (k + 1), k))


def _nilpotent_exp_series(x: Matrix) -> Matrix | None:
    return _nilpotent_series(x, True, lambda k: Fraction(1, math.factorial(k)))


def log_unipotent_matrix(g: Matrix) -> Matrix:
    _check_square(g)
    out = _nilpotent_log_series(g - Matrix.identity(g.nrows))
    if out is None:
        raise InvariantError("logarithm requested for a non-unipotent matrix")
    return out


def exp_nilpotent_matrix(x: Matrix) -> Matrix:
    _check_square(x)
    out = _nilpotent_exp_series(x)
    if out is None:
        raise InvariantError("exponential requested for a non-nilpotent matrix")
    return out


def log_unipotent(g: Matrix) -> AffineLieElement:
    """Finite logarithm series of a unipotent affine map."""
    return AffineLieElement(log_unipotent_matrix(AffineMap(g)))


def exp_nilpotent(x: Matrix) -> AffineMap:
    """Finite exponential series of a nilpotent affine Lie element."""
    return AffineMap(exp_nilpotent_matrix(AffineLieElement(x)))


# -- Jordan-Chevalley -------------------------------------------------------------------


def jordan_decompose(g: Matrix) -> tuple[Matrix, Matrix]:
    """Multiplicative Jordan decomposition ``g = g_s g_u`` of an invertible matrix.

    The semisimple part is the limit of Newton's iteration
    ``x <- x - f(x) f'(x)^{-1}`` for the squarefree part ``f`` of the characteristic
    polynomial, started at ``g``; it stabilizes after ceil(log2(max multiplicity)) steps.
    """
    _check_square(g)
    n = g.nrows
    if not g.det():
        raise InvariantError("Jordan decomposition of a singular matrix")
    f = squarefree_part(char_poly(g))
    df = f.derivative()
    x = g
    steps = max(1, math.ceil(math.log2(n + 1))) + 1
    for _ in range(steps):
        fx = f(x)
        if fx.is_zero():
            break
        try:
            x = x - fx @ df(x).inv()
        except InvariantError as exc:
            raise InternalInvariantError("f_red'(x) became singular during Newton iteration") from exc
    else:
        if not f(x).is_zero():
            raise InternalInvariantError("Newton iteration for the semisimple part did not terminate")
    gs = x
    gu = Matrix.identity(n) + gs.inv() @ (g - gs)
    return gs, gu


def jordan_polynomials(chi: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Polynomials ``(P, Q)`` with ``g_s = P(g)`` and ``g_n = Q(g)`` for every ``g`` with
    characteristic polynomial ``chi``.

    Runs the Newton iteration inside the quotient ring Q[T]/(chi), which only
    depends on ``chi``. Used as an independent cross-check of :func:`jordan_decompose`.
    """
    chi = chi.monic()
    f = squarefree_part(chi)
    df = f.derivative()
    x = Polynomial([0, 1]) % chi
    for _ in range(chi.degree + 1):
        fx = _compose(f, x) % chi
        if fx.is_zero():
            break
        x = (x - fx * poly_inverse_mod(_compose(df, x), chi)) % chi
    else:
        raise InternalInvariantError("Newton iteration in Q[T]/(chi) did not terminate")
    return x, Polynomial([0, 1]) - x


def _compose(f: Polynomial, x: Polynomial) -> Polynomial:
    acc = Polynomial()
    for c in reversed(f.coeffs):
        acc = acc * x + Polynomial([c])
    return acc


def unipotent_part_via_polynomials(g: Matrix) -> Matrix:
    """``g_u = I + P(g)^{-1} Q(g)``, the polynomial form of the unipotent part."""
    p, q = jordan_polynomials(char_poly(g))
    return Matrix.identity(g.nrows) + p(g).inv() @ q(g)


class JordanClass(str, enum.Enum):
    SEMISIMPLE = "semisimple"
    UNIPOTENT = "unipotent"
    MIXED = "mixed"


def is_semisimple(g: Matrix) -> bool:
    _check_square(g)
    return squarefree_part(char_poly(g))(g).is_zero()


def classify(g: Matrix) -> JordanClass:
    """Unipotent takes precedence, so the identity classifies as unipotent."""
    _check_square(g)
    if is_unipotent(g):
        return JordanClass.UNIPOTENT
    if is_semisimple(g):
        return JordanClass.SEMISIMPLE
    return JordanClass.MIXED


# -- Engel flags ------------------------------------------------------------------------


@dataclass(frozen=True)
class EngelFlag:
    """Outcome of :func:`engel_flag`.

    ``basis`` holds the columns of a change of basis ``P`` such that every input
    ``m`` has ``P^{-1} m P`` strictly upper triangular; ``dims`` is the increasing
    chain of flag dimensions. On failure ``basis`` is None and ``dims`` shows where
    the chain stalled.
    """

    success: bool
    basis: Matrix | None
    dims: tuple[int, ...]

    def __bool__(self):
        return self.success


def engel_flag(ms: Sequence[Matrix]) -> EngelFlag:
    """Search a common flag in which every matrix of ``ms`` is strictly upper triangular.

    Builds ``V_1 = common kernel``, ``V_{k+1} = {v : m v in V_k for all m}`` and
    succeeds when the chain reaches the whole space.
    """
    ms = list(ms)
    if not ms:
        raise InvariantError("engel_flag needs at least one matrix")
    size = ms[0].nrows
    for m in ms:
        if m.shape != (size, size):
            raise InvariantError("engel_flag inputs must share one square size")
    chain: list[tuple] = []
    dims: list[int] = []
    while len(chain) < size:
        # annihilator of span(chain): rows f with f(b) = 0 for all b in chain
        if chain:
            ann = nullspace(Matrix(chain))
        else:
            ann = [tuple(ONE if i == j else ZERO for j in range(size)) for i in range(size)]
        ann_m = Matrix(ann)
        stacked = []
        for m in ms:
            stacked.extend((ann_m @ m).rows)
        nxt = nullspace(Matrix(stacked))
        if len(nxt) <= len(chain):
            return EngelFlag(False, None, tuple(dims))
        # extend the current basis greedily so earlier flag vectors come first
        chain = span_basis(list(chain) + list(nxt))
        dims.append(len(chain))
    return EngelFlag(True, Matrix.from_columns(chain), tuple(dims))


def is_strictly_upper(m: Matrix) -> bool:
    return all(not m.rows[i][j] for i in range(m.nrows) for j in range(min(i + 1, m.ncols)))


def flag_form(flag: EngelFlag, m: Matrix) -> Matrix:
    """The matrix ``m`` written in the flag basis."""
    if not flag.success:
        raise InvariantError("no flag basis available")
    return flag.basis.inv() @ m @ flag.basis
