"""Nilpotent Lie algebras given by structure constants.

Basis vectors are indexed from 0 in the API (``X_1`` is index 0); the JSON documents
use 1-based indices.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .affine import exp_nilpotent_matrix, is_nilpotent
from .errors import InvariantError, JacobiError, NotNilpotentError
from .linalg import ONE, ZERO, Matrix, coordinates, det, nullspace, span_basis
from .scalar import Scalar, as_scalar


class LieAlgebra:
    """Lie algebra on the basis ``X_1..X_n`` with ``[X_i, X_j] = sum_k c_ij^k X_k``.

    Only pairs ``i < j`` are stored; antisymmetry is structural.
    """

    def __init__(self, n: int, brackets: Mapping[tuple[int, int], Sequence] | None = None, d: int | None = None):
        self.n = int(n)
        self.d = d
        table: dict[tuple[int, int], tuple] = {}
        for (i, j), coeffs in (brackets or {}).items():
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvariantError(f"bracket index out of range: ({i + 1}, {j + 1})")
            if i == j:
                if any(coeffs):
                    raise InvariantError(f"[X_{i + 1}, X_{i + 1}] must vanish")
                continue
            vec = tuple(as_scalar(c) for c in coeffs)
            if len(vec) != self.n:
                raise InvariantError(f"bracket ({i + 1}, {j + 1}) needs {self.n} coefficients")
            if i > j:
                i, j, vec = j, i, tuple(-c for c in vec)
            if (i, j) in table:
                raise InvariantError(f"bracket ({i + 1}, {j + 1}) given twice")
            if any(vec):
                table[(i, j)] = vec
        self._table = table

    @classmethod
    def from_sparse(cls, n: int, rules: Mapping[tuple[int, int], Mapping[int, object]], d: int | None = None) -> LieAlgebra:
        """Build from 1-based rules such as ``{(1, 2): {3: 1}}`` meaning ``[X1, X2] = X3``."""
        brackets = {}
        for (i, j), terms in rules.items():
            vec = [ZERO] * n
            for k, c in terms.items():
                vec[k - 1] = as_scalar(c)
            brackets[(i - 1, j - 1)] = vec
        return cls(n, brackets, d)

    @classmethod
    def abelian(cls, n: int) -> LieAlgebra:
        return cls(n)

    @property
    def structure_constants(self) -> dict[tuple[int, int], tuple]:
        return dict(self._table)

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.n == other.n and self._table == other._table

    def __hash__(self):
        return hash((self.n, tuple(sorted(self._table.items()))))

    def __repr__(self):
        return f"LieAlgebra(n={self.n}, brackets={len(self._table)})"

    def bracket_basis(self, i: int, j: int) -> tuple:
        if i == j:
            return (ZERO,) * self.n
        if i < j:
            return self._table.get((i, j), (ZERO,) * self.n)
        return tuple(-c for c in self._table.get((j, i), (ZERO,) * self.n))

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        out = [ZERO] * self.n
        for (i, j), vec in self._table.items():
            c = x[i] * y[j] - x[j] * y[i]
            if c:
                for k, v in enumerate(vec):
                    if v:
                        out[k] = out[k] + c * v
        return tuple(out)

    def ad(self, i: int) -> Matrix:
        return Matrix.from_columns([self.bracket_basis(i, j) for j in range(self.n)])

    def ad_vector(self, x: Sequence) -> Matrix:
        acc = Matrix.zeros(self.n)
        for i, c in enumerate(x):
            if c:
                acc = acc + self.ad(i).scale(c)
        return acc

    def is_abelian(self) -> bool:
        return not self._table

    def basis_vector(self, i: int) -> tuple:
        return tuple(ONE if k == i else ZERO for k in range(self.n))

    def lower_central_series(self) -> list[list[tuple]]:
        """Bases of ``u, [u,u], [u,[u,u]], ...`` ending with the first repeated or zero term."""
        current = [self.basis_vector(i) for i in range(self.n)]
        series = [current]
        while current:
            nxt = span_basis(self.bracket(self.basis_vector(i), v) for i in range(self.n) for v in current)
            if len(nxt) == len(current):
                break
            series.append(nxt)
            current = nxt
        return series

    def nilpotency_class(self) -> int:
        return validate(self)[0]


def _jacobi_residual(L: LieAlgebra, i: int, j: int, k: int) -> tuple:
    xi, xj, xk = L.basis_vector(i), L.basis_vector(j), L.basis_vector(k)
    a = L.bracket(xi, L.bracket(xj, xk))
    b = L.bracket(xj, L.bracket(xk, xi))
    c = L.bracket(xk, L.bracket(xi, xj))
    return tuple(p + q + r for p, q, r in zip(a, b, c))


def validate(L: LieAlgebra) -> tuple[int, list[list[tuple]]]:
    """Check the Jacobi identity and nilpotency; return ``(class, lower central series)``.

    The returned series ends with the empty basis of the zero ideal.
    """
    for i, j, k in itertools.combinations(range(L.n), 3):
        if any(_jacobi_residual(L, i, j, k)):
            raise JacobiError((i, j, k))
    series = L.lower_central_series()
    if series[-1]:
        raise NotNilpotentError(f"lower central series stabilizes at dimension {len(series[-1])}")
    return len(series) - 1, series


# -- gradings ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Grading:
    """Positive integer weight per basis vector; ``X_i`` lies in ``V_{weights[i]}``."""

    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))

    def check(self, L: LieAlgebra) -> None:
        if len(self.weights) != L.n:
            raise InvariantError(f"grading has {len(self.weights)} weights for a {L.n}-dimensional algebra")
        if any(w <= 0 for w in self.weights):
            raise InvariantError("grading weights must be positive")
        for (i, j), vec in L.structure_constants.items():
            for k, c in enumerate(vec):
                if c and self.weights[k] != self.weights[i] + self.weights[j]:
                    raise InvariantError(
                        f"[X_{i + 1}, X_{j + 1}] has an X_{k + 1} component but "
                        f"{self.weights[k]} != {self.weights[i]} + {self.weights[j]}"
                    )

    def is_valid_for(self, L: LieAlgebra) -> bool:
        try:
            self.check(L)
        except InvariantError:
            return False
        return True


def grading_derivation(L: LieAlgebra, g: Grading) -> Matrix:
    """The diagonal derivation acting as multiplication by ``i`` on ``V_i``."""
    g.check(L)
    return Matrix.diag(list(g.weights))


# -- representations and derivations ----------------------------------------------------


@dataclass(frozen=True)
class LinearRep:
    """A representation ``X_i -> phi_i`` of ``algebra`` by square matrices."""

    algebra: LieAlgebra
    matrices: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(self.matrices))
        if len(self.matrices) != self.algebra.n:
            raise InvariantError("one matrix per basis vector is required")

    @classmethod
    def adjoint(cls, L: LieAlgebra, scale=1) -> LinearRep:
        c = as_scalar(scale)
        return cls(L, tuple(L.ad(i).scale(c) for i in range(L.n)))

    @property
    def size(self) -> int:
        return self.matrices[0].nrows if self.matrices else 0

    def of(self, x: Sequence) -> Matrix:
        acc = Matrix.zeros(self.size)
        for c, m in zip(x, self.matrices):
            if c:
                acc = acc + m.scale(c)
        return acc

    def conjugated(self, g: Matrix) -> LinearRep:
        """``X -> g phi_X g^{-1}``."""
        gi = g.inv()
        return LinearRep(self.algebra, tuple(g @ m @ gi for m in self.matrices))

    def check(self) -> None:
        L = self.algebra
        for i, j in itertools.combinations(range(L.n), 2):
            lhs = self.of(L.bracket_basis(i, j))
            rhs = self.matrices[i].commutator(self.matrices[j])
            if lhs != rhs:
                raise InvariantError(f"phi is not a representation on pair ({i + 1}, {j + 1})")


def derivation_constraints(L: LieAlgebra, phi: LinearRep) -> Matrix:
    """Rows of the linear system ``D[X_i,X_j] - phi_i D X_j + phi_j D X_i = 0`` (i < j).

    Unknown ``D[a][b]`` sits in column ``a * n + b``.
    """
    n = L.n
    rows = []
    for i, j in itertools.combinations(range(n), 2):
        c = L.bracket_basis(i, j)
        pi, pj = phi.matrices[i].rows, phi.matrices[j].rows
        for k in range(n):
            row = [ZERO] * (n * n)
            for b in range(n):
                if c[b]:
                    row[k * n + b] += c[b]
            for a in range(n):
                if pi[k][a]:
                    row[a * n + j] -= pi[k][a]
                if pj[k][a]:
                    row[a * n + i] += pj[k][a]
            if any(row):
                rows.append(row)
    return Matrix(rows) if rows else Matrix.zeros(0, n * n)


def derivation_space(L: LieAlgebra, phi: LinearRep | None = None) -> list[Matrix]:
    """Basis of ``{D : D[X,Y] = phi_X D Y - phi_Y D X}``; ``phi`` defaults to ``ad``."""
    phi = phi if phi is not None else LinearRep.adjoint(L)
    if phi.algebra.n != L.n or phi.size != L.n:
        raise InvariantError("derivations are solved for representations of L on L itself")
    phi.check()
    n = L.n
    cons = derivation_constraints(L, phi)
    if cons.nrows == 0:
        vecs = [tuple(ONE if k == m else ZERO for k in range(n * n)) for m in range(n * n)]
    else:
        vecs = nullspace(cons)
    return [Matrix([v[a * n:(a + 1) * n] for a in range(n)]) for v in vecs]


def is_derivation(L: LieAlgebra, D: Matrix, phi: LinearRep | None = None) -> bool:
    """Direct check of the derivation identity on every ordered basis pair."""
    phi = phi if phi is not None else LinearRep.adjoint(L)
    for i in range(L.n):
        for j in range(L.n):
            lhs = D @ L.bracket_basis(i, j)
            r1 = phi.matrices[i] @ D.column(j)
            r2 = phi.matrices[j] @ D.column(i)
            if any(a - (b - c) for a, b, c in zip(lhs, r1, r2)):
                return False
    return True


def is_automorphism(L: LieAlgebra, g: Matrix) -> bool:
    if g.shape != (L.n, L.n) or not det(g):
        return False
    cols = g.columns()
    for i, j in itertools.combinations(range(L.n), 2):
        if g @ L.bracket_basis(i, j) != L.bracket(cols[i], cols[j]):
            return False
    return True


def check_compatible(phi: LinearRep, g: Matrix) -> bool:
    """True iff ``g^{-1} phi_{gX} g = phi_X`` for every basis vector ``X``."""
    L = phi.algebra
    if not det(g):
        raise InvariantError("compatibility needs an invertible g")
    if not is_automorphism(L, g):
        raise InvariantError("g is not an automorphism of the Lie algebra")
    gi = g.inv()
    cols = g.columns()
    return all(gi @ phi.of(cols[i]) @ g == phi.matrices[i] for i in range(L.n))


# -- Lie closure ------------------------------------------------------------------------


def lie_closure(ms: Sequence[Matrix]) -> list[Matrix]:
    """Basis of the smallest Lie algebra of matrices containing ``ms``.

    Independent inputs are kept first, in their given order.
    """
    ms = list(ms)
    if not ms:
        return []
    shape = ms[0].shape
    if any(m.shape != shape for m in ms):
        raise InvariantError("lie_closure inputs must share one shape")

    def unflat(v):
        return Matrix([v[r * shape[1]:(r + 1) * shape[1]] for r in range(shape[0])])

    basis = [unflat(v) for v in span_basis(m.flat() for m in ms)]
    frontier = list(range(len(basis)))
    while frontier:
        new_start = len(basis)
        candidates = []
        for a in frontier:
            for b in range(len(basis)):
                if a != b:
                    candidates.append(basis[a].commutator(basis[b]).flat())
        flat = span_basis([m.flat() for m in basis] + candidates)
        basis = [unflat(v) for v in flat]
        frontier = list(range(new_start, len(basis)))
    return basis


# -- nonsingular elements ---------------------------------------------------------------


@dataclass(frozen=True)
class NonsingularSearch:
    """Result of a search for a nonsingular element of a linear span of matrices.

    ``certified`` is True when the answer is exact: either an element was found, or
    the full grid ``{0..size}^k`` was exhausted, which is complete because the
    determinant has degree at most ``size`` in each coefficient.
    """

    element: Matrix | None
    coefficients: tuple | None
    certified: bool
    method: str
    tried: int
    grid_points_per_parameter: int
    cap: int


def find_nonsingular(
    space: Sequence[Matrix], cap: int = 4, seed: int = 0, samples: int = 64
) -> NonsingularSearch:
    space = list(space)
    if not space:
        raise InvariantError("nonsingular search over an empty space")
    size = space[0].nrows
    k = len(space)

    def combo(ts):
        acc = Matrix.zeros(size)
        for t, b in zip(ts, space):
            if t:
                acc = acc + b.scale(t)
        return acc

    tried = 0
    if k <= cap:
        for ts in itertools.product(range(size + 1), repeat=k):
            if not any(ts):
                continue
            tried += 1
            m = combo(ts)
            if det(m):
                return NonsingularSearch(m, tuple(Fraction(t) for t in ts), True, "grid", tried, size + 1, cap)
        return NonsingularSearch(None, None, True, "grid", tried, size + 1, cap)
    rng = random.Random(seed)
    full = 8 * (size + 1)
    for i in range(samples):
        # small coefficients first, widening every 8 samples
        bound = min(full, 2 ** (i // 8))
        ts = tuple(rng.randint(-bound, bound) for _ in range(k))
        tried += 1
        m = combo(ts)
        if det(m):
            return NonsingularSearch(m, tuple(Fraction(t) for t in ts), True, "random", tried, size + 1, cap)
    return NonsingularSearch(None, None, False, "random", tried, size + 1, cap)


def nonsingular_element(space: Sequence[Matrix], cap: int = 4, seed: int = 0) -> Matrix | None:
    return find_nonsingular(space, cap=cap, seed=seed).element


# -- sampling automorphisms -------------------------------------------------------------


def _automorphism_generators(L: LieAlgebra) -> list[tuple[str, Matrix]]:
    gens = []
    for D in derivation_space(L):
        if is_nilpotent(D):
            gens.append(("unipotent", D))
        elif all(not D[i, j] for i in range(L.n) for j in range(L.n) if i != j) and all(
            isinstance(D[i, i], Fraction) and D[i, i].denominator == 1 for i in range(L.n)
        ):
            gens.append(("torus", D))
    return gens


def random_automorphism(L: LieAlgebra, rng: random.Random, factors: int = 4) -> Matrix:
    """Random automorphism built from exponentials of nilpotent derivations and
    one-parameter subgroups of integer-weight diagonal derivations."""
    gens = _automorphism_generators(L)
    g = Matrix.identity(L.n)
    if not gens:
        return g
    for _ in range(factors):
        kind, D = rng.choice(gens)
        if kind == "unipotent":
            t = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            g = g @ exp_nilpotent_matrix(D.scale(t))
        else:
            lam = Fraction(rng.choice([-2, -1, 2, 3])) ** rng.choice([1, -1])
            g = g @ Matrix.diag([lam ** int(D[i, i]) for i in range(L.n)])
    return g
