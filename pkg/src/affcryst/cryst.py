"""Crystallography test for unipotent affine representations of nilpotent groups.

A representation is given at the Lie algebra level: basis vector ``X_i`` of a
nilpotent Lie algebra maps to ``Y_i = (M_i, w_i)`` in the affine Lie algebra, and the
group generator ``gamma_i`` maps to ``exp(Y_i)``. The representation is
crystallographic exactly when the images are simultaneously nilpotent and the
orbit-derivative matrix ``tau_x`` is nonsingular; ``delta = det tau_x`` does not
depend on the base point ``x``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .affine import AffineLieElement, AffineMap, EngelFlag, engel_flag, exp_nilpotent
from .errors import HomomorphismError, InternalInvariantError, InvariantError
from .linalg import ONE, ZERO, Matrix, det, nullspace
from .nillie import LieAlgebra, NonsingularSearch, find_nonsingular, is_automorphism
from .scalar import Scalar, as_scalar


@dataclass(frozen=True, eq=False)
class AffineRep:
    """Images ``Y_i`` of the basis of ``algebra`` in the affine Lie algebra of V, dim V = dim algebra."""

    algebra: LieAlgebra
    images: tuple[AffineLieElement, ...]

    def __post_init__(self):
        images = tuple(y if isinstance(y, AffineLieElement) else AffineLieElement(y) for y in self.images)
        object.__setattr__(self, "images", images)
        n = self.algebra.n
        if len(images) != n:
            raise InvariantError(f"expected {n} images, got {len(images)}")
        if any(y.dim != n for y in images):
            raise InvariantError("every image must act on a space of dimension equal to dim L")

    @classmethod
    def from_pair(cls, L: LieAlgebra, phi: Sequence[Matrix], D: Matrix) -> AffineRep:
        """The representation ``X_i -> (phi_i, D X_i)`` built from a pair (phi, D)."""
        return cls(L, tuple(AffineLieElement.from_parts(phi[i], D.column(i)) for i in range(L.n)))

    @property
    def n(self) -> int:
        return self.algebra.n

    def __eq__(self, other):
        if not isinstance(other, AffineRep):
            return NotImplemented
        return self.algebra == other.algebra and self.images == other.images

    def __hash__(self):
        return hash((self.algebra, self.images))

    def image(self, x: Sequence) -> Matrix:
        acc = Matrix.zeros(self.n + 1)
        for c, y in zip(x, self.images):
            if c:
                acc = acc + y.scale(c)
        return acc

    def linear_parts(self) -> list[Matrix]:
        return [y.linear_part for y in self.images]

    def translations(self) -> list[tuple]:
        return [y.translation for y in self.images]

    def generators(self) -> list[AffineMap]:
        """Group generators ``exp(Y_i)``."""
        return [exp_nilpotent(y) for y in self.images]


def validate_rep(rho: AffineRep) -> None:
    """Raise :class:`HomomorphismError` on the first pair with ``Y_[Xi,Xj] != [Y_i, Y_j]``."""
    L = rho.algebra
    for i, j in itertools.combinations(range(rho.n), 2):
        lhs = rho.image(L.bracket_basis(i, j))
        if lhs != rho.images[i].commutator(rho.images[j]):
            raise HomomorphismError((i, j))


def is_valid_rep(rho: AffineRep) -> bool:
    try:
        validate_rep(rho)
    except HomomorphismError:
        return False
    return True


def tau(rho: AffineRep, x: Sequence | None = None) -> Matrix:
    """Matrix whose i-th column is ``M_i x + w_i``."""
    n = rho.n
    x = tuple(as_scalar(c) for c in x) if x is not None else (ZERO,) * n
    if len(x) != n:
        raise InvariantError(f"base point must have {n} coordinates")
    return Matrix.from_columns([y.orbit_derivative(x) for y in rho.images])


def unipotence_flag(rho: AffineRep) -> EngelFlag:
    return engel_flag(list(rho.images))


def _sample_points(n: int, count: int, seed: int) -> list[tuple]:
    rng = random.Random(seed)
    return [tuple(as_scalar(rng.randint(-5, 5)) for _ in range(n)) for _ in range(count)]


def delta(rho: AffineRep, check_points: int = 2, seed: int = 0) -> Scalar:
    """``det tau_0``; also re-evaluated at ``check_points`` sampled base points."""
    if not unipotence_flag(rho):
        raise InvariantError("delta is defined on unipotent representations only")
    d0 = det(tau(rho))
    for x in _sample_points(rho.n, check_points, seed):
        if det(tau(rho, x)) != d0:
            raise InternalInvariantError(f"det tau_x depends on the base point x = {x}")
    return d0


class CrystallographicVerdict(NamedTuple):
    crystallographic: bool
    delta: Scalar | None


def is_crystallographic(rho: AffineRep) -> CrystallographicVerdict:
    """Crystallographic iff the images are simultaneously nilpotent and ``delta != 0``.

    ``delta`` is None when the images are not unipotent.
    """
    validate_rep(rho)
    if not unipotence_flag(rho):
        return CrystallographicVerdict(False, None)
    d = delta(rho)
    return CrystallographicVerdict(bool(d), d)


def conjugate(rho: AffineRep, g: Matrix) -> AffineRep:
    """Images ``g Y_i g^{-1}``."""
    g = AffineMap(g)
    if not det(g):
        raise InvariantError("conjugation by a singular affine map")
    gi = g.inv()
    return AffineRep(rho.algebra, tuple(AffineLieElement(g @ y @ gi) for y in rho.images))


def precompose(rho: AffineRep, phi: Matrix, check: bool = True) -> AffineRep:
    """``rho o phi^{-1}``: new images ``Y'_i = sum_j (phi^{-1})_{ji} Y_j``."""
    if check and not is_automorphism(rho.algebra, phi):
        raise InvariantError("precomposition needs a Lie algebra automorphism")
    pinv = phi.inv()
    return AffineRep(rho.algebra, tuple(AffineLieElement(rho.image(pinv.column(i))) for i in range(rho.n)))


# -- conjugator search ------------------------------------------------------------------


@dataclass(frozen=True)
class ConjugatorSearch:
    """Outcome of :func:`search_conjugator`; ``conjugator`` is None when none was found."""

    conjugator: AffineMap | None
    solution_dim: int
    search: NonsingularSearch | None

    @property
    def certified(self) -> bool:
        return self.conjugator is not None or self.search is None or self.search.certified


def intertwiner_space(left: Sequence[Matrix], right: Sequence[Matrix]) -> list[Matrix]:
    """Basis of affine-shaped G (last row ``(0, .., 0, c)``) with ``left_i G = G right_i``."""
    size = left[0].nrows
    n = size - 1
    # unknown order: G[a][b] for a < n (all b), then c = G[n][n]
    index = {}
    for a in range(n):
        for b in range(size):
            index[(a, b)] = len(index)
    index[(n, n)] = len(index)
    nvar = len(index)
    rows = []
    for P, Q in zip(left, right):
        pr, qr = P.rows, Q.rows
        for a in range(size):
            for b in range(size):
                row = [ZERO] * nvar
                # (P G)_{ab} = sum_k P[a][k] G[k][b]
                for k in range(size):
                    coef = pr[a][k]
                    if coef and (k, b) in index:
                        row[index[(k, b)]] += coef
                # (G Q)_{ab} = sum_k G[a][k] Q[k][b]
                for k in range(size):
                    coef = qr[k][b]
                    if coef and (a, k) in index:
                        row[index[(a, k)]] -= coef
                if any(row):
                    rows.append(row)
    if rows:
        vecs = nullspace(Matrix(rows))
    else:
        vecs = [tuple(ONE if i == m else ZERO for i in range(nvar)) for m in range(nvar)]
    out = []
    for v in vecs:
        G = [[ZERO] * size for _ in range(size)]
        for (a, b), idx in index.items():
            G[a][b] = v[idx]
        out.append(Matrix(G))
    return out


def search_conjugator(rho: AffineRep, rho2: AffineRep, cap: int = 4, seed: int = 0) -> ConjugatorSearch:
    """Look for an affine ``G`` with ``G exp(Y_i) G^{-1} = exp(Y'_i)`` for all ``i``."""
    if rho.n != rho2.n:
        raise InvariantError("representations act on spaces of different dimension")
    left = rho2.generators()
    right = rho.generators()
    space = intertwiner_space(left, right)
    if not space:
        return ConjugatorSearch(None, 0, None)
    found = find_nonsingular(space, cap=cap, seed=seed)
    if found.element is None:
        return ConjugatorSearch(None, len(space), found)
    G = found.element
    c = G[rho.n, rho.n]
    G = AffineMap(G.scale(ONE / c))
    if conjugate(rho, G) != rho2:
        raise InternalInvariantError("conjugator failed the postcondition recheck")
    return ConjugatorSearch(G, len(space), found)


def find_conjugator(rho: AffineRep, rho2: AffineRep, cap: int = 4, seed: int = 0) -> AffineMap | None:
    """An affine map ``G`` with ``conjugate(rho, G) == rho2``, or None."""
    return search_conjugator(rho, rho2, cap=cap, seed=seed).conjugator
