"""Random exact objects shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from affcryst.affine import AffineMap
from affcryst.catalog import filiform4, heisenberg, square_product
from affcryst.cryst import AffineRep, conjugate
from affcryst.linalg import Matrix, det
from affcryst.nillie import LieAlgebra, LinearRep, derivation_space, random_automorphism
from affcryst.cryst import precompose
from affcryst.scalar import QuadNumber
from affcryst.shadow import PolycyclicRep
from affcryst.torus import CAProduct, apply_linear, ca_to_rep, plane_product


def rand_fraction(rng: random.Random, num: int = 5, den: int = 3) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def rand_scalar(rng: random.Random, d: int | None = None, num: int = 5):
    if d is None:
        return rand_fraction(rng, num)
    return QuadNumber(rand_fraction(rng, num), rand_fraction(rng, num), d)


def rand_matrix(rng: random.Random, n: int, m: int | None = None, d: int | None = None, num: int = 5) -> Matrix:
    m = n if m is None else m
    return Matrix([[rand_scalar(rng, d, num) for _ in range(m)] for _ in range(n)])


def rand_invertible(rng: random.Random, n: int, d: int | None = None, num: int = 3) -> Matrix:
    while True:
        g = rand_matrix(rng, n, d=d, num=num)
        if det(g):
            return g


def rand_affine(rng: random.Random, n: int, d: int | None = None, num: int = 3) -> AffineMap:
    A = rand_invertible(rng, n, d, num)
    t = tuple(rand_scalar(rng, d, num) for _ in range(n))
    return AffineMap.from_parts(A, t)


def rand_unit_upper(rng: random.Random, n: int, d: int | None = None) -> Matrix:
    return Matrix([[1 if i == j else (rand_scalar(rng, d) if j > i else 0) for j in range(n)] for i in range(n)])


def rand_unipotent_affine(rng: random.Random, n: int, d: int | None = None) -> AffineMap:
    """Conjugate of a unit upper triangular affine matrix by a random affine map."""
    u = AffineMap(rand_unit_upper(rng, n + 1, d))
    h = rand_affine(rng, n, d)
    return AffineMap(h @ u @ h.inv())


def rand_ca_product(rng: random.Random, n: int) -> CAProduct:
    """A random commutative associative nilpotent product in dimension 2 or 3."""
    if n == 2:
        return plane_product(rand_fraction(rng, 3, 2), rand_fraction(rng, 3, 2))
    bases = [
        CAProduct.zero(3),
        CAProduct.from_rules(3, {(1, 1): {2: 1}}),
        CAProduct.from_rules(3, {(1, 1): {2: 1}, (1, 2): {3: 1}}),
        CAProduct.from_rules(3, {(1, 1): {3: 1}, (2, 2): {3: 1}}),
        CAProduct.from_rules(3, {(1, 2): {3: 1}}),
    ]
    C = rng.choice(bases)
    return apply_linear(C, rand_invertible(rng, 3))


def rand_derivation_rep(rng: random.Random, L: LieAlgebra, scales=(1, 1, 1)) -> AffineRep:
    """``(phi, D)`` with ``phi`` a rescaled adjoint and ``D`` a random phi-derivation (possibly singular)."""
    phi = LinearRep.adjoint(L)
    if not L.is_abelian():
        from affcryst.scheuneman import central_series_decomposition

        blocks = central_series_decomposition(L)
        basis = [v for b in blocks for v in b]
        P = Matrix.from_columns(basis)
        diag = [Fraction(s) for s, b in zip(scales, blocks) for _ in b]
        g = P @ Matrix.diag(diag) @ P.inv()
        phi = phi.conjugated(g)
    space = derivation_space(L, phi)
    D = Matrix.zeros(L.n)
    for B in space:
        D = D + B.scale(rng.randint(-3, 3))
    return AffineRep.from_pair(L, phi.matrices, D)


def rand_unipotent_rep(rng: random.Random, max_n: int = 4) -> AffineRep:
    """A random valid unipotent representation with ``n <= max_n``."""
    kind = rng.randrange(4)
    if kind == 0:
        n = rng.randint(2, min(3, max_n))
        rho = ca_to_rep(rand_ca_product(rng, n))
    elif kind == 1:
        L = heisenberg(1)
        rho = rand_derivation_rep(rng, L, scales=(rng.choice([1, 2, Fraction(1, 2)]), 1, 1))
    elif kind == 2 and max_n >= 4:
        rho = rand_derivation_rep(rng, filiform4(), scales=(1, rng.choice([1, 2, 3]), rng.choice([1, Fraction(1, 3)])))
    else:
        rho = ca_to_rep(square_product())
        rho = precompose(rho, rand_invertible(rng, 2))
    if rng.random() < 0.5 and not rho.algebra.is_abelian():
        rho = precompose(rho, random_automorphism(rho.algebra, rng, factors=2))
    return conjugate(rho, rand_affine(rng, rho.n))


def rand_pcrep(rng: random.Random, n: int, d: int | None = None) -> PolycyclicRep:
    """Random invertible supplement generators followed by unipotent Fitting generators."""
    s = rng.randint(1, 2)
    f = rng.randint(0, 2)
    gens = []
    for _ in range(s):
        kind = rng.randrange(3)
        if kind == 0:
            gens.append(rand_affine(rng, n, d))
        elif kind == 1:
            # semisimple times commuting unipotent, conjugated
            lam = [rand_fraction(rng, 3, 1) or Fraction(2) for _ in range(n)]
            base = AffineMap.from_parts(Matrix.diag(lam))
            h = rand_affine(rng, n, d)
            gens.append(AffineMap(h @ base @ h.inv()))
        else:
            gens.append(rand_unipotent_affine(rng, n, d))
    for _ in range(f):
        gens.append(rand_unipotent_affine(rng, n, d))
    return PolycyclicRep(n, tuple(gens), s, d)
