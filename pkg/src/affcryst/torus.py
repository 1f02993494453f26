"""Deformation spaces of Z^n-actions: commutative associative nilpotent products as canonical forms.

A crystallographic representation of an abelian Lie algebra is conjugated by the
linear map ``tbar^{-1}`` to a representative whose translation parts are the
standard basis. Its linear parts are then left multiplications ``L_{e_i}`` of a
commutative associative nilpotent product, and two representations are conjugate
exactly when these products coincide.
"""

from __future__ import annotations

import csv
import io
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .affine import AffineLieElement, AffineMap, engel_flag
from .cryst import AffineRep, conjugate, is_crystallographic, precompose, search_conjugator
from .errors import InvariantError
from .linalg import ONE, ZERO, Matrix, det
from .nillie import LieAlgebra
from .scalar import as_scalar, format_rational


@dataclass(frozen=True)
class CAProduct:
    """``e_i o e_j = sum_k d[i][j][k] e_k``; symmetric, associative and nilpotent."""

    n: int
    d: tuple[tuple[tuple, ...], ...]

    def __post_init__(self):
        n = self.n
        d = tuple(tuple(tuple(as_scalar(c) for c in self.d[i][j]) for j in range(n)) for i in range(n))
        if len(self.d) != n or any(len(row) != n or any(len(v) != n for v in row) for row in self.d):
            raise InvariantError(f"structure constants must have shape {n}x{n}x{n}")
        object.__setattr__(self, "d", d)
        for i, j in itertools.combinations(range(n), 2):
            if d[i][j] != d[j][i]:
                raise InvariantError(f"product is not commutative on (e{i + 1}, e{j + 1})")
        for i, j, k in itertools.product(range(n), repeat=3):
            if self.mul(self.mul(self.basis(i), self.basis(j)), self.basis(k)) != self.mul(
                self.basis(i), self.mul(self.basis(j), self.basis(k))
            ):
                raise InvariantError(f"product is not associative on (e{i + 1}, e{j + 1}, e{k + 1})")
        if n and not engel_flag(self.left_multiplications()):
            raise InvariantError("left multiplications are not simultaneously nilpotent")

    @classmethod
    def zero(cls, n: int) -> CAProduct:
        return cls(n, tuple(tuple((ZERO,) * n for _ in range(n)) for _ in range(n)))

    @classmethod
    def from_rules(cls, n: int, rules: dict[tuple[int, int], dict[int, object]]) -> CAProduct:
        """Sparse 1-based rules ``{(i, j): {k: c}}``; the symmetric entry is filled in."""
        d = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for (i, j), vec in rules.items():
            for k, c in vec.items():
                d[i - 1][j - 1][k - 1] = as_scalar(c)
                d[j - 1][i - 1][k - 1] = as_scalar(c)
        return cls(n, tuple(tuple(tuple(v) for v in row) for row in d))

    def basis(self, i: int) -> tuple:
        return tuple(ONE if k == i else ZERO for k in range(self.n))

    def mul(self, x: Sequence, y: Sequence) -> tuple:
        out = [ZERO] * self.n
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(self.d[i][j]):
                    if c:
                        out[k] += ab * c
        return tuple(out)

    def left_multiplication(self, i: int) -> Matrix:
        """``(L_{e_i})_{kj} = d_{ij}^k``."""
        n = self.n
        return Matrix([[self.d[i][j][k] for j in range(n)] for k in range(n)])

    def left_multiplications(self) -> list[Matrix]:
        return [self.left_multiplication(i) for i in range(self.n)]

    def is_zero(self) -> bool:
        return not any(c for row in self.d for v in row for c in v)

    def __str__(self):
        terms = []
        for i in range(self.n):
            for j in range(i, self.n):
                v = self.d[i][j]
                if any(v):
                    rhs = " + ".join(f"{format_rational(c)}*e{k + 1}" for k, c in enumerate(v) if c)
                    terms.append(f"e{i + 1}.e{j + 1} = {rhs}")
        return "; ".join(terms) if terms else "0"


def _require_abelian(rho: AffineRep) -> None:
    if not rho.algebra.is_abelian():
        raise InvariantError("expected a representation of an abelian Lie algebra")


def tbar(rho: AffineRep) -> Matrix:
    """Matrix whose columns are the translation parts ``w_i``."""
    _require_abelian(rho)
    return Matrix.from_columns(rho.translations())


def normalize_id(rho: AffineRep) -> AffineRep:
    """Conjugate by the linear map ``tbar(rho)^{-1}``; the result has ``tbar = I``."""
    t = tbar(rho)
    if not det(t):
        raise InvariantError("tbar is singular; the representation is not crystallographic")
    out = conjugate(rho, AffineMap.from_parts(t.inv()))
    if tbar(out) != Matrix.identity(rho.n):
        raise InvariantError("normalization postcondition failed")
    return out


def precompose_normalize(rho: AffineRep) -> AffineRep:
    """Base change ``Y'_i = sum_j (tbar^{-1})_{ji} Y_j``; also has ``tbar = I`` but changes the homomorphism."""
    t = tbar(rho)
    if not det(t):
        raise InvariantError("tbar is singular; the representation is not crystallographic")
    return precompose(rho, t, check=False)


def ca_to_rep(C: CAProduct) -> AffineRep:
    """``Y_i = (L_{e_i}, e_i)`` on the abelian Lie algebra of dimension n."""
    L = LieAlgebra.abelian(C.n)
    return AffineRep(L, tuple(AffineLieElement.from_parts(C.left_multiplication(i), C.basis(i)) for i in range(C.n)))


def rep_to_ca(rho: AffineRep) -> CAProduct:
    """Read ``d_{ij}^k = (M_i)_{kj}`` off a normalized representation."""
    if tbar(rho) != Matrix.identity(rho.n):
        raise InvariantError("representation is not normalized (tbar != I)")
    n = rho.n
    M = rho.linear_parts()
    d = tuple(tuple(tuple(M[i][k, j] for k in range(n)) for j in range(n)) for i in range(n))
    return CAProduct(n, d)


def canonical_form(rho: AffineRep) -> CAProduct:
    return rep_to_ca(normalize_id(rho))


def are_conjugate(rho: AffineRep, rho2: AffineRep) -> bool:
    """Exact comparison of canonical products of two crystallographic abelian representations."""
    for r in (rho, rho2):
        _require_abelian(r)
        if not is_crystallographic(r).crystallographic:
            raise InvariantError("are_conjugate expects crystallographic representations")
    if rho.n != rho2.n:
        return False
    return canonical_form(rho) == canonical_form(rho2)


def apply_linear(C: CAProduct, g: Matrix) -> CAProduct:
    """Transported product ``x o' y = g (g^{-1} x o g^{-1} y)``."""
    if g.shape != (C.n, C.n) or not det(g):
        raise InvariantError("apply_linear needs an invertible n x n matrix")
    gi = g.inv()
    cols = gi.columns()
    d = tuple(tuple(g @ C.mul(cols[i], cols[j]) for j in range(C.n)) for i in range(C.n))
    return CAProduct(C.n, d)


# -- the plane: products C_w and fixed loci -----------------------------------------------


def plane_product(p, q) -> CAProduct:
    """``x o y = w(w, x) w(w, y) w`` with ``w = (p, q)`` and ``w(a, b) = a_1 b_2 - a_2 b_1``.

    Every commutative associative nilpotent product on the plane is of this form for
    exactly one real ``w``, so ``(p, q)`` serve as coordinates; ``w = 0`` is the zero
    product.
    """
    p, q = as_scalar(p), as_scalar(q)
    w = (p, q)

    def omega(a, b):
        return a[0] * b[1] - a[1] * b[0]

    e = ((ONE, ZERO), (ZERO, ONE))
    d = tuple(tuple(tuple(omega(w, e[i]) * omega(w, e[j]) * c for c in w) for j in range(2)) for i in range(2))
    return CAProduct(2, d)


def parse_grid(spec: str) -> list[Fraction]:
    """``lo:hi:count`` with exact endpoints, e.g. ``-1:1:11``."""
    try:
        lo, hi, count = spec.split(":")
        lo, hi, count = Fraction(lo), Fraction(hi), int(count)
    except ValueError as exc:
        raise ValueError(f"grid must look like lo:hi:count, got {spec!r}") from exc
    if count < 1:
        raise ValueError("grid needs at least one point")
    if count == 1:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + step * i for i in range(count)]


@dataclass(frozen=True)
class LocusPoint:
    params: tuple[Fraction, ...]
    fixed: bool
    certified: bool


def _scan_point(args) -> LocusPoint:
    p, q, phi, cap, seed = args
    rho = ca_to_rep(plane_product(p, q))
    found = search_conjugator(rho, precompose(rho, phi), cap=cap, seed=seed)
    return LocusPoint((p, q), found.conjugator is not None, found.certified)


def fixed_locus_scan(
    phi: Matrix,
    grid: Sequence[Fraction],
    cap: int = 4,
    seed: int = 0,
    parallel: int = 0,
) -> list[LocusPoint]:
    """Per-point fixed-point test over ``grid x grid`` in the plane coordinates ``(p, q)``.

    Results come back in row-major grid order whether or not ``parallel`` workers are used.
    """
    if phi.shape != (2, 2) or not det(phi):
        raise InvariantError("fixed-locus scan needs an invertible 2x2 automorphism")
    jobs = [(p, q, phi, cap, seed) for p in grid for q in grid]
    if parallel and parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(_scan_point, jobs, chunksize=8))
    return [_scan_point(j) for j in jobs]


def locus_csv(points: Iterable[LocusPoint], names: Sequence[str] = ("p", "q")) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([*names, "fixed"])
    for pt in points:
        writer.writerow([*(format_rational(c) for c in pt.params), "true" if pt.fixed else "false"])
    return buf.getvalue()


__all__ = [
    "CAProduct",
    "LocusPoint",
    "apply_linear",
    "are_conjugate",
    "ca_to_rep",
    "canonical_form",
    "fixed_locus_scan",
    "locus_csv",
    "normalize_id",
    "parse_grid",
    "plane_product",
    "precompose_normalize",
    "rep_to_ca",
    "tbar",
]
