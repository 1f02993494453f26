"""Polycyclic representations: unipotent shadows of generators and the crystallography test.

The caller asserts the group-theoretic hypotheses (torsionfree polycyclic group,
generators 1..s spanning a nilpotent supplement C, the rest spanning the Fitting
subgroup, rank equal to the dimension). Inputs that violate them get an
unspecified verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .affine import AffineMap, engel_flag, jordan_decompose, log_unipotent
from .errors import InvariantError
from .linalg import Matrix, Polynomial, char_poly, coordinates, det
from .nillie import lie_closure
from .scalar import Scalar


@dataclass(frozen=True, eq=False)
class PolycyclicRep:
    """Images of an adapted generating system; the first ``supplement`` generate C."""

    n: int
    generators: tuple[AffineMap, ...]
    supplement: int
    d: int | None = None

    def __post_init__(self):
        gens = tuple(g if isinstance(g, AffineMap) else AffineMap(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if any(g.dim != self.n for g in gens):
            raise InvariantError(f"every generator must be an affine map of R^{self.n}")
        if not 0 <= self.supplement <= len(gens):
            raise InvariantError("supplement size out of range")

    def __eq__(self, other):
        if not isinstance(other, PolycyclicRep):
            return NotImplemented
        return (self.n, self.generators, self.supplement) == (other.n, other.generators, other.supplement)

    def __hash__(self):
        return hash((self.n, self.generators, self.supplement))

    def conjugated(self, g: Matrix) -> PolycyclicRep:
        g = AffineMap(g)
        gi = g.inv()
        return PolycyclicRep(self.n, tuple(AffineMap(g @ x @ gi) for x in self.generators), self.supplement, self.d)


def shadow_generators(rho: PolycyclicRep) -> list[AffineMap]:
    """Unipotent Jordan parts ``theta_i = (g_i)_u``; Fitting generators pass through unchanged."""
    out = []
    for idx, g in enumerate(rho.generators):
        if idx >= rho.supplement:
            out.append(g)
            continue
        if not det(g):
            raise InvariantError(f"generator {idx + 1} is singular")
        out.append(AffineMap(jordan_decompose(g)[1]))
    return out


class PolycyclicVerdict(NamedTuple):
    crystallographic: bool
    delta: Scalar | None
    shadow_dim: int


def shadow_closure(rho: PolycyclicRep) -> list[Matrix]:
    """Basis of the Lie algebra generated by the logarithms of the shadow generators."""
    return lie_closure([log_unipotent(t) for t in shadow_generators(rho)])


def is_crystallographic_poly(rho: PolycyclicRep) -> PolycyclicVerdict:
    """Decide crystallography on the unipotent shadow.

    The shadow closure must be simultaneously nilpotent, have dimension n, and
    evaluate at the origin to a nonsingular matrix; that determinant is returned
    as ``delta`` (it depends on the closure basis, which keeps the shadow
    generators first).
    """
    basis = shadow_closure(rho)
    dim = len(basis)
    if not basis or not engel_flag(basis):
        return PolycyclicVerdict(False, None, dim)
    if dim != rho.n:
        return PolycyclicVerdict(False, None, dim)
    n = rho.n
    o0 = Matrix.from_columns([tuple(b[i, n] for i in range(n)) for b in basis])
    d = det(o0)
    return PolycyclicVerdict(bool(d), d, dim)


@dataclass(frozen=True)
class HullAction:
    """Matrices of ``X -> g_i X g_i^{-1}`` on the shadow closure, one per generator.

    ``matrices`` are written in the closure basis ``basis``; ``orbit_matrices`` are the
    same maps transported to V along the orbit map ``X -> o_0(X)`` (an isomorphism for
    a crystallographic reference), so translations act in the standard basis.
    """

    basis: tuple[Matrix, ...]
    matrices: tuple[Matrix, ...]
    orbit_matrices: tuple[Matrix, ...]


def hull_action_from_reference(rho: PolycyclicRep) -> HullAction:
    verdict = is_crystallographic_poly(rho)
    if not verdict.crystallographic:
        raise InvariantError("the reference representation is not crystallographic")
    basis = shadow_closure(rho)
    n = rho.n
    flat_basis = [b.flat() for b in basis]
    o0 = Matrix.from_columns([tuple(b[i, n] for i in range(n)) for b in basis])
    o0inv = o0.inv()
    mats, orbit = [], []
    for idx, g in enumerate(rho.generators):
        gi = g.inv()
        cols = []
        for b in basis:
            c = coordinates(flat_basis, (g @ b @ gi).flat())
            if c is None:
                raise InvariantError(f"generator {idx + 1} does not normalize the shadow closure")
            cols.append(c)
        a = Matrix.from_columns(cols)
        mats.append(a)
        orbit.append(o0 @ a @ o0inv)
    return HullAction(tuple(basis), tuple(mats), tuple(orbit))


def char_restriction_check(g: Matrix, a: Matrix) -> bool:
    """``char_poly(g) == char_poly(a) * (T - 1)``."""
    if not g.is_square or not a.is_square or g.nrows != a.nrows + 1:
        raise InvariantError("expected an (n+1)x(n+1) affine map and an n x n hull matrix")
    return char_poly(g) == char_poly(a) * Polynomial([-1, 1])
