"""Constructions of simply transitive unipotent affine representations of nilpotent Lie algebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cryst import AffineRep
from .errors import InvariantError, SearchExhaustedError
from .linalg import Matrix, det, span_basis
from .nillie import (
    Grading,
    LieAlgebra,
    LinearRep,
    derivation_space,
    find_nonsingular,
    grading_derivation,
    is_derivation,
    validate,
)

DEFAULT_GRID = (Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(1, 3))


def two_step_rep(L: LieAlgebra) -> AffineRep:
    """``X -> (ad_X / 2, X)`` for an algebra of class at most 2."""
    cls, _ = validate(L)
    if cls > 2:
        raise InvariantError(f"two-step construction needs class <= 2, got {cls}")
    phi = LinearRep.adjoint(L, Fraction(1, 2))
    return AffineRep.from_pair(L, phi.matrices, Matrix.identity(L.n))


def derivation_rep(L: LieAlgebra, D: Matrix) -> AffineRep:
    """``X -> (ad_X, D X)`` for a nonsingular derivation ``D``."""
    validate(L)
    if D.shape != (L.n, L.n):
        raise InvariantError("derivation has the wrong size")
    if not is_derivation(L, D):
        raise InvariantError("D is not a derivation of L")
    if not det(D):
        raise InvariantError("D is singular")
    return AffineRep.from_pair(L, LinearRep.adjoint(L).matrices, D)


def graded_rep(L: LieAlgebra, grading: Grading) -> AffineRep:
    return derivation_rep(L, grading_derivation(L, grading))


def central_series_decomposition(L: LieAlgebra) -> list[list[tuple]]:
    """Complements ``V_1, V_2, ...`` to the lower central series, by greedy basis extension.

    ``V_k`` spans a complement of ``u_{k+1}`` in ``u_k``; the last block is the last
    nonzero term of the series.
    """
    _, series = validate(L)
    blocks = []
    for k in range(len(series) - 1):
        lower = series[k + 1]
        extended = span_basis(list(lower) + list(series[k]))
        blocks.append(extended[len(lower):])
    return blocks


@dataclass(frozen=True)
class ThreeStepResult:
    rep: AffineRep
    scales: tuple[Fraction, Fraction, Fraction]
    derivation: Matrix
    phi: LinearRep
    decomposition: tuple[tuple[tuple, ...], ...]
    tried: tuple[tuple[Fraction, Fraction, Fraction], ...]


def three_step_rep(
    L: LieAlgebra,
    grid: Sequence[Fraction] = DEFAULT_GRID,
    decomposition: Sequence[Sequence[tuple]] | None = None,
    cap: int = 4,
    seed: int = 0,
) -> ThreeStepResult:
    """Search scales ``(alpha, beta, gamma)`` on ``V_1 + V_2 + V_3`` so that
    ``phi = g ad g^{-1}`` admits a nonsingular derivation ``D``.

    For each grid point the full derivation space of ``phi`` is solved and searched
    for a nonsingular element; the first success in grid order is returned.
    """
    cls, _ = validate(L)
    if cls > 3:
        raise InvariantError(f"three-step construction needs class <= 3, got {cls}")
    blocks = [list(b) for b in (decomposition or central_series_decomposition(L))]
    while len(blocks) < 3:
        blocks.append([])
    basis = [v for b in blocks for v in b]
    if len(basis) != L.n or len(span_basis(basis)) != L.n:
        raise InvariantError("decomposition blocks do not form a basis")
    P = Matrix.from_columns(basis)
    Pinv = P.inv()
    tried = []
    for scales in itertools.product(grid, repeat=3):
        tried.append(scales)
        diag = [s for s, b in zip(scales, blocks) for _ in b]
        g = P @ Matrix.diag(diag) @ Pinv
        phi = LinearRep.adjoint(L).conjugated(g)
        space = derivation_space(L, phi)
        if not space:
            continue
        found = find_nonsingular(space, cap=cap, seed=seed)
        if found.element is None:
            continue
        D = found.element
        rep = AffineRep.from_pair(L, phi.matrices, D)
        return ThreeStepResult(rep, scales, D, phi, tuple(tuple(b) for b in blocks), tuple(tried))
    raise SearchExhaustedError("no nonsingular derivation found on the scale grid", tried)
