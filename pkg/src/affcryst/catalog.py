"""Named algebras, representations and specs used by the tests, the docs and the shipped corpus."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .affine import AffineLieElement, AffineMap
from .cryst import AffineRep
from .linalg import Matrix
from .nillie import LieAlgebra
from .realization import Automorphism, ExtensionSpec
from .scalar import QuadNumber
from .shadow import PolycyclicRep
from .torus import CAProduct, ca_to_rep

# relation words for a lift q (generator 1) over the translations a, b (generators 2, 3)
KLEIN_RELATIONS = ((1, 2, -1, -2), (1, 3, -1, 3), (1, 1, -2))
PM_RELATIONS = ((1, 2, -1, -2), (1, 3, -1, 3), (1, 1))


def heisenberg(m: int = 1) -> LieAlgebra:
    """``h_{2m+1}``: ``[X_i, X_{m+i}] = X_{2m+1}``."""
    n = 2 * m + 1
    return LieAlgebra.from_sparse(n, {(i, m + i): {n: 1} for i in range(1, m + 1)})


def filiform4() -> LieAlgebra:
    """``n_4``: ``[X1, X2] = X3``, ``[X1, X3] = X4``."""
    return LieAlgebra.from_sparse(4, {(1, 2): {3: 1}, (1, 3): {4: 1}})


def free_two_step(k: int = 3) -> LieAlgebra:
    """Free 2-step nilpotent algebra on ``k`` generators; brackets follow after the generators."""
    pairs = [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    n = k + len(pairs)
    return LieAlgebra.from_sparse(n, {p: {k + 1 + idx: 1} for idx, p in enumerate(pairs)})


def class3_dim5() -> LieAlgebra:
    """``[X1, X2] = X3``, ``[X1, X3] = X4``, ``[X2, X3] = X5``."""
    return LieAlgebra.from_sparse(5, {(1, 2): {3: 1}, (1, 3): {4: 1}, (2, 3): {5: 1}})


def translation_line(v) -> AffineRep:
    """The 1-dimensional representation ``X -> (0, v)``."""
    return AffineRep(LieAlgebra.abelian(1), (AffineLieElement.from_parts(Matrix([[0]]), (v,)),))


def translations(n: int) -> AffineRep:
    return ca_to_rep(CAProduct.zero(n))


def square_product() -> CAProduct:
    """``e1 o e1 = e2`` on the plane."""
    return CAProduct.from_rules(2, {(1, 1): {2: 1}})


def golden_unit() -> QuadNumber:
    """``(3 + sqrt 5) / 2``, a unit of norm 1."""
    return QuadNumber(Fraction(3, 2), Fraction(1, 2), 5)


def sol_generator() -> AffineMap:
    lam = golden_unit()
    return AffineMap(Matrix([[lam, 0, 0, 0], [0, lam.conjugate(), 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]]))


def sol_rep(lattice: bool = False, drop_translation: bool = False) -> PolycyclicRep:
    """Sol-type group: ``c`` (supplement) followed by two translations.

    With ``lattice`` the translations are ``(1, 1, 0)`` and ``(lam, lam', 0)``, which
    span a c-invariant lattice; otherwise the coordinate vectors ``e1, e2``.
    """
    lam = golden_unit()
    if lattice:
        ts = [(1, 1, 0), (lam, lam.conjugate(), 0)]
    else:
        ts = [(1, 0, 0), (0, 1, 0)]
    if drop_translation:
        ts = ts[:1]
    gens = (sol_generator(), *(AffineMap.translation_by(t) for t in ts))
    return PolycyclicRep(3, gens, 1, 5)


def klein_spec(with_lift: bool = False) -> ExtensionSpec:
    lifts = (AffineMap.from_parts(Matrix.diag([1, -1]), (Fraction(1, 2), 0)),) if with_lift else None
    return ExtensionSpec(translations(2), (Automorphism(Matrix.diag([1, -1]), 2),), KLEIN_RELATIONS, lifts)


def pm_spec(with_lift: bool = False) -> ExtensionSpec:
    lifts = (AffineMap.from_parts(Matrix.diag([1, -1])),) if with_lift else None
    return ExtensionSpec(translations(2), (Automorphism(Matrix.diag([1, -1]), 2),), PM_RELATIONS, lifts)


def unfixed_spec() -> ExtensionSpec:
    """``diag(1, -1)`` over the ``e1 o e1 = e2`` representation; it moves the class."""
    return ExtensionSpec(ca_to_rep(square_product()), (Automorphism(Matrix.diag([1, -1]), 2),), ((1, 1),))


def corpus() -> dict[str, object]:
    """Every shipped example document, keyed by file stem."""
    from .scheuneman import graded_rep, two_step_rep
    from .nillie import Grading

    return {
        "line_v1": translation_line(1),
        "line_v0": translation_line(0),
        "h3": heisenberg(1),
        "h5": heisenberg(2),
        "n4": filiform4(),
        "free2step3": free_two_step(3),
        "class3_dim5": class3_dim5(),
        "h3_two_step": two_step_rep(heisenberg(1)),
        "h3_graded_112": graded_rep(heisenberg(1), Grading((1, 1, 2))),
        "translations2": translations(2),
        "square_product": square_product(),
        "square_product_rep": ca_to_rep(square_product()),
        "sol": sol_rep(),
        "sol_lattice": sol_rep(lattice=True),
        "sol_deficient": sol_rep(drop_translation=True),
        "klein": klein_spec(),
        "klein_with_lift": klein_spec(with_lift=True),
        "pm": pm_spec(),
        "unfixed": unfixed_spec(),
    }


def write_corpus(directory: str | Path) -> list[Path]:
    from .documents import save

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, value in corpus().items():
        path = directory / f"{name}.json"
        save(value, path)
        paths.append(path)
    return paths
