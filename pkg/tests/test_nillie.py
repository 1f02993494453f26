from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
import sympy

from affcryst.catalog import class3_dim5, filiform4, free_two_step, heisenberg
from affcryst.errors import InvariantError, JacobiError, NotNilpotentError
from affcryst.linalg import Matrix
from affcryst.nillie import (
    Grading,
    LieAlgebra,
    LinearRep,
    check_compatible,
    derivation_space,
    find_nonsingular,
    grading_derivation,
    is_automorphism,
    is_derivation,
    lie_closure,
    nonsingular_element,
    random_automorphism,
    validate,
)

E = Matrix([[0, 1], [0, 0]])
F = Matrix([[0, 0], [1, 0]])


def test_validate_examples():
    cls, series = validate(heisenberg(1))
    assert cls == 2
    assert [len(s) for s in series] == [3, 1, 0]
    assert series[1] == [(0, 0, 1)]
    assert validate(LieAlgebra.abelian(3))[0] == 1
    assert validate(filiform4())[0] == 3
    assert validate(class3_dim5())[0] == 3
    assert validate(free_two_step(3))[0] == 2


def test_validate_reports_jacobi_triple():
    # [X1,X2]=X3, [X2,X3]=X1 ... breaks Jacobi on (1,2,3)-type triples
    L = LieAlgebra.from_sparse(4, {(1, 2): {3: 1}, (1, 3): {4: 1}, (2, 3): {4: 1}, (2, 4): {1: 1}})
    with pytest.raises(JacobiError):
        validate(L)


def test_validate_rejects_non_nilpotent():
    # sl(2): [h,e]=2e, [h,f]=-2f, [e,f]=h
    L = LieAlgebra.from_sparse(3, {(1, 2): {2: 2}, (1, 3): {3: -2}, (2, 3): {1: 1}})
    with pytest.raises(NotNilpotentError):
        validate(L)


def _brute_jacobi(L: LieAlgebra) -> bool:
    n = L.n
    for i, j, k in itertools.product(range(n), repeat=3):
        x, y, z = L.basis_vector(i), L.basis_vector(j), L.basis_vector(k)
        total = [
            a + b + c
            for a, b, c in zip(
                L.bracket(x, L.bracket(y, z)), L.bracket(y, L.bracket(z, x)), L.bracket(z, L.bracket(x, y))
            )
        ]
        if any(total):
            return False
    return True


def test_validate_agrees_with_brute_force_jacobi():
    rng = random.Random(1)
    for _ in range(40):
        rules = {}
        for i, j in itertools.combinations(range(1, 5), 2):
            if rng.random() < 0.4:
                k = rng.randint(max(i, j) + 1, 5) if max(i, j) < 5 else None
                if k:
                    rules[(i, j)] = {k: rng.randint(-2, 2)}
        L = LieAlgebra.from_sparse(5, rules)
        try:
            validate(L)
            accepted = True
        except JacobiError:
            accepted = False
        assert accepted == _brute_jacobi(L)


def test_lie_closure_examples():
    assert len(lie_closure([E])) == 1
    closure = lie_closure([E, F])
    assert len(closure) == 3
    assert all(m.trace() == 0 for m in closure)
    ts = [Matrix([[0] * 4 if r != i else [0, 0, 0, 1] for r in range(4)]) for i in range(3)]
    basis = lie_closure(ts)
    assert len(basis) == 3
    assert all(a.commutator(b).is_zero() for a in basis for b in basis)


def test_lie_closure_idempotent():
    rng = random.Random(4)
    for _ in range(10):
        ms = [Matrix([[rng.randint(-1, 1) if j > i else 0 for j in range(4)] for i in range(4)]) for _ in range(2)]
        c1 = lie_closure(ms)
        assert len(lie_closure(c1)) == len(c1)


def _sympy_derivation_dim(L: LieAlgebra) -> int:
    """Brute-force oracle: build the Leibniz system symbolically and take its rank."""
    n = L.n
    D = sympy.Matrix(n, n, lambda a, b: sympy.Symbol(f"d{a}_{b}"))
    unknowns = list(D)

    def vec(v):
        return sympy.Matrix([sympy.Rational(c.numerator, c.denominator) for c in v])

    eqs = []
    for i, j in itertools.combinations(range(n), 2):
        xi, xj = L.basis_vector(i), L.basis_vector(j)
        lhs = D * vec(L.bracket(xi, xj))
        adi = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in r] for r in L.ad(i).rows])
        adj = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in r] for r in L.ad(j).rows])
        rhs = adi * D[:, j] - adj * D[:, i]
        eqs.extend(list(lhs - rhs))
    if not eqs:
        return n * n
    A, _ = sympy.linear_eq_to_matrix(eqs, unknowns)
    return n * n - A.rank()


@pytest.mark.parametrize("L, dim", [(heisenberg(1), 6), (filiform4(), 7), (LieAlgebra.abelian(2), 4)])
def test_derivation_dimensions_against_sympy(L, dim):
    space = derivation_space(L)
    assert len(space) == dim
    assert _sympy_derivation_dim(L) == dim


def test_derivation_space_with_half_ad_contains_identity():
    L = heisenberg(1)
    phi = LinearRep.adjoint(L, Fraction(1, 2))
    assert is_derivation(L, Matrix.identity(3), phi)
    space = derivation_space(L, phi)
    flat = [m.flat() for m in space]
    from affcryst.linalg import coordinates

    assert coordinates(flat, Matrix.identity(3).flat()) is not None


def test_derivations_satisfy_leibniz_on_random_pairs():
    rng = random.Random(6)
    for L in (heisenberg(1), filiform4(), class3_dim5()):
        space = derivation_space(L)
        D = Matrix.zeros(L.n)
        for B in space:
            D = D + B.scale(rng.randint(-3, 3))
        for _ in range(50):
            x = tuple(Fraction(rng.randint(-3, 3)) for _ in range(L.n))
            y = tuple(Fraction(rng.randint(-3, 3)) for _ in range(L.n))
            lhs = D @ L.bracket(x, y)
            rhs = tuple(a + b for a, b in zip(L.bracket(D @ x, y), L.bracket(x, D @ y)))
            assert tuple(lhs) == rhs


def test_grading_derivations():
    assert grading_derivation(heisenberg(1), Grading((1, 1, 2))) == Matrix.diag([1, 1, 2])
    assert grading_derivation(LieAlgebra.abelian(2), Grading((1, 1))) == Matrix.identity(2)
    D = grading_derivation(filiform4(), Grading((1, 1, 2, 3)))
    assert D == Matrix.diag([1, 1, 2, 3])
    assert is_derivation(filiform4(), D)


def test_invalid_grading_rejected():
    with pytest.raises(InvariantError):
        grading_derivation(heisenberg(1), Grading((1, 1, 1)))


def test_grading_derivation_commutes_with_grading_preserving_automorphisms():
    rng = random.Random(2)
    L = heisenberg(1)
    D = grading_derivation(L, Grading((1, 1, 2)))
    for _ in range(10):
        # block-diagonal automorphisms preserve the grading: (A, det A)
        while True:
            a = [[Fraction(rng.randint(-3, 3)) for _ in range(2)] for _ in range(2)]
            detA = a[0][0] * a[1][1] - a[0][1] * a[1][0]
            if detA:
                break
        g = Matrix([[a[0][0], a[0][1], 0], [a[1][0], a[1][1], 0], [0, 0, detA]])
        assert is_automorphism(L, g)
        assert g @ D == D @ g


def test_check_compatible_examples():
    rng = random.Random(3)
    L = heisenberg(1)
    for _ in range(5):
        g = random_automorphism(L, rng)
        assert check_compatible(LinearRep.adjoint(L), g)
        assert check_compatible(LinearRep.adjoint(L, Fraction(1, 2)), g)
    # ad conjugated by a non-automorphism scaling is not compatible with a shear automorphism
    s = Matrix.diag([1, 2, 1])
    assert not is_automorphism(L, s)
    phi = LinearRep.adjoint(L).conjugated(s)
    shear = Matrix([[1, 0, 0], [1, 1, 0], [0, 0, 1]])
    assert is_automorphism(L, shear)
    assert not check_compatible(phi, shear)


def test_check_compatible_rejects_non_automorphism():
    L = heisenberg(1)
    with pytest.raises(InvariantError):
        check_compatible(LinearRep.adjoint(L), Matrix.diag([1, 2, 1]))
    with pytest.raises(InvariantError):
        check_compatible(LinearRep.adjoint(L), Matrix.zeros(3))


def test_nonsingular_element_examples():
    assert nonsingular_element([Matrix.identity(2)]) == Matrix.identity(2)
    found = find_nonsingular([E])
    assert found.element is None and found.certified
    D = nonsingular_element(derivation_space(heisenberg(1)))
    assert D is not None and D.det() != 0


def test_nonsingular_search_metadata_above_cap():
    space = derivation_space(filiform4())
    found = find_nonsingular(space, cap=4, seed=1)
    assert found.method == "random"
    assert found.element is not None and found.element.det() != 0
    nil = [Matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]]), Matrix([[0, 0, 1], [0, 0, 0], [0, 0, 0]])] * 3
    none = find_nonsingular(nil, cap=4, seed=0)
    assert none.element is None and not none.certified


def test_random_automorphisms_are_automorphisms():
    rng = random.Random(5)
    for L in (heisenberg(1), heisenberg(2), filiform4(), free_two_step(3)):
        for _ in range(5):
            assert is_automorphism(L, random_automorphism(L, rng))
