from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from affcryst.errors import FieldMismatchError, InvariantError
from affcryst.linalg import (
    Matrix,
    Polynomial,
    char_poly,
    det,
    nullspace,
    poly_gcd,
    solve,
    span_basis,
    squarefree_part,
)
from affcryst.scalar import QuadNumber, as_scalar, scalar_from_json, scalar_to_json

from helpers import rand_fraction, rand_invertible, rand_matrix

T = Polynomial([0, 1])
fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def quads(d=5):
    return st.builds(lambda a, b: QuadNumber(a, b, d), fractions, fractions)


def lam():
    return QuadNumber(Fraction(3, 2), Fraction(1, 2), 5)


# -- scalars ---------------------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(fractions, fractions)
def test_quadratic_norm_identity(a, b):
    x = QuadNumber(a, b, 5)
    assert x * x.conjugate() == a * a - 5 * b * b
    assert x.norm() == a * a - 5 * b * b


@settings(max_examples=100, deadline=None)
@given(quads(), quads(), quads())
def test_quadratic_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    if x:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@settings(max_examples=100, deadline=None)
@given(quads(2))
def test_quadratic_sign_matches_float(x):
    f = float(x)
    if abs(f) > 1e-9:
        assert x.sign() == (1 if f > 0 else -1)
    assert (x.sign() == 0) == (x == 0)


def test_rational_normal_form():
    q = as_scalar(Fraction(6, -4))
    assert (q.numerator, q.denominator) == (-3, 2)
    x = QuadNumber(Fraction(2, 4), Fraction(-3, 6), 5)
    assert (x.a, x.b) == (Fraction(1, 2), Fraction(-1, 2))


def test_quadratic_rational_equality_and_hash():
    assert QuadNumber(3, 0, 5) == Fraction(3)
    assert hash(QuadNumber(3, 0, 5)) == hash(Fraction(3))


def test_field_mismatch_rejected():
    with pytest.raises(FieldMismatchError):
        QuadNumber(1, 1, 5) + QuadNumber(1, 1, 2)


def test_square_discriminant_rejected():
    with pytest.raises(ValueError):
        QuadNumber(1, 1, 4)


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_scalar(0.5)


@pytest.mark.parametrize(
    "value, text",
    [(Fraction(1, 2), "1/2"), (Fraction(-3), "-3"), (QuadNumber(Fraction(3, 2), Fraction(1, 2), 5), {"a": "3/2", "b": "1/2"})],
)
def test_scalar_text_round_trip(value, text):
    assert scalar_to_json(value) == text
    assert scalar_from_json(text, 5) == value


def test_decimal_text_rejected():
    with pytest.raises(ValueError):
        scalar_from_json("0.5")


# -- determinant and friends -------------------------------------------------------------


def test_det_examples():
    assert det(Matrix([[2, 1], [0, 2]])) == 4
    assert det(Matrix.identity(3)) == 1
    l = lam()
    assert det(Matrix([[l, 0], [0, l.conjugate()]])) == 1
    # oracle: expand the norm by hand, (9 - 5) / 4
    assert l * l.conjugate() == Fraction(9 - 5, 4)


def test_det_rejects_non_square():
    with pytest.raises(InvariantError):
        det(Matrix([[1, 2, 3], [4, 5, 6]]))


def test_det_matches_sympy():
    rng = random.Random(7)
    for _ in range(30):
        m = rand_matrix(rng, rng.randint(1, 5))
        assert det(m) == sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in m.rows]).det()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_det_multiplicative(seed):
    rng = random.Random(seed)
    d = rng.choice([None, 5])
    a, b = rand_matrix(rng, 4, d=d), rand_matrix(rng, 4, d=d)
    assert det(a @ b) == det(a) * det(b)


def test_nullspace_examples():
    assert nullspace(Matrix([[1, 1], [1, 1]])) == [(1, -1)]
    assert nullspace(Matrix.identity(2)) == []
    assert len(nullspace(Matrix.zeros(2))) == 2


def test_nullspace_leading_one_and_kernel():
    rng = random.Random(3)
    for _ in range(30):
        m = rand_matrix(rng, rng.randint(1, 4), rng.randint(1, 6))
        basis = nullspace(m)
        assert len(basis) == m.ncols - m.rank()
        for v in basis:
            assert next(x for x in v if x) == 1
            assert all(x == 0 for x in m @ v)


def test_inverse_and_solve():
    rng = random.Random(11)
    for _ in range(20):
        d = rng.choice([None, 5])
        g = rand_invertible(rng, rng.randint(1, 5), d)
        assert g @ g.inv() == Matrix.identity(g.nrows)
        b = tuple(rng.randint(-3, 3) for _ in range(g.nrows))
        x = solve(g, b)
        assert tuple(g @ x) == tuple(as_scalar(c) for c in b)


def test_span_basis_keeps_first_vectors():
    assert span_basis([(1, 0), (2, 0), (0, 1), (1, 1)]) == [(1, 0), (0, 1)]


# -- polynomials -----------------------------------------------------------------------


def test_char_poly_examples():
    assert char_poly(Matrix([[2, 1], [0, 2]])) == T**2 - T * 4 + Polynomial([4])
    assert char_poly(Matrix([[0, 1], [0, 0]])) == T**2


def test_char_poly_sol_generator():
    l = lam()
    m = Matrix.block_diag(Matrix([[l, 0], [0, l.conjugate()]]), Matrix([[1, 1], [0, 1]]))
    # oracle: multiply the factors independently
    expected = Polynomial([1, -3, 1]) * Polynomial([-1, 1]) * Polynomial([-1, 1])
    assert char_poly(m) == expected
    assert char_poly(m).coeffs == tuple(as_scalar(c) for c in (1, -5, 8, -5, 1))


def test_char_poly_equals_det_of_t_minus_m():
    rng = random.Random(5)
    for _ in range(20):
        m = rand_matrix(rng, rng.randint(1, 4))
        p = char_poly(m)
        for t in (-2, 0, 1, Fraction(3, 2)):
            assert p(as_scalar(t)) == det(Matrix.identity(m.nrows).scale(t) - m)


def test_char_poly_conjugation_invariant():
    rng = random.Random(9)
    for _ in range(30):
        d = rng.choice([None, 5])
        g = rand_matrix(rng, 4, d=d)
        h = rand_invertible(rng, 4, d)
        assert char_poly(h @ g @ h.inv()) == char_poly(g)


def test_cayley_hamilton():
    rng = random.Random(2)
    for _ in range(10):
        m = rand_matrix(rng, 4, d=5)
        assert char_poly(m)(m).is_zero()


def test_squarefree_examples():
    assert squarefree_part(T**2 - T * 4 + Polynomial([4])) == T - Polynomial([2])
    assert squarefree_part(T**2) == T
    p = Polynomial([1, -3, 1]) * Polynomial([-1, 1]) ** 2
    # oracle: gcd by Euclid then exact division
    g = poly_gcd(p, p.derivative())
    q, r = divmod(p, g)
    assert r.is_zero()
    assert squarefree_part(p) == q.monic() == Polynomial([1, -3, 1]) * Polynomial([-1, 1])


def test_squarefree_zero_rejected():
    with pytest.raises(InvariantError):
        squarefree_part(Polynomial([]))


def test_squarefree_part_is_squarefree():
    rng = random.Random(4)
    for _ in range(40):
        p = Polynomial([1])
        for _ in range(rng.randint(1, 4)):
            root = Fraction(rng.randint(-3, 3))
            p = p * Polynomial([-root, 1]) ** rng.randint(1, 3)
        sf = squarefree_part(p)
        assert poly_gcd(sf, sf.derivative()) == Polynomial([1])
        assert (p % sf).is_zero()


def test_polynomial_str():
    assert str(T**2 - T * 3 + Polynomial([1])) == "T^2 - 3*T + 1"


def _naive_product(a: Matrix, b: Matrix) -> list[list]:
    return [[sum((a[i, k] * b[k, j] for k in range(a.ncols)), Fraction(0)) for j in range(b.ncols)] for i in range(a.nrows)]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([None, 5]), st.sampled_from([None, 5]))
def test_matmul_fast_paths_match_scalar_sums(seed, da, db):
    rng = random.Random(seed)
    n, m, p = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)
    a, b = rand_matrix(rng, n, m, d=da), rand_matrix(rng, m, p, d=db)
    assert (a @ b).rows == tuple(tuple(r) for r in _naive_product(a, b))


def test_integer_series_matches_generic_series():
    from affcryst.affine import exp_nilpotent_matrix, log_unipotent_matrix

    def lift(m: Matrix) -> Matrix:
        # every entry as an element of Q(sqrt 5): the series takes the generic route
        return Matrix._raw(tuple(tuple(QuadNumber(c, 0, 5) for c in r) for r in m.rows))

    rng = random.Random(77)
    for _ in range(30):
        n = rng.randint(1, 5)
        x = Matrix([[rand_fraction(rng) if j > i else 0 for j in range(n)] for i in range(n)])
        u = exp_nilpotent_matrix(x)
        assert u == exp_nilpotent_matrix(lift(x))
        assert log_unipotent_matrix(u) == log_unipotent_matrix(lift(u)) == x
