from __future__ import annotations

import random
from fractions import Fraction

import pytest

from affcryst.affine import AffineMap
from affcryst.catalog import (
    KLEIN_RELATIONS,
    heisenberg,
    klein_spec,
    pm_spec,
    square_product,
    translations,
    unfixed_spec,
)
from affcryst.cryst import conjugate, precompose
from affcryst.errors import InvariantError, RelationError
from affcryst.linalg import Matrix
from affcryst.nillie import random_automorphism
from affcryst.realization import (
    Automorphism,
    ExtensionSpec,
    build_split_extension,
    check_lift,
    cyclic_splitting,
    evaluate_word,
    exact_order,
    fixed_point_check,
    realize,
    realizing_lift,
)
from affcryst.scheuneman import two_step_rep
from affcryst.torus import CAProduct, apply_linear, ca_to_rep

from helpers import rand_ca_product, rand_invertible

FLIP = Matrix.diag([1, -1])


def test_exact_order():
    assert exact_order(FLIP, 4) == 2
    assert exact_order(Matrix.identity(3), 1) == 1
    assert exact_order(Matrix([[0, -1], [1, 0]]), 4) == 4
    assert exact_order(Matrix([[1, 1], [0, 1]]), 10) is None


def test_cyclic_splitting_examples():
    # reflection composed with a translation along its fixed line: order 2 after correction
    g_hat = AffineMap.from_parts(FLIP, (3, 0))
    g = cyclic_splitting(g_hat, 2)
    assert g == AffineMap.from_parts(FLIP, (0, 0))
    glide = AffineMap.from_parts(FLIP, (Fraction(1, 2), 0))
    assert glide @ glide == AffineMap.translation_by((1, 0))
    assert cyclic_splitting(glide, 2) == AffineMap.from_parts(FLIP)
    assert cyclic_splitting(Matrix.identity(3), 1) == Matrix.identity(3)
    # k = 1 removes a unipotent map entirely
    assert cyclic_splitting(AffineMap.translation_by((2, -1)), 1) == Matrix.identity(3)
    # already of finite order: unchanged
    r = AffineMap.from_parts(Matrix([[0, -1], [1, 0]]), (1, 0))
    assert cyclic_splitting(r, 4) == r


def test_cyclic_splitting_rejects_bad_input():
    with pytest.raises(InvariantError):
        cyclic_splitting(AffineMap.from_parts(Matrix.diag([2, 1])), 2)
    with pytest.raises(InvariantError):
        cyclic_splitting(Matrix.identity(3), 0)


def test_cyclic_splitting_random_commuting_unipotent():
    rng = random.Random(0)
    for _ in range(20):
        t = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        s = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        g_hat = AffineMap.from_parts(Matrix.diag([1, -1, 1]), (t, 0, s))
        g = cyclic_splitting(g_hat, 2)
        assert g @ g == Matrix.identity(4)
        assert g.linear_part == Matrix.diag([1, -1, 1])


def test_fixed_point_check_on_translations_returns_inverse():
    rng = random.Random(1)
    rho = translations(2)
    for _ in range(10):
        phi = rand_invertible(rng, 2)
        c = fixed_point_check(rho, phi)
        assert c is not None
        assert conjugate(rho, c) == precompose(rho, phi)
        assert c.linear_part == phi.inv()


def test_realizing_lift_acts_as_phi():
    rng = random.Random(2)
    rho = two_step_rep(heisenberg(1))
    for _ in range(5):
        phi = random_automorphism(heisenberg(1), rng)
        q = realizing_lift(rho, phi)
        assert q is not None and check_lift(rho, q, phi)


def test_fixed_point_check_moves_square_product():
    rho = ca_to_rep(square_product())
    assert fixed_point_check(rho, FLIP) is None
    assert fixed_point_check(rho, Matrix.diag([-1, 1])) is not None


def test_evaluate_word():
    a = AffineMap.translation_by((1, 0))
    b = AffineMap.translation_by((0, 1))
    assert evaluate_word([a, b], [1, 2, -1, -2]) == Matrix.identity(3)
    assert evaluate_word([a], [1, 1]) == AffineMap.translation_by((2, 0))


def test_spec_validation():
    rho = translations(2)
    with pytest.raises(InvariantError):
        ExtensionSpec(rho, (Automorphism(FLIP, 3),), ())
    with pytest.raises(InvariantError):
        ExtensionSpec(rho, (Automorphism(FLIP, 2),), ((1, 4),))
    with pytest.raises(InvariantError):
        ExtensionSpec(two_step_rep(heisenberg(1)), (Automorphism(Matrix.diag([1, 2, 1]), 1),), ())
    with pytest.raises(InvariantError):
        ExtensionSpec(rho, (Automorphism(FLIP, 2),), (), lifts=())


def test_klein_bottle_is_realized():
    report = realize(klein_spec())
    assert report.realizable and report.base_crystallographic
    auto = report.autos[0]
    assert auto.fixed and auto.certified
    q = auto.lift
    assert q.linear_part == FLIP
    assert q @ q == AffineMap.translation_by((1, 0))
    assert report.extension.ok


def test_klein_bottle_supplied_lift():
    report = realize(klein_spec(with_lift=True))
    assert report.realizable
    assert report.autos[0].lift == AffineMap.from_parts(FLIP, (Fraction(1, 2), 0))


def test_pm_is_realized_by_a_reflection():
    report = realize(pm_spec())
    assert report.realizable
    q = report.autos[0].lift
    assert q @ q == Matrix.identity(3)


def test_unfixed_is_not_certified():
    report = realize(unfixed_spec())
    assert not report.realizable
    assert not report.autos[0].fixed and report.autos[0].certified
    assert report.extension is None


def test_wrong_lift_order_raises():
    spec = klein_spec()
    rot = AffineMap.from_parts(Matrix([[0, -1], [1, 0]]))
    with pytest.raises(InvariantError):
        build_split_extension(spec, [rot])
    with pytest.raises(InvariantError):
        build_split_extension(spec, [AffineMap.from_parts(Matrix.identity(2))])


def test_failing_relation_strict_and_lenient():
    spec = klein_spec()
    pm_lift = AffineMap.from_parts(FLIP)
    with pytest.raises(RelationError):
        build_split_extension(spec, [pm_lift])
    ext = build_split_extension(spec, [pm_lift], strict=False)
    assert not ext.ok
    failing = [r for r in ext.relations if not r.holds]
    assert [r.word for r in failing] == [KLEIN_RELATIONS[2]]


def test_base_restriction_reproduces_generators():
    for spec in (klein_spec(), pm_spec()):
        report = realize(spec)
        ext = report.extension
        k = len(spec.autos)
        assert list(ext.generators[k:]) == spec.rep.generators()


def test_stabilizer_is_closed_under_composition():
    """If phi and psi fix [rho] then so does phi psi."""
    rng = random.Random(3)
    checked = 0
    candidates = [FLIP, Matrix.diag([-1, 1]), Matrix.diag([-1, -1]), Matrix([[0, 1], [1, 0]]), Matrix([[1, 1], [0, 1]])]
    for _ in range(10):
        C = rand_ca_product(rng, 2)
        rho = ca_to_rep(C)
        fixed = [m for m in candidates if fixed_point_check(rho, m) is not None]
        for a in fixed:
            for b in fixed:
                assert fixed_point_check(rho, a @ b) is not None
                checked += 1
    assert checked


def test_zero_product_fixed_by_every_automorphism():
    rng = random.Random(4)
    rho = ca_to_rep(CAProduct.zero(2))
    for _ in range(10):
        phi = rand_invertible(rng, 2)
        assert apply_linear(CAProduct.zero(2), phi).is_zero()
        assert fixed_point_check(rho, phi) is not None
