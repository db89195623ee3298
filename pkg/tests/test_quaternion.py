import math

import numpy as np
import pytest

from qscatter.errors import NumericDomainError
from qscatter.quaternion import (
    ONE,
    UNIT_I,
    UNIT_J,
    UNIT_K,
    Quaternion,
    conjugate,
    im_i,
    inverse,
    is_close,
    multiply,
)


def _random_quaternions(rng, count):
    return [Quaternion.from_components(*rng.normal(size=4)) for _ in range(count)]


def _random_unit(rng):
    q = Quaternion.from_components(*rng.normal(size=4))
    return q / q.norm()


def test_basis_products():
    assert multiply(UNIT_I, UNIT_J) == UNIT_K
    assert multiply(UNIT_J, UNIT_I) == -UNIT_K
    assert multiply(UNIT_J, UNIT_K) == UNIT_I
    assert multiply(UNIT_K, UNIT_I) == UNIT_J

    for unit in (UNIT_I, UNIT_J, UNIT_K):
        assert multiply(unit, unit) == -ONE


def _hamilton(p, q):
    w1, x1, y1, z1 = p.components
    w2, x2, y2, z2 = q.components
    return (
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    )


def test_product_matches_four_component_hamilton_product():
    rng = np.random.default_rng(23)

    for p, q in zip(_random_quaternions(rng, 100), _random_quaternions(rng, 100)):
        assert multiply(p, q).components == pytest.approx(_hamilton(p, q), abs=1e-12)


def test_product_is_associative():
    rng = np.random.default_rng(29)
    ps, qs, rs = (_random_quaternions(rng, 100) for _ in range(3))

    for p, q, r in zip(ps, qs, rs):
        lhs = multiply(multiply(p, q), r)
        rhs = multiply(p, multiply(q, r))
        assert is_close(lhs, rhs, abs_tol=1e-12)


def test_i_plus_j_squared_is_minus_two():
    q = UNIT_I + UNIT_J

    assert is_close(multiply(q, q), Quaternion(-2.0, 0j))


def test_j_commutes_past_complex_as_conjugate():
    z = 0.3 - 1.7j

    left = multiply(UNIT_J, Quaternion(z, 0j))
    right = multiply(Quaternion(z.conjugate(), 0j), UNIT_J)

    assert is_close(left, right)


def test_components_follow_the_basis_order():
    q = Quaternion.from_components(1.0, 2.0, 3.0, 4.0)

    assert q.components == (1.0, 2.0, 3.0, 4.0)
    assert q.z0 == 1 + 2j
    assert q.z1 == 3 + 4j
    assert im_i(q) == 2.0
    assert q.real == 1.0


def test_scalar_arithmetic_coerces_numbers():
    q = Quaternion(1 + 1j, 2.0)

    assert 2 * q == Quaternion(2 + 2j, 4.0)
    assert q * 2 == Quaternion(2 + 2j, 4.0)
    assert 1 - q == Quaternion(-1j, -2.0)
    assert q / 2 == Quaternion(0.5 + 0.5j, 1.0)


def test_conjugate_examples():
    assert conjugate(ONE) == ONE
    assert conjugate(UNIT_I + UNIT_J) == -UNIT_I - UNIT_J
    q = Quaternion(0.2 + 0.4j, -1.1 + 0.3j)
    assert conjugate(conjugate(q)) == q


def test_conjugate_reverses_products():
    rng = np.random.default_rng(7)

    for p, q in zip(_random_quaternions(rng, 50), _random_quaternions(rng, 50)):
        lhs = conjugate(multiply(p, q))
        rhs = multiply(conjugate(q), conjugate(p))
        assert is_close(lhs, rhs, abs_tol=1e-12)


def test_norm_is_multiplicative():
    rng = np.random.default_rng(11)

    for p, q in zip(_random_quaternions(rng, 50), _random_quaternions(rng, 50)):
        assert multiply(p, q).norm() == pytest.approx(p.norm() * q.norm(), rel=1e-13)


def test_inverse_examples():
    assert inverse(UNIT_J) == -UNIT_J
    assert inverse(Quaternion(2.0, 0j)) == Quaternion(0.5, 0j)


def test_inverse_is_two_sided():
    rng = np.random.default_rng(3)

    for q in _random_quaternions(rng, 30):
        assert is_close(multiply(q, inverse(q)), ONE, abs_tol=1e-12)
        assert is_close(multiply(inverse(q), q), ONE, abs_tol=1e-12)


def test_inverse_of_unit_is_conjugate():
    rng = np.random.default_rng(5)

    for _ in range(30):
        lam = _random_unit(rng)
        assert math.isclose(lam.norm(), 1.0, rel_tol=1e-14)
        assert is_close(inverse(lam), conjugate(lam), abs_tol=1e-14)


def test_inverse_of_zero_raises():
    with pytest.raises(NumericDomainError):
        inverse(Quaternion())


def test_quaternion_division_by_quaternion_is_not_supported():
    with pytest.raises(TypeError):
        UNIT_I / UNIT_J
