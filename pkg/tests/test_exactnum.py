from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from quasitile.exactnum import (
    SQRT2,
    TAU,
    QuadValue,
    as_scalar,
    quad_add,
    quad_conjugate,
    quad_mul,
    quad_neg,
    quad_sign,
    sign_array,
    to_float,
)

mpmath.mp.dps = 60

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=40)
ring = st.sampled_from([2, 5])


def quads(d):
    return st.builds(lambda a, b: QuadValue(a, b, d), rationals, rationals)


def mp_value(x: QuadValue):
    w = mpmath.sqrt(2) if x.d == 2 else (1 + mpmath.sqrt(5)) / 2
    a, b = Fraction(x.a), Fraction(x.b)
    return mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator * w


# --- fixed values ----------------------------------------------------------


def test_norm_identity():
    x = QuadValue(1, 1, 2)
    assert quad_mul(x, x.conjugate()) == QuadValue(-1, 0, 2)


def test_tau_relation():
    assert TAU * TAU == QuadValue(1, 1, 5)


def test_silver_square():
    assert (1 + SQRT2) ** 2 == QuadValue(3, 2, 2)


@pytest.mark.parametrize(
    "x, expected",
    [
        (QuadValue(0, 0, 2), 0),
        (QuadValue(-3, 2, 2), -1),
        (QuadValue(1, -1, 5), -1),
        (QuadValue(3, -2, 2), 1),
        (QuadValue(-1, 1, 5), 1),
    ],
)
def test_sign_examples(x, expected):
    assert quad_sign(x) == expected


def test_conjugate_examples():
    assert quad_conjugate(QuadValue(3, 2, 2)) == QuadValue(3, -2, 2)
    conj_tau = quad_conjugate(TAU)
    assert conj_tau == 1 - TAU
    assert conj_tau * TAU == -1
    assert conj_tau == -1 / TAU


def test_mixed_rings_rejected():
    with pytest.raises(ValueError):
        quad_add(QuadValue(1, 1, 2), QuadValue(1, 1, 5))
    with pytest.raises(ValueError):
        QuadValue(1, 1, 3)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QuadValue(1, 1, 2) / QuadValue(0, 0, 2)


def test_to_float_cancellation():
    # (1 + sqrt 2)^-20 is the difference of two nearly equal large terms
    x = (1 + SQRT2) ** -20
    assert x.a > 10**7
    assert to_float(x) == pytest.approx(float(mp_value(x)), rel=2**-50)


# --- ring properties ---------------------------------------------------------


@given(ring.flatmap(lambda d: st.tuples(quads(d), quads(d), quads(d))))
def test_field_axioms(xyz):
    x, y, z = xyz
    assert quad_add(x, y) == quad_add(y, x)
    assert quad_mul(x, quad_add(y, z)) == quad_add(quad_mul(x, y), quad_mul(x, z))
    assert quad_add(x, quad_neg(x)) == 0
    if x != 0:
        assert x * x.inverse() == 1


@given(ring.flatmap(quads))
def test_conjugation_is_involutive_automorphism(x):
    assert quad_conjugate(quad_conjugate(x)) == x
    assert x * x.conjugate() == x.norm()


@given(ring.flatmap(lambda d: st.tuples(quads(d), quads(d))))
def test_conjugation_multiplicative(xy):
    x, y = xy
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()


@given(ring.flatmap(quads))
def test_sign_matches_high_precision(x):
    v = mp_value(x)
    expected = 0 if v == 0 else (1 if v > 0 else -1)
    assert quad_sign(x) == expected


@given(ring.flatmap(lambda d: st.tuples(quads(d), quads(d))))
def test_order_consistent_with_floats(xy):
    x, y = xy
    if abs(float(mp_value(x) - mp_value(y))) > 1e-9:
        assert (x < y) == (to_float(x) < to_float(y))


@given(ring.flatmap(quads))
def test_to_float_relative_error(x):
    v = mp_value(x)
    if v != 0:
        assert abs(to_float(x) - v) <= abs(v) * 2**-50


@given(ring.flatmap(quads))
def test_json_roundtrip(x):
    assert QuadValue.from_json(x.to_json(), x.d) == x


@given(
    ring,
    st.lists(st.tuples(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6)), min_size=1, max_size=30),
)
def test_sign_array_matches_scalar(d, pairs):
    import numpy as np

    alpha = np.array([p for p, _ in pairs], dtype=np.int64)
    beta = np.array([q for _, q in pairs], dtype=np.int64)
    got = sign_array(alpha, beta, d)
    assert list(got) == [quad_sign(QuadValue(int(a), int(b), d)) for a, b in pairs]


def test_as_scalar_promotes():
    assert as_scalar(3, 5) == QuadValue(3, 0, 5)
    assert as_scalar(Fraction(1, 2), None) == Fraction(1, 2)
    with pytest.raises(ValueError):
        as_scalar(QuadValue(1, 1, 2), 5)
