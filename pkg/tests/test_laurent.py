import pytest
from hypothesis import given, strategies as st

from thetapoly.laurent import (
    DELTA,
    ONE,
    PHI,
    ZERO,
    LaurentPoly,
    RationalFn,
    parse_laurent,
    parse_value,
    to_canonical_string,
)

from conftest import from_sympy, laurent_polys, nonzero_polys, to_sympy

A_PLUS_INV = LaurentPoly({1: 1, -1: 1})


def test_square_of_a_plus_inverse():
    assert A_PLUS_INV * A_PLUS_INV == LaurentPoly({2: 1, 0: 2, -2: 1})


def test_delta_squared():
    assert DELTA * DELTA == LaurentPoly({4: 1, 0: 2, -4: 1})
    assert DELTA * DELTA == PHI * PHI


@given(laurent_polys)
def test_additive_inverse(p):
    assert (p + (-p)).is_zero()
    assert p - p == ZERO


def test_zero_coefficients_are_dropped():
    p = LaurentPoly({3: 0, 1: 2, -1: 0})
    assert p.terms == {1: 2}
    assert LaurentPoly({2: 1}) + LaurentPoly({2: -1}) == ZERO
    assert ZERO.terms == {}


@pytest.mark.parametrize(
    "p, k, expected",
    [
        (LaurentPoly({1: 1, 0: 1, -1: 1}), 4, LaurentPoly({4: 1, 0: 1, -4: 1})),
        (LaurentPoly({5: 3, -2: -1}), 1, LaurentPoly({5: 3, -2: -1})),
        (PHI, -1, PHI),
    ],
)
def test_substitute_power(p, k, expected):
    assert p.substitute_power(k) == expected


def test_substitute_power_rejects_zero():
    with pytest.raises(ValueError):
        PHI.substitute_power(0)


@given(laurent_polys, st.integers(-4, 4).filter(bool), st.integers(-4, 4).filter(bool))
def test_substitution_composes(p, k, m):
    assert p.substitute_power(k).substitute_power(m) == p.substitute_power(k * m)


@given(laurent_polys, laurent_polys, laurent_polys)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p * ONE == p


@given(laurent_polys, laurent_polys)
def test_product_matches_sympy(p, q):
    assert p * q == from_sympy(to_sympy(p) * to_sympy(q))
    assert p - q == from_sympy(to_sympy(p) - to_sympy(q))


@given(laurent_polys, st.integers(0, 4))
def test_power_matches_repeated_product(p, n):
    expected = ONE
    for _ in range(n):
        expected = expected * p
    assert p**n == expected


def test_negative_power_of_monomial():
    assert LaurentPoly({2: -1}) ** -3 == LaurentPoly({-6: -1})


def test_rational_sum():
    inv_phi = RationalFn(ONE, PHI)
    assert inv_phi + inv_phi == RationalFn(LaurentPoly({0: 2}), PHI)


def test_rational_common_denominator():
    lhs = RationalFn(PHI * PHI - 1, PHI)
    rhs = RationalFn(PHI) - RationalFn(ONE, PHI)
    assert lhs == rhs


def test_brunnian_constant_arithmetic():
    inv_phi = RationalFn(ONE, PHI)
    inner = RationalFn(PHI * -3) + RationalFn(LaurentPoly({0: 3}), PHI)
    value = inv_phi * inner - RationalFn(ONE, PHI * PHI)
    assert value == RationalFn(LaurentPoly({0: -3})) + RationalFn(LaurentPoly({0: 2}), PHI * PHI)


@pytest.mark.parametrize(
    "r, s, equal",
    [
        (RationalFn(ZERO, PHI), RationalFn(ZERO, PHI * PHI), True),
        (RationalFn(ONE, PHI), RationalFn(LaurentPoly({-2: 1}), LaurentPoly({0: 1, -4: 1})), True),
        (RationalFn(ONE, PHI), RationalFn(ONE, PHI * PHI), False),
    ],
)
def test_rational_equals(r, s, equal):
    assert (r == s) is equal


@given(laurent_polys, nonzero_polys, nonzero_polys, nonzero_polys)
def test_rational_equality_is_an_equivalence(p, q, u, v):
    r = RationalFn(p, q)
    s = RationalFn(p * u, q * u)
    t = RationalFn(p * u * v, q * u * v)
    assert r == r
    assert (r == s) and (s == r)
    assert r == t and s == t


@given(laurent_polys, nonzero_polys, laurent_polys, nonzero_polys)
def test_rational_field_operations(p, q, r, s):
    x, y = RationalFn(p, q), RationalFn(r, s)
    assert x + y - y == x
    assert (x + y) * RationalFn(q * s) == RationalFn(p * s + r * q)
    if not y.is_zero():
        assert (x / y) * y == x


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        RationalFn(ONE, ZERO)


@pytest.mark.parametrize(
    "value, text",
    [
        (ZERO, "0"),
        (-LaurentPoly({2: 1, 1: 1, 0: 2, -1: 1, -2: 1}), "-A^2 - A - 2 - A^-1 - A^-2"),
        (DELTA, "-A^2 - A^-2"),
        (LaurentPoly({4: -3, 0: -4, -4: -3}), "-3*A^4 - 4 - 3*A^-4"),
        (RationalFn(ONE, PHI), "(1) / (A^2 + A^-2)"),
    ],
)
def test_canonical_string(value, text):
    assert to_canonical_string(value) == text


@given(laurent_polys, nonzero_polys)
def test_canonical_string_round_trip(p, q):
    assert parse_laurent(to_canonical_string(p)) == p
    r = parse_value(to_canonical_string(RationalFn(p, q)))
    assert (r.num, r.den) == (p, q)


def test_evaluate_substitutes_a_polynomial():
    t = LaurentPoly({1: 1})
    f = t * t - t * 3 + 2
    y = LaurentPoly({1: -1, 0: -2, -1: -1})
    assert f.evaluate(-y) == from_sympy(to_sympy(f).subs("A", -to_sympy(y)))


def test_as_laurent():
    assert RationalFn(PHI * PHI, PHI).as_laurent() == PHI
    assert RationalFn(ONE, PHI).as_laurent() is None
