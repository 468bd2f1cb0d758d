import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zaqlms.quaternion import I, J, K, ONE, ZERO, Quaternion

Q = Quaternion


def units():
    return {"1": ONE, "i": I, "j": J, "k": K}


# The full basis multiplication table: ij=k, jk=i, ki=j, squares are -1,
# reversed pairs flip sign, and 1 is the identity.
BASIS_TABLE = {
    ("1", "1"): ONE, ("1", "i"): I, ("1", "j"): J, ("1", "k"): K,
    ("i", "1"): I, ("j", "1"): J, ("k", "1"): K,
    ("i", "i"): -ONE, ("j", "j"): -ONE, ("k", "k"): -ONE,
    ("i", "j"): K, ("j", "k"): I, ("k", "i"): J,
    ("j", "i"): -K, ("k", "j"): -I, ("i", "k"): -J,
}


def test_basis_products_exact():
    u = units()
    for (left, right), expected in BASIS_TABLE.items():
        assert u[left] * u[right] == expected, f"{left}{right}"


def test_identity_and_anticommutation():
    q = Q(0.3, -1.2, 0.7, 2.5)
    assert ONE * q == q and q * ONE == q
    assert J * I == -(I * J)
    assert K * J == -(J * K)
    assert I * K == -(K * I)


def test_mul_hand_expanded_example():
    # (2k)(1 - i) = 2k - 2(ki) = 2k - 2j
    assert (2 * K) * (ONE - I) == Q(0, 0, -2, 2)


def test_add_sub_scale():
    q = Q(1, -2, 3, -4)
    assert q + ZERO == q
    assert q - q == ZERO
    assert 2 * (ONE + I) == Q(2, 2, 0, 0)
    assert q / 2 == Q(0.5, -1, 1.5, -2)
    assert -q == Q(-1, 2, -3, 4)


def test_conj():
    q = Q(1, 2, 3, 4)
    assert q.conj() == Q(1, -2, -3, -4)
    assert q.conj().conj() == q
    # q q* is |q|^2 with no imaginary part
    p = q * q.conj()
    assert p == Q(30, 0, 0, 0)
    assert p.a == pytest.approx(q.norm_squared())


def test_norm():
    assert Q(1, 2, 2, 0).norm() == 3.0
    assert ZERO.norm() == 0.0
    assert abs(Q(0, 3, 0, 4)) == 5.0


def test_sgn_examples():
    assert ZERO.sgn() == ZERO
    assert Q(0, 3, 0, 0).sgn() == I
    s = Q(1, 2, 2, 0).sgn()
    assert s.a == pytest.approx(1 / 3, abs=1e-15)
    assert s.b == pytest.approx(2 / 3, abs=1e-15)
    assert s.c == pytest.approx(2 / 3, abs=1e-15)
    assert s.d == 0.0


def test_sgn_extreme_magnitudes():
    assert Q(1e-300, 0, 0, 0).sgn() == ONE
    tiny = Q(3e-308, 4e-308, 0, 0).sgn()
    assert tiny.norm() == pytest.approx(1.0, abs=1e-12)
    huge = Q(1e308, 1e308, 1e308, 1e308).sgn()
    assert huge.norm() == pytest.approx(1.0, abs=1e-12)


def test_constructor_rejects_non_finite():
    with pytest.raises(ValueError):
        Q(math.inf, 0, 0, 0)
    with pytest.raises(ValueError):
        Q(0, math.nan, 0, 0)
    # overflowing arithmetic surfaces as a loud failure
    big = Q(1e200, 1e200, 0, 0)
    with pytest.raises(ValueError):
        big * big


def test_immutability():
    q = Q(1, 2, 3, 4)
    with pytest.raises(AttributeError):
        q.a = 5.0


# -- text form ------------------------------------------------------------

@pytest.mark.parametrize("text,expected", [
    ("0", ZERO),
    ("1 + 2i + 3j + 4k", Q(1, 2, 3, 4)),
    ("1+2i+3j+4k", Q(1, 2, 3, 4)),
    ("1 - 2i - 3j - 4k", Q(1, -2, -3, -4)),
    ("-1.5e-3k", Q(0, 0, 0, -1.5e-3)),
    ("i", I),
    ("-k", -K),
    ("1-i", Q(1, -1, 0, 0)),
    ("2.5", Q(2.5, 0, 0, 0)),
    (".5j", Q(0, 0, 0.5, 0)),
    ("1e+16", Q(1e16, 0, 0, 0)),
    ("3j + 2i", Q(0, 2, 3, 0)),
])
def test_parse(text, expected):
    assert Q.parse(text) == expected


@pytest.mark.parametrize("bad", ["", "foo", "1 + 2x", "1 ++ 2i", "i2", "1.2.3", "+"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ValueError):
        Q.parse(bad)


finite_floats = st.floats(allow_nan=False, allow_infinity=False)


@given(finite_floats, finite_floats, finite_floats, finite_floats)
def test_str_parse_roundtrip(a, b, c, d):
    q = Q(a, b, c, d)
    assert Q.parse(str(q)) == q


# -- algebraic properties ---------------------------------------------------

unit_scale = st.floats(min_value=-2.0, max_value=2.0)
quaternions = st.builds(Q, unit_scale, unit_scale, unit_scale, unit_scale)


def _max_component_diff(p: Q, q: Q) -> float:
    r = p - q
    return max(abs(r.a), abs(r.b), abs(r.c), abs(r.d))


@given(quaternions, quaternions, quaternions)
def test_associativity(p, q, r):
    assert _max_component_diff((p * q) * r, p * (q * r)) < 1e-12


@given(quaternions, quaternions)
def test_conjugate_antihomomorphism(p, q):
    assert _max_component_diff((p * q).conj(), q.conj() * p.conj()) < 1e-12


@given(quaternions, quaternions)
def test_norm_multiplicative(p, q):
    lhs = (p * q).norm()
    rhs = p.norm() * q.norm()
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, rhs)


@settings(max_examples=200)
@given(st.builds(Q, finite_floats, finite_floats, finite_floats, finite_floats))
def test_sgn_unit_norm(q):
    # unit modulus is required for |q| > 1e-300 and holds for any nonzero q
    if q.is_zero():
        assert q.sgn() == ZERO
    else:
        assert abs(q.sgn().norm() - 1.0) < 1e-12


def test_bulk_random_properties():
    # 10^4-sample spot check at unit scale, mirroring the acceptance gate.
    rng = np.random.default_rng(20240131)
    samples = rng.normal(size=(10_000, 3, 4))
    for row in samples[:2_000]:
        p, q, r = (Q(*c) for c in row)
        assert _max_component_diff((p * q) * r, p * (q * r)) < 1e-12
    for row in samples:
        p, q, _ = (Q(*c) for c in row)
        assert abs((p * q).norm() - p.norm() * q.norm()) <= 1e-10 * max(
            1.0, p.norm() * q.norm())
