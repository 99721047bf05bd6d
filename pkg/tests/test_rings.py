from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bideriv.rings import (
    RingDescriptor,
    RingError,
    ring_add,
    ring_eq,
    ring_from_integer,
    ring_mul,
    ring_neg,
    ring_one,
    ring_zero,
)

Z = RingDescriptor.integer()
Q = RingDescriptor.rational()


def test_examples():
    assert ring_add(Z, 2, 3) == 5
    assert ring_add(RingDescriptor.modular(5), 3, 4) == 2
    assert ring_add(Q, Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert ring_mul(RingDescriptor.modular(6), 2, 3) == 0
    assert ring_one(Q) == Fraction(1, 1) and type(ring_one(Q)) is Fraction
    assert ring_from_integer(RingDescriptor.modular(5), 7) == 2
    assert ring_zero(Z) == 0
    assert ring_neg(RingDescriptor.modular(7), 3) == 4
    assert ring_eq(Q, Fraction(2, 4), Fraction(1, 2))


def test_big_integers_do_not_overflow():
    assert ring_mul(Z, 2**80, 3**60) == 2**80 * 3**60


@pytest.mark.parametrize("bad", [
    dict(kind="modular", modulus=1),
    dict(kind="modular", modulus=None),
    dict(kind="integer", modulus=3),
    dict(kind="reals"),
])
def test_invalid_descriptors(bad):
    with pytest.raises(RingError):
        RingDescriptor(**bad)


def test_descriptor_mismatch():
    with pytest.raises(RingError):
        ring_add(Z, Fraction(1, 2), 1)
    with pytest.raises(RingError):
        ring_add(RingDescriptor.modular(5), 7, 1)
    with pytest.raises(RingError):
        ring_mul(Q, 1, Fraction(1, 2))


def test_json_and_text_forms():
    for d in (Z, Q, RingDescriptor.modular(5)):
        assert RingDescriptor.from_json(d.to_json()) == d
        assert RingDescriptor.parse(str(d)) == d
    assert RingDescriptor.modular(5).to_json() == {"kind": "modular", "modulus": 5}
    assert Q.parse_value("-6/4") == Fraction(-3, 2)
    assert Q.format_value(Fraction(-3, 2)) == "-3/2"
    assert Q.format_value(Fraction(4)) == "4"
    assert RingDescriptor.modular(5).parse_value("-1") == 4
    with pytest.raises(RingError):
        Z.parse_value("1/2")
    with pytest.raises(RingError):
        Q.parse_value("1/0")
    with pytest.raises(RingError):
        RingDescriptor.parse("modular:x")


def values(d: RingDescriptor):
    if d.kind == "modular":
        return st.integers(0, d.modulus - 1)
    if d.kind == "rational":
        return st.fractions(max_denominator=50)
    return st.integers(-10**30, 10**30)


RINGS = [Z, Q, RingDescriptor.modular(2), RingDescriptor.modular(6), RingDescriptor.modular(7)]


@pytest.mark.parametrize("d", RINGS, ids=str)
def test_ring_axioms(d):
    @given(values(d), values(d), values(d))
    def check(a, b, c):
        add, mul = d.add, d.mul
        assert add(a, b) == add(b, a)
        assert mul(a, b) == mul(b, a)
        assert add(add(a, b), c) == add(a, add(b, c))
        assert mul(mul(a, b), c) == mul(a, mul(b, c))
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
        assert add(a, d.neg(a)) == d.zero()
        assert mul(d.one(), a) == a
        assert mul(d.zero(), a) == d.zero()
        n = d.normalize(a)
        assert d.normalize(n) == n

    check()
