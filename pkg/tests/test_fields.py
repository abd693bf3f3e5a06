from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ltcalc.errors import (DegenerateSpec, EvenPrimeUnsupported, NonEisenstein,
                           NonUnitInverse, ZeroResidue)
from ltcalc.fields import LocalField, Scalar, make_field


def test_make_field_base_case():
    F = make_field({"prime": 3, "kind": "qp"})
    assert (F.p, F.q, F.e, F.f) == (3, 3, 1, 1)
    assert F.pi() == F.scalar(3)


def test_make_field_eisenstein_sqrt3():
    F = make_field({"prime": 3, "kind": "eisenstein", "poly": [-3, 0, 1]})
    assert (F.e, F.f, F.q, F.d) == (2, 1, 3, 2)
    assert F.scalar(3).valuation() == 2
    pi = F.pi()
    assert pi * pi == F.scalar(3)


def test_make_field_unramified_25():
    F = make_field({"prime": 5, "kind": "unramified", "degree": 2})
    assert F.q == 25
    assert F.pi() == F.scalar(5)


def test_even_prime_rejected():
    with pytest.raises(EvenPrimeUnsupported):
        LocalField(2, "qp")


def test_non_eisenstein_rejected():
    with pytest.raises(NonEisenstein):
        LocalField(3, "eisenstein", poly=[-9, 0, 1])   # v(const) = 2
    with pytest.raises(NonEisenstein):
        LocalField(3, "eisenstein", poly=[-3, 1, 1])   # middle coeff a unit


def test_degenerate_spec():
    with pytest.raises(DegenerateSpec):
        LocalField(9, "qp")
    with pytest.raises(DegenerateSpec):
        make_field({"kind": "qp"})


def test_valuations():
    F = LocalField(3, "qp", prec=20)
    assert F.scalar(3).valuation() == 1
    assert F.scalar(7).valuation() == 0
    assert F.scalar(18).valuation() == 2
    assert F.scalar(0).valuation() is None


def test_geometric_series_inverse():
    # (1+p)^{-1} mod p^4 for p = 3 is 1 - 3 + 9 - 27 = 61 mod 81
    F = LocalField(3, "qp", prec=20)
    x = F.scalar(4, 4).invert()
    assert x.coords[0] % 81 == 61
    assert x.prec == 4


def test_invert_units_and_pi_powers():
    F = LocalField(3, "qp", prec=20)
    for n in (1, 2, 5, 7, 10):
        a = F.scalar(n)
        if a.valuation() == 0:
            assert a.invert() * a == F.one()
    third = F.scalar(3).invert()
    assert third * F.scalar(3) == F.one()
    assert third.valuation() == -1


def test_nonunit_inverse_raises():
    F = LocalField(3, "qp", prec=8)
    with pytest.raises(NonUnitInverse):
        F.zero().invert()


def test_fraction_scalars():
    F = LocalField(5, "qp", prec=16)
    half = F.scalar(Fraction(1, 2))
    assert half * F.scalar(2) == F.one()
    fifth = F.scalar(Fraction(1, 5))
    assert fifth.valuation() == -1


def test_teichmuller_mu2():
    F = LocalField(3, "qp", prec=20)
    t = F.teichmuller(1, 12)
    assert t == F.one()
    w = F.teichmuller(2, 12)
    assert (w * w - F.one()).is_zero_at(12)
    assert (w + F.one()).is_zero_at(12)  # -1 is the only other square root
    with pytest.raises(ZeroResidue):
        F.teichmuller(0, 12)


def test_teichmuller_q25_generator():
    F = LocalField(5, "unramified", degree=2, prec=12)
    g = F.residue_multiplicative_generator()
    w = F.teichmuller(g, 10)
    assert (w.pow_int(24) - F.one()).is_zero_at(10)
    assert (w.pow_int(25) - w).is_zero_at(10)
    for k in (2, 3, 4, 6, 8, 12):
        assert not (w.pow_int(k) - F.one()).is_zero_at(4)


def test_precision_rules():
    F = LocalField(3, "qp")
    a = F.scalar(4, 10)
    b = F.scalar(9, 6)
    assert (a + b).prec == 6
    # mul: min(prec_a + v_b, prec_b + v_a) = min(10 + 2, 6 + 0) = 6
    assert (a * b).prec == 6


def test_scalar_text_round_trip():
    F3 = LocalField(3, "qp", prec=20)
    E = LocalField(3, "eisenstein", poly=[-3, 0, 1], prec=16)
    for s in (F3.scalar(14, 9), F3.scalar(3).invert(), F3.scalar(-2, 7),
              E.scalar([4, 5], 9), E.pi_power(-2)):
        t = s.to_text()
        back = Scalar.from_text(s.field, t)
        assert (s - back).is_zero()
        assert back.prec == s.prec


small_ints = st.integers(min_value=-200, max_value=200)


@settings(max_examples=60, deadline=None)
@given(small_ints, small_ints, small_ints)
def test_ring_axioms_qp(x, y, z):
    F = LocalField(3, "qp", prec=14)
    a, b, c = F.scalar(x), F.scalar(y), F.scalar(z)
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert a + b == b + a
    assert a * b == b * a


@settings(max_examples=40, deadline=None)
@given(small_ints, small_ints)
def test_valuation_additive(x, y):
    F = LocalField(3, "qp", prec=16)
    a, b = F.scalar(x), F.scalar(y)
    va, vb = a.valuation(), b.valuation()
    if va is not None and vb is not None:
        assert (a * b).valuation() == va + vb


@settings(max_examples=40, deadline=None)
@given(st.lists(small_ints, min_size=2, max_size=2),
       st.lists(small_ints, min_size=2, max_size=2))
def test_ring_axioms_eisenstein(xs, ys):
    E = LocalField(3, "eisenstein", poly=[-3, 0, 1], prec=12)
    a, b = E.scalar(xs), E.scalar(ys)
    assert a * b == b * a
    assert (a + b) * a == a * a + b * a
    if a.valuation() == 0:
        assert a.invert() * a == E.one()


def test_precision_exhausted():
    from ltcalc.errors import PrecisionExhausted
    F = LocalField(3, "qp")
    x = F.scalar(9, 3)   # valuation 2 at three digits: 1/x keeps none
    with pytest.raises(PrecisionExhausted):
        x.invert()


def test_pi_power_negative():
    F = LocalField(3, "qp", prec=12)
    x = F.pi_power(-3)
    assert (x * F.scalar(27) - F.one()).is_zero_at(10)
