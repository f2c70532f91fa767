from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from grassmann_pachner.errors import RegistryMismatchError
from grassmann_pachner.grassmann import (GeneratorRegistry, GrassmannElement, Parity, berezin_integrate,
                                         derivative, exponential, merge_sign, multiply, parity)

REG = GeneratorRegistry([1, 2, 3, 4])
x1, x2, x3, x4 = (REG.generator(k) for k in (1, 2, 3, 4))

BIG = GeneratorRegistry(range(6))
coeffs = st.fractions(max_denominator=20).filter(lambda q: abs(q) < 100)


@st.composite
def elements(draw, degree=None):
    terms = {}
    for _ in range(draw(st.integers(0, 6))):
        if degree is None:
            m = draw(st.integers(0, 63))
        else:
            bits = draw(st.lists(st.integers(0, 5), min_size=degree, max_size=degree, unique=True))
            m = sum(1 << b for b in bits)
        terms[m] = terms.get(m, 0) + draw(coeffs)
    return GrassmannElement(BIG, terms)


def test_registry_basics():
    r = GeneratorRegistry([(1, 2, 3, 4), (1, 2, 3, 5)])
    assert len(r) == 2 and (1, 2, 3, 5) in r
    assert r.index((1, 2, 3, 5)) == 1 and r.label(0) == (1, 2, 3, 4)
    assert r.format_label((1, 2, 3, 4)) == "1234"
    with pytest.raises(KeyError):
        r.index((9, 9, 9, 9))
    with pytest.raises(ValueError):
        GeneratorRegistry([1, 1])


def test_products():
    assert x1 * x2 == REG.monomial([1, 2])
    assert x2 * x1 == -REG.monomial([1, 2])
    assert (x1 * x1).is_zero()
    f = x1 * x2 + x3 * x4
    assert f * f == REG.monomial([1, 2, 3, 4]).scale(2)


def test_monomial_order_sign():
    assert REG.monomial([2, 1]) == -REG.monomial([1, 2])
    assert REG.monomial([3, 1, 2]) == REG.monomial([1, 2, 3])
    assert REG.monomial([1, 1]).is_zero()


def test_derivatives():
    assert derivative(x1 * x2, REG.index(1)) == x2
    assert derivative(x1 * x2, REG.index(1), side="right") == -x2
    assert derivative(x2 * x3, REG.index(1)).is_zero()


def test_integrals():
    i1, i2 = REG.index(1), REG.index(2)
    assert berezin_integrate(x1, [i1]) == REG.one()
    assert berezin_integrate(REG.one(), [i1]).is_zero()
    assert berezin_integrate(x2 * x1, [i1, i2]) == REG.one()
    assert berezin_integrate(x1 * x2, [i1, i2]) == -REG.one()


def test_exponential_examples():
    f = x1 * x2 + x3 * x4
    assert exponential(f) == REG.one() + x1 * x2 + x3 * x4 + x1 * x2 * x3 * x4
    assert exponential(REG.zero()) == REG.one()
    c = Fraction(7, 3)
    assert exponential((x1 * x2).scale(c)) == REG.one() + (x1 * x2).scale(c)
    with pytest.raises(ValueError):
        exponential(x1)


def test_parity_examples():
    assert parity(x1 * x2) is Parity.EVEN
    assert parity(x1 * x2 * x3) is Parity.ODD
    assert parity(REG.one() + x1) is Parity.MIXED
    assert parity(REG.zero()) is Parity.EVEN


def test_registry_mismatch():
    other = GeneratorRegistry([5, 6])
    with pytest.raises(RegistryMismatchError):
        x1 * other.generator(5)


def test_coefficient_and_views():
    f = REG.scalar(3) + (x1 * x3).scale(5) + x2 * x3 * x4
    assert f.constant == 3
    assert f.coefficient([1, 3]) == 5
    assert f.coefficient([3, 1]) == 5
    assert f.degrees() == {0, 2, 3}
    assert f.homogeneous_part(2) == (x1 * x3).scale(5)
    assert f.dump() == "+ 3 + 5 x_{1} x_{3} + 1 x_{2} x_{3} x_{4}"


def test_inverse():
    f = REG.scalar(2) + x1 * x2 + x3
    assert f * f.inverse() == REG.one()
    with pytest.raises(ZeroDivisionError):
        (x1 * x2).inverse()


def test_merge_sign():
    assert merge_sign(0b01, 0b10) == 1
    assert merge_sign(0b10, 0b01) == -1
    assert merge_sign(0b101, 0b010) == -1
    assert merge_sign(0b011, 0b100) == 1


@given(elements(), elements(), elements())
def test_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert multiply(a, b) == a * b


@given(st.integers(0, 6), st.integers(0, 6), st.data())
def test_graded_commutativity(da, db, data):
    a = data.draw(elements(degree=da))
    b = data.draw(elements(degree=db))
    sign = -1 if (da * db) % 2 else 1
    assert a * b == (b * a).scale(sign)


@given(st.integers(0, 5), st.integers(0, 6), st.data())
def test_leibniz_left(i, df, data):
    a = data.draw(elements(degree=df))
    b = data.draw(elements())
    eps = -1 if df % 2 else 1
    assert (a * b).left_derivative(i) == a.left_derivative(i) * b + (a * b.left_derivative(i)).scale(eps)


@given(st.integers(0, 5), st.integers(0, 6), st.data())
def test_leibniz_right(i, dg, data):
    b = data.draw(elements())
    c = data.draw(elements(degree=dg))
    eps = -1 if dg % 2 else 1
    assert (b * c).right_derivative(i) == b * c.right_derivative(i) + (b.right_derivative(i) * c).scale(eps)


@given(st.lists(st.integers(0, 5), min_size=2, max_size=2, unique=True), elements())
def test_fubini_and_anticommuting_integrals(ij, f):
    i, j = ij
    assert f.integrate([i, j]) == f.integrate([i]).integrate([j])
    assert f.integrate([i, j]) == -f.integrate([j, i])


@given(st.integers(0, 5), elements())
def test_derivative_nilpotent(i, f):
    assert f.left_derivative(i).left_derivative(i).is_zero()
    assert f.left_multiply_generator(i) == BIG.generator(i) * f


@given(elements(degree=2), elements(degree=2))
def test_exp_of_commuting_sum(f, g):
    assert exponential(f + g) == exponential(f) * exponential(g)


@settings(max_examples=50)
@given(elements(degree=2), st.integers(0, 5))
def test_substitute_scale_integral(f, i):
    c = Fraction(3, 7)
    assert f.substitute_scale(i, c).integrate([i]) == f.integrate([i]).scale(c)
