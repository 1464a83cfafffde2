import pytest
from hypothesis import given, settings, strategies as st

from tighthilb.errors import DivisionByZero, DomainError, NotPrime
from tighthilb.gfp import (
    GREVLEX,
    LEX,
    P_MAX,
    PolyRing,
    PrimeField,
    block_order,
    field_arith,
    format_polynomial,
    frobenius_power,
    is_prime,
    mono_divides,
    mono_lcm,
    mono_mul,
    parse_polynomial,
)


@pytest.mark.parametrize("n, expected", [(0, False), (1, False), (2, True), (9, False),
                                         (97, True), (561, False), (P_MAX, True)])
def test_is_prime(n, expected):
    assert is_prime(n) is expected


@pytest.mark.parametrize("p", [1, 4, 6, 91])
def test_field_rejects_composites(p):
    with pytest.raises(NotPrime):
        PrimeField(p)


def test_field_rejects_huge_characteristic():
    with pytest.raises(DomainError):
        PrimeField(2**61 - 1)


@pytest.mark.parametrize("p, a, b, op, expected", [
    (5, 3, 4, "add", 2),
    (5, 3, 4, "mul", 2),
    (5, 0, 3, "inv", 2),
    (7, 0, 3, "neg", 4),
    (3, 2, 2, "add", 1),
])
def test_field_arith(p, a, b, op, expected):
    assert field_arith(PrimeField(p), a, b, op) == expected


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        PrimeField(3).inv(0)


residues = st.integers(min_value=0, max_value=10**6)


@pytest.mark.parametrize("p", [2, 3, 5])
@settings(max_examples=1000, deadline=None)
@given(a=residues, b=residues, c=residues)
def test_field_axioms(p, a, b, c):
    F = PrimeField(p)
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    if F(a):
        assert F.mul(a, F.inv(a)) == 1


def ring(p=3, names="xyz", order=GREVLEX):
    return PolyRing(PrimeField(p), tuple(names), order)


def test_frobenius_of_binomial_char3():
    R = ring(3, "xy")
    x, y = R.gens()
    assert (x + y) ** 3 == x**3 + y**3
    assert frobenius_power(x + y, 2) == (x + y) ** 9


def test_parse_and_format():
    R = ring(5)
    f = parse_polynomial("3*x^2*y - z + 1", R)
    assert format_polynomial(f) == "-2*x^2*y - z + 1"
    assert parse_polynomial(format_polynomial(f), R) == f
    assert format_polynomial(R.zero()) == "0"


def test_grevlex_vs_lex():
    R = ring(3, "xyz")
    x, y, z = R.gens()
    f = x * z + y**2
    assert f.lm == (0, 2, 0)
    assert (x * z + y**2).ring.with_order(LEX)  # order swap keeps the ring usable
    g = R.with_order(LEX)(f)
    assert g.lm == (1, 0, 1)


def test_block_order_eliminates_first_block():
    order = block_order(1)
    assert order.key((1, 0, 0)) > order.key((0, 5, 5))
    assert order.key((0, 2, 0)) > order.key((0, 0, 1))


exps = st.tuples(*[st.integers(0, 4)] * 3)


@settings(max_examples=300, deadline=None)
@given(a=exps, b=exps, c=exps)
@pytest.mark.parametrize("order", [GREVLEX, LEX, block_order(1), block_order(2)])
def test_orders_are_multiplicative_and_total(order, a, b, c):
    if a == b:
        return
    ka, kb = order.key(a), order.key(b)
    assert ka != kb
    assert (ka < kb) == (order.key(mono_mul(a, c)) < order.key(mono_mul(b, c)))
    if a != (0, 0, 0):
        assert order.key(a) > order.key((0, 0, 0))


@settings(max_examples=200, deadline=None)
@given(a=exps, b=exps)
def test_lcm_divisibility(a, b):
    m = mono_lcm(a, b)
    assert mono_divides(a, m) and mono_divides(b, m)


coeff_maps = st.dictionaries(exps, st.integers(0, 4), max_size=5)


@pytest.mark.parametrize("p", [2, 3, 5])
@settings(max_examples=150, deadline=None)
@given(f=coeff_maps, g=coeff_maps, h=coeff_maps)
def test_polynomial_ring_axioms(p, f, g, h):
    R = ring(p)
    f, g, h = (R.from_terms(t) for t in (f, g, h))
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == R.zero()
    assert (f * g).frobenius(1) == f.frobenius(1) * g.frobenius(1)
    assert (f + g).frobenius(1) == f.frobenius(1) + g.frobenius(1)
    if f and g:
        assert (f * g).lm == mono_mul(f.lm, g.lm)


def test_frobenius_matches_power():
    R = ring(2)
    x, y, z = R.gens()
    f = x * y + z + 1
    assert f.frobenius(2) == f**4
