import pytest
from hypothesis import given
from hypothesis import strategies as st

from fraccauchy import (
    DomainError,
    ExponentialSymbol,
    PolynomialSymbol,
    PowerSymbol,
    RationalSymbol,
    constant_symbol,
    identity_symbol,
)

finite_complex = st.builds(
    complex,
    st.floats(min_value=-3, max_value=3),
    st.floats(min_value=-3, max_value=3),
)


def fd_derivative_value(f, order, z, eps=1e-4):
    if order == 1:
        return (f.eval(z + eps) - f.eval(z - eps)) / (2 * eps)
    if order == 2:
        return (f.eval(z + eps) - 2 * f.eval(z) + f.eval(z - eps)) / eps**2
    raise ValueError


@pytest.mark.parametrize(
    "symbol",
    [
        PolynomialSymbol([1.0, -2.0, 0.5, 1.0j]),
        ExponentialSymbol(0.7 - 0.2j, 1.5),
        RationalSymbol([1.0, 1.0], [2.0, 0.0, 1.0]),
        PowerSymbol(1.5),
    ],
    ids=["poly", "exp", "rational", "power"],
)
def test_derivatives_match_differences(symbol):
    for z in (0.8 + 0.1j, 2.0, 1.3 - 0.4j):
        for order in (1, 2):
            exact = symbol.derivative(order, z)
            approx = fd_derivative_value(symbol, order, z)
            assert abs(exact - approx) < 1e-5 * (1 + abs(exact))


@pytest.mark.parametrize(
    "symbol",
    [
        PolynomialSymbol([1.0, -2.0, 0.5]),
        ExponentialSymbol(0.7),
        RationalSymbol([1.0], [1.0, 1.0]),
        PowerSymbol(0.5),
    ],
    ids=["poly", "exp", "rational", "power"],
)
def test_taylor_series_reproduces_values(symbol):
    center = 1.0 + 0.2j
    coeffs = symbol.taylor_coefficients(center, 18)
    for dz in (0.05, 0.1j, 0.08 - 0.04j):
        series = sum(c * dz**k for k, c in enumerate(coeffs))
        assert abs(series - symbol.eval(center + dz)) < 1e-10


def test_polynomial_taylor_is_shift():
    p = PolynomialSymbol([0.0, 0.0, 1.0])
    assert p.taylor_coefficients(2.0, 4) == pytest.approx([4.0, 4.0, 1.0, 0.0])


def test_rational_poles_and_domain():
    f = RationalSymbol([1.0], [1.0, 1.0])
    assert f.poles == pytest.approx([-1.0])
    assert not f.domain.contains(-1.0)
    assert f.domain.contains(0.5)
    with pytest.raises(DomainError):
        f.taylor_coefficients(-1.0, 3)


def test_power_branch_cut():
    f = PowerSymbol(0.5)
    assert not f.domain.contains(-2.0)
    assert f.domain.contains(-2.0 + 0.1j)
    with pytest.raises(DomainError):
        f.taylor_coefficients(-2.0, 3)


def test_power_taylor_sqrt_at_one():
    # binomial series of sqrt at 1: 1, 1/2, -1/8, 1/16
    f = PowerSymbol(0.5)
    assert f.taylor_coefficients(1.0, 4) == pytest.approx([1.0, 0.5, -0.125, 0.0625])


def test_helpers():
    assert identity_symbol().eval(3.0 + 1j) == 3.0 + 1j
    assert constant_symbol(2.5).eval(9.0) == 2.5


@given(z=finite_complex)
def test_rational_consistency_with_horner(z):
    num = [1.0, 2.0, -0.5]
    den = [3.0, 0.0, 1.0]
    f = RationalSymbol(num, den)
    p = sum(c * z**k for k, c in enumerate(num))
    q = sum(c * z**k for k, c in enumerate(den))
    assert abs(f.eval(z) - p / q) < 1e-12 * (1 + abs(p / q))
