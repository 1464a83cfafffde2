from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from rings import polynomial_ring, quartic_curve, two_planes
from tighthilb.errors import BudgetExhausted, NoStableWindow, ParameterError
from tighthilb.hilbert import (
    binom,
    fit_values,
    hilbert_polynomial_value,
    hilbert_table,
    multiplicity,
    tight_hilbert_table,
)


@pytest.mark.parametrize("n, k, expected", [
    (-1, -1, 1), (0, -1, 0), (3, -1, 0), (-2, -3, 0),
    (-1, 2, 1), (-2, 1, -2), (5, 2, 10), (1, 2, 0), (4, 0, 1),
])
def test_binom_convention(n, k, expected):
    assert binom(n, k) == expected


@settings(max_examples=100, deadline=None)
@given(
    coeffs=st.lists(st.integers(-20, 20), min_size=1, max_size=4),
    extra=st.integers(0, 3),
)
def test_fit_recovers_coefficients(coeffs, extra):
    d = len(coeffs) - 1
    N = d + 2 + extra
    values = {n: hilbert_polynomial_value(coeffs, n) for n in range(1, N + 1)}
    fit = fit_values(values, d)
    assert list(fit.coefficients) == coeffs
    assert fit.window == (1, N)


def test_fit_reports_late_agreement():
    coeffs = (2, 0, -1)
    values = {n: hilbert_polynomial_value(coeffs, n) for n in range(1, 9)}
    values[1] += 1
    fit = fit_values(values, 2)
    assert fit.coefficients == coeffs and fit.agrees_from == 2


@pytest.mark.parametrize("values", [
    {1: 1, 2: 2},
    {1: 0, 2: 5, 3: 1, 4: 3, 5: 7},
])
def test_fit_failures(values):
    with pytest.raises(NoStableWindow):
        fit_values(values, 2)


@pytest.mark.parametrize("p", [3, 5])
def test_two_planes_coefficients(p):
    R, Q, c, _ = two_planes(p)
    assert hilbert_table(Q, 8).fit().coefficients == (2, -1, 0)
    tight = tight_hilbert_table(Q, 8, c, e_max=3)
    assert tight.fit().coefficients == (2, 0, -1)
    assert tight.values == {n: 2 * comb(n + 1, 2) - 1 for n in range(1, 9)}


def test_regular_ring_coefficients():
    R = polynomial_ring(2, "xyz")
    m = R.maximal_ideal()
    table = hilbert_table(m, 6)
    assert table.values == {n: comb(n + 2, 3) for n in range(1, 7)}
    assert table.fit().coefficients == (1, 0, 0, 0)


def test_multiplicity_of_curve():
    T, Q, _, _ = quartic_curve(3)
    assert multiplicity(Q) == 4


def test_depth_must_cover_window():
    R, Q, c, _ = two_planes(3)
    with pytest.raises(ParameterError):
        hilbert_table(Q, 3)


def test_truncated_tables_withhold_coefficients():
    R, Q, c, _ = two_planes(3)
    tight = tight_hilbert_table(Q, 5, c, e_max=0)
    with pytest.raises(BudgetExhausted):
        tight.fit()
    assert tight.fitted is None
    assert tight.to_record()["fitted"] is None
    assert "did not stabilise" in tight.withheld_reason


def test_csv_layout():
    R, Q, c, _ = two_planes(3)
    lines = tight_hilbert_table(Q, 4, c, e_max=3).to_csv().splitlines()
    assert lines[0] == "n,length,status"
    assert lines[1] == "1,1,STABILIZED"
    assert hilbert_table(Q, 4).to_csv().splitlines()[2] == "2,8,EXACT"
