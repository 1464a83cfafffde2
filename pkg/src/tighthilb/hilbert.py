"""Hilbert and tight Hilbert functions and their coefficients.

Coefficients are read in the basis

    P(n) = sum_i (-1)^i e_i C(n+d-1-i, d-i)

by solving an exact rational system on the last d+1 tabulated points and
then walking backwards while the polynomial still reproduces the table.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BudgetExhausted, NoStableWindow, ParameterError
from .ideals import RingIdeal, ideal_power, require_m_primary
from .tight import (
    BUDGET_EXHAUSTED,
    DEFAULT_E_MAX,
    DEFAULT_WINDOW,
    STABILIZED,
    ClosureResult,
    star_hilbert_value,
)

ORDINARY = "ORDINARY"
TIGHT = "TIGHT"
EXACT = "EXACT"


def binom(n: int, k: int) -> int:
    """Binomial coefficient as a polynomial in n, with C(n,-1) = [n == -1].

    For k >= 0 this is n(n-1)...(n-k+1)/k!, valid for negative n too.
    """
    if k == -1:
        return 1 if n == -1 else 0
    if k < 0:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= n - i
        den *= i + 1
    return num // den


def basis_value(n: int, d: int, i: int) -> int:
    """(-1)^i C(n+d-1-i, d-i)."""
    return (-1) ** i * binom(n + d - 1 - i, d - i)


def hilbert_polynomial_value(coeffs: Sequence[int], n: int) -> int:
    d = len(coeffs) - 1
    return sum(e * basis_value(n, d, i) for i, e in enumerate(coeffs))


@dataclass
class Fit:
    coefficients: Tuple[int, ...]
    window: Tuple[int, int]
    agrees_from: int


def _solve(rows: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    n = len(rows)
    A = [row[:] + [b] for row, b in zip(rows, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col] / A[col][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [A[i][n] / A[i][i] for i in range(n)]


def fit_values(values: Dict[int, int], d: int) -> Fit:
    """Fit the degree-d Hilbert-type polynomial to the tail of ``values``."""
    ns = sorted(values)
    if len(ns) < d + 2:
        raise NoStableWindow(f"need at least {d + 2} values, have {len(ns)}")
    if ns != list(range(ns[0], ns[-1] + 1)):
        raise ParameterError("table values must be consecutive")
    tail = ns[-(d + 1) :]
    rows = [[Fraction(basis_value(n, d, i)) for i in range(d + 1)] for n in tail]
    sol = _solve(rows, [Fraction(values[n]) for n in tail])
    if any(x.denominator != 1 for x in sol):
        raise NoStableWindow(f"non-integral coefficients {sol}")
    coeffs = tuple(int(x) for x in sol)
    lo = ns[-1]
    while lo - 1 in values and hilbert_polynomial_value(coeffs, lo - 1) == values[lo - 1]:
        lo -= 1
    if ns[-1] - lo + 1 < d + 2:
        raise NoStableWindow(
            f"values agree with a degree-{d} polynomial only on [{lo}, {ns[-1]}]; increase N"
        )
    return Fit(coeffs, (lo, ns[-1]), lo)


@dataclass
class HilbertTable:
    kind: str
    d: int
    values: Dict[int, int]
    statuses: Dict[int, str] = field(default_factory=dict)
    closures: Dict[int, ClosureResult] = field(default_factory=dict, repr=False)
    fitted: Optional[Tuple[int, ...]] = None
    fit_window: Optional[Tuple[int, int]] = None
    withheld_reason: str = ""

    @property
    def N(self) -> int:
        return max(self.values)

    def reliable(self, ns: Optional[Sequence[int]] = None) -> bool:
        ns = self.values if ns is None else ns
        return all(self.statuses.get(n, EXACT) != BUDGET_EXHAUSTED for n in ns)

    def fit(self) -> Fit:
        """Fit and store coefficients; tight tables need stabilised closures in the window."""
        f = fit_values(self.values, self.d)
        lo, hi = f.window
        if not self.reliable(range(lo, hi + 1)):
            bad = [n for n in range(lo, hi + 1) if self.statuses.get(n) == BUDGET_EXHAUSTED]
            self.withheld_reason = f"closure search did not stabilise at n = {bad}"
            raise BudgetExhausted(self.withheld_reason)
        self.fitted = f.coefficients
        self.fit_window = f.window
        return f

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "length", "status"])
        for n in sorted(self.values):
            w.writerow([n, self.values[n], self.statuses.get(n, EXACT)])
        return buf.getvalue()

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "d": self.d,
            "values": {str(n): self.values[n] for n in sorted(self.values)},
            "statuses": {str(n): self.statuses.get(n, EXACT) for n in sorted(self.values)},
            "fitted": list(self.fitted) if self.fitted is not None else None,
            "fit_window": list(self.fit_window) if self.fit_window else None,
            "withheld_reason": self.withheld_reason or None,
        }


def _check_depth(Q: RingIdeal, N: int) -> int:
    d = Q.ring.d
    if N < d + 2:
        raise ParameterError(f"table depth N = {N} must be at least d + 2 = {d + 2}")
    return d


def hilbert_table(Q: RingIdeal, N: int) -> HilbertTable:
    """ell(R/Q^n) for n = 1..N."""
    d = _check_depth(Q, N)
    values = {n: require_m_primary(ideal_power(Q, n)) for n in range(1, N + 1)}
    return HilbertTable(ORDINARY, d, values)


def tight_hilbert_table(
    Q: RingIdeal,
    N: int,
    c,
    e_max: int = DEFAULT_E_MAX,
    stability_window: int = DEFAULT_WINDOW,
    budget: Optional[int] = None,
) -> HilbertTable:
    """ell(R/(Q^n)*) for n = 1..N with per-n closure statuses."""
    d = _check_depth(Q, N)
    table = HilbertTable(TIGHT, d, {})
    for n in range(1, N + 1):
        v = star_hilbert_value(Q, n, c, e_max, stability_window, budget)
        table.values[n] = v.length
        table.statuses[n] = v.status
        table.closures[n] = v.result
    return table


def fit_coefficients(table: HilbertTable) -> Tuple[int, ...]:
    return table.fit().coefficients


def multiplicity(Q: RingIdeal, N: Optional[int] = None) -> int:
    """e_0(Q) from the ordinary table; checked against 1 <= e_0 <= ell(R/Q)."""
    d = Q.ring.d
    table = hilbert_table(Q, N if N is not None else d + 6)
    e0 = fit_coefficients(table)[0]
    if not 1 <= e0 <= table.values[1]:
        raise AssertionError(f"multiplicity {e0} outside [1, ell(R/Q) = {table.values[1]}]")
    return e0
