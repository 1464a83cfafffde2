"""Tight closure of m-primary ideals, witnessed by a fixed test element.

For an m-primary ideal I with standard-monomial basis s_1..s_k of R/I,
the set V_e = {x in R/I : c x^q in I^[q]} (q = p^e) is the kernel of the
F_p-linear map sum a_i s_i -> NF(c sum a_i s_i^q) into R/I^[q]; the map is
linear because Frobenius is additive and fixes F_p.  Intersecting V_0 .. V_E
gives a decreasing chain W_E of ideals of R/I.  When c is a genuine test
element every W_E contains I*/I, and I* is the limit of the chain.

Non-membership is therefore only certified relative to (c, e_max).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import AssumptionViolated, BudgetExhausted, DomainError, NotMPrimary
from .gfp import Exponent, Polynomial
from .ideals import (
    INFINITE,
    PresentedRing,
    RingIdeal,
    bracket_power,
    ideal_intersect,
    ideal_power,
    ideal_product,
    ideal_quotient,
    length,
    require_m_primary,
)
from .linalg import EchelonBasis, rref

STABILIZED = "STABILIZED"
BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"

DEFAULT_E_MAX = 4
DEFAULT_WINDOW = 2
DEFAULT_BUDGET = 200_000


def monomial_budget() -> int:
    """Cap on target monomials per linear map; ``TIGHTHILB_BUDGET`` overrides."""
    raw = os.environ.get("TIGHTHILB_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass
class TestElement:
    c: Polynomial
    provenance: str = "user-supplied"

    __test__ = False  # keep pytest from collecting this class

    def validate(self, ring: PresentedRing, primes: Sequence[RingIdeal] = ()) -> Dict[str, bool]:
        """Check c is nonzero in R and outside each supplied prime.

        Returns flags; a nonzerodivisor is certainly outside every minimal
        prime, so ``nonzerodivisor`` certifies membership in R-circ.
        """
        c = ring.reduce(ring.ambient(self.c))
        if not c:
            raise DomainError(f"test element {self.c} is zero in the ring")
        for P in primes:
            if P.contains(c):
                raise AssumptionViolated(f"test element {c} lies in the prime {P}")
        annihilator = ideal_quotient(ring.zero_ideal(), c)
        return {
            "nonzero": True,
            "nonzerodivisor": annihilator.issubset(ring.zero_ideal()),
            "avoids_primes": bool(primes),
        }

    def __str__(self):
        return str(self.c)


def jacobian_test_element(ring: PresentedRing) -> TestElement:
    """A partial derivative of the defining equation of a hypersurface.

    The first partial derivative that is a nonzerodivisor in R is used.
    """
    if len(ring.J.polys) != 1:
        raise DomainError("jacobian strategy needs a hypersurface (principal defining ideal)")
    f = ring.J.polys[0]
    amb = ring.ambient
    for i in range(amb.nvars):
        terms = {}
        for e, c in f.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                terms[tuple(e2)] = c * e[i]
        d = ring.reduce(amb.from_terms(terms))
        if not d:
            continue
        te = TestElement(d, "jacobian-hypersurface")
        if te.validate(ring)["nonzerodivisor"]:
            return te
    raise DomainError("no partial derivative is a nonzerodivisor (ring not reduced?)")


@dataclass
class Subspace:
    """A subspace of R/I in coordinates of the standard monomials of I."""

    ideal: RingIdeal
    monomials: Tuple[Exponent, ...]
    basis: List[List[int]]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def lifts(self) -> List[Polynomial]:
        amb = self.ideal.ring.ambient
        return [
            amb.from_terms({m: a for m, a in zip(self.monomials, v) if a})
            for v in self.basis
        ]

    def contains_vector(self, v: Sequence[int]) -> bool:
        p = self.ideal.ring.p
        return len(rref(self.basis + [list(v)], p)) == self.dim

    def coordinates(self, f: Polynomial) -> List[int]:
        """Coordinates of the class of f in R/I."""
        nf = self.ideal.normal_form(f)
        index = {m: i for i, m in enumerate(self.monomials)}
        v = [0] * len(self.monomials)
        for e, c in nf.items():
            v[index[e]] = c
        return v


def _basis_of(I: RingIdeal) -> Tuple[Exponent, ...]:
    L = length(I.ring, I)
    if L == INFINITE:
        raise NotMPrimary(f"{I} is not primary to the maximal ideal")
    return tuple(I.standard_monomials())


def _frobenius_images(
    I: RingIdeal, monomials: Sequence[Exponent], c: Polynomial, e: int
) -> List[Dict[Exponent, int]]:
    """NF(c * s^q) modulo I^[q] for each standard monomial s."""
    q = I.ring.p**e
    G = bracket_power(I, e).gb
    c = I.ring.ambient(c)
    out = []
    for s in monomials:
        sq = tuple(k * q for k in s)
        out.append(G.reduce_terms(c.mul_term(sq)._terms))
    return out


def _restricted_kernel(
    images: List[Dict[Exponent, int]], W: List[List[int]], p: int, budget: Optional[int]
) -> List[List[int]]:
    """Vectors w in span(W) whose image vanishes, returned as an RREF basis."""
    eb = EchelonBasis(p, budget)
    kernel = []
    for j, w in enumerate(W):
        v: Dict[Exponent, int] = {}
        for i, a in enumerate(w):
            if not a:
                continue
            for m, b in images[i].items():
                nv = (v.get(m, 0) + a * b) % p
                if nv:
                    v[m] = nv
                else:
                    v.pop(m, None)
        combo = eb.add(v, j)
        if combo is not None:
            kernel.append(combo)
    k = len(W[0]) if W else 0
    vecs = []
    for combo in kernel:
        vec = [0] * k
        for j, a in combo.items():
            for i, b in enumerate(W[j]):
                if b:
                    vec[i] = (vec[i] + a * b) % p
        vecs.append(vec)
    return rref(vecs, p) if vecs else []


def membership_space(
    I: RingIdeal, c, e: int, budget: Optional[int] = None
) -> Subspace:
    """V_e = {x in R/I : c x^(p^e) in I^[p^e]}."""
    if e < 0:
        raise DomainError("Frobenius exponent must be non-negative")
    c = _element(I.ring, c)
    monomials = _basis_of(I)
    p = I.ring.p
    budget = monomial_budget() if budget is None else budget
    k = len(monomials)
    if k > budget:
        raise BudgetExhausted(f"R/I has {k} > {budget} standard monomials")
    images = _frobenius_images(I, monomials, c, e)
    identity = [[int(i == j) for i in range(k)] for j in range(k)]
    return Subspace(I, monomials, _restricted_kernel(images, identity, p, budget))


def _element(ring: PresentedRing, c) -> Polynomial:
    if isinstance(c, TestElement):
        c = c.c
    return ring.ambient(c)


@dataclass
class ClosureResult:
    ideal: RingIdeal
    closure: RingIdeal
    e_max: int
    stabilized_at: Optional[int]
    status: str
    test_element: TestElement
    dims: List[int] = field(default_factory=list)
    note: str = ""

    @property
    def stabilized(self) -> bool:
        return self.status == STABILIZED

    def colength(self) -> int:
        return require_m_primary(self.closure) if not self.closure.is_unit() else 0

    def to_record(self) -> dict:
        return {
            "generators": [str(g) for g in self.closure.gb.polys],
            "e_max": self.e_max,
            "stabilized_at": self.stabilized_at,
            "status": self.status,
            "test_element": {"c": str(self.test_element.c), "provenance": self.test_element.provenance},
            "chain_dims": self.dims,
        }


def star_closure(
    I: RingIdeal,
    c,
    e_max: int = DEFAULT_E_MAX,
    stability_window: int = DEFAULT_WINDOW,
    budget: Optional[int] = None,
) -> ClosureResult:
    """Approximate I* as I + lifts of W_E = V_0 cap ... cap V_E.

    The search stops at the first E with W_E = ... = W_{E+window} (status
    STABILIZED) or when W_E = 0, after which the chain cannot move.  If
    neither happens by ``e_max`` the status is BUDGET_EXHAUSTED and the
    closure returned is the last, coarsest-known upper approximation.
    """
    if e_max < 0 or stability_window < 1:
        raise DomainError("need e_max >= 0 and stability_window >= 1")
    te = c if isinstance(c, TestElement) else TestElement(I.ring.ambient(c))
    R = I.ring
    if I.is_unit():
        return ClosureResult(I, I, e_max, 0, STABILIZED, te, [0])
    monomials = _basis_of(I)
    p = R.p
    budget = monomial_budget() if budget is None else budget
    k = len(monomials)
    W = [[int(i == j) for i in range(k)] for j in range(k)]
    dims: List[int] = []
    status = BUDGET_EXHAUSTED
    stabilized_at = None
    note = ""
    if k > budget:
        note = f"R/I has {k} > {budget} standard monomials"
    else:
        for e in range(e_max + 1):
            try:
                images = _frobenius_images(I, monomials, te.c, e)
                W = _restricted_kernel(images, W, p, budget)
            except BudgetExhausted as exc:
                note = str(exc)
                break
            dims.append(len(W))
            if not W:
                status, stabilized_at = STABILIZED, e
                break
            w = stability_window
            if len(dims) > w and dims[-1] == dims[-1 - w]:
                status, stabilized_at = STABILIZED, e - w
                break
    lifts = Subspace(I, monomials, W).lifts()
    closure = RingIdeal(R, list(I.gens) + lifts)
    return ClosureResult(I, closure, e_max, stabilized_at, status, te, dims, note)


def verify_is_ideal(result: ClosureResult) -> bool:
    """Closure is stable under multiplication by every variable and contains I."""
    cl = result.closure
    amb = cl.ring.ambient
    if not result.ideal.issubset(cl):
        return False
    return all(cl.contains(x * g) for g in cl.gens for x in amb.gens())


@dataclass
class StarValue:
    n: int
    length: int
    result: ClosureResult

    @property
    def status(self) -> str:
        return self.result.status


def star_hilbert_value(
    Q: RingIdeal,
    n: int,
    c,
    e_max: int = DEFAULT_E_MAX,
    stability_window: int = DEFAULT_WINDOW,
    budget: Optional[int] = None,
) -> StarValue:
    """ell(R/(Q^n)*) together with the closure result behind it."""
    if n < 1:
        raise DomainError("tight Hilbert values are tabulated for n >= 1")
    res = star_closure(ideal_power(Q, n), c, e_max, stability_window, budget)
    return StarValue(n, res.colength(), res)


# -- structural checks --------------------------------------------------------


def ideals_equal(A: RingIdeal, B: RingIdeal) -> bool:
    """Double inclusion by normal forms."""
    return A.issubset(B) and B.issubset(A)


@dataclass
class PowerIntersectionReport:
    n: int
    intersection_equals_product: bool
    free_rank_length: int
    expected_length: int
    d: int

    @property
    def passed(self) -> bool:
        return self.intersection_equals_product and self.free_rank_length == self.expected_length

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "intersection_equals_product": self.intersection_equals_product,
            "length_Qn_over_QnQstar": self.free_rank_length,
            "expected": self.expected_length,
            "passed": self.passed,
        }


def check_power_intersection(
    Q: RingIdeal, n: int, Q_star: RingIdeal, Qn1_star: RingIdeal
) -> PowerIntersectionReport:
    """Q^n cap (Q^{n+1})* = Q^n Q*, and ell(Q^n / Q^n Q*) = ell(R/Q*) C(n+d-1, d-1)."""
    R = Q.ring
    d = R.d
    Qn = ideal_power(Q, n)
    QnQs = ideal_product(Qn, Q_star)
    meet = ideal_intersect(Qn, Qn1_star)
    eq = ideals_equal(meet, QnQs)
    lhs = require_m_primary(QnQs) - (require_m_primary(Qn) if n else 0)
    rank = comb(n + d - 1, d - 1) if d >= 1 else int(n == 0)
    expected = require_m_primary(Q_star) * rank
    return PowerIntersectionReport(n, eq, lhs, expected, d)


@dataclass
class ClosureProductReport:
    n: int
    equal: bool
    colength: int

    def to_record(self) -> dict:
        return {"n": self.n, "equal": self.equal, "colength": self.colength}


def check_closure_product(Q: RingIdeal, n: int, Qn1_star: RingIdeal, Q_star: RingIdeal) -> ClosureProductReport:
    """(Q^{n+1})* = Q^n Q* by double inclusion."""
    QnQs = ideal_product(ideal_power(Q, n), Q_star)
    eq = ideals_equal(Qn1_star, QnQs)
    return ClosureProductReport(n, eq, require_m_primary(QnQs))
