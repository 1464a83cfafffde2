"""Inequality and identity checks, inferred local-cohomology lengths and F-rationality verdicts.

Local-cohomology lengths are never computed from resolutions.  They are
solved for from the Hilbert coefficients of a standard parameter ideal
(together with the standardness relation), and the length of the tight
closure of zero in top local cohomology then follows from ell(Q*/Q).
Every verdict records the user assertions it relied on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence

from .errors import (
    AssumptionViolated,
    BudgetExhausted,
    DimViolation,
    NoStableWindow,
    ParameterError,
)
from .hilbert import (
    ORDINARY,
    TIGHT,
    HilbertTable,
    binom,
    fit_values,
    hilbert_table,
    tight_hilbert_table,
)
from .ideals import (
    PresentedRing,
    RingIdeal,
    RingMap,
    extension_length,
    ideal_intersect,
    ideal_power,
    independent_dimension,
    require_m_primary,
)
from .tight import (
    BUDGET_EXHAUSTED,
    DEFAULT_E_MAX,
    DEFAULT_WINDOW,
    STABILIZED,
    TestElement,
    check_closure_product,
    check_power_intersection,
    ideals_equal,
)

SCHEMA = "tight-hilbert/1"

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"
F_RATIONAL, NOT_F_RATIONAL, INCONCLUSIVE = "F_RATIONAL", "NOT_F_RATIONAL", "INCONCLUSIVE"
CONTRADICTED = "CONTRADICTED"

STANDARD_SOP = "standard_sop"
TEST_ELEMENT_GENERATORS = "test_element_generators"
ASS_PRIMES = "ass_primes"


@dataclass
class Verdict:
    check: str
    status: str
    witness: dict = field(default_factory=dict)
    assumptions: List[str] = field(default_factory=list)
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_record(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "witness": self.witness,
            "assumptions": list(self.assumptions),
            "message": self.message,
        }


@dataclass
class CohomologyProfile:
    d: int
    h: List[int]
    zero_star_len: int
    assumptions: Dict[str, bool]
    contradicted: bool = False
    reasons: List[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return CONTRADICTED if self.contradicted else "CONSISTENT"

    def depth_at_least_two(self) -> bool:
        return all(x == 0 for x in self.h[:2])

    def to_record(self) -> dict:
        return {
            "h": list(self.h),
            "zero_star_len": self.zero_star_len,
            "status": self.status,
            "reasons": list(self.reasons),
            "assumptions": dict(self.assumptions),
        }


# -- Hilbert-coefficient identities -------------------------------------------


def coefficients_from_cohomology(h: Sequence[int], d: int) -> List[int]:
    """Forward map h -> (e_1..e_d) for a standard system of parameters."""
    return [
        (-1) ** i * sum(binom(d - i - 1, j - 1) * h[j] for j in range(d - i + 1))
        for i in range(1, d + 1)
    ]


def infer_cohomology(
    e: Sequence[int],
    len_Q: int,
    len_Qstar: int,
    d: int,
    assumptions: Optional[Dict[str, bool]] = None,
) -> CohomologyProfile:
    """Solve e_1..e_d for h^0..h^{d-1}, then read off ell(0*) from ell(Q*/Q).

    The system is triangular: e_i determines h^{d-i} once h^0..h^{d-i-1}
    are known.  The standardness relation is an extra consistency check.
    """
    assumptions = dict(assumptions or {})
    h: List[int] = [0] * d
    for i in range(d, 0, -1):
        top = d - i
        rest = sum(binom(d - i - 1, j - 1) * h[j] for j in range(top))
        h[top] = (-1) ** i * e[i] - rest
    reasons = []
    if any(x < 0 for x in h):
        reasons.append(f"negative local cohomology length in {h}")
    standard = sum(binom(d - 1, i) * h[i] for i in range(d))
    if len_Q - e[0] != standard:
        reasons.append(
            f"standardness fails: ell(R/Q) - e_0 = {len_Q - e[0]} but sum = {standard}"
        )
    zero_star = (len_Q - len_Qstar) - sum(comb(d, i) * h[i] for i in range(d))
    if zero_star < 0:
        reasons.append(f"negative ell(0*) = {zero_star}")
    return CohomologyProfile(d, h, zero_star, assumptions, bool(reasons), reasons)


def check_power_lower_bound(tight: HilbertTable, len_Qstar: int) -> Verdict:
    """ell(R/(Q^{n+1})*) >= ell(R/Q*) C(n+d, d) for every tabulated n."""
    if not tight.reliable():
        return Verdict("power_lower_bound", SKIPPED, message="closure statuses not all STABILIZED")
    d = tight.d
    rows = {}
    violations = []
    for m in sorted(tight.values):
        n = m - 1
        bound = len_Qstar * comb(n + d, d)
        rows[str(n)] = [tight.values[m], bound]
        if tight.values[m] < bound:
            violations.append(n)
    return Verdict(
        "power_lower_bound",
        FAIL if violations else PASS,
        {"n -> [value, bound]": rows, "violations": violations},
    )


def check_multiplicity_bound(e0: int, len_Qstar: int) -> Verdict:
    return Verdict(
        "multiplicity_bound",
        PASS if e0 >= len_Qstar else FAIL,
        {"e0": e0, "len_R_Qstar": len_Qstar},
    )


def check_coefficient_identities(
    e: Sequence[int], e_star: Sequence[int], len_Qstar: int, asserted: bool
) -> Verdict:
    """e_1* = e_0 - ell(R/Q*) + e_1 and e_j* = e_j + e_{j-1} for 2 <= j <= d."""
    used = [TEST_ELEMENT_GENERATORS]
    if not asserted:
        return Verdict("tight_coefficient_identities", SKIPPED, assumptions=used,
                       message="generators not asserted to be parameter test elements")
    d = len(e) - 1
    if d < 2:
        return Verdict("tight_coefficient_identities", SKIPPED, assumptions=used, message="needs d >= 2")
    expected = [e[0], e[0] - len_Qstar + e[1]] + [e[j] + e[j - 1] for j in range(2, d + 1)]
    ok = list(e_star) == expected
    return Verdict(
        "tight_coefficient_identities",
        PASS if ok else FAIL,
        {"e": list(e), "e_star": list(e_star), "predicted_e_star": expected},
        used,
    )


def predicted_tight_coefficients(profile: CohomologyProfile) -> Dict[str, int]:
    """e_i* predicted from h and ell(0*) by the coefficient formulas."""
    d, h = profile.d, profile.h
    out = {"e1_star": sum(comb(d - 2, i - 2) * h[i] for i in range(2, d)) + profile.zero_star_len}
    for i in range(2, d + 1):
        out[f"e{i}_star"] = (-1) ** (i - 1) * (
            sum(binom(d - i - 1, j - 2) * h[j] for j in range(d - i + 1)) + h[d - i + 1]
        )
    out[f"e{d}_star_via_h1"] = (-1) ** (d - 1) * h[1]
    return out


def check_cohomology_formulas(e_star: Sequence[int], profile: CohomologyProfile) -> Verdict:
    used = [STANDARD_SOP, TEST_ELEMENT_GENERATORS]
    if profile.contradicted:
        return Verdict("tight_coefficients_from_cohomology", SKIPPED, assumptions=used,
                       message="profile CONTRADICTED: " + "; ".join(profile.reasons))
    d = profile.d
    if d < 2:
        return Verdict("tight_coefficients_from_cohomology", SKIPPED, assumptions=used, message="needs d >= 2")
    pred = predicted_tight_coefficients(profile)
    got = {"e1_star": e_star[1]}
    for i in range(2, d + 1):
        got[f"e{i}_star"] = e_star[i]
    got[f"e{d}_star_via_h1"] = e_star[d]
    mismatches = [k for k in pred if pred[k] != got[k]]
    return Verdict(
        "tight_coefficients_from_cohomology",
        FAIL if mismatches else PASS,
        {"predicted": pred, "observed": got, "mismatches": mismatches},
        used,
    )


def frationality_verdict(
    e1: Optional[int],
    e1_star: Optional[int],
    profile: Optional[CohomologyProfile],
    d: int,
    asserted: bool = True,
) -> Verdict:
    """F-rational iff e_1* = e_1, cross-checked against e_1* = 0 and depth >= 2."""
    used = [TEST_ELEMENT_GENERATORS]
    if not asserted:
        return Verdict("f_rationality", INCONCLUSIVE, assumptions=used,
                       message="generators not asserted to be parameter test elements")
    if e1 is None or e1_star is None:
        return Verdict("f_rationality", INCONCLUSIVE, assumptions=used,
                       message="coefficients withheld")
    by_equality = e1_star == e1
    witness = {"e1": e1, "e1_star": e1_star, "equality_route": by_equality}
    if profile is not None and profile.contradicted:
        return Verdict("f_rationality", INCONCLUSIVE, witness, used + [STANDARD_SOP],
                       "cohomology profile CONTRADICTED; an assertion does not hold")
    if profile is None or d < 2:
        why = "no standard_sop assertion" if d >= 2 else "depth route needs d >= 2"
        return Verdict("f_rationality", F_RATIONAL if by_equality else NOT_F_RATIONAL, witness, used,
                       f"decided by e1* = e1 alone ({why})")
    used.append(STANDARD_SOP)
    depth2 = profile.depth_at_least_two()
    by_depth = e1_star == 0 and depth2
    witness.update({"depth_at_least_2": depth2, "depth_route": by_depth})
    if by_equality != by_depth:
        return Verdict("f_rationality", INCONCLUSIVE, witness, used,
                       "the e1* = e1 route and the depth route disagree; check test element or e_max")
    return Verdict("f_rationality", F_RATIONAL if by_equality else NOT_F_RATIONAL, witness, used)


# -- two-component rings ---------------------------------------------------------


def _quotient_dim(I: RingIdeal) -> int:
    return independent_dimension(I.gb.lms, I.ring.nvars)


@dataclass
class ComponentReport:
    verdicts: List[Verdict]
    intersection_values: Dict[int, int]
    correction: Dict[int, int]
    closure_oracles: Dict[int, RingIdeal] = field(default_factory=dict, repr=False)

    def to_record(self) -> dict:
        return {
            "verdicts": [v.to_record() for v in self.verdicts],
            "intersection_values": {str(k): v for k, v in self.intersection_values.items()},
            "correction": {str(k): v for k, v in self.correction.items()},
        }


def component_pipeline(
    R: PresentedRing,
    P1: RingIdeal,
    P2: RingIdeal,
    Q: RingIdeal,
    N: int,
    tight: Optional[HilbertTable] = None,
    e0: Optional[int] = None,
    cross_check_upto: int = 3,
) -> ComponentReport:
    """Checks for R with Ass R = {P1, P2} and F-rational components.

    (Q^{n+1})* is modelled as (Q^{n+1} + P1) cap (Q^{n+1} + P2); its
    colength must match the component length identity, and the correction
    term ell(R/(Q^{n+1} + P1 + P2)) must have degree at most d - 2.
    """
    used = [ASS_PRIMES]
    if ideals_equal(P1, P2):
        raise AssumptionViolated("the two associated primes coincide")
    d = R.d
    if N < d + 2:
        raise ParameterError(f"N = {N} must be at least d + 2 = {d + 2}")
    verdicts = []
    dim12 = _quotient_dim(P1 + P2)
    if dim12 > d - 2:
        raise DimViolation(f"dim R/(P1+P2) = {dim12} exceeds d - 2 = {d - 2}")
    verdicts.append(Verdict("component_dimension", PASS, {"dim_R_P1P2": dim12, "d": d}, used))

    comp = {1: {}, 2: {}}
    both: Dict[int, int] = {}
    inter: Dict[int, int] = {}
    oracles: Dict[int, RingIdeal] = {}
    for m in range(1, N + 1):
        Qm = ideal_power(Q, m)
        A, B = Qm + P1, Qm + P2
        comp[1][m] = require_m_primary(A)
        comp[2][m] = require_m_primary(B)
        both[m] = require_m_primary(A + P2)
        meet = ideal_intersect(A, B)
        inter[m] = require_m_primary(meet)
        oracles[m] = meet

    e0s = [fit_values(comp[k], d).coefficients[0] for k in (1, 2)]
    if e0 is None:
        e0 = fit_values(hilbert_table(Q, N).values, d).coefficients[0]
    verdicts.append(Verdict(
        "multiplicity_additivity",
        PASS if e0 == sum(e0s) else FAIL,
        {"e0": e0, "e0_components": e0s},
        used,
    ))

    identity_rows = {}
    ok = True
    for m in range(1, N + 1):
        rhs = comp[1][m] + comp[2][m] - both[m]
        identity_rows[str(m - 1)] = [inter[m], rhs]
        ok &= inter[m] == rhs
    verdicts.append(Verdict("component_length_identity", PASS if ok else FAIL,
                            {"n -> [ell(R/closure), components]": identity_rows}, used))

    if tight is not None:
        rows = {}
        agree = True
        for m in range(1, min(N, cross_check_upto + 1) + 1):
            star = tight.closures.get(m)
            if star is None or tight.statuses.get(m) != STABILIZED:
                continue
            same = ideals_equal(star.closure, oracles[m])
            rows[str(m)] = same
            agree &= same
        verdicts.append(Verdict(
            "closure_cross_oracle",
            PASS if agree and rows else (SKIPPED if not rows else FAIL),
            {"power -> equal": rows},
            used,
        ))

    # correction term has degree <= d - 2: its (d-1)-st differences vanish on the tail
    corr = [both[m] for m in range(1, N + 1)]
    diffs = corr
    for _ in range(max(d - 1, 0)):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    small_degree = all(x == 0 for x in diffs[-2:]) if d >= 1 else True
    e1_star = None
    try:
        fit = fit_values(inter, d)
        e1_star = fit.coefficients[1] if d >= 1 else None
    except NoStableWindow:
        pass
    verdicts.append(Verdict(
        "component_e1_star_zero",
        PASS if small_degree and e1_star == 0 else FAIL,
        {"correction": corr, "e1_star_from_intersections": e1_star},
        used,
    ))
    L1 = require_m_primary(Q)
    verdicts.append(Verdict(
        "not_cohen_macaulay",
        PASS if L1 > e0 else FAIL,
        {"len_R_Q": L1, "e0": e0},
        used,
        "ell(R/Q) > e_0(Q) certifies R is not Cohen-Macaulay",
    ))
    return ComponentReport(verdicts, inter, {m - 1: both[m] for m in both}, oracles)


# -- module-finite extensions -----------------------------------------------------


@dataclass
class ExtensionReport:
    rows: Dict[int, dict]
    gap: Optional[int]
    constant_gap: bool
    equality_at: List[int]
    verdicts: List[Verdict]

    def to_record(self) -> dict:
        return {
            "rows": {str(n): r for n, r in self.rows.items()},
            "gap": self.gap,
            "constant_gap": self.constant_gap,
            "equality_at": self.equality_at,
            "verdicts": [v.to_record() for v in self.verdicts],
        }


def extension_compare(
    R: PresentedRing,
    S: PresentedRing,
    phi: RingMap,
    Q: RingIdeal,
    N: int,
    tight: HilbertTable,
    e0: int,
) -> ExtensionReport:
    """Compare ell(R/(Q^{n+1})*) with e_0 C(n+d, d) and with ell(S/Q^{n+1}S).

    Equality with e_0 C(n+d, d) for some n certifies R = S, hence F-rational,
    provided S is Cohen-Macaulay (a user assumption).
    """
    d = R.d
    rows = {}
    gaps = []
    equal_at = []
    for m in sorted(tight.values):
        n = m - 1
        if m > N:
            break
        r = tight.values[m]
        s = extension_length(R, S, phi, Q, m)
        bound = e0 * comb(n + d, d)
        rows[n] = {"len_R_star": r, "len_S": s, "e0_binom": bound, "status": tight.statuses.get(m)}
        gaps.append(s - r)
        if r == bound:
            equal_at.append(n)
    reliable = tight.reliable()
    gap = gaps[1] if len(gaps) > 1 else (gaps[0] if gaps else None)
    constant = bool(gaps) and all(g == gap for g in gaps[1:])
    verdicts = []
    es = None
    try:
        es = fit_values({m: rows[m - 1]["len_S"] for m in range(1, len(gaps) + 1)}, S.d).coefficients[0]
    except NoStableWindow:
        pass
    verdicts.append(Verdict("extension_multiplicity", PASS if es == e0 else FAIL,
                            {"e0_R": e0, "e0_QS": es}))
    verdicts.append(Verdict(
        "extension_gap",
        (PASS if constant else FAIL) if reliable else SKIPPED,
        {"gaps": gaps, "equality_at": equal_at},
        message=("equality reached: R = S and R is F-rational" if equal_at
                 else "equality never reached"),
    ))
    return ExtensionReport(rows, gap, constant, equal_at, verdicts)


# -- whole analysis -------------------------------------------------------------------


@dataclass
class AnalysisConfig:
    N: Optional[int] = None
    e_max: int = DEFAULT_E_MAX
    window: int = DEFAULT_WINDOW
    closure_checks_upto: int = 3
    budget: Optional[int] = None


@dataclass
class AnalysisReport:
    ring: str
    ideal: str
    d: int
    p: int
    test_element: dict
    assumptions: Dict[str, bool]
    ordinary: HilbertTable
    tight: HilbertTable
    len_R_Q: int
    len_R_Qstar: Optional[int]
    e: Optional[List[int]]
    e_star: Optional[List[int]]
    profile: Optional[CohomologyProfile]
    verdicts: List[Verdict]
    closure_Q: Optional[dict] = None
    components: Optional[ComponentReport] = None
    extension: Optional[ExtensionReport] = None
    anomalies: List[str] = field(default_factory=list)

    def verdict(self, check: str) -> Optional[Verdict]:
        return next((v for v in self.verdicts if v.check == check), None)

    @property
    def f_rationality(self) -> str:
        v = self.verdict("f_rationality")
        return v.status if v else INCONCLUSIVE

    def all_verdicts(self) -> List[Verdict]:
        out = list(self.verdicts)
        if self.components:
            out += self.components.verdicts
        if self.extension:
            out += self.extension.verdicts
        return out

    def to_record(self) -> dict:
        return {
            "ring": self.ring,
            "ideal": self.ideal,
            "d": self.d,
            "p": self.p,
            "test_element": self.test_element,
            "assumptions": dict(self.assumptions),
            "tables": {"ordinary": self.ordinary.to_record(), "tight": self.tight.to_record()},
            "len_R_Q": self.len_R_Q,
            "len_R_Qstar": self.len_R_Qstar,
            "closure_Q": self.closure_Q,
            "coefficients": {"e": self.e, "e_star": self.e_star},
            "cohomology": self.profile.to_record() if self.profile else None,
            "verdicts": [v.to_record() for v in self.verdicts],
            "components": self.components.to_record() if self.components else None,
            "extension": self.extension.to_record() if self.extension else None,
            "f_rationality": self.f_rationality,
            "anomalies": list(self.anomalies),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), indent=2, sort_keys=False)

    def text_table(self) -> str:
        lines = [f"ring  {self.ring}", f"ideal {self.ideal}   d = {self.d}, p = {self.p}"]
        lines.append(f"{'n':>4} {'ell(R/Q^n)':>12} {'ell(R/(Q^n)*)':>15}  status")
        for n in sorted(self.ordinary.values):
            lines.append(
                f"{n:>4} {self.ordinary.values[n]:>12} {self.tight.values.get(n, '-'):>15}  "
                f"{self.tight.statuses.get(n, '-')}"
            )
        lines.append(f"e  = {self.e}")
        lines.append(f"e* = {self.e_star}")
        if self.profile:
            lines.append(f"h = {self.profile.h}, ell(0*) = {self.profile.zero_star_len} "
                         f"[{self.profile.status}]")
        for v in self.all_verdicts():
            lines.append(f"[{v.status:>12}] {v.check}  {v.message}")
        return "\n".join(lines)


def analyze(
    Q: RingIdeal,
    c,
    config: Optional[AnalysisConfig] = None,
    assumptions: Optional[Dict[str, bool]] = None,
    ass_primes: Optional[Sequence[RingIdeal]] = None,
    extension: Optional[RingMap] = None,
) -> AnalysisReport:
    """Run every applicable check on the parameter ideal Q of R."""
    config = config or AnalysisConfig()
    assumptions = {STANDARD_SOP: False, TEST_ELEMENT_GENERATORS: False, ASS_PRIMES: False,
                   **(assumptions or {})}
    if ass_primes:
        assumptions[ASS_PRIMES] = True
    R = Q.ring
    d = R.d
    N = config.N if config.N is not None else d + 6
    if N < d + 2:
        raise ParameterError(f"N = {N} must be at least d + 2 = {d + 2}")
    if len(Q.nonzero_gens) != d:
        raise AssumptionViolated(f"Q has {len(Q.nonzero_gens)} generators but d = {d}")
    te = c if isinstance(c, TestElement) else TestElement(R.ambient(c))
    flags = te.validate(R, ass_primes or ())
    anomalies: List[str] = []
    if not flags["nonzerodivisor"]:
        anomalies.append(f"test element {te.c} is a zero divisor; R-circ membership unverified")

    ordinary = hilbert_table(Q, N)
    tight = tight_hilbert_table(Q, N, te, config.e_max, config.window, config.budget)
    len_Q = ordinary.values[1]
    e = e_star = None
    try:
        e = list(ordinary.fit().coefficients)
    except NoStableWindow as exc:
        anomalies.append(f"ordinary table: {exc}")
    try:
        e_star = list(tight.fit().coefficients)
    except (NoStableWindow, BudgetExhausted) as exc:
        tight.withheld_reason = tight.withheld_reason or str(exc)
        anomalies.append(f"tight table: {exc}")

    reliable1 = tight.statuses.get(1) == STABILIZED
    len_Qstar = tight.values[1]
    verdicts: List[Verdict] = []

    verdicts.append(check_power_lower_bound(tight, len_Qstar))
    if e is not None and reliable1:
        verdicts.append(check_multiplicity_bound(e[0], len_Qstar))
    if e is not None and e_star is not None and e[0] != e_star[0]:
        anomalies.append(f"e_0 = {e[0]} differs from e_0* = {e_star[0]}")

    closures = tight.closures
    for n in range(0, config.closure_checks_upto + 1):
        if n + 1 > N or not (reliable1 and tight.statuses.get(n + 1) == STABILIZED):
            continue
        Qs, Qn1s = closures[1].closure, closures[n + 1].closure
        rep = check_power_intersection(Q, n, Qs, Qn1s)
        verdicts.append(Verdict(f"power_intersection_n{n}", PASS if rep.passed else FAIL, rep.to_record()))
        if n >= 1 and assumptions[TEST_ELEMENT_GENERATORS]:
            ab = check_closure_product(Q, n, Qn1s, Qs)
            verdicts.append(Verdict(f"closure_product_n{n}", PASS if ab.equal else FAIL, ab.to_record(),
                                    [TEST_ELEMENT_GENERATORS]))

    if e is not None and e_star is not None:
        verdicts.append(check_coefficient_identities(e, e_star, len_Qstar,
                                                   assumptions[TEST_ELEMENT_GENERATORS]))
    profile = None
    if e is not None and reliable1 and assumptions[STANDARD_SOP]:
        profile = infer_cohomology(e, len_Q, len_Qstar, d, assumptions)
        round_trip = coefficients_from_cohomology(profile.h, d) == list(e[1:])
        verdicts.append(Verdict("cohomology_round_trip", PASS if round_trip else FAIL,
                                {"h": profile.h, "e": e}, [STANDARD_SOP]))
        verdicts.append(Verdict(
            "standard_hilbert_function",
            PASS if ordinary.fit_window and ordinary.fit_window[0] == 1 else FAIL,
            {"fit_window": list(ordinary.fit_window or [])},
            [STANDARD_SOP],
            "Hilbert function equals its polynomial for all n >= 1",
        ))
        if e_star is not None:
            verdicts.append(check_cohomology_formulas(e_star, profile))
    fv = frationality_verdict(
        e[1] if e and d >= 1 else None,
        e_star[1] if e_star and d >= 1 else None,
        profile, d, assumptions[TEST_ELEMENT_GENERATORS],
    )
    failed = [v.check for v in verdicts if v.status == FAIL]
    if failed and fv.status != INCONCLUSIVE:
        fv = Verdict("f_rationality", INCONCLUSIVE, {**fv.witness, "would_be": fv.status},
                     fv.assumptions, "checks failed upstream: " + ", ".join(failed))
    verdicts.append(fv)
    for v in verdicts:
        if v.status == FAIL and v.check.startswith(("power_lower_bound", "multiplicity_bound")):
            anomalies.append(f"{v.check} failed: bug or truncation artifact")

    components = None
    if ass_primes:
        if len(ass_primes) != 2:
            raise AssumptionViolated("the component pipeline needs exactly two associated primes")
        components = component_pipeline(R, ass_primes[0], ass_primes[1], Q, N, tight,
                                         e[0] if e else None, config.closure_checks_upto)
    ext = None
    if extension is not None and e is not None:
        ext = extension_compare(R, extension.target, extension, Q, N, tight, e[0])

    return AnalysisReport(
        ring=R.describe(),
        ideal=str(Q),
        d=d,
        p=R.p,
        test_element={"c": str(te.c), "provenance": te.provenance, **flags},
        assumptions=assumptions,
        ordinary=ordinary,
        tight=tight,
        len_R_Q=len_Q,
        len_R_Qstar=len_Qstar if reliable1 else None,
        e=e,
        e_star=e_star,
        profile=profile,
        verdicts=verdicts,
        closure_Q=closures[1].to_record(),
        components=components,
        extension=ext,
        anomalies=anomalies,
    )
