import json
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from rings import polynomial_ring, quartic_curve, two_planes, two_three_spaces
from tighthilb.analyzer import (
    CONTRADICTED,
    F_RATIONAL,
    INCONCLUSIVE,
    NOT_F_RATIONAL,
    PASS,
    SKIPPED,
    STANDARD_SOP,
    TEST_ELEMENT_GENERATORS,
    AnalysisConfig,
    CohomologyProfile,
    analyze,
    check_coefficient_identities,
    component_pipeline,
    frationality_verdict,
    infer_cohomology,
    coefficients_from_cohomology,
    predicted_tight_coefficients,
)
from tighthilb.errors import AssumptionViolated, DimViolation, ParameterError
from tighthilb.gfp import PolyRing, PrimeField
from tighthilb.ideals import PresentedRing

BOTH = {STANDARD_SOP: True, TEST_ELEMENT_GENERATORS: True}


@settings(max_examples=200, deadline=None)
@given(h=st.lists(st.integers(0, 6), min_size=1, max_size=5), e0=st.integers(1, 30),
       gap=st.integers(0, 10))
def test_inference_inverts_forward_formulas(h, e0, gap):
    d = len(h)
    e = [e0] + coefficients_from_cohomology(h, d)
    len_Q = e0 + sum(comb(d - 1, i) * h[i] for i in range(d))
    excess = sum(comb(d, i) * h[i] for i in range(d))
    profile = infer_cohomology(e, len_Q, len_Q - excess - gap, d)
    assert profile.h == h
    assert profile.zero_star_len == gap
    assert not profile.contradicted


@pytest.mark.parametrize("e, len_Q, len_Qs, h", [
    ([2, -1, 0], 3, 1, [0, 1]),
    ([4, -1, 0], 5, 3, [0, 1]),
    ([2, -1, 1, 0], 4, 1, [0, 1, 0]),
    ([1, 0, 0], 1, 1, [0, 0]),
])
def test_known_profiles(e, len_Q, len_Qs, h):
    profile = infer_cohomology(e, len_Q, len_Qs, len(e) - 1)
    assert profile.h == h and profile.zero_star_len == 0


def test_standardness_violation_is_flagged():
    profile = infer_cohomology([2, -1, 0], 4, 1, 2)
    assert profile.status == CONTRADICTED
    assert any("standardness" in r for r in profile.reasons)


def test_predictions_in_dimension_three():
    profile = infer_cohomology([2, -1, 1, 0], 4, 1, 3)
    assert predicted_tight_coefficients(profile) == {
        "e1_star": 0, "e2_star": 0, "e3_star": 1, "e3_star_via_h1": 1,
    }


def test_identities_need_assertion():
    v = check_coefficient_identities([2, -1, 0], [2, 0, -1], 1, asserted=False)
    assert v.status == SKIPPED
    v = check_coefficient_identities([2, -1, 0], [2, 0, -1], 1, asserted=True)
    assert v.status == PASS


@pytest.mark.parametrize("e1, e1s, h, asserted, expected", [
    (-1, 0, [0, 1], True, NOT_F_RATIONAL),
    (0, 0, [0, 0], True, F_RATIONAL),
    (0, 0, [0, 1], True, INCONCLUSIVE),
    (-1, 0, [0, 1], False, INCONCLUSIVE),
    (None, 0, [0, 1], True, INCONCLUSIVE),
])
def test_frationality_routes(e1, e1s, h, asserted, expected):
    profile = CohomologyProfile(2, h, 0, {})
    assert frationality_verdict(e1, e1s, profile, 2, asserted).status == expected


def test_component_pipeline_assumptions():
    R, Q, c, (P1, P2) = two_planes(3)
    with pytest.raises(AssumptionViolated):
        component_pipeline(R, P1, P1, Q, 6)
    amb = PolyRing(PrimeField(3), ("x", "y", "z"))
    x, y, z = amb.gens()
    crossing = PresentedRing(amb, [x * y])
    with pytest.raises(DimViolation):
        component_pipeline(crossing, crossing.ideal([x]), crossing.ideal([y]),
                           crossing.ideal([x + y, z]), 6)


def test_two_planes_component_pipeline():
    R, Q, c, (P1, P2) = two_planes(3)
    rep = component_pipeline(R, P1, P2, Q, 6)
    assert rep.intersection_values == {n: 2 * comb(n + 1, 2) - 1 for n in range(1, 7)}
    assert all(v.status == PASS for v in rep.verdicts)


@pytest.mark.parametrize("p", [2, 3])
def test_three_dimensional_two_components(p):
    R, Q, c, primes = two_three_spaces(p)
    rep = analyze(Q, c, AnalysisConfig(N=5, e_max=3), BOTH, primes)
    assert rep.e == [2, -1, 1, 0]
    assert rep.e_star == [2, 0, 0, 1]
    assert rep.profile.h == [0, 1, 0]
    assert rep.f_rationality == NOT_F_RATIONAL
    assert all(v.status == PASS for v in rep.all_verdicts() if v.check != "f_rationality")


def test_regular_ring_is_f_rational():
    R = polynomial_ring(3, "xy")
    x, y = R.gens()
    rep = analyze(R.ideal([x**2, y**3]), x + y, AnalysisConfig(N=5, e_max=3), BOTH)
    assert rep.e == [6, 0, 0] and rep.e_star == [6, 0, 0]
    assert rep.f_rationality == F_RATIONAL


def test_truncated_run_withholds_tight_coefficients():
    R, Q, c, _ = two_planes(3)
    rep = analyze(Q, c, AnalysisConfig(N=5, e_max=0), BOTH)
    assert rep.e_star is None
    assert rep.len_R_Qstar is None
    assert rep.f_rationality == INCONCLUSIVE
    record = json.loads(rep.to_json())
    assert record["coefficients"]["e_star"] is None
    assert record["tables"]["tight"]["fitted"] is None
    assert record["tables"]["tight"]["withheld_reason"]


def test_analyze_checks_generator_count_and_depth():
    R, Q, c, _ = two_planes(3)
    x, y, z, w = R.gens()
    with pytest.raises(AssumptionViolated):
        analyze(R.ideal([x + z, y + w, x]), c, AnalysisConfig(N=5))
    with pytest.raises(ParameterError):
        analyze(Q, c, AnalysisConfig(N=3))


def test_report_is_deterministic():
    T, Q, c, phi = quartic_curve(3)
    a = analyze(Q, c, AnalysisConfig(N=5, e_max=3), BOTH, extension=phi).to_json()
    b = analyze(Q, c, AnalysisConfig(N=5, e_max=3), BOTH, extension=phi).to_json()
    assert a == b
