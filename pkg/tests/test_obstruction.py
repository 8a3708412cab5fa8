import pytest
from hypothesis import given, settings, strategies as st

from hfsurgery.brieskorn import BrieskornParams
from hfsurgery.errors import RelativeGradingError
from hfsurgery.graded_root import FUModule
from hfsurgery.mapping_cone import cone_homology
from hfsurgery.obstruction import (
    INCONCLUSIVE,
    LSPACE_RULE,
    OBSTRUCTED,
    S3_RULE,
    Verdict,
    combined_verdict,
    mirror_verdict,
    not_surgery_in_lspace,
    not_surgery_in_s3,
    poincare_sum_threshold,
    reduced_extent,
)
from hfsurgery.pipeline import run_brieskorn

from test_graded_root import modules
from test_mapping_cone import knot_data


def family_module(p):
    return run_brieskorn(BrieskornParams.family(p)).module


def test_s3_rule_examples():
    v8 = not_surgery_in_s3(family_module(8))
    assert v8.status == OBSTRUCTED and v8.rule == S3_RULE
    assert v8.evidence == {"d": -8, "u_kills_red_at_0": True}
    assert not_surgery_in_s3(family_module(4)).status == INCONCLUSIVE
    assert not_surgery_in_s3(FUModule(0, (), True)).status == INCONCLUSIVE
    with pytest.raises(RelativeGradingError):
        not_surgery_in_s3(FUModule(0))


@pytest.mark.parametrize("p", range(4, 21, 2))
def test_family_boundary(p):
    assert not_surgery_in_s3(family_module(p)).obstructed == (p >= 8)


def test_lspace_rule():
    poincare = FUModule(2, (), True)
    synthetic = FUModule(-6, ((2, 1), (4, 1)), True)
    v = not_surgery_in_lspace(poincare, synthetic)
    assert v.status == OBSTRUCTED and v.rule == LSPACE_RULE
    # a summand stretching from 0 to 2 makes U nonzero in grading 2
    assert not not_surgery_in_lspace(poincare, family_module(6)).obstructed
    assert not not_surgery_in_lspace(poincare, FUModule(-4, ((2, 1),), True)).obstructed
    with pytest.raises(ValueError):
        not_surgery_in_lspace(FUModule(0, ((0, 1),), True), synthetic)


@given(modules())
def test_lspace_rule_over_s3_is_s3_rule(m):
    assert not_surgery_in_lspace(FUModule(0, (), True), m).status == not_surgery_in_s3(m).status


@settings(max_examples=60, deadline=None)
@given(knot_data())
def test_cone_output_never_obstructed(data):
    assert not not_surgery_in_s3(cone_homology(data)).obstructed


def test_mirror_and_combined():
    assert mirror_verdict(4).status == INCONCLUSIVE
    c = combined_verdict(family_module(8), 8)
    assert c["status"] == OBSTRUCTED
    assert c["-Y"]["status"] == INCONCLUSIVE
    assert combined_verdict(family_module(4), 4)["status"] == INCONCLUSIVE


def test_threshold_examples():
    assert poincare_sum_threshold(0, 0, 0, 0) == 4
    m = family_module(4)
    assert reduced_extent(m) == 12
    assert poincare_sum_threshold(m.d, 4, reduced_extent(m), 0) == 12
    assert poincare_sum_threshold(-20, -20, 0, 0) == 1


@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(0, 40), st.integers(0, 40))
def test_threshold_minimal_and_monotone(dp, dm, np_, nm):
    k = poincare_sum_threshold(dp, dm, np_, nm)
    need = max(dp, dm) + max(np_, nm) + 8
    assert k >= 1 and 2 * k >= need
    assert k == 1 or 2 * (k - 1) < need
    for bumped in [(dp + 1, dm, np_, nm), (dp, dm + 1, np_, nm), (dp, dm, np_ + 1, nm), (dp, dm, np_, nm + 1)]:
        assert poincare_sum_threshold(*bumped) >= k


def test_reduced_extent():
    assert reduced_extent(FUModule(0, (), True)) == 0
    assert reduced_extent(FUModule(-8, ((-2, 2),), True)) == 2


def test_verdict_json_and_text():
    v = not_surgery_in_s3(family_module(8))
    assert Verdict.from_json(v.to_json()) == v
    assert "not surgery on a knot in S^3" in v.justification()
    w = not_surgery_in_lspace(FUModule(2, (), True), FUModule(-6, ((2, 1),), True))
    assert "Y'" in w.justification()
