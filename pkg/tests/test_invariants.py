from __future__ import annotations

import math

import pytest

from ricci_lab import (
    beta,
    alpha,
    a_norm,
    f4_beta4,
    f4_alpha24,
    is_f4_flag,
    level_report,
    usable_witness,
    variation_point,
    variation_slope,
    wallach_levels,
    scal_submersion,
    scalar_curvature,
    canonical_variation,
    scal_along_variation,
    generalized_wallach,
    subalgebra_strata,
    is_generalized_wallach,
)
from ricci_lab.types import Candidate, SpaceSpec, LevelValue, MetricPoint
from ricci_lab._exceptions import InvalidPointError, NotSubalgebraError, SpaceValidationError

G2_T = Candidate(T=[8 / 5, 11 / 50, 1.0])


def test_wallach_closed_forms(wallach: SpaceSpec) -> None:
    T = Candidate(T=[0.15, 0.15, 0.7])
    levels = wallach_levels(wallach, T)
    for i, (a, b) in enumerate(levels):
        j, k = (n for n in range(3) if n != i)
        assert a == pytest.approx(1 / (3 * T.T[i]))
        assert b == pytest.approx(1 / (T.T[j] + T.T[k]))


def test_wallach_levels_agree_with_alpha_and_beta(wallach: SpaceSpec) -> None:
    T = Candidate(T=[0.2, 0.5, 0.3])
    for i, (a, b) in enumerate(wallach_levels(wallach, T), start=1):
        assert alpha(wallach, T, [i]).value == pytest.approx(a)
        assert beta(wallach, T, [i]).value == pytest.approx(b)


def test_wallach_levels_reject_other_spaces(g2: SpaceSpec) -> None:
    with pytest.raises(SpaceValidationError, match="not a generalized Wallach space"):
        wallach_levels(g2, G2_T)


def test_is_generalized_wallach(wallach: SpaceSpec, g2: SpaceSpec, f4: SpaceSpec) -> None:
    assert is_generalized_wallach(wallach)
    assert is_generalized_wallach(generalized_wallach(1, 2, 3, 0.1))
    assert not is_generalized_wallach(g2)
    assert not is_generalized_wallach(f4)
    assert is_f4_flag(f4)
    assert not is_f4_flag(g2)


def test_g2_closed_forms(g2: SpaceSpec) -> None:
    T1, T2, _ = G2_T.T
    assert alpha(g2, G2_T, [2]).value == pytest.approx(1 / (12 * T2))
    assert alpha(g2, G2_T, [3]).value == pytest.approx(3 / 8)
    assert beta(g2, G2_T, [2]).value == pytest.approx(1 / (T1 + 1))
    assert beta(g2, G2_T, [3]).value == pytest.approx(5 / (8 * T1 + 4 * T2))


@pytest.mark.parametrize("J", [[2], [3]], ids=["m2", "m3"])
def test_numeric_levels_match_closed_forms(g2: SpaceSpec, J: list) -> None:
    assert alpha(g2, G2_T, J, numeric=True).value == pytest.approx(alpha(g2, G2_T, J).value, rel=1e-8)
    assert beta(g2, G2_T, J, numeric=True, starts=8).value == pytest.approx(beta(g2, G2_T, J).value, rel=1e-8)


def test_closed_form_witness(g2: SpaceSpec) -> None:
    level = alpha(g2, G2_T, [3])
    assert level.attained
    assert level.method == "closed-form"
    assert level.witness is not None
    assert level.witness.y[0] * 4 * G2_T.T[2] == pytest.approx(1.0)


def test_levels_need_a_subalgebra(g2: SpaceSpec) -> None:
    with pytest.raises(NotSubalgebraError, match=r"\{1\}"):
        alpha(g2, G2_T, [1])


def test_levels_need_a_definite_candidate(g2: SpaceSpec) -> None:
    with pytest.raises(InvalidPointError, match="not positive definite"):
        beta(g2, Candidate(T=[1.0, -1.0, 1.0]), [2])


def test_f4_alpha24_interior(f4: SpaceSpec) -> None:
    T = Candidate(T=[1.0, 1.0, 1.0, 1.0])
    closed = f4_alpha24(f4, T)
    u = (-6 + math.sqrt(36 + 36 * (42 - 24))) / 18
    assert closed.attained
    assert closed.value == pytest.approx((7 - u) / 18)
    assert closed.value > alpha(f4, T, [4]).value

    numeric = alpha(f4, T, [2, 4], numeric=True, starts=16)
    assert numeric.value == pytest.approx(closed.value, rel=1e-6)


def test_f4_alpha24_on_the_boundary(f4: SpaceSpec) -> None:
    T = Candidate(T=[1.0, 2.0, 1.0, 1.0])
    closed = f4_alpha24(f4, T)
    assert not closed.attained
    assert closed.witness is None
    assert closed.value == pytest.approx(alpha(f4, T, [4]).value)
    assert closed.value == pytest.approx(2 / 9)


def test_f4_beta4_interior(f4: SpaceSpec) -> None:
    T = Candidate(T=[0.2, 1.0, 0.2, 1.0])
    closed = f4_beta4(f4, T)
    assert closed.attained
    assert closed.value == pytest.approx(0.8, abs=1e-3)
    assert closed.witness is not None

    numeric = beta(f4, T, [4], numeric=True, starts=16)
    assert numeric.value == pytest.approx(closed.value, rel=1e-6)


def test_f4_beta4_at_the_edge(f4: SpaceSpec) -> None:
    # 7 (3 T1 + T3) >= 36 T2
    T = Candidate(T=[2.0, 0.25, 0.25, 1.0])
    closed = f4_beta4(f4, T)
    assert closed.attained is False
    assert closed.value == pytest.approx(14 / 9)


def test_f4_closed_forms_reject_other_spaces(g2: SpaceSpec) -> None:
    with pytest.raises(SpaceValidationError):
        f4_alpha24(g2, G2_T)


def test_level_report(g2: SpaceSpec) -> None:
    reports = level_report(g2, G2_T)
    assert [r.stratum.label for r in reports] == ["{2}", "{3}"]
    for report in reports:
        assert math.copysign(1.0, report.derivative_at_infinity) == math.copysign(1.0, report.beta - report.alpha)


def test_canonical_variation(g2: SpaceSpec) -> None:
    a = alpha(g2, G2_T, [3])
    b = beta(g2, G2_T, [3])
    assert a.witness is not None and b.witness is not None
    cv = canonical_variation(g2, G2_T, [3], a.witness, b.witness)

    assert cv.fiber_trace == pytest.approx(1.0)
    assert cv.base_trace == pytest.approx(1.0)
    assert a_norm(cv) >= 0
    assert variation_slope(cv) == pytest.approx(b.value - a.value)

    for t in (0.05, 0.3, 0.7):
        p = variation_point(cv, t)
        assert sum(d * T * y for d, T, y in zip(g2.d, G2_T.T, p.y)) == pytest.approx(1.0)
        assert scal_along_variation(cv, t) == pytest.approx(scalar_curvature(g2, p), rel=1e-9)
        assert scal_submersion(cv, cv.s(t), t) == pytest.approx(scalar_curvature(g2, p), rel=1e-9)


def test_variation_range(g2: SpaceSpec) -> None:
    a = alpha(g2, G2_T, [2])
    b = beta(g2, G2_T, [2])
    assert a.witness is not None and b.witness is not None
    cv = canonical_variation(g2, G2_T, [2], a.witness, b.witness)
    with pytest.raises(InvalidPointError):
        variation_point(cv, 0.0)
    with pytest.raises(InvalidPointError):
        variation_point(cv, 1.0 / cv.base_trace)


def test_variation_needs_block_constant_base(g2: SpaceSpec) -> None:
    a = alpha(g2, G2_T, [2])
    assert a.witness is not None
    with pytest.raises(SpaceValidationError, match="not constant on the base block"):
        canonical_variation(g2, G2_T, [2], a.witness, MetricPoint.from_y([0.1, 0.2]))


def test_level_report_slope_with_attained_suprema(wallach: SpaceSpec) -> None:
    T = Candidate(T=[0.15, 0.15, 0.7])
    for report in level_report(wallach, T):
        assert report.alpha_attained and report.beta_attained
        assert report.derivative_at_infinity == pytest.approx(report.beta - report.alpha, rel=1e-9)


def test_level_report_slope_with_an_unattained_alpha(f4: SpaceSpec) -> None:
    T = Candidate(T=[1.0, 2.0, 1.0, 1.0])
    report = next(r for r in level_report(f4, T, starts=16) if r.stratum.label == "{2,4}")
    assert not report.alpha_attained
    assert report.alpha == pytest.approx(2 / 9, rel=1e-6)
    assert report.derivative_at_infinity > report.beta - report.alpha

    a = alpha(f4, T, [2, 4], starts=16)
    b = beta(f4, T, [2, 4], starts=16)
    cv = canonical_variation(f4, T, [2, 4], usable_witness(a), usable_witness(b))
    assert report.derivative_at_infinity == pytest.approx(variation_slope(cv), rel=1e-12)


def test_usable_witness_lifts_a_boundary_witness() -> None:
    edge = LevelValue(value=1.0, attained=False, witness=MetricPoint.from_y([1e-9, 2.0]), method="numeric")
    assert usable_witness(edge).y.tolist() == [2e-4, 2.0]

    inner = LevelValue(value=1.0, attained=True, witness=MetricPoint.from_y([1e-9, 2.0]), method="numeric")
    assert usable_witness(inner).y.tolist() == [1e-9, 2.0]

    with pytest.raises(InvalidPointError, match="no witness"):
        usable_witness(LevelValue(value=1.0, attained=False, method="closed-form"))


@pytest.mark.parametrize("T", [[1.0, 1.0, 1.0, 1.0], [1.0, 2.0, 1.0, 1.0], [0.2, 1.0, 0.2, 1.0], [3.0, 0.5, 1.0, 2.0]])
def test_alpha_grows_with_the_stratum(f4: SpaceSpec, T: list) -> None:
    candidate = Candidate(T=T)
    strata = subalgebra_strata(f4)
    for inner in strata:
        for outer in strata:
            if set(inner.J) < set(outer.J):
                small = alpha(f4, candidate, inner, starts=16).value
                large = alpha(f4, candidate, outer, starts=16).value
                assert small <= large + 1e-9 * (1.0 + abs(large))
