"""Spot checks of every closed-form operation against hand-computed values."""

import math
from fractions import Fraction

import pytest

import capmodel as cm
from capmodel import EXACT, LOGFLOAT, UNBOUNDED, Stage

HALF = Fraction(1, 2)


class TestBinomial:
    @pytest.mark.parametrize("n,s,expected", [(5, 2, 10), (7, 0, 1), (6, 3, 20)])
    def test_small_values(self, n, s, expected):
        assert cm.binomial(n, s) == expected

    def test_out_of_window_is_zero(self):
        assert cm.binomial(4, -1) == 0
        assert cm.binomial(4, 5) == 0

    def test_negative_n_rejected(self):
        with pytest.raises(cm.DomainError):
            cm.binomial(-1, 0)


class TestVariety:
    def test_rho_one_doubles(self):
        assert cm.variety(3, 1) == 8

    def test_no_capabilities_single_empty_product(self):
        for rho in (1, HALF, Fraction(3, 10)):
            assert cm.variety(0, rho) == 1

    def test_direct_sum_example(self):
        # 1 + 2*(1/2) + 1*(1/4)
        assert cm.variety(2, HALF) == Fraction(9, 4)

    def test_constrained_examples(self):
        assert cm.variety(6, 1, 5) == 63
        assert cm.variety(5, 1, 5) == 32
        assert cm.variety(3, HALF, 1) == Fraction(7, 8)

    def test_wide_range_reduces_to_unconstrained(self):
        for n in range(8):
            assert cm.variety(n, HALF, n) == cm.variety(n, HALF)
            assert cm.variety(n, HALF, n + 3) == cm.variety(n, HALF)

    def test_rho_out_of_range(self):
        with pytest.raises(cm.DomainError):
            cm.variety(3, 0)
        with pytest.raises(cm.DomainError):
            cm.variety(3, Fraction(3, 2))

    def test_log_backend_agrees(self):
        exact = cm.variety(40, HALF, 12)
        approx = cm.variety(40, HALF, 12, LOGFLOAT)
        assert approx.to_float() == pytest.approx(float(exact), rel=1e-12)


class TestAvgLength:
    def test_rho_one_half_n(self):
        assert cm.avg_length(4, 1) == 2

    def test_zero_at_origin(self):
        assert cm.avg_length(0, HALF) == 0
        assert cm.avg_length(0, HALF, backend=LOGFLOAT) == cm.LogScalar.zero()

    def test_linear_growth_example(self):
        assert cm.avg_length(3, HALF) == 1

    def test_constrained_examples(self):
        assert cm.avg_length(3, 1, 1) == Fraction(9, 4)
        assert cm.avg_length(4, 1, UNBOUNDED) == 2
        assert cm.avg_length(3, HALF, 1) == Fraction(15, 7)

    def test_log_backend_agrees(self):
        exact = cm.avg_length(60, Fraction(3, 10), 14)
        approx = cm.avg_length(60, Fraction(3, 10), 14, LOGFLOAT)
        assert approx.to_float() == pytest.approx(float(exact), rel=1e-12)


class TestVarietyDelta:
    def test_signed_example(self):
        assert cm.variety_delta(3, HALF, 1) == Fraction(-5, 16)
        # closed-form route: rho*d(3,1) - C(3,1)*rho^2
        assert HALF * Fraction(7, 8) - 3 * HALF**2 == Fraction(-5, 16)

    def test_unbounded_doubles_at_rho_one(self):
        for n in (0, 1, 5, 9):
            assert cm.variety_delta(n, 1) == 2**n

    def test_positive_while_transitioning(self):
        assert cm.variety_delta(6, 1, 5) > 0

    def test_log_backend_sign(self):
        delta = cm.variety_delta(3, HALF, 1, LOGFLOAT)
        assert delta.sign == -1
        assert delta.to_float() == pytest.approx(-5 / 16, rel=1e-9)


class TestHumpCondition:
    def test_examples(self):
        assert cm.hump_condition(3, HALF, 1) is True
        assert cm.hump_condition(10, 1, 4) is False
        for rho in (HALF, Fraction(9, 10), 1):
            assert cm.hump_condition(4, rho, 10) is False

    def test_false_for_any_r_at_rho_one_scan(self):
        for n in range(1, 60):
            for r in range(0, n):
                assert cm.hump_condition(n, 1, r) is False

    def test_log_backend_matches_exact(self):
        for n in range(1, 45):
            for r in (0, 1, 2, 5, 11, 20):
                for rho in (Fraction(1, 10), HALF, Fraction(3, 4), 1):
                    assert cm.hump_condition(n, rho, r, LOGFLOAT) == cm.hump_condition(
                        n, rho, r, EXACT
                    )


class TestClassifyStage:
    def test_examples(self):
        assert cm.classify_stage(4, HALF, 5) is Stage.DEVELOPING
        assert cm.classify_stage(3, HALF, 1) is Stage.DEVELOPED
        assert cm.classify_stage(6, 1, 5) is Stage.TRANSITIONING

    def test_developing_iff_unconstrained_variety(self):
        for n in range(12):
            for r in range(0, n + 3):
                stage = cm.classify_stage(n, HALF, r)
                same = cm.variety(n, HALF, r) == cm.variety(n, HALF)
                assert (stage is Stage.DEVELOPING) == same


class TestModelParams:
    def test_coerces_and_validates(self):
        params = cm.ModelParams("0.5", 30)
        assert params.rho == HALF and params.r == 30 and params.backend == EXACT

    def test_rejects_bad_values(self):
        with pytest.raises(cm.DomainError):
            cm.ModelParams("2")
        with pytest.raises(cm.DomainError):
            cm.ModelParams(HALF, -1)
        with pytest.raises(cm.DomainError):
            cm.ModelParams(HALF, 3, "fast")


class TestCrossValidate:
    def test_mid_size(self):
        check = cm.cross_validate(50, HALF, 20, tol=1e-9)
        assert check.ok
        assert check.max_rel_dev <= 1e-9

    def test_trivial_point_is_exact(self):
        check = cm.cross_validate(0, 1, UNBOUNDED, tol=1e-9)
        assert check.variety_rel_dev == 0.0
        assert check.avg_length_rel_dev == 0.0

    def test_large_n(self):
        check = cm.cross_validate(300, Fraction(3, 10), 100, tol=1e-9)
        assert check.ok

    def test_exact_backend_comfortable_at_n_1000(self):
        value = cm.variety(1000, HALF, 300)
        assert value > 0
        check = cm.cross_validate(1000, HALF, 300, tol=1e-9)
        assert check.ok

    def test_tol_must_be_positive(self):
        with pytest.raises(cm.DomainError):
            cm.cross_validate(5, HALF, 2, tol=0.0)

    def test_values_carried_in_report(self):
        check = cm.cross_validate(12, HALF, 4)
        assert check.variety_exact == cm.variety(12, HALF, 4)
        assert math.isclose(
            check.variety_log.to_float(), float(check.variety_exact), rel_tol=1e-12
        )
