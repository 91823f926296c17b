"""Set construction, coarse measure, dimension, staircase, and the
staircase-based derivative and integral."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracnambu import (
    CantorSpec,
    FractalIntegral,
    IllConditionedError,
    Staircase,
    build_cantor,
    coarse_measure,
    estimate_dimension,
    fractal_derivative,
    fractal_integral,
    indicator,
    staircase_eval,
    staircase_inverse,
)
from tests.conftest import MIDDLE_THIRD_ALPHA


class TestCantorSpec:
    def test_defaults(self):
        spec = CantorSpec()
        assert spec.c1 == 0.0
        assert spec.c2 == 1.0
        assert spec.epsilon == pytest.approx(1 / 3)
        assert spec.anchor == 0.0
        assert spec.keep_fraction == pytest.approx(1 / 3)

    def test_interval_length(self):
        spec = CantorSpec()
        assert spec.interval_length(0) == 1.0
        assert spec.interval_length(3) == pytest.approx(1 / 27)

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.2, 1.5])
    def test_epsilon_domain(self, eps):
        with pytest.raises(ValueError):
            CantorSpec(epsilon=eps)

    def test_interval_order(self):
        with pytest.raises(ValueError):
            CantorSpec(c1=1.0, c2=1.0)

    def test_anchor_must_lie_inside(self):
        with pytest.raises(ValueError):
            CantorSpec(c0=2.0)
        assert CantorSpec(c0=0.25).anchor == 0.25


class TestBuildCantor:
    def test_depth_zero_is_whole_interval(self):
        approx = build_cantor(CantorSpec(), 0)
        assert approx.left.tolist() == [0.0]
        assert approx.right.tolist() == [1.0]

    def test_depth_one_removes_middle_third(self):
        approx = build_cantor(CantorSpec(), 1)
        assert approx.left == pytest.approx([0.0, 2 / 3])
        assert approx.right == pytest.approx([1 / 3, 1.0])

    def test_interval_count_doubles(self):
        spec = CantorSpec()
        for depth in range(6):
            assert build_cantor(spec, depth).n_intervals == 2**depth

    def test_middle_half_depth_two(self):
        # removing the middle half keeps the outer quarters each round
        approx = build_cantor(CantorSpec(epsilon=0.5), 2)
        assert approx.left == pytest.approx([0.0, 3 / 16, 3 / 4, 15 / 16])
        assert approx.right == pytest.approx([1 / 16, 1 / 4, 13 / 16, 1.0])

    def test_gaps_between_intervals(self):
        approx = build_cantor(CantorSpec(), 1)
        starts, ends = approx.gaps()
        assert starts == pytest.approx([1 / 3])
        assert ends == pytest.approx([2 / 3])

    def test_negative_depth_rejected(self):
        with pytest.raises(ValueError):
            build_cantor(CantorSpec(), -1)

    def test_tables_are_read_only(self, third_approx):
        with pytest.raises(ValueError):
            third_approx.left[0] = 5.0


class TestIndicator:
    def test_covered_interval(self, third_approx):
        assert indicator(third_approx, 0.0, 0.1) == 1

    def test_gap_interior(self, third_approx):
        assert indicator(third_approx, 0.4, 0.6) == 0

    def test_straddles_gap(self, third_approx):
        assert indicator(third_approx, 0.3, 0.7) == 1

    def test_point_queries(self, third_approx):
        assert indicator(third_approx, 0.0, 0.0) == 1
        assert indicator(third_approx, 0.5, 0.5) == 0

    def test_outside_carrier(self, third_approx):
        assert indicator(third_approx, -2.0, -1.0) == 0
        assert indicator(third_approx, 1.5, 2.0) == 0

    def test_reversed_endpoints_rejected(self, third_approx):
        with pytest.raises(ValueError):
            indicator(third_approx, 0.5, 0.4)


class TestCoarseMeasure:
    def test_closed_form_at_own_exponent(self, third_approx):
        # 2^k cells of length 3^-k each weigh Gamma(a+1) * (3^-k)^a
        alpha = MIDDLE_THIRD_ALPHA
        mesh = third_approx.spec.interval_length(8)
        expected = math.gamma(alpha + 1) * 2**8 * mesh**alpha
        assert coarse_measure(third_approx, alpha, mesh) == pytest.approx(expected, rel=1e-14)

    def test_matches_cellwise_enumeration(self, third_spec):
        """Summing cell masses over an explicit interval-and-gap partition,
        with membership decided by the indicator, reproduces the value."""
        approx = build_cantor(third_spec, 8)
        alpha = 0.7
        length = approx.interval_length
        total = 0.0
        for lo, hi in zip(approx.left, approx.right):
            total += indicator(approx, lo, hi) * math.gamma(alpha + 1) * (hi - lo) ** alpha
        for lo, hi in zip(*approx.gaps()):
            # gap cells meet the set only at their boundary points, which
            # belong to the neighbouring cells of this partition; the finest
            # gaps tie the cell length to within rounding
            width = hi - lo
            assert width >= length * (1.0 - 1e-12)
        assert total == pytest.approx(coarse_measure(approx, alpha, length), rel=1e-12)

    def test_uniform_partition_never_beats_canonical(self, third_spec):
        # the aligned partition attains the infimum, so any uniform grid
        # of the same mesh must give a value at least as large
        approx = build_cantor(third_spec, 10)
        alpha = MIDDLE_THIRD_ALPHA
        mesh = approx.interval_length
        cells = int(np.ceil(1.0 / mesh))
        edges = np.linspace(0.0, 1.0, cells + 1)
        uniform = sum(
            math.gamma(alpha + 1) * (b - a) ** alpha
            for a, b in zip(edges[:-1], edges[1:])
            if indicator(approx, a, b)
        )
        assert uniform >= coarse_measure(approx, alpha, mesh) * (1 - 1e-12)

    def test_plateau_at_dimension(self, third_approx):
        alpha = MIDDLE_THIRD_ALPHA
        values = [
            coarse_measure(third_approx, alpha, third_approx.spec.interval_length(k))
            for k in range(8, 17)
        ]
        spread = (max(values) - min(values)) / min(values)
        assert spread < 0.01

    def test_monotone_off_dimension(self, third_approx):
        meshes = [third_approx.spec.interval_length(k) for k in range(8, 17)]
        grow = [coarse_measure(third_approx, MIDDLE_THIRD_ALPHA - 0.05, m) for m in meshes]
        decay = [coarse_measure(third_approx, MIDDLE_THIRD_ALPHA + 0.05, m) for m in meshes]
        assert all(b > a for a, b in zip(grow, grow[1:]))
        assert all(b < a for a, b in zip(decay, decay[1:]))

    def test_alpha_domain_message(self, third_approx):
        with pytest.raises(ValueError, match=r"alpha must lie in \(0,1\]"):
            coarse_measure(third_approx, 1.5, 0.1)

    def test_mesh_must_be_positive(self, third_approx):
        with pytest.raises(ValueError):
            coarse_measure(third_approx, 0.5, 0.0)


class TestEstimateDimension:
    def test_middle_third(self):
        est = estimate_dimension(CantorSpec())
        assert abs(est - math.log(2) / math.log(3)) < 0.01

    def test_middle_half(self):
        est = estimate_dimension(CantorSpec(epsilon=0.5))
        assert abs(est - 0.5) < 0.01

    def test_matches_box_count_regression(self):
        # independent oracle: slope of log N(delta) against log 1/delta
        spec = CantorSpec(epsilon=0.4)
        depths = np.arange(4, 13)
        log_n = depths * math.log(2)
        log_inv = -depths * math.log(spec.keep_fraction)
        slope = np.polyfit(log_inv, log_n, 1)[0]
        assert abs(estimate_dimension(spec) - slope) < 0.01

    def test_degenerate_full_interval(self):
        # a vanishing removed fraction leaves an interval of dimension 1
        assert estimate_dimension(CantorSpec(epsilon=1e-4)) == 1.0

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            estimate_dimension(CantorSpec(), max_depth=2)
        with pytest.raises(ValueError):
            estimate_dimension(CantorSpec(), tol=0.0)


class TestStaircase:
    def test_anchor_value_is_exact_zero(self, third_stair):
        assert third_stair.eval(0.0) == 0.0

    def test_total_measure(self, third_stair):
        alpha = MIDDLE_THIRD_ALPHA
        assert third_stair.total_measure == pytest.approx(math.gamma(alpha + 1), rel=1e-9)
        assert third_stair.eval(1.0) == pytest.approx(third_stair.total_measure)

    def test_halfway_mass(self, third_stair):
        # the first-generation left interval carries exactly half the mass;
        # float(1/3) sits an ulp off the recursively built cell endpoint,
        # so allow the sliver of interpolation that buys
        half = third_stair.total_measure / 2
        assert math.isclose(third_stair.eval(1 / 3), half, rel_tol=1e-10)
        # composing with the inverse removes that ulp: the plateau lookup
        # returns a stored endpoint, where evaluation is a node value
        assert third_stair.eval(third_stair.inverse(half)) == half

    def test_gap_flatness_is_bitwise(self, third_stair):
        v = third_stair.eval(0.4)
        assert third_stair.eval(0.5) == v
        assert third_stair.eval(0.6) == v

    def test_array_eval_matches_scalar(self, third_stair):
        xs = np.array([0.1, 0.4, 0.9])
        vals = third_stair.eval(xs)
        assert vals.tolist() == [third_stair.eval(float(x)) for x in xs]

    @settings(max_examples=80, deadline=None)
    @given(
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
    )
    def test_monotone(self, a, b):
        stair = _SHARED_STAIR
        lo, hi = min(a, b), max(a, b)
        assert stair.eval(lo) <= stair.eval(hi)

    @settings(max_examples=80, deadline=None)
    @given(st.floats(min_value=0.0, max_value=1.0))
    def test_inverse_round_trip(self, frac):
        stair = _SHARED_STAIR
        s = frac * stair.total_measure
        assert stair.eval(stair.inverse(s)) == pytest.approx(s, abs=1e-12)

    def test_inverse_of_plateau_hits_right_end(self, third_stair):
        # S is flat on (1/3, 2/3); the generalized inverse picks the sup
        assert third_stair.inverse(third_stair.total_measure / 2) == pytest.approx(2 / 3)

    def test_inverse_endpoints(self, third_stair):
        assert third_stair.inverse(0.0) == 0.0
        assert third_stair.inverse(third_stair.total_measure) == 1.0

    def test_inverse_range_check(self, third_stair):
        with pytest.raises(ValueError):
            third_stair.inverse(third_stair.total_measure + 1.0)

    def test_self_similarity(self, third_stair):
        xs = np.linspace(0.0, 1.0, 1000)
        err = np.abs(third_stair.eval(xs / 3) - third_stair.eval(xs) / 2)
        assert float(err.max()) < 1e-6

    def test_classical_degeneration(self):
        # full-interval cover at alpha = 1: S is the identity shifted by c0
        stair = Staircase(CantorSpec(), 1.0, depth=0)
        assert stair.eval(0.3) == 0.3
        assert stair.eval(1.0) == 1.0
        shifted = Staircase(CantorSpec(c0=0.25), 1.0, depth=0)
        assert shifted.eval(0.3) == pytest.approx(0.05, abs=1e-15)

    def test_eval_rejects_outside_carrier(self, third_stair):
        with pytest.raises(ValueError):
            third_stair.eval(1.5)

    def test_alpha_domain_message(self):
        with pytest.raises(ValueError, match=r"alpha must lie in \(0,1\]"):
            Staircase(CantorSpec(), 0.0)

    def test_mismatched_approx_rejected(self, third_spec, third_approx):
        with pytest.raises(ValueError):
            Staircase(third_spec, 0.5, depth=10, approx=third_approx)

    def test_wrappers_delegate(self, third_stair):
        assert staircase_eval(third_stair, 0.4) == third_stair.eval(0.4)
        assert staircase_inverse(third_stair, 0.1) == third_stair.inverse(0.1)


_SHARED_STAIR = Staircase(CantorSpec(), MIDDLE_THIRD_ALPHA, depth=20)


class TestFractalDerivative:
    def test_constant_function(self, third_stair):
        assert fractal_derivative(lambda x: 7.5, 0.0, third_stair) == 0.0

    def test_staircase_derivative_is_one(self, third_stair):
        assert fractal_derivative(third_stair.eval, 2 / 3, third_stair) == 1.0

    def test_conjugated_quadratic(self, third_stair):
        # h = g(S) with g(u) = u^2/2 differentiates to S itself
        h = lambda x: third_stair.eval(x) ** 2 / 2
        want = third_stair.eval(2 / 3)
        got = fractal_derivative(h, 2 / 3, third_stair)
        assert got == pytest.approx(want, abs=1e-10)

    def test_conjugated_quadratic_at_right_edge(self, third_stair):
        h = lambda x: third_stair.eval(x) ** 2 / 2
        got = fractal_derivative(h, 1.0, third_stair)
        assert got == pytest.approx(third_stair.total_measure, abs=1e-4)

    def test_gap_point_is_outside_set(self, third_stair):
        assert fractal_derivative(lambda x: x, 0.5, third_stair) == 0.0

    def test_underflowing_staircase_reported(self):
        stair = Staircase(CantorSpec(), 0.5, depth=6)
        stair.ss = np.zeros_like(stair.ss)  # every increment collapses
        with pytest.raises(IllConditionedError):
            fractal_derivative(lambda x: x, 0.0, stair)


class TestFractalIntegral:
    def test_constant_telescopes_to_total(self, third_stair):
        out = fractal_integral(lambda x: 1.0, 0.0, 1.0, third_stair)
        assert out.value == pytest.approx(third_stair.total_measure, rel=1e-12)

    def test_gap_contributes_nothing(self, third_stair):
        out = fractal_integral(lambda x: 1.0, 0.35, 0.6, third_stair)
        assert out == FractalIntegral(0.0, 0.0, 0.0)

    def test_staircase_integrand(self, third_stair):
        # conjugacy: integrating S against itself gives total^2 / 2
        out = fractal_integral(third_stair.eval, 0.0, 1.0, third_stair)
        assert out.value == pytest.approx(third_stair.total_measure**2 / 2, rel=1e-10)
        assert out.lower <= out.value <= out.upper
        assert 0 < out.gap < 1e-5

    def test_matches_trapezoid_in_s(self, third_stair):
        # independent quadrature oracle on the conjugate axis
        h = lambda x: np.cos(3.0 * np.asarray(x))
        out = fractal_integral(h, 0.0, 1.0, third_stair)
        ss = np.linspace(0.0, third_stair.total_measure, 20001)
        xs = third_stair.inverse(ss)
        oracle = np.trapezoid(h(xs), ss)
        assert out.value == pytest.approx(float(oracle), abs=5e-4)

    def test_subinterval_additivity(self, third_stair):
        h = lambda x: np.sin(np.asarray(x))
        whole = fractal_integral(h, 0.0, 1.0, third_stair).value
        split = (
            fractal_integral(h, 0.0, 0.5, third_stair).value
            + fractal_integral(h, 0.5, 1.0, third_stair).value
        )
        assert whole == pytest.approx(split, rel=1e-12)

    def test_derivative_duality(self):
        # fundamental-theorem round trip at a coarse depth where the
        # pointwise derivative stays affordable
        stair = Staircase(CantorSpec(), MIDDLE_THIRD_ALPHA, depth=8)
        h = lambda x: stair.eval(x) ** 3
        dh = lambda x: fractal_derivative(h, x, stair)
        out = fractal_integral(dh, 0.0, 1.0, stair)
        want = h(1.0) - h(0.0)
        assert out.value == pytest.approx(want, rel=1e-3)

    def test_non_finite_integrand_rejected(self, third_stair):
        bad = lambda x: np.full_like(np.asarray(x, dtype=float), np.inf)
        with pytest.raises(ValueError):
            fractal_integral(bad, 0.0, 1.0, third_stair)

    def test_bounds_validated(self, third_stair):
        with pytest.raises(ValueError):
            fractal_integral(lambda x: 1.0, 0.5, 0.1, third_stair)
        with pytest.raises(ValueError):
            fractal_integral(lambda x: 1.0, -1.0, 0.5, third_stair)
