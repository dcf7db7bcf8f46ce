import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fbelos import (CheckReport, Parallelogram, SkippedCheck, analyze,
                    boundary_lengths, build_profile, characterization_residual,
                    circumcircle, construct, diagonal_conditions,
                    diagonal_line, fbelos_area, fbelos_area_direct,
                    mean_parallelogram, mean_value_point, middle_arcs,
                    plato_section, point_parallelogram, preset, prop7_check,
                    rectangle_defect, tangent_parallelogram,
                    tangent_rectangle_check)
from fbelos.belos import _diagonal_rhs
from fbelos.errors import (BadCusp, BadParameter, BadSection,
                           DegenerateDenominator, DegenerateParallelogram,
                           InfiniteSlope, NestingViolation, NotARectangle,
                           ParallelTangents)
from fbelos.geometry import Point

from conftest import PRESET_SPECS, get_figure

PARBELOS_ARC = (math.sqrt(2.0) + math.asinh(1.0)) / 2.0
P_GRID = [i / 10 for i in range(1, 10)]


class TestConstruct:
    def test_valid_figures(self, parbelos, arbelos):
        fig = construct(parbelos, 0.5)
        assert fig.cusp_point == Point(0.5, 0.0)
        construct(arbelos, 0.3)

    def test_nesting_violation(self):
        with pytest.raises(NestingViolation):
            construct(build_profile("x^9*(1 - x)"), 0.5)

    def test_non_nesting_override(self):
        fig = construct(build_profile("x^9*(1 - x)"), 0.5, require_nesting=False)
        upper, left, right = boundary_lengths(fig)
        assert abs(left + right - upper) <= 1e-8 * upper

    def test_bad_cusp(self, parbelos):
        with pytest.raises(BadCusp):
            construct(parbelos, 1.0)


class TestBoundaryLengths:
    def test_parbelos_half(self, parbelos):
        upper, left, right = boundary_lengths(construct(parbelos, 0.5))
        assert upper == pytest.approx(1.147794, abs=1e-6)
        assert left == pytest.approx(0.573897, abs=1e-6)
        assert right == pytest.approx(0.573897, abs=1e-6)
        assert abs(left + right - upper) <= 1e-8 * upper

    def test_arbelos_scaling(self, arbelos):
        upper, left, right = boundary_lengths(construct(arbelos, 0.3))
        assert upper == pytest.approx(math.pi / 2.0, abs=1e-8)
        assert left == pytest.approx(0.3 * math.pi / 2.0, abs=1e-8)
        assert right == pytest.approx(0.7 * math.pi / 2.0, abs=1e-8)

    @pytest.mark.parametrize("name,params", PRESET_SPECS)
    @pytest.mark.parametrize("p", [0.25, 0.5, 0.75])
    def test_length_ratio_is_cusp(self, name, params, p):
        upper, left, _ = get_figure(name, params, p).lengths
        assert abs(left / upper - p) <= 1e-8


class TestPlatoSection:
    def test_point_three(self):
        # oracle: solve |AD|/|DC| = |AC|/|CB| directly: t = 0.3*0.7/1
        assert plato_section(0.0, 1.0, 0.3) == pytest.approx((0.09, 0.51))

    def test_symmetric(self):
        assert plato_section(0.0, 1.0, 0.5) == pytest.approx((0.25, 0.75))

    def test_wider_segment(self):
        assert plato_section(0.0, 2.0, 1.0) == pytest.approx((0.5, 1.5))

    def test_bad_ordering(self):
        with pytest.raises(BadSection):
            plato_section(0.0, 1.0, 1.0)
        with pytest.raises(BadSection):
            plato_section(0.5, 1.0, 0.2)

    @given(st.floats(-5, 5), st.floats(0.01, 10), st.floats(0.01, 0.99))
    @settings(max_examples=100, deadline=None)
    def test_ratio_identities(self, a, width, rel):
        b = a + width
        c = a + rel * width
        d, e = plato_section(a, b, c)
        assert a < d < c < e < b or math.isclose(d, a) or math.isclose(e, b)
        left_ratio = (d - a) / (c - d)
        right_ratio = (e - c) / (b - e)
        base_ratio = (c - a) / (b - c)
        assert left_ratio == pytest.approx(base_ratio, rel=1e-9)
        assert right_ratio == pytest.approx(base_ratio, rel=1e-9)
        expected = (c - a) * (b - c) / (b - a)
        assert c - d == pytest.approx(expected, rel=1e-12)
        assert e - c == pytest.approx(expected, rel=1e-12)


class TestMiddleArcs:
    def test_parbelos_half(self, parbelos):
        left, right = middle_arcs(construct(parbelos, 0.5))
        assert left == pytest.approx(0.25 * PARBELOS_ARC, abs=1e-10)
        assert abs(left - 0.286948) < 1e-6
        assert left == pytest.approx(right, abs=1e-12)

    def test_third_harmonic_arithmetic(self, sine):
        p = 1.0 / 3.0
        fig = construct(sine, p)
        upper, lower_l, lower_r = fig.lengths
        left, right = middle_arcs(fig)
        assert left == pytest.approx(2.0 * upper / 9.0, abs=1e-9)
        half_harmonic = lower_l * lower_r / (lower_l + lower_r)
        assert left == pytest.approx(half_harmonic, abs=1e-9)

    @pytest.mark.parametrize("name,params", PRESET_SPECS)
    @pytest.mark.parametrize("p", P_GRID)
    def test_congruence_sweep(self, name, params, p):
        left, right = middle_arcs(get_figure(name, params, p))
        assert abs(left - right) <= 1e-10


class TestPointParallelogram:
    def test_exact_vertices(self, parbelos):
        quad = point_parallelogram(construct(parbelos, 0.5), 0.5)
        assert quad.vertices == (Point(0.5, 0.25), Point(0.25, 0.125),
                                 Point(0.5, 0.0), Point(0.75, 0.125))

    def test_area_formula(self, parbelos):
        fig = construct(parbelos, 0.5)
        assert point_parallelogram(fig, 0.5).area == pytest.approx(0.0625, abs=1e-15)

    @pytest.mark.parametrize("name,params", PRESET_SPECS)
    def test_parallelogram_law_exact(self, name, params):
        fig = get_figure(name, params, 0.3)
        for x0 in (0.1, 0.37, 0.5, 0.9):
            v1, v2, v, v3 = point_parallelogram(fig, x0).vertices
            gap = math.hypot((v1.x - v2.x) - (v3.x - v.x),
                             (v1.y - v2.y) - (v3.y - v.y))
            assert gap <= 1e-14

    @pytest.mark.parametrize("name,params", PRESET_SPECS)
    @pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
    def test_area_is_scaled_height(self, name, params, p):
        fig = get_figure(name, params, p)
        for x0 in (0.2, 0.5, 0.77):
            expected = p * (1.0 - p) * fig.profile.value(x0)
            assert point_parallelogram(fig, x0).area == \
                pytest.approx(expected, abs=1e-14)

    def test_bad_parameter(self, parbelos):
        fig = construct(parbelos, 0.5)
        with pytest.raises(BadParameter):
            point_parallelogram(fig, 0.0)

    def test_law_violation_rejected(self):
        with pytest.raises(BadParameter):
            Parallelogram((Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 2)))


class TestRectangleDefect:
    def test_arbelos_always_rectangle(self, arbelos):
        fig = construct(arbelos, 0.5)
        assert rectangle_defect(point_parallelogram(fig, 0.37)) <= 1e-12

    def test_parbelos_never_rectangle(self, parbelos):
        # algebra oracle: (x-x^2)^2 = x-x^2 has no interior solution since
        # the parabola's maximum is 1/4 < 1
        fig = construct(parbelos, 0.5)
        assert rectangle_defect(point_parallelogram(fig, 0.5)) > 1e-3

    def test_unit_square(self):
        square = Parallelogram((Point(0, 0), Point(0, 1), Point(1, 1), Point(1, 0)))
        assert square.rectangle_defect() == 0.0

    def test_degenerate(self):
        tiny = Parallelogram((Point(0, 0), Point(1e-15, 0),
                              Point(1e-15, 1e-15), Point(0, 1e-15)))
        with pytest.raises(DegenerateParallelogram):
            tiny.rectangle_defect()


class TestArea:
    def test_parbelos_twelfth(self, parbelos):
        assert fbelos_area(construct(parbelos, 0.5)) == \
            pytest.approx(1.0 / 12.0, abs=1e-10)

    def test_arbelos_sixteenth(self, arbelos):
        assert fbelos_area(construct(arbelos, 0.5)) == \
            pytest.approx(math.pi / 16.0, abs=1e-12)

    @pytest.mark.parametrize("name,params", PRESET_SPECS)
    @pytest.mark.parametrize("p", [0.3, 0.5])
    def test_direct_quadrature_agrees(self, name, params, p):
        fig = get_figure(name, params, p)
        assert abs(fbelos_area(fig) - fbelos_area_direct(fig)) <= 1e-7


class TestMeanParallelogram:
    def test_parbelos_mean_point(self, parbelos):
        fig = construct(parbelos, 0.5)
        c, quad = mean_parallelogram(fig)
        # oracle: smaller root of x - x^2 = 1/6
        assert c == pytest.approx((1.0 - math.sqrt(1.0 / 3.0)) / 2.0, abs=1e-11)
        assert abs(c - 0.21132486540519) < 1e-11
        assert fig.profile.value(c) == pytest.approx(1.0 / 6.0, abs=1e-11)
        assert fbelos_area(fig) == pytest.approx(2.0 * quad.area, abs=1e-9)

    def test_arbelos_mean_point(self, arbelos):
        fig = construct(arbelos, 0.4)
        c, _ = mean_parallelogram(fig)
        # oracle: solve c - c^2 = (pi/8)^2 for the smaller root
        expected = (1.0 - math.sqrt(1.0 - math.pi ** 2 / 16.0)) / 2.0
        assert c == pytest.approx(expected, abs=1e-11)
        assert fig.profile.value(c) == pytest.approx(math.pi / 8.0, abs=1e-11)

    def test_smallest_root_is_chosen(self, parbelos):
        fig = construct(parbelos, 0.5)
        c = mean_value_point(fig)
        assert c < 0.5  # the mirror root 1 - c also exists

    def test_parbelos_ratio_to_midpoint(self, parbelos):
        fig = construct(parbelos, 0.3)
        ratio = fbelos_area(fig) / point_parallelogram(fig, 0.5).area
        assert ratio == pytest.approx(4.0 / 3.0, abs=1e-10)


class TestTangentParallelogram:
    def test_parbelos_vertices_and_area(self, parbelos):
        fig = construct(parbelos, 0.5)
        quad = tangent_parallelogram(fig)
        assert quad.vertices[0] == pytest.approx(Point(0.25, 0.25))
        assert quad.vertices[3] == Point(0.5, 0.0)
        assert quad.area == pytest.approx(0.125, abs=1e-12)

    def test_arbelos_unavailable(self, arbelos):
        with pytest.raises(InfiniteSlope):
            tangent_parallelogram(construct(arbelos, 0.3))

    def test_cubic_area(self, cubic):
        fig = get_figure("cubic", (2, -1.5), 0.5)
        # oracle: p(1-p) |f'(0) f'(1) / (f'(0) - f'(1))| = 0.25 * 1/2.5
        assert tangent_parallelogram(fig).area == pytest.approx(0.1, abs=1e-12)

    def test_parallel_tangents(self):
        flat = build_profile("(x - x^2)^2")  # slope 0 at both endpoints
        fig = construct(flat, 0.5, require_nesting=False)
        with pytest.raises(ParallelTangents):
            tangent_parallelogram(fig)

    @pytest.mark.parametrize("name,params", [("parbelos", ()), ("parabola", (2,)),
                                             ("sine", ()), ("cubic", (2, -1.5))])
    @pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
    def test_shoelace_matches_closed_form(self, name, params, p):
        fig = get_figure(name, params, p)
        s0, s1 = fig.slopes
        expected = p * (1.0 - p) * abs(s0 * s1 / (s0 - s1))
        assert tangent_parallelogram(fig).area == pytest.approx(expected, abs=1e-10)


class TestTangentRectangle:
    def test_parbelos_rectangle(self, parbelos):
        fig = construct(parbelos, 0.5)
        report = tangent_rectangle_check(fig)
        assert report.passed
        assert report.lhs == pytest.approx(0.125, abs=1e-12)
        assert report.rhs == pytest.approx(0.25 * 1.0 / 2.0, abs=1e-12)

    def test_cubic_rectangle(self, cubic):
        # 2 * (-0.5) = -1: a rectangle, area p(1-p) * 2/5
        fig = get_figure("cubic", (2, -1.5), 0.5)
        report = tangent_rectangle_check(fig)
        assert report.passed
        assert report.rhs == pytest.approx(0.25 * 0.4, abs=1e-12)

    def test_parabola_two_not_rectangle(self, parabola2):
        fig = get_figure("parabola", (2,), 0.5)
        report = tangent_rectangle_check(fig)
        assert not report.passed
        assert report.lhs == pytest.approx(3.0)  # |f'(0) f'(1) + 1| = |-4 + 1|


class TestProp7:
    def test_parbelos_equality_and_threehalves(self, parbelos):
        fig = construct(parbelos, 0.5)
        report = prop7_check(fig)
        assert report.passed
        assert abs(report.lhs - report.rhs) <= 1e-10
        area_t = tangent_parallelogram(fig).area
        assert area_t == pytest.approx(1.5 * fbelos_area(fig), abs=1e-10)

    def test_sine_equality(self, sine):
        report = prop7_check(construct(sine, 0.4))
        assert report.passed
        assert abs(report.lhs - report.rhs) <= 1e-10

    def test_cubic_strict_ratio(self, cubic):
        # oracle: lhs/rhs = (1 + f'(0)^2) / (2 f'(0)) = 5/4
        report = prop7_check(get_figure("cubic", (2, -1.5), 0.5))
        assert report.passed
        assert report.lhs / report.rhs == pytest.approx(1.25, abs=1e-9)

    def test_not_applicable_for_non_rectangle(self, parabola2):
        report = prop7_check(get_figure("parabola", (2,), 0.5))
        assert isinstance(report, SkippedCheck)


class TestCircumcircle:
    def test_parbelos_half_tangent_to_axis(self, parbelos):
        fig = construct(parbelos, 0.5)
        circle, (x1, x2) = circumcircle(fig)
        assert circle.center == pytest.approx(Point(0.5, 0.25))
        assert circle.radius == pytest.approx(0.25, abs=1e-14)
        assert x1 == pytest.approx(x2)  # tangent exactly when p = 1/(1+s0^2)

    def test_parbelos_point_three_hits_half(self, parbelos):
        fig = construct(parbelos, 0.3)
        _, (_, x2) = circumcircle(fig)
        assert x2 == pytest.approx(0.5, abs=1e-14)

    def test_cubic_second_intersection(self, cubic):
        fig = get_figure("cubic", (2, -1.5), 0.5)
        _, (_, x2) = circumcircle(fig)
        assert x2 == pytest.approx(0.2, abs=1e-14)

    @pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
    def test_vertices_and_axis_points_on_circle(self, sine, p):
        fig = get_figure("sine", (), p)
        circle, (x1, x2) = circumcircle(fig)
        for v in tangent_parallelogram(fig).vertices:
            r = math.hypot(v.x - circle.center.x, v.y - circle.center.y)
            assert abs(r - circle.radius) <= 1e-10
        for x in (x1, x2):
            r = math.hypot(x - circle.center.x, circle.center.y)
            assert abs(r - circle.radius) <= 1e-10

    def test_requires_rectangle(self, parabola2):
        with pytest.raises(NotARectangle):
            circumcircle(get_figure("parabola", (2,), 0.5))


class TestDiagonal:
    def test_parbelos_reduction(self, parbelos):
        # slopes (1, -1) reduce the line to (2p-1) x + y - p^2 = 0
        for p in (0.3, 0.5, 0.7):
            a, b, c = diagonal_line(construct(parbelos, p))
            assert a == pytest.approx(2.0 * p - 1.0, abs=1e-15)
            assert b == pytest.approx(1.0, abs=1e-15)
            assert c == pytest.approx(-p * p, abs=1e-15)

    def test_parbelos_half_horizontal(self, parbelos):
        a, b, c = diagonal_line(construct(parbelos, 0.5))
        assert a == 0.0 and b == 1.0
        assert c == pytest.approx(-0.25)  # the line y = 0.25 through T1

    def test_vertices_satisfy_equation(self, cubic):
        fig = get_figure("cubic", (2, -1.5), 0.4)
        a, b, c = diagonal_line(fig)
        t1, _, t3, _ = tangent_parallelogram(fig).vertices
        norm = math.hypot(a, b)
        assert abs(a * t1.x + b * t1.y + c) / norm <= 1e-10
        assert abs(a * t3.x + b * t3.y + c) / norm <= 1e-10

    def test_mirror_symmetry(self, parbelos):
        # for the symmetric profile, swapping p and 1-p mirrors the line
        # about x = 1/2: substitute x -> 1-x and compare
        a1, b1, c1 = diagonal_line(construct(parbelos, 0.3))
        a2, b2, c2 = diagonal_line(construct(parbelos, 0.7))
        # substituting x -> 1-x in line1 gives -a1 x + b1 y + (a1 + c1)
        assert a2 == pytest.approx(-a1, abs=1e-14)
        assert b2 == pytest.approx(b1, abs=1e-14)
        assert c2 == pytest.approx(a1 + c1, abs=1e-14)


class TestDiagonalConditions:
    @pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("p", [0.1, 0.37, 0.5, 0.81, 0.99])
    def test_parabola_family_passes(self, k, p):
        fig = construct(preset("parabola", [k]), p)
        incidence, tangency = diagonal_conditions(fig)
        assert incidence.abs_err <= 1e-12
        assert tangency.abs_err <= 1e-12
        # oracle: rhs reduces to k p (1-p) and k (1-2p)
        assert incidence.rhs == pytest.approx(k * p * (1.0 - p), rel=1e-12)
        assert tangency.rhs == pytest.approx(k * (1.0 - 2.0 * p), abs=1e-12)

    def test_sine_incidence_fails(self, sine):
        incidence, _ = diagonal_conditions(construct(sine, 0.5))
        assert not incidence.passed
        assert incidence.abs_err == pytest.approx(abs(1.0 / math.pi - 0.25), abs=1e-12)

    def test_degenerate_denominator_guard(self):
        with pytest.raises(DegenerateDenominator):
            _diagonal_rhs(0.5, 1.0, 1.0)


class TestCharacterization:
    @pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
    def test_parabola_family_recovered(self, k):
        result = characterization_residual(preset("parabola", [k]))
        assert result.sup_residual <= 1e-10
        assert result.implied_k == pytest.approx(k, abs=1e-9)
        assert result.is_parabola_family

    def test_sine_rejected(self, sine):
        result = characterization_residual(sine)
        assert result.sup_residual > 0.01
        assert result.sup_residual == pytest.approx(0.0683, abs=1e-3)
        assert not result.is_parabola_family

    def test_cubic_rejected_by_symmetry(self, cubic):
        result = characterization_residual(cubic)
        assert result.symmetry_defect == pytest.approx(1.5, abs=1e-12)
        assert not result.is_parabola_family

    def test_arbelos_not_applicable(self, arbelos):
        with pytest.raises(InfiniteSlope):
            characterization_residual(arbelos)


class TestAnalyze:
    def test_parbelos_all_pass(self, parbelos):
        checks = analyze(construct(parbelos, 0.5))
        assert all(isinstance(c, CheckReport) and c.passed for c in checks)
        names = [c.name for c in checks]
        assert names == sorted(names)

    def test_arbelos_skips_tangent_block(self, arbelos):
        checks = analyze(construct(arbelos, 0.3))
        skipped = {c.name for c in checks if isinstance(c, SkippedCheck)}
        executed = [c for c in checks if isinstance(c, CheckReport)]
        assert all(c.passed for c in executed)
        assert {"prop5_tangent_area", "prop8_vertices_on_circle",
                "prop9_incidence"} <= skipped

    def test_sine_fails_only_prop9(self, sine):
        checks = analyze(construct(sine, 0.5))
        failing = {c.name for c in checks
                   if isinstance(c, CheckReport) and not c.passed}
        assert failing == {"prop9_incidence", "prop9_tangency"}
