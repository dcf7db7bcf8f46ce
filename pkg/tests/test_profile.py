import math
import random

import pytest

from fbelos import (arc_length, area_under, build_profile, endpoint_slopes,
                    lower_profiles, nesting_check, parse, preset,
                    slope_is_infinite)
from fbelos.errors import BadCusp, BadParameter, NotAdmissible, UnknownPreset
from fbelos.profile import PlacedProfile

PARBELOS_ARC = (math.sqrt(2.0) + math.asinh(1.0)) / 2.0


class TestAdmissibility:
    def test_parbelos_admissible(self):
        assert build_profile("x - x^2").name == "custom"

    def test_arbelos_admissible(self):
        build_profile("sqrt(x - x^2)")

    def test_identity_not_admissible(self):
        with pytest.raises(NotAdmissible) as exc:
            build_profile("x")
        xs = [x for x, _, _ in exc.value.violations]
        assert 1.0 in xs  # f(1) = 1 breaks the endpoint condition

    def test_negative_interior_not_admissible(self):
        with pytest.raises(NotAdmissible) as exc:
            build_profile("x^2 - x")
        assert len(exc.value.violations) > 100

    def test_unevaluable_profile_reported(self):
        with pytest.raises(NotAdmissible):
            build_profile("log(x - 2)")


class TestPresets:
    def test_parabola_one_matches_parbelos(self, parbelos):
        p1 = preset("parabola", [1])
        for i in range(0, 101):
            x = i / 100
            assert p1.value(x) == parbelos.value(x)
        assert p1.endpoint_slopes == parbelos.endpoint_slopes

    def test_cubic_slopes(self, cubic):
        # oracle: d/dx [x(1-x)(2-1.5x)] = 2 - 7x + 4.5x^2
        s0, s1 = endpoint_slopes(cubic)
        assert s0 == pytest.approx(2.0, abs=1e-14)
        assert s1 == pytest.approx(-0.5, abs=1e-14)

    def test_cubic_negative_not_admissible(self):
        with pytest.raises(NotAdmissible):
            preset("cubic", [-1, 0])

    def test_parabola_requires_positive_k(self):
        with pytest.raises(NotAdmissible):
            preset("parabola", [-2])

    def test_unknown_preset(self):
        with pytest.raises(UnknownPreset):
            preset("catenary")

    def test_wrong_arity(self):
        with pytest.raises(UnknownPreset):
            preset("parabola", [1, 2])

    def test_names(self, arbelos, sine):
        assert arbelos.name == "arbelos"
        assert sine.name == "sine"
        assert preset("parabola", [2]).name == "parabola:k=2"


class TestLowerProfiles:
    def test_parbelos_half(self, parbelos):
        g, h = lower_profiles(parbelos, 0.5)
        # g(x) = 0.5 f(2x): at x = 0.25 this is 0.5 * f(0.5) = 0.125
        assert g.value(0.25) == pytest.approx(0.125, abs=1e-15)
        assert g.domain == (0.0, 0.5)
        assert h.domain == (0.5, 1.0)

    def test_both_vanish_at_cusp(self, sine):
        g, h = lower_profiles(sine, 0.3)
        assert abs(g.value(0.3)) <= 1e-12
        assert abs(h.value(0.3)) <= 1e-12

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.5, 1e-10, 1.0 - 1e-10])
    def test_bad_cusp(self, parbelos, bad):
        with pytest.raises(BadCusp):
            lower_profiles(parbelos, bad)

    def test_placed_scale_validation(self, parbelos):
        with pytest.raises(BadParameter):
            PlacedProfile(parbelos, 1.5, 0.0)


class TestNesting:
    @pytest.mark.parametrize("p", [i / 10 for i in range(1, 10)])
    def test_parbelos_nests_everywhere(self, parbelos, p):
        assert nesting_check(parbelos, p)

    def test_arbelos_nests(self, arbelos):
        assert nesting_check(arbelos, 0.5)

    def test_spiked_profile_does_not_nest(self):
        # mass concentrated near x = 1; the left copy spills above
        assert not nesting_check(build_profile("x^9*(1 - x)"), 0.5)

    def test_randomized_search_finds_counterexample(self):
        rng = random.Random(99)
        found = []
        for _ in range(40):
            n = rng.randint(2, 12)
            profile = build_profile(f"x^{n}*(1 - x)")
            p = rng.choice([0.2, 0.4, 0.5, 0.6, 0.8])
            if not nesting_check(profile, p):
                found.append((n, p))
        assert found, "search space contains non-nesting profiles"


class TestEndpointSlopes:
    def test_parbelos(self, parbelos):
        assert endpoint_slopes(parbelos) == (1.0, -1.0)

    @pytest.mark.parametrize("k", [0.5, 1.0, 2.0, 3.5])
    def test_parabola_exact_symbolic(self, k):
        s0, s1 = endpoint_slopes(preset("parabola", [k]))
        assert s0 == k and s1 == -k  # exact from the symbolic path

    def test_arbelos_infinite(self, arbelos):
        s0, s1 = endpoint_slopes(arbelos)
        assert slope_is_infinite(s0) and slope_is_infinite(s1)
        assert s0 > 0 > s1

    def test_fd_fallback_when_not_differentiable(self):
        profile = build_profile("abs(x - x^2)")  # same curve, abs blocks d/dx
        assert profile.derivative_expr is None
        s0, s1 = endpoint_slopes(profile)
        assert s0 == pytest.approx(1.0, abs=1e-8)
        assert s1 == pytest.approx(-1.0, abs=1e-8)


class TestArcLength:
    def test_arbelos_semicircle(self, arbelos):
        # oracle: semicircle over a unit diameter has length pi/2
        assert arc_length(arbelos) == pytest.approx(math.pi / 2.0, abs=1e-10)

    def test_parbelos_closed_form(self, parbelos):
        assert arc_length(parbelos) == pytest.approx(PARBELOS_ARC, abs=1e-12)
        assert abs(arc_length(parbelos) - 1.14779357469632) < 1e-13

    def test_scaled_copy_is_half(self, parbelos):
        g, _ = lower_profiles(parbelos, 0.5)
        assert arc_length(g, 0.0, 0.5) == pytest.approx(PARBELOS_ARC / 2.0, abs=1e-12)
        assert abs(arc_length(g) - 0.57389678734816) < 1e-13

    def test_out_of_domain(self, parbelos):
        g, _ = lower_profiles(parbelos, 0.5)
        with pytest.raises(BadParameter):
            arc_length(g, 0.0, 0.9)

    @pytest.mark.parametrize("name,params", [("arbelos", ()), ("parbelos", ()),
                                             ("parabola", (2,)), ("sine", ()),
                                             ("cubic", (2, -1.5))])
    @pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
    def test_similarity_law(self, name, params, p):
        f = preset(name, params)
        g, h = lower_profiles(f, p)
        total = arc_length(f)
        assert abs(arc_length(g) - p * total) <= 1e-8
        assert abs(arc_length(h) - (1.0 - p) * total) <= 1e-8

    def test_fd_only_profile_arc(self):
        # finite-difference integrand: same curve as the parabola on [0, 1]
        profile = build_profile("abs(x - x^2)")
        length = arc_length(profile, rel_tol=1e-8)
        assert length == pytest.approx(PARBELOS_ARC, abs=1e-7)


class TestAreaUnder:
    def test_parbelos_sixth(self, parbelos):
        assert area_under(parbelos) == pytest.approx(1.0 / 6.0, abs=1e-14)

    def test_arbelos_half_disk(self, arbelos):
        assert area_under(arbelos) == pytest.approx(math.pi / 8.0, abs=1e-13)

    def test_parabola_scaling(self):
        assert area_under(preset("parabola", [2])) == pytest.approx(1.0 / 3.0, abs=1e-13)

    @pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
    def test_area_scales_quadratically(self, arbelos, p):
        g, _ = lower_profiles(arbelos, p)
        assert abs(area_under(g) - p * p * area_under(arbelos)) <= 1e-9
