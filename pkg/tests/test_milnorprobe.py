"""Singular/Milnor-set residuals, shell scans, and the combined verdict."""

import numpy as np
import pytest

from mixedsing import (
    Stratum,
    from_pair,
    milnor_residual,
    milnor_scan,
    parse,
    sing_residual,
    thom_test,
    tube_verdict,
)
from conftest import random_points
from oracles import random_mixed

XY = ("x", "y")
XYZ = ("x", "y", "z")

XYXBAR = parse("x*y*x~", XY)
Z1 = parse("x", XY)
Y_AXIS_2 = Stratum(base_point=(0, 1), tangent=((0, 1), (0, 1j)), label="y-axis")


class TestSingResidual:
    def test_frozen_values(self):
        assert sing_residual(XYXBAR, (0, 1)).value == 0.0
        assert abs(sing_residual(parse("x^2", ("x",)), (1,)).value - 4.0) <= 1e-12
        want = 2.0 - np.sqrt(2.0)  # (sqrt2*1 - 1) + (sqrt2 - 1)^2
        assert abs(sing_residual(XYXBAR, (1, 1)).value - want) <= 1e-12

    def test_vanishes_at_constructed_singular_points(self, rng):
        # a == b everywhere for |x|^2 + |y|^2, so lambda = 1 solves the
        # unimodular gradient equation at every point
        F = parse("x*x~ + y*y~", XY)
        for pt in random_points(rng, 2, 50):
            assert sing_residual(F, pt).value <= 1e-10

    def test_positive_at_regular_points_of_z1(self, rng):
        for pt in random_points(rng, 2, 50):
            assert sing_residual(Z1, pt).value > 1e-6

    def test_nonnegative_on_random_inputs(self, rng):
        for _ in range(50):
            F = random_mixed(rng)
            for pt in random_points(rng, F.n_vars, 2):
                assert sing_residual(F, pt).value >= 0.0

    def test_detects_singular_ray_with_nonzero_value(self):
        """Critical points off the zero fibre on {y = 0}, shrinking to 0."""
        f, g = parse("x", XY), parse("x + y^2", XY)
        F = from_pair(f, g)
        for t in (0.5, 0.1, 0.02, 0.004, 0.0008):
            z = (t, 0.0)
            assert sing_residual(F, z).value <= 1e-12
            assert abs(F.evaluate(z)) > 0.0

    def test_jacobian_rank_drops_where_residual_vanishes(self, rng):
        """Points off V with tiny mixed residual sit on Sing(f, g)."""
        f, g = parse("x", XY), parse("x + y^2", XY)
        F = from_pair(f, g)
        df, dg = f.wirtinger().dF, g.wirtinger().dF
        for _ in range(100):
            t = complex(rng.uniform(0.01, 0.5) * np.exp(2j * np.pi * rng.uniform()))
            z = (t, 0.0)
            assert sing_residual(F, z).value < 1e-8
            assert abs(F.evaluate(z)) > 1e-8
            J = np.array(
                [[p.evaluate(z) for p in df], [p.evaluate(z) for p in dg]]
            )
            s = np.linalg.svd(J, compute_uv=False)
            assert s[1] < 1e-6  # rank < 2


class TestMilnorResidual:
    def test_frozen_linear_values(self):
        assert milnor_residual(Z1, (1, 0)).value <= 1e-12
        assert abs(milnor_residual(Z1, (0, 1)).value - 1.0) <= 1e-12
        s = 1 / np.sqrt(2)
        assert abs(milnor_residual(Z1, (s, s)).value - s) <= 1e-12

    def test_degenerate_frame_flagged(self):
        res = milnor_residual(XYXBAR, (0.0, 1.0))
        assert res.degenerate

    def test_origin_rejected(self):
        with pytest.raises(ValueError):
            milnor_residual(Z1, (0, 0))

    def test_bounded_by_one(self, rng):
        checked = 0
        for _ in range(100):
            F = random_mixed(rng)
            for pt in random_points(rng, F.n_vars, 2):
                res = milnor_residual(F, pt)
                if res.degenerate:
                    continue
                assert -1e-12 <= res.value <= 1 + 1e-12
                checked += 1
        assert checked > 100

    @pytest.mark.parametrize("text,variables", [("x", XY), ("x*y*x~", XY)])
    def test_scale_invariance(self, text, variables, rng):
        F = parse(text, variables)
        done = 0
        while done < 100:
            pt = random_points(rng, 2, 1)[0]
            base = milnor_residual(F, pt)
            if base.degenerate:
                continue
            c = float(rng.uniform(0.2, 5.0))
            scaled = milnor_residual(F, tuple(c * w for w in pt))
            assert not scaled.degenerate
            assert abs(base.value - scaled.value) <= 1e-10
            done += 1


class TestMilnorScan:
    def test_linear_case_closed_form(self):
        """M(z1) = {z2 = 0}: every found point sits one radius from V."""
        result = milnor_scan(Z1)
        assert [s.radius for s in result.shells] == [0.2, 0.1, 0.05, 0.025]
        for shell in result.shells:
            assert shell.count > 0
            assert abs(shell.min_distance / shell.radius - 1.0) <= 1e-3
        assert result.supports_transversality
        assert abs(result.fitted_c - 1.0) <= 1e-3

    def test_f2_ratios_bounded_below(self):
        result = milnor_scan(XYXBAR)
        assert all(s.count > 0 for s in result.shells)
        assert result.supports_transversality
        assert result.fitted_c >= 0.1

    def test_deterministic_for_fixed_seed(self):
        a = milnor_scan(Z1, samples_per_shell=50)
        b = milnor_scan(Z1, samples_per_shell=50)
        assert a == b

    def test_found_points_lie_off_fibre(self):
        result = milnor_scan(XYXBAR)
        for z in result.points:
            assert abs(XYXBAR.evaluate(z)) > 1e-6

    def test_empty_evidence_is_valid(self):
        # one shell, no walkers: vacuous support, no fitted constant
        result = milnor_scan(Z1, shells=(0.1,), samples_per_shell=0)
        assert result.shells[0].count == 0
        assert result.fitted_c is None and result.supports_transversality


class TestTubeVerdict:
    def test_fk_headline(self):
        F = parse("x~*y*(x + z^2)", XYZ)
        stratum = Stratum(base_point=(0, 1, 0), tangent=((0, 1, 0), (0, 1j, 0)))
        probes = (thom_test(F, stratum),)
        v = tube_verdict(F, probes=probes)
        assert v.tube_status == "yes" and v.tube_route == "polar"
        assert v.thom_status == "fail" and v.thom_route == "probe-witness"
        assert v.witness is not None
        assert v.probe_summary == "fail-witness"
        route_names = [r.name for r in v.routes]
        assert route_names == ["polar", "probe-witness"]

    def test_separate_variables_headline(self):
        f, g = parse("x^2", XY), parse("y^3", XY)
        v = tube_verdict(from_pair(f, g), pair=(f, g))
        assert v.tube_status == "yes" and v.tube_route == "separate-variables"
        assert v.thom_status == "regular" and v.thom_route == "separate-variables"
        assert v.probe_summary == "not-probed"

    def test_disc_line_headline(self):
        f, g = parse("x", XY), parse("x + y^2", XY)
        v = tube_verdict(from_pair(f, g), pair=(f, g))
        assert v.tube_status == "no" and v.tube_route == "disc-lines"
        assert v.thom_status == "unknown"
        assert v.isolated.status == "not-isolated"

    def test_icis_flag_route(self):
        f, g = parse("x^2 - z*y^2", XYZ), parse("y", XYZ)
        v = tube_verdict(from_pair(f, g), pair=(f, g), assert_icis=True)
        assert v.tube_status == "yes" and v.tube_route == "icis-flag"
        assert v.thom_status == "regular" and v.thom_route == "icis-flag"

    def test_icis_flag_needs_isolated_verdict(self):
        # the same pair without the flag keeps thom unknown
        f, g = parse("x^2 - z*y^2", XYZ), parse("y", XYZ)
        v = tube_verdict(from_pair(f, g), pair=(f, g))
        assert v.thom_status == "unknown"
        assert v.tube_status == "yes" and v.tube_route == "polar"

    def test_degenerate_pair_recorded_not_raised(self):
        f = parse("x*y", XY)
        v = tube_verdict(from_pair(f, f), pair=(f, f))
        assert any(r.conclusion == "unavailable" for r in v.routes)

    def test_unknown_when_no_route_fires(self):
        F = parse("x*y + x~*y~", XY)
        v = tube_verdict(F)
        assert v.tube_status == "unknown" and v.thom_status == "unknown"
        assert v.probe_summary == "not-probed"

    def test_soundness_never_no_plus_regular(self, rng):
        """Random pairs: the guard invariant holds on every reachable path."""
        for _ in range(25):
            f = random_mixed(rng, n_vars=2, max_terms=2, max_degree=2)
            g = random_mixed(rng, n_vars=2, max_terms=2, max_degree=2)
            f = f.conjugate() if not f.is_holomorphic else f
            g = g.conjugate() if not g.is_holomorphic else g
            if not (f.is_holomorphic and g.is_holomorphic):
                continue
            if f.is_zero or g.is_zero:
                continue
            try:
                v = tube_verdict(from_pair(f, g), pair=(f, g))
            except ValueError:
                continue  # degree bound and similar input rejections
            assert not (v.tube_status == "no" and v.thom_status == "regular")

    def test_witness_replay(self):
        F = parse("x~*y*(x + z^2)", XYZ)
        stratum = Stratum(base_point=(0, 1, 0), tangent=((0, 1, 0), (0, 1j, 0)))
        v1 = tube_verdict(F, probes=(thom_test(F, stratum),))
        v2 = tube_verdict(F, probes=(thom_test(F, stratum),))
        assert v1.witness == v2.witness
