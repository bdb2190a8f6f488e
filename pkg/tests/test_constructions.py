import numpy as np
import pytest

from contactlab.catalog import diagonal, figure_eight, interval, lissajous, random_loop
from contactlab.chords import find_self_chords
from contactlab.constructions import (
    TOL_LEG_ANALYTIC,
    TOL_LEG_SAMPLED,
    LegendrianCurve,
    SuspensionMap,
    legendrian_lift,
    spiral_approximation,
    suspension_pullback_norm,
    wiggle_approximation,
)
from contactlab.curves import (
    SampledCurve,
    c0_distance,
    circle_curve,
    lagrangian_projection,
    legendrian_defect,
    line_curve,
    path_action,
)
from contactlab.errors import ContractViolation, DegenerateInputError
from conftest import lissajous_space


class TestLift:
    def test_segment_is_horizontal(self):
        leg = legendrian_lift(line_curve([0, 0], [1, 0]))
        t = np.linspace(0, 1, 7)
        assert np.allclose(leg(t), np.column_stack([t, 0 * t, 0 * t]))

    def test_unit_circle(self, unit_circle):
        leg = legendrian_lift(unit_circle)
        assert leg(np.array([2 * np.pi]))[0, 2] == pytest.approx(-np.pi, abs=1e-12)
        assert leg.sup_defect < TOL_LEG_ANALYTIC

    def test_section_property(self, unit_circle):
        leg = legendrian_lift(unit_circle, z0=2.5)
        t = unit_circle.grid
        assert np.array_equal(lagrangian_projection(leg)(t), unit_circle(t))

    def test_sampled_section_property(self):
        t = np.linspace(0, 2 * np.pi, 500)
        p = SampledCurve(t, np.column_stack([np.cos(t), np.sin(2 * t)]), closed=True)
        leg = legendrian_lift(p)
        assert leg.sup_defect <= TOL_LEG_SAMPLED
        assert np.array_equal(leg.curve.points[np.isin(leg.curve.t, t), :2], p.points)

    def test_uniqueness_up_to_shift(self):
        p = random_loop(3)
        a, b, c = legendrian_lift(p, 0.0), legendrian_lift(p, 0.0), legendrian_lift(p, 1.75)
        t = p.grid
        assert np.array_equal(a(t), b(t))
        diff = c(t) - a(t)
        assert np.allclose(diff[:, :2], 0) and np.allclose(diff[:, 2], 1.75, atol=1e-14)

    def test_non_immersed_rejected(self):
        p = line_curve([0, 0], [0, 0])
        with pytest.raises(DegenerateInputError):
            legendrian_lift(p)

    def test_certificate(self, diagonal):
        with pytest.raises(DegenerateInputError):
            LegendrianCurve(diagonal, 0.7, TOL_LEG_ANALYTIC, {})


class TestSpiral:
    def test_interval_example(self):
        leg = spiral_approximation(1.0, (0, 0), 0.1)
        assert c0_distance(leg, interval(1.0)) <= 0.15
        assert find_self_chords(leg).count == 0
        assert leg.provenance["construction"] == "spiral"

    def test_turn_count(self):
        turns = spiral_approximation(1.0, (0, 0), 0.1).provenance["turns"]
        assert 32 <= turns <= 130

    def test_negative_gain(self):
        leg = spiral_approximation(-0.5, (0.3, -0.2), 0.1, z0=2.0)
        z = leg(np.array(leg.domain))[:, 2]
        assert z[1] - z[0] == pytest.approx(-0.5, abs=1e-6)
        assert c0_distance(leg, line_curve([0.3, -0.2, 2.0], [0, 0, -0.5])) <= 0.15

    def test_stays_in_disc(self):
        leg = spiral_approximation(2.0, (1.0, 1.0), 0.05)
        _, P = leg.curve.polyline()
        r = np.linalg.norm(P[:, :2] - 1.0, axis=1)
        assert r.max() <= 0.05 + 1e-12 and r.min() >= 0.025 - 1e-12

    @pytest.mark.parametrize("eps", [0.2, 0.1, 0.05, 0.02])
    def test_chordless(self, eps):
        leg = spiral_approximation(1.0, (0, 0), eps)
        rep = find_self_chords(leg)
        assert rep.count == 0 and not rep.suspects

    @pytest.mark.parametrize("eps", [0.0, -0.1])
    def test_bad_eps(self, eps):
        with pytest.raises(ContractViolation):
            spiral_approximation(1.0, (0, 0), eps)

    def test_zero_gain(self):
        with pytest.raises(ContractViolation):
            spiral_approximation(0.0, (0, 0), 0.1)


class TestWiggle:
    def test_legendrian_input_needs_no_loops(self):
        c = figure_eight().curve
        w = wiggle_approximation(c, 0.1)
        assert w.loops == 0
        assert c0_distance(w.curve, c) < 1e-9

    def test_loop_count_and_chords(self):
        w = wiggle_approximation(diagonal(), 0.1)
        rep = find_self_chords(w.curve)
        assert w.loops >= int(np.ceil(1 / (np.pi * 0.01)))
        assert rep.count >= 32

    def test_chord_length_total(self):
        # loops summing to the defect; chord total compared with the defect
        rep = find_self_chords(wiggle_approximation(diagonal(), 0.1).curve)
        assert rep.total_length == pytest.approx(1.0, abs=0.1)

    @pytest.mark.parametrize("eps", [0.2, 0.1, 0.05])
    def test_c0_bound(self, eps):
        c = diagonal()
        w = wiggle_approximation(c, eps)
        assert c0_distance(w.curve, c) <= 2 * eps

    @pytest.mark.parametrize("curve", [diagonal(), diagonal(2.0), diagonal(-0.5)])
    def test_accounting(self, curve):
        w = wiggle_approximation(curve, 0.2)
        assert np.sum(np.abs(w.loop_actions)) == pytest.approx(abs(legendrian_defect(curve).total_defect), abs=1e-6)
        assert np.all(w.loop_radii <= 0.1 + 1e-12)

    def test_signed_accounting_when_defect_changes_sign(self):
        # alpha(c') = -y x' changes sign along this curve, so only the signed sum is conserved
        curve = lissajous_space(1, 2, z=0.0)
        w = wiggle_approximation(curve, 0.2)
        assert np.sum(w.loop_actions) == pytest.approx(legendrian_defect(curve).total_defect, abs=1e-6)

    def test_each_loop_makes_one_chord(self):
        w = wiggle_approximation(diagonal(), 0.2)
        rep = find_self_chords(w.curve)
        for (a, b), act in zip(w.windows, w.loop_actions):
            inside = [c for c in rep.chords if a <= c.s <= b and a <= c.t <= b]
            assert len(inside) == 1
            assert inside[0].length == pytest.approx(abs(act), abs=1e-6)

    def test_endpoints_kept(self):
        c = diagonal()
        w = wiggle_approximation(c, 0.1)
        ends = w.curve(np.array(w.curve.domain))
        assert np.allclose(ends, [[0, 0, 0], [1, 0, 1]], atol=1e-9)

    def test_reeb_tangent_rejected(self):
        with pytest.raises(DegenerateInputError):
            wiggle_approximation(interval(1.0), 0.1)

    def test_bad_eps(self):
        with pytest.raises(ContractViolation):
            wiggle_approximation(diagonal(), 0.0)


def loop_circle(radius, eps=0.4, s_range=(-1.0, 1.0)):
    return circle_curve(radius, center=(eps / 2, sum(s_range) / 2), samples=256)


def legendrian_bases():
    out = [legendrian_lift(circle_curve(r, (c, 0))) for r, c in ((1.0, 0), (0.5, 1), (2.0, -1))]
    out += [legendrian_lift(lissajous(1, b, s)) for b, s in ((2, 1.0), (2, 0.5), (4, 1.0))]
    out += [legendrian_lift(random_loop(seed)) for seed in (1, 2)]
    out += [legendrian_lift(line_curve([0, 0], [1, 0.5])), legendrian_lift(line_curve([0, 1], [1, -1]))]
    return out


def non_legendrian_bases():
    out = [diagonal(s) for s in (1.0, 2.0, -0.5)]
    out += [circle_curve(r, z=0.0) for r in (1.0, 0.5)]
    out += [lissajous_space(1, 2), lissajous_space(1, 3, z=1.0)]
    out += [line_curve([0, 0, 0], [1, 1, 0]), line_curve([0, 0, 0], [0, 1, 1]),
            line_curve([1, 2, 3], [1, -1, 0.5])]
    return out


class TestSuspension:
    def test_legendrian_base_is_lagrangian(self, unit_circle):
        m = SuspensionMap(legendrian_lift(unit_circle), loop_circle(0.2), (-1, 1))
        assert suspension_pullback_norm(m) < 1e-6

    def test_diagonal_is_not(self):
        m = SuspensionMap(diagonal(), loop_circle(0.2), (-1, 1))
        assert suspension_pullback_norm(m) > 0.1

    def test_loop_scaling(self):
        norms = []
        for k in range(10):
            r = 0.2 / 2 ** (k / 3)
            norms.append(suspension_pullback_norm(SuspensionMap(diagonal(), loop_circle(r), (-1, 1))))
        norms = np.array(norms)
        assert np.all(norms > 0)
        # continuous dependence: successive ratios stay bounded
        assert np.all(norms[1:] / norms[:-1] > 0.5)

    def test_dichotomy(self):
        loop = loop_circle(0.15)
        leg = [suspension_pullback_norm(SuspensionMap(b, loop, (-1, 1))) for b in legendrian_bases()]
        non = [suspension_pullback_norm(SuspensionMap(b, loop, (-1, 1))) for b in non_legendrian_bases()]
        assert max(leg) < 1e-6
        assert min(non) > 1e-6

    def test_non_embedded_loop_rejected(self, diagonal):
        fig8 = lissajous(1, 2, 0.1)
        shifted = circle_curve(1.0)  # crosses s < 0 region check first
        with pytest.raises(ContractViolation):
            SuspensionMap(diagonal, shifted, (-1, 1))
        from contactlab.curves import AnalyticCurve

        eight = AnalyticCurve(lambda t: fig8(t) + [0.2, 0.0], lambda t: fig8.derivative(t),
                              fig8.domain, closed=True, grid=fig8.grid)
        with pytest.raises(ContractViolation):
            SuspensionMap(diagonal, eight, (-1, 1))

    def test_open_loop_rejected(self, diagonal):
        with pytest.raises(ContractViolation):
            SuspensionMap(diagonal, line_curve([0.1, 0], [0.1, 0.1]), (-1, 1))

    def test_path_action_of_loop_is_sign_of_area(self):
        assert path_action(loop_circle(0.2)) == pytest.approx(-np.pi * 0.04, abs=1e-12)
