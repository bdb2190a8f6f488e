import numpy as np
import pytest

from contactlab.catalog import figure_eight, lissajous
from contactlab.constructions import legendrian_lift
from contactlab.curves import circle_curve, line_curve
from contactlab.errors import ContractViolation, DegenerateInputError, IntegrationAccuracyError
from contactlab.flows import (
    BUILTINS,
    ContactHamiltonian,
    contact_vector_field,
    defining_relation_residuals,
    displacement_energy_upper_bound,
    displacement_experiment,
    flow,
    hamiltonian,
    hofer_osc_norm,
    rk4_order,
    tangency_margin,
)

TEST_HAMILTONIANS = ["reeb", "radial", "coordinate-x", "x^2 + y", "sin(x)*cos(y) + z", "exp(x) - y*z", "s*x + y^2"]
CUBE = [(-1, 1)] * 3


def radial_exact(p, t):
    p = np.asarray(p, float)
    return p * np.array([np.exp(t), np.exp(t), np.exp(2 * t)])


class TestHamiltonian:
    def test_builtins(self):
        assert set(BUILTINS) == {"reeb", "radial", "coordinate-x"}
        for name in BUILTINS:
            assert hamiltonian(name).validate() < 1e-4

    def test_bad_gradient_rejected(self):
        H = ContactHamiltonian(lambda p, s: p[..., 0] ** 2, lambda p, s: np.zeros(p.shape))
        with pytest.raises(ContractViolation):
            contact_vector_field(H, [1.0, 0.0, 0.0])

    def test_finite_difference_fallback(self, rng):
        H = ContactHamiltonian(lambda p, s: np.sin(p[..., 0]) * p[..., 2])
        p = rng.normal(size=(10, 3))
        g = H.gradient(p)
        assert np.allclose(g[:, 0], np.cos(p[:, 0]) * p[:, 2], atol=1e-8)
        assert not H.has_analytic_gradient

    def test_higher_dimension(self, rng):
        H = ContactHamiltonian(lambda p, s: p[..., 0] * p[..., 3] + p[..., 4], n=2)
        p = rng.normal(size=(50, 5))
        ra, rd = defining_relation_residuals(H, p)
        assert ra < 1e-10 and rd < 1e-8


class TestVectorField:
    def test_reeb(self, rng):
        X = contact_vector_field(hamiltonian("reeb"), rng.normal(size=(5, 3)))
        assert np.array_equal(X, np.tile([0.0, 0.0, 1.0], (5, 1)))

    def test_coordinate_x(self):
        assert np.allclose(contact_vector_field(hamiltonian("coordinate-x"), [2, 5, 0]), [0, 1, 2])

    def test_radial_on_circle(self):
        t = np.linspace(0, 2 * np.pi, 17)
        p = np.column_stack([np.cos(t), np.sin(t), 0 * t])
        assert np.allclose(contact_vector_field(hamiltonian("radial"), p), p)

    @pytest.mark.parametrize("name", TEST_HAMILTONIANS)
    def test_defining_relations(self, name, rng):
        p = rng.uniform(-2, 2, size=(10_000, 3))
        ra, rd = defining_relation_residuals(hamiltonian(name), p, s=0.3)
        assert ra < 1e-10
        assert rd < 1e-8


class TestFlow:
    def test_reeb_translation(self, rng):
        p = rng.normal(size=(6, 3))
        res = flow("reeb", p, 0.7)
        assert np.max(np.abs(res.points - (p + [0, 0, 0.7]))) < 1e-10
        assert np.max(np.abs(res.conformal_factor)) < 1e-6

    def test_radial_closed_form(self):
        res = flow("radial", [1.0, 0.0, 0.0], 0.5)
        assert np.allclose(res.points, [np.exp(0.5), 0, 0], atol=1e-8)

    def test_radial_conformal_factor(self, rng):
        p = rng.uniform(-1, 1, size=(4, 3))
        for t in (0.25, -0.5, 1.0):
            res = flow("radial", p, t)
            assert np.allclose(res.points, radial_exact(p, t), atol=1e-8)
            assert res.max_residual < 1e-6
            assert np.allclose(res.conformal_factor, 2 * t, atol=1e-6)

    @pytest.mark.parametrize("name", TEST_HAMILTONIANS)
    def test_contactness(self, name, rng):
        p = rng.uniform(-0.5, 0.5, size=(3, 3))
        res = flow(name, p, 0.6, steps_per_unit=2000)
        assert res.max_residual < 1e-6

    def test_rk4_order(self):
        p = np.array([0.3, -0.4, 0.7])
        orders = rk4_order("radial", p, 0.5, radial_exact(p, 0.5))
        assert len(orders) == 3
        assert np.all(orders > 3.8)

    def test_monitor_trips(self):
        with pytest.raises(IntegrationAccuracyError):
            flow("x^2 + y^2 + z^2", [1.0, 1.0, 1.0], 1.0, steps_per_unit=4)

    def test_curve_image(self, circle3d):
        res = flow("radial", circle3d, 0.3, residuals=False)
        _, P = res.curve.polyline()
        assert np.allclose(np.linalg.norm(P[:, :2], axis=1), np.exp(0.3))

    def test_time_zero(self):
        res = flow("radial", [1.0, 2.0, 3.0], 0.0)
        assert np.array_equal(res.points, [1.0, 2.0, 3.0]) and res.steps == 0

    def test_nonfinite_time(self):
        with pytest.raises(ContractViolation):
            flow("radial", [0, 0, 0], np.inf)


def closed_legendrians():
    out = [figure_eight(), figure_eight(0.5)]
    out += [legendrian_lift(lissajous(a, b, sc)) for a, b, sc in ((1, 2, 2.0), (3, 2, 1.0), (1, 4, 1.0))]
    out += [legendrian_lift(lissajous(1, 2, 1.0, phase=0.0)).curve]
    # shifted and rescaled copies stay closed Legendrians after a contact dilation
    for sc, shift in ((0.7, (0.2, -0.1)), (1.3, (-0.5, 0.4)), (0.4, (1.0, 1.0)), (1.0, (0.0, 2.0))):
        base = lissajous(1, 2, sc)
        from contactlab.curves import AnalyticCurve

        moved = AnalyticCurve(lambda t, b=base, s=shift: b(t) + s, base.derivative, base.domain,
                              closed=True, grid=base.grid)
        out.append(legendrian_lift(moved))
    return out


class TestTangencyMargin:
    def test_witness(self, circle3d):
        assert tangency_margin("radial", circle3d) == pytest.approx(1.0, abs=1e-9)

    def test_coordinate_x_touches(self, circle3d):
        assert tangency_margin("coordinate-x", circle3d) < 1e-12

    def test_reeb_field(self, circle3d):
        assert tangency_margin("reeb", circle3d) < 1e-12

    def test_reeb_tangent_curve(self):
        with pytest.raises(DegenerateInputError):
            tangency_margin("radial", line_curve([0, 0, 0], [0, 0, 1]))

    def test_vanishing_field_is_zero(self, circle3d):
        assert tangency_margin(lambda p: np.zeros(p.shape), circle3d) == 0.0

    def test_closed_legendrians_have_small_margin(self):
        curves = closed_legendrians()
        assert len(curves) == 10
        for c in curves:
            z = c(np.array(c.domain))[:, 2]
            assert abs(z[1] - z[0]) < 1e-9
            for H in ["radial", "coordinate-x", "x^2 + y", "sin(x)*cos(y) + z", "exp(x) - y"]:
                assert tangency_margin(H, c) < 1e-3


class TestDisplacement:
    def test_radial_circle(self, circle3d):
        rep = displacement_experiment("radial", circle3d, [0.1, 0.2, 0.3, 0.4, 0.5])
        assert all(r.chord_count == 0 and r.disjoint for r in rep.rows)
        assert rep.first_disjoint_time == 0.1

    def test_reeb_is_degenerate(self, circle3d):
        rep = displacement_experiment("reeb", circle3d, [0.3])
        assert rep.rows[0].status.startswith("degenerate")
        assert rep.first_disjoint_time is None

    def test_time_zero(self, circle3d):
        rep = displacement_experiment("radial", circle3d, [0.0])
        assert rep.rows[0].status.startswith("degenerate")

    def test_energy_bound(self, circle3d):
        val, name, t = displacement_energy_upper_bound(["radial", "reeb"], circle3d, [0.1, 0.2], CUBE, 16)
        assert name == "radial" and t == 0.1
        assert val == pytest.approx(0.6)


class TestNorms:
    def test_radial(self):
        rep = hofer_osc_norm("radial", CUBE, 64)
        assert rep.osc_norm == pytest.approx(6.0, abs=0.05)
        assert rep.positive_norm == pytest.approx(3.0, abs=0.02)

    def test_constant(self):
        rep = hofer_osc_norm("2.5", CUBE, 8)
        assert rep.osc_norm == 0.0 and rep.positive_norm == 2.5

    def test_time_dependent(self):
        rep = hofer_osc_norm("s*x", CUBE, 8)
        assert rep.osc_norm == pytest.approx(1.0, abs=1e-12)
        assert rep.time_samples >= 64

    def test_refinement_monotone(self):
        reps = [hofer_osc_norm("sin(3*x)*y + z^2", CUBE, r) for r in (9, 17, 33)]
        # nested grids: refinement can only increase the sampled oscillation
        assert reps[0].osc_norm <= reps[1].osc_norm <= reps[2].osc_norm
        for a, b in zip(reps, reps[1:]):
            assert b.osc_norm - a.osc_norm <= a.error_bar + 1e-12

    def test_positive_bounded(self):
        rep = hofer_osc_norm("x - 0.5", CUBE, 16)
        assert rep.positive_norm <= rep.osc_norm + abs(rep.min_integral)

    def test_empty_box(self):
        with pytest.raises(ContractViolation):
            hofer_osc_norm("radial", [(0, 0), (-1, 1), (-1, 1)])
        with pytest.raises(ContractViolation):
            hofer_osc_norm("radial", [(0, 1)])
