import numpy as np
import pytest

from contactlab.core import (
    STANDARD,
    ContactModel,
    TangentVector,
    alpha_eval,
    bundle_E,
    complex_structure_J,
    project_pi,
)
from contactlab.errors import ContractViolation, DegenerateInputError

EX, EY = np.array([1.0, 0.0]), np.array([0.0, 1.0])


class TestAlpha:
    def test_hand_value(self):
        assert alpha_eval([0, 2, 0], [1, 0, 0]) == -2.0

    @pytest.mark.parametrize("p", [[0, 0, 0], [3, -1, 2], [-5, 7, 0.1]])
    def test_reeb_and_dy(self, p):
        assert alpha_eval(p, [0, 0, 1]) == 1.0
        assert alpha_eval(p, [0, 1, 0]) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ContractViolation):
            alpha_eval([0, 0], [1, 0, 0])

    def test_reeb_invariants(self, rng):
        m = ContactModel(2)
        p = rng.normal(size=(50, 5))
        R = m.reeb(p)
        assert np.allclose(m.alpha(p, R), 1.0)
        # i_R d alpha = 0: R has no x, y components
        w = rng.normal(size=(50, 5))
        assert np.allclose(m.dalpha_ambient(R, w), 0.0)

    def test_frame_is_symplectic(self):
        m = ContactModel(3)
        f = m.xi_frame(np.arange(7.0))
        G = np.array([[m.dalpha_ambient(u, v) for v in f] for u in f])
        assert np.allclose(G, m.omega)
        assert np.allclose(m.alpha(np.arange(7.0), f), 0.0)


class TestProjection:
    def test_examples(self):
        d = project_pi([0, 0, 0], [1, 0, 1])
        assert np.allclose(d.xi_part, EX) and d.reeb_part == 1.0
        d = project_pi([4, -2, 1], [0, 0, 1])
        assert np.allclose(d.xi_part, 0) and d.reeb_part == 1.0
        d = project_pi([0, 1, 0], [1, 0, 1])
        assert d.reeb_part == 0.0 and np.allclose(d.xi_part, EX)

    def test_reassembly_and_xi_part_in_kernel(self, rng):
        p, v = rng.normal(size=(1000, 3)) * 3, rng.normal(size=(1000, 3))
        d = STANDARD.project(p, v)
        amb = STANDARD.to_ambient(p, d.xi_part)
        assert np.max(np.abs(STANDARD.alpha(p, amb))) < 1e-12
        back = amb + d.reeb_part[:, None] * STANDARD.reeb(p)
        assert np.max(np.abs(back - v) / np.linalg.norm(v, axis=1)[:, None]) < 1e-12


class TestComplexStructure:
    def test_frame_action(self):
        assert np.allclose(complex_structure_J(None, EX), EY)
        assert np.allclose(complex_structure_J(None, EY), -EX)
        assert np.allclose(complex_structure_J(None, complex_structure_J(None, EX)), -EX)

    def test_metric_positive_symmetric(self, rng):
        for n in (1, 2):
            m = ContactModel(n)
            u, w = rng.normal(size=(10_000, 2 * n)), rng.normal(size=(10_000, 2 * n))
            assert np.all(m.metric(u, u) > 0)
            assert np.allclose(m.metric(u, w), m.metric(w, u))

    def test_ambient_metric_makes_reeb_unit_normal(self, rng):
        p = rng.normal(size=3)
        R = STANDARD.reeb(p)
        e = STANDARD.xi_frame(p)
        assert STANDARD.ambient_metric(p, R, R) == pytest.approx(1.0)
        assert STANDARD.ambient_metric(p, R, e[0]) == pytest.approx(0.0)


class TestBundleE:
    def test_non_legendrian_tangent(self):
        E = bundle_E([0, 0, 0], [1, 0, 1])
        assert abs(abs(E @ EX) - 1) < 1e-12
        assert not STANDARD.is_legendrian_at([0, 0, 0], [1, 0, 1])

    def test_legendrian_tangent(self):
        E = bundle_E([0, 0, 0], [1, 0, 0])
        assert abs(abs(E @ EX) - 1) < 1e-12
        assert STANDARD.is_legendrian_at([0, 0, 0], [1, 0, 0])

    def test_reeb_tangent_rejected(self):
        with pytest.raises(DegenerateInputError):
            bundle_E([0, 0, 0], [0, 0, 1])

    def test_isotropic_and_involutive(self, rng):
        for _ in range(200):
            p, v = rng.normal(size=3), rng.normal(size=3)
            E = bundle_E(p, v)
            piv = STANDARD.project(p, v).xi_part
            assert abs(STANDARD.dalpha(piv, E)) < 1e-12
            # applying the construction to E returns the line of E
            E2 = bundle_E(p, STANDARD.to_ambient(p, E))
            assert abs(abs(E2 @ E) - 1) < 1e-12

    def test_higher_dimension(self):
        m = ContactModel(2)
        # Legendrian plane spanned by e_x1, e_x2 at the origin
        T = np.array([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]], float)
        E = m.bundle_E(np.zeros(5), T)
        assert E.shape == (2, 4)
        assert m.is_legendrian_at(np.zeros(5), T)


class TestTangentVector:
    def test_validation(self):
        v = TangentVector([0, 0, 0], [1, 2, 3])
        assert np.array_equal(np.asarray(v), [1, 2, 3])
        with pytest.raises(ContractViolation):
            TangentVector([0, 0, 0], [np.nan, 0, 0])
        with pytest.raises(ContractViolation):
            TangentVector([0, 0], [1, 0, 0])

    def test_bad_dimension(self):
        with pytest.raises(ContractViolation):
            ContactModel(0)
