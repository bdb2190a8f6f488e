import numpy as np
import pytest
import sympy

from contactlab.errors import ContractViolation
from contactlab.expressions import parse_expression, tokenize
from contactlab.flows import ContactHamiltonian

x, y, z, s = sympy.symbols("x y z s", real=True)


class TestParser:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("2*z - x*y", 2 * z - x * y),
            ("x^2^3", x ** (2**3)),
            ("-x^2", -(x**2)),
            ("(x+y)*(x-y)", (x + y) * (x - y)),
            ("sin(x)*cos(y) + exp(-z)", sympy.sin(x) * sympy.cos(y) + sympy.exp(-z)),
            ("s*x/2", s * x / 2),
            ("1.5e-1*x + .5", sympy.Float(0.15) * x + sympy.Float(0.5)),
            ("+3", sympy.Integer(3)),
        ],
    )
    def test_parses(self, text, expected):
        assert sympy.simplify(parse_expression(text) - expected) == 0

    @pytest.mark.parametrize("text", ["", "x +", "foo(x)", "x $ y", "sin x", "(x", "x)", "__import__"])
    def test_rejects(self, text):
        with pytest.raises(ContractViolation):
            parse_expression(text)

    def test_tokens(self):
        assert tokenize("x^2") == [("name", "x"), ("op", "^"), ("num", "2"), ("end", "")]


class TestHamiltonianFromExpression:
    def test_values_and_gradient(self, rng):
        H = ContactHamiltonian.from_expression("sin(x)*y + z^2")
        p = rng.normal(size=(20, 3))
        assert np.allclose(H.value(p), np.sin(p[:, 0]) * p[:, 1] + p[:, 2] ** 2)
        g = H.gradient(p)
        assert np.allclose(g[:, 0], np.cos(p[:, 0]) * p[:, 1])
        assert np.allclose(g[:, 2], 2 * p[:, 2])
        assert H.validate() < 1e-4

    def test_constant_broadcasts(self):
        H = ContactHamiltonian.from_expression("3")
        assert H.value(np.zeros((4, 3))).shape == (4,)
        assert np.array_equal(H.gradient(np.zeros((4, 3))), np.zeros((4, 3)))

    def test_time_dependence_detected(self):
        assert ContactHamiltonian.from_expression("s*x").time_dependent
        assert not ContactHamiltonian.from_expression("x").time_dependent
