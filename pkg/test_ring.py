import random
import unittest
from fractions import Fraction

import sympy

from src.config import Settings
from src.errors import ChartError, ChartMismatchError, NonInvertibleError, RestrictionError, UnknownVariableError
from src.generators import random_coefficient, random_scalar
from src.ring import (Chart, Point, Scalar, adjugate_inverse, determinant, partial_derivative, scalars,
                      solve_unit_system, specialize)

CHART = Chart(("q", "p", "t"), "t")
SYMBOLS = sympy.symbols("q p t")


def to_sympy(f: Scalar):
    total = sympy.Integer(0)
    for exps, c in f:
        term = sympy.Rational(c.numerator, c.denominator)
        for sym, n in zip(SYMBOLS, exps):
            term *= sym ** n
        total += term
    return sympy.expand(total)


def product(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Scalar.zero(CHART)) for j in range(len(b[0]))]
            for i in range(len(a))]


class TestChart(unittest.TestCase):
    def test_duplicate_variables(self):
        with self.assertRaises(ChartError):
            Chart(("x", "x"))

    def test_homogeneity_variable_must_belong(self):
        with self.assertRaises(ChartError):
            Chart(("x", "y"), "t")

    def test_slice_chart(self):
        self.assertEqual(CHART.slice_chart(), Chart(("q", "p")))
        with self.assertRaises(ChartError):
            Chart(("x",)).slice_chart()

    def test_unknown_variable(self):
        with self.assertRaises(UnknownVariableError):
            CHART.index("z")

    def test_incomplete_point(self):
        with self.assertRaises(ChartError):
            Point.of(CHART, {"q": 1})


class TestScalar(unittest.TestCase):
    def setUp(self):
        self.q, self.p, self.t = scalars(CHART, ("q", "p", "t"))

    def test_unit_times_inverse(self):
        self.assertEqual(self.t * self.t ** -1, 1)

    def test_cancellation(self):
        self.assertEqual((self.q + self.p) + (-self.q), self.p)
        self.assertTrue((self.q - self.q).is_zero())
        self.assertEqual((self.q - self.q).terms, {})

    def test_monomial_power(self):
        self.assertEqual((self.q * self.p) ** 2, self.q ** 2 * self.p ** 2)

    def test_non_invertible(self):
        with self.assertRaises(NonInvertibleError) as ctx:
            (self.q + self.p) ** -1
        self.assertIn("non-invertible scalar", str(ctx.exception))

    def test_chart_mismatch(self):
        other = Scalar.variable(Chart(("q", "p")), "q")
        with self.assertRaises(ChartMismatchError):
            self.q + other

    def test_derivatives(self):
        self.assertEqual(partial_derivative(self.t ** -1, "t"), -(self.t ** -2))
        self.assertEqual(partial_derivative(self.q * self.p, "q"), self.p)
        self.assertTrue(partial_derivative(self.q ** 2, "p").is_zero())

    def test_specialize(self):
        self.assertEqual(specialize(self.t ** 2 * self.q, "t", 1), self.q)
        self.assertEqual(specialize(self.t ** -1, "t", 1), 1)
        with self.assertRaises(RestrictionError):
            specialize(self.t ** -1, "t", 0)

    def test_evaluate_on_circle(self):
        f = (self.q * self.q + self.p * self.p) * Fraction(1, 2)
        point = Point.of(CHART, {"q": Fraction(3, 5), "p": Fraction(4, 5), "t": 1})
        self.assertEqual(specialize(f, point), Fraction(1, 2))

    def test_reindex_to_slice(self):
        f = self.q * self.t ** 2 + self.p
        g = f.reindex(CHART.slice_chart())
        q, p = scalars(CHART.slice_chart(), ("q", "p"))
        self.assertEqual(g, q + p)

    def test_arithmetic_matches_sympy(self):
        settings = Settings.from_env()
        rng = random.Random(settings.seed)
        for _ in range(100):
            a = random_scalar(rng, CHART, max_terms=3)
            b = random_scalar(rng, CHART, max_terms=3)
            self.assertEqual(to_sympy(a + b), sympy.expand(to_sympy(a) + to_sympy(b)))
            self.assertEqual(to_sympy(a * b), sympy.expand(to_sympy(a) * to_sympy(b)))
            for sym, name in zip(SYMBOLS, CHART.variables):
                self.assertEqual(to_sympy(a.derivative(name)), sympy.expand(sympy.diff(to_sympy(a), sym)))

    def test_leibniz_rule(self):
        rng = random.Random(Settings.from_env().seed)
        for _ in range(100):
            a = random_scalar(rng, CHART, max_terms=3)
            b = random_scalar(rng, CHART, max_terms=3)
            for name in CHART.variables:
                self.assertEqual(partial_derivative(a * b, name),
                                 partial_derivative(a, name) * b + a * partial_derivative(b, name))

    def test_specialize_commutes_with_ring_operations(self):
        rng = random.Random(Settings.from_env().seed)
        for _ in range(100):
            a = random_scalar(rng, CHART, max_terms=3)
            b = random_scalar(rng, CHART, max_terms=3)
            name = rng.choice(CHART.variables)
            value = rng.choice((1, -1, 2, Fraction(1, 3), Fraction(-5, 2)))
            self.assertEqual(specialize(a + b, name, value), specialize(a, name, value) + specialize(b, name, value))
            self.assertEqual(specialize(a * b, name, value), specialize(a, name, value) * specialize(b, name, value))
            self.assertEqual(specialize(-a, name, value), -specialize(a, name, value))


class TestLinearAlgebra(unittest.TestCase):
    def setUp(self):
        self.q, self.p, self.t = scalars(CHART, ("q", "p", "t"))
        self.zero = Scalar.zero(CHART)

    def test_determinant(self):
        m = [[self.q, self.p], [self.t, self.q]]
        self.assertEqual(determinant(m), self.q * self.q - self.p * self.t)

    def test_unit_determinant_solve(self):
        m = [[self.zero, self.t], [-self.t, self.zero]]
        x = solve_unit_system(m, [self.q, self.p])
        # t x1 = q, −t x0 = p
        self.assertEqual(x[0], -(self.p * self.t ** -1))
        self.assertEqual(x[1], self.q * self.t ** -1)

    def test_adjugate_inverse(self):
        m = [[self.zero, self.t], [-self.t, self.zero]]
        inv = adjugate_inverse(m)
        self.assertEqual(inv[0][1], -(self.t ** -1))
        self.assertEqual(inv[1][0], self.t ** -1)

    def test_non_unit_determinant(self):
        m = [[self.q + 1, self.zero], [self.zero, Scalar.one(CHART)]]
        with self.assertRaises(NonInvertibleError) as ctx:
            adjugate_inverse(m)
        self.assertIn("not invertible over the Laurent ring", str(ctx.exception))

    def random_unit_matrix(self, rng, n=3):
        """L·U avec L unipotente inférieure et U supérieure à diagonale monomiale."""
        lower = [[Scalar.one(CHART) if i == j else random_scalar(rng, CHART) if i > j else self.zero
                  for j in range(n)] for i in range(n)]
        diagonal = [Scalar.monomial(CHART, {"q": rng.randint(-1, 1), "t": rng.randint(-2, 2)},
                                    random_coefficient(rng)) for _ in range(n)]
        upper = [[diagonal[i] if i == j else random_scalar(rng, CHART) if i < j else self.zero
                  for j in range(n)] for i in range(n)]
        return product(lower, upper), diagonal

    def test_random_unit_matrices(self):
        rng = random.Random(Settings.from_env().seed)
        for _ in range(15):
            m, diagonal = self.random_unit_matrix(rng)
            det = determinant(m)
            self.assertEqual(det, diagonal[0] * diagonal[1] * diagonal[2])
            expected = sympy.Matrix(3, 3, lambda i, j: to_sympy(m[i][j])).det()
            self.assertEqual(sympy.cancel(to_sympy(det) - expected), 0)
            rhs = [random_scalar(rng, CHART) for _ in range(3)]
            x = solve_unit_system(m, rhs)
            self.assertEqual(product(m, [[value] for value in x]), [[value] for value in rhs])
            identity = [[Scalar.one(CHART) if i == j else self.zero for j in range(3)] for i in range(3)]
            self.assertEqual(product(m, adjugate_inverse(m)), identity)

    def test_empty_matrix(self):
        with self.assertRaises(ValueError):
            determinant([])


if __name__ == '__main__':
    unittest.main()
