import random
import unittest
from fractions import Fraction

from src.config import Settings
from src.errors import ChartMismatchError, SetupError
from src.exterior import DiffForm, Multivector, contract, exterior_derivative, sn_bracket, wedge
from src.generators import random_homogeneous_form, random_homogeneous_multivector, random_op
from src.homogeneity import (J, J_N, HomogeneousSetup, Psi, Psi_N, decompose_along_delta, degree, degree_via_brackets,
                             homogeneous_family, is_basic, poissonize, reduce_J, symplectize, unpsi_N)
from src.jacobi import FirstOrderOp, FormPair, op_wedge, sj_bracket
from src.models import HOMOGENEOUS, NOT_HOMOGENEOUS, ZERO
from src.ring import Chart, Scalar, scalars

XT = Chart(("x", "t"), "t")
XYT = Chart(("x", "y", "t"), "t")
R4 = Chart(("q1", "p1", "q2", "p2"))


class TestSetup(unittest.TestCase):
    def test_product_setup(self):
        setup = HomogeneousSetup.product(XT)
        self.assertTrue(setup.is_product)
        self.assertEqual(setup.slice_chart, Chart(("x",)))

    def test_missing_homogeneity_variable(self):
        with self.assertRaises(SetupError):
            HomogeneousSetup.product(Chart(("x", "y")))

    def test_not_transversal(self):
        x, t = scalars(XT, ("x", "t"))
        with self.assertRaises(SetupError):
            HomogeneousSetup(XT, Multivector.basis(XT, "x"), t)


class TestDegree(unittest.TestCase):
    def test_monomial(self):
        setup = HomogeneousSetup.product(XT)
        t = Scalar.variable(XT, "t")
        result = degree(t ** 2, setup)
        self.assertEqual(result.status, HOMOGENEOUS)
        self.assertEqual(result.value, 2)

    def test_canonical_bivector(self):
        half = Fraction(1, 2)
        delta = sum((Multivector.basis(R4, name) * Scalar.variable(R4, name) * half for name in R4.variables),
                    Multivector.zero(R4, 1))
        bivector = Multivector.basis(R4, "q1", "p1") + Multivector.basis(R4, "q2", "p2")
        self.assertTrue(degree(bivector, delta).matches(-1))

    def test_mixed_eigenvalues(self):
        chart = Chart(("q",))
        q = Scalar.variable(chart, "q")
        delta = Multivector.basis(chart, "q") * q
        self.assertEqual(degree(q + q ** 2, delta).status, NOT_HOMOGENEOUS)

    def test_zero_tensor(self):
        setup = HomogeneousSetup.product(XT)
        result = degree(Multivector.zero(XT, 2), setup)
        self.assertEqual(result.status, ZERO)
        self.assertTrue(result.matches(5))

    def test_chart_mismatch(self):
        with self.assertRaises(ChartMismatchError):
            degree(Multivector.basis(XYT, "x"), HomogeneousSetup.product(XT))

    def test_bracket_characterization(self):
        setup = HomogeneousSetup.product(XT)
        report = degree_via_brackets(Multivector.basis(XT, "t", "x"), setup)
        self.assertTrue(report.consistent)
        self.assertEqual(report.degree, -1)

    def test_bracket_characterization_agrees(self):
        setup = HomogeneousSetup.product(XYT)
        rng = random.Random(Settings.from_env().seed)
        checked = 0
        for _ in range(10):
            for k in range(1, 3):
                p = random_homogeneous_multivector(rng, XYT, k)
                if p.is_zero():
                    continue
                report = degree_via_brackets(p, setup)
                self.assertTrue(report.consistent)
                self.assertIsNotNone(report.degree)
                self.assertEqual(report.degree, degree(p, setup).value)
                self.assertEqual(report.degree, 1 - k)
                checked += 1
        self.assertGreater(checked, 0)

    def test_family_is_homogeneous(self):
        setup = HomogeneousSetup.product(XT)
        x, t = scalars(XT, ("x", "t"))
        family = dict(homogeneous_family(setup))
        self.assertEqual(family[t], 1)
        self.assertEqual(family[x], 0)
        self.assertEqual(family[t * x], 1)


def random_homogeneous_op(rng, chart, k, n):
    d1 = random_homogeneous_multivector(rng, chart, k - 1, n) if k > 0 else None
    return FirstOrderOp(k, random_homogeneous_multivector(rng, chart, k, n), d1)


class TestGradation(unittest.TestCase):
    """Les opérations tensorielles respectent la graduation par les degrés d'homogénéité pour Δ = t∂_t."""

    def setUp(self):
        self.setup = HomogeneousSetup.product(XYT)
        self.rng = random.Random(Settings.from_env().seed)

    def draw_degrees(self):
        return self.rng.choice((-1, 0, 1)), self.rng.choice((-1, 0, 1))

    def test_wedge_adds_degrees(self):
        for _ in range(20):
            n, m = self.draw_degrees()
            p = random_homogeneous_multivector(self.rng, XYT, self.rng.randint(0, 2), n)
            q = random_homogeneous_multivector(self.rng, XYT, self.rng.randint(0, 1), m)
            self.assertTrue(degree(wedge(p, q), self.setup).matches(n + m))
            alpha = random_homogeneous_form(self.rng, XYT, self.rng.randint(0, 2), n)
            beta = random_homogeneous_form(self.rng, XYT, self.rng.randint(0, 1), m)
            self.assertTrue(degree(wedge(alpha, beta), self.setup).matches(n + m))

    def test_contraction_adds_degrees(self):
        for _ in range(20):
            n, m = self.draw_degrees()
            x = random_homogeneous_multivector(self.rng, XYT, 1, n)
            alpha = random_homogeneous_form(self.rng, XYT, self.rng.randint(1, 3), m)
            self.assertTrue(degree(contract(x, alpha), self.setup).matches(n + m))
            beta = random_homogeneous_form(self.rng, XYT, 1, n)
            p = random_homogeneous_multivector(self.rng, XYT, self.rng.randint(1, 3), m)
            self.assertTrue(degree(contract(beta, p), self.setup).matches(n + m))

    def test_exterior_derivative_preserves_degree(self):
        for _ in range(20):
            n = self.rng.choice((-1, 0, 1, 2))
            alpha = random_homogeneous_form(self.rng, XYT, self.rng.randint(0, 2), n)
            self.assertTrue(degree(exterior_derivative(alpha), self.setup).matches(n))

    def test_schouten_bracket_adds_degrees(self):
        for _ in range(20):
            n, m = self.draw_degrees()
            p = random_homogeneous_multivector(self.rng, XYT, self.rng.randint(0, 2), n)
            q = random_homogeneous_multivector(self.rng, XYT, self.rng.randint(1, 2), m)
            self.assertTrue(degree(sn_bracket(p, q), self.setup).matches(n + m))

    def test_operator_products_add_degrees(self):
        for _ in range(20):
            n, m = self.draw_degrees()
            d = random_homogeneous_op(self.rng, XYT, self.rng.randint(0, 2), n)
            e = random_homogeneous_op(self.rng, XYT, self.rng.randint(1, 2), m)
            self.assertTrue(degree(d, self.setup).matches(n))
            self.assertTrue(degree(op_wedge(d, e), self.setup).matches(n + m))
            self.assertTrue(degree(sj_bracket(d, e), self.setup).matches(n + m))


class TestReduction(unittest.TestCase):
    def setUp(self):
        self.setup = HomogeneousSetup.product(XT)
        self.slice = XT.slice_chart()

    def test_decompose(self):
        t = Scalar.variable(XT, "t")
        p0, p1 = decompose_along_delta(Multivector.basis(XT, "t", "x"), self.setup)
        self.assertTrue(p0.is_zero())
        self.assertEqual(p1, Multivector.basis(XT, "x") * t ** -1)

    def test_J_on_slice(self):
        p = Multivector.basis(XT, "t", "x")
        expected = FirstOrderOp(2, Multivector.zero(self.slice, 2), Multivector.basis(self.slice, "x"))
        self.assertEqual(J_N(p, self.setup), expected)
        self.assertEqual(J(p, self.setup).d1, Multivector.basis(XT, "x") * Scalar.variable(XT, "t", -1))

    def test_homogeneity_violation_is_flagged(self):
        t = Scalar.variable(XT, "t")
        with self.assertLogs("src.homogeneity", level="INFO"):
            reduction = reduce_J(Multivector.basis(XT, "t", "x") * t, self.setup, restrict_to_slice=True)
        self.assertTrue(reduction.homogeneity_violated)
        self.assertTrue(reduction.degree.matches(0))

    def test_poissonize_inverts_J_N(self):
        setup = HomogeneousSetup.product(XYT)
        rng = random.Random(Settings.from_env().seed)
        for _ in range(10):
            for k in range(4):
                p = random_homogeneous_multivector(rng, XYT, k)
                self.assertEqual(poissonize(J_N(p, setup), setup), p)
                d = random_op(rng, setup.slice_chart, k)
                self.assertEqual(J_N(poissonize(d, setup), setup), d)

    def test_poissonize_requires_slice(self):
        with self.assertRaises(ChartMismatchError):
            poissonize(FirstOrderOp.identity(XT), self.setup)


class TestFormReduction(unittest.TestCase):
    def setUp(self):
        self.setup = HomogeneousSetup.product(XT)
        self.omega = DiffForm.basis(XT, "t", "x")

    def test_psi_of_symplectic_form(self):
        reduced = Psi_N(self.omega, self.setup)
        self.assertTrue(reduced.a0.is_zero())
        self.assertEqual(reduced.a1, DiffForm.basis(self.setup.slice_chart, "x"))

    def test_unpsi_and_symplectize(self):
        self.assertEqual(unpsi_N(Psi_N(self.omega, self.setup), self.setup), self.omega)
        self.assertEqual(symplectize(DiffForm.basis(self.setup.slice_chart, "x"), self.setup), self.omega)

    def test_round_trips_on_random_forms(self):
        setup = HomogeneousSetup.product(XYT)
        rng = random.Random(Settings.from_env().seed)
        for _ in range(20):
            alpha = random_homogeneous_form(rng, XYT, rng.randint(0, 2))
            self.assertEqual(unpsi_N(Psi_N(alpha, setup), setup), alpha)
            self.assertTrue(is_basic(Psi(alpha, setup), setup))

    def test_not_basic(self):
        x = Scalar.variable(XT, "x")
        pair = FormPair.embed(DiffForm.basis(XT, "t") * x)
        self.assertFalse(is_basic(pair, self.setup))


if __name__ == '__main__':
    unittest.main()
