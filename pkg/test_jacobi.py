import random
import unittest

from src.config import Settings
from src.errors import DegreeError
from src.exterior import DiffForm, Multivector, apply_vector, sn_bracket
from src.generators import random_form_pair, random_multivector, random_op, random_scalar
from src.jacobi import (FirstOrderOp, FormPair, i_phi, iterated_bracket, jacobi_differential, jacobi_pair, jet, join,
                        op_on_functions, sj_bracket, split)
from src.ring import Chart, Scalar, scalars

PLANE = Chart(("q", "p"))
LINE = Chart(("x",))
GENERIC = Chart(("x", "y", "z"))


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


class TestFirstOrderOp(unittest.TestCase):
    def test_identity_contraction(self):
        identity = FirstOrderOp.identity(PLANE)
        self.assertEqual(i_phi(identity).as_scalar(), 1)

    def test_embedded_bivector_has_no_phi_part(self):
        bivector = FirstOrderOp.embed(Multivector.basis(PLANE, "q", "p"))
        self.assertTrue(i_phi(bivector).is_zero())

    def test_split_join_round_trip(self):
        rng = random.Random(Settings.from_env().seed)
        for degree in range(4):
            d = random_op(rng, GENERIC, degree)
            self.assertEqual(join(*split(d)), d)

    def test_degree_mismatch(self):
        with self.assertRaises(DegreeError):
            FirstOrderOp(2, Multivector.basis(PLANE, "q", "p"), Multivector.basis(PLANE, "q", "p"))

    def test_jacobi_pair(self):
        bivector = Multivector.basis(PLANE, "q", "p")
        reeb = Multivector.basis(PLANE, "q")
        self.assertEqual(jacobi_pair(FirstOrderOp.join(bivector, reeb)), (bivector, reeb))
        with self.assertRaises(DegreeError):
            jacobi_pair(FirstOrderOp.identity(PLANE))


class TestSchoutenJacobiBracket(unittest.TestCase):
    def setUp(self):
        self.q, self.p = scalars(PLANE, ("q", "p"))

    def test_commuting_first_order_operators(self):
        a = FirstOrderOp(1, Multivector.basis(PLANE, "q"), Multivector.from_scalar(self.p))
        b = FirstOrderOp(1, Multivector.basis(PLANE, "p"), Multivector.from_scalar(self.q))
        self.assertTrue(sj_bracket(a, b).is_zero())

    def test_identity_acts_by_degree(self):
        identity = FirstOrderOp.identity(PLANE)
        rng = random.Random(Settings.from_env().seed)
        for r in range(3):
            q = random_multivector(rng, PLANE, r)
            self.assertEqual(sj_bracket(identity, FirstOrderOp.embed(q)), FirstOrderOp.embed(q) * (1 - r))

    def test_first_order_operator_on_function(self):
        x = Multivector.basis(PLANE, "q") * self.p
        f, g = self.q * self.p, self.q ** 2
        op = FirstOrderOp(1, x, Multivector.from_scalar(f))
        result = sj_bracket(op, FirstOrderOp.from_function(g))
        self.assertEqual(result.d0.as_scalar(), apply_vector(x, g) + f * g)
        self.assertIsNone(result.d1)

    def test_extends_schouten_bracket(self):
        rng = random.Random(Settings.from_env().seed)
        for _ in range(40):
            p = random_multivector(rng, GENERIC, rng.randint(0, 3))
            q = random_multivector(rng, GENERIC, rng.randint(1, 3))
            expected = FirstOrderOp.embed(sn_bracket(p, q))
            self.assertEqual(sj_bracket(FirstOrderOp.embed(p), FirstOrderOp.embed(q)), expected)

    def test_graded_antisymmetry(self):
        rng = random.Random(Settings.from_env().seed)
        for _ in range(40):
            k, r = rng.randint(0, 3), rng.randint(0, 3)
            a, b = random_op(rng, GENERIC, k), random_op(rng, GENERIC, r)
            self.assertEqual(sj_bracket(a, b), sj_bracket(b, a) * -_sign((k - 1) * (r - 1)))


class TestOperatorBrackets(unittest.TestCase):
    def test_identity_bracket(self):
        f = Scalar.variable(PLANE, "q") ** 2
        self.assertEqual(op_on_functions(FirstOrderOp.identity(PLANE), f), f)

    def test_embedded_bivector(self):
        q, p = scalars(PLANE, ("q", "p"))
        d = FirstOrderOp.embed(Multivector.basis(PLANE, "q", "p"))
        self.assertEqual(op_on_functions(d, q, p), 1)

    def test_contact_line_bracket(self):
        rng = random.Random(Settings.from_env().seed)
        d = FirstOrderOp(2, Multivector.zero(LINE, 2), Multivector.basis(LINE, "x"))
        for _ in range(20):
            f = random_scalar(rng, LINE)
            g = random_scalar(rng, LINE)
            self.assertEqual(op_on_functions(d, f, g), f * g.derivative("x") - g * f.derivative("x"))

    def test_iterated_bracket_matches_operator_bracket(self):
        q, p = scalars(PLANE, ("q", "p"))
        d = FirstOrderOp.join(Multivector.basis(PLANE, "q", "p"), Multivector.basis(PLANE, "q"))
        # ⟦⟦D, f⟧¹, g⟧¹ = −{f, g}_D
        result = iterated_bracket(d, [q * p, p]).d0.as_scalar()
        self.assertEqual(result, -op_on_functions(d, q * p, p))

    def test_arity(self):
        with self.assertRaises(DegreeError):
            op_on_functions(FirstOrderOp.identity(PLANE))


class TestJacobiDifferential(unittest.TestCase):
    def test_jet(self):
        f = Scalar.variable(PLANE, "q") * Scalar.variable(PLANE, "p")
        j = jet(f)
        self.assertEqual(j.a0, DiffForm.basis(PLANE, "q") * Scalar.variable(PLANE, "p")
                         + DiffForm.basis(PLANE, "p") * Scalar.variable(PLANE, "q"))
        self.assertEqual(j.a1.as_scalar(), f)
        self.assertTrue(jacobi_differential(j).is_zero())

    def test_phi_is_closed(self):
        self.assertTrue(jacobi_differential(FormPair.phi(PLANE)).is_zero())

    def test_products(self):
        q, p = scalars(PLANE, ("q", "p"))
        product = FormPair.from_function(q) ^ FormPair.from_function(p)
        self.assertEqual(product, FormPair.from_function(q * p))
        phi = FormPair.phi(PLANE)
        self.assertEqual(phi ^ phi, FormPair.zero(PLANE, 2))

    def test_squares_to_zero(self):
        rng = random.Random(Settings.from_env().seed)
        for _ in range(40):
            alpha = random_form_pair(rng, GENERIC, rng.randint(0, 2))
            self.assertTrue(jacobi_differential(jacobi_differential(alpha)).is_zero())


if __name__ == '__main__':
    unittest.main()
