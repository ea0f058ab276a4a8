import io
import random
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pandas as pd

import main
from src.config import Settings
from src.errors import EvaluationError, ParseError
from src.exterior import DiffForm, Multivector
from src.frontend import Session, check_program, parse_program, print_canonical, run_program
from src.frontend.session import evaluate_text
from src.generators import random_form, random_form_pair, random_multivector, random_op, random_scalar
from src.ring import Chart, Scalar

EXAMPLES = Path(__file__).parent / "data" / "examples"
EXIT_CODES = {"canonical": 0, "contact": 0, "sphere": 0, "nambu": 1, "errors": 2, "syntax_error": 2}


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main.main(list(argv))
    return code, out.getvalue(), err.getvalue()


class TestGoldenFiles(unittest.TestCase):
    def test_run_matches_expected_output(self):
        for name, expected_code in EXIT_CODES.items():
            with self.subTest(script=name):
                code, out, _ = run_cli("run", str(EXAMPLES / f"{name}.pj"))
                expected = (EXAMPLES / f"{name}.out").read_text(encoding="utf-8")
                self.assertEqual(out.splitlines(), expected.splitlines())
                self.assertEqual(code, expected_code)

    def test_syntax_error_is_located(self):
        code, out, err = run_cli("run", str(EXAMPLES / "syntax_error.pj"))
        self.assertEqual(code, 2)
        self.assertEqual(out, "")
        self.assertIn("ligne 2", err)

    def test_missing_file(self):
        code, _, err = run_cli("run", str(EXAMPLES / "absent.pj"))
        self.assertEqual(code, 2)
        self.assertIn("Erreur", err)

    def test_check_mode_in_parallel(self):
        code, out, _ = run_cli("check", str(EXAMPLES / "errors.pj"), "--jobs", "2")
        self.assertEqual(code, 2)
        expected = (EXAMPLES / "errors.out").read_text(encoding="utf-8")
        self.assertEqual(out.splitlines(), expected.splitlines())

    def test_check_mode_report(self):
        with tempfile.TemporaryDirectory() as tmp:
            report = Path(tmp) / "report.csv"
            code, _, _ = run_cli("check", str(EXAMPLES / "nambu.pj"), "--report", str(report))
            self.assertEqual(code, 1)
            frame = pd.read_csv(report)
        self.assertEqual(list(frame["status"]), ["pass", "fail", "fail"])


class TestSession(unittest.TestCase):
    def test_outputs_and_status(self):
        lines, status = run_program("chart M(q, p)\n@p^@q\n1/2 q")
        self.assertEqual(lines, ["-1 @q^@p", "1/2 q"])
        self.assertEqual(status, 0)

    def test_typed_zero(self):
        lines, _ = run_program("chart M(x, y)\nsnbracket (@x^@y) (@x^@y)")
        self.assertEqual(lines, ["0 : deg 3"])

    def test_undefined_name(self):
        with self.assertRaises(EvaluationError) as ctx:
            run_program("chart M(x)\nY")
        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.token, "Y")

    def test_rebinding(self):
        with self.assertRaises(EvaluationError):
            run_program("chart M(x)\nA = @x\nA = x @x")

    def test_coordinate_names_are_reserved(self):
        with self.assertRaises(EvaluationError):
            run_program("chart M(x)\nx = @x")

    def test_output_before_error_is_emitted(self):
        emitted = []
        with self.assertRaises(EvaluationError):
            run_program("chart M(x)\n@x\nY", emit=emitted.append)
        self.assertEqual(emitted, ["1 @x"])

    def test_degenerate_contact_check_fails(self):
        lines, status = run_program("chart M(x, y, t) homog t\ncheck contact (t dx^dy)")
        self.assertEqual(status, 1)
        self.assertEqual(lines[0], "check contact (t dx^dy): fail")
        self.assertTrue(lines[1].startswith("  obstruction:"))

    def test_check_program_skips_plain_output(self):
        results = check_program("chart M(x, y)\n@x\ncheck poisson (@x^@y)")
        self.assertEqual([label for label, _ in results], ["check poisson (@x^@y)"])
        self.assertEqual(results[0][1].status, 0)


class TestParserAndPrinter(unittest.TestCase):
    def test_parse_error_position(self):
        with self.assertRaises(ParseError) as ctx:
            parse_program("chart M(x, y)\nL = @x^^@y")
        self.assertEqual(ctx.exception.line, 2)
        self.assertIsNotNone(ctx.exception.column)
        self.assertIn("ligne 2", str(ctx.exception))

    def test_statements_on_one_line(self):
        program = parse_program("chart M(x); A = @x  # commentaire")
        self.assertEqual(len(program.statements), 2)
        self.assertEqual(program.statements[1].column, 13)

    def test_printer(self):
        chart = Chart(("q", "p"))
        self.assertEqual(print_canonical(Multivector.basis(chart, "p", "q")), "-1 @q^@p")
        self.assertEqual(print_canonical(Multivector.zero(chart, 2)), "0 : deg 2")
        self.assertEqual(print_canonical(DiffForm.zero(chart, 2)), "0 : form 2")

    def test_term_order(self):
        chart = Chart(("q", "p", "t"))
        q, p = Scalar.variable(chart, "q"), Scalar.variable(chart, "p")
        self.assertEqual(print_canonical(p * p + q ** -1 + q * p + q * q), "1 q^2 + 1 q p + 1 p^2 + 1 q^-1")
        tensor = Multivector.basis(chart, "q", "t") + Multivector.basis(chart, "q", "p")
        self.assertEqual(print_canonical(tensor), "1 @q^@p + 1 @q^@t")


class TestRoundTrip(unittest.TestCase):
    def setUp(self):
        self.session = Session()
        self.session.declare_chart("M", ("x", "y", "t"), "t")
        self.chart = self.session.active_chart
        self.rng = random.Random(Settings.from_env().seed)

    def assert_round_trip(self, value):
        text = print_canonical(value)
        self.assertEqual(evaluate_text(self.session, text), value, text)

    def test_scalars(self):
        for _ in range(20):
            self.assert_round_trip(random_scalar(self.rng, self.chart))

    def test_tensors(self):
        for _ in range(20):
            degree = self.rng.randint(1, 3)
            self.assert_round_trip(random_multivector(self.rng, self.chart, degree))
            self.assert_round_trip(random_form(self.rng, self.chart, degree))

    def test_pairs(self):
        for _ in range(20):
            degree = self.rng.randint(1, 3)
            self.assert_round_trip(random_op(self.rng, self.chart, degree))
            self.assert_round_trip(random_form_pair(self.rng, self.chart, degree))

    def test_degree_zero_tensor_reads_back_as_scalar(self):
        value = Multivector.from_scalar(Scalar.variable(self.chart, "x"))
        self.assertEqual(evaluate_text(self.session, print_canonical(value)), Scalar.variable(self.chart, "x"))


if __name__ == '__main__':
    unittest.main()
