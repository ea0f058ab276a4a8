import os
import unittest
from unittest import mock

import pandas as pd

from src.analysis import (ERROR, FAIL, IDENTITIES, PASS, CheckReport, aggregate_status, reports_to_frame,
                          run_identity, run_identity_suite)
from src.config import DEFAULT_MAX_DEGREE, DEFAULT_SAMPLES, DEFAULT_SEED, Settings


class TestIdentitySuite(unittest.TestCase):
    """Population par défaut : 200 échantillons par identité, tenseurs jusqu'au degré 3 (lent)."""

    def setUp(self):
        self.settings = Settings(seed=Settings.from_env().seed)

    def test_all_identities_hold(self):
        self.assertEqual(self.settings.samples, DEFAULT_SAMPLES)
        self.assertEqual(self.settings.max_degree, DEFAULT_MAX_DEGREE)
        reports = run_identity_suite(self.settings)
        self.assertEqual([r.name for r in reports], [name for name, _ in IDENTITIES])
        for report in reports:
            with self.subTest(identity=report.name):
                self.assertEqual(report.status, PASS, report.witness or report.detail)
                self.assertEqual(report.samples, 200)
        self.assertEqual(aggregate_status(reports), 0)


class TestIdentityRunner(unittest.TestCase):
    def setUp(self):
        self.settings = Settings.from_env().override(samples=8, max_degree=2)

    def test_only_selected(self):
        reports = run_identity_suite(self.settings, ["d-squared", "sn-jacobi"])
        self.assertEqual([r.name for r in reports], ["sn-jacobi", "d-squared"])

    def test_deterministic(self):
        first = run_identity("sj-jacobi", dict(IDENTITIES)["sj-jacobi"], self.settings)
        second = run_identity("sj-jacobi", dict(IDENTITIES)["sj-jacobi"], self.settings)
        self.assertEqual(first, second)

    def test_failure_stops_at_witness(self):
        report = run_identity("toujours-faux", lambda rng, settings: "témoin", self.settings)
        self.assertEqual(report.status, FAIL)
        self.assertEqual(report.witness, "témoin")
        self.assertEqual(report.samples, 1)


class TestReports(unittest.TestCase):
    def test_aggregate_status(self):
        self.assertEqual(aggregate_status([]), 0)
        self.assertEqual(aggregate_status([CheckReport("a", PASS), CheckReport("b", FAIL)]), 1)
        self.assertEqual(aggregate_status([CheckReport("a", FAIL), CheckReport("b", ERROR)]), 2)

    def test_frame(self):
        frame = reports_to_frame([CheckReport("a", PASS, samples=3), CheckReport("b", FAIL, witness="w")])
        self.assertIsInstance(frame, pd.DataFrame)
        self.assertEqual(list(frame.columns), ["name", "status", "samples", "witness", "detail"])
        self.assertEqual(list(frame["status"]), [PASS, FAIL])

    def test_empty_frame(self):
        self.assertEqual(len(reports_to_frame([])), 0)


class TestSettings(unittest.TestCase):
    def test_defaults(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            settings = Settings.from_env()
        self.assertEqual(settings.seed, DEFAULT_SEED)
        self.assertEqual(settings.log_level, "WARNING")

    def test_environment_and_override(self):
        with mock.patch.dict(os.environ, {"PJCALC_SAMPLES": "5", "PJCALC_LOG_LEVEL": "debug"}):
            settings = Settings.from_env()
        self.assertEqual(settings.samples, 5)
        self.assertEqual(settings.log_level, "DEBUG")
        self.assertEqual(settings.override(samples=9, seed=None).samples, 9)
        self.assertEqual(settings.override(seed=None).seed, settings.seed)

    def test_invalid_integer(self):
        with mock.patch.dict(os.environ, {"PJCALC_SEED": "abc"}):
            with self.assertRaises(ValueError):
                Settings.from_env()


if __name__ == '__main__':
    unittest.main()
