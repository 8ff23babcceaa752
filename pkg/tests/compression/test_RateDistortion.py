import math
import os
import tempfile
import unittest

import numpy as np
import pandas as pd

from app.compression.RateDistortion import (CompressionReport, rate_distortion_report, mean_squared_error, psnr,
                                            REPORT_COLUMNS)


class TestRateDistortion(unittest.TestCase):

    def setUp(self):
        self.reports = [
            CompressionReport(25, 1000, 90, 4, 30.0),
            CompressionReport(100, 1000, 1000, 4, 0.0),
            CompressionReport(50, 1000, 150, 4, 12.0),
        ]

    def test_psnr(self):
        self.assertEqual(psnr(0.0), math.inf)
        self.assertAlmostEqual(psnr(255.0 ** 2), 0.0)
        self.assertAlmostEqual(psnr(1.0), 48.1308, places=3)

    def test_mean_squared_error(self):
        a = np.zeros((2, 2, 3), dtype=np.uint8)
        b = np.full((2, 2, 3), 2, dtype=np.uint8)
        self.assertEqual(mean_squared_error(a, b), 4.0)

    def test_report(self):
        report = self.reports[1]
        self.assertTrue(report.lossless)
        self.assertEqual(report.psnr_db, math.inf)
        with self.assertRaises(ValueError):
            CompressionReport(50, 10, 0, 1, 1.0)
        with self.assertRaises(ValueError):
            CompressionReport(50, 10, 10, 0, 1.0)

    def test_sorted_by_quality(self):
        table = rate_distortion_report(self.reports)
        self.assertEqual(table.rows["quality"].tolist(), [100, 50, 25])
        self.assertEqual(table.violations, [])
        self.assertIn("lossless", table.to_text())

    def test_single_report(self):
        table = rate_distortion_report([self.reports[0]])
        self.assertEqual(len(table.rows), 1)
        self.assertEqual(table.violations, [])

    def test_violations_are_flagged(self):
        reports = [CompressionReport(50, 1000, 100, 4, 12.0), CompressionReport(25, 1000, 120, 4, 10.0)]
        with self.assertLogs("app.compression.RateDistortion", level="WARNING"):
            table = rate_distortion_report(reports)
        self.assertEqual(len(table.violations), 2)
        self.assertIn("! rate increases", table.to_text())

    def test_empty(self):
        with self.assertRaises(ValueError):
            rate_distortion_report([])

    def test_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "rate_distortion.csv")
            rate_distortion_report(self.reports).to_csv(path)
            frame = pd.read_csv(path)
        self.assertEqual(list(frame.columns), REPORT_COLUMNS)
        self.assertEqual(frame["output_bytes"].tolist(), [1000, 150, 90])


if __name__ == '__main__':
    unittest.main()
