import math

import numpy as np
from django.test import SimpleTestCase

from coding_engine.bounds.rate_bounds import (
    SWEEP_COLUMNS,
    ChannelShape,
    RatePoint,
    bound_sweep,
    comparison_identities,
    entropy_q,
    f_q,
    rate_2lvl,
    rate_3lvl,
    rate_classical,
    rate_hpbe_closed,
    rate_pbe_gv,
    rate_pbe_hamming,
    rate_point,
    rate_point_hamming,
)
from coding_engine.channels.error_model import (
    AdmissibilityProfile,
    profile_hamming,
    profile_maxnorm,
    profile_subspace,
)
from coding_engine.exceptions import ParameterError

GRID = np.linspace(0.0, 1.0, 50)


def hamming_shape(T, W, q=2):
    return ChannelShape(q, W, profile_hamming(q, T))


class EntropyTest(SimpleTestCase):

    def test_values(self):
        self.assertAlmostEqual(entropy_q(2, 0.5), 1.0, places=12)
        self.assertAlmostEqual(entropy_q(3, 2 / 3), 1.0, places=12)
        self.assertEqual(entropy_q(2, 0.0), 0.0)
        self.assertAlmostEqual(entropy_q(4, 1.0), math.log(3, 4), places=12)

    def test_ball_exponent_saturates(self):
        self.assertAlmostEqual(f_q(2, 0.75), 1.0, places=12)
        self.assertAlmostEqual(f_q(3, 0.9), 1.0, places=12)
        self.assertAlmostEqual(f_q(2, 0.11), entropy_q(2, 0.11), places=12)

    def test_domain(self):
        with self.assertRaises(ParameterError):
            entropy_q(2, 1.5)
        with self.assertRaises(ParameterError):
            f_q(2, -0.1)
        with self.assertRaises(ParameterError):
            entropy_q(1, 0.5)


class RateFormulaTest(SimpleTestCase):

    def test_worked_values(self):
        classical, _ = rate_classical(2, 1 / 60)
        _, pbe_gv = rate_hpbe_closed(2, 0.2, 1 / 12)
        self.assertAlmostEqual(classical, 0.878, delta=1e-3)
        self.assertAlmostEqual(pbe_gv, 0.880, delta=1e-3)

        shape = hamming_shape(0.1, 0.2)
        self.assertAlmostEqual(rate_pbe_gv(shape), 0.81, delta=5e-3)
        self.assertAlmostEqual(rate_2lvl(shape), 0.71, delta=5e-3)
        self.assertAlmostEqual(rate_3lvl(shape), 0.76, delta=5e-3)

    def test_plotted_points(self):
        shape = hamming_shape(0.25, 0.1)
        self.assertAlmostEqual(rate_pbe_gv(shape), 0.8377443751081735, places=12)
        self.assertAlmostEqual(rate_pbe_hamming(shape), 0.9188721875540867, places=12)
        self.assertAlmostEqual(rate_2lvl(shape), 0.8, places=12)
        self.assertAlmostEqual(rate_3lvl(shape), 0.8188721875540868, places=12)
        self.assertAlmostEqual(rate_3lvl(hamming_shape(0.25, 0.5)), 0.09436093777043358, places=12)

    def test_closed_form_matches_profile_form(self):
        for T in GRID:
            for W in GRID:
                r_h, r_gv = rate_hpbe_closed(2, T, W)
                shape = hamming_shape(T, W)
                self.assertAlmostEqual(r_h, rate_pbe_hamming(shape), places=12)
                self.assertAlmostEqual(r_gv, rate_pbe_gv(shape), places=12)

    def test_no_burst_is_rate_one(self):
        self.assertEqual(rate_hpbe_closed(2, 0.3, 0.0), (1.0, 1.0))
        shape = hamming_shape(0.3, 0.0)
        self.assertAlmostEqual(rate_2lvl(shape), 1.0, places=12)
        self.assertAlmostEqual(rate_3lvl(shape), 1.0, places=12)

    def test_bad_with_bad_branch(self):
        profile = AdmissibilityProfile(0.1, 0.3, 0.2, 0.25, 0.4)
        self.assertFalse(profile.standard_case)
        shape = ChannelShape(5, 0.3, profile)
        self.assertAlmostEqual(rate_pbe_gv(shape), 1 - (0.7 * 0.2 + 0.3 * 0.4), places=12)

    def test_subspace_profile(self):
        shape = ChannelShape(2, 0.4, profile_subspace(0.1, 0.5))
        self.assertAlmostEqual(rate_pbe_hamming(shape), 1 - 0.6 * 0.1 - 0.4 * 0.5, places=12)

    def test_shape_validation(self):
        with self.assertRaises(ParameterError):
            hamming_shape(0.1, 1.2)
        with self.assertRaises(ParameterError):
            rate_classical(2, -0.1)


class RatePointTest(SimpleTestCase):

    def test_hamming_point(self):
        point = rate_point_hamming(2, 0.25, 0.1)
        classical_h, classical_gv = rate_classical(2, 0.025)
        self.assertAlmostEqual(point.r_classical_h, classical_h, places=12)
        self.assertAlmostEqual(point.r_classical_gv, classical_gv, places=12)
        self.assertAlmostEqual(point.r_gv, 0.8377443751081735, places=12)

    def test_clamped_view_keeps_raw_values(self):
        point = RatePoint(0.9, 0.8, 0.5, -0.05, -0.2, 0.1)
        clamped = point.clamped()
        self.assertEqual(clamped.r_gv, 0.0)
        self.assertEqual(clamped.r_2lvl, 0.0)
        self.assertEqual(clamped.r_3lvl, 0.1)
        self.assertEqual(point.r_gv, -0.05)

    def test_without_classical_fraction(self):
        point = rate_point(ChannelShape(7, 0.2, profile_maxnorm(7, 1, 2)))
        self.assertTrue(math.isnan(point.r_classical_h))
        self.assertFalse(math.isnan(point.r_3lvl))


class ComparisonIdentityTest(SimpleTestCase):

    def test_hamming_grid(self):
        for T in GRID:
            for W in GRID:
                report = comparison_identities(hamming_shape(T, W), T=T)
                self.assertTrue(report.ok, msg=f"T={T}, W={W}: {report}")

    def test_seam_continuity(self):
        for T in GRID:
            below = hamming_shape(T, 0.5)
            above = hamming_shape(T, np.nextafter(0.5, 1.0))
            self.assertAlmostEqual(rate_pbe_gv(below), rate_pbe_gv(above), delta=1e-12)
            self.assertAlmostEqual(rate_3lvl(below), rate_3lvl(above), delta=1e-12)
            self.assertAlmostEqual(rate_2lvl(below), rate_2lvl(above), delta=1e-12)

    def test_non_standard_profile(self):
        shape = ChannelShape(31, 0.3, AdmissibilityProfile(
            math.log(3, 31), math.log(5, 31), math.log(7, 31), math.log(9, 31), math.log(13, 31),
        ))
        report = comparison_identities(shape)
        self.assertTrue(report.ok)
        self.assertAlmostEqual(report.gv_minus_three, 0.3 * (math.log(9, 31) - math.log(7, 31)), places=12)
        self.assertIsNone(report.hamming_slack)

    def test_hamming_closed_forms_of_recipes(self):
        for q in (2, 3):
            for T in GRID:
                for W in GRID:
                    one, two = f_q(q, T), f_q(q, 2 * T)
                    if 2 * W <= 1:
                        expected_2lvl = 1 - 2 * W * two
                        expected_3lvl = 1 - W * (one + two)
                    else:
                        expected_2lvl = 1 - two
                        expected_3lvl = 1 - (1 - W) * one - W * two
                    shape = hamming_shape(T, W, q)
                    self.assertAlmostEqual(rate_2lvl(shape), expected_2lvl, delta=1e-12)
                    self.assertAlmostEqual(rate_3lvl(shape), expected_3lvl, delta=1e-12)

    def test_rates_are_ordered(self):
        for q in (2, 3):
            for T in GRID:
                for W in GRID:
                    point = rate_point_hamming(q, T, W)
                    self.assertLessEqual(point.r_2lvl, point.r_3lvl + 1e-12)
                    self.assertLessEqual(point.r_3lvl, point.r_gv + 1e-12)
                    self.assertLessEqual(point.r_gv, point.r_h + 1e-12)

    def test_three_level_never_below_two_level(self):
        for T in GRID:
            for W in GRID:
                shape = hamming_shape(T, W)
                self.assertGreaterEqual(rate_3lvl(shape) - rate_2lvl(shape), -1e-12)


class BoundSweepTest(SimpleTestCase):

    def test_columns_and_grid(self):
        frame = bound_sweep(2, 'fix-T', 0.25, 51)
        self.assertEqual(list(frame.columns), SWEEP_COLUMNS)
        self.assertEqual(len(frame), 51)
        self.assertAlmostEqual(frame['x'].iloc[-1], 1.0)
        row = frame[np.isclose(frame['x'], 0.5)].iloc[0]
        self.assertAlmostEqual(row['gv'], 0.18872, delta=1e-5)
        self.assertAlmostEqual(row['r3lvl'], 0.09436, delta=1e-5)

    def test_fixed_burst_fraction(self):
        frame = bound_sweep(2, 'fix-W', 0.3, 11)
        row = frame[np.isclose(frame['x'], 0.5)].iloc[0]
        self.assertAlmostEqual(row['gv'], 0.4, places=12)
        self.assertAlmostEqual(row['h'], 0.7, places=12)

    def test_error_free_channel(self):
        frame = bound_sweep(2, 'fix-T', 0.0, 5)
        for column in SWEEP_COLUMNS[1:]:
            self.assertTrue(np.allclose(frame[column], 1.0), msg=column)

    def test_rates_are_clamped_and_monotone(self):
        frame = bound_sweep(2, 'fix-T', 0.3, 21)
        for column in SWEEP_COLUMNS[1:]:
            self.assertTrue((frame[column] >= 0.0).all())
            self.assertTrue((np.diff(frame[column]) <= 1e-12).all(), msg=column)

    def test_deterministic(self):
        first = bound_sweep(2, 'fix-W', 0.2, 31).to_csv(index=False, float_format='%.12g')
        second = bound_sweep(2, 'fix-W', 0.2, 31, workers=1).to_csv(index=False, float_format='%.12g')
        self.assertEqual(first, second)

    def test_rejects_bad_requests(self):
        with self.assertRaises(ParameterError):
            bound_sweep(2, 'fix-Q', 0.2, 10)
        with self.assertRaises(ParameterError):
            bound_sweep(2, 'fix-T', 1.2, 10)
        with self.assertRaises(ParameterError):
            bound_sweep(2, 'fix-T', 0.2, 1)
