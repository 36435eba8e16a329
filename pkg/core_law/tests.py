import math
import random

import numpy as np
from django.test import SimpleTestCase

from common.exceptions import DomainError, NoSolutionError

from .law import (
    NOT_GROWING,
    BoundsReport,
    ElementProbabilities,
    SymmetricSystemSpec,
    bounds,
    k_lower,
    k_upper,
    lambda_max,
    lambda_min,
    lifetime_bounds,
    lifetime_reliability,
    p_mean,
    p_mid,
    reliability_from_lambda,
    relevance,
)
from .oracle import exact_operating_probability, operating_count_pmf, symmetric_system_operating_probability
from .solver import meets_target, required_coverage


class DivergenceTests(SimpleTestCase):
    def test_k_upper_vanishes_at_equal_arguments(self):
        self.assertEqual(k_upper(0.25, 0.25), 0.0)
        self.assertEqual(k_lower(0.3, 0.3), 0.0)

    def test_k_upper_values(self):
        self.assertAlmostEqual(k_upper(0.2, 0.25), 0.0070003, delta=1e-6)
        self.assertAlmostEqual(k_upper(0.4, 0.25), 0.054116, delta=1e-6)

    def test_k_lower_values(self):
        self.assertAlmostEqual(k_lower(0.5, 0.25), 0.14384, delta=1e-5)
        self.assertAlmostEqual(k_lower(0.55, 0.25), 0.20378, delta=1e-5)

    def test_divergence_rejects_closed_endpoints(self):
        for c, p in [(0.0, 0.25), (1.0, 0.25), (0.3, 0.0), (0.3, 1.0), (-0.1, 0.2)]:
            with self.assertRaises(DomainError):
                k_upper(c, p)

    def test_gibbs_inequality_on_random_pairs(self):
        rng = random.Random(20)
        for _ in range(2000):
            c = rng.uniform(1e-6, 1 - 1e-6)
            p = rng.uniform(1e-6, 1 - 1e-6)
            self.assertGreaterEqual(k_upper(c, p), 0.0)
            if abs(c - p) > 1e-3:
                self.assertGreater(k_upper(c, p), 0.0)

    def test_close_arguments_keep_their_digits(self):
        # 1e12 * k(1.0032e-6 || 1e-6), the four-sigma operating point
        self.assertAlmostEqual(k_upper(1.0032e-6, 1e-6) * 1e12, 5.11, delta=0.05)

    def test_series_branch_matches_leading_term(self):
        p = 1e-6
        for relative in (1e-8, 1e-6, 5e-5):
            c = p * (1 + relative)
            delta = c - p
            leading = delta * delta / (2 * p * (1 - p))
            self.assertAlmostEqual(k_upper(c, p) / leading, 1.0, delta=1e-4)

    def test_series_and_log_forms_meet_at_the_threshold(self):
        p = 0.01
        below = k_upper(p * (1 + 0.99e-4), p)
        above = k_upper(p * (1 + 1.01e-4), p)
        self.assertLess(below, above)
        self.assertAlmostEqual(above / below, (1.01 / 0.99) ** 2, delta=1e-4)


class ProbabilityStatisticTests(SimpleTestCase):
    def test_p_mid(self):
        self.assertAlmostEqual(p_mid(0.3, 0.3), 0.3)
        self.assertAlmostEqual(p_mid(0.1, 0.4), 0.142857, delta=1e-6)
        self.assertAlmostEqual(p_mid(0.05, 0.45), 0.05 / 0.6)

    def test_p_mid_constraints(self):
        with self.assertRaises(DomainError):
            p_mid(0.1, 0.5)
        with self.assertRaises(DomainError):
            p_mid(0.3, 0.2)

    def test_p_mean(self):
        self.assertAlmostEqual(p_mean([0.2, 0.2, 0.05, 0.45], 4), 0.225)
        self.assertEqual(p_mean([0.5], 1), 0.5)
        for s0 in (2, 7, 1000):
            self.assertAlmostEqual(p_mean([1 / s0] * s0, s0), 1 / s0)

    def test_p_mean_outside_unit_interval(self):
        with self.assertRaises(DomainError):
            p_mean([0.9, 0.9], 1)
        with self.assertRaises(DomainError):
            p_mean([0.2], 0)

    def test_element_probabilities_statistics(self):
        probs = ElementProbabilities((0.2, 0.2, 0.05, 0.45))
        self.assertEqual(probs.length, 4)
        self.assertEqual(probs.p_lower, 0.05)
        self.assertEqual(probs.p_upper, 0.45)
        self.assertAlmostEqual(probs.p_mid, 0.05 / 0.6)
        self.assertAlmostEqual(probs.mean, 0.225)

    def test_element_probabilities_reject_bad_values(self):
        with self.assertRaises(DomainError):
            ElementProbabilities(())
        with self.assertRaises(DomainError):
            ElementProbabilities((0.2, 1.0))

    def test_symmetric_system_spec(self):
        self.assertEqual(SymmetricSystemSpec(20, 11).coverage, 0.55)
        with self.assertRaises(DomainError):
            SymmetricSystemSpec(5, 5)


class IntensityTests(SimpleTestCase):
    def test_lambda_max_values(self):
        self.assertAlmostEqual(lambda_max(20, 0.55, 0.25), 0.017132, delta=1e-5)
        self.assertAlmostEqual(lambda_max(20, 0.50, 0.25), 0.05796, delta=1e-4)

    def test_lambda_max_not_growing_up_to_threshold(self):
        self.assertIs(lambda_max(20, 0.25, 0.25), NOT_GROWING)
        self.assertIs(lambda_max(20, 0.1, 0.25), NOT_GROWING)
        self.assertIs(lambda_max(20, 0.0, 0.25), NOT_GROWING)

    def test_lambda_max_accepts_huge_counts(self):
        value = lambda_max(10 ** 12, 1.0032e-6, 1e-6)
        self.assertGreater(value, 0.0)
        self.assertLess(value, 0.00621)

    def test_lambda_max_monotone_in_coverage_and_size(self):
        rng = random.Random(7)
        for _ in range(1000):
            n = rng.randint(2, 5000)
            p_s = rng.uniform(0.01, 0.49)
            c1, c2 = sorted(rng.uniform(p_s + 1e-3, 1.0) for _ in range(2))
            first, second = lambda_max(n, c1, p_s), lambda_max(n, c2, p_s)
            self.assertGreaterEqual(first, second)
            if second > 1e-300 and c2 - c1 > 1e-4:
                self.assertGreater(first, second)
            self.assertGreaterEqual(lambda_max(n, c1, p_s), lambda_max(n + 1, c1, p_s))

    def test_threshold_law_on_random_pairs(self):
        rng = random.Random(11)
        for _ in range(1000):
            n = rng.randint(1, 10 ** 6)
            p_s = rng.uniform(0.01, 0.49)
            self.assertIs(lambda_max(n, rng.uniform(0.0, p_s), p_s), NOT_GROWING)
            self.assertIs(lambda_max(n, p_s, p_s), NOT_GROWING)
            self.assertEqual(relevance(n, p_s, p_s), 0.0)
            just_above = lambda_max(n, p_s * (1 + 1e-12), p_s)
            self.assertTrue(math.isfinite(just_above))
            self.assertGreater(just_above, 0.0)
            self.assertGreaterEqual(just_above, lambda_max(n, rng.uniform(p_s + 1e-3, 1.0), p_s))

    def test_intensity_is_finite_just_above_the_threshold(self):
        c = 0.25 + 1e-9
        for n in (1, 20, 10 ** 12):
            value = lambda_max(n, c, 0.25)
            self.assertTrue(math.isfinite(value))
            self.assertGreater(value, lambda_max(n, c + 1e-9, 0.25))
        self.assertTrue(math.isfinite(lambda_min(1, c, 0.25)))
        report = bounds(20, c, 0.25)
        self.assertIsInstance(report, BoundsReport)
        self.assertAlmostEqual(report.lambda_min, report.lambda_max)

    def test_lambda_min_coincides_without_o_term(self):
        self.assertAlmostEqual(lambda_min(20, 0.55, 0.25), lambda_max(20, 0.55, 0.25))

    def test_lambda_min_with_smaller_mid_probability(self):
        self.assertLess(lambda_min(20, 0.55, 0.05 / 0.6), lambda_max(20, 0.55, 0.25))

    def test_lambda_min_rejects_log_argument_above_one(self):
        with self.assertRaises(DomainError):
            lambda_min(20, 0.55, 0.25, 0.5)

    def test_lambda_min_with_small_o_constant(self):
        base = lambda_min(20, 0.55, 0.25)
        self.assertLess(lambda_min(20, 0.55, 0.25, 0.001), base)

    def test_bounds_report(self):
        report = bounds(20, 0.55, 0.25, 0.05 / 0.6)
        self.assertIsInstance(report, BoundsReport)
        self.assertLessEqual(report.lambda_min, report.lambda_max)
        self.assertLessEqual(report.reliability_min, report.reliability_max)
        self.assertAlmostEqual(report.reliability_min, math.exp(-report.lambda_max))

    def test_bounds_not_growing(self):
        self.assertIs(bounds(20, 0.2, 0.25), NOT_GROWING)

    def test_bounds_report_order(self):
        with self.assertRaises(DomainError):
            BoundsReport(lambda_min=0.2, lambda_max=0.1)

    def test_reliability_from_lambda(self):
        self.assertEqual(reliability_from_lambda(0.0), 1.0)
        self.assertAlmostEqual(reliability_from_lambda(0.05), 0.95123, delta=1e-5)
        self.assertAlmostEqual(reliability_from_lambda(0.00621), 0.99381, delta=1e-5)
        with self.assertRaises(DomainError):
            reliability_from_lambda(-0.1)


class RelevanceTests(SimpleTestCase):
    def test_content_example_values(self):
        self.assertAlmostEqual(relevance(20, 0.2, 0.25), 0.1306, delta=5e-4)
        self.assertAlmostEqual(relevance(20, 0.4, 0.25), 0.6611, delta=5e-4)
        self.assertGreaterEqual(relevance(20, 0.8, 0.25), 0.9999)

    def test_relevance_vanishes_at_the_semantic_mean(self):
        self.assertEqual(relevance(20, 0.25, 0.25), 0.0)

    def test_relevance_limits_at_the_endpoints(self):
        self.assertAlmostEqual(relevance(20, 0.0, 0.25), 1 - 0.75 ** 20)
        self.assertAlmostEqual(relevance(20, 1.0, 0.25), 1 - 0.25 ** 20)


class LifetimeTests(SimpleTestCase):
    def test_lifetime_reliability(self):
        self.assertEqual(lifetime_reliability([1, 1, 1]), 1.0)
        self.assertAlmostEqual(lifetime_reliability([0.9, 0.9]), 0.81)
        self.assertEqual(lifetime_reliability([]), 1.0)

    def test_lifetime_bounds(self):
        lower, upper = lifetime_bounds([0.9, 0.9])
        self.assertAlmostEqual(lower, 0.8)
        self.assertAlmostEqual(upper, 0.8187, delta=1e-4)
        self.assertEqual(lifetime_bounds([1, 1]), (1.0, 1.0))
        lower, upper = lifetime_bounds([0.5, 0.5, 0.5])
        self.assertAlmostEqual(lower, -0.5)
        self.assertAlmostEqual(upper, 0.2231, delta=1e-4)

    def test_sandwich_on_random_vectors(self):
        rng = random.Random(64)
        for _ in range(10_000):
            probs = [rng.random() for _ in range(rng.randint(1, 64))]
            lower, upper = lifetime_bounds(probs)
            product = lifetime_reliability(probs)
            self.assertLessEqual(lower, product + 1e-12)
            self.assertLessEqual(product, upper + 1e-12)

    def test_lifetime_rejects_out_of_range(self):
        with self.assertRaises(DomainError):
            lifetime_reliability([0.5, 1.5])


class OracleTests(SimpleTestCase):
    def test_small_examples(self):
        self.assertAlmostEqual(exact_operating_probability([0.4], 0), 0.4)
        self.assertAlmostEqual(exact_operating_probability([0.5, 0.5, 0.5], 1), 0.5)
        self.assertAlmostEqual(exact_operating_probability([0.3, 0.6], 0), 0.72)

    def test_enumeration_agrees_with_dp(self):
        rng = np.random.default_rng(2021)
        for _ in range(500):
            n = int(rng.integers(1, 21))
            probs = rng.uniform(0.01, 0.99, size=n).tolist()
            degree = int(rng.integers(0, n))
            by_dp = exact_operating_probability(probs, degree, method='dp')
            by_enumeration = exact_operating_probability(probs, degree, method='enumeration')
            self.assertAlmostEqual(by_dp, by_enumeration, delta=1e-10)

    def test_enumeration_at_its_size_limit(self):
        probs = np.linspace(0.05, 0.95, 20).tolist()
        self.assertAlmostEqual(
            exact_operating_probability(probs, 9, method='dp'),
            exact_operating_probability(probs, 9, method='enumeration'),
            delta=1e-10,
        )

    def test_monotone_in_degree_and_probabilities(self):
        rng = np.random.default_rng(5)
        probs = rng.uniform(0.05, 0.45, size=15).tolist()
        tails = [exact_operating_probability(probs, d) for d in range(15)]
        self.assertTrue(all(a >= b for a, b in zip(tails, tails[1:])))
        raised = list(probs)
        raised[3] += 0.3
        self.assertGreaterEqual(exact_operating_probability(raised, 6), exact_operating_probability(probs, 6))

    def test_pmf_sums_to_one(self):
        pmf = operating_count_pmf([0.2, 0.7, 0.5, 0.1])
        self.assertEqual(pmf.size, 5)
        self.assertAlmostEqual(math.fsum(pmf), 1.0)

    def test_symmetric_system_is_a_binomial_tail(self):
        system = SymmetricSystemSpec(10, 6)
        expected = math.fsum(math.comb(10, k) * 0.3 ** k * 0.7 ** (10 - k) for k in range(7, 11))
        self.assertAlmostEqual(symmetric_system_operating_probability(system, 0.3), expected, delta=1e-12)

    def test_domain_errors(self):
        with self.assertRaises(DomainError):
            exact_operating_probability([0.3, 0.4], 2)
        with self.assertRaises(DomainError):
            exact_operating_probability([0.3] * 21, 3, method='enumeration')
        with self.assertRaises(DomainError):
            exact_operating_probability([0.3, 0.4], 0, method='sampling')


class RequiredCoverageTests(SimpleTestCase):
    def test_enough_sigma_flowchart(self):
        self.assertEqual(required_coverage(20, 0.25, 0.05), 11)

    def test_four_sigma_big_system(self):
        self.assertAlmostEqual(required_coverage(10 ** 12, 1e-6, 0.00621), 1_003_200, delta=100)

    def test_enough_to_four_sigma_effort_ratio(self):
        four = required_coverage(10 ** 12, 1e-6, 0.00621)
        enough = required_coverage(10 ** 12, 1e-6, 1e-12)
        self.assertAlmostEqual(enough / four, 1.0042, delta=5e-4)

    def test_unreachable_target(self):
        with self.assertRaises(NoSolutionError):
            required_coverage(20, 0.25, 1e-30)

    def test_invalid_inputs(self):
        with self.assertRaises(DomainError):
            required_coverage(0, 0.25, 0.05)
        with self.assertRaises(DomainError):
            required_coverage(20, 0.25, 0.0)

    def test_minimality_on_random_targets(self):
        rng = random.Random(11)
        checked = 0
        while checked < 300:
            n = rng.randint(4, 10 ** 6)
            s0 = rng.randint(3, min(n, 1000))
            p_s = 1 / s0
            target = 10 ** rng.uniform(-9, -0.5)
            try:
                tested = required_coverage(n, p_s, target)
            except NoSolutionError:
                continue
            self.assertTrue(meets_target(n, tested, p_s, target))
            self.assertFalse(meets_target(n, tested - 1, p_s, target))
            self.assertGreater(tested, n * p_s)
            checked += 1
