import json
import os
import random
import tempfile

from django.test import SimpleTestCase

from common.exceptions import DomainError, SchemaError, UnboundedCountError

from .matrix import (
    SemanticType,
    SiteMatrix,
    SiteParameter,
    SiteProbabilityProfile,
    blackbox_sensitive_sites,
    blackbox_tests,
    effective_total_sites,
    extrapolated_coverage,
    initial_semantic_mean,
    sensitive_sites,
    tau_unit,
    total_sites,
)
from .serializers import dump_matrix, load_matrix, parse_matrix


def parameter(name, *counts):
    return SiteParameter(name, tuple(SemanticType(f'{name}{i}', count) for i, count in enumerate(counts)))


class CountingRuleTests(SimpleTestCase):
    def test_total_sites(self):
        self.assertEqual(total_sites(SiteMatrix((parameter('x', 3),))), 3)
        self.assertEqual(total_sites(SiteMatrix((parameter('x', 1, 2), parameter('y', 4)))), 12)
        self.assertEqual(total_sites(SiteMatrix(tuple(parameter(f'x{i}', 10) for i in range(3)))), 1000)

    def test_sensitive_sites(self):
        self.assertEqual(sensitive_sites(SiteMatrix((parameter('x', 1, 1), parameter('y', 2, 3)))), 4)
        self.assertEqual(sensitive_sites(SiteMatrix((parameter('branch', 1, 1, 1, 1),))), 4)
        matrix = SiteMatrix((parameter('x', 1, 1, 1), parameter('y', 5), parameter('z', 2, 2)))
        self.assertEqual(sensitive_sites(matrix), 6)

    def test_sensitive_never_exceeds_total(self):
        rng = random.Random(3)
        for _ in range(500):
            params = tuple(
                parameter(f'x{i}', *(rng.randint(1, 6) for _ in range(rng.randint(1, 4))))
                for i in range(rng.randint(1, 5))
            )
            matrix = SiteMatrix(params)
            self.assertLessEqual(sensitive_sites(matrix), total_sites(matrix))

    def test_unbounded_count(self):
        matrix = SiteMatrix(tuple(parameter(f'x{i}', 10 ** 6) for i in range(4)))
        with self.assertRaises(UnboundedCountError):
            total_sites(matrix)

    def test_override_total_sites(self):
        matrix = SiteMatrix((parameter('branch', 1, 1, 1, 1),), override_total_sites=20)
        self.assertEqual(effective_total_sites(matrix), 20)
        with self.assertRaises(DomainError):
            SiteMatrix((parameter('branch', 1, 1, 1, 1),), override_total_sites=3)

    def test_empty_parts_rejected(self):
        with self.assertRaises(DomainError):
            SemanticType('t', 0)
        with self.assertRaises(DomainError):
            SiteParameter('x', ())
        with self.assertRaises(DomainError):
            SiteMatrix(())


class SemanticMeanTests(SimpleTestCase):
    def test_initial_semantic_mean(self):
        matrix = SiteMatrix((parameter('branch', 1, 1, 1, 1),))
        self.assertEqual(initial_semantic_mean(matrix), 0.25)
        self.assertEqual(initial_semantic_mean(matrix) * sensitive_sites(matrix), 1.0)

    def test_big_system_mean(self):
        matrix = SiteMatrix((parameter('x', *[1] * 1000), parameter('y', *[1] * 1000)))
        self.assertAlmostEqual(initial_semantic_mean(matrix), 1e-6, delta=1e-18)

    def test_two_sites_are_rejected(self):
        with self.assertRaises(DomainError):
            initial_semantic_mean(SiteMatrix((parameter('x', 1, 1),)))

    def test_blackbox_sensitive_sites(self):
        self.assertEqual(blackbox_sensitive_sites(10 ** 12), 10 ** 6)
        self.assertEqual(blackbox_sensitive_sites(400), 20)
        self.assertEqual(blackbox_sensitive_sites(20), 4)
        self.assertEqual(blackbox_sensitive_sites(30), 5)
        self.assertEqual(blackbox_sensitive_sites(31), 6)
        with self.assertRaises(DomainError):
            blackbox_sensitive_sites(3)

    def test_blackbox_fixed_point(self):
        for n in (16, 100, 1000, 12345, 10 ** 12):
            s0 = blackbox_sensitive_sites(n)
            self.assertAlmostEqual(1 / s0, s0 / n, delta=2 / s0 ** 2 + 1e-15)

    def test_tau_unit(self):
        self.assertEqual(tau_unit(20), 0.05)
        self.assertEqual(tau_unit(10 ** 12), 1e-12)
        self.assertEqual(tau_unit(1), 1.0)
        self.assertAlmostEqual(tau_unit(1e30), 1e-30, delta=1e-45)
        with self.assertRaises(DomainError):
            tau_unit(0)


class ProfileTests(SimpleTestCase):
    flowchart = (0.2, 0.2, 0.05, 0.45)

    def test_extrapolated_coverage(self):
        self.assertAlmostEqual(extrapolated_coverage(SiteProbabilityProfile(self.flowchart, 20)), 0.7)
        self.assertAlmostEqual(extrapolated_coverage(SiteProbabilityProfile((0.5, 0.5), 4)), 0.5)
        epsilon = 0.01
        profile = SiteProbabilityProfile((0.1 + epsilon,) * 5, 10)
        self.assertAlmostEqual(extrapolated_coverage(profile), 5 * epsilon)

    def test_extrapolated_coverage_is_order_free(self):
        rng = random.Random(9)
        shuffled = list(self.flowchart)
        for _ in range(10):
            rng.shuffle(shuffled)
            self.assertAlmostEqual(
                extrapolated_coverage(SiteProbabilityProfile(tuple(shuffled), 20)),
                extrapolated_coverage(SiteProbabilityProfile(self.flowchart, 20)),
                places=12,
            )

    def test_extrapolated_coverage_below_the_floor(self):
        with self.assertRaises(DomainError):
            extrapolated_coverage(SiteProbabilityProfile((0.2, 0.01), 20))
        with self.assertRaises(DomainError):
            extrapolated_coverage(SiteProbabilityProfile((0.9, 0.9), 4))

    def test_profile_statistics(self):
        profile = SiteProbabilityProfile(self.flowchart, 20)
        self.assertEqual(profile.sensitive_sites, 4)
        self.assertAlmostEqual(profile.semantic_mean, 0.225)
        self.assertAlmostEqual(profile.mid_probability, 0.05 / 0.6)

    def test_profile_rejects_bad_probability(self):
        with self.assertRaises(DomainError):
            SiteProbabilityProfile((0.2, 1.0), 20)

    def test_matrix_profile_length_must_match(self):
        with self.assertRaises(DomainError):
            SiteMatrix((parameter('branch', 1, 1, 1, 1),), site_probabilities=(0.2, 0.3))
        matrix = SiteMatrix((parameter('branch', 1, 1, 1, 1),), 20, self.flowchart)
        self.assertEqual(matrix.profile.total_sites, 20)

    def test_blackbox_tests(self):
        self.assertEqual(blackbox_tests(11, 3), 8)
        with self.assertRaises(DomainError):
            blackbox_tests(11, 12)


class MatrixFileTests(SimpleTestCase):
    def flowchart_payload(self):
        return {
            'parameters': [
                {
                    'name': 'y',
                    'types': [{'name': f'y{i}', 'values': 1} for i in range(1, 5)],
                },
            ],
            'override_total_sites': 20,
            'site_probabilities': [0.2, 0.2, 0.05, 0.45],
        }

    def test_parse_matrix(self):
        matrix = parse_matrix(self.flowchart_payload())
        self.assertEqual(sensitive_sites(matrix), 4)
        self.assertEqual(effective_total_sites(matrix), 20)
        self.assertAlmostEqual(extrapolated_coverage(matrix.profile), 0.7)

    def test_error_names_the_offending_type(self):
        payload = self.flowchart_payload()
        payload['parameters'][0]['types'][1]['values'] = 0
        with self.assertRaises(SchemaError) as ctx:
            parse_matrix(payload)
        self.assertEqual(ctx.exception.path, 'parameters.0.types.1.values')

    def test_error_names_the_offending_probability(self):
        payload = self.flowchart_payload()
        payload['site_probabilities'][2] = 1.5
        with self.assertRaises(SchemaError) as ctx:
            parse_matrix(payload)
        self.assertEqual(ctx.exception.path, 'site_probabilities.2')

    def test_missing_parameters(self):
        with self.assertRaises(SchemaError) as ctx:
            parse_matrix({})
        self.assertEqual(ctx.exception.path, 'parameters')

    def test_domain_violation_becomes_schema_error(self):
        payload = self.flowchart_payload()
        payload['override_total_sites'] = 2
        with self.assertRaises(SchemaError):
            parse_matrix(payload)

    def test_load_and_dump(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'matrix.json')
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(self.flowchart_payload(), f)
            matrix = load_matrix(path)
        self.assertEqual(parse_matrix(json.loads(dump_matrix(matrix))), matrix)

    def test_load_invalid_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'matrix.json')
            with open(path, 'w', encoding='utf-8') as f:
                f.write('{"parameters": [')
            with self.assertRaises(SchemaError):
                load_matrix(path)

    def test_load_invalid_utf8(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'matrix.json')
            with open(path, 'wb') as f:
                f.write(b'{"parameters": [{"name": "\xff"}]}')
            with self.assertRaises(SchemaError) as ctx:
                load_matrix(path)
        self.assertIn('UTF-8', str(ctx.exception))
