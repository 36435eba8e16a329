import csv
import io
import json
import os
import tempfile

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from config.constants import EXIT_DOMAIN, EXIT_IO, EXIT_USAGE
from core_law.law import lambda_max

from .curves import CURVE_HEADER, CurveRequest, curve_rows

CONTENT_EXAMPLE = 'MYY KY KA PE KY ' * 4


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def call(self, name, *args):
        out, err = io.StringIO(), io.StringIO()
        call_command(name, *args, stdout=out, stderr=err)
        return out.getvalue()

    def call_json(self, name, *args):
        return json.loads(self.call(name, *args, '--json'))

    def assertExitCode(self, code, name, *args):
        with self.assertRaises(CommandError) as ctx:
            self.call(name, *args)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception

    def write(self, filename, content):
        path = os.path.join(self.tmp, filename)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(content)
        return path

    def write_bytes(self, filename, content):
        path = os.path.join(self.tmp, filename)
        with open(path, 'wb') as f:
            f.write(content)
        return path


class BoundsCommandTests(CommandTestCase):
    def test_flowchart_point(self):
        output = self.call('bounds', '--n', '20', '--coverage', '0.55', '--semantic-mean', '0.25')
        self.assertIn('lambda_max   0.01713', output)
        self.assertIn('reliability  [0.983', output)

    def test_json_keeps_full_precision(self):
        data = self.call_json('bounds', '--n', '20', '--coverage', '0.55', '--semantic-mean', '0.25')
        self.assertAlmostEqual(data['bounds']['lambda_max'], 0.017132, delta=1e-6)
        self.assertEqual(data['bounds']['lambda_max'], lambda_max(20, 0.55, 0.25))

    def test_mid_probability_widens_the_interval(self):
        data = self.call_json(
            'bounds', '--n', '20', '--coverage', '0.55', '--semantic-mean', '0.25', '--mid-probability', '0.0833',
        )
        self.assertLess(data['bounds']['lambda_min'], data['bounds']['lambda_max'])

    def test_not_growing_notice(self):
        output = self.call('bounds', '--n', '20', '--coverage', '0.2', '--semantic-mean', '0.25')
        self.assertIn('NOT_GROWING', output)
        data = self.call_json('bounds', '--n', '20', '--coverage', '0.2', '--semantic-mean', '0.25')
        self.assertEqual(data['bounds'], 'NOT_GROWING')

    def test_just_above_the_threshold(self):
        data = self.call_json('bounds', '--n', '1', '--coverage', '0.2500000001', '--semantic-mean', '0.25')
        self.assertGreater(data['bounds']['lambda_max'], 0.0)
        self.assertGreater(data['bounds']['lambda_min'], 0.0)

    def test_scientific_notation_count(self):
        data = self.call_json('bounds', '--n', '1e12', '--coverage', '1.0032e-6', '--semantic-mean', '1e-6')
        self.assertLess(data['bounds']['lambda_max'], 0.00621)

    def test_usage_errors(self):
        self.assertExitCode(EXIT_USAGE, 'bounds', '--n', '20', '--coverage', '1.5', '--semantic-mean', '0.25')
        self.assertExitCode(EXIT_USAGE, 'bounds', '--n', '2.5', '--coverage', '0.5', '--semantic-mean', '0.25')
        self.assertExitCode(EXIT_USAGE, 'bounds', '--coverage', '0.5', '--semantic-mean', '0.25')

    def test_domain_error(self):
        self.assertExitCode(
            EXIT_DOMAIN,
            'bounds', '--n', '20', '--coverage', '0.55', '--semantic-mean', '0.25', '--o-constant', '0.5',
        )


class PlanCommandTests(CommandTestCase):
    def test_big_blackbox_four_sigma(self):
        data = self.call_json('plan', '--n', '1e12', '--blackbox', '--target', 'four')
        self.assertEqual(data['sensitive_sites'], 10 ** 6)
        row = next(r for r in data['rows'] if r['target'] == 'four')
        self.assertAlmostEqual(row['required_tests'], 1_003_200, delta=100)
        self.assertAlmostEqual(data['ratios']['six/four'], 1.003, delta=5e-4)
        self.assertAlmostEqual(data['ratios']['enough/four'], 1.0042, delta=5e-4)

    def test_enough_sigma_table(self):
        output = self.call('plan', '--n', '20', '--sensitive', '4', '--target', 'enough')
        line = next(line for line in output.splitlines() if line.startswith('enough'))
        self.assertEqual(line.split()[2], '11')
        self.assertIn('0.55', line)
        self.assertIn('ratio enough/four', output)

    def test_whitebox_remainder(self):
        output = self.call('plan', '--n', '20', '--sensitive', '4', '--target', 'enough', '--whitebox', '3')
        line = next(line for line in output.splitlines() if line.startswith('enough'))
        self.assertEqual(line.split()[-1], '8')

    def test_unreachable_target(self):
        out = io.StringIO()
        with self.assertRaises(CommandError) as ctx:
            call_command('plan', '--n', '20', '--sensitive', '4', '--target', 'lambda=1e-30', stdout=out)
        self.assertEqual(ctx.exception.returncode, EXIT_DOMAIN)
        self.assertIn('NO_SOLUTION', str(ctx.exception))
        self.assertIn('NO_SOLUTION', out.getvalue())

    def test_matrix_file(self):
        path = self.write('flowchart.json', json.dumps({
            'parameters': [{'name': 'y', 'types': [{'name': f'y{i}', 'values': 1} for i in range(4)]}],
            'override_total_sites': 20,
        }))
        data = self.call_json('plan', '--spec', path)
        self.assertEqual(data['total_sites'], 20)
        self.assertEqual(data['rows'][2]['required_tests'], 11)

    def test_invalid_matrix_file(self):
        path = self.write('bad.json', json.dumps({'parameters': [{'name': 'y', 'types': []}]}))
        error = self.assertExitCode(EXIT_DOMAIN, 'plan', '--spec', path)
        self.assertIn('parameters.0.types', str(error))

    def test_usage_errors(self):
        self.assertExitCode(EXIT_USAGE, 'plan', '--n', '20')
        self.assertExitCode(EXIT_USAGE, 'plan', '--n', '20', '--sensitive', '4', '--blackbox')
        self.assertExitCode(EXIT_USAGE, 'plan', '--sensitive', '4')
        self.assertExitCode(EXIT_USAGE, 'plan', '--n', '20', '--sensitive', '4', '--target', 'seven')

    def test_missing_matrix_file(self):
        self.assertExitCode(EXIT_IO, 'plan', '--spec', os.path.join(self.tmp, 'absent.json'))

    def test_invalid_utf8_matrix_file(self):
        path = self.write_bytes('bad.json', b'{"parameters": [{"name": "\xff"}]}')
        error = self.assertExitCode(EXIT_DOMAIN, 'plan', '--spec', path)
        self.assertIn('UTF-8', str(error))


class MonitorCommandTests(CommandTestCase):
    header = '{"n": 20, "s0": 4, "target": "enough"}\n'

    def test_eleven_passes(self):
        path = self.write('session.jsonl', self.header + '{"event": "pass"}\n' * 11)
        output = self.call('monitor', '--events', path)
        lines = [line for line in output.splitlines() if line.startswith('event ')]
        self.assertEqual(len(lines), 11)
        self.assertIn('target_met=false', lines[9])
        self.assertIn('target_met=true', lines[10])
        final = json.loads(output[output.index('\n{') + 1:])
        self.assertTrue(final['target_met'])
        self.assertAlmostEqual(final['bounds']['lambda_max'], 0.01713, delta=1e-4)

    def test_quiet_prints_only_the_report(self):
        path = self.write('session.jsonl', self.header + '{"event": "pass"}\n' * 3)
        final = json.loads(self.call('monitor', '--events', path, '--quiet'))
        self.assertEqual(final['tested_sites'], 3)
        self.assertEqual(final['bounds'], 'NOT_GROWING')
        self.assertEqual(final['tests_remaining_to_target'], 8)

    def test_malformed_line(self):
        path = self.write('session.jsonl', self.header + '{"event": "pass"}\n{"event": pass}\n')
        error = self.assertExitCode(EXIT_DOMAIN, 'monitor', '--events', path)
        self.assertIn('line 3', str(error))

    def test_empty_log(self):
        path = self.write('empty.jsonl', '')
        final = json.loads(self.call(
            'monitor', '--events', path, '--n', '20', '--sensitive', '4', '--target', 'enough', '--quiet',
        ))
        self.assertEqual(final['tested_sites'], 0)
        self.assertEqual(final['tests_remaining_to_target'], 11)

    def test_empty_log_needs_a_target(self):
        path = self.write('empty.jsonl', '')
        self.assertExitCode(EXIT_USAGE, 'monitor', '--events', path, '--n', '20', '--sensitive', '4')

    def test_matrix_profile(self):
        matrix = self.write('flowchart.json', json.dumps({
            'parameters': [{'name': 'y', 'types': [{'name': f'y{i}', 'values': 1} for i in range(4)]}],
            'override_total_sites': 20,
            'site_probabilities': [0.2, 0.2, 0.05, 0.45],
        }))
        path = self.write('session.jsonl', '{"target": "enough"}\n' + '{"event": "pass"}\n' * 11)
        final = json.loads(self.call('monitor', '--events', path, '--spec', matrix, '--quiet'))
        self.assertEqual(final['total_sites'], 20)
        self.assertLess(final['bounds']['lambda_min'], final['bounds']['lambda_max'])

    def test_overrun_is_a_domain_error(self):
        path = self.write('session.jsonl', '{"n": 4, "s0": 2, "target": "custom", "lambda_rq": 0.1}\n')
        self.assertExitCode(EXIT_DOMAIN, 'monitor', '--events', path)
        path = self.write('over.jsonl', '{"n": 6, "s0": 3, "target": "enough"}\n' + '{"event": "pass"}\n' * 7)
        error = self.assertExitCode(EXIT_DOMAIN, 'monitor', '--events', path, '--quiet')
        self.assertIn('already tested', str(error))
        self.assertIn('event 7', str(error))

    def test_missing_log(self):
        self.assertExitCode(EXIT_IO, 'monitor', '--events', os.path.join(self.tmp, 'absent.jsonl'))

    def test_invalid_utf8_log(self):
        path = self.write_bytes('session.jsonl', self.header.encode() + b'{"event": "\xff"}\n')
        error = self.assertExitCode(EXIT_DOMAIN, 'monitor', '--events', path)
        self.assertIn('line 2', str(error))


class CurveTests(SimpleTestCase):
    def test_grid_excludes_the_singular_point(self):
        grid = CurveRequest(20, 0.25, 100).grid()
        self.assertEqual(len(grid), 100)
        self.assertGreater(grid[0], 0.25)
        self.assertLess(grid[-1], 1.0)
        self.assertAlmostEqual(grid[0] - 0.25, 0.75 / 101)

    def test_full_range_grid(self):
        rows = list(curve_rows(CurveRequest(20, 0.25, 9, full_range=True)))
        self.assertEqual(len(rows), 9)
        self.assertAlmostEqual(rows[0].c, 0.1)
        self.assertAlmostEqual(rows[1].c, 0.2)
        self.assertIsNone(rows[0].lambda_max)
        self.assertIsNone(rows[0].reliability)
        self.assertIsNotNone(rows[-1].lambda_max)
        self.assertGreater(rows[0].relevance, rows[1].relevance)


class CurveCommandTests(CommandTestCase):
    def read_rows(self, text):
        rows = list(csv.reader(io.StringIO(text)))
        self.assertEqual(tuple(rows[0]), CURVE_HEADER)
        return [[float(cell) if cell else None for cell in row] for row in rows[1:]]

    def test_curve_rows(self):
        output = self.call('curve', '--n', '20', '--semantic-mean', '0.25', '--resolution', '100')
        self.assertNotIn('\r', output)
        rows = self.read_rows(output)
        self.assertEqual(len(rows), 100)

        cs, lambdas, reliabilities, relevances = zip(*rows)
        self.assertTrue(all(a < b for a, b in zip(cs, cs[1:])))
        self.assertTrue(all(a > b for a, b in zip(lambdas, lambdas[1:])))
        self.assertTrue(all(a < b for a, b in zip(relevances, relevances[1:])))
        self.assertLess(relevances[0], 0.01)

        c, intensity = min(zip(cs, lambdas), key=lambda row: abs(row[0] - 0.55))
        self.assertAlmostEqual(c, 0.55, delta=0.75 / 101)
        self.assertEqual(intensity, lambda_max(20, c, 0.25))
        self.assertTrue(0.015 < intensity < 0.020)

    def test_curve_to_file(self):
        path = os.path.join(self.tmp, 'curve.csv')
        self.call('curve', '--n', '20', '--semantic-mean', '0.25', '--resolution', '10', '--out', path)
        with open(path, encoding='utf-8', newline='') as f:
            rows = self.read_rows(f.read())
        self.assertEqual(len(rows), 10)

    def test_full_range_leaves_blank_intensities(self):
        output = self.call('curve', '--n', '20', '--semantic-mean', '0.25', '--resolution', '9', '--full-range')
        rows = self.read_rows(output)
        self.assertIsNone(rows[0][1])
        self.assertIsNotNone(rows[0][3])

    def test_resolution_too_small(self):
        self.assertExitCode(EXIT_USAGE, 'curve', '--n', '20', '--semantic-mean', '0.25', '--resolution', '1')

    def test_unwritable_destination(self):
        path = os.path.join(self.tmp, 'missing', 'curve.csv')
        self.assertExitCode(EXIT_IO, 'curve', '--n', '20', '--semantic-mean', '0.25', '--out', path)


class IndexQueryCommandTests(CommandTestCase):
    def setUp(self):
        super().setUp()
        self.index_path = os.path.join(self.tmp, 'index.json')
        self.doc = self.write('content.txt', CONTENT_EXAMPLE)
        self.call('index', '--input', self.doc, '--output', self.index_path)

    def query(self, text):
        return json.loads(self.call('query', text, '--index', self.index_path))

    def test_index_file(self):
        with open(self.index_path, encoding='utf-8') as f:
            data = json.load(f)
        self.assertEqual(data['documents']['content'], {'n': 20, 'terms': {'KA': 4, 'KY': 8, 'MYY': 4, 'PE': 4}})
        self.assertEqual(data['tokenizer'], {'lowercase': False, 'delimiters': 'ws'})

    def test_discovery_query(self):
        ranked = self.query('MYY')
        self.assertEqual(ranked[0]['doc_id'], 'content')
        self.assertAlmostEqual(ranked[0]['relevance'], 0.1306, delta=5e-4)
        self.assertEqual(ranked[0]['mode'], 'DISCOVERY')

    def test_recovery_query(self):
        ranked = self.query('KY KA PE KY')
        self.assertGreaterEqual(ranked[0]['relevance'], 0.9999)
        self.assertAlmostEqual(ranked[0]['coverage'], 0.8)

    def test_table_output(self):
        output = self.call('query', 'KY', '--index', self.index_path, '--table')
        header, row = output.splitlines()
        self.assertEqual(header.split('\t')[0], 'doc_id')
        self.assertEqual(row.split('\t'), ['content', '0.6611', '0.4', '0.25', 'RECOVERY'])

    def test_ranking_across_documents(self):
        other = self.write('pair.txt', 'KY KA')
        self.call('index', '--input', self.doc, other, '--output', self.index_path)
        ranked = self.query('KY')
        self.assertEqual([r['doc_id'] for r in ranked], ['content', 'pair'])
        self.assertEqual(ranked[1]['mode'], 'IRRELEVANT')

    def test_empty_query(self):
        self.assertExitCode(EXIT_DOMAIN, 'query', '', '--index', self.index_path)

    def test_duplicate_document_ids(self):
        twin = self.write(os.path.join('other', 'content.txt'), 'A B')
        self.assertExitCode(EXIT_DOMAIN, 'index', '--input', self.doc, twin, '--output', self.index_path)

    def test_invalid_utf8(self):
        path = os.path.join(self.tmp, 'binary.txt')
        with open(path, 'wb') as f:
            f.write(b'\xff\xfe KY KA')
        self.assertExitCode(EXIT_DOMAIN, 'index', '--input', path, '--output', self.index_path)

    def test_missing_inputs(self):
        self.assertExitCode(EXIT_IO, 'index', '--input', os.path.join(self.tmp, 'absent.txt'), '--output', self.index_path)
        self.assertExitCode(EXIT_IO, 'query', 'KY', '--index', os.path.join(self.tmp, 'absent.json'))

    def test_lowercase_index(self):
        self.call('index', '--input', self.doc, '--output', self.index_path, '--lowercase')
        ranked = self.query('myy')
        self.assertAlmostEqual(ranked[0]['relevance'], 0.1306, delta=5e-4)

    def test_query_file(self):
        query = self.write('query.txt', 'KY KA PE KY\n')
        ranked = json.loads(self.call('query', '--query-file', query, '--index', self.index_path))
        self.assertAlmostEqual(ranked[0]['coverage'], 0.8)
        self.assertEqual(ranked, self.query('KY KA PE KY'))

    def test_query_file_must_be_utf8(self):
        query = self.write_bytes('query.bin', b'\xff\xfe KY')
        self.assertExitCode(EXIT_DOMAIN, 'query', '--query-file', query, '--index', self.index_path)

    def test_query_text_and_file_are_exclusive(self):
        query = self.write('query.txt', 'KY')
        self.assertExitCode(EXIT_USAGE, 'query', 'KY', '--query-file', query, '--index', self.index_path)
        self.assertExitCode(EXIT_USAGE, 'query', '--index', self.index_path)
        self.assertExitCode(
            EXIT_IO, 'query', '--query-file', os.path.join(self.tmp, 'absent.txt'), '--index', self.index_path,
        )

    def test_invalid_utf8_index(self):
        path = self.write_bytes('broken.json', b'{"documents": {"\xff": {}}}')
        self.assertExitCode(EXIT_DOMAIN, 'query', 'KY', '--index', path)


class ExactOracleCommandTests(CommandTestCase):
    def test_exact_tail_next_to_the_bounds(self):
        data = self.call_json(
            'bounds', '--n', '20', '--coverage', '0.55', '--semantic-mean', '0.25', '--exact', 'enumeration',
        )
        dp = self.call_json('bounds', '--n', '20', '--coverage', '0.55', '--semantic-mean', '0.25', '--exact', 'dp')
        self.assertAlmostEqual(data['exact_operating_probability'], dp['exact_operating_probability'], delta=1e-10)
        self.assertLess(data['exact_operating_probability'], 0.05)

    def test_exact_text_output(self):
        output = self.call('bounds', '--n', '20', '--coverage', '0.2', '--semantic-mean', '0.25', '--exact', 'auto')
        self.assertIn('NOT_GROWING', output)
        self.assertIn('exact', output)

    def test_exact_limits(self):
        self.assertExitCode(
            EXIT_USAGE, 'bounds', '--n', '1e6', '--coverage', '0.5', '--semantic-mean', '0.25', '--exact', 'dp',
        )
        self.assertExitCode(
            EXIT_DOMAIN, 'bounds', '--n', '30', '--coverage', '0.5', '--semantic-mean', '0.25', '--exact', 'enumeration',
        )
        self.assertExitCode(
            EXIT_DOMAIN, 'bounds', '--n', '20', '--coverage', '1.0', '--semantic-mean', '0.25', '--exact', 'dp',
        )
