import argparse
from enum import Enum

from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from config.constants import EXIT_USAGE

from .commands import QuantifyCommand, closed_probability_arg, count_arg, open_probability_arg, positive_real_arg
from .exceptions import EventLogError, SchemaError, flatten_errors, schema_error_from
from .formatting import fmt


class Color(str, Enum):
    RED = 'RED'


class FormattingTests(SimpleTestCase):
    def test_significant_digits(self):
        self.assertEqual(fmt(0.017132112), '0.01713')
        self.assertEqual(fmt(0.13069), '0.1307')
        self.assertEqual(fmt(2.0e-9), '2e-09')

    def test_non_float_values(self):
        self.assertEqual(fmt(None), '-')
        self.assertEqual(fmt(True), 'true')
        self.assertEqual(fmt(1_003_189), '1003189')
        self.assertEqual(fmt(Color.RED), 'RED')

    @override_settings(QUANTIFY_REPORT_DIGITS=6)
    def test_digits_follow_settings(self):
        self.assertEqual(fmt(0.017132112), '0.0171321')
        self.assertEqual(fmt(0.017132112, digits=2), '0.017')


class ArgumentTypeTests(SimpleTestCase):
    def test_count_accepts_scientific_notation(self):
        self.assertEqual(count_arg('1e12'), 10 ** 12)
        self.assertEqual(count_arg('20'), 20)

    def test_count_rejects_fractions_and_non_positive(self):
        for text in ('2.5', '0', '-3', 'many', 'inf'):
            with self.assertRaises(argparse.ArgumentTypeError):
                count_arg(text)

    def test_probabilities(self):
        self.assertEqual(closed_probability_arg('1'), 1.0)
        self.assertEqual(open_probability_arg('0.25'), 0.25)
        for text in ('1', '0', 'x'):
            with self.assertRaises(argparse.ArgumentTypeError):
                open_probability_arg(text)
        with self.assertRaises(argparse.ArgumentTypeError):
            closed_probability_arg('1.5')
        with self.assertRaises(argparse.ArgumentTypeError):
            positive_real_arg('0')


class ErrorTests(SimpleTestCase):
    def test_flatten_nested_detail(self):
        detail = {
            'parameters': [{}, {'types': [{}, {'values': ['Ensure this value is greater than or equal to 1.']}]}],
            'non_field_errors': ['broken'],
        }
        self.assertEqual(
            flatten_errors(detail),
            [
                ('parameters.1.types.1.values', 'Ensure this value is greater than or equal to 1.'),
                ('', 'broken'),
            ],
        )

    def test_schema_error_counts_the_rest(self):
        error = schema_error_from({'a': ['first'], 'b': ['second']})
        self.assertEqual(error.path, 'a')
        self.assertEqual(str(error), 'a: first (+1 more)')

    def test_schema_error_with_root(self):
        error = schema_error_from({'n': ['missing']}, 'documents.doc')
        self.assertEqual(str(error), 'documents.doc.n: missing')
        self.assertEqual(str(SchemaError('bad')), 'bad')

    def test_event_log_error_names_the_line(self):
        error = EventLogError('invalid JSON', 7)
        self.assertEqual(error.line, 7)
        self.assertEqual(str(error), 'line 7: invalid JSON')


class UsageErrorTests(SimpleTestCase):
    class Probability(QuantifyCommand):
        def add_arguments(self, parser):
            parser.add_argument('--p', type=open_probability_arg, required=True)

        def run(self, **options):
            pass

    def parser(self):
        return self.Probability().create_parser('manage.py', 'probability')

    def test_usage_errors_exit_with_one(self):
        for argv in (['--p', '1.5'], [], ['--p', '0.2', '--bogus']):
            with self.assertRaises(CommandError) as ctx:
                self.parser().parse_args(argv)
            self.assertEqual(ctx.exception.returncode, EXIT_USAGE)

    def test_valid_arguments_parse(self):
        options = self.parser().parse_args(['--p', '0.2', '--json'])
        self.assertEqual(options.p, 0.2)
        self.assertTrue(options.as_json)
