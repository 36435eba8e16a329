import argparse
import json
import logging
import sys
from decimal import Decimal, InvalidOperation

from django.core.management.base import BaseCommand, CommandError, CommandParser

from config.constants import EXIT_DOMAIN, EXIT_IO, EXIT_USAGE

from .exceptions import QuantificationError

logger = logging.getLogger('quantify')


def usage_error_handler(parser: CommandParser):
    """Replacement for ``parser.error`` that exits with the usage code instead of argparse's 2."""

    def error(message):
        if parser.called_from_command_line:
            parser.print_usage(sys.stderr)
            parser.exit(EXIT_USAGE, f'{parser.prog}: error: {message}\n')
        raise CommandError(f'Error: {message}', returncode=EXIT_USAGE)

    return error


def count_arg(text: str) -> int:
    """Positive count; scientific notation such as 1e12 is accepted when it is integral."""
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f'{text!r} is not a number')
    if not value.is_finite() or value != value.to_integral_value() or value < 1:
        raise argparse.ArgumentTypeError(f'{text!r} is not a positive integer count')
    return int(value)


def open_probability_arg(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{text!r} is not a number')
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f'{text!r} must lie strictly between 0 and 1')
    return value


def closed_probability_arg(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{text!r} is not a number')
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f'{text!r} must lie in [0, 1]')
    return value


def positive_real_arg(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{text!r} is not a number')
    if not value > 0:
        raise argparse.ArgumentTypeError(f'{text!r} must be positive')
    return value


class QuantifyCommand(BaseCommand):
    """
    Base for the quantification commands.

    Subclasses implement ``run(**options)``; library errors are mapped onto the exit
    code contract (1 usage, 2 domain, 3 I/O).
    """

    requires_system_checks = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # argparse reports every usage problem through parser.error
        parser.error = usage_error_handler(parser)
        parser.add_argument('--json', action='store_true', dest='as_json', help='machine-readable output')
        parser.add_argument('--quiet', action='store_true', help='only print final results and errors')
        return parser

    def handle(self, *args, **options):
        previous_level = logger.level
        if options.get('quiet'):
            logger.setLevel(logging.ERROR)
        try:
            self.run(**options)
        except CommandError:
            raise
        except QuantificationError as e:
            logger.debug(f'{type(e).__name__}: {e}')
            raise CommandError(str(e), returncode=EXIT_DOMAIN) from e
        except OSError as e:
            raise CommandError(str(e), returncode=EXIT_IO) from e
        finally:
            logger.setLevel(previous_level)

    def run(self, **options):
        raise NotImplementedError('subclasses of QuantifyCommand must provide a run() method')

    def usage_error(self, message: str) -> CommandError:
        return CommandError(message, returncode=EXIT_USAGE)

    def emit_json(self, payload) -> None:
        self.stdout.write(json.dumps(payload, indent=2, ensure_ascii=False))
