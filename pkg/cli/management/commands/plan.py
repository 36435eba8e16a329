import argparse

from common.commands import QuantifyCommand, count_arg, positive_real_arg
from common.exceptions import NoSolutionError
from common.formatting import fmt
from core_law.law import NO_SOLUTION
from monitor.response_serializers import PlanTableSerializer
from monitor.session import SigmaKind, SigmaTarget, plan
from site_model.matrix import blackbox_sensitive_sites, blackbox_tests, effective_total_sites, sensitive_sites
from site_model.serializers import load_matrix

ALL_TARGETS = 'all'


def target_arg(text: str):
    """four | six | enough | lambda=X | all"""
    if text == ALL_TARGETS:
        return ALL_TARGETS
    if text.startswith('lambda='):
        return SigmaTarget.custom(positive_real_arg(text.removeprefix('lambda=')))
    try:
        kind = SigmaKind(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'{text!r} is not one of four, six, enough, lambda=X, all')
    if kind is SigmaKind.CUSTOM:
        raise argparse.ArgumentTypeError('write a custom target as lambda=X')
    return SigmaTarget(kind)


class Command(QuantifyCommand):
    help = 'Minimum number of tests needed to reach the four-, six- and enough-sigma intensity targets.'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=count_arg, help='total sites (1e12 notation accepted)')
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--sensitive', type=int, help='sensitive sites s0(0)')
        source.add_argument('--blackbox', action='store_true', help='estimate s0(0) as sqrt(n)')
        source.add_argument('--spec', help='site matrix JSON file giving n and s0(0)')
        parser.add_argument('--target', type=target_arg, default=ALL_TARGETS, help='four | six | enough | lambda=X | all')
        parser.add_argument('--whitebox', type=int, default=None, help='white-box sites tested separately')

    def _counts(self, options) -> tuple[int, int]:
        if options['spec']:
            matrix = load_matrix(options['spec'])
            n = options['n'] or effective_total_sites(matrix)
            return n, sensitive_sites(matrix)
        n = options['n']
        if n is None:
            raise self.usage_error('--n is required unless --spec is given')
        if options['blackbox']:
            return n, blackbox_sensitive_sites(n)
        return n, options['sensitive']

    def run(self, **options):
        n, s0 = self._counts(options)
        requested = options['target']
        extra = [requested] if requested != ALL_TARGETS and requested.kind is SigmaKind.CUSTOM else []
        table = plan(n, s0, extra)

        rows = table.rows
        if requested != ALL_TARGETS:
            rows = tuple(r for r in table.rows if r.target == requested)

        if options['as_json']:
            self.emit_json(PlanTableSerializer(table).data)
        else:
            self._write_table(table, rows, options['whitebox'])

        unreachable = [r for r in rows if r.required_tests is NO_SOLUTION]
        if unreachable:
            names = ', '.join(self._label(r.target) for r in unreachable)
            raise NoSolutionError(f'{NO_SOLUTION.value}: no test count reaches {names}')

    def _label(self, target: SigmaTarget) -> str:
        if target.kind is SigmaKind.CUSTOM:
            return f'lambda={fmt(target.custom_lambda)}'
        return target.kind.value

    def _write_table(self, table, rows, whitebox) -> None:
        self.stdout.write(f'n {fmt(table.total_sites)}  s0 {fmt(table.sensitive_sites)}  p_s {fmt(table.semantic_mean)}')
        header = f'{"target":<16}{"lambda_rq":>12}{"tests":>16}{"coverage":>12}'
        if whitebox is not None:
            header += f'{"blackbox":>16}'
        self.stdout.write(header)
        for row in rows:
            line = (
                f'{self._label(row.target):<16}{fmt(row.lambda_rq):>12}'
                f'{fmt(row.required_tests):>16}{fmt(row.coverage):>12}'
            )
            if whitebox is not None:
                remainder = '-' if row.required_tests is NO_SOLUTION else fmt(blackbox_tests(row.required_tests, whitebox))
                line += f'{remainder:>16}'
            self.stdout.write(line)
        for name, value in table.ratios.items():
            self.stdout.write(f'ratio {name:<12}{fmt(value)}')
