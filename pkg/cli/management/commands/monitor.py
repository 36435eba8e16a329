from pathlib import Path

from django.conf import settings

from common.commands import QuantifyCommand, count_arg
from common.exceptions import QuantificationError
from common.formatting import fmt
from core_law.law import NOT_GROWING
from monitor.events import read_event_log
from monitor.response_serializers import StatusReportSerializer
from monitor.session import apply_event, new_session, status
from site_model.matrix import effective_total_sites, sensitive_sites
from site_model.serializers import load_matrix

from .plan import target_arg


class Command(QuantifyCommand):
    help = 'Replay a test event log and report coverage, intensity bounds and target progress after each event.'

    def add_arguments(self, parser):
        parser.add_argument('--events', required=True, help='JSON Lines event log')
        parser.add_argument('--spec', help='site matrix JSON file (n, s0 and the optional site profile)')
        parser.add_argument('--n', type=count_arg, help='total sites when neither the log nor --spec gives them')
        parser.add_argument('--sensitive', type=int, help='sensitive sites when neither the log nor --spec gives them')
        parser.add_argument('--target', type=target_arg, help='target when the log has no header')
        parser.add_argument('--o-constant', type=float, default=None, help='stand-in for the O(ln n) term')

    def run(self, **options):
        with Path(options['events']).open('rb') as stream:
            header, events = read_event_log(stream)

        matrix = load_matrix(options['spec']) if options['spec'] else None
        n = header.n if header and header.n is not None else None
        s0 = header.s0 if header and header.s0 is not None else None
        if matrix is not None:
            n = n if n is not None else effective_total_sites(matrix)
            s0 = s0 if s0 is not None else sensitive_sites(matrix)
        n = n if n is not None else options['n']
        s0 = s0 if s0 is not None else options['sensitive']
        target = header.target if header else options['target']
        if n is None or s0 is None:
            raise self.usage_error('site counts are missing: give them in the log header, --spec or --n/--sensitive')
        if target is None or target == 'all':
            raise self.usage_error('the log has no header; pass a single --target')

        o_constant = options['o_constant']
        if o_constant is None:
            o_constant = settings.QUANTIFY_O_CONSTANT

        session = new_session(n, s0, target, matrix.profile if matrix else None)
        verbose = not (options['quiet'] or options['as_json'])
        for index, event in enumerate(events, start=1):
            try:
                apply_event(session, event)
            except QuantificationError as e:
                raise type(e)(f'event {index}: {e}') from e
            if verbose:
                self.stdout.write(self._status_line(index, event, status(session, o_constant)))

        self.emit_json(StatusReportSerializer(status(session, o_constant)).data)

    def _status_line(self, index, event, report) -> str:
        upper = NOT_GROWING.value if report.bounds is NOT_GROWING else fmt(report.bounds.lambda_max)
        return (
            f'event {index} {event.kind.value:<5} s={report.tested_sites} n={report.total_sites} '
            f's0={report.sensitive_sites} c={fmt(report.coverage)} lambda_max={upper} '
            f'target_met={fmt(report.target_met)} remaining={fmt(report.tests_remaining_to_target)}'
        )
