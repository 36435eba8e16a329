import io
import logging

from django.conf import settings

from cli.curves import CurveRequest, write_curve_csv
from common.commands import QuantifyCommand, count_arg, open_probability_arg

logger = logging.getLogger('quantify')


class Command(QuantifyCommand):
    help = 'Emit c -> (lambda_max, reliability, relevance) curve data as CSV.'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=count_arg, required=True, help='total sites')
        parser.add_argument('--semantic-mean', type=open_probability_arg, required=True, help='semantic mean p_S')
        parser.add_argument('--resolution', type=int, default=None, help='number of coverage samples (>= 2)')
        parser.add_argument('--out', default='-', help="CSV destination, '-' for stdout")
        parser.add_argument('--full-range', action='store_true', help='sample c over (0, 1) instead of (p_S, 1)')

    def run(self, **options):
        resolution = options['resolution']
        if resolution is None:
            resolution = settings.QUANTIFY_CURVE_RESOLUTION
        if resolution < 2:
            raise self.usage_error(f'--resolution must be at least 2, got {resolution}')
        request = CurveRequest(
            n=options['n'],
            semantic_mean=options['semantic_mean'],
            resolution=resolution,
            full_range=options['full_range'],
        )

        if options['out'] == '-':
            buffer = io.StringIO()
            write_curve_csv(request, buffer)
            self.stdout.write(buffer.getvalue(), ending='')
            return

        with open(options['out'], 'w', encoding='utf-8', newline='') as stream:
            count = write_curve_csv(request, stream)
        logger.info(f'wrote {count} curve rows to {options["out"]}')
