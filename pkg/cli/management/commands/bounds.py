from django.conf import settings

from common.commands import QuantifyCommand, closed_probability_arg, count_arg, open_probability_arg
from common.formatting import fmt
from core_law.law import NOT_GROWING, SymmetricSystemSpec, bounds
from core_law.oracle import METHOD_AUTO, METHOD_DP, METHOD_ENUMERATION, symmetric_system_operating_probability
from monitor.response_serializers import BoundsSerializer


class Command(QuantifyCommand):
    help = 'Evaluate the failure intensity interval [lambda_min, lambda_max] and its reliability interval.'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=count_arg, required=True, help='total sites (1e12 notation accepted)')
        parser.add_argument('--coverage', type=closed_probability_arg, required=True, help='test coverage c = s/n')
        parser.add_argument('--semantic-mean', type=open_probability_arg, required=True, help='semantic mean p_S')
        parser.add_argument('--mid-probability', type=open_probability_arg, help='p_M for the lower bound (defaults to p_S)')
        parser.add_argument('--o-constant', type=float, default=None, help='stand-in for the O(ln n) term')
        parser.add_argument(
            '--exact',
            choices=[METHOD_AUTO, METHOD_DP, METHOD_ENUMERATION],
            help='also print the exact probability that more than c*n of n elements operate, each with p_S',
        )

    def run(self, **options):
        o_constant = options['o_constant']
        if o_constant is None:
            o_constant = settings.QUANTIFY_O_CONSTANT
        report = bounds(
            options['n'],
            options['coverage'],
            options['semantic_mean'],
            options['mid_probability'],
            o_constant,
            series_threshold=settings.QUANTIFY_SERIES_THRESHOLD,
        )
        exact = self._exact(options) if options['exact'] else None

        if options['as_json']:
            payload = {'bounds': NOT_GROWING.value if report is NOT_GROWING else BoundsSerializer(report).data}
            if options['exact']:
                payload['exact_operating_probability'] = exact
            self.emit_json(payload)
            return

        if report is NOT_GROWING:
            self.stdout.write(
                f'{NOT_GROWING.value}: coverage {fmt(options["coverage"])} does not exceed '
                f'the semantic mean {fmt(options["semantic_mean"])}; failure intensity is not yet decreasing'
            )
        else:
            self.stdout.write(f'lambda_min   {fmt(report.lambda_min)}')
            self.stdout.write(f'lambda_max   {fmt(report.lambda_max)}')
            self.stdout.write(f'reliability  [{fmt(report.reliability_min)}, {fmt(report.reliability_max)}]')
        if options['exact']:
            self.stdout.write(f'exact        {fmt(exact)}')

    def _exact(self, options) -> float:
        n = options['n']
        if n > settings.QUANTIFY_ORACLE_MAX_N:
            raise self.usage_error(f'--exact is limited to n <= {settings.QUANTIFY_ORACLE_MAX_N}, got {n}')
        degree = round(options['coverage'] * n)
        system = SymmetricSystemSpec(total_elements=n, operating_degree=degree)
        return symmetric_system_operating_probability(
            system,
            options['semantic_mean'],
            method=options['exact'],
            enumeration_max_n=settings.QUANTIFY_ORACLE_ENUMERATION_MAX_N,
            dp_max_n=settings.QUANTIFY_ORACLE_MAX_N,
        )
