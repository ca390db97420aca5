from django.core.management.base import CommandError

from ...checks import CHECKS, SUITES, suite_checks
from ...tasks import dispatch_checks, summarize
from ..base import CRITERIA_FAILURE, USAGE_ERROR, StirlingCommand


class Command(StirlingCommand):
    help = 'Run the acceptance suite; exits 0 when every check passes, 1 otherwise.'
    command_name = 'verify'

    def add_arguments(self, parser):
        parser.add_argument('--suite', choices=SUITES, default='fast')
        parser.add_argument('--checks', default='', help='Comma separated subset of the suite.')
        self.add_output_arguments(parser, formats=('json', 'csv'))

    def handle(self, *args, **options):
        config = self.load_config({'out': options['out'], 'format': options['format']})
        suite = options['suite']
        names = suite_checks(suite)
        if options['checks']:
            requested = [n.strip() for n in options['checks'].split(',') if n.strip()]
            unknown = [n for n in requested if n not in CHECKS]
            if unknown:
                raise CommandError(f"unknown checks: {', '.join(unknown)}", returncode=USAGE_ERROR)
            names = requested

        results = dispatch_checks(names, suite)
        summary = summarize(results)
        echo = {'suite': suite, 'checks': names}
        if config.format == 'json':
            self.emit(config, echo, payload={'summary': summary, 'checks': results})
        else:
            rows = []
            for result in results:
                rows.append((result['name'], result['status'], '', '', result['error']))
                for report in result['reports']:
                    rows.append((result['name'], 'passed' if report['passed'] else 'failed',
                                 report['label'], report['fitted_slope'], None))
            self.emit(config, echo, header=('check', 'status', 'report', 'fitted_slope', 'error'), rows=rows)

        if not summary['passed_all']:
            raise CommandError(
                f"{summary['failed']} failed, {summary['error']} errored of {summary['total']} checks",
                returncode=CRITERIA_FAILURE,
            )
        self.stderr.write(self.style.SUCCESS(f"All {summary['total']} checks passed"))
