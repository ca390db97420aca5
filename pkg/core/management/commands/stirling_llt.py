from ...verification import llt_rows
from ..base import StirlingCommand


class Command(StirlingCommand):
    help = 'Local limit theorem data: pmf and Gaussian approximation for each theta of a grid.'
    command_name = 'llt'

    def add_arguments(self, parser):
        parser.add_argument('--family', type=int, required=True)
        parser.add_argument('--n', type=int, required=True)
        parser.add_argument('--theta-list', required=True, help='Comma separated, e.g. 0.01,0.1,0.3,1,10')
        parser.add_argument('--relaxed', action='store_true', help='Family 3 with a non-integer tilt.')
        self.add_output_arguments(parser)

    def handle(self, *args, **options):
        config = self.load_config({
            'family': options['family'],
            'n': options['n'],
            'thetas': [v for v in options['theta_list'].split(',') if v.strip()],
            'relaxed': options['relaxed'],
            'out': options['out'],
            'format': options['format'],
        })
        rows = []
        for theta in config.thetas:
            k, pmf, gauss = self.library_call(llt_rows, config.family, config.n, theta, relaxed=config.relaxed)
            rows.extend((theta, int(j), float(p), float(g)) for j, p, g in zip(k, pmf, gauss))

        echo = self.config_echo(config, 'family', 'n', 'thetas', 'relaxed')
        self.emit(config, echo, header=('theta', 'k', 'pmf', 'gaussian'), rows=rows)
