import math

from ...combinatorics import gen_poly
from ...zeros import empirical_measure, limit_spec
from ..base import StirlingCommand


class Command(StirlingCommand):
    help = 'Zeros of the generating polynomial (negated) and the limit density on a grid.'
    command_name = 'zeros'

    def add_arguments(self, parser):
        parser.add_argument('--family', type=int, required=True)
        parser.add_argument('--n', type=int, required=True)
        parser.add_argument('--theta', required=True, help='vartheta of the tilt theta = vartheta n, e.g. 2 or 1/2')
        parser.add_argument('--grid', type=int, default=200)
        parser.add_argument('--precision', type=int, default=256)
        parser.add_argument('--relaxed', action='store_true')
        self.add_output_arguments(parser)

    def handle(self, *args, **options):
        config = self.load_config({
            'family': options['family'],
            'n': options['n'],
            'theta': options['theta'],
            'grid': options['grid'],
            'precision': options['precision'],
            'relaxed': options['relaxed'],
            'out': options['out'],
            'format': options['format'],
        })
        poly = self.library_call(gen_poly, config.family, config.n, config.theta * config.n, relaxed=config.relaxed)
        measure = self.library_call(empirical_measure, poly, config.n, precision=config.precision)
        spec = limit_spec(config.family, config.theta)

        upper = spec.support_upper
        if math.isinf(upper):
            upper = 1.5 * max(measure.points[-1], 1.0)
        grid = [upper * (j + 0.5) / config.grid for j in range(config.grid)]

        rows = [('point', x, measure.weight) for x in measure.points]
        rows += [('density', t, spec.density(t)) for t in grid]
        echo = self.config_echo(config, 'family', 'n', 'theta', 'grid', 'precision', 'relaxed')
        self.emit(config, echo, header=('series', 'x', 'value'), rows=rows)
