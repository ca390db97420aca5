from ...combinatorics import StirlingKind, triangle
from ..base import StirlingCommand


class Command(StirlingCommand):
    help = 'Write rows 1..n-max of a Stirling triangle as CSV (n, k, value).'
    command_name = 'table'

    def add_arguments(self, parser):
        parser.add_argument('--kind', choices=[k.value for k in StirlingKind], required=True)
        parser.add_argument('--n-max', type=int, required=True)
        self.add_output_arguments(parser)

    def handle(self, *args, **options):
        config = self.load_config({'n': options['n_max'], 'out': options['out'], 'format': options['format']})
        kind = StirlingKind(options['kind'])
        table = self.library_call(triangle, kind)

        def rows():
            for n in range(1, config.n + 1):
                row = self.library_call(table.row, n)
                for k in range(1, n + 1):
                    yield n, k, row[k]

        self.emit(config, {'kind': kind.value, 'n_max': config.n}, header=('n', 'k', 'value'), rows=rows())
