import numpy as np

from ...modphi import FAMILIES, mu_sigma_curve, phi, psi, rate_curve
from ..base import StirlingCommand


def split_list(value):
    return [v for v in value.split(',') if v.strip()] if value else None


class Command(StirlingCommand):
    help = 'Figure data: the mean/variance landscape, the mod-phi limit functions or the rate functions.'
    command_name = 'curves'

    def add_arguments(self, parser):
        parser.add_argument('--kind', choices=['mu-sigma', 'mod-phi', 'rate'], required=True)
        parser.add_argument('--family', type=int, default=None)
        parser.add_argument('--theta', default='1')
        parser.add_argument('--grid', type=int, default=200)
        parser.add_argument('--z', default='0,0.25,-0.25,0.1+0.1j', help='Comma separated points for --kind mod-phi.')
        parser.add_argument('--t', default='', help='Comma separated t values for --kind rate; a uniform grid when omitted.')
        self.add_output_arguments(parser)

    def handle(self, *args, **options):
        data = {
            'family': options['family'],
            'theta': options['theta'],
            'grid': options['grid'],
            'out': options['out'],
            'format': options['format'],
        }
        if options['kind'] == 'mod-phi':
            data['z'] = split_list(options['z']) or []
        if options['kind'] == 'rate' and options['t']:
            data['t'] = split_list(options['t']) or []
        config = self.load_config(data)
        families = [config.family] if config.family else list(FAMILIES)

        if options['kind'] == 'mu-sigma':
            thetas = np.geomspace(1e-2, 1e2, config.grid)
            rows = []
            for i in families:
                curve = self.library_call(mu_sigma_curve, i, thetas)
                rows.extend((i, r['theta'], r['mu'], r['sigma2'], r['sigma']) for r in curve)
            echo = {'kind': 'mu-sigma', 'families': families, 'grid': config.grid}
            self.emit(config, echo, header=('family', 'theta', 'mu', 'sigma2', 'sigma'), rows=rows)
            return

        theta = config.theta
        if options['kind'] == 'mod-phi':
            rows = []
            for i in families:
                for z in config.z:
                    p = complex(self.library_call(phi, i, z, theta))
                    s = complex(self.library_call(psi, i, z, theta))
                    rows.append((i, z.real, z.imag, p.real, p.imag, s.real, s.imag))
            echo = {'kind': 'mod-phi', 'families': families, 'theta': theta, 'z': len(config.z)}
            header = ('family', 'z_re', 'z_im', 'phi_re', 'phi_im', 'psi_re', 'psi_im')
            self.emit(config, echo, header=header, rows=rows)
            return

        ts = [(j + 1) / config.grid for j in range(config.grid)]
        rows = []
        for i in families:
            if config.t:
                grid = list(config.t)
            else:
                upper = 1 if (i != 3 or theta >= 1) else float(theta)
                grid = [0.0] + [t * upper for t in ts] if i == 1 else [t * upper for t in ts]
            rows.extend((i, t, value) for t, value in self.library_call(rate_curve, i, theta, grid))
        echo = {'kind': 'rate', 'families': families, 'theta': theta, 'grid': len(config.t) or config.grid}
        self.emit(config, echo, header=('family', 't', 'rate'), rows=rows)
