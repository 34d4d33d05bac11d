"""
Management command to generate a synthetic site-calibrated wind speed series.
"""
from ramps.services.data_io import export_csv, get_site, series_frame, synth_series

from ._base import RampcastCommand


class Command(RampcastCommand):
    help = 'Generate a seeded synthetic wind speed series calibrated to a catalog site'

    def add_arguments(self, parser):
        parser.add_argument('--site', required=True, help='Catalog site slug, e.g. amrumbank')
        parser.add_argument('--n', type=int, default=4464, help='Number of samples (default: 4464)')
        parser.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')
        parser.add_argument('--dt', type=int, default=600, help='Sampling interval in seconds (default: 600)')
        parser.add_argument('--height', type=float, default=10.0, help='Measurement height in m (default: 10)')
        parser.add_argument('--out', help='Output CSV path (default: stdout)')

    def run(self, **options):
        series = synth_series(
            get_site(options['site']), options['n'], dt=options['dt'],
            seed=options['seed'], height=options['height'],
        )
        if options['out']:
            export_csv(series, options['out'])
        else:
            self.emit_frame(series_frame(series))
