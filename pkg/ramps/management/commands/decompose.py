"""
Management command to split a series into wavelet bands or EMD components.
"""
from ramps.services.data_io import iso_timestamps, load_csv
from ramps.services.sigproc import bands_frame, dwt_decompose, emd_decompose, emd_frame

from ._base import RampcastCommand


class Command(RampcastCommand):
    help = 'Decompose a speed series into db4 wavelet bands (A5, D1..D5) or EMD IMFs plus residue'

    def add_arguments(self, parser):
        parser.add_argument('--data', required=True, help='Input timestamp,speed_mps CSV')
        parser.add_argument('--dt', type=int, default=600, help='Expected sampling interval in seconds')
        parser.add_argument('--method', choices=['wt', 'emd'], default='wt', help='Decomposition (default: wt)')
        parser.add_argument('--levels', type=int, default=5, help='Wavelet levels (default: 5)')
        parser.add_argument('--max-imfs', type=int, default=5, help='Maximum number of IMFs (default: 5)')
        parser.add_argument('--out', help='Output CSV of components (default: stdout)')

    def run(self, **options):
        series = load_csv(options['data'], options['dt'])
        stamps = iso_timestamps(series.timestamps)
        if options['method'] == 'wt':
            frame = bands_frame(dwt_decompose(series.values, options['levels']), stamps)
        else:
            frame = emd_frame(emd_decompose(series.values, options['max_imfs']), stamps)
        self.emit_frame(frame, options['out'])
