"""
Management command to move a series to hub height, convert it to power and label ramps.
"""
from django.core.management.base import CommandError

from ramps.services.atmos import TurbineSpec, detect_ramps, export_ramps, log_law_transform, power_curve
from ramps.services.data_io import get_site, load_csv, series_frame

from ._base import RampcastCommand


class Command(RampcastCommand):
    help = 'Log-law transform a speed series to hub height, convert to power and detect ramp events'

    def add_arguments(self, parser):
        parser.add_argument('--data', required=True, help='Input timestamp,speed_mps CSV')
        parser.add_argument('--dt', type=int, default=600, help='Expected sampling interval in seconds')
        parser.add_argument('--data-height', type=float, default=10.0, help='Measurement height in m')
        parser.add_argument('--site', help='Catalog site whose roughness length to use')
        parser.add_argument('--z0', type=float, help='Surface roughness length in m (overrides --site)')
        parser.add_argument('--hub-height', type=float, default=90.0, help='Turbine hub height in m')
        parser.add_argument('--threshold', type=float, default=0.10, help='Ramp threshold as a fraction of nominal power')
        parser.add_argument('--out', help='Output timestamp,speed_mps,power_w CSV (default: stdout)')
        parser.add_argument('--ramps', help='Output index,direction,magnitude_w CSV of ramp events')

    def run(self, **options):
        if options['z0'] is not None:
            z0 = options['z0']
        elif options['site']:
            z0 = get_site(options['site']).roughness_length
        else:
            raise CommandError('transform needs --z0 or --site for the roughness length', returncode=1)

        turbine = TurbineSpec(hub_height=options['hub_height'])
        series = load_csv(options['data'], options['dt'], height=options['data_height'])
        hub = log_law_transform(series, z0, turbine.hub_height)
        power = power_curve(hub.values, turbine)

        frame = series_frame(hub)
        frame['power_w'] = power
        self.emit_frame(frame, options['out'])

        events = detect_ramps(power, options['threshold'], turbine)
        if options['ramps']:
            export_ramps(events, options['ramps'])
