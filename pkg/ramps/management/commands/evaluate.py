"""
Management command to score predicted against actual wind speed.
"""
from ramps.services.atmos import TurbineSpec, detect_ramps, power_curve
from ramps.services.evalx import U2_PRINTED, U2_VARIANTS, format_table, metrics, ramp_errors, write_report

from ._base import RampcastCommand, read_speed_column


class Command(RampcastCommand):
    help = 'Compute RMSE, NMSE, R2, Theil U1/U2 and ramp errors of a prediction file'

    def add_arguments(self, parser):
        parser.add_argument('--actual', required=True, help='Actual timestamp,speed_mps CSV at hub height')
        parser.add_argument('--pred', required=True, help='Predicted timestamp,speed_mps CSV')
        parser.add_argument('--model-id', default='model', help='Label of the report row')
        parser.add_argument('--u2-variant', choices=U2_VARIANTS, default=U2_PRINTED, help='Theil U2 denominator')
        parser.add_argument('--threshold', type=float, default=0.10, help='Ramp threshold as a fraction of nominal power')
        parser.add_argument('--out', help='Also write the report row as CSV')

    def run(self, **options):
        actual = read_speed_column(options['actual'])['speed_mps'].to_numpy(dtype=float)
        predicted = read_speed_column(options['pred'])['speed_mps'].to_numpy(dtype=float)

        report = metrics(actual, predicted, model_id=options['model_id'], u2_variant=options['u2_variant'])
        turbine = TurbineSpec()
        actual_power = power_curve(actual.clip(min=0.0), turbine)
        events = detect_ramps(actual_power, options['threshold'], turbine)
        report.r_up, report.r_down = ramp_errors(
            actual_power, power_curve(predicted.clip(min=0.0), turbine), events, turbine.nominal_power
        )

        if options['out']:
            write_report([report], options['out'], include_timing=False)
        self.emit(format_table([report], include_timing=False))
