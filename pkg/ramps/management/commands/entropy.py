"""
Management command to compare WT and EMD log energy entropy of a predicted ramp signal.
"""
import pandas as pd

from ramps.services.atmos import TurbineSpec
from ramps.services.pipeline import entropy_analysis

from ._base import RampcastCommand, read_speed_column


class Command(RampcastCommand):
    help = 'Log energy entropy of the low-frequency WT and EMD parts of a predicted ramp signal'

    def add_arguments(self, parser):
        parser.add_argument('--pred', required=True, help='Predicted timestamp,speed_mps CSV at hub height')
        parser.add_argument('--hub-height', type=float, default=90.0, help='Turbine hub height in m')

    def run(self, **options):
        predicted = read_speed_column(options['pred'])['speed_mps'].to_numpy(dtype=float)
        values = entropy_analysis(predicted, TurbineSpec(hub_height=options['hub_height']))
        self.emit_frame(pd.DataFrame([values], columns=['wt_entropy', 'emd_entropy']))
