"""
Management command to forecast s(t + 1) with a saved model.
"""
import pandas as pd

from ramps.services.data_io import iso_timestamps, load_csv
from ramps.services.experiment_config import DECOMPOSITION_CAUSAL
from ramps.services.model_store import load_model
from ramps.services.pipeline import build_causal_features, build_features, forecast

from ._base import RampcastCommand


class Command(RampcastCommand):
    help = 'Predict the next-step wind speed for every row of a series with a saved model'

    def add_arguments(self, parser):
        parser.add_argument('--model', required=True, help='Model JSON written by `train`')
        parser.add_argument('--data', required=True, help='Input timestamp,speed_mps CSV at hub height')
        parser.add_argument('--dt', type=int, help='Expected sampling interval (default: from the model record)')
        parser.add_argument('--out', help='Output timestamp,speed_mps CSV of predictions (default: stdout)')

    def run(self, **options):
        model, meta = load_model(options['model'])
        series = load_csv(options['data'], options['dt'] or meta.get('dt', 600))

        # Causal models only forecast past their training window
        if meta.get('decomposition') == DECOMPOSITION_CAUSAL:
            _, features = build_causal_features(series.values, int(meta['train_end']))
        else:
            features = build_features(series.values)

        predicted = forecast(model, features, series.values)
        frame = pd.DataFrame({
            'timestamp': iso_timestamps(series.timestamps[features.index_map + 1]),
            'speed_mps': predicted,
        })
        self.emit_frame(frame, options['out'])
