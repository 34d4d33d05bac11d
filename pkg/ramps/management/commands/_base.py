"""
Shared plumbing for the rampcast management commands.
"""

import logging

import pandas as pd
from django.core.management.base import BaseCommand, CommandError

from ramps.exceptions import RampcastError

VERBOSITY_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG, 3: logging.DEBUG}


class RampcastCommand(BaseCommand):
    """
    Base class for the rampcast subcommands.

    Subclasses implement `run(**options)`. Domain and file errors leave as a
    CommandError with exit status 1 and a one-line message that starts with
    the error class name; stdout is reserved for data.
    """

    def handle(self, *args, **options):
        if options.get('verbosity', 1) != 1:
            logging.getLogger('ramps').setLevel(VERBOSITY_LEVELS.get(options['verbosity'], logging.DEBUG))
        try:
            return self.run(**options)
        except (RampcastError, OSError, IndexError, pd.errors.ParserError) as e:
            message = ' '.join(str(e).split())
            raise CommandError(f"{type(e).__name__}: {message}", returncode=1) from e

    def run(self, **options):
        raise NotImplementedError('subclasses of RampcastCommand must provide a run() method')

    def emit(self, text: str) -> None:
        self.stdout.write(text.rstrip('\n'))

    def emit_frame(self, frame: pd.DataFrame, out: str = None, **to_csv) -> None:
        """Write a frame to `out`, or as CSV on stdout when no path is given."""
        if out:
            frame.to_csv(out, index=False, lineterminator='\n', **to_csv)
        else:
            self.emit(frame.to_csv(index=False, lineterminator='\n', **to_csv))


def read_speed_column(path: str) -> pd.DataFrame:
    """
    Read a `timestamp,speed_mps` CSV without the measurement checks of load_csv.

    Predicted speeds may be negative, so prediction files are read here.
    Returns a frame with `timestamp` and `speed_mps` columns.
    """
    frame = pd.read_csv(path)
    if 'speed_mps' not in frame.columns:
        if frame.shape[1] < 2:
            raise pd.errors.ParserError(f"{path}: expected a timestamp column and a speed column")
        frame = frame.rename(columns={frame.columns[0]: 'timestamp', frame.columns[1]: 'speed_mps'})
    return frame[['timestamp', 'speed_mps']]
