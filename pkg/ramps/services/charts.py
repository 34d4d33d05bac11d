"""
Static SVG chart of actual vs predicted test-window wind speed.
"""

import logging
from typing import Dict

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# Set up logging
logger = logging.getLogger(__name__)


def plot_predictions(
    timestamps: np.ndarray,
    actual: np.ndarray,
    predictions: Dict[str, np.ndarray],
    path: str,
    title: str = '',
) -> None:
    """
    Draw the actual speed and one line per model, then save as SVG.

    Args:
        timestamps: epoch seconds of the test targets
        actual: actual hub-height speed
        predictions: model id -> predicted speed (same length as actual)
        path: output .svg path
        title: figure title
    """
    hours = (np.asarray(timestamps) - timestamps[0]) / 3600.0
    fig, ax = plt.subplots(figsize=(12, 4.5))
    try:
        ax.plot(hours, actual, color='black', linewidth=1.4, label='actual')
        for model_id, predicted in predictions.items():
            ax.plot(hours, predicted, linewidth=0.8, alpha=0.85, label=model_id)
        ax.set_xlabel('hours into test window')
        ax.set_ylabel('wind speed at hub height (m/s)')
        if title:
            ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend(loc='upper right', ncol=4, fontsize='small')
        fig.tight_layout()
        # No creation date in the SVG header
        fig.savefig(path, format='svg', metadata={'Date': None})
    finally:
        plt.close(fig)
    logger.info(f"Saved chart with {len(predictions)} model line(s) to {path}")
