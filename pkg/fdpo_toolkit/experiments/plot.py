"""
    Self-contained SVG line charts of a summary: one line and one confidence band per algorithm.
"""
import logging
from pathlib import Path
from typing import Optional

import matplotlib
import numpy as np
import pandas as pd
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from fdpo_toolkit.exceptions import EmptySummaryError


logger = logging.getLogger(__name__)

SVG_RC_PARAMS = {
    # Deterministic element ids, text as <text> elements:
    'svg.hashsalt': 'fdpo_toolkit',
    'svg.fonttype': 'none',
}


def line_gid(algorithm: str) -> str:
    return f'line-{algorithm}'


def band_gid(algorithm: str) -> str:
    return f'band-{algorithm}'


def emit_plot(
    summary: pd.DataFrame,
    path: Path,
    *,
    xlabel: str = 'sweep value',
    ylabel: str = 'suboptimality',
    log_x: Optional[bool] = None,
) -> Path:
    """
    Draw summarize() output as an SVG file. ``log_x=None`` picks a log scale when
    the sweep values span more than two decades.
    """
    if summary is None or summary.empty:
        raise EmptySummaryError('Nothing to plot: the summary is empty')
    if summary[['mean', 'half_width']].isna().to_numpy().any():
        raise EmptySummaryError('Nothing to plot: the summary has empty cells')

    sweep_values = summary['sweep_value'].to_numpy(dtype=float)
    if log_x is None:
        log_x = bool(np.all(sweep_values > 0) and sweep_values.max() / sweep_values.min() > 100)

    path = Path(path)
    with matplotlib.rc_context(SVG_RC_PARAMS):
        figure = Figure(figsize=(6.4, 4.0))
        FigureCanvasSVG(figure)
        axes = figure.add_subplot()
        for algorithm, group in summary.groupby('algorithm', sort=False):
            x = group['sweep_value'].to_numpy(dtype=float)
            mean = group['mean'].to_numpy(dtype=float)
            half_width = group['half_width'].to_numpy(dtype=float)
            (line,) = axes.plot(x, mean, marker='o', markersize=3, label=algorithm, gid=line_gid(algorithm))
            axes.fill_between(
                x, mean - half_width, mean + half_width, color=line.get_color(), alpha=0.2, gid=band_gid(algorithm)
            )
        if log_x:
            axes.set_xscale('log')
        axes.set_xlabel(xlabel)
        axes.set_ylabel(ylabel)
        axes.legend()
        figure.tight_layout()
        figure.savefig(path, format='svg', metadata={'Date': None})

    logger.info('Plot of %i algorithms written to %s', summary['algorithm'].nunique(), path)
    return path
