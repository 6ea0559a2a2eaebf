"""Time-series bookkeeping shared by both evolution engines."""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class EvolutionReport:
    """Diagnostics recorded while evolving a state.

    ``trace`` holds the matrix trace for the Lindblad engine and the
    phase-space mass for the Kramers engine.  ``min_eig`` and the x moments
    are engine specific and stay None where they do not apply.  All recorded
    series share the length of ``times``, which is strictly increasing.
    """

    times: np.ndarray
    trace: np.ndarray
    mean_p: np.ndarray
    var_p: np.ndarray
    dist_stationary: np.ndarray
    min_eig: np.ndarray | None = None
    herm_defect: np.ndarray | None = None
    mean_x: np.ndarray | None = None
    var_x: np.ndarray | None = None
    snapshots: list = field(default_factory=list)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        n = self.times.size
        for name in ("trace", "mean_p", "var_p", "dist_stationary",
                     "min_eig", "herm_defect", "mean_x", "var_x"):
            series = getattr(self, name)
            if series is None:
                continue
            series = np.asarray(series, dtype=float)
            setattr(self, name, series)
            if series.size != n:
                raise ValueError(f"series {name!r} has length {series.size}, expected {n}")
        if n > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("report times must be strictly increasing")

    def columns(self):
        """(names, 2D float array) of every recorded series, for CSV export."""
        names = ["t", "trace", "mean_p", "var_p", "dist_stationary"]
        cols = [self.times, self.trace, self.mean_p, self.var_p, self.dist_stationary]
        for name in ("min_eig", "herm_defect", "mean_x", "var_x"):
            series = getattr(self, name)
            if series is not None:
                names.append(name)
                cols.append(series)
        return names, np.column_stack(cols)
