"""Agreement checks between the direct and spectral engines."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .direct import build_walk_operator, probability_history
from .spectral import ModeMatrix, SpectralWalk, all_spectra
from .state import StateVector

COMPARE_THRESHOLD = 1e-8


def engine_discrepancy(
    state0: StateVector,
    t: int,
    mode_hook: Callable[[ModeMatrix], ModeMatrix] | None = None,
) -> float:
    """max over s = 0..t and nodes n of |p_spectral(n, s) - p_direct(n, s)|."""
    cfg = state0.config
    history = probability_history(state0, build_walk_operator(cfg), t)
    walk = SpectralWalk(state0, all_spectra(cfg, mode_hook))
    worst = 0.0
    for s in range(t + 1):
        worst = max(worst, float(np.max(np.abs(walk.probabilities_at(s) - history[s]))))
    return worst


def corrupt_mode(mode: ModeMatrix) -> ModeMatrix:
    """Unitary but wrong mode matrix: flips the sign of the last column.

    Used to confirm the comparison harness actually detects a broken engine.
    """
    return ModeMatrix(mode.k, mode.matrix @ np.diag([1.0, 1.0, 1.0, -1.0]))
