"""Discrete-time quantum walks on cycles, with and without 1-step memory.

Three routes to the same physics:

* :mod:`cyclewalk.direct` steps explicit unitaries (reference engine),
* :mod:`cyclewalk.spectral` evolves Fourier modes in closed form,
* :mod:`cyclewalk.limiting` gives the time-averaged limiting distribution.
"""

__version__ = "0.1.0"

from .direct import (
    build_shift_memory,
    build_shift_memoryless,
    build_walk_operator,
    evolve,
    position_distribution,
    probability_history,
    running_time_average,
    step,
)
from .errors import *  # noqa: F401,F403
from .limiting import (
    limiting_distribution,
    limiting_probability,
    memoryless_limiting_empirical,
    resonance_selector,
    symmetry_defect,
)
from .spectral import (
    SpectralWalk,
    all_spectra,
    build_mode_matrix,
    forward_fourier,
    inverse_fourier,
    mode_spectrum,
)
from .state import (
    HADAMARD,
    CoinMatrix,
    Distribution,
    StateVector,
    WalkConfig,
    general_state,
    localized_state,
    make_config,
    paper_initial_state,
)
