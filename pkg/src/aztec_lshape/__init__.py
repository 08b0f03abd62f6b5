"""Weighted domino tilings of Aztec diamonds with a corner removed.

Exact counts (enumeration and Kasteleyn determinants), the asymptotic
expansions in the almost-maximal, large, critical and small corner regimes,
the Tracy-Widom distribution, and a domino shuffling sampler.
"""

from .errors import (AccuracyError, AztecError, CapacityError, ParameterError, RegimeError,
                     StructureError, UntileableError)
from .exact_count import (ExactCount, aztec_closed_form, count, frozen_probability,
                          mirror_closed_form, ratio)
from .painleve import log_FTW, solve_hastings_mcleod
from .regimes import RegimeEstimate, identity_checks, regime_dispatch
from .regions import CellGrid, DominoType, RegionSpec, build_graph, build_region
from .sampler import Tiling, estimate_frozen_probability, render_svg, sample_tiling
from .saddles import edge_constants, kappa2, saddle_data, solve_z0

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "AztecError", "CapacityError", "ParameterError", "RegimeError",
    "StructureError", "UntileableError", "ExactCount", "aztec_closed_form", "count",
    "frozen_probability", "mirror_closed_form", "ratio", "log_FTW", "solve_hastings_mcleod",
    "RegimeEstimate", "identity_checks", "regime_dispatch", "CellGrid", "DominoType",
    "RegionSpec", "build_graph", "build_region", "Tiling", "estimate_frozen_probability",
    "render_svg", "sample_tiling", "edge_constants", "kappa2", "saddle_data", "solve_z0",
]
