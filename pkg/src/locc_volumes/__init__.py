"""Accessible and source volumes of pure states under deterministic LOCC.

Covers bipartite states, both three-qubit SLOCC classes (W and GHZ), the
convertibility predicates, a Monte-Carlo oracle for every closed form and the
inverse map from measures back to state parameters.
"""
__version__ = "0.1.0"

from .characterize import (InversionResult, invert_ghz_generic, invert_ghz_mes,
                           invert_ghz_vanishing, invert_w, measure)
from .convert import ConvertDecision, FailedCondition, convertible, majorizes
from .errors import *  # noqa: F401,F403
from .oracle import VolumeEstimate, mc_volume, verify_all
from .states import (GHZ_STATE, W_STATE, GhzParams, SchmidtVector, WParams, canonicalize_ghz,
                     classify_ghz, validate_ghz, validate_w)
from .volumes import MeasureTuple, VolumeReport, bipartite_volumes, concurrences, volumes

__all__ = [
    "ConvertDecision", "FailedCondition", "GHZ_STATE", "GhzParams", "InversionResult",
    "MeasureTuple", "SchmidtVector", "VolumeEstimate", "VolumeReport", "W_STATE", "WParams",
    "bipartite_volumes", "canonicalize_ghz", "classify_ghz", "concurrences", "convertible",
    "invert_ghz_generic", "invert_ghz_mes", "invert_ghz_vanishing", "invert_w", "majorizes",
    "mc_volume", "measure", "validate_ghz", "validate_w", "verify_all", "volumes",
]
