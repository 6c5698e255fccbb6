"""Index-coded PSK: code enumeration, mapping optimization and AWGN simulation."""

__version__ = "0.1.0"

from .codes import (  # noqa: E402
    DecodabilityError,
    EffectiveSet,
    EffectiveSetFamily,
    IndexCode,
    effective_set_size,
    effective_sets,
    enumerate_all,
    is_decodable,
    parse_code,
)
from .geometry import Constellation, DistanceProfile, PskMapping, distance_profile, psk_icg  # noqa: E402
from .gf2 import BitMatrix, BitVec, Subspace, rank, row_space  # noqa: E402
from .optimizer import CandidatePair, CascadeResult, ScaleGuardError, priority_cascade, brute_force_oracle  # noqa: E402
from .problem import IndexCodingProblem, Receiver, load_problem, single_unicast  # noqa: E402

__all__ = [
    "BitMatrix",
    "BitVec",
    "CandidatePair",
    "CascadeResult",
    "Constellation",
    "DecodabilityError",
    "DistanceProfile",
    "EffectiveSet",
    "EffectiveSetFamily",
    "IndexCode",
    "IndexCodingProblem",
    "PskMapping",
    "Receiver",
    "ScaleGuardError",
    "Subspace",
    "priority_cascade",
    "brute_force_oracle",
    "distance_profile",
    "effective_set_size",
    "effective_sets",
    "enumerate_all",
    "is_decodable",
    "load_problem",
    "parse_code",
    "psk_icg",
    "rank",
    "single_unicast",
]
