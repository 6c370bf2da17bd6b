"""Boolean networks, their most permissive semantics, and continuous Petri net encodings."""

from .encoding import EncodedNet, decode_support, encode, marking_of, mu_contains
from .limits import LimSequence, abstract_sequence, construct_lim_sequence, mp_limreach
from .mp import mp_reach, mp_reach_boolean, three_phase_witness
from .network import BooleanNetwork, fixed_points, parse_bn, reach_set
from .petri import Net, enabling_degree, fire_continuous, fire_discrete
from .symbolic import build_arg, build_srt, max_firing_set, state_equation_feasible

__all__ = [
    "BooleanNetwork",
    "EncodedNet",
    "LimSequence",
    "Net",
    "abstract_sequence",
    "build_arg",
    "build_srt",
    "construct_lim_sequence",
    "decode_support",
    "enabling_degree",
    "encode",
    "fire_continuous",
    "fire_discrete",
    "fixed_points",
    "marking_of",
    "max_firing_set",
    "mp_limreach",
    "mp_reach",
    "mp_reach_boolean",
    "mu_contains",
    "parse_bn",
    "reach_set",
    "state_equation_feasible",
    "three_phase_witness",
]
