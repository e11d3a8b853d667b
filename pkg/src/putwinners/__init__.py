"""Parallel-universes tiebreaking (PUT) winners for STV and Ranked Pairs."""

from .core import (
    PreflibParseError,
    Profile,
    ProfileError,
    UnsupportedFormatError,
    dump_preflib,
    generate_impartial_culture,
    parse_preflib,
    plurality_scores,
    positional_matrix,
    score_features,
)
from .estimators import ProfileFeatures, PutRP, PutSTV
from .graph import DiGraph, build_wmg, tier_partition
from .report import WinnerReport, alpha_discovery
from .rp import max_children, max_children_scc, sample_rp, solve_put_rp_mc, solve_put_rp_naive
from .stv import sample_stv, solve_put_stv

__version__ = "0.1.0"
