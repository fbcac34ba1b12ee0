"""Exact blow-up ranks of matrix spaces over small finite fields."""

from blowuprank.config import SearchConfig, Settings, load_settings
from blowuprank.construct import (
    check_hypothesis,
    construct_from_polynomial,
    construct_remark_f2,
    construct_skew3,
    construct_theorem2,
    verify_counterexample,
)
from blowuprank.core import BlowupError
from blowuprank.gf import FieldSpec, field_make
from blowuprank.higman import (
    build_frobenius_pencil,
    higman_linearize,
    higman_reduce,
    pad_pencil,
    verify_higman,
)
from blowuprank.matfq import MatrixFq, mat_rank
from blowuprank.ncpoly import (
    NcPoly,
    ev_nonzero_witness,
    ncpoly_eval,
    ncpoly_parse,
    singular_census,
)
from blowuprank.pencil import (
    LinearMatrix,
    RankCertificate,
    SearchMode,
    blowup_profile,
    blowup_rank,
    pencil_rank,
)

__version__ = "0.1.0"

__all__ = [
    # Errors
    "BlowupError",
    # Config
    "SearchConfig",
    "Settings",
    "load_settings",
    # Fields and matrices
    "FieldSpec",
    "MatrixFq",
    "field_make",
    "mat_rank",
    # Polynomials
    "NcPoly",
    "ev_nonzero_witness",
    "ncpoly_eval",
    "ncpoly_parse",
    "singular_census",
    # Pencils
    "LinearMatrix",
    "RankCertificate",
    "SearchMode",
    "blowup_profile",
    "blowup_rank",
    "pencil_rank",
    # Linearization
    "build_frobenius_pencil",
    "higman_linearize",
    "higman_reduce",
    "pad_pencil",
    "verify_higman",
    # Constructions
    "check_hypothesis",
    "construct_from_polynomial",
    "construct_remark_f2",
    "construct_skew3",
    "construct_theorem2",
    "verify_counterexample",
]
