"""Concatenated conjugate (CSS) code pairs over finite fields.

Inner conjugate pairs over GF(q) are glued to an outer GRS pair over GF(q^k)
through trace-dual bases; the result is decoded in two stages (inner
coset-leader tables, then outer bounded-distance GRS decoding).
"""
from ._accel import USE_NUMBA
from .codes import GrsCode, LinearCode, QuotientCode, dual, grs_new
from .concat import (
    ConcatenatedPair,
    build_parity_check,
    concatenate,
    encode,
    outer_pair,
    pi1,
    pi2,
    verify_theorem1,
)
from .conjugate import ConjugateCodePair, SyndromeTable, build_syndrome_table, pair_new
from .decoder import DecodeReport, build_tables, syndrome_only_decode, two_stage_decode
from .errors import CodeError, CSSViolationError
from .evaluate import ChannelModel, EvalReport, monte_carlo, outer_tail_bound
from .galois import FieldTower, make_tower
from .serialize import load

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA",
    "FieldTower",
    "make_tower",
    "LinearCode",
    "QuotientCode",
    "GrsCode",
    "dual",
    "grs_new",
    "ConjugateCodePair",
    "SyndromeTable",
    "pair_new",
    "build_syndrome_table",
    "ConcatenatedPair",
    "concatenate",
    "outer_pair",
    "pi1",
    "pi2",
    "build_parity_check",
    "verify_theorem1",
    "encode",
    "DecodeReport",
    "build_tables",
    "two_stage_decode",
    "syndrome_only_decode",
    "ChannelModel",
    "EvalReport",
    "monte_carlo",
    "outer_tail_bound",
    "CodeError",
    "CSSViolationError",
    "load",
]
