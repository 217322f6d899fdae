"""Sparse random network coding with a small allowed-coefficient set.

Coding vectors carry exactly m nonzeros drawn from a tiny set of
primitive field elements, so a per-packet header shrinks from n field
symbols to m compact (set index, position) pairs.  The package provides
the field arithmetic, the sparse-header codec, source/recode/decode
operations, a Monte-Carlo experiment engine, and a packet-file format.
"""

from .coding import (
    CodedPacket,
    CodingParams,
    ForcedRowRng,
    InsufficientRankError,
    NodeBuffer,
    RecodeError,
    RecodeOutcome,
    buffer_from_packets,
    full_rank_probability_trial,
    k_opt,
    random_sparse_vector,
    recode,
    sink_decode,
    source_encode,
)
from .gf import DEFAULT_POLYS, FieldMismatchError, FieldSpec, field, field_for_order
from .header import (
    AllowedSet,
    HeaderBits,
    MalformedHeaderError,
    SparseRow,
    decode_header,
    default_allowed_set,
    encode_header,
    expand,
    header_len_ecc,
    header_len_rlnc,
    header_len_ssac,
    position_bits,
    sparsify,
)
from .linalg import GfMatrix, GfVector, RowSpace, left_solve, rank, solve_full_rank
from .packetfile import PacketFileError, read_packets, write_packets
from .sim import ExperimentConfig, ExperimentResult, run_experiment, trial_rng

__version__ = "0.1.0"

__all__ = [
    "AllowedSet",
    "CodedPacket",
    "CodingParams",
    "DEFAULT_POLYS",
    "ExperimentConfig",
    "ExperimentResult",
    "FieldMismatchError",
    "FieldSpec",
    "ForcedRowRng",
    "GfMatrix",
    "GfVector",
    "HeaderBits",
    "InsufficientRankError",
    "MalformedHeaderError",
    "NodeBuffer",
    "PacketFileError",
    "RecodeError",
    "RecodeOutcome",
    "RowSpace",
    "SparseRow",
    "buffer_from_packets",
    "decode_header",
    "default_allowed_set",
    "encode_header",
    "expand",
    "field",
    "field_for_order",
    "full_rank_probability_trial",
    "header_len_ecc",
    "header_len_rlnc",
    "header_len_ssac",
    "k_opt",
    "left_solve",
    "position_bits",
    "random_sparse_vector",
    "rank",
    "read_packets",
    "recode",
    "run_experiment",
    "sink_decode",
    "solve_full_rank",
    "source_encode",
    "sparsify",
    "trial_rng",
    "write_packets",
]
