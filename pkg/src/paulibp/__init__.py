"""Binary belief-propagation decoding of quantum LDPC codes.

Three decoder flavors — symplectic (``sbp``), partially decoupled (``pdbp``)
and fully decoupled (``fdbp``) — with min-sum and sum-product update rules,
order-0 OSD post-processing, surface-code constructions (planar and XZZX),
and a Monte Carlo harness for logical-error-rate and threshold estimation.
"""

from paulibp.pauli import (
    PauliString,
    pauli_to_decoupled,
    pauli_to_symplectic,
    decoupled_to_symplectic,
    symplectic_to_decoupled,
    symplectic_to_pauli,
    syndrome_symplectic,
    syndrome_decoupled,
    commutes,
)
from paulibp.gf2 import BitMatrix, TannerGraph, build_tanner, row_reduce, solve_on_pivots
from paulibp.codes import (
    StabilizerCode,
    build_decoupled_matrix,
    build_planar_surface,
    build_xzzx_surface,
    extract_logicals,
)
from paulibp.noise import NoiseModel
from paulibp.bp import BatchOutcome, BPConfig, BPDecoder, BPState, DecodeOutcome, decode
from paulibp.osd import osd0, decode_batch_with_osd, decode_with_osd
from paulibp.sim import (
    CurvePoint,
    SweepRow,
    TrialRecord,
    ThresholdEstimate,
    logical_failure,
    run_point,
    run_trial,
    sweep,
    estimate_threshold,
    wilson_halfwidth,
    wilson_interval,
)

__version__ = "0.1.0"

__all__ = [
    "PauliString",
    "pauli_to_decoupled",
    "pauli_to_symplectic",
    "decoupled_to_symplectic",
    "symplectic_to_decoupled",
    "symplectic_to_pauli",
    "syndrome_symplectic",
    "syndrome_decoupled",
    "commutes",
    "BitMatrix",
    "TannerGraph",
    "build_tanner",
    "row_reduce",
    "solve_on_pivots",
    "StabilizerCode",
    "build_decoupled_matrix",
    "build_planar_surface",
    "build_xzzx_surface",
    "extract_logicals",
    "NoiseModel",
    "BatchOutcome",
    "BPConfig",
    "BPDecoder",
    "BPState",
    "DecodeOutcome",
    "decode",
    "osd0",
    "decode_batch_with_osd",
    "decode_with_osd",
    "CurvePoint",
    "SweepRow",
    "TrialRecord",
    "ThresholdEstimate",
    "logical_failure",
    "run_point",
    "run_trial",
    "sweep",
    "estimate_threshold",
    "wilson_halfwidth",
    "wilson_interval",
]
