"""Order-0 ordered-statistics post-processing for failed BP rounds.

When BP exhausts its iterations without matching the syndrome, the last
posterior LLRs still rank the bits by reliability. OSD-0 solves the check
equations on the most-suspect independent columns: sort columns by
ascending posterior (smallest = most likely flipped), take the first
rank-many linearly independent ones, solve, and zero-fill the rest. The
output always reproduces the syndrome, which is the whole point.
"""

from __future__ import annotations

import numpy as np

from paulibp.bp import BatchOutcome, BPConfig, BPDecoder
from paulibp.gf2 import BitMatrix, row_reduce, solve_on_pivots


def osd0(H: BitMatrix, s: np.ndarray, posteriors: np.ndarray) -> np.ndarray:
    """Order-0 OSD solution of H . ê = s guided by posterior LLRs.

    Columns are ranked by ascending posterior, ties broken by original
    column index (argsort is stable). Requires s to lie in the column
    space of H; a full-rank H guarantees that, and an inconsistent
    rank-deficient system raises ValueError.
    """
    posteriors = np.asarray(posteriors, dtype=np.float64)
    if posteriors.shape != (H.cols,):
        raise ValueError(f"expected {H.cols} posteriors, got {posteriors.shape}")
    order = np.argsort(posteriors, kind="stable")
    _, record = row_reduce(H, order)
    return solve_on_pivots(record, s)


def _osd_on_active(dec: BPDecoder, s_full: np.ndarray, post_full: np.ndarray) -> np.ndarray:
    """OSD restricted to the decoder's unpruned columns and non-empty checks.

    Zero-prior columns can never carry an error, so they are excluded from
    the solve and zero-filled afterwards; the syndrome entries of dropped
    checks were already validated to be zero at decode time.
    """
    if dec.active_matrix is None:
        return np.zeros(dec.cols, dtype=np.uint8)
    x_act = osd0(dec.active_matrix, np.asarray(s_full, np.uint8)[dec.row_map], post_full[dec.col_map])
    x = np.zeros(dec.cols, dtype=np.uint8)
    x[dec.col_map] = x_act
    return x


def decode_batch_with_osd(dec: BPDecoder, S: np.ndarray) -> BatchOutcome:
    """BP on the whole batch, then OSD-0 on whatever failed to converge.

    The returned outcome keeps BP's convergence flags and iteration counts;
    only the estimates of non-convergent rows are replaced.
    """
    out = dec.decode_batch(S)
    for b in np.flatnonzero(~out.converged):
        out.estimate[b] = _osd_on_active(dec, S[b], out.posteriors[b])
    return out


def decode_with_osd(code, flavor: str, rule: str, priors: np.ndarray, s: np.ndarray, iter_max: int,
                    llr_clamp: float = 30.0) -> np.ndarray:
    """BP + OSD-0 pipeline for a single syndrome on a stabilizer code.

    Returns a bit vector over the columns of the flavor's decoding matrix
    (2n for SBP on (H_z | H_x), 3n for PDBP/FDBP on H_d) whose syndrome is
    exactly s.
    """
    cfg = BPConfig(flavor=flavor, rule=rule, iter_max=iter_max, llr_clamp=llr_clamp)
    matrix = code.symplectic_decoding_matrix if flavor == "SBP" else code.H_d
    dec = BPDecoder(matrix, priors, cfg)
    out = decode_batch_with_osd(dec, np.asarray(s, dtype=np.uint8)[None, :])
    return out.estimate[0]
