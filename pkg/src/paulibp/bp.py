"""Log-domain binary belief propagation with three decoder flavors.

All three flavors run the same flooding-schedule engine:

- SBP decodes the symplectic matrix (H_z | H_x) over 2n bits with marginal
  flip priors.
- PDBP decodes the decoupled matrix H_d = (H_z | H_x | H_x ^ H_z) over 3n
  bits as a plain binary code, one prior per Pauli component.
- FDBP decodes H_d while folding the per-qubit restraint
  e_i + e_{i+n} + e_{i+2n} <= 1 into the horizontal update (the denominator
  product skips the partner column sharing the check), the vertical update
  (each incoming summand is corrected by -ln(1 - p) of that check's partner
  column), and the hard decision (per-qubit argmin).

Messages are stored check-major in a padded (batch, checks, width) layout.
Every check row is a sequence of two-slot groups: for FDBP the two columns
of one qubit that appear in that row share a group (each row touches zero
or two of a qubit's three columns, so groups never overflow); for SBP/PDBP
every column is a singleton group. Pad slots hold +inf, which is the
identity for every reduction used here (tanh(+inf/2) = 1, |+inf| ignored by
minima, sign +1), so no masking is needed in the update formulas.

Zero-probability priors would produce infinite LLRs; those columns are
pruned before decoding and reported as deterministic zeros, and checks left
with no support are dropped (their syndrome bits are validated to be 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from paulibp.gf2 import BitMatrix

FLAVORS = ("SBP", "PDBP", "FDBP")
RULES = ("min_sum", "sum_product")


@dataclass(frozen=True)
class BPConfig:
    """Decoder selection: flavor x update rule, iteration cap, LLR clamp."""

    flavor: str
    rule: str
    iter_max: int
    llr_clamp: float = 30.0

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"flavor must be one of {FLAVORS}, got {self.flavor!r}")
        if self.rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}, got {self.rule!r}")
        if self.iter_max < 1:
            raise ValueError("iter_max must be at least 1")
        if not self.llr_clamp > 0:
            raise ValueError("llr_clamp must be positive")


@dataclass
class BPState:
    """Message arrays for a batch of syndromes on one decoder layout.

    m_vc and m_cv are (batch, active checks, width) with +inf padding;
    posteriors is (batch, active columns); gamma holds the clipped prior
    LLRs of the active columns (shared across the batch).
    """

    gamma: np.ndarray
    m_vc: np.ndarray
    m_cv: np.ndarray
    posteriors: np.ndarray
    syndrome: np.ndarray
    iteration: int = 0


@dataclass
class DecodeOutcome:
    converged: bool
    estimate: np.ndarray
    posteriors: np.ndarray
    iterations_used: int


@dataclass
class BatchOutcome:
    """Vectorized DecodeOutcome: one row per syndrome in the batch."""

    converged: np.ndarray
    estimate: np.ndarray
    posteriors: np.ndarray
    iterations: np.ndarray

    def __getitem__(self, b: int) -> DecodeOutcome:
        return DecodeOutcome(
            bool(self.converged[b]),
            self.estimate[b],
            self.posteriors[b],
            int(self.iterations[b]),
        )


def _exclusive_prod(g: np.ndarray) -> np.ndarray:
    """Per-position product of all OTHER entries along the last axis."""
    pref = np.ones_like(g)
    if g.shape[-1] > 1:
        pref[..., 1:] = np.cumprod(g[..., :-1], axis=-1)
        rev = np.cumprod(g[..., ::-1], axis=-1)
        suf = np.ones_like(g)
        suf[..., :-1] = rev[..., ::-1][..., 1:]
        return pref * suf
    return pref


def _exclusive_min(a: np.ndarray) -> np.ndarray:
    """Per-position minimum of all OTHER entries along the last axis (+inf if none)."""
    pref = np.full_like(a, np.inf)
    suf = np.full_like(a, np.inf)
    if a.shape[-1] > 1:
        pref[..., 1:] = np.minimum.accumulate(a[..., :-1], axis=-1)
        rev = np.minimum.accumulate(a[..., ::-1], axis=-1)
        suf[..., :-1] = rev[..., ::-1][..., 1:]
    return np.minimum(pref, suf)


class BPDecoder:
    """Precomputed decoding layout for one (matrix, priors, config) triple.

    Construction prunes zero-prior columns and empty checks, builds the
    padded group layout, and caches everything `decode_batch` needs, so a
    Monte Carlo run pays the setup cost once per simulation point.
    """

    def __init__(self, matrix: BitMatrix | np.ndarray, priors: np.ndarray, cfg: BPConfig):
        dense = matrix.to_dense() if isinstance(matrix, BitMatrix) else np.asarray(matrix, dtype=np.uint8)
        priors = np.asarray(priors, dtype=np.float64)
        if priors.ndim != 1 or priors.shape[0] != dense.shape[1]:
            raise ValueError("priors length must equal the column count")
        if ((priors < 0) | (priors >= 1)).any():
            raise ValueError("priors must lie in [0, 1)")
        self.cfg = cfg
        self.m_full, self.cols = dense.shape

        if cfg.flavor == "FDBP":
            if self.cols % 3:
                raise ValueError("FDBP needs a decoupled matrix with 3n columns")
            self.nq = self.cols // 3
        else:
            self.nq = 0

        active = priors > 0
        self.col_map = np.flatnonzero(active)
        self.n_act = self.col_map.size
        sub = dense[:, self.col_map]
        nnz = sub.sum(axis=1)
        self.row_map = np.flatnonzero(nnz > 0)
        self.dropped_rows = np.flatnonzero(nnz == 0)
        self.m_act = self.row_map.size
        A = sub[self.row_map]
        self.active_matrix = BitMatrix(A) if self.m_act else None

        with np.errstate(divide="ignore"):
            g = np.log((1.0 - priors[active]) / priors[active])
        self.gamma = np.clip(g, -cfg.llr_clamp, cfg.llr_clamp)

        self._build_layout(A, priors[active])
        self._A_f32 = A.astype(np.float32) if self.m_act else None

    def _build_layout(self, A: np.ndarray, p_act: np.ndarray) -> None:
        rows_groups: list[list[list[int]]] = []
        for r in range(self.m_act):
            cols = np.flatnonzero(A[r])
            if self.cfg.flavor == "FDBP":
                buckets: dict[int, list[int]] = {}
                for lc in cols:
                    buckets.setdefault(int(self.col_map[lc]) % self.nq, []).append(int(lc))
                groups = list(buckets.values())
                if any(len(g) > 2 for g in groups):
                    raise ValueError(
                        "a check touches all three columns of one qubit; "
                        "not a decoupled parity-check matrix"
                    )
            else:
                groups = [[int(lc)] for lc in cols]
            rows_groups.append(groups)

        self.G = max((len(g) for g in rows_groups), default=1)
        self.W = 2 * self.G
        rr, ww, elocal, ecorr = [], [], [], []
        self.edge_slot: dict[tuple[int, int], tuple[int, int]] = {}
        for r, groups in enumerate(rows_groups):
            for gi, members in enumerate(groups):
                for k, lc in enumerate(members):
                    slot = 2 * gi + k
                    rr.append(r)
                    ww.append(slot)
                    elocal.append(lc)
                    # restraint bookkeeping: the prior mass the partner column
                    # gives up when this column fires in this check
                    partner = members[1 - k] if len(members) == 2 else None
                    ecorr.append(np.log1p(-p_act[partner]) if partner is not None else 0.0)
                    self.edge_slot[(int(self.row_map[r]), int(self.col_map[lc]))] = (r, slot)
        self.rr = np.asarray(rr, dtype=np.int64)
        self.ww = np.asarray(ww, dtype=np.int64)
        self.elocal = np.asarray(elocal, dtype=np.int64)
        self.ecorr = np.asarray(ecorr, dtype=np.float64)
        self.eperm = np.argsort(self.elocal, kind="stable")
        self.uniq_cols, self.seg_starts = np.unique(self.elocal[self.eperm], return_index=True)

    # --- one BP iteration, split into the classic three steps ---

    def init_state(self, syndrome_act: np.ndarray) -> BPState:
        B = syndrome_act.shape[0]
        m_vc = np.full((B, self.m_act, self.W), np.inf)
        m_vc[:, self.rr, self.ww] = self.gamma[self.elocal]
        return BPState(
            gamma=self.gamma,
            m_vc=m_vc,
            m_cv=np.zeros_like(m_vc),
            posteriors=np.tile(self.gamma, (B, 1)),
            syndrome=syndrome_act,
        )

    def horizontal_update(self, state: BPState) -> None:
        """Check-to-variable messages from the current variable-to-check ones."""
        c = self.cfg.llr_clamp
        B = state.m_vc.shape[0]
        shape4 = (B, self.m_act, self.G, 2)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            t4 = np.tanh(state.m_vc * 0.5).reshape(shape4)
            P_pair = np.repeat(_exclusive_prod(t4[..., 0] * t4[..., 1]), 2, axis=-1)
            P_self = P_pair * t4[..., ::-1].reshape(B, self.m_act, self.W)

            if self.cfg.rule == "min_sum":
                s4 = np.where(state.m_vc < 0, -1.0, 1.0).reshape(shape4)
                a4 = np.abs(state.m_vc).reshape(shape4)
                sign_pair = np.repeat(_exclusive_prod(s4[..., 0] * s4[..., 1]), 2, axis=-1)
                min_pair = np.repeat(_exclusive_min(np.minimum(a4[..., 0], a4[..., 1])), 2, axis=-1)
                sign_self = sign_pair * s4[..., ::-1].reshape(B, self.m_act, self.W)
                min_self = np.minimum(min_pair, a4[..., ::-1].reshape(B, self.m_act, self.W))

            if self.cfg.flavor != "FDBP":
                syn_sign = (1.0 - 2.0 * state.syndrome)[..., None]
                if self.cfg.rule == "min_sum":
                    m = syn_sign * sign_self * np.minimum(min_self, c)
                else:
                    m = syn_sign * (np.log1p(P_self) - np.log1p(-P_self))
            else:
                fired = (state.syndrome == 1)[..., None]
                if self.cfg.rule == "sum_product":
                    num = np.where(fired, np.log1p(-P_self), np.log1p(P_self))
                    den = np.where(fired, np.log1p(P_pair), np.log1p(-P_pair))
                    m = num - den
                else:
                    base0 = sign_self * np.minimum(min_self, c)
                    base1 = -sign_pair * np.minimum(min_pair, c)
                    corr = np.log1p(-P_self) - np.log1p(-P_pair)
                    corr = np.where(np.isnan(corr), 0.0, corr)
                    m = np.where(fired, base1, base0) + corr

            m = np.where(np.isnan(m), 0.0, m)
        state.m_cv = np.clip(m, -c, c)

    def vertical_update(self, state: BPState) -> None:
        """Variable-to-check messages and posterior LLRs from check-to-variable ones."""
        c = self.cfg.llr_clamp
        B = state.m_cv.shape[0]
        x = state.m_cv[:, self.rr, self.ww] - self.ecorr
        totals = np.zeros((B, self.n_act))
        totals[:, self.uniq_cols] = np.add.reduceat(x[:, self.eperm], self.seg_starts, axis=1)
        state.posteriors = self.gamma + totals
        m_new = self.gamma[self.elocal] + (totals[:, self.elocal] - x)
        m_new = np.where(np.isnan(m_new), 0.0, m_new)
        state.m_vc[:, self.rr, self.ww] = np.clip(m_new, -c, c)

    def hard_decision(self, state: BPState) -> np.ndarray:
        """Estimates over the active columns, shape (batch, active columns) uint8."""
        if self.cfg.flavor != "FDBP":
            return (state.posteriors < 0).astype(np.uint8)
        B = state.posteriors.shape[0]
        full = np.full((B, self.cols), np.inf)
        full[:, self.col_map] = state.posteriors
        g3 = full.reshape(B, 3, self.nq)
        winner = g3.argmin(axis=1)
        hit = (g3.min(axis=1) < 0).astype(np.uint8)
        e3 = np.zeros((B, 3, self.nq), dtype=np.uint8)
        np.put_along_axis(e3, winner[:, None, :], hit[:, None, :], axis=1)
        return e3.reshape(B, self.cols)[:, self.col_map]

    def syndromes_of(self, e_act: np.ndarray) -> np.ndarray:
        parity = e_act.astype(np.float32) @ self._A_f32.T
        return parity.astype(np.int64).astype(np.uint8) & 1

    @staticmethod
    def _compact(state: BPState, keep: np.ndarray) -> BPState:
        return BPState(
            gamma=state.gamma,
            m_vc=state.m_vc[keep],
            m_cv=state.m_cv[keep],
            posteriors=state.posteriors[keep],
            syndrome=state.syndrome[keep],
            iteration=state.iteration,
        )

    def decode_batch(self, S: np.ndarray) -> BatchOutcome:
        """Decode a (batch, checks) syndrome array; converged rows drop out early."""
        S = np.asarray(S, dtype=np.uint8)
        if S.ndim != 2 or S.shape[1] != self.m_full:
            raise ValueError("syndrome batch must be (trials, checks)")
        if self.dropped_rows.size and S[:, self.dropped_rows].any():
            raise ValueError("syndrome bit set on a check with no noise support")
        B = S.shape[0]
        est = np.zeros((B, self.cols), dtype=np.uint8)
        post = np.full((B, self.cols), self.cfg.llr_clamp)
        if self.n_act:
            post[:, self.col_map] = self.gamma
        conv = np.zeros(B, dtype=bool)
        iters = np.full(B, self.cfg.iter_max, dtype=np.int64)
        if self.m_act == 0 or self.n_act == 0:
            conv[:] = True
            iters[:] = 1
            return BatchOutcome(conv, est, post, iters)

        state = self.init_state(S[:, self.row_map])
        alive = np.arange(B)
        last_e = None
        for it in range(1, self.cfg.iter_max + 1):
            state.iteration = it
            self.horizontal_update(state)
            self.vertical_update(state)
            e_act = self.hard_decision(state)
            ok = (self.syndromes_of(e_act) == state.syndrome).all(axis=1)
            if ok.any():
                done = alive[ok]
                est[done[:, None], self.col_map] = e_act[ok]
                post[done[:, None], self.col_map] = state.posteriors[ok]
                iters[done] = it
                conv[done] = True
                if ok.all():
                    return BatchOutcome(conv, est, post, iters)
                alive = alive[~ok]
                state = self._compact(state, ~ok)
                last_e = e_act[~ok]
            else:
                last_e = e_act
        est[alive[:, None], self.col_map] = last_e
        post[alive[:, None], self.col_map] = state.posteriors
        return BatchOutcome(conv, est, post, iters)


def decode(H_or_Hd: BitMatrix | np.ndarray, priors: np.ndarray, s: np.ndarray, cfg: BPConfig) -> DecodeOutcome:
    """Decode a single syndrome; see BPDecoder for the batched interface."""
    out = BPDecoder(H_or_Hd, priors, cfg).decode_batch(np.asarray(s, dtype=np.uint8)[None, :])
    return out[0]
