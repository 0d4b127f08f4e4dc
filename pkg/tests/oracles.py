"""Brute-force reference implementations used only by the tests.

Everything here trades time for certainty: full enumeration of error
configurations, exact probability sums, argmax decoding. The BP/OSD code
under test is never called from this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from paulibp.gf2 import BitMatrix
from paulibp.noise import NoiseModel
from paulibp.codes import StabilizerCode
from paulibp.pauli import PauliString, syndrome_symplectic

DEFAULT_BUDGET = 2**24
_CHUNK = 1 << 16


@dataclass(frozen=True)
class EnumerationBudget:
    max_configs: int = DEFAULT_BUDGET

    def check(self, count: int) -> None:
        if count > self.max_configs:
            raise ValueError(f"{count} configurations exceed the enumeration budget {self.max_configs}")


def _bit_blocks(cols: int) -> Iterator[np.ndarray]:
    """All 2^cols bit vectors, yielded as (chunk, cols) uint8 blocks."""
    total = 1 << cols
    shifts = np.arange(cols, dtype=np.uint64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        yield ((idx[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def _pauli_digit_blocks(nq: int) -> Iterator[np.ndarray]:
    """All 4^nq per-qubit Pauli choices (0=I,1=X,2=Z,3=Y), (chunk, nq) blocks."""
    total = 1 << (2 * nq)
    shifts = (2 * np.arange(nq, dtype=np.uint64))
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        yield ((idx[:, None] >> shifts[None, :]) & 3).astype(np.uint8)


def _log_weights(E: np.ndarray, priors: np.ndarray) -> np.ndarray:
    """Independent-Bernoulli log probability of each row of E."""
    lp = np.where(priors > 0, np.log(np.clip(priors, 1e-300, None)), -1e9)
    lq = np.log1p(-priors)
    Ef = E.astype(np.float64)
    return Ef @ lp + (1.0 - Ef) @ lq


def exact_marginals(
    H: BitMatrix,
    priors: np.ndarray,
    s: np.ndarray,
    constraint: str = "none",
    budget: EnumerationBudget | None = None,
) -> np.ndarray:
    """Exact per-bit posterior probability of e_i = 1, by full enumeration.

    Weights are independent Bernoulli per bit — the same prior model BP
    decodes with.

    constraint="none" sums over every bit vector and returns the plain
    conditional p(e_i = 1 | H e = s).

    constraint="one_hot" returns the restraint-aware posterior a decoupled
    decoder estimates. Columns i, i+n, i+2n (mod 3n) describe the same
    qubit and at most one of them may fire; the restraint is applied at
    the queried bit: the e_i = 1 mass counts only configurations where
    every same-qubit column that shares a check with i stays 0, the
    e_i = 0 mass is unrestricted, and the two masses normalize each other.
    A bit with both masses zero comes back as nan.
    """
    budget = budget or EnumerationBudget()
    priors = np.asarray(priors, dtype=np.float64)
    s = np.asarray(s, dtype=np.uint8)
    dense = H.to_dense()
    C = H.cols
    budget.check(1 << C)
    if constraint == "one_hot":
        if C % 3:
            raise ValueError("one_hot needs a 3n-column matrix")
        nq = C // 3
        cols = np.arange(C)
        q1, q2 = (cols + nq) % C, (cols + 2 * nq) % C
        shares = (dense.T.astype(np.int64) @ dense.astype(np.int64)) > 0
        in_check1 = shares[cols, q1]
        in_check2 = shares[cols, q2]
    elif constraint != "none":
        raise ValueError(f"unknown constraint {constraint!r}")

    total = 0.0
    mass0 = np.zeros(C)
    mass1 = np.zeros(C)
    for E in _bit_blocks(C):
        ok = (((E @ dense.T) & 1) == s).all(axis=1)
        if not ok.any():
            continue
        E = E[ok].astype(np.float64)
        w = np.exp(_log_weights(E, priors))
        total += w.sum()
        mass0 += w @ (1.0 - E)
        if constraint == "one_hot":
            down1 = np.where(in_check1, 1.0 - E[:, q1], 1.0)
            down2 = np.where(in_check2, 1.0 - E[:, q2], 1.0)
            mass1 += w @ (E * down1 * down2)
        else:
            mass1 += w @ E
    if total == 0.0:
        raise ValueError("syndrome unattainable: total probability is 0")
    denom = mass0 + mass1
    return np.divide(mass1, denom, out=np.full(C, np.nan), where=denom > 0)


def exhaustive_ml_decode(
    code: StabilizerCode,
    noise: NoiseModel,
    s: np.ndarray,
    budget: EnumerationBudget | None = None,
) -> PauliString:
    """Most likely single error with syndrome s, over all 4^n Paulis.

    Error-ML, not coset-ML: probabilities are per-Pauli multinomial
    (1 - px - pz - py, px, pz, py) per qubit. Ties go to the first hit in
    enumeration order (I < X < Z < Y, qubit 0 least significant).
    """
    budget = budget or EnumerationBudget()
    n = code.n
    budget.check(1 << (2 * n))
    s = np.asarray(s, dtype=np.uint8)
    logp = np.empty(4)
    for k, p in enumerate((1.0 - noise.total, noise.p_x, noise.p_z, noise.p_y)):
        logp[k] = np.log(p) if p > 0 else -1e9

    best_lw = -np.inf
    best: PauliString | None = None
    for d in _pauli_digit_blocks(n):
        e = np.concatenate([(d == 1) | (d == 3), (d == 2) | (d == 3)], axis=1).astype(np.uint8)
        ok = (syndrome_symplectic(code.H, e) == s).all(axis=1)
        if not ok.any():
            continue
        lw = logp[d[ok]].sum(axis=1)
        j = int(np.argmax(lw))
        if lw[j] > best_lw:
            best_lw = float(lw[j])
            best = PauliString.from_codes(d[ok][j])
    if best is None:
        raise ValueError("syndrome unattainable: no Pauli produces it")
    return best
