"""Monte Carlo harness: sample errors, decode, count logical failures.

A simulation point is (code, noise, decoder config, trials, seed). Points
are independent and carry their own counter-based RNG stream — stream k of
a sweep is `Philox(SeedSequence(seed, spawn_key=(k,)))` — so a sweep's
tables are bit-identical for a given seed no matter how many worker
processes run it or how the trial batches are chunked (Generator.random
fills row-major from a single sequential stream).

Logical failure accounting: the residual e ^ ê (symplectic form) is a
failure iff it anticommutes with at least one logical operator; since OSD
pins the syndrome, the residual is otherwise a stabilizer and the trial is
a success (degeneracy counted as success).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from paulibp.bp import BPConfig, BPDecoder
from paulibp.codes import StabilizerCode, build_planar_surface, build_xzzx_surface
from paulibp.noise import NoiseModel
from paulibp.osd import decode_batch_with_osd
from paulibp.pauli import (
    PauliString,
    decoupled_to_symplectic,
    pauli_to_symplectic,
    symplectic_to_pauli,
    syndrome_symplectic,
)

_Z95 = 1.959963984540054  # two-sided 95% normal quantile


def wilson_interval(failures: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (sane at 0 failures)."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = failures / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def wilson_halfwidth(failures: int, trials: int, z: float = _Z95) -> float:
    lo, hi = wilson_interval(failures, trials, z)
    return (hi - lo) / 2


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    error: PauliString
    correction: PauliString
    bp_converged: bool
    iterations_used: int
    logical_failure: bool


@dataclass(frozen=True)
class CurvePoint:
    p: float
    trials: int
    failures: int
    ler: float
    ler_ci: float
    avg_iterations: float
    bp_converged_frac: float


@dataclass(frozen=True)
class SweepRow:
    L: int
    n: int
    noise: NoiseModel
    point: CurvePoint


def _logical_matrix(code: StabilizerCode) -> np.ndarray:
    """Half-swapped logical matrix: row l dotted with (e_x|e_z) gives the
    symplectic product of logical l with the error."""
    vecs = np.stack([pauli_to_symplectic(l) for l in code.logicals])
    n = code.n
    return np.concatenate([vecs[:, n:], vecs[:, :n]], axis=1).astype(np.float32)


def _failures(code: StabilizerCode, E: np.ndarray, C: np.ndarray, Lmat: np.ndarray | None = None) -> np.ndarray:
    if Lmat is None:
        Lmat = _logical_matrix(code)
    r = (E ^ C).astype(np.float32)
    parity = (r @ Lmat.T).astype(np.int64) & 1
    return parity.any(axis=1)


def logical_failure(code: StabilizerCode, error: PauliString, correction: PauliString) -> bool:
    """True iff the residual error ^ correction acts as a logical operator.

    Raises if the two operators have different syndromes — a correction that
    does not even reproduce the measurement is a harness bug, not a failure
    statistic.
    """
    ev = pauli_to_symplectic(error)[None, :]
    cv = pauli_to_symplectic(correction)[None, :]
    if not np.array_equal(syndrome_symplectic(code.H, ev), syndrome_symplectic(code.H, cv)):
        raise ValueError("syndrome mismatch between error and correction")
    return bool(_failures(code, ev, cv)[0])


def _decoder_for(code: StabilizerCode, noise: NoiseModel, cfg: BPConfig) -> BPDecoder:
    if cfg.flavor == "SBP":
        return BPDecoder(code.symplectic_decoding_matrix, noise.symplectic_priors(code.n), cfg)
    return BPDecoder(code.H_d, noise.decoupled_priors(code.n), cfg)


def _point_rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


def run_point(
    code: StabilizerCode,
    noise: NoiseModel,
    decoder_cfg: BPConfig,
    trials: int,
    seed: int,
    *,
    stream: int = 0,
    chunk: int = 256,
) -> CurvePoint:
    """Monte Carlo estimate of the logical error rate at one (code, noise) point."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = _point_rng(seed, stream)
    dec = _decoder_for(code, noise, decoder_cfg)
    Lmat = _logical_matrix(code)
    failures = 0
    iter_sum = 0
    converged = 0
    remaining = trials
    while remaining:
        b = min(chunk, remaining)
        E = noise.sample_error(code.n, rng, trials=b)
        S = syndrome_symplectic(code.H, E)
        out = decode_batch_with_osd(dec, S)
        C = out.estimate if decoder_cfg.flavor == "SBP" else decoupled_to_symplectic(out.estimate)
        if not np.array_equal(syndrome_symplectic(code.H, C), S):
            raise RuntimeError("decoder output does not reproduce the measured syndrome")
        failures += int(_failures(code, E, C, Lmat).sum())
        iter_sum += int(out.iterations.sum())
        converged += int(out.converged.sum())
        remaining -= b
    return CurvePoint(
        p=noise.total,
        trials=trials,
        failures=failures,
        ler=failures / trials,
        ler_ci=wilson_halfwidth(failures, trials),
        avg_iterations=iter_sum / trials,
        bp_converged_frac=converged / trials,
    )


def run_trial(
    code: StabilizerCode,
    noise: NoiseModel,
    decoder_cfg: BPConfig,
    seed: int,
    *,
    stream: int = 0,
) -> TrialRecord:
    """One fully-materialized trial, for inspection and tests."""
    rng = _point_rng(seed, stream)
    dec = _decoder_for(code, noise, decoder_cfg)
    E = noise.sample_error(code.n, rng, trials=1)
    S = syndrome_symplectic(code.H, E)
    out = decode_batch_with_osd(dec, S)
    C = out.estimate if decoder_cfg.flavor == "SBP" else decoupled_to_symplectic(out.estimate)
    error = symplectic_to_pauli(E[0])
    correction = symplectic_to_pauli(C[0])
    return TrialRecord(
        seed=seed,
        error=error,
        correction=correction,
        bp_converged=bool(out.converged[0]),
        iterations_used=int(out.iterations[0]),
        logical_failure=logical_failure(code, error, correction),
    )


_FAMILIES: dict[str, Callable[[int], StabilizerCode]] = {
    "planar": build_planar_surface,
    "xzzx": build_xzzx_surface,
}


def resolve_workers(max_workers: int | None = None) -> int:
    """Worker-count policy: explicit arg, else PAULIBP_WORKERS, else all cores."""
    if max_workers is not None:
        return max(1, max_workers)
    env = os.environ.get("PAULIBP_WORKERS", "").strip()
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _point_task(task) -> CurvePoint:
    stream, code, noise, cfg, trials, seed, chunk = task
    return run_point(code, noise, cfg, trials, seed, stream=stream, chunk=chunk)


def sweep(
    code_family: str | Callable[[int], StabilizerCode],
    L_list: Sequence[int],
    p_list: Sequence[float],
    decoder_cfg: tuple[str, str],
    trials: int,
    seed: int,
    *,
    channel: str | NoiseModel = "depol:0.1",
    iter_max: int | None = None,
    llr_clamp: float = 30.0,
    max_workers: int | None = None,
    chunk: int = 256,
) -> list[SweepRow]:
    """Full factorial (L x p) sweep; rows come back in grid order (L-major).

    `channel` fixes the X/Z/Y mix, which is rescaled to each total rate in
    p_list. iter_max defaults to the code length n of each L. Points run in
    a process pool, one RNG stream per point, so the table is reproducible
    for a fixed seed regardless of worker count.
    """
    builder = _FAMILIES[code_family] if isinstance(code_family, str) else code_family
    base = NoiseModel.parse(channel) if isinstance(channel, str) else channel
    flavor, rule = decoder_cfg

    tasks = []
    meta = []
    stream = 0
    for L in L_list:
        code = builder(L)
        cfg = BPConfig(flavor=flavor, rule=rule, iter_max=iter_max or code.n, llr_clamp=llr_clamp)
        for p in p_list:
            noise = base.with_total(p) if p != base.total else base
            tasks.append((stream, code, noise, cfg, trials, seed, chunk))
            meta.append((L, code.n, noise))
            stream += 1

    workers = min(resolve_workers(max_workers), len(tasks))
    if workers <= 1:
        points = [_point_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(_point_task, tasks))
    return [SweepRow(L, n, noise, pt) for (L, n, noise), pt in zip(meta, points)]


@dataclass(frozen=True)
class ThresholdEstimate:
    value: float
    spread: float
    crossings: tuple[tuple[int, int, float], ...]  # (L_small, L_large, p_cross)


def estimate_threshold(
    curves: Mapping[int, Sequence[CurvePoint]] | Sequence[SweepRow],
) -> ThresholdEstimate:
    """Crossing-based threshold from LER curves at two or more lattice sizes.

    Accepts either a {L: [CurvePoint, ...]} mapping or the row list that
    sweep() returns. For each adjacent pair of L values, finds where the
    log-LER difference changes sign on the shared p grid (piecewise-linear
    interpolation; zero-failure points are skipped since their log
    diverges). Returns the mean crossing and the half-range across pairs;
    raises ValueError when no pair produces a crossing — including
    identical curves, which cross nowhere in particular.
    """
    if not isinstance(curves, Mapping):
        rows = list(curves)
        curves = {L: [r.point for r in rows if r.L == L] for L in {r.L for r in rows}}
    sizes = sorted(curves)
    if len(sizes) < 2:
        raise ValueError("need curves for at least two lattice sizes")
    by_L = {
        L: {round(pt.p, 12): pt for pt in curves[L] if pt.failures > 0} for L in sizes
    }
    crossings: list[tuple[int, int, float]] = []
    steps: list[float] = []
    for L1, L2 in zip(sizes, sizes[1:]):
        shared = sorted(set(by_L[L1]) & set(by_L[L2]))
        d = [
            math.log(by_L[L1][p].ler) - math.log(by_L[L2][p].ler) for p in shared
        ]
        for i in range(len(shared) - 1):
            if d[i] == 0.0 and d[i + 1] == 0.0:
                continue  # locally identical curves: no unique crossing
            if d[i] == 0.0:
                crossings.append((L1, L2, shared[i]))
                steps.append(shared[i + 1] - shared[i])
                break
            if d[i] * d[i + 1] < 0:
                frac = d[i] / (d[i] - d[i + 1])
                crossings.append((L1, L2, shared[i] + frac * (shared[i + 1] - shared[i])))
                steps.append(shared[i + 1] - shared[i])
                break
    if not crossings:
        raise ValueError("no crossing: the LER curves never intersect on the sampled grid")
    ps = [c[2] for c in crossings]
    value = sum(ps) / len(ps)
    spread = (max(ps) - min(ps)) / 2 if len(ps) > 1 else max(steps) / 2
    return ThresholdEstimate(value=value, spread=spread, crossings=tuple(crossings))
