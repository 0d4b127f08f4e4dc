"""Command-line front end for logical-error-rate sweeps.

Example:

    paulibp --code xzzx --L 5,7,9 --decoder fdbp --rule min-sum \\
            --channel depol:0.10..0.20:0.01 --trials 10000 --seed 7 \\
            --out xzzx_fdbp.csv

writes one CSV row per (L, p) point (a JSON comment line with the resolved
spec comes first, then the header) and, because more than one lattice size
is present, a crossing-based threshold summary next to it as
`xzzx_fdbp.threshold.json`.

Exit codes: 0 success, 1 user error (bad flags, malformed channel, missing
file), 2 internal error. Worker processes default to all cores; override
with --workers or the PAULIBP_WORKERS environment variable.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from paulibp.codes import StabilizerCode
from paulibp.noise import NoiseModel
from paulibp.sim import SweepRow, estimate_threshold, sweep

CSV_COLUMNS = [
    "code", "L", "n", "decoder", "rule", "channel", "p_x", "p_z", "p_y", "p",
    "trials", "failures", "ler", "ler_ci95", "bp_converged_frac", "avg_iterations", "seed",
]

_FLAVOR_OF = {"sbp": "SBP", "pdbp": "PDBP", "fdbp": "FDBP"}
_RULE_OF = {"min-sum": "min_sum", "sum-product": "sum_product"}
_RANGE_TOL = 1e-12


class UserError(ValueError):
    """A problem the user can fix; reported with exit code 1."""


@dataclass(frozen=True)
class ExperimentSpec:
    code: str
    L_list: tuple[int, ...]
    decoder: str
    rule: str
    channel: str
    channel_kind: str
    p_list: tuple[float, ...]
    trials: int
    iter_max: int | None
    seed: int
    output: str
    workers: int | None


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; that slot is ours
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    p = _Parser(
        prog="paulibp",
        description="Monte Carlo logical-error-rate sweeps for BP(+OSD-0) decoders "
        "on stabilizer codes.",
    )
    p.add_argument("--code", required=True,
                   help="planar | xzzx | file:<path to generator words, one per line>")
    p.add_argument("--L", default=None,
                   help="comma-separated lattice sizes, e.g. 5,7,9 (lattice families only)")
    p.add_argument("--decoder", required=True, choices=sorted(_FLAVOR_OF))
    p.add_argument("--rule", default="min-sum", choices=sorted(_RULE_OF))
    p.add_argument("--channel", required=True,
                   help="x:p | z:p | y:p | depol:p | custom:pX,pZ,pY, "
                   "or a range like depol:0.1..0.2:0.01 (inclusive)")
    p.add_argument("--p", default=None,
                   help="comma-separated total error rates; overrides the channel's "
                   "single rate, keeps its X/Z/Y mix")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--iter-max", type=int, default=None,
                   help="BP iteration cap (default: the code length n)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="results.csv", help="CSV output path")
    p.add_argument("--workers", type=int, default=None,
                   help="process count (default: PAULIBP_WORKERS or all cores)")
    return p


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise UserError(f"bad number list {text!r}: {e}") from None


def _parse_channel(text: str, p_flag: str | None) -> tuple[str, tuple[float, ...]]:
    """Returns (channel kind, total-rate grid); validates via NoiseModel."""
    kind, sep, rest = text.partition(":")
    kind = kind.strip().lower()
    if not sep or kind not in ("x", "z", "y", "depol", "custom"):
        raise UserError(f"unknown channel {text!r}")
    if ".." in rest:
        if p_flag is not None:
            raise UserError("give either a channel range or --p, not both")
        if kind == "custom":
            raise UserError("custom channels take --p for sweeps, not a range")
        bounds, sep2, step_s = rest.partition(":")
        lo_s, _, hi_s = bounds.partition("..")
        if not sep2:
            raise UserError(f"malformed range {rest!r}; expected a..b:step")
        try:
            lo, hi, step = float(lo_s), float(hi_s), float(step_s)
        except ValueError:
            raise UserError(f"malformed range {rest!r}") from None
        if step <= 0 or hi < lo:
            raise UserError("range needs step > 0 and stop >= start")
        ps = []
        k = 0
        while lo + k * step <= hi + _RANGE_TOL:
            ps.append(round(lo + k * step, 12))
            k += 1
        totals = tuple(ps)
    elif p_flag is not None:
        NoiseModel.parse(f"{kind}:{rest}" if kind != "custom" else text)  # mix sanity
        totals = tuple(_parse_floats(p_flag))
    else:
        totals = (NoiseModel.parse(text).total,)
    if any(not 0.0 <= p < 1.0 for p in totals):
        raise UserError("error rates must lie in [0, 1)")
    return kind, totals


def _channel_mix(spec: ExperimentSpec) -> NoiseModel:
    """A NoiseModel carrying the right X/Z/Y proportions (rate rescaled per point)."""
    if spec.channel_kind == "custom":
        return NoiseModel.parse(spec.channel)
    return NoiseModel.parse(f"{spec.channel_kind}:0.3")


def parse_spec(argv=None) -> ExperimentSpec:
    args = _build_parser().parse_args(argv)
    code = args.code.strip()
    if code.startswith("file:"):
        if args.L is not None:
            raise UserError("--L applies to the planar/xzzx lattice families")
        if not Path(code[5:]).is_file():
            raise UserError(f"code file not found: {code[5:]}")
        L_list: tuple[int, ...] = (0,)
    elif code in ("planar", "xzzx"):
        if args.L is None:
            raise UserError("--L is required for lattice families")
        try:
            L_list = tuple(int(t) for t in args.L.split(",") if t.strip())
        except ValueError:
            raise UserError(f"bad --L list {args.L!r}") from None
        if not L_list or any(L < 2 for L in L_list):
            raise UserError("lattice sizes must be integers >= 2")
    else:
        raise UserError(f"unknown code {code!r} (planar, xzzx, or file:<path>)")

    kind, totals = _parse_channel(args.channel, args.p)
    if args.trials < 1:
        raise UserError("--trials must be at least 1")
    if args.iter_max is not None and args.iter_max < 1:
        raise UserError("--iter-max must be at least 1")
    return ExperimentSpec(
        code=code,
        L_list=L_list,
        decoder=args.decoder,
        rule=args.rule,
        channel=args.channel,
        channel_kind=kind,
        p_list=totals,
        trials=args.trials,
        iter_max=args.iter_max,
        seed=args.seed,
        output=args.out,
        workers=args.workers,
    )


def _csv_row(spec: ExperimentSpec, row: SweepRow) -> list:
    return [
        spec.code, row.L, row.n, spec.decoder, spec.rule, spec.channel_kind,
        row.noise.p_x, row.noise.p_z, row.noise.p_y, row.point.p,
        row.point.trials, row.point.failures, row.point.ler, row.point.ler_ci,
        row.point.bp_converged_frac, row.point.avg_iterations, spec.seed,
    ]


def run(spec: ExperimentSpec) -> int:
    """Execute the sweep and write CSV (+ threshold JSON when >= 2 sizes)."""
    if spec.code.startswith("file:"):
        path = spec.code[5:]
        builder = lambda L: StabilizerCode.from_file(path)  # noqa: E731
    else:
        builder = spec.code
    rows = sweep(
        builder,
        spec.L_list,
        spec.p_list,
        (_FLAVOR_OF[spec.decoder], _RULE_OF[spec.rule]),
        spec.trials,
        spec.seed,
        channel=_channel_mix(spec),
        iter_max=spec.iter_max,
        max_workers=spec.workers,
    )

    out = Path(spec.output)
    with open(out, "w", newline="") as f:
        f.write("# " + json.dumps(asdict(spec)) + "\n")
        w = csv.writer(f)
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow(_csv_row(spec, row))
            f.flush()
    print(f"wrote {len(rows)} points to {out}")

    if len(set(spec.L_list)) >= 2:
        curves = {L: [r.point for r in rows if r.L == L] for L in set(spec.L_list)}
        summary: dict = {
            "code": spec.code, "decoder": spec.decoder, "rule": spec.rule,
            "channel": spec.channel, "L": sorted(set(spec.L_list)),
            "trials": spec.trials, "seed": spec.seed,
        }
        try:
            est = estimate_threshold(curves)
            summary["threshold"] = est.value
            summary["spread"] = est.spread
            summary["crossings"] = [list(c) for c in est.crossings]
            print(f"threshold estimate: {est.value:.4f} +/- {est.spread:.4f}")
        except ValueError as e:
            summary["threshold"] = None
            summary["note"] = str(e)
            print(f"threshold estimate: none ({e})")
        tpath = out.with_suffix(".threshold.json")
        tpath.write_text(json.dumps(summary, indent=2) + "\n")
        print(f"wrote threshold summary to {tpath}")
    return 0


def main(argv=None) -> int:
    try:
        spec = parse_spec(argv)
        return run(spec)
    except UserError as e:
        print(f"paulibp: error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"paulibp: error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # anything else is a bug in this tool
        print(f"paulibp: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
