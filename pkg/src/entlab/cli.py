"""Batch command-line front end.

Subcommands: ``bounds`` (scalar bound tables over dimension sweeps),
``verify`` (Monte Carlo verification campaigns), ``minent`` (minimum
output entropy estimation), ``oracle`` (regenerate the fixture tables).
Every run emits a self-describing manifest as JSON (or flattened CSV)
with 12-significant-digit numbers.

Exit codes: 0 on success / all campaigns passing, 1 on verification
failure or fixture drift, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, bounds, experiments
from .channels import ChannelPair
from .experiments import CampaignResult, OptimizerConfig, TrialConfig
from .randq import RngStream, mu_cdf_numeric, random_isometry

_CHANNEL_STREAM_BASE = 10 << 32


def _round12(x: float) -> float:
    if not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


def _sanitize(obj):
    """Recursively round floats to 12 significant digits for output."""
    if isinstance(obj, float):
        return _round12(obj)
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


@dataclass
class RunManifest:
    command: str
    params: dict
    seed: int
    tool_version: str = __version__
    started: str = ""
    finished: str = ""
    results: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return _sanitize({
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "started": self.started,
            "finished": self.finished,
            "results": self.results,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=True)

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        raw = json.loads(text)
        return cls(command=raw["command"], params=raw["params"],
                   seed=raw["seed"], tool_version=raw["tool_version"],
                   started=raw["started"], finished=raw["finished"],
                   results=raw["results"])

    def to_csv(self) -> str:
        rows = [_flatten(r) for r in self.to_dict()["results"]]
        keys: list[str] = []
        for row in rows:
            for k in row:
                if k not in keys:
                    keys.append(k)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=keys, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        return buf.getvalue()


def _flatten(row: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in row.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, prefix=f"{key}."))
        elif isinstance(v, list):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def _campaign_dict(res: CampaignResult) -> dict:
    raw = asdict(res)
    raw["pass"] = raw.pop("passed")
    return raw


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def parse_int_range(text: str) -> list[int]:
    """Dimension flag syntax: ``n``, ``lo:hi:*k`` (geometric), ``lo:hi:+k``.

    Geometric ranges multiply by k until hi is passed; arithmetic ranges
    step by k.  Both include lo and never exceed hi.
    """
    text = text.strip()
    if ":" not in text:
        value = int(text)
        if value < 1:
            raise argparse.ArgumentTypeError(f"dimension must be >= 1: {text}")
        return [value]
    parts = text.split(":")
    if len(parts) != 3 or not parts[2] or parts[2][0] not in "*+":
        raise argparse.ArgumentTypeError(f"malformed range: {text!r}")
    lo, hi = int(parts[0]), int(parts[1])
    step = int(parts[2][1:])
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"range bounds out of order: {text!r}")
    values = []
    cur = lo
    if parts[2][0] == "*":
        if step < 2:
            raise argparse.ArgumentTypeError("geometric factor must be >= 2")
        while cur <= hi:
            values.append(cur)
            cur *= step
    else:
        if step < 1:
            raise argparse.ArgumentTypeError("arithmetic step must be >= 1")
        while cur <= hi:
            values.append(cur)
            cur += step
    return values


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad float list: {text!r}") from exc


def _emit(manifest: RunManifest, args) -> None:
    text = manifest.to_csv() if args.format == "csv" else manifest.to_json()
    print(text)
    if args.out:
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n",
                                  encoding="utf-8")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default=None, help="also write the report here")


# ---------------------------------------------------------------------------
# bounds

def cmd_bounds(args, parser) -> int:
    manifest = RunManifest(command="bounds", seed=args.seed, params={
        "d": args.d, "n": args.n, "s": args.s, "gamma": args.gamma,
        "h": args.h, "eps": args.eps, "violation": args.violation,
    }, started=_now())
    if args.violation:
        first_positive = None
        for d in args.d:
            h11 = bounds.h_d11(d)
            value = bounds.violation_lower(d, h11)
            row = {
                "d": d,
                "h_d11": h11,
                "violation_lower": value,
                "threshold": bounds.violation_threshold(d, h11),
                "positive": value > 0.0,
            }
            if value > 0.0 and first_positive is None:
                first_positive = d
            manifest.results.append(row)
        summary = {
            "first_positive_d_in_range": first_positive,
            "h_d11_uniform_bound": bounds.h_d11_uniform_bound(),
        }
        if first_positive is None:
            summary["smallest_violating_d"] = bounds.smallest_violating_d()
        manifest.results.append(summary)
    else:
        for d in args.d:
            for n in args.n:
                for s in args.s:
                    if s > n * d:
                        parser.error(f"s={s} exceeds n*d={n * d}")
                    try:
                        report = bounds.build_bound_report(s, n, d, h=args.h,
                                                           gamma=args.gamma)
                    except ValueError as exc:
                        parser.error(str(exc))
                    row = asdict(report)
                    row["thm1_vacuous"] = report.thm1_rhs <= 0.0
                    row["thm2_vacuous"] = report.thm2_rhs <= 0.0
                    if 3 <= d <= n:
                        h_used = args.h if args.h is not None else report.h_d_value
                        row["hlw_crossover_ratio"] = \
                            bounds.hlw_crossover_ratio(d, n, h_used)
                    else:
                        row["hlw_crossover_ratio"] = None
                    if args.eps is not None:
                        h_cor = args.h if args.h is not None else bounds.h0().value
                        cor = bounds.corollary_bound(s, d, h_cor, args.eps)
                        row["corollary_bound"] = cor.value
                        row["corollary_n"] = cor.n_used
                    manifest.results.append(row)
    manifest.finished = _now()
    _emit(manifest, args)
    return 0


# ---------------------------------------------------------------------------
# verify

_SUITES = ("overlap", "spectrum", "pushforward", "tube", "typicality",
           "inequalities", "gradient", "all")


def cmd_verify(args, parser) -> int:
    chosen = list(_SUITES[:-1]) if args.suite == "all" else [args.suite]
    if "spectrum" in chosen:
        for d in args.d or [2]:
            if d not in (2, 3):
                parser.error(f"spectrum suite supports d in {{2, 3}}, got {d}")
    manifest = RunManifest(command="verify", seed=args.seed, params={
        "suite": args.suite, "s": args.s, "n": args.n, "d": args.d,
        "gamma": args.gamma, "trials": args.trials,
        "trials_w": args.trials_w, "trials_phi": args.trials_phi,
        "t_list": args.t_list,
    }, started=_now())
    results: list[CampaignResult] = []
    for suite in chosen:
        results.extend(_run_suite(suite, args))
    manifest.results = [_campaign_dict(r) for r in results]
    manifest.finished = _now()
    _emit(manifest, args)
    return 0 if all(r.passed for r in results) else 1


def _run_suite(suite: str, args) -> list[CampaignResult]:
    seed = args.seed
    if suite == "overlap":
        out = []
        for s in args.s or [2, 4, 8, 16]:
            out.extend(experiments.overlap_law_campaign(
                s, args.t_list, args.trials or 100_000, seed))
        return out
    if suite == "spectrum":
        return [experiments.spectrum_law_campaign(d, n, args.trials or 20_000, seed)
                for d in (args.d or [2]) for n in (args.n or [2, 4])]
    if suite == "pushforward":
        if args.s and args.n and args.d:
            dims = [(s, n, d) for s in args.s for n in args.n for d in args.d]
        else:
            dims = [(3, 4, 2), (2, 3, 3)]
        return [experiments.pushforward_campaign(s, n, d, args.trials or 20_000,
                                                 seed)
                for (s, n, d) in dims]
    if suite == "tube":
        s = (args.s or [16])[0]
        n = (args.n or [16])[0]
        d = (args.d or [2])[0]
        return [experiments.tube_fraction_campaign(
            s, n, d, args.gamma or 0.1, args.trials or 20_000, seed)]
    if suite == "typicality":
        s = (args.s or [8])[0]
        n = (args.n or [200])[0]
        d = (args.d or [2])[0]
        return [experiments.typicality_campaign(
            s, n, d, args.trials_w, args.trials_phi, seed)]
    if suite == "inequalities":
        return experiments.inequality_suite(args.trials or 100_000, seed)
    if suite == "gradient":
        cfg = TrialConfig(dims=(4, 6, 2), seed=seed)
        return [experiments.gradient_check(cfg, args.trials or 100, seed)]
    raise AssertionError(suite)


# ---------------------------------------------------------------------------
# minent

def cmd_minent(args, parser) -> int:
    s, n, d = args.s, args.n, args.d
    if s > n * d:
        parser.error(f"s={s} exceeds n*d={n * d}")
    if args.product and s * s > experiments.PRODUCT_INPUT_CAP:
        parser.error(f"--product needs s^2 <= {experiments.PRODUCT_INPUT_CAP}")
    manifest = RunManifest(command="minent", seed=args.seed, params={
        "s": s, "n": n, "d": d, "channels": args.channels,
        "restarts": args.restarts, "which": args.which,
        "product": args.product,
    }, started=_now())
    opt = OptimizerConfig(restarts=args.restarts)
    cfg = TrialConfig(dims=(s, n, d), seed=args.seed, optimizer=opt)
    estimates = []
    for i in range(args.channels):
        w_rng = RngStream(args.seed, _CHANNEL_STREAM_BASE + i)
        W = random_isometry(s, n, d, w_rng)
        pair = ChannelPair(W)
        value, _ = experiments.estimate_min_output_entropy(
            pair, args.which, cfg, unit=i)
        row = {"channel": i, "entropy_estimate": value}
        if args.product:
            prod = experiments.estimate_product_entropy(W, cfg, unit=i)
            row["product_at_max_entangled"] = prod.value_at_max_entangled
            row["product_optimized"] = prod.optimized_value
            row["delta_s_estimate"] = 2.0 * value - prod.optimized_value
            if s * d >= n:
                upper = bounds.prod_entropy_upper(s, d, n)
                row["prod_upper"] = upper
                row["prod_upper_satisfied"] = \
                    prod.value_at_max_entangled <= upper + 1e-9
        estimates.append(value)
        manifest.results.append(row)
    ordered = sorted(estimates)
    summary = {
        "min": ordered[0],
        "median": ordered[len(ordered) // 2],
        "max": ordered[-1],
        "h_d_value": bounds.h_d(s / n, s / n, d).value,
        "h0_value": bounds.h0().value,
        "thm1_rhs_at_threshold": bounds.thm1_rhs(
            s, d, n, bounds.h_d(s / n, s / n, d).value),
        "thm2_rhs_at_h0": bounds.thm2_rhs(s, d, n, bounds.h0().value),
    }
    if 3 <= d <= n:
        summary["hlw"] = bounds.hlw_bound(s, d, n)
    if args.product:
        summary["violation_lower_ineq3"] = bounds.violation_lower(d)
    manifest.results.append(summary)
    manifest.finished = _now()
    _emit(manifest, args)
    return 0


# ---------------------------------------------------------------------------
# oracle

def cmd_oracle(args, parser) -> int:
    if not args.regen_fixtures:
        parser.error("oracle requires --regen-fixtures")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(command="oracle", seed=0, params={
        "d_max": args.d_max, "z_points": args.z_points, "out_dir": args.out_dir,
    }, started=_now())

    table = {}
    for d in range(2, args.d_max + 1):
        res = bounds.oracle_h_d11(d, z_points=args.z_points)
        table[d] = (res.value, res.gamma)
    fixture_text = bounds.format_h_d_fixtures(table)
    (out_dir / "h_d_fixtures.tsv").write_text(fixture_text, encoding="utf-8")

    mu_specs = [(2, 2, 20001), (2, 4, 20001), (3, 3, 1000)]
    for d, n, grid in mu_specs:
        cdf = mu_cdf_numeric(d, n, grid)
        lines = ["lmax\tcdf"]
        for x, c in zip(cdf.support, cdf.cdf):
            lines.append(f"{x:.12g}\t{c:.12g}")
        (out_dir / f"mu_cdf_d{d}_n{n}.tsv").write_text(
            "\n".join(lines) + "\n", encoding="utf-8")

    drift = _fixture_drift(table)
    manifest.results.append({
        "fixtures_written": len(table),
        "mu_tables_written": len(mu_specs),
        "max_drift_vs_checked_in": drift,
        "drift_ok": drift is None or drift <= 1e-9,
    })
    manifest.finished = _now()
    _emit(manifest, args)
    if drift is not None and drift > 1e-9:
        print(f"fixture drift {drift:.3e} exceeds 1e-9", file=sys.stderr)
        return 1
    return 0


def _fixture_drift(table: dict) -> float | None:
    checked_in = bounds.load_h_d_fixtures()
    if not checked_in:
        return None
    drift = 0.0
    for d, (h11, gm) in table.items():
        if d not in checked_in:
            return math.inf
        ref_h, ref_g = checked_in[d]
        drift = max(drift, abs(h11 - ref_h), abs(gm - ref_g))
    return drift


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entlab",
        description="entanglement-bound laboratory: bound tables, Monte Carlo "
                    "verification, and entropy estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="evaluate the scalar bound family")
    p_bounds.add_argument("--d", type=parse_int_range, required=True)
    p_bounds.add_argument("--n", type=parse_int_range, default=[1])
    p_bounds.add_argument("--s", type=parse_int_range, default=[1])
    p_bounds.add_argument("--gamma", type=float, default=None)
    p_bounds.add_argument("--h", type=float, default=None)
    p_bounds.add_argument("--eps", type=float, default=None)
    p_bounds.add_argument("--seed", type=int, default=0)
    p_bounds.add_argument("--violation", action="store_true",
                          help="tabulate the additivity-violation lower bound")
    _add_common(p_bounds)

    p_verify = sub.add_parser("verify", help="run verification campaigns")
    p_verify.add_argument("--suite", choices=_SUITES, required=True)
    p_verify.add_argument("--seed", type=int, required=True)
    p_verify.add_argument("--s", type=parse_int_range, default=None)
    p_verify.add_argument("--n", type=parse_int_range, default=None)
    p_verify.add_argument("--d", type=parse_int_range, default=None)
    p_verify.add_argument("--gamma", type=float, default=None)
    p_verify.add_argument("--trials", type=int, default=None)
    p_verify.add_argument("--trials-w", type=int, default=200)
    p_verify.add_argument("--trials-phi", type=int, default=2000)
    p_verify.add_argument("--t-list", type=_float_list,
                          default=[0.1, 0.3, 0.5, 0.7])
    _add_common(p_verify)

    p_minent = sub.add_parser("minent", help="estimate minimum output entropy")
    p_minent.add_argument("--s", type=int, required=True)
    p_minent.add_argument("--n", type=int, required=True)
    p_minent.add_argument("--d", type=int, required=True)
    p_minent.add_argument("--channels", type=int, default=10)
    p_minent.add_argument("--restarts", type=int, default=20)
    p_minent.add_argument("--seed", type=int, default=0)
    p_minent.add_argument("--which", choices=["direct", "conjugate"],
                          default="conjugate")
    p_minent.add_argument("--product", action="store_true",
                          help="include the product-channel estimate")
    _add_common(p_minent)

    p_oracle = sub.add_parser("oracle", help="regenerate fixture tables")
    p_oracle.add_argument("--regen-fixtures", action="store_true")
    p_oracle.add_argument("--out-dir", default="oracle_out")
    p_oracle.add_argument("--d-max", type=int, default=200)
    p_oracle.add_argument("--z-points", type=int, default=100_000)
    _add_common(p_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "bounds": cmd_bounds,
        "verify": cmd_verify,
        "minent": cmd_minent,
        "oracle": cmd_oracle,
    }
    return handlers[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
