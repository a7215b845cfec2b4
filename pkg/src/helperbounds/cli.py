"""Command-line interface: compute regions, run verification, classify, sample.

Subcommands:
    region    compute outer/inner/time-sharing boundaries, write CSV/JSON/SVG
    verify    run the cross-validation identity suites
    classify  write the capacity-segment report
    mc        Monte Carlo covariance validation

Exit codes: 0 success, 1 verification/MC failure, 2 usage or config error.
The JSON config is a single object with snake_case keys; see ``RunConfig``.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import _svg, classifier, closed_form, inner_region, montecarlo, outer_bound, verify
from .inner_region import OptimizerBudget
from .model import (
    ChannelConfig,
    CorrelationPoint,
    HelperBoundsError,
    RatePair,
    RegionBoundary,
    beta_from_rho,
    validate_config,
)

__all__ = ["RunConfig", "main"]

_LN2 = math.log(2.0)

_CONFIG_KEYS = {"eta1", "eta2", "p0", "p1", "p2", "q1", "q2",
                "directions", "rho_grid", "budget", "unit", "mc"}
_BUDGET_KEYS = {"rho_grid", "gamma_grid", "power_grid", "refine_iters", "restarts"}
_MC_KEYS = {"n", "seed", "tol_rel"}


@dataclass(frozen=True)
class RunConfig:
    """Parsed run configuration.

    ``directions`` controls the inner-region direction sweep, ``rho_grid``
    the outer-frontier level count, ``unit`` the output rate unit
    ("bits" or "nats"); ``mc_*`` configure the Monte Carlo check.
    """

    channel: ChannelConfig
    directions: int = 17
    rho_grid: int = 64
    budget: OptimizerBudget = field(default_factory=OptimizerBudget)
    unit: str = "bits"
    mc_n: int = 1_000_000
    mc_seed: int = montecarlo.DEFAULT_MC_SEED
    mc_tol_rel: float = 0.01

    @staticmethod
    def from_dict(raw: dict) -> "RunConfig":
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise HelperBoundsError(f"unknown config keys: {sorted(unknown)}")
        missing = [k for k in ("eta1", "eta2", "p0", "p1", "p2", "q1", "q2") if k not in raw]
        if missing:
            raise HelperBoundsError(f"missing config keys: {missing}")
        channel = validate_config(raw["eta1"], raw["eta2"], raw["p0"],
                                  raw["p1"], raw["p2"], raw["q1"], raw["q2"])
        budget_raw = raw.get("budget", {})
        if set(budget_raw) - _BUDGET_KEYS:
            raise HelperBoundsError(f"unknown budget keys: {sorted(set(budget_raw) - _BUDGET_KEYS)}")
        mc_raw = raw.get("mc", {})
        if set(mc_raw) - _MC_KEYS:
            raise HelperBoundsError(f"unknown mc keys: {sorted(set(mc_raw) - _MC_KEYS)}")
        unit = raw.get("unit", "bits")
        if unit not in ("bits", "nats"):
            raise HelperBoundsError("unit must be 'bits' or 'nats'")
        return RunConfig(
            channel=channel,
            directions=int(raw.get("directions", 17)),
            rho_grid=int(raw.get("rho_grid", 64)),
            budget=OptimizerBudget(**budget_raw),
            unit=unit,
            mc_n=int(mc_raw.get("n", 1_000_000)),
            mc_seed=int(mc_raw.get("seed", montecarlo.DEFAULT_MC_SEED)),
            mc_tol_rel=float(mc_raw.get("tol_rel", 0.01)),
        )

    @staticmethod
    def load(path: str) -> "RunConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise HelperBoundsError("config must be a JSON object")
        return RunConfig.from_dict(raw)


def _unit_scale(unit: str) -> float:
    return _LN2 if unit == "nats" else 1.0


def _write_boundary_csv(path: Path, boundary: RegionBoundary, unit: str) -> None:
    scale = _unit_scale(unit)
    lines = [f"r1_{unit},r2_{unit}"]
    for p in boundary.points:
        lines.append(f"{p.r1 * scale:.17g},{p.r2 * scale:.17g}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_boundary_csv(path) -> RegionBoundary:
    """Read a boundary CSV back into bits (inverse of the writer)."""
    text = Path(path).read_text(encoding="utf-8").strip().splitlines()
    header = text[0].split(",")
    scale = _unit_scale(header[0].rsplit("_", 1)[1])
    pts = []
    for line in text[1:]:
        a, b = line.split(",")
        pts.append(RatePair(float(a) / scale, float(b) / scale))
    return RegionBoundary(tuple(pts))


def _scalarized_max(boundary: RegionBoundary, w1: float, w2: float) -> float:
    return max(w1 * p.r1 + w2 * p.r2 for p in boundary.points)


def _json_dump(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _config_payload(rc: RunConfig) -> dict:
    ch = rc.channel
    return {
        "eta1": ch.eta1, "eta2": ch.eta2, "p0": ch.p0, "p1": ch.p1,
        "p2": ch.p2, "q1": ch.q1, "q2": ch.q2,
        "directions": rc.directions, "rho_grid": rc.rho_grid,
        "budget": {
            "rho_grid": rc.budget.rho_grid, "gamma_grid": rc.budget.gamma_grid,
            "power_grid": rc.budget.power_grid,
            "refine_iters": rc.budget.refine_iters, "restarts": rc.budget.restarts,
        },
        "unit": rc.unit,
        "mc": {"n": rc.mc_n, "seed": rc.mc_seed, "tol_rel": rc.mc_tol_rel},
    }


def run_region(rc: RunConfig, out_dir: Path) -> int:
    """Compute and serialize the three boundaries plus the region report."""
    cfg = rc.channel
    scale = _unit_scale(rc.unit)
    outer = outer_bound.outer_region_boundary(cfg, resolution=rc.rho_grid)
    inner = inner_region.inner_region_boundary(cfg, resolution=rc.directions,
                                               budget=rc.budget)
    ts = inner_region.time_sharing_boundary(cfg)
    segments = classifier.capacity_segments(cfg, rc.budget)

    out_dir.mkdir(parents=True, exist_ok=True)
    _write_boundary_csv(out_dir / "outer.csv", outer, rc.unit)
    _write_boundary_csv(out_dir / "inner.csv", inner, rc.unit)
    _write_boundary_csv(out_dir / "ts.csv", ts, rc.unit)

    w = 1.0 / math.sqrt(2.0)
    sum_inner = _scalarized_max(inner, w, w)
    sum_ts = _scalarized_max(ts, w, w)
    report = {
        "config": _config_payload(rc),
        "unit": rc.unit,
        "segments": segments.as_dict(),
        "gaps": {
            "sum_rate_45deg": {
                "inner": sum_inner * scale,
                "time_sharing": sum_ts * scale,
                "margin": (sum_inner - sum_ts) * scale,
            },
            "axis_r1": {"inner": inner.r1_max * scale, "outer": outer.r1_max * scale,
                        "gap": (outer.r1_max - inner.r1_max) * scale},
            "axis_r2": {"inner": inner.r2_max * scale, "outer": outer.r2_max * scale,
                        "gap": (outer.r2_max - inner.r2_max) * scale},
        },
        "inner_vertices": [
            {"r1": p.r1 * scale, "r2": p.r2 * scale, "provenance": tag}
            for p, tag in zip(inner.points, inner.provenance)
        ],
    }
    _json_dump(out_dir / "report.json", report)
    (out_dir / "region.svg").write_text(
        _svg.region_svg(outer, inner, ts, rc.unit, scale), encoding="utf-8")
    return 0


def run_verify(args) -> int:
    """Run identity suites; per-config mode uses strategies on that channel."""
    draws = args.random if args.random is not None else 1000
    results = verify.run_checks(seed=args.seed, draws=draws)
    if args.config is not None:
        rc = RunConfig.load(args.config)
        fixture = verify.check_oracle_equivalence_for(rc.channel, seed=args.seed,
                                                      draws=max(100, draws // 10))
        results.append(fixture)
    ok = True
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{res.name}: worst deviation {res.worst:.3e} "
              f"(tolerance {res.tolerance:.0e}, {res.draws} draws) {status}")
        ok = ok and res.passed
    return 0 if ok else 1


def run_classify(rc: RunConfig, out_dir: Path) -> int:
    segments = classifier.capacity_segments(rc.channel, rc.budget)
    out_dir.mkdir(parents=True, exist_ok=True)
    _json_dump(out_dir / "report.json",
               {"config": _config_payload(rc), "unit": rc.unit,
                "segments": segments.as_dict()})
    return 0


def _mc_strategy_grid(cfg: ChannelConfig):
    """Default strategies exercised by the Monte Carlo check."""
    grid = []
    for label, rho, gamma, kinds in (
        ("dpc_mid_split", (0.0, 0.0), 0.5, ("dpc", "dpc")),
        ("dpc_user1_all", (0.0, 0.0), 1.0, ("dpc", "dpc")),
        ("cancel_mixed", (-0.3, -0.3), 0.5, ("cancel", "cancel")),
    ):
        b1, b2 = beta_from_rho(cfg, CorrelationPoint(*rho))
        strat = closed_form.star_strategy(cfg, b1, b2, gamma,
                                          kind1=kinds[0], kind2=kinds[1])
        grid.append((label, strat))
    return grid


def run_mc(rc: RunConfig, out_dir: Path) -> int:
    cfg = rc.channel
    entries = []
    all_pass = True
    for label, strat in _mc_strategy_grid(cfg):
        rep = montecarlo.covariance_check(cfg, strat, n=rc.mc_n,
                                          seed=rc.mc_seed, tol_rel=rc.mc_tol_rel)
        all_pass = all_pass and rep.passed
        entries.append({
            "label": label,
            "gamma": strat.gamma, "beta1": strat.beta1, "beta2": strat.beta2,
            "max_abs_error": rep.max_abs_error,
            "max_rel_error": rep.max_rel_error,
            "passed": rep.passed,
        })
    out_dir.mkdir(parents=True, exist_ok=True)
    _json_dump(out_dir / "mc_report.json",
               {"config": _config_payload(rc),
                "n": rc.mc_n, "seed": rc.mc_seed, "tol_rel": rc.mc_tol_rel,
                "strategies": entries, "passed": all_pass})
    return 0 if all_pass else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helperbounds",
        description="Rate-region bounds for the state-cognitive-helper parallel channel.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_region = sub.add_parser("region", help="compute and emit region boundaries")
    p_region.add_argument("--config", required=True, help="JSON config path")
    p_region.add_argument("--out", required=True, help="output directory")
    p_region.add_argument("--unit", choices=("bits", "nats"), default=None)

    p_verify = sub.add_parser("verify", help="run cross-validation suites")
    p_verify.add_argument("--config", default=None, help="JSON config path")
    p_verify.add_argument("--random", type=int, default=None, help="draw count")
    p_verify.add_argument("--seed", type=int, default=1)

    p_classify = sub.add_parser("classify", help="capacity-segment report")
    p_classify.add_argument("--config", required=True)
    p_classify.add_argument("--out", required=True)

    p_mc = sub.add_parser("mc", help="Monte Carlo covariance validation")
    p_mc.add_argument("--config", required=True)
    p_mc.add_argument("--out", required=True)
    p_mc.add_argument("--seed", type=int, default=None, help="override config seed")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return run_verify(args)
        rc = RunConfig.load(args.config)
        if getattr(args, "unit", None):
            rc = RunConfig.from_dict({**_config_payload(rc), "unit": args.unit})
        if getattr(args, "seed", None) is not None and args.command == "mc":
            raw = _config_payload(rc)
            raw["mc"]["seed"] = args.seed
            rc = RunConfig.from_dict(raw)
        out_dir = Path(args.out)
        if args.command == "region":
            return run_region(rc, out_dir)
        if args.command == "classify":
            return run_classify(rc, out_dir)
        if args.command == "mc":
            return run_mc(rc, out_dir)
        raise AssertionError(f"unhandled command {args.command}")
    except (HelperBoundsError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
