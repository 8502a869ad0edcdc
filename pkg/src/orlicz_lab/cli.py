"""Command-line front end.

One subcommand per claim group, so a reproduction script reads like the list
of checks it performs.  Every run writes CSV/JSON artifacts (and an SVG chart
where a picture helps) into ``<outdir>/<subcommand>/<label>/`` together with a
``manifest.json`` naming the command, parameters, and outputs.

Exit codes: 0 when every verdict in the emitted reports passes, 1 on a failed
verdict or a computation error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from datetime import datetime, timezone
from typing import Callable, Optional

from . import __version__
from .analysis import (
    DivergenceError,
    cesaro_head,
    cesaro_tail,
    check_spanning_condition,
    criteria_agreement,
    equivalence_constant,
    profile_step_function,
    uniqueness_check,
)
from .counterexample import (
    TowerConfig,
    TruncationError,
    dyadic_tower,
    find_nonequiv_witness,
    quartic_tower,
    verify_min_integral_bounds,
    verify_norm_correspondence,
)
from .measure import StepFunction
from .montecarlo import SimConfig, empirical_lp_norm, rosenthal_ratio
from .numerics import Grid
from .orlicz import (
    DomainError,
    InducedFunction,
    OrliczFunction,
    PowerLogFunction,
    epsilon_margin,
    make_family,
)
from .reporting import ChartSeries, RunManifest, emit_chart, write_csv, write_json

# --------------------------------------------------------------------------
# config file: flat key=value, loadable via --config, explicit flags override

_BOOL_KEYS = {"deterministic"}
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _config_path(argv: list[str]) -> Optional[str]:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config(argv: list[str]) -> list[str]:
    """Append config entries as flags; anything already on argv wins."""
    path = _config_path(argv)
    if path is None:
        return argv
    out = list(argv)
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line is not key=value: {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            flag = "--" + key.replace("_", "-")
            if any(tok == flag or tok.startswith(flag + "=") for tok in argv):
                continue
            if key.replace("-", "_") in _BOOL_KEYS:
                if value.lower() in _TRUE:
                    out.append(flag)
                elif value.lower() not in _FALSE:
                    raise ValueError(f"boolean config key {key!r} got {value!r}")
            else:
                out.extend((flag, value))
    return out


# --------------------------------------------------------------------------
# shared flag groups


def _common_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--outdir", default="runs", help="root directory for run artifacts")
    p.add_argument(
        "--label", default=None, help="run folder name (default: UTC timestamp)"
    )
    p.add_argument(
        "--deterministic",
        action="store_true",
        help="strip volatile SVG metadata so re-runs are byte-identical",
    )
    p.add_argument(
        "--config",
        default=None,
        help="flat key=value file supplying defaults; explicit flags override",
    )
    return p


def _family_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument(
        "--family",
        choices=("power", "powerlog", "induced", "tabulated"),
        default="power",
        help="Orlicz function family",
    )
    p.add_argument("--q", type=float, default=None, help="exponent of the power family")
    p.add_argument(
        "--tower",
        choices=("dyadic", "quartic"),
        default="dyadic",
        help="tower flavor behind the induced family",
    )
    p.add_argument("--levels", type=int, default=None, help="tower truncation depth")
    p.add_argument(
        "--max-log",
        type=float,
        default=4096.0,
        help="deepest log2(1/t) the tower must serve",
    )
    p.add_argument(
        "--table", default=None, help="CSV of (log2 t, log2 value) knots, tabulated family"
    )
    return p


def _tower_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--levels", type=int, default=None, help="tower truncation depth")
    p.add_argument(
        "--max-log",
        type=float,
        default=4096.0,
        help="deepest log2(1/t) the tower must serve",
    )
    return p


def _grid_parent(lo: float, hi: float, points: int) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument(
        "--grid-lo", type=float, default=lo, help="log2 of the deepest grid point"
    )
    p.add_argument(
        "--grid-hi", type=float, default=hi, help="log2 of the shallowest grid point"
    )
    p.add_argument(
        "--grid-points",
        type=int,
        default=points,
        help="0 for one point per power of two, else a log-uniform point count",
    )
    return p


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _grid(ns: argparse.Namespace) -> Grid:
    if ns.grid_points == 0:
        return Grid.dyadic(int(math.floor(ns.grid_lo)), int(math.ceil(ns.grid_hi)))
    return Grid.log_uniform(ns.grid_lo, ns.grid_hi, ns.grid_points)


def _tower_config(ns: argparse.Namespace) -> TowerConfig:
    if ns.levels is not None:
        return TowerConfig(ns.levels, ns.max_log)
    return TowerConfig.for_max_log2(ns.max_log)


def _tower_fn(ns: argparse.Namespace) -> StepFunction:
    cfg = _tower_config(ns)
    return dyadic_tower(cfg) if ns.tower == "dyadic" else quartic_tower(cfg)


def _family(ns: argparse.Namespace) -> OrliczFunction:
    if ns.family == "induced":
        return make_family("induced", source=_tower_fn(ns))
    return make_family(ns.family, q=ns.q, csv_path=ns.table)


def _pf(flag: bool) -> str:
    return "pass" if flag else "FAIL"


# --------------------------------------------------------------------------
# run directory plumbing


class Run:
    """Owns one artifact directory and its manifest."""

    def __init__(self, command: str, ns: argparse.Namespace, seed: Optional[int] = None):
        label = ns.label or datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
        self.dir = os.path.join(ns.outdir, *command.split("/"), label)
        os.makedirs(self.dir, exist_ok=True)
        self.deterministic = bool(ns.deterministic)
        skip = {"outdir", "label", "config", "func"}
        params = {k: v for k, v in vars(ns).items() if k not in skip}
        params["threads"] = os.environ.get("ORLICZ_LAB_THREADS", "1")
        self.manifest = RunManifest(
            command=command, parameters=params, seed=seed, version=__version__
        )

    def path(self, name: str) -> str:
        return os.path.join(self.dir, name)

    def csv(self, name: str, rows: list[dict], columns: Optional[list[str]] = None) -> str:
        path = self.path(name)
        write_csv(path, rows, columns)
        return self.manifest.add_output(path)

    def json(self, name: str, payload: dict) -> str:
        path = self.path(name)
        write_json(path, payload)
        return self.manifest.add_output(path)

    def chart(self, name: str, series: list[ChartSeries], **kwargs) -> str:
        path = self.path(name)
        emit_chart(series, path, deterministic=self.deterministic, **kwargs)
        return self.manifest.add_output(path)

    def finish(self, verdict: bool) -> int:
        self.manifest.write(self.path("manifest.json"))
        print(f"{self.manifest.command}: {_pf(verdict)} ({self.dir})")
        return 0 if verdict else 1


# --------------------------------------------------------------------------
# subcommand handlers


def _cmd_indices(ns: argparse.Namespace) -> int:
    M = _family(ns)
    report = epsilon_margin(M, ns.p, _grid(ns), margin=ns.margin, cap=ns.cap)
    run = Run("indices", ns)
    run.json("indices.json", {"family": M.describe(), "p": ns.p, **report.to_dict()})
    est = report.estimates
    run.csv(
        "indices.csv",
        [
            {
                "family": M.name,
                "p": ns.p,
                "alpha_lower": est.alpha_lower,
                "beta_upper": est.beta_upper,
                "eps_convex": report.eps_convex,
                "eps_concave": report.eps_concave,
                "margin": report.margin,
                "verdict": report.verdict,
            }
        ],
    )
    print(
        f"indices: eps_convex={report.eps_convex:.6g}"
        f" eps_concave={report.eps_concave:.6g} verdict={_pf(report.verdict)}"
    )
    return run.finish(report.verdict)


def _cmd_equivalence(ns: argparse.Namespace) -> int:
    M = _family(ns)
    grid = _grid(ns)
    levels = ns.atoms if ns.atoms > 0 else int(math.ceil(-grid.lo_log2)) + 8
    report = uniqueness_check(M, profile_step_function(M, levels), grid, cap=ns.cap)
    run = Run("equivalence", ns)
    run.json(
        "equivalence.json",
        {"family": M.describe(), "levels": levels, **report.to_dict()},
    )
    run.csv(
        "equivalence.csv",
        [
            {"log2_t": x, "log2_ratio": r, "ratio": 2.0**r}
            for x, r in report.rows
        ],
    )
    run.chart(
        "equivalence.svg",
        [
            ChartSeries(
                "staircase / profile",
                [x for x, _ in report.rows],
                [2.0**r for _, r in report.rows],
            )
        ],
        title=f"Profile staircase against the profile, {M.name}",
        x_label="log2 t",
        y_label="ratio",
    )
    print(f"equivalence: constant={report.constant:.6g} cap={ns.cap:g}")
    return run.finish(report.verdict)


def _cmd_cesaro(ns: argparse.Namespace) -> int:
    M = _family(ns)
    grid = _grid(ns)
    heads = [(x, cesaro_head(M, ns.p, x)) for x in grid.log2_points]
    tails = None
    if ns.tail_q is not None:
        tails = [(x, cesaro_tail(M, ns.tail_q, x)) for x in grid.log2_points]
    worst = max(h for _, h in heads)
    if tails is not None:
        worst = max(worst, max(v for _, v in tails))
    verdict = worst <= ns.cap
    rows = []
    for i, (x, h) in enumerate(heads):
        row = {"log2_t": x, "head_ratio": h}
        if tails is not None:
            row["tail_ratio"] = tails[i][1]
        rows.append(row)
    run = Run("cesaro", ns)
    run.csv("cesaro.csv", rows)
    run.json(
        "cesaro.json",
        {
            "family": M.describe(),
            "p": ns.p,
            "tail_q": ns.tail_q,
            "cap": ns.cap,
            "worst": worst,
            "verdict": verdict,
            "rows": rows,
        },
    )
    series = [
        ChartSeries(f"head, p={ns.p:g}", [x for x, _ in heads], [h for _, h in heads])
    ]
    if tails is not None:
        series.append(
            ChartSeries(
                f"tail, q={ns.tail_q:g}", [x for x, _ in tails], [v for _, v in tails]
            )
        )
    run.chart(
        "cesaro.svg",
        series,
        title=f"Cesaro ratios, {M.name}",
        x_label="log2 t",
        y_label="ratio",
    )
    print(f"cesaro: worst={worst:.6g} cap={ns.cap:g} verdict={_pf(verdict)}")
    return run.finish(verdict)


def _cmd_main_cond(ns: argparse.Namespace) -> int:
    M = _family(ns)
    report = check_spanning_condition(M, M.profile(), ns.p, _grid(ns), cap=ns.cap)
    run = Run("main-cond", ns)
    run.json("main-cond.json", {"family": M.describe(), **report.to_dict()})
    run.csv(
        "main-cond.csv",
        [{"log2_t": x, "ratio": r} for x, r in report.rows],
    )
    run.chart(
        "main-cond.svg",
        [
            ChartSeries(
                "head+tail over profile",
                [x for x, _ in report.rows],
                [r for _, r in report.rows],
            )
        ],
        title=f"Spanning functional, {M.name}, p={ns.p:g}",
        x_label="log2 t",
        y_label="ratio",
    )
    print(f"main-cond: constant={report.constant:.6g} cap={ns.cap:g}")
    return run.finish(report.verdict)


def _cmd_theorem33(ns: argparse.Namespace) -> int:
    M = _family(ns)
    agreement = criteria_agreement(M, ns.p, _grid(ns), cap=ns.cap, margin=ns.margin)
    run = Run("theorem33", ns)
    run.json(
        "theorem33.json", {"family": M.describe(), "p": ns.p, **agreement.to_dict()}
    )
    run.csv(
        "theorem33.csv",
        [
            {
                "family": M.name,
                "p": ns.p,
                "spanning_constant": agreement.spanning.constant,
                "spanning_verdict": agreement.spanning.verdict,
                "eps_convex": agreement.margins.eps_convex,
                "eps_concave": agreement.margins.eps_concave,
                "margin_verdict": agreement.margins.verdict,
                "agree": agreement.agree,
            }
        ],
    )
    run.chart(
        "theorem33.svg",
        [
            ChartSeries(
                "head+tail over profile",
                [x for x, _ in agreement.spanning.rows],
                [r for _, r in agreement.spanning.rows],
            )
        ],
        title=f"Spanning functional, {M.name}, p={ns.p:g}",
        x_label="log2 t",
        y_label="ratio",
    )
    print(
        f"theorem33: spanning={_pf(agreement.spanning.verdict)}"
        f" margins={_pf(agreement.margins.verdict)} agree={_pf(agreement.agree)}"
    )
    return run.finish(agreement.agree)


def _cmd_lemma51(ns: argparse.Namespace) -> int:
    cfg = _tower_config(ns)
    report = verify_min_integral_bounds(
        ns.flavor, cfg, list(range(3, int(ns.max_log) + 1))
    )
    run = Run("counterexample/lemma51", ns)
    run.csv("lemma51.csv", report.to_rows())
    run.json("lemma51.json", report.to_dict())
    run.chart(
        "lemma51.svg",
        [
            ChartSeries(
                "integral * L",
                [r.L for r in report.rows],
                [r.scaled for r in report.rows],
            )
        ],
        title=f"Min-integral envelope, {ns.flavor} tower, K={cfg.levels}",
        x_label="L = log2(1/t)",
        y_label="integral * L",
    )
    print(
        f"lemma51: flavor={ns.flavor} envelope=[{report.ratio_min:.4g},"
        f" {report.ratio_max:.4g}] verdict={_pf(report.passed)}"
    )
    return run.finish(report.passed)


def _cmd_witness(ns: argparse.Namespace) -> int:
    cfg = _tower_config(ns)
    witnesses = [find_nonequiv_witness(c, cfg) for c in _floats(ns.log2_c)]
    verdict = all(w.verified for w in witnesses)
    run = Run("counterexample/witness", ns)
    rows = [w.to_dict() for w in witnesses]
    run.csv("witness.csv", rows)
    run.json("witness.json", {"witnesses": rows, "all_verified": verdict})
    for w in witnesses:
        print(
            f"witness: log2_C={w.log2_C:g} k={w.k} log2_t={w.log2_t:g}"
            f" gap_log2={w.gap_log2:.4g} {_pf(w.verified)}"
        )
    return run.finish(verdict)


def _cmd_induced(ns: argparse.Namespace) -> int:
    cfg = _tower_config(ns)
    grid = _grid(ns)
    flavors = ("dyadic", "quartic") if ns.flavor == "both" else (ns.flavor,)
    target = PowerLogFunction()
    payload = {"cap": ns.cap, "flavors": {}}
    rows = []
    series = []
    verdict = True
    for flavor in flavors:
        f = dyadic_tower(cfg) if flavor == "dyadic" else quartic_tower(cfg)
        rep = equivalence_constant(InducedFunction(f), target, grid, cap=ns.cap)
        payload["flavors"][flavor] = rep.to_dict()
        rows.extend(
            {"flavor": flavor, "log2_t": x, "log2_ratio": r, "ratio": 2.0**r}
            for x, r in rep.rows
        )
        series.append(
            ChartSeries(
                flavor, [x for x, _ in rep.rows], [2.0**r for _, r in rep.rows]
            )
        )
        verdict = verdict and rep.verdict
        print(f"induced: flavor={flavor} constant={rep.constant:.6g} cap={ns.cap:g}")
    payload["verdict"] = verdict
    run = Run("counterexample/induced", ns)
    run.csv("induced.csv", rows)
    run.json("induced.json", payload)
    run.chart(
        "induced.svg",
        series,
        title="Induced function against t / (1 - ln t)",
        x_label="log2 t",
        y_label="ratio",
    )
    return run.finish(verdict)


def _cmd_prop53(ns: argparse.Namespace) -> int:
    cfg = _tower_config(ns)
    report = verify_norm_correspondence(
        cfg,
        p=ns.p,
        n_log2_list=range(ns.max_n_log2 + 1),
        cap=ns.cap,
        geometric_sizes=tuple(_ints(ns.sizes)),
    )
    run = Run("counterexample/prop53", ns)
    run.csv("prop53.csv", [r.to_dict() for r in report.rows])
    run.json("prop53.json", report.to_dict())
    print(
        f"prop53: constant_induced={report.constant_induced:.6g}"
        f" constant_powerlog={report.constant_powerlog:.6g} cap={ns.cap:g}"
    )
    return run.finish(report.verdict)


def _cmd_simulate(ns: argparse.Namespace) -> int:
    reference: Optional[OrliczFunction]
    if ns.family == "induced":
        f = _tower_fn(ns)
        reference = None
    else:
        M = _family(ns)
        f = profile_step_function(M, ns.atoms)
        reference = M
    cfg = SimConfig(
        rearrangement=f,
        p=ns.p,
        n_list=tuple(_ints(ns.n)),
        trials=ns.trials,
        seed=ns.seed,
        coefficient_scheme=ns.scheme,
    )
    report = empirical_lp_norm(cfg, reference_function=reference)
    band_ratio = report.band[1] / report.band[0]
    verdict = band_ratio <= ns.band_cap
    run = Run("simulate", ns, seed=ns.seed)
    run.csv("simulate.csv", report.to_rows())
    run.json(
        "simulate.json",
        {
            **report.to_dict(),
            "band_ratio": band_ratio,
            "band_cap": ns.band_cap,
            "verdict": verdict,
        },
    )
    run.chart(
        "simulate.svg",
        [
            ChartSeries(
                "empirical / reference",
                [float(r.n) for r in report.records],
                [r.ratio for r in report.records],
            )
        ],
        title=f"Empirical p-norm against reference, p={ns.p:g}",
        x_label="n",
        y_label="ratio",
    )
    print(
        f"simulate: band_ratio={band_ratio:.4g} cap={ns.band_cap:g}"
        f" verdict={_pf(verdict)}"
    )
    return run.finish(verdict)


def _cmd_rosenthal(ns: argparse.Namespace) -> int:
    if ns.family == "induced":
        f = _tower_fn(ns)
    else:
        f = profile_step_function(_family(ns), ns.atoms)
    result = rosenthal_ratio(f, _floats(ns.coeffs), ns.p, trials=ns.trials, seed=ns.seed)
    run = Run("rosenthal", ns, seed=ns.seed)
    run.csv("rosenthal.csv", [result.to_dict()])
    run.json("rosenthal.json", result.to_dict())
    print(
        f"rosenthal: ratio={result.ratio:.6g} (stderr {result.stderr:.2g}"
        f" on the numerator)"
    )
    return run.finish(True)


# --------------------------------------------------------------------------
# parser assembly


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orlicz-lab",
        description="Numerical checks for Orlicz sequence-space geometry.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")
    common = _common_parent()
    family = _family_parent()
    tower = _tower_parent()

    p = sub.add_parser(
        "indices",
        parents=[common, family, _grid_parent(-256.0, -1.0, 0)],
        help="two-sided exponent window and the epsilon margins at p",
    )
    p.add_argument("--p", type=float, default=1.0, help="head exponent, 1 <= p < 2")
    p.add_argument("--cap", type=float, default=10.0, help="dilation-constant cap")
    p.add_argument("--margin", type=float, default=0.02, help="required margin width")
    p.set_defaults(func=_cmd_indices)

    p = sub.add_parser(
        "equivalence",
        parents=[common, family, _grid_parent(-256.0, -1.0, 0)],
        help="profile staircase against the smooth profile",
    )
    p.add_argument("--cap", type=float, default=32.0, help="equivalence-constant cap")
    p.add_argument(
        "--atoms", type=int, default=0, help="staircase depth (0: cover the grid)"
    )
    p.set_defaults(func=_cmd_equivalence)

    p = sub.add_parser(
        "cesaro",
        parents=[common, family, _grid_parent(-40.0, -1.0, 0)],
        help="head (and optional tail) Cesaro ratios on a grid",
    )
    p.add_argument("--p", type=float, default=1.0, help="head exponent")
    p.add_argument("--tail-q", type=float, default=None, help="tail exponent, optional")
    p.add_argument("--cap", type=float, default=10.0, help="boundedness cap")
    p.set_defaults(func=_cmd_cesaro)

    p = sub.add_parser(
        "main-cond",
        parents=[common, family, _grid_parent(-40.0, -1.0, 0)],
        help="head+tail functional of the profile against its height",
    )
    p.add_argument("--p", type=float, default=1.0, help="head exponent")
    p.add_argument("--cap", type=float, default=6.0, help="constant cap")
    p.set_defaults(func=_cmd_main_cond)

    p = sub.add_parser(
        "theorem33",
        parents=[common, family, _grid_parent(-256.0, -1.0, 0)],
        help="agreement of the integral criterion with the exponent margins",
    )
    p.add_argument("--p", type=float, default=1.0, help="head exponent, 1 <= p < 2")
    p.add_argument("--cap", type=float, default=10.0, help="shared constant cap")
    p.add_argument("--margin", type=float, default=0.02, help="required margin width")
    p.set_defaults(func=_cmd_theorem33)

    ce = sub.add_parser("counterexample", help="doubly exponential tower checks")
    cesub = ce.add_subparsers(dest="subcommand", required=True, metavar="check")

    p = cesub.add_parser(
        "lemma51",
        parents=[common, tower],
        help="min-integral envelope c/L .. C/L over integer L",
    )
    p.add_argument(
        "--flavor",
        choices=("dyadic", "quartic"),
        default="dyadic",
        help="tower flavor (the explicit envelope holds for dyadic)",
    )
    p.set_defaults(func=_cmd_lemma51)

    p = cesub.add_parser(
        "witness",
        parents=[common, tower],
        help="distribution-gap witnesses refuting equivalence of the towers",
    )
    p.add_argument(
        "--log2-c",
        default="1,16,64",
        help="comma list of log2 C values to refute",
    )
    p.set_defaults(func=_cmd_witness)

    p = cesub.add_parser(
        "induced",
        parents=[common, tower, _grid_parent(-256.0, -1.0, 0)],
        help="induced Orlicz function against t / (1 - ln t)",
    )
    p.add_argument(
        "--flavor",
        choices=("dyadic", "quartic", "both"),
        default="both",
        help="tower flavor(s) to compare",
    )
    p.add_argument("--cap", type=float, default=32.0, help="equivalence-constant cap")
    p.set_defaults(func=_cmd_induced)

    p = cesub.add_parser(
        "prop53",
        parents=[common, tower],
        help="sum-space norms against Luxemburg norms of the induced function",
    )
    p.add_argument("--p", type=float, default=1.0, help="head exponent (must be 1)")
    p.add_argument(
        "--max-n-log2", type=int, default=16, help="largest log2 of the copy count"
    )
    p.add_argument("--cap", type=float, default=32.0, help="two-sided ratio cap")
    p.add_argument(
        "--sizes", default="4,64,1024", help="comma list of geometric support sizes"
    )
    p.set_defaults(func=_cmd_prop53)

    p = sub.add_parser(
        "simulate",
        parents=[common, family],
        help="empirical p-norms of coefficient sums against exact references",
    )
    p.add_argument("--p", type=float, default=1.0, help="moment exponent, 1 <= p <= 2")
    p.add_argument("--n", default="16,64,256,1024", help="comma list of copy counts")
    p.add_argument("--trials", type=int, default=2000, help="Monte Carlo trials")
    p.add_argument("--seed", type=int, default=0, help="stream seed")
    p.add_argument(
        "--scheme",
        default="flat",
        help="coefficient scheme: flat, unit, or geometric:r",
    )
    p.add_argument(
        "--atoms", type=int, default=64, help="staircase depth for smooth families"
    )
    p.add_argument(
        "--band-cap", type=float, default=3.0, help="max/min cap on the ratio band"
    )
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser(
        "rosenthal",
        parents=[common, family],
        help="empirical p-norm of one weighted sum over the exact sum-space norm",
    )
    p.add_argument("--p", type=float, default=1.0, help="moment exponent, 1 <= p <= 2")
    p.add_argument("--coeffs", default="1", help="comma list of coefficients")
    p.add_argument("--trials", type=int, default=2000, help="Monte Carlo trials")
    p.add_argument("--seed", type=int, default=0, help="stream seed")
    p.add_argument(
        "--atoms", type=int, default=64, help="staircase depth for smooth families"
    )
    p.set_defaults(func=_cmd_rosenthal)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    raw = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        args = _apply_config(raw)
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    parser = build_parser()
    try:
        ns = parser.parse_args(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler: Callable[[argparse.Namespace], int] = ns.func
    try:
        return handler(ns)
    except (
        DivergenceError,
        TruncationError,
        DomainError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
