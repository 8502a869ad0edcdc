"""Deterministic CSV / JSON / SVG emitters and the run manifest.

Output stability is a contract here: identical inputs must produce byte
identical CSV and JSON, and SVG too once the timestamp metadata is
suppressed.  Floats are therefore written with ``repr`` (shortest
round-trip form), JSON keys are sorted, and the SVG id hash salt is pinned
in deterministic mode.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_DECADES_FOR_LOG = 3.0


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: str, rows: Sequence[dict], columns: Optional[Sequence[str]] = None) -> None:
    """RFC-4180-style CSV: header row, CRLF, '.' decimal, repr floats."""
    if len(rows) == 0:
        raise ValueError("refusing to write an empty CSV")
    cols = list(columns) if columns is not None else list(rows[0].keys())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(cols)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in cols])


def write_json(path: str, payload) -> None:
    """UTF-8 JSON with sorted keys and a trailing newline."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


@dataclass(frozen=True)
class ChartSeries:
    label: str
    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.x) == 0 or len(self.x) != len(self.y):
            raise ValueError("series needs matching nonempty x and y")


def _wants_log(values: list[float]) -> bool:
    positive = [v for v in values if v > 0.0]
    if len(positive) < len(values) or not positive:
        return False
    return math.log10(max(positive) / min(positive)) > _DECADES_FOR_LOG


def emit_chart(
    series: Sequence[ChartSeries],
    path: str,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    deterministic: bool = False,
) -> None:
    """Standalone SVG line chart; axes switch to log scale past 3 decades.

    ``deterministic`` pins the SVG hash salt and strips the creation date so
    reruns are byte identical.
    """
    if len(series) == 0:
        raise ValueError("need at least one series to chart")
    for s in series:
        for v in list(s.x) + list(s.y):
            if not math.isfinite(v):
                raise ValueError(f"series {s.label!r} contains non-finite values")
    xs = [v for s in series for v in s.x]
    ys = [v for s in series for v in s.y]
    if deterministic:
        plt.rcParams["svg.hashsalt"] = "orlicz-lab"
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    try:
        for s in series:
            ax.plot(s.x, s.y, marker="o", markersize=3, linewidth=1.2, label=s.label)
        if _wants_log(xs):
            ax.set_xscale("log")
        if _wants_log(ys):
            ax.set_yscale("log")
        if title:
            ax.set_title(title)
        if x_label:
            ax.set_xlabel(x_label)
        if y_label:
            ax.set_ylabel(y_label)
        if len(series) > 1:
            ax.legend(loc="best", fontsize=8)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        metadata = {"Date": None} if deterministic else None
        fig.savefig(path, format="svg", metadata=metadata)
    finally:
        plt.close(fig)


@dataclass
class RunManifest:
    """What a CLI run did: command, parameters, and the files it left behind."""

    command: str
    parameters: dict
    outputs: list = field(default_factory=list)
    seed: Optional[int] = None
    version: str = ""

    def add_output(self, path: str) -> str:
        self.outputs.append(path)
        return path

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "outputs": sorted(self.outputs),
            "seed": self.seed,
            "version": self.version,
        }

    def write(self, path: str) -> None:
        for out in self.outputs:
            if not os.path.exists(out):
                raise FileNotFoundError(f"manifest lists missing output {out}")
        write_json(path, self.to_dict())
