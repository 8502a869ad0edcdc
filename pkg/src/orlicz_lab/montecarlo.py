"""Monte Carlo verification that i.i.d. symmetric copies match the predicted norms.

A trial draws n independent symmetrized samples of a prescribed decreasing
rearrangement (inverse-transform from the atom cumulative, times a fair
sign), forms the coefficient-weighted sum, and the p-th moment over many
trials estimates the L_p norm.  The estimate is compared against either the
Luxemburg-side prediction ``1 / M^{-1}(1/n)`` or the exact sum-space norm of
the disjoint copies.

Reproducibility: trial i draws from a counter-based stream keyed by
``(seed, i)`` (uniforms first, then signs), so reports are bit-identical for
identical configs regardless of execution order or chunking.

Sums whose atom values span more than 2**50 in dynamic range are reduced in
the log domain with the peak factored out and a compensated mantissa sum,
so tower-type rearrangements cannot silently lose their small terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .analysis import lp_l2_norm
from .measure import StepFunction, scaled_disjoint_union
from .numerics import NEG_INF
from .orlicz import OrliczFunction, luxemburg_norm

_LOG_SPAN_LIMIT = 50.0
_BATCHES = 10


def _parse_scheme(scheme: str) -> tuple[str, float]:
    if scheme == "flat" or scheme == "unit":
        return scheme, 0.0
    for prefix in ("geometric:", "geometric("):
        if scheme.startswith(prefix):
            raw = scheme[len(prefix):].rstrip(")")
            r = float(raw)
            if not 0.0 < r < 1.0:
                raise ValueError("geometric ratio must lie in (0, 1)")
            return "geometric", r
    raise ValueError(f"unknown coefficient scheme {scheme!r}")


def _coefficients(scheme: str, n: int) -> np.ndarray:
    kind, r = _parse_scheme(scheme)
    if kind == "flat":
        return np.ones(n)
    if kind == "unit":
        out = np.zeros(n)
        out[0] = 1.0
        return out
    return r ** np.arange(n, dtype=float)


@dataclass(frozen=True)
class SimConfig:
    rearrangement: StepFunction
    p: float
    n_list: tuple[int, ...]
    trials: int
    seed: int
    coefficient_scheme: str = "flat"

    def __post_init__(self) -> None:
        if not 1.0 <= self.p <= 2.0:
            raise ValueError("p must lie in [1, 2]")
        if self.trials < 100:
            raise ValueError("need at least 100 trials for stable batch means")
        ns = tuple(int(n) for n in self.n_list)
        if len(ns) == 0 or any(n < 1 for n in ns):
            raise ValueError("n_list must hold positive integers")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("n_list must be sorted strictly increasing")
        object.__setattr__(self, "n_list", ns)
        _parse_scheme(self.coefficient_scheme)  # validate early


@dataclass(frozen=True)
class SimRecord:
    n: int
    empirical: float
    reference: float
    ratio: float
    stderr: float
    #: signed mean of the trial sums and its standard error (symmetry check)
    mean_sum: float = 0.0
    mean_sum_stderr: float = 0.0


@dataclass(frozen=True)
class SimReport:
    records: tuple[SimRecord, ...]
    band: tuple[float, float]
    seed: int

    def to_rows(self) -> list[dict]:
        return [
            {
                "n": r.n,
                "empirical": r.empirical,
                "reference": r.reference,
                "ratio": r.ratio,
                "stderr": r.stderr,
            }
            for r in self.records
        ]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "band_min": self.band[0],
            "band_max": self.band[1],
            "rows": self.to_rows(),
        }


def sample_value(f: StepFunction, u: float, sigma: int) -> float:
    """One symmetrized draw sigma * f*(u) for a uniform deviate u."""
    if not 0.0 < u < 1.0:
        raise ValueError("u must lie in (0, 1)")
    if sigma not in (-1, 1):
        raise ValueError("sigma must be -1 or +1")
    cum, _, values = _lookup_tables(f)
    idx = int(np.searchsorted(cum, u, side="right"))
    return float(sigma) * float(values[idx])


def _lookup_tables(f: StepFunction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    cum = np.array([float(c) for c in f.cumulative()])
    log2_v = np.array([v.log2 for v, _ in f.atoms] + [NEG_INF])
    with np.errstate(over="ignore"):
        values = np.exp2(log2_v)
    return cum, log2_v, values


def _trial_stream(seed: int, trial: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, trial], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _simulate_log2_sums(
    f: StepFunction, coeffs: np.ndarray, trials: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-trial (sign, log2 |sum|) of the weighted symmetrized sample sums."""
    cum, log2_v, values = _lookup_tables(f)
    n = len(coeffs)
    span = log2_v[:-1].max() - log2_v[:-1].min() if len(log2_v) > 1 else 0.0
    log_path = span > _LOG_SPAN_LIMIT
    active = np.flatnonzero(coeffs != 0.0)
    log2_c = np.full(n, NEG_INF)
    log2_c[active] = np.log2(np.abs(coeffs[active]))
    sign_c = np.sign(coeffs)
    out_sign = np.empty(trials)
    out_log2 = np.empty(trials)
    for i in range(trials):
        rng = _trial_stream(seed, i)
        u = rng.random(n)
        signs = rng.integers(0, 2, n) * 2.0 - 1.0
        idx = np.searchsorted(cum, u, side="right")
        if not log_path:
            s = float(np.dot(signs * coeffs, values[idx]))
            out_sign[i] = math.copysign(1.0, s) if s != 0.0 else 0.0
            out_log2[i] = math.log2(abs(s)) if s != 0.0 else NEG_INF
            continue
        term_log2 = log2_v[idx] + log2_c
        peak = term_log2.max()
        if peak == NEG_INF:
            out_sign[i] = 0.0
            out_log2[i] = NEG_INF
            continue
        mant = math.fsum(signs * sign_c * np.exp2(term_log2 - peak))
        if mant == 0.0:
            out_sign[i] = 0.0
            out_log2[i] = NEG_INF
        else:
            out_sign[i] = math.copysign(1.0, mant)
            out_log2[i] = peak + math.log2(abs(mant))
    return out_sign, out_log2


def _p_norm_from_log2(t: np.ndarray, p: float) -> float:
    peak = float(np.max(t))
    if peak == NEG_INF:
        return 0.0
    mom = float(np.mean(np.exp2(p * (t - peak))))
    return float(2.0 ** (peak + math.log2(mom) / p))


def _moment_stats(
    signs: np.ndarray, t: np.ndarray, p: float
) -> tuple[float, float, float, float]:
    """Point estimate, batch-means stderr, signed mean, and its stderr."""
    empirical = _p_norm_from_log2(t, p)
    batches = [
        _p_norm_from_log2(chunk, p) for chunk in np.array_split(t, _BATCHES)
    ]
    stderr = float(np.std(batches, ddof=1) / math.sqrt(_BATCHES))
    peak = float(np.max(t))
    if peak == NEG_INF:
        return empirical, stderr, 0.0, 0.0
    scaled = signs * np.exp2(t - peak)
    m = float(np.mean(scaled))
    var = max(float(np.mean(scaled * scaled)) - m * m, 0.0)
    scale = 2.0 ** peak
    return (
        empirical,
        stderr,
        scale * m,
        scale * math.sqrt(var / len(t)),
    )


def empirical_lp_norm(
    cfg: SimConfig, reference_function: Optional[OrliczFunction] = None
) -> SimReport:
    """Estimate ``(E |sum_k a_k f_k|^p)^(1/p)`` for each n in the config.

    The reference column is ``1/M^{-1}(1/n)`` (flat scheme) or the Luxemburg
    norm of the coefficients when an Orlicz function is supplied, else the
    exact sum-space norm of the disjoint copies.  Finite atom lists are
    always integrable, so there is no integrability precondition to check
    beyond construction of the step function itself.
    """
    kind, _ = _parse_scheme(cfg.coefficient_scheme)
    records = []
    for n in cfg.n_list:
        coeffs = _coefficients(cfg.coefficient_scheme, n)
        signs, t = _simulate_log2_sums(cfg.rearrangement, coeffs, cfg.trials, cfg.seed)
        empirical, stderr, mean_sum, mean_stderr = _moment_stats(signs, t, cfg.p)
        if reference_function is not None:
            if kind == "flat":
                reference = float(
                    2.0 ** -reference_function.log2_inverse(-math.log2(n))
                )
            else:
                reference = luxemburg_norm(reference_function, coeffs)
        elif kind == "flat":
            reference = lp_l2_norm(cfg.rearrangement.disjoint_sum(n), cfg.p)
        else:
            reference = lp_l2_norm(
                scaled_disjoint_union(cfg.rearrangement, coeffs.tolist()), cfg.p
            )
        records.append(
            SimRecord(
                n, empirical, reference, empirical / reference, stderr,
                mean_sum, mean_stderr,
            )
        )
    ratios = [r.ratio for r in records]
    return SimReport(tuple(records), (min(ratios), max(ratios)), cfg.seed)


@dataclass(frozen=True)
class RosenthalResult:
    """Empirical L_p norm of a weighted i.i.d. sum against the exact sum-space norm."""

    numerator: float
    denominator: float
    stderr: float
    seed: int

    @property
    def ratio(self) -> float:
        return self.numerator / self.denominator

    def to_dict(self) -> dict:
        return {
            "numerator": self.numerator,
            "denominator": self.denominator,
            "ratio": self.ratio,
            "stderr": self.stderr,
            "seed": self.seed,
        }


def rosenthal_ratio(
    f: StepFunction,
    coefficients: Sequence[float],
    p: float,
    trials: int = 2000,
    seed: int = 0,
) -> RosenthalResult:
    """Monte Carlo check of the moment-sum equivalence for one coefficient vector.

    The numerator estimates ``|| sum a_k f_k ||_p`` by simulation; the
    denominator is the exact sum-space norm of the same coefficients applied
    to disjoint copies.  Their ratio is the quantity the theory promises to
    keep bounded, uniformly in the coefficients.
    """
    if trials < 100:
        raise ValueError("need at least 100 trials for stable batch means")
    if not 1.0 <= p <= 2.0:
        raise ValueError("p must lie in [1, 2]")
    coeffs = np.asarray(coefficients, dtype=float)
    if coeffs.ndim != 1 or len(coeffs) == 0 or np.all(coeffs == 0.0):
        raise ValueError("need a nonzero 1-d coefficient vector")
    signs, t = _simulate_log2_sums(f, coeffs, trials, seed)
    numerator, stderr, _, _ = _moment_stats(signs, t, p)
    denominator = lp_l2_norm(scaled_disjoint_union(f, coeffs.tolist()), p)
    return RosenthalResult(numerator, denominator, stderr, seed)
