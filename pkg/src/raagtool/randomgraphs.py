"""Uniform random graphs G(n, N): isolated vertices against the Poisson law,
and how often property (NL) shows up.

Edge counts follow ``N(n) = round(n ln n / 2 + c n)``; in that regime the
number of isolated vertices is asymptotically Poisson with mean
``λ = exp(-2c)``.  Three isolated vertices already give an (NL) triple, so
the (NL) frequency is at least ``P(Poisson(λ) >= 3)`` in the limit, which
exceeds ``λ³ e^{-λ} / 6``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import poisson

from .graphs import Graph, _poison_indices

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "edge_count",
    "sample_gnN",
    "isolated_distribution",
    "nl_frequency",
    "run_experiment",
]


def edge_count(n: int, c: float) -> int:
    """``round(n ln n / 2 + c n)`` clamped to ``[0, n(n-1)/2]``."""
    if n < 1:
        return 0
    raw = 0.5 * n * math.log(n) + c * n
    return int(min(max(round(raw), 0), n * (n - 1) // 2))


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    c: float = 0.0
    samples: int = 2000
    seed: int = 0
    N: int | None = None  # overrides the formula when given

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.N is not None and not 0 <= self.N <= self.n * (self.n - 1) // 2:
            raise ValueError(f"N={self.N} out of range for n={self.n}")

    @property
    def edges(self) -> int:
        return edge_count(self.n, self.c) if self.N is None else self.N


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    N: int
    isolated_histogram: dict
    lambda_: float
    poisson_reference: dict
    tv_distance: float
    empirical_nl_frequency: float | None = None
    nl_lower_bound: float = 0.0
    nl_count: int | None = None
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "n": self.config.n,
            "c": self.config.c,
            "samples": self.config.samples,
            "seed": self.config.seed,
            "N": self.N,
            "lambda": self.lambda_,
            "isolated_histogram": {str(k): v for k, v in sorted(self.isolated_histogram.items())},
            "poisson_reference": {str(k): v for k, v in sorted(self.poisson_reference.items())},
            "tv_distance": self.tv_distance,
            "nl_lower_bound": self.nl_lower_bound,
        }
        if self.empirical_nl_frequency is not None:
            out["empirical_nl_frequency"] = self.empirical_nl_frequency
        return out


_PAIR_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    hit = _PAIR_CACHE.get(n)
    if hit is None:
        hit = _PAIR_CACHE[n] = np.triu_indices(n, k=1)
    return hit


def _sample_masks(n: int, N: int, rng: np.random.Generator) -> list[int]:
    rows, cols = _pairs(n)
    pick = rng.choice(len(rows), size=N, replace=False)
    adj = [0] * n
    for i, j in zip(rows[pick].tolist(), cols[pick].tolist()):
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return adj


def sample_gnN(n: int, N: int, seed: int) -> Graph:
    """Uniform graph on ``v1..vn`` with exactly ``N`` edges."""
    if n < 0 or not 0 <= N <= n * (n - 1) // 2:
        raise ValueError(f"N={N} out of range for n={n}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return Graph.from_masks(_sample_masks(n, N, rng), [f"v{i + 1}" for i in range(n)])


def _sample_stream(cfg: ExperimentConfig):
    N = cfg.edges
    for k in range(cfg.samples):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, k]))
        yield _sample_masks(cfg.n, N, rng)


def _poisson_part(cfg: ExperimentConfig, hist: dict) -> tuple[float, dict, float]:
    lam = math.exp(-2 * cfg.c)
    top = max(max(hist), int(lam + 10 * math.sqrt(lam) + 10))
    ref = {k: float(poisson.pmf(k, lam)) for k in range(top + 1)}
    total = cfg.samples
    diff = sum(abs(hist.get(k, 0) / total - ref[k]) for k in range(top + 1))
    diff += float(poisson.sf(top, lam))  # mass beyond ``top``, where the sample has none
    return lam, ref, 0.5 * diff


def run_experiment(cfg: ExperimentConfig, with_nl: bool = True) -> ExperimentResult:
    hist: dict[int, int] = {}
    nl_hits = 0
    for adj in _sample_stream(cfg):
        iso = sum(1 for a in adj if not a)
        hist[iso] = hist.get(iso, 0) + 1
        if with_nl:
            nl = _poison_indices(adj) is not None
            if iso >= 3 and not nl:
                raise AssertionError("graph with three isolated vertices failed the (NL) check")
            nl_hits += nl
    lam, ref, tv = _poisson_part(cfg, hist)
    return ExperimentResult(
        config=cfg,
        N=cfg.edges,
        isolated_histogram=dict(sorted(hist.items())),
        lambda_=lam,
        poisson_reference=ref,
        tv_distance=tv,
        empirical_nl_frequency=nl_hits / cfg.samples if with_nl else None,
        nl_lower_bound=lam ** 3 * math.exp(-lam) / 6,
        nl_count=nl_hits if with_nl else None,
    )


def isolated_distribution(cfg: ExperimentConfig) -> ExperimentResult:
    """Histogram of isolated-vertex counts and its TV distance to Poisson(e^{-2c})."""
    return run_experiment(cfg, with_nl=False)


def nl_frequency(cfg: ExperimentConfig) -> ExperimentResult:
    """Fraction of samples with property (NL), next to the bound ``λ³e^{-λ}/6``."""
    return run_experiment(cfg, with_nl=True)
