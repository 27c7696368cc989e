"""Synthetic data with known ground truth, used as independent test oracles.

Curve generators evaluate the growth models directly (optionally adding
seeded Gaussian noise, clamping at zero and re-monotonizing so the result is
a valid cumulative curve); the vector generator plants Gaussian clouds with
known labels; the labeled-post generator builds a small corpus whose
amplification metrics are known by construction.  All randomness flows
through keyed Philox streams, never the host default RNG.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

import numpy as np

from .curves import EpiCurve
from .days import EPOCH
from .epimodels import (
    ExpParams,
    SirParams,
    exp_model_eval,
    sir_cumulative_authors,
    sir_integrate,
)
from .ingest import PlatformCorpus, Post
from .reliability import QUESTIONABLE, RELIABLE, AmplificationReport, SourceList
from .rng import substream

SYNTH_KINDS = ("exp_curve", "sir_curve", "clustered_vectors", "labeled_posts")


@dataclass(frozen=True)
class SynthSpec:
    """Declarative recipe for one synthetic dataset (used by the CLI)."""

    kind: str
    params: dict = field(default_factory=dict)
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in SYNTH_KINDS:
            raise ValueError(f"kind must be one of {SYNTH_KINDS}")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be non-negative")


def _noisy_cumulative(values: np.ndarray, noise_sigma: float, seed: int,
                      integer: bool) -> np.ndarray:
    out = values.astype(np.float64).copy()
    if noise_sigma > 0:
        rng = substream(seed)
        out += rng.normal(0.0, noise_sigma * out[-1], size=len(out))
        np.clip(out, 0.0, None, out=out)
        out = np.maximum.accumulate(out)
    if integer:
        out = np.round(out)
    return out


def gen_exp_curve(params: ExpParams, days, noise_sigma: float = 0.0, seed: int = 0,
                  integer: bool = False) -> tuple[EpiCurve, ExpParams]:
    """Damped-exponential curve on integer days, with optional noise.

    With ``noise_sigma=0`` and ``integer=False`` the values are the exact
    model outputs, the reference targets for fixed-point recovery tests.
    Noise is Gaussian with standard deviation ``noise_sigma`` times the final
    value, after which the curve is clamped at zero and re-monotonized.
    """
    day_arr = np.asarray(list(days), dtype=np.int64)
    if len(day_arr) < 2 or not np.all(np.diff(day_arr) > 0):
        raise ValueError("days must be an increasing sequence of length >= 2")
    exact = exp_model_eval(params, day_arr.astype(np.float64))
    values = _noisy_cumulative(exact, noise_sigma, seed, integer)
    return EpiCurve(day_arr, values, "cumulative_authors"), params


def gen_sir_curve(params: SirParams, days, noise_sigma: float = 0.0, step: float = 0.05,
                  seed: int = 0, integer: bool = False) -> tuple[EpiCurve, SirParams]:
    """SIR cumulative-author curve (I + R) sampled daily, with optional noise."""
    day_arr = np.asarray(list(days), dtype=np.int64)
    if len(day_arr) < 2 or not np.all(np.diff(day_arr) > 0):
        raise ValueError("days must be an increasing sequence of length >= 2")
    traj = sir_integrate(params, day_arr.astype(np.float64), step=step)
    exact = sir_cumulative_authors(traj)
    values = _noisy_cumulative(exact, noise_sigma, seed, integer)
    return EpiCurve(day_arr, values, "cumulative_authors"), params


def gen_clustered_vectors(n_clusters: int = 3, points_per_cluster: int = 20, dim: int = 8,
                          separation: float = 4.0, seed: int = 0):
    """Gaussian clouds around well-spread centers, with true labels.

    ``separation`` is the ratio of each center's norm to the rms noise norm
    (dimension-independent); large values give angularly disjoint clouds that
    any sane clustering recovers.  Center directions are orthonormal whenever
    ``n_clusters <= dim``, random unit vectors otherwise.
    """
    if n_clusters < 1 or points_per_cluster < 1 or dim < 2:
        raise ValueError("need n_clusters >= 1, points_per_cluster >= 1, dim >= 2")
    if separation <= 0:
        raise ValueError("separation must be positive")
    rng = substream(seed)
    raw = rng.normal(size=(max(n_clusters, dim), dim))
    if n_clusters <= dim:
        q, _ = np.linalg.qr(raw.T)
        centers = q.T[:n_clusters]
    else:
        centers = raw[:n_clusters] / np.linalg.norm(raw[:n_clusters], axis=1, keepdims=True)
    scale = separation * math.sqrt(dim)
    vectors = np.empty((n_clusters * points_per_cluster, dim))
    labels = np.empty(n_clusters * points_per_cluster, dtype=np.int64)
    for c in range(n_clusters):
        lo = c * points_per_cluster
        noise = rng.normal(size=(points_per_cluster, dim))
        vectors[lo:lo + points_per_cluster] = scale * centers[c] + noise
        labels[lo:lo + points_per_cluster] = c
    return vectors, labels


def adjusted_rand_index(labels_a, labels_b) -> float:
    """Chance-corrected agreement between two labelings (pair counting)."""
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("labelings must be equal-length 1-d sequences")
    n = len(a)
    contingency: dict[tuple, int] = {}
    for pair in zip(a.tolist(), b.tolist()):
        contingency[pair] = contingency.get(pair, 0) + 1

    def comb2(x):
        return x * (x - 1) / 2.0

    sum_cells = sum(comb2(c) for c in contingency.values())
    rows: dict = {}
    cols: dict = {}
    for (ra, cb), count in contingency.items():
        rows[ra] = rows.get(ra, 0) + count
        cols[cb] = cols.get(cb, 0) + count
    sum_rows = sum(comb2(c) for c in rows.values())
    sum_cols = sum(comb2(c) for c in cols.values())
    total = comb2(n)
    expected = sum_rows * sum_cols / total if total else 0.0
    max_index = 0.5 * (sum_rows + sum_cols)
    if max_index == expected:
        return 1.0
    return float((sum_cells - expected) / (max_index - expected))


QUESTIONABLE_DOMAIN = "questionable-news.example"
RELIABLE_DOMAIN = "reliable-news.example"


@dataclass
class LabeledPostsFixture:
    corpus: PlatformCorpus
    sources: SourceList
    expected: AmplificationReport


def _reaction_counts(law, count: int, rng) -> list[int]:
    if callable(law):
        return [int(law(rng)) for _ in range(count)]
    if isinstance(law, (int, np.integer)):
        return [int(law)] * count
    values = [int(x) for x in law]
    if len(values) != count:
        raise ValueError("reaction sequence length must equal the post count")
    return values


def gen_labeled_posts(n_questionable: int, n_reliable: int, reactions_questionable=5,
                      reactions_reliable=2, seed: int = 0) -> LabeledPostsFixture:
    """Corpus of URL posts split between one questionable and one reliable
    outlet, with reaction counts given per class (constant, sequence, or
    ``law(rng) -> int``) and the amplification metrics known by construction.
    """
    if n_questionable < 0 or n_reliable < 0 or n_questionable + n_reliable == 0:
        raise ValueError("need a non-negative split with at least one post")
    rng = substream(seed)
    counts_q = _reaction_counts(reactions_questionable, n_questionable, rng)
    counts_r = _reaction_counts(reactions_reliable, n_reliable, rng)

    n_days = max(7, (n_questionable + n_reliable + 1) // 2)
    posts = []
    serial = 0
    for label, domain, counts in (
        (QUESTIONABLE, QUESTIONABLE_DOMAIN, counts_q),
        (RELIABLE, RELIABLE_DOMAIN, counts_r),
    ):
        for j, reactions in enumerate(counts):
            day = 1 + int(rng.integers(0, n_days))
            ts = datetime(EPOCH.year, EPOCH.month, EPOCH.day, tzinfo=timezone.utc)
            ts += timedelta(days=day - 1, hours=int(rng.integers(0, 24)))
            posts.append(Post(
                id=f"synth-{serial:05d}",
                platform="other",
                author_id=f"{label[0]}-author-{j:04d}",
                timestamp=ts,
                kind="post",
                text=f"synthetic {label} item {j}",
                urls=(f"https://{domain}/item/{j}",),
                reactions={"like": reactions - reactions // 3, "share": reactions // 3},
            ))
            serial += 1

    corpus = PlatformCorpus(platform="other", posts=tuple(posts), window=(1, n_days))
    sources = SourceList(entries={QUESTIONABLE_DOMAIN: QUESTIONABLE,
                                  RELIABLE_DOMAIN: RELIABLE})
    total_q, total_r = sum(counts_q), sum(counts_r)
    e_u = total_q / n_questionable if n_questionable else None
    e_r = total_r / n_reliable if n_reliable else None
    alpha = e_u / e_r if (e_u is not None and e_r is not None and e_r > 0) else None
    expected = AmplificationReport(
        n_questionable=n_questionable,
        n_reliable=n_reliable,
        interactions_questionable=total_q,
        interactions_reliable=total_r,
        e_unreliable=e_u,
        e_reliable=e_r,
        alpha=alpha,
    )
    return LabeledPostsFixture(corpus=corpus, sources=sources, expected=expected)


def generate(spec: SynthSpec):
    """Dispatch a :class:`SynthSpec` to its generator (CLI entry point)."""
    params = dict(spec.params)
    if spec.kind == "exp_curve":
        days = range(int(params.pop("day_start", 1)), int(params.pop("day_end", 45)) + 1)
        integer = bool(params.pop("integer", False))
        return gen_exp_curve(ExpParams(**params), days, noise_sigma=spec.noise_sigma,
                             seed=spec.seed, integer=integer)
    if spec.kind == "sir_curve":
        days = range(int(params.pop("day_start", 1)), int(params.pop("day_end", 45)) + 1)
        integer = bool(params.pop("integer", False))
        step = float(params.pop("step", 0.05))
        return gen_sir_curve(SirParams(**params), days, noise_sigma=spec.noise_sigma,
                             step=step, seed=spec.seed, integer=integer)
    if spec.kind == "clustered_vectors":
        return gen_clustered_vectors(seed=spec.seed, **params)
    return gen_labeled_posts(seed=spec.seed, **params)
