"""k-medoids clustering of word vectors and the measures built on it.

Clustering runs the classic two-phase k-medoids procedure (greedy BUILD
seeding, then exhaustive single-swap descent until no swap lowers the total
cost) on the precomputed cosine distance matrix of the input vectors.
Because single-swap descent has local optima even on tiny instances, the
descent is additionally rerun from a few seeded random initializations and
the cheapest solution wins.  The number of clusters is selected by average
silhouette width, robustness is scored by Jaccard similarity against
subsample reruns, and contents receive topic distributions from their
words' cluster memberships.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import UntopicableError, ZeroVarianceError
from ..rng import substream
from .skipgram import EmbeddingMatrix

_IMPROVEMENT_EPS = 1e-12
DEFAULT_RESTARTS = 12


def cosine_distance_matrix(vectors: np.ndarray) -> np.ndarray:
    """Pairwise cosine distances (1 - cosine similarity), zero diagonal."""
    vectors = np.asarray(vectors, dtype=np.float64)
    norms = np.linalg.norm(vectors, axis=1)
    norms = np.where(norms == 0, 1.0, norms)
    unit = vectors / norms[:, None]
    dist = 1.0 - unit @ unit.T
    np.clip(dist, 0.0, 2.0, out=dist)
    np.fill_diagonal(dist, 0.0)
    return dist


def _pam_build(dist: np.ndarray, k: int) -> list[int]:
    n = len(dist)
    first = int(np.argmin(dist.sum(axis=1)))
    medoids = [first]
    nearest = dist[:, first].copy()
    while len(medoids) < k:
        gains = np.maximum(nearest[:, None] - dist, 0.0).sum(axis=0)
        gains[medoids] = -np.inf
        chosen = int(np.argmax(gains))
        medoids.append(chosen)
        np.minimum(nearest, dist[:, chosen], out=nearest)
    return medoids


def _pam_swap(dist: np.ndarray, medoids: list[int]):
    n = len(dist)
    medoids = list(medoids)
    while True:
        med_arr = np.array(medoids)
        dist_to_medoids = dist[:, med_arr]  # (n, k)
        order = np.argsort(dist_to_medoids, axis=1, kind="stable")
        owner = order[:, 0]  # index into medoid list
        d1 = np.take_along_axis(dist_to_medoids, order[:, :1], axis=1)[:, 0]
        if len(medoids) > 1:
            d2 = np.take_along_axis(dist_to_medoids, order[:, 1:2], axis=1)[:, 0]
        else:
            d2 = np.full(n, np.inf)
        candidates = np.setdiff1d(np.arange(n), med_arr, assume_unique=False)
        if len(candidates) == 0:
            return medoids, float(d1.sum())
        cand_dist = dist[:, candidates]  # (n, c)
        deltas = np.empty((len(medoids), len(candidates)))
        base_total = d1.sum()
        for mi in range(len(medoids)):
            fallback = np.where(owner == mi, d2, d1)
            new_d = np.minimum(cand_dist, fallback[:, None])
            deltas[mi] = new_d.sum(axis=0) - base_total
        flat = int(np.argmin(deltas))
        best_mi, best_ci = divmod(flat, len(candidates))
        if deltas[best_mi, best_ci] >= -_IMPROVEMENT_EPS:
            return medoids, float(base_total)
        medoids[best_mi] = int(candidates[best_ci])


def pam_on_distances(dist: np.ndarray, k: int, seed: int = 0, restarts: int = DEFAULT_RESTARTS):
    """BUILD + SWAP k-medoids on a distance matrix.

    Single-swap descent can stall in a local optimum even on tiny instances,
    so after the deterministic greedy BUILD the descent is rerun from
    ``restarts`` seeded random initializations and the lowest-cost solution
    wins.  Returns ``(medoid_indices, labels, total_cost)``; labels are
    positions in the medoid list.  Deterministic for a given seed.
    """
    n = len(dist)
    if not 2 <= k <= n:
        raise ValueError(f"k must be in [2, {n}], got {k}")
    medoids, cost = _pam_swap(dist, _pam_build(dist, k))
    for r in range(restarts):
        rng = substream(seed, r)
        init = np.sort(rng.choice(n, size=k, replace=False)).tolist()
        alt_medoids, alt_cost = _pam_swap(dist, init)
        if alt_cost < cost - _IMPROVEMENT_EPS:
            medoids, cost = alt_medoids, alt_cost
    med_arr = np.array(medoids)
    labels = np.argmin(dist[:, med_arr], axis=1)
    return med_arr, labels, cost


@dataclass
class ClusterModel:
    """k-medoids output over an embedding's vocabulary."""

    k: int
    medoid_ids: np.ndarray
    labels: np.ndarray
    cost: float
    words: list[str]

    @property
    def medoid_words(self) -> list[str]:
        return [self.words[i] for i in self.medoid_ids]

    @property
    def word_to_cluster(self) -> dict[str, int]:
        return {w: int(c) for w, c in zip(self.words, self.labels)}

    def members(self, cluster: int) -> list[str]:
        return [w for w, c in zip(self.words, self.labels) if c == cluster]


def pam_cluster(emb: EmbeddingMatrix, k: int, seed: int = 0,
                restarts: int = DEFAULT_RESTARTS) -> ClusterModel:
    """Cluster the input vectors (u) with k-medoids on cosine distances.

    ``seed`` drives the random restarts of the swap descent; with
    ``restarts=0`` the result is the classic deterministic BUILD + SWAP.
    """
    dist = cosine_distance_matrix(emb.u)
    medoids, labels, cost = pam_on_distances(dist, k, seed=seed, restarts=restarts)
    return ClusterModel(k=k, medoid_ids=medoids, labels=labels, cost=cost, words=emb.words)


def silhouette_values(dist: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Per-point silhouette widths; singleton clusters score 0 by convention."""
    labels = np.asarray(labels)
    n = len(labels)
    clusters = np.unique(labels)
    sums = np.stack([dist[:, labels == c].sum(axis=1) for c in clusters], axis=1)
    sizes = np.array([(labels == c).sum() for c in clusters])
    pos = np.searchsorted(clusters, labels)
    values = np.zeros(n)
    for i in range(n):
        own = pos[i]
        if sizes[own] == 1:
            continue
        a = sums[i, own] / (sizes[own] - 1)
        other = [c for c in range(len(clusters)) if c != own]
        b = np.min(sums[i, other] / sizes[other])
        denom = max(a, b)
        values[i] = 0.0 if denom == 0 else (b - a) / denom
    return values


def average_silhouette(dist: np.ndarray, labels: np.ndarray) -> float:
    return float(np.mean(silhouette_values(dist, labels)))


@dataclass
class SilhouetteSweep:
    ks: list[int]
    widths: list[float]
    best_k: int


def silhouette_sweep(emb: EmbeddingMatrix, k_range, seed: int = 0) -> SilhouetteSweep:
    """Average silhouette width per k; best k is the argmax, ties to smaller k."""
    vocab_size = emb.vocabulary_size
    ks = sorted(set(int(k) for k in k_range))
    if not ks:
        raise ValueError("k_range must be non-empty")
    if ks[0] < 2 or ks[-1] > vocab_size - 1:
        raise ValueError(f"k_range must lie within [2, {vocab_size - 1}]")
    dist = cosine_distance_matrix(emb.u)
    if np.all(dist <= 1e-15):
        raise ZeroVarianceError("zero-variance embedding")
    widths = []
    for k in ks:
        _, labels, _ = pam_on_distances(dist, k, seed=seed)
        widths.append(average_silhouette(dist, labels))
    best_idx = 0
    for i in range(1, len(ks)):
        if widths[i] > widths[best_idx]:
            best_idx = i
    return SilhouetteSweep(ks=ks, widths=widths, best_k=ks[best_idx])


def _jaccard(a: set, b: set) -> float:
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def _greedy_match(matrix: np.ndarray) -> np.ndarray:
    """Match rows to columns greedily by largest similarity; returns the
    matched similarity per row (row-major tie-breaking)."""
    matrix = matrix.copy()
    k = matrix.shape[0]
    matched = np.zeros(k)
    available_rows = set(range(k))
    available_cols = set(range(matrix.shape[1]))
    while available_rows and available_cols:
        flat = int(np.argmax(matrix))
        row, col = divmod(flat, matrix.shape[1])
        matched[row] = matrix[row, col]
        available_rows.discard(row)
        available_cols.discard(col)
        matrix[row, :] = -1.0
        matrix[:, col] = -1.0
    return matched


@dataclass
class StabilityResult:
    per_cluster: np.ndarray  # mean matched Jaccard per full-data cluster
    per_rep_overall: np.ndarray
    overall: float
    reps: int


def jaccard_stability(emb: EmbeddingMatrix, k: int, subsample_fraction: float = 0.9,
                      reps: int = 20, seed: int = 0, rep_seeds=None) -> StabilityResult:
    """Cluster-stability score against subsampled reruns.

    Each repetition reclusters a without-replacement word subsample and
    matches its clusters to the full-data clusters greedily by Jaccard
    similarity computed over the shared words.  ``rep_seeds`` overrides the
    per-repetition streams (mainly for reproducing individual repetitions).
    """
    if not 0 < subsample_fraction < 1:
        raise ValueError("subsample_fraction must be in (0, 1)")
    if rep_seeds is None:
        if reps < 2:
            raise ValueError("reps must be at least 2")
        rep_seeds = [(seed, r) for r in range(reps)]
    else:
        rep_seeds = [(s, 0) for s in rep_seeds]
        reps = len(rep_seeds)

    vocab_size = emb.vocabulary_size
    m = int(round(subsample_fraction * vocab_size))
    if m < k:
        raise ValueError("subsample too small for k clusters")

    dist = cosine_distance_matrix(emb.u)
    _, full_labels, _ = pam_on_distances(dist, k, seed=seed)
    full_clusters = [set(np.flatnonzero(full_labels == c)) for c in range(k)]

    per_rep = np.zeros((reps, k))
    for rep, (s, stream) in enumerate(rep_seeds):
        rng = substream(s, stream)
        sample = np.sort(rng.choice(vocab_size, size=m, replace=False))
        sub_dist = dist[np.ix_(sample, sample)]
        sub_seed = int(rng.integers(2 ** 62))
        _, sub_labels, _ = pam_on_distances(sub_dist, k, seed=sub_seed)
        sub_clusters = [set(sample[np.flatnonzero(sub_labels == c)]) for c in range(k)]
        sample_set = set(sample.tolist())
        matrix = np.zeros((k, k))
        for a, full_cluster in enumerate(full_clusters):
            shared = full_cluster & sample_set
            for b, sub_cluster in enumerate(sub_clusters):
                matrix[a, b] = _jaccard(shared, sub_cluster)
        per_rep[rep] = _greedy_match(matrix)

    per_cluster = per_rep.mean(axis=0)
    return StabilityResult(
        per_cluster=per_cluster,
        per_rep_overall=per_rep.mean(axis=1),
        overall=float(per_rep.mean()),
        reps=reps,
    )


@dataclass
class TopicDistribution:
    """A content's word-share over clusters; dominant only when > 0.5 strictly."""

    theta: np.ndarray
    dominant: int | None
    n_tokens: int
    content_id: str | None = None


def topic_distribution(tokens, model: ClusterModel, content_id: str | None = None) -> TopicDistribution:
    """Distribution of a content's in-vocabulary tokens over the clusters."""
    mapping = model.word_to_cluster
    counts = np.zeros(model.k, dtype=np.float64)
    n_tokens = 0
    for token in tokens:
        cluster = mapping.get(token)
        if cluster is not None:
            counts[cluster] += 1
            n_tokens += 1
    if n_tokens == 0:
        raise UntopicableError("untopicable content")
    theta = counts / n_tokens
    best = int(np.argmax(theta))
    dominant = best if theta[best] > 0.5 else None
    return TopicDistribution(theta=theta, dominant=dominant, n_tokens=n_tokens,
                             content_id=content_id)
