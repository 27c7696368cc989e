"""Skip-gram word embeddings trained with the exact softmax.

The predicted-word probability is a full softmax over the vocabulary (no
negative sampling or hierarchical shortcuts), so gradients are exact and the
training objective is the plain average log probability of context words
given their centers.  That is only tractable at modest vocabulary sizes,
which is the regime this package targets: the defaults of 200 dimensions and
a 6-word window suit production corpora, while tests run a reduced profile.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import NoDataError
from ..rng import substream
from .cleaning import CleanCorpus

DEFAULT_DIM = 200
DEFAULT_WINDOW = 6


@dataclass
class EmbeddingMatrix:
    """Input (u) and output (v) vectors per vocabulary word, plus training meta."""

    words: list[str]
    u: np.ndarray
    v: np.ndarray
    window: int
    epochs: int
    rate: float
    seed: int
    loss_history: list[float] = field(default_factory=list)

    def __post_init__(self):
        if self.u.shape != self.v.shape or self.u.shape[0] != len(self.words):
            raise ValueError("u and v must be (V, dim) with one row per word")
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.v))):
            raise ValueError("embedding entries must be finite")

    @property
    def dim(self) -> int:
        return self.u.shape[1]

    @property
    def vocabulary_size(self) -> int:
        return self.u.shape[0]

    @property
    def word_to_id(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.words)}

    @classmethod
    def from_vectors(cls, vectors, words=None) -> "EmbeddingMatrix":
        """Wrap raw vectors (e.g. synthetic fixtures) as an embedding."""
        vectors = np.asarray(vectors, dtype=np.float64)
        if words is None:
            words = [f"w{i:04d}" for i in range(len(vectors))]
        return cls(words=list(words), u=vectors, v=vectors.copy(),
                   window=0, epochs=0, rate=0.0, seed=0)


def context_pairs(contents, word_to_id: dict[str, int], window: int) -> np.ndarray:
    """(center, target) id pairs for every in-window position, document order."""
    pairs = []
    for tokens in contents:
        ids = [word_to_id[t] for t in tokens if t in word_to_id]
        for pos, center in enumerate(ids):
            lo = max(0, pos - window)
            hi = min(len(ids), pos + window + 1)
            for ctx in range(lo, hi):
                if ctx != pos:
                    pairs.append((center, ids[ctx]))
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    return np.asarray(pairs, dtype=np.int64)


def cooccurrence_counts(pairs: np.ndarray, vocab_size: int) -> np.ndarray:
    """Dense (center, target) pair-count matrix."""
    cooc = np.zeros((vocab_size, vocab_size), dtype=np.float64)
    np.add.at(cooc, (pairs[:, 0], pairs[:, 1]), 1.0)
    return cooc


def softmax_rows(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    out = np.exp(shifted)
    out /= out.sum(axis=-1, keepdims=True)
    return out


def prediction_probabilities(emb: EmbeddingMatrix, center_ids=None) -> np.ndarray:
    """p(target | center) rows for the given centers (all words by default)."""
    v = emb.v if center_ids is None else emb.v[np.asarray(center_ids)]
    return softmax_rows(v @ emb.u.T)


def skipgram_objective(u: np.ndarray, v: np.ndarray, cooc: np.ndarray):
    """Average log probability of the observed pairs, with exact gradients.

    Returns ``(objective, grad_u, grad_v)`` where the gradients are ascent
    directions of the per-pair mean objective.
    """
    total = cooc.sum()
    if total <= 0:
        raise ValueError("co-occurrence matrix is empty")
    scores = v @ u.T  # [center, target]
    log_norm = np.log(np.sum(np.exp(scores - scores.max(axis=1, keepdims=True)), axis=1))
    log_norm += scores.max(axis=1)
    log_probs = scores - log_norm[:, None]
    objective = float((cooc * log_probs).sum() / total)
    probs = softmax_rows(scores)
    coeff = (cooc - cooc.sum(axis=1, keepdims=True) * probs) / total
    grad_u = coeff.T @ v
    grad_v = coeff @ u
    return objective, grad_u, grad_v


def train_skipgram(corpus: CleanCorpus, dim: int = DEFAULT_DIM, window: int = DEFAULT_WINDOW,
                   epochs: int = 5, rate: float = 0.025, seed: int = 0,
                   batch: str = "pairs") -> EmbeddingMatrix:
    """Train embeddings by gradient ascent on the exact-softmax objective.

    ``batch="pairs"`` performs stochastic updates, one context pair at a time
    in a seed-shuffled order per epoch; ``batch="full"`` takes one full-batch
    gradient step per epoch.  ``loss_history`` records the negative objective
    after each epoch.
    """
    if len(corpus.contents) == 0 or corpus.vocabulary_size == 0:
        raise NoDataError("empty corpus")
    vocab_size = corpus.vocabulary_size
    if vocab_size < 2:
        raise ValueError("vocabulary must contain at least 2 words")
    if dim < 2:
        raise ValueError("dim must be at least 2")
    if window < 1:
        raise ValueError("window must be at least 1")
    if batch not in ("pairs", "full"):
        raise ValueError("batch must be 'pairs' or 'full'")

    pairs = context_pairs(corpus.contents, corpus.word_to_id, window)
    if len(pairs) == 0:
        raise NoDataError("no context pairs")
    cooc = cooccurrence_counts(pairs, vocab_size)

    rng = substream(seed)
    u = (rng.random((vocab_size, dim)) - 0.5) / dim
    v = (rng.random((vocab_size, dim)) - 0.5) / dim

    loss_history = []
    for _ in range(epochs):
        if batch == "full":
            _, grad_u, grad_v = skipgram_objective(u, v, cooc)
            u += rate * grad_u
            v += rate * grad_v
        else:
            for idx in rng.permutation(len(pairs)):
                center, target = pairs[idx]
                scores = u @ v[center]
                scores -= scores.max()
                p = np.exp(scores)
                p /= p.sum()
                err = -p
                err[target] += 1.0
                grad_v_center = err @ u
                u += rate * np.outer(err, v[center])
                v[center] += rate * grad_v_center
        objective, _, _ = skipgram_objective(u, v, cooc)
        loss_history.append(-objective)

    return EmbeddingMatrix(
        words=corpus.words, u=u, v=v, window=window, epochs=epochs,
        rate=rate, seed=seed, loss_history=loss_history,
    )
