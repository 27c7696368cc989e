"""Text pipeline: cleaning, skip-gram embeddings, k-medoids topic clusters."""

from .cleaning import CleanCorpus, bundled_stopwords, clean, tokenize
from .clustering import (
    ClusterModel,
    SilhouetteSweep,
    StabilityResult,
    TopicDistribution,
    average_silhouette,
    cosine_distance_matrix,
    jaccard_stability,
    pam_cluster,
    pam_on_distances,
    silhouette_sweep,
    silhouette_values,
    topic_distribution,
)
from .skipgram import (
    EmbeddingMatrix,
    context_pairs,
    cooccurrence_counts,
    prediction_probabilities,
    skipgram_objective,
    softmax_rows,
    train_skipgram,
)

__all__ = [
    "CleanCorpus",
    "ClusterModel",
    "EmbeddingMatrix",
    "SilhouetteSweep",
    "StabilityResult",
    "TopicDistribution",
    "average_silhouette",
    "bundled_stopwords",
    "clean",
    "context_pairs",
    "cooccurrence_counts",
    "cosine_distance_matrix",
    "jaccard_stability",
    "pam_cluster",
    "pam_on_distances",
    "prediction_probabilities",
    "silhouette_sweep",
    "silhouette_values",
    "skipgram_objective",
    "softmax_rows",
    "tokenize",
    "topic_distribution",
    "train_skipgram",
]
