import itertools

import numpy as np
import pytest

from infospread.errors import UntopicableError, ZeroVarianceError
from infospread.rng import substream
from infospread.synth import adjusted_rand_index, gen_clustered_vectors
from infospread.topics import (
    EmbeddingMatrix,
    average_silhouette,
    cosine_distance_matrix,
    jaccard_stability,
    pam_cluster,
    pam_on_distances,
    silhouette_sweep,
    silhouette_values,
    topic_distribution,
)
from infospread.topics.clustering import _pam_build


def embedding(vectors, words=None):
    return EmbeddingMatrix.from_vectors(np.asarray(vectors, dtype=float), words)


def duplicated_two_groups(per_group=6):
    a = np.tile([1.0, 0.0, 0.0], (per_group, 1))
    b = np.tile([0.0, 1.0, 0.0], (per_group, 1))
    return np.vstack([a, b])


class TestPam:
    def test_duplicated_groups_perfectly_separated(self):
        emb = embedding(duplicated_two_groups())
        model = pam_cluster(emb, k=2)
        assert model.cost == pytest.approx(0.0, abs=1e-12)
        first, second = model.labels[:6], model.labels[6:]
        assert len(set(first.tolist())) == 1 and len(set(second.tolist())) == 1
        assert first[0] != second[0]

    def test_k_equals_vocabulary_size(self):
        vectors = substream(1).normal(size=(5, 3))
        model = pam_cluster(embedding(vectors), k=5)
        assert sorted(model.medoid_ids.tolist()) == list(range(5))
        assert model.cost == pytest.approx(0.0, abs=1e-12)

    def test_three_cloud_recovery(self):
        vectors, labels = gen_clustered_vectors(3, 20, 8, seed=0)
        model = pam_cluster(embedding(vectors), k=3)
        assert adjusted_rand_index(labels, model.labels) >= 0.9

    def test_k_out_of_range(self):
        emb = embedding(duplicated_two_groups())
        with pytest.raises(ValueError):
            pam_cluster(emb, k=1)
        with pytest.raises(ValueError):
            pam_cluster(emb, k=13)

    def test_medoids_assigned_to_their_own_cluster(self):
        vectors, _ = gen_clustered_vectors(3, 10, 6, seed=3)
        model = pam_cluster(embedding(vectors), k=3)
        for pos, medoid in enumerate(model.medoid_ids):
            assert model.labels[medoid] == pos

    def test_swap_never_worse_than_build(self):
        rng = substream(17)
        for trial in range(10):
            vectors = rng.normal(size=(20, 4))
            dist = cosine_distance_matrix(vectors)
            build = _pam_build(dist, 4)
            build_cost = float(dist[:, build].min(axis=1).sum())
            _, _, cost = pam_on_distances(dist, 4)
            assert cost <= build_cost + 1e-12

    def test_matches_brute_force_on_small_instances(self):
        rng = substream(99)
        for trial in range(30):
            n = int(rng.integers(5, 11))
            k = int(rng.integers(2, 4))
            vectors = rng.normal(size=(n, 3))
            dist = cosine_distance_matrix(vectors)
            _, _, cost = pam_on_distances(dist, k)
            best = min(
                dist[:, list(combo)].min(axis=1).sum()
                for combo in itertools.combinations(range(n), k)
            )
            assert cost == pytest.approx(best, abs=1e-12)

    def test_deterministic(self):
        vectors, _ = gen_clustered_vectors(3, 15, 8, seed=7)
        a = pam_cluster(embedding(vectors), k=3)
        b = pam_cluster(embedding(vectors), k=3)
        assert np.array_equal(a.medoid_ids, b.medoid_ids)
        assert np.array_equal(a.labels, b.labels)


def brute_silhouette(dist, labels):
    """Naive per-point silhouette, the oracle for the vectorized version."""
    n = len(labels)
    out = np.zeros(n)
    for i in range(n):
        same = [j for j in range(n) if labels[j] == labels[i] and j != i]
        if not same:
            continue
        a = np.mean([dist[i, j] for j in same])
        bs = []
        for c in set(labels.tolist()) - {labels[i]}:
            members = [j for j in range(n) if labels[j] == c]
            bs.append(np.mean([dist[i, j] for j in members]))
        b = min(bs)
        out[i] = 0.0 if max(a, b) == 0 else (b - a) / max(a, b)
    return out


class TestSilhouette:
    def test_matches_brute_force_oracle(self):
        rng = substream(5)
        vectors = rng.normal(size=(25, 4))
        dist = cosine_distance_matrix(vectors)
        for k in (2, 3, 5):
            _, labels, _ = pam_on_distances(dist, k)
            assert np.allclose(silhouette_values(dist, labels),
                               brute_silhouette(dist, labels), atol=1e-12)

    def test_singletons_score_zero(self):
        dist = cosine_distance_matrix(substream(8).normal(size=(6, 3)))
        labels = np.array([0, 0, 0, 0, 0, 1])  # cluster 1 is a singleton
        values = silhouette_values(dist, labels)
        assert values[5] == 0.0

    def test_three_cloud_sweep_selects_three(self):
        vectors, _ = gen_clustered_vectors(3, 20, 8, seed=0)
        sweep = silhouette_sweep(embedding(vectors), range(2, 7))
        assert sweep.best_k == 3

    def test_two_clouds_prefer_two_over_five(self):
        vectors, _ = gen_clustered_vectors(2, 15, 8, seed=4)
        sweep = silhouette_sweep(embedding(vectors), [2, 5])
        width = dict(zip(sweep.ks, sweep.widths))
        assert width[2] > width[5]

    def test_identical_points_rejected(self):
        emb = embedding(np.ones((8, 3)))
        with pytest.raises(ZeroVarianceError, match="zero-variance"):
            silhouette_sweep(emb, range(2, 4))

    def test_k_range_validation(self):
        emb = embedding(substream(2).normal(size=(6, 3)))
        with pytest.raises(ValueError):
            silhouette_sweep(emb, range(2, 10))
        with pytest.raises(ValueError):
            silhouette_sweep(emb, [])

    def test_ties_break_toward_smaller_k(self):
        emb = embedding(duplicated_two_groups())
        sweep = silhouette_sweep(emb, [2, 3])
        assert sweep.best_k == 2


class TestJaccardStability:
    def test_duplicated_vectors_fully_stable(self):
        emb = embedding(duplicated_two_groups(10))
        result = jaccard_stability(emb, k=2, subsample_fraction=0.9, reps=5, seed=0)
        assert result.overall == pytest.approx(1.0)
        assert np.allclose(result.per_cluster, 1.0)

    def test_same_rep_seed_duplicates_result(self):
        vectors, _ = gen_clustered_vectors(3, 10, 6, seed=2)
        emb = embedding(vectors)
        result = jaccard_stability(emb, k=3, rep_seeds=[41, 41])
        assert result.per_rep_overall[0] == result.per_rep_overall[1]
        single = jaccard_stability(emb, k=3, rep_seeds=[41])
        assert result.per_rep_overall[0] == single.per_rep_overall[0]

    def test_three_cloud_stability_high(self):
        vectors, _ = gen_clustered_vectors(3, 20, 8, seed=0)
        result = jaccard_stability(embedding(vectors), k=3, subsample_fraction=0.9,
                                   reps=20, seed=1)
        assert result.overall >= 0.8

    def test_parameter_validation(self):
        emb = embedding(duplicated_two_groups())
        with pytest.raises(ValueError):
            jaccard_stability(emb, k=2, subsample_fraction=1.5)
        with pytest.raises(ValueError):
            jaccard_stability(emb, k=2, reps=1)
        with pytest.raises(ValueError):
            # 12 words at fraction 0.5 leave 6, too few for 7 clusters
            jaccard_stability(emb, k=7, subsample_fraction=0.5)


class TestTopicDistribution:
    def model(self):
        emb = embedding(duplicated_two_groups(3),
                        words=["aaa", "bbb", "ccc", "xxx", "yyy", "zzz"])
        return pam_cluster(emb, k=2)

    def test_single_cluster_indicator(self):
        model = self.model()
        dist = topic_distribution(["aaa", "bbb", "aaa"], model)
        assert dist.theta[model.labels[0]] == 1.0
        assert dist.dominant == model.labels[0]

    def test_even_split_has_no_dominant(self):
        model = self.model()
        dist = topic_distribution(["aaa", "xxx"], model)
        assert np.allclose(sorted(dist.theta), [0.5, 0.5])
        assert dist.dominant is None

    def test_hand_counted_shares(self):
        model = self.model()
        dist = topic_distribution(["aaa", "bbb", "ccc", "xxx", "yyy"], model)
        own = model.labels[0]
        assert dist.theta[own] == pytest.approx(0.6)
        assert dist.dominant == own

    def test_out_of_vocabulary_tokens_ignored(self):
        model = self.model()
        dist = topic_distribution(["aaa", "unknown", "bbb"], model)
        assert dist.n_tokens == 2

    def test_untopicable_content(self):
        with pytest.raises(UntopicableError):
            topic_distribution(["unknown", "mystery"], self.model())

    def test_theta_sums_to_one(self):
        model = self.model()
        dist = topic_distribution(["aaa", "xxx", "yyy", "bbb", "ccc", "zzz", "aaa"], model)
        assert dist.theta.sum() == pytest.approx(1.0, abs=1e-9)
