import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_corpus, make_post, post_obj, write_jsonl
from infospread.csvio import curve_to_csv
from infospread.errors import CorpusLoadError, NoDataError
from infospread.ingest import (
    activity_histogram,
    cumulative_new_authors,
    cumulative_posts,
    filter_keywords,
    histogram_to_csv,
    load_corpus,
    load_keywords,
)


class TestLoadCorpus:
    def test_empty_file(self, tmp_path):
        path = write_jsonl(tmp_path / "empty.jsonl", [])
        result = load_corpus(path, "gab", (1, 45))
        assert len(result.corpus) == 0
        assert result.n_rejected == 0

    def test_valid_plus_malformed_lines(self, tmp_path):
        objs = [post_obj(pid=f"p{i}", day=1 + i % 5) for i in range(10)]
        objs.append("{not json")
        objs.append('{"id": "x"}')  # missing keys
        path = write_jsonl(tmp_path / "mixed.jsonl", objs)
        result = load_corpus(path, "gab", (1, 45))
        assert len(result.corpus) == 10
        assert result.n_rejected == 2

    def test_timestamp_outside_window_excluded(self, tmp_path):
        objs = [post_obj(pid="in", day=10), post_obj(pid="early", day=2)]
        path = write_jsonl(tmp_path / "w.jsonl", objs)
        result = load_corpus(path, "gab", (5, 45))
        assert [p.id for p in result.corpus.posts] == ["in"]
        assert result.n_outside_window == 1
        assert result.n_rejected == 0

    def test_mostly_malformed_is_fatal(self, tmp_path):
        objs = ["garbage"] * 6 + [post_obj(pid=f"p{i}") for i in range(4)]
        path = write_jsonl(tmp_path / "bad.jsonl", objs)
        with pytest.raises(CorpusLoadError):
            load_corpus(path, "gab", (1, 45))

    def test_unreadable_file_is_fatal(self, tmp_path):
        with pytest.raises(CorpusLoadError):
            load_corpus(tmp_path / "missing.jsonl", "gab", (1, 45))

    def test_duplicate_ids_rejected(self, tmp_path):
        objs = [post_obj(pid="same"), post_obj(pid="same", day=2), post_obj(pid="other")]
        path = write_jsonl(tmp_path / "dup.jsonl", objs)
        result = load_corpus(path, "gab", (1, 45))
        assert sorted(p.id for p in result.corpus.posts) == ["other", "same"]
        assert result.n_rejected == 1

    def test_unknown_keys_ignored(self, tmp_path):
        path = write_jsonl(tmp_path / "x.jsonl", [post_obj(pid="p", lang="en", score=3)])
        result = load_corpus(path, "gab", (1, 45))
        assert len(result.corpus) == 1

    def test_wrong_platform_rejected(self, tmp_path):
        objs = [post_obj(pid="p", platform="reddit"), post_obj(pid="q"), post_obj(pid="r")]
        path = write_jsonl(tmp_path / "x.jsonl", objs)
        result = load_corpus(path, "gab", (1, 45))
        assert sorted(p.id for p in result.corpus.posts) == ["q", "r"]
        assert result.n_rejected == 1

    def test_negative_reactions_rejected(self, tmp_path):
        objs = [post_obj(pid="p", reactions={"like": -1}), post_obj(pid="q"), post_obj(pid="r")]
        path = write_jsonl(tmp_path / "x.jsonl", objs)
        assert load_corpus(path, "gab", (1, 45)).n_rejected == 1

    def test_bad_window_rejected(self, tmp_path):
        path = write_jsonl(tmp_path / "x.jsonl", [post_obj()])
        with pytest.raises(ValueError):
            load_corpus(path, "gab", (5, 1))


class TestFilterKeywords:
    def test_case_folded_substring_match(self):
        corpus = make_corpus([make_post("p", text="Wuhan update")])
        assert len(filter_keywords(corpus, ["wuhan"])) == 1

    def test_unrelated_text_dropped(self):
        corpus = make_corpus([make_post("p", text="weather today")])
        assert len(filter_keywords(corpus, ["ncov", "wuhan"])) == 0

    def test_url_also_matches(self):
        corpus = make_corpus([make_post("p", text="look", urls=["https://x.org/NCOV-19"])])
        assert len(filter_keywords(corpus, ["ncov"])) == 1

    def test_hand_counted_fixture(self):
        posts = [
            make_post(f"m{i}", day=1 + i % 5, text=f"coronavirus news {i}") for i in range(7)
        ] + [
            make_post(f"o{i}", day=1 + i % 5, text=f"football scores {i}") for i in range(13)
        ]
        corpus = make_corpus(posts)
        kept = filter_keywords(corpus, ["coronavirus", "pandemic"])
        assert len(kept) == 7
        assert all(p.id.startswith("m") for p in kept.posts)

    def test_order_preserved(self):
        posts = [make_post(f"p{i}", day=1, text="wuhan") for i in range(4)]
        kept = filter_keywords(make_corpus(posts), ["wuhan"])
        assert [p.id for p in kept.posts] == [p.id for p in posts]

    def test_empty_keywords_rejected(self):
        with pytest.raises(ValueError):
            filter_keywords(make_corpus([make_post()]), [])

    @given(st.lists(st.sampled_from(["wuhan", "ncov", "china", "virus"]),
                    min_size=1, max_size=3, unique=True))
    @settings(max_examples=20, deadline=None)
    def test_superset_of_keywords_never_yields_fewer(self, keywords):
        posts = [
            make_post("p1", text="wuhan market"),
            make_post("p2", text="ncov outbreak"),
            make_post("p3", text="china reports"),
            make_post("p4", text="nothing here"),
        ]
        corpus = make_corpus(posts)
        base = len(filter_keywords(corpus, keywords))
        superset = len(filter_keywords(corpus, list(keywords) + ["virus"]))
        assert superset >= base

    def test_load_keywords_file(self, tmp_path):
        path = tmp_path / "kw.txt"
        path.write_text("# covid query terms\nCoronavirus\n\nwuhan\n")
        assert load_keywords(path) == ["coronavirus", "wuhan"]


class TestCurves:
    def test_author_counted_once_at_first_appearance(self):
        posts = [make_post("p1", author="a", day=1), make_post("p2", author="a", day=5)]
        curve = cumulative_new_authors(make_corpus(posts))
        assert list(curve.value) == [1, 1, 1, 1, 1]

    def test_hand_enumerated_first_appearances(self):
        posts = [
            make_post("p1", author="x", day=2),
            make_post("p2", author="y", day=2),
            make_post("p3", author="z", day=4),
        ]
        curve = cumulative_new_authors(make_corpus(posts, window=(1, 5)))
        assert list(curve.day) == [1, 2, 3, 4, 5]
        assert list(curve.value) == [0, 2, 2, 3, 3]

    def test_final_value_is_distinct_author_count(self):
        posts = [make_post(f"p{i}", author=f"a{i % 7}", day=1 + i % 5, kind="comment" if i % 2 else "post")
                 for i in range(30)]
        corpus = make_corpus(posts)
        curve = cumulative_new_authors(corpus)
        assert curve.value[-1] == len({p.author_id for p in corpus.posts})

    def test_comments_count_toward_first_appearance(self):
        posts = [make_post("c1", author="a", day=1, kind="comment"),
                 make_post("p1", author="a", day=3, kind="post")]
        curve = cumulative_new_authors(make_corpus(posts))
        assert curve.value[0] == 1

    def test_empty_corpus_errors(self):
        with pytest.raises(NoDataError, match="no data"):
            cumulative_new_authors(make_corpus([]))

    def test_cumulative_posts_hand_enumeration(self):
        posts = [make_post("p1", day=1), make_post("p2", day=1), make_post("p3", day=3)]
        curve = cumulative_posts(make_corpus(posts, window=(1, 3)))
        assert list(curve.value) == [2, 2, 3]

    def test_kind_filter_excludes_comments(self):
        posts = [make_post("p1", day=1, kind="post"), make_post("c1", day=1, kind="comment")]
        curve = cumulative_posts(make_corpus(posts, window=(1, 2)), kind="post")
        assert list(curve.value) == [1, 1]

    def test_kind_filter_can_empty_the_curve(self):
        posts = [make_post("p1", day=1, kind="post")]
        curve = cumulative_posts(make_corpus(posts, window=(1, 3)), kind="comment")
        assert list(curve.value) == [0, 0, 0]

    def test_authors_never_exceed_posts_pointwise(self):
        rng = np.random.default_rng(7)
        posts = [
            make_post(f"p{i}", author=f"a{rng.integers(0, 10)}", day=int(rng.integers(1, 6)))
            for i in range(40)
        ]
        corpus = make_corpus(posts)
        authors = cumulative_new_authors(corpus).value
        items = cumulative_posts(corpus).value
        assert np.all(authors <= items)

    def test_curves_are_cumulative(self, tiny_corpus):
        assert cumulative_new_authors(tiny_corpus).is_cumulative
        assert cumulative_posts(tiny_corpus).is_cumulative

    def test_deterministic_csv_bytes(self, tmp_path, tiny_corpus):
        p1 = curve_to_csv(cumulative_new_authors(tiny_corpus), tmp_path / "a.csv")
        p2 = curve_to_csv(cumulative_new_authors(tiny_corpus), tmp_path / "b.csv")
        assert p1.read_bytes() == p2.read_bytes()


class TestActivityHistogram:
    def test_reactions_count_toward_author(self):
        posts = [make_post("p1", author="a", reactions={"like": 3})]
        assert activity_histogram(make_corpus(posts)) == {"a": 4}

    def test_empty_corpus(self):
        assert activity_histogram(make_corpus([])) == {}

    def test_item_counts_without_reactions(self):
        posts = [make_post("p1", author="a"), make_post("p2", author="b"),
                 make_post("p3", author="b")]
        assert activity_histogram(make_corpus(posts)) == {"a": 1, "b": 2}

    def test_csv_sorted_by_author(self, tmp_path):
        path = histogram_to_csv({"zed": 1, "amy": 2}, tmp_path / "h.csv")
        assert path.read_text() == "author_id,activity\namy,2\nzed,1\n"
