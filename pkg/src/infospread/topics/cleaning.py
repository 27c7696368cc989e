"""Corpus cleaning ahead of embedding training.

The pipeline strips markup, links, addresses, mentions and hashtags, keeps
lowercase alphabetic tokens of at least three characters that are not
stop-words, then applies corpus-level minimums (word count >= 5, content
length >= 3 tokens) to a fixed point, since dropping rare words can shorten
contents below the threshold and dropping contents can make words rare.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

import numpy as np

_HTML_RE = re.compile(r"<[^>]*>")
_URL_RE = re.compile(r"(?:https?://|www\.)\S+|\b[a-z0-9.\-]+\.[a-z]{2,}/\S*", re.IGNORECASE)
_EMAIL_RE = re.compile(r"\S+@\S+")
_MENTION_RE = re.compile(r"@\w+")
_HASHTAG_RE = re.compile(r"#\w+")
_NON_ALPHA_RE = re.compile(r"[^a-z]+")

MIN_TOKEN_LEN = 3
MIN_WORD_COUNT = 5
MIN_CONTENT_TOKENS = 3


def bundled_stopwords() -> frozenset[str]:
    text = resources.files("infospread.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(
        line.strip() for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )


def tokenize(text: str, stopwords: frozenset[str], min_token_len: int = MIN_TOKEN_LEN) -> list[str]:
    """Apply the per-content cleaning rules to one text."""
    text = _HTML_RE.sub(" ", text)
    text = _URL_RE.sub(" ", text)
    text = _EMAIL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    text = _HASHTAG_RE.sub(" ", text)
    text = _NON_ALPHA_RE.sub(" ", text.lower())
    return [t for t in text.split() if len(t) >= min_token_len and t not in stopwords]


@dataclass
class CleanCorpus:
    """Token lists surviving cleaning, with the retained vocabulary.

    ``kept`` holds each content's index in the original input, so callers
    can map cleaned contents back to post ids.
    """

    contents: list[list[str]]
    kept: list[int]
    word_to_id: dict[str, int]
    counts: np.ndarray  # occurrences per word id over the cleaned corpus

    @property
    def words(self) -> list[str]:
        ordered = [""] * len(self.word_to_id)
        for word, idx in self.word_to_id.items():
            ordered[idx] = word
        return ordered

    @property
    def vocabulary_size(self) -> int:
        return len(self.word_to_id)

    def __len__(self) -> int:
        return len(self.contents)


def clean(texts, stopwords: frozenset[str] | None = None,
          min_token_len: int = MIN_TOKEN_LEN,
          min_word_count: int = MIN_WORD_COUNT,
          min_content_tokens: int = MIN_CONTENT_TOKENS) -> CleanCorpus:
    """Clean a sequence of raw texts into a :class:`CleanCorpus`.

    May legitimately return an empty corpus when nothing survives the rules.
    """
    if stopwords is None:
        stopwords = bundled_stopwords()
    contents = [tokenize(t, stopwords, min_token_len) for t in texts]
    kept = list(range(len(contents)))

    while True:
        counts: dict[str, int] = {}
        for tokens in contents:
            for token in tokens:
                counts[token] = counts.get(token, 0) + 1
        vocab = {w for w, c in counts.items() if c >= min_word_count}
        next_contents, next_kept, changed = [], [], False
        for tokens, idx in zip(contents, kept):
            filtered = [t for t in tokens if t in vocab]
            if len(filtered) < min_content_tokens:
                changed = True
                continue
            if len(filtered) != len(tokens):
                changed = True
            next_contents.append(filtered)
            next_kept.append(idx)
        contents, kept = next_contents, next_kept
        if not changed:
            break

    final_counts: dict[str, int] = {}
    for tokens in contents:
        for token in tokens:
            final_counts[token] = final_counts.get(token, 0) + 1
    word_to_id = {w: i for i, w in enumerate(sorted(final_counts))}
    counts_arr = np.zeros(len(word_to_id), dtype=np.int64)
    for word, count in final_counts.items():
        counts_arr[word_to_id[word]] = count
    return CleanCorpus(contents=contents, kept=kept, word_to_id=word_to_id, counts=counts_arr)
