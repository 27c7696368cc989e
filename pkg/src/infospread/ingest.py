"""Loading platform exports and deriving the curves everything else consumes.

Input is JSONL, one content item per line (see :func:`load_corpus` for the
schema).  Malformed lines are counted and skipped; a file where most lines
are malformed is rejected outright as probably being the wrong file.  All
curves are defined on the full day grid of the analysis window, with empty
days carrying the running cumulative value forward.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

import numpy as np

from .csvio import write_csv
from .curves import EpiCurve
from .days import day_of, parse_timestamp
from .errors import CorpusLoadError, NoDataError

PLATFORMS = ("gab", "reddit", "youtube", "instagram", "twitter", "other")
KINDS = ("post", "comment")


@dataclass(frozen=True)
class Post:
    """One content item: a post or a comment."""

    id: str
    platform: str
    author_id: str
    timestamp: datetime
    kind: str
    text: str
    urls: tuple[str, ...]
    reactions: dict[str, int]

    @property
    def day(self) -> int:
        return day_of(self.timestamp)

    @property
    def total_reactions(self) -> int:
        return sum(self.reactions.values())


@dataclass(frozen=True)
class PlatformCorpus:
    """All retained items of one platform inside an analysis window."""

    platform: str
    posts: tuple[Post, ...]
    window: tuple[int, int]  # inclusive day range

    def __post_init__(self):
        if self.platform not in PLATFORMS:
            raise ValueError(f"unknown platform {self.platform!r}")
        start, end = self.window
        if start > end:
            raise ValueError(f"window start {start} exceeds end {end}")
        for post in self.posts:
            if post.platform != self.platform:
                raise ValueError(
                    f"post {post.id!r} is from {post.platform!r}, corpus is {self.platform!r}"
                )

    def __len__(self) -> int:
        return len(self.posts)

    @property
    def days(self) -> np.ndarray:
        start, end = self.window
        return np.arange(start, end + 1, dtype=np.int64)


@dataclass
class LoadResult:
    corpus: PlatformCorpus
    n_rejected: int
    n_outside_window: int


def _require(condition: bool, message: str):
    if not condition:
        raise ValueError(message)


def post_from_obj(obj, platform: str | None = None) -> Post:
    """Validate one decoded JSONL object; unknown keys are ignored."""
    _require(isinstance(obj, dict), "record is not an object")
    for key in ("id", "platform", "author_id", "timestamp", "kind", "text", "urls", "reactions"):
        _require(key in obj, f"missing key {key!r}")
    _require(isinstance(obj["id"], str) and obj["id"], "id must be a non-empty string")
    _require(obj["platform"] in PLATFORMS, f"unknown platform {obj['platform']!r}")
    if platform is not None:
        _require(obj["platform"] == platform, "record platform does not match corpus platform")
    _require(isinstance(obj["author_id"], str) and obj["author_id"], "author_id must be a non-empty string")
    _require(obj["kind"] in KINDS, f"kind must be one of {KINDS}")
    _require(isinstance(obj["text"], str), "text must be a string")
    _require(isinstance(obj["urls"], list) and all(isinstance(u, str) for u in obj["urls"]),
             "urls must be an array of strings")
    reactions = obj["reactions"]
    _require(isinstance(reactions, dict), "reactions must be an object")
    for name, count in reactions.items():
        _require(isinstance(name, str), "reaction kinds must be strings")
        _require(isinstance(count, int) and not isinstance(count, bool) and count >= 0,
                 f"reaction count for {name!r} must be a non-negative integer")
    try:
        timestamp = parse_timestamp(obj["timestamp"])
    except (ValueError, TypeError) as exc:
        raise ValueError(f"bad timestamp: {exc}") from exc
    return Post(
        id=obj["id"],
        platform=obj["platform"],
        author_id=obj["author_id"],
        timestamp=timestamp,
        kind=obj["kind"],
        text=obj["text"],
        urls=tuple(obj["urls"]),
        reactions=dict(reactions),
    )


def post_to_obj(post: Post) -> dict:
    return {
        "id": post.id,
        "platform": post.platform,
        "author_id": post.author_id,
        "timestamp": post.timestamp.isoformat(),
        "kind": post.kind,
        "text": post.text,
        "urls": list(post.urls),
        "reactions": dict(post.reactions),
    }


def corpus_to_jsonl(corpus: PlatformCorpus, path) -> Path:
    path = Path(path)
    lines = [json.dumps(post_to_obj(p), sort_keys=True) for p in corpus.posts]
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return path


def load_corpus(path, platform: str, window: tuple[int, int]) -> LoadResult:
    """Load a JSONL export, keeping valid records with timestamps in ``window``.

    Returns the corpus together with counts of rejected (malformed or
    duplicate) lines and of valid records outside the window.  Raises
    :class:`CorpusLoadError` if the file is unreadable or more than half of
    its lines are rejected.
    """
    if platform not in PLATFORMS:
        raise ValueError(f"unknown platform {platform!r}")
    start, end = window
    if start > end:
        raise ValueError(f"window start {start} exceeds end {end}")
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise CorpusLoadError(f"cannot read {path}: {exc}") from exc

    posts: list[Post] = []
    seen_ids: set[str] = set()
    n_rejected = 0
    n_outside = 0
    n_lines = 0
    for line in lines:
        line = line.strip()
        if not line:
            continue
        n_lines += 1
        try:
            post = post_from_obj(json.loads(line), platform=platform)
            if post.id in seen_ids:
                raise ValueError(f"duplicate id {post.id!r}")
        except ValueError:
            n_rejected += 1
            continue
        if not (start <= post.day <= end):
            n_outside += 1
            continue
        seen_ids.add(post.id)
        posts.append(post)

    if n_lines > 0 and n_rejected > 0.5 * n_lines:
        raise CorpusLoadError(
            f"{n_rejected}/{n_lines} lines rejected; {path} is probably not a "
            f"{platform} export in the expected schema"
        )
    corpus = PlatformCorpus(platform=platform, posts=tuple(posts), window=(start, end))
    return LoadResult(corpus=corpus, n_rejected=n_rejected, n_outside_window=n_outside)


def load_keywords(path) -> list[str]:
    """One keyword per line; blank lines and #-comments ignored; lowercased."""
    keywords = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            keywords.append(word)
    return keywords


def filter_keywords(corpus: PlatformCorpus, keywords) -> PlatformCorpus:
    """Keep posts whose text or any URL contains a keyword as a substring.

    Matching is case-insensitive and substring-based (hashtags, phrases and
    partial words all hit), favoring recall; order is preserved.
    """
    keywords = [k.lower() for k in keywords]
    if not keywords:
        raise ValueError("keywords must be non-empty")
    kept = []
    for post in corpus.posts:
        text = post.text.lower()
        urls = [u.lower() for u in post.urls]
        if any(k in text or any(k in u for u in urls) for k in keywords):
            kept.append(post)
    return PlatformCorpus(platform=corpus.platform, posts=tuple(kept), window=corpus.window)


def _cumulative_curve(event_days: np.ndarray, corpus: PlatformCorpus, quantity: str) -> EpiCurve:
    days = corpus.days
    sorted_events = np.sort(event_days)
    values = np.searchsorted(sorted_events, days, side="right")
    return EpiCurve(day=days, value=values.astype(np.float64), quantity=quantity)


def cumulative_new_authors(corpus: PlatformCorpus) -> EpiCurve:
    """Distinct authors whose first item (post or comment) is on or before each day."""
    if not corpus.posts:
        raise NoDataError("no data")
    first_day: dict[str, int] = {}
    for post in corpus.posts:
        d = post.day
        prev = first_day.get(post.author_id)
        if prev is None or d < prev:
            first_day[post.author_id] = d
    events = np.array(list(first_day.values()), dtype=np.int64)
    return _cumulative_curve(events, corpus, "cumulative_authors")


def cumulative_posts(corpus: PlatformCorpus, kind: str | None = None) -> EpiCurve:
    """Items produced on or before each day, optionally restricted to one kind."""
    if not corpus.posts:
        raise NoDataError("no data")
    if kind is not None and kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    events = np.array(
        [p.day for p in corpus.posts if kind is None or p.kind == kind], dtype=np.int64
    )
    return _cumulative_curve(events, corpus, "cumulative_posts")


def activity_histogram(corpus: PlatformCorpus) -> dict[str, int]:
    """Per-author total interactions: items authored plus reactions received."""
    activity: dict[str, int] = {}
    for post in corpus.posts:
        activity[post.author_id] = (
            activity.get(post.author_id, 0) + 1 + post.total_reactions
        )
    return activity


def histogram_to_csv(activity: dict[str, int], path) -> Path:
    rows = sorted(activity.items())
    return write_csv(path, ["author_id", "activity"], rows)
