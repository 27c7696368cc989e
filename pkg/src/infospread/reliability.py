"""Questionable-vs-reliable news analysis.

Posts are labeled by the first linked domain found in a questionable/reliable
outlet registry (an export of an external fact-checking classification).
From the labels come matching statistics, cross-platform link fractions,
paired cumulative series with their linear regressions (slope rho), and the
amplification factors: average reactions per post for each class and their
ratio alpha.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urlsplit

import numpy as np

from .ingest import PlatformCorpus, Post

QUESTIONABLE = "questionable"
RELIABLE = "reliable"
UNMATCHED = "unmatched"
NO_URL = "no_url"

SOURCE_LABELS = (QUESTIONABLE, RELIABLE)
PAIRED_QUANTITIES = ("posts", "interactions", "users")

# Domains that identify a link as pointing at a social platform (used for
# the cross-linking table; Facebook appears as a link target only).
SOCIAL_DOMAINS: dict[str, frozenset[str]] = {
    "gab": frozenset({"gab.com", "gab.ai"}),
    "reddit": frozenset({"reddit.com", "redd.it"}),
    "youtube": frozenset({"youtube.com", "youtu.be"}),
    "instagram": frozenset({"instagram.com"}),
    "twitter": frozenset({"twitter.com", "t.co"}),
    "facebook": frozenset({"facebook.com", "fb.me", "fb.com"}),
}

_HOST_RE = re.compile(r"^[a-z0-9][a-z0-9.\-]*\.[a-z]{2,}$")


def normalize_domain(url: str) -> str | None:
    """Extract a normalized host: lowercase, no scheme, port or leading www.

    Returns None for anything without a recognizable host ("unmatched"
    marker); schemeless inputs like ``example.com/x`` are accepted.
    """
    if not url:
        raise ValueError("url must be non-empty")
    candidate = url.strip()
    if candidate.startswith("//"):
        candidate = "http:" + candidate
    elif "://" not in candidate:
        candidate = "http://" + candidate
    try:
        host = urlsplit(candidate).hostname
    except ValueError:
        return None
    if not host:
        return None
    host = host.lower().rstrip(".")
    if host.startswith("www."):
        host = host[4:]
    if not _HOST_RE.match(host):
        return None
    return host


@dataclass(frozen=True)
class SourceList:
    """Registry mapping normalized outlet domains to their binary label."""

    entries: dict[str, str]

    def __post_init__(self):
        for domain, label in self.entries.items():
            if label not in SOURCE_LABELS:
                raise ValueError(f"label for {domain!r} must be one of {SOURCE_LABELS}")
            if normalize_domain(domain) != domain:
                raise ValueError(f"domain {domain!r} is not in normalized form")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def n_questionable(self) -> int:
        return sum(1 for v in self.entries.values() if v == QUESTIONABLE)

    @property
    def n_reliable(self) -> int:
        return sum(1 for v in self.entries.values() if v == RELIABLE)

    @classmethod
    def from_csv(cls, path) -> "SourceList":
        """Read a ``domain,label`` CSV; raises on duplicates after normalization."""
        entries: dict[str, str] = {}
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"domain", "label"} <= set(reader.fieldnames):
                raise ValueError(f"{path}: expected CSV with 'domain,label' header")
            for record in reader:
                domain = normalize_domain(record["domain"])
                if domain is None:
                    raise ValueError(f"{path}: unparseable domain {record['domain']!r}")
                if domain in entries:
                    raise ValueError(f"{path}: duplicate domain {domain!r}")
                entries[domain] = record["label"].strip().lower()
        return cls(entries=entries)


def load_shortener_map(path) -> dict[str, str]:
    """Offline ``short_url,expanded_url`` map (no network resolution ever)."""
    mapping: dict[str, str] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"short_url", "expanded_url"} <= set(reader.fieldnames):
            raise ValueError(f"{path}: expected CSV with 'short_url,expanded_url' header")
        for record in reader:
            mapping[record["short_url"].strip()] = record["expanded_url"].strip()
    return mapping


@dataclass(frozen=True)
class LabeledPost:
    """A post with its source classification and total interaction count."""

    post: Post
    matched_domain: str | None
    label: str
    interactions: int

    def __post_init__(self):
        if self.label not in (QUESTIONABLE, RELIABLE, UNMATCHED, NO_URL):
            raise ValueError(f"bad label {self.label!r}")
        if self.label == UNMATCHED and not self.post.urls:
            raise ValueError("unmatched requires at least one URL")
        if self.label in SOURCE_LABELS and self.matched_domain is None:
            raise ValueError("matched labels require a matched domain")


def _match_suffix(host: str, domains) -> str | None:
    """Longest listed domain that equals ``host`` or is a parent of it."""
    parts = host.split(".")
    for start in range(len(parts) - 1):
        candidate = ".".join(parts[start:])
        if candidate in domains:
            return candidate
    return None


def classify_posts(corpus: PlatformCorpus, sources: SourceList,
                   shortener_map: dict[str, str] | None = None) -> list[LabeledPost]:
    """Label every post by the first of its URLs whose domain is listed.

    URLs are checked in document order; shortened URLs are expanded through
    the offline map before domain extraction.  A URL matches a listed domain
    when its host equals the domain or is a subdomain of it.
    """
    if not sources.entries:
        raise ValueError("source list must be non-empty")
    labeled = []
    for post in corpus.posts:
        interactions = post.total_reactions
        if not post.urls:
            labeled.append(LabeledPost(post, None, NO_URL, interactions))
            continue
        matched = None
        for url in post.urls:
            if shortener_map:
                url = shortener_map.get(url, url)
            host = normalize_domain(url)
            if host is None:
                continue
            domain = _match_suffix(host, sources.entries)
            if domain is not None:
                matched = domain
                break
        if matched is None:
            labeled.append(LabeledPost(post, None, UNMATCHED, interactions))
        else:
            labeled.append(LabeledPost(post, matched, sources.entries[matched], interactions))
    return labeled


@dataclass
class MatchStats:
    """Matching-ability row: how many URL posts hit the outlet registry."""

    url_posts: int
    n_matched: int
    n_questionable: int
    n_reliable: int
    matched_fraction: float | None
    questionable_fraction: float | None  # among matched
    reliable_fraction: float | None  # among matched


def match_stats(labeled) -> MatchStats:
    url_posts = sum(1 for lp in labeled if lp.label != NO_URL)
    n_q = sum(1 for lp in labeled if lp.label == QUESTIONABLE)
    n_r = sum(1 for lp in labeled if lp.label == RELIABLE)
    n_matched = n_q + n_r
    return MatchStats(
        url_posts=url_posts,
        n_matched=n_matched,
        n_questionable=n_q,
        n_reliable=n_r,
        matched_fraction=(n_matched / url_posts) if url_posts else None,
        questionable_fraction=(n_q / n_matched) if n_matched else None,
        reliable_fraction=(n_r / n_matched) if n_matched else None,
    )


@dataclass
class CrosslinkRow:
    """Fractions of a corpus's URLs that point at each social platform."""

    n_urls: int
    fractions: dict[str, float]


def crosslink_stats(labeled, registry: dict[str, frozenset[str]] | None = None,
                    shortener_map: dict[str, str] | None = None) -> CrosslinkRow:
    """Classify every URL (with multiplicity) against the social-domain registry."""
    if registry is None:
        registry = SOCIAL_DOMAINS
    domain_to_platform: dict[str, str] = {}
    for platform, domains in registry.items():
        for domain in domains:
            if domain_to_platform.get(domain, platform) != platform:
                raise ValueError(f"domain {domain!r} registered for two platforms")
            domain_to_platform[domain] = platform
    counts = {platform: 0 for platform in registry}
    n_urls = 0
    for lp in labeled:
        for url in lp.post.urls:
            if shortener_map:
                url = shortener_map.get(url, url)
            n_urls += 1
            host = normalize_domain(url)
            if host is None:
                continue
            domain = _match_suffix(host, domain_to_platform)
            if domain is not None:
                counts[domain_to_platform[domain]] += 1
    fractions = {p: (c / n_urls if n_urls else 0.0) for p, c in counts.items()}
    return CrosslinkRow(n_urls=n_urls, fractions=fractions)


@dataclass
class PairedSeries:
    """Day-aligned cumulative series for the two source classes."""

    days: np.ndarray
    reliable: np.ndarray  # x in the regressions
    questionable: np.ndarray  # y in the regressions
    quantity: str


def paired_cumulative_series(labeled, quantity: str, window: tuple[int, int]) -> PairedSeries:
    """Cumulative reliable/questionable volumes per day.

    ``quantity`` is ``posts`` (count), ``interactions`` (sum of reaction
    counts) or ``users`` (distinct authors; an author who links both classes
    counts once in each).
    """
    if quantity not in PAIRED_QUANTITIES:
        raise ValueError(f"quantity must be one of {PAIRED_QUANTITIES}")
    start, end = window
    if start > end:
        raise ValueError("window start exceeds end")
    days = np.arange(start, end + 1, dtype=np.int64)
    out = {}
    for label in (RELIABLE, QUESTIONABLE):
        posts = [lp for lp in labeled if lp.label == label]
        if quantity == "users":
            first_day: dict[str, int] = {}
            for lp in posts:
                d = lp.post.day
                author = lp.post.author_id
                if author not in first_day or d < first_day[author]:
                    first_day[author] = d
            events = np.array(sorted(first_day.values()), dtype=np.int64)
            out[label] = np.searchsorted(events, days, side="right").astype(np.float64)
        else:
            daily = np.zeros(len(days), dtype=np.float64)
            for lp in posts:
                d = lp.post.day
                if start <= d <= end:
                    weight = lp.interactions if quantity == "interactions" else 1
                    daily[d - start] += weight
            out[label] = np.cumsum(daily)
    return PairedSeries(days=days, reliable=out[RELIABLE], questionable=out[QUESTIONABLE],
                        quantity=quantity)


@dataclass
class RegressionResult:
    """Ordinary least squares with intercept; the slope is reported as rho."""

    intercept: float
    slope: float
    r_squared: float
    n: int


def linear_regression(x, y) -> RegressionResult:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be equal-length 1-d sequences")
    if len(x) < 2:
        raise ValueError("need at least 2 points")
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise ValueError("degenerate regressor")
    slope = float(dx @ (y - ym)) / sxx
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    ss_res = float(resid @ resid)
    ss_tot = float((y - ym) @ (y - ym))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    r_squared = min(1.0, max(0.0, r_squared))
    return RegressionResult(intercept=float(intercept), slope=slope,
                            r_squared=r_squared, n=len(x))


@dataclass
class AmplificationReport:
    """Average reactions per post for each class and their ratio alpha."""

    n_questionable: int
    n_reliable: int
    interactions_questionable: int
    interactions_reliable: int
    e_unreliable: float | None
    e_reliable: float | None
    alpha: float | None


def amplification(labeled) -> AmplificationReport:
    """Amplification factors over the matched posts.

    alpha = E_unreliable / E_reliable; it is None (undefined) when either
    class has no posts or the reliable class drew no reactions at all.
    """
    n_q = n_r = int_q = int_r = 0
    for lp in labeled:
        if lp.label == QUESTIONABLE:
            n_q += 1
            int_q += lp.interactions
        elif lp.label == RELIABLE:
            n_r += 1
            int_r += lp.interactions
    e_u = int_q / n_q if n_q else None
    e_r = int_r / n_r if n_r else None
    alpha = e_u / e_r if (e_u is not None and e_r is not None and e_r > 0) else None
    return AmplificationReport(
        n_questionable=n_q,
        n_reliable=n_r,
        interactions_questionable=int_q,
        interactions_reliable=int_r,
        e_unreliable=e_u,
        e_reliable=e_r,
        alpha=alpha,
    )
