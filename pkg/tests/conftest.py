import json
from datetime import datetime, timedelta, timezone

import pytest

from infospread.ingest import PlatformCorpus, Post


def ts_on_day(day: int, hour: int = 12) -> datetime:
    base = datetime(2020, 1, 1, tzinfo=timezone.utc)
    return base + timedelta(days=day - 1, hours=hour)


def make_post(pid="p1", platform="gab", author="a1", day=1, kind="post",
              text="", urls=(), reactions=None, hour=12) -> Post:
    return Post(
        id=pid,
        platform=platform,
        author_id=author,
        timestamp=ts_on_day(day, hour),
        kind=kind,
        text=text,
        urls=tuple(urls),
        reactions=dict(reactions or {}),
    )


def make_corpus(posts, platform="gab", window=(1, 5)) -> PlatformCorpus:
    return PlatformCorpus(platform=platform, posts=tuple(posts), window=window)


def post_obj(pid="p1", platform="gab", author="a1", day=1, kind="post",
             text="", urls=(), reactions=None, **extra) -> dict:
    obj = {
        "id": pid,
        "platform": platform,
        "author_id": author,
        "timestamp": ts_on_day(day).isoformat(),
        "kind": kind,
        "text": text,
        "urls": list(urls),
        "reactions": dict(reactions or {}),
    }
    obj.update(extra)
    return obj


def write_jsonl(path, objs):
    with open(path, "w", encoding="utf-8") as fh:
        for obj in objs:
            if isinstance(obj, str):
                fh.write(obj + "\n")
            else:
                fh.write(json.dumps(obj) + "\n")
    return path


@pytest.fixture
def tiny_corpus():
    posts = [
        make_post("p1", author="alice", day=1, text="wuhan update", reactions={"like": 3}),
        make_post("p2", author="bob", day=2, text="general news"),
        make_post("p3", author="alice", day=5, text="more wuhan", kind="comment"),
    ]
    return make_corpus(posts, window=(1, 5))
