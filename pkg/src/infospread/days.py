"""Calendar-day bucketing.

Days are integer offsets from a fixed epoch, with 1 January 2020 being day 1.
Bucketing uses UTC calendar days; naive timestamps are taken as UTC.
"""

from __future__ import annotations

from datetime import date, datetime, timezone

EPOCH = date(2020, 1, 1)


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 timestamp into an aware UTC datetime."""
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def day_of(ts: datetime) -> int:
    """UTC calendar day of ``ts`` as an offset from the epoch (epoch = day 1)."""
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return (ts.astimezone(timezone.utc).date() - EPOCH).days + 1


def day_of_date(d: date) -> int:
    return (d - EPOCH).days + 1


def parse_day(value: str) -> int:
    """Accept either an integer day offset or an ISO date (YYYY-MM-DD)."""
    text = value.strip()
    try:
        return int(text)
    except ValueError:
        return day_of_date(date.fromisoformat(text))
