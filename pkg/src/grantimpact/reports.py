"""Deterministic JSON/CSV report writers.

Reals are written with six fractional digits, rounded half-even, so reports
are byte-stable across runs and platforms.
"""

from __future__ import annotations

import csv
import io
import json
import re
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path
from typing import Iterable, Sequence

from .metrics import OrgImpact, ResearcherImpact, YearRow
from .suggest import Suggestion

_QUANTUM = Decimal("0.000001")

RESEARCHER_COLUMNS = ("researcher_id", "project_id", "productivity_delta", "coauth_delta",
                      "focus_self_delta", "focus_theme_delta", "flags", "before_period", "after_period")
ORG_COLUMNS = ("org_id", "project_count", "total_funds", "productivity_delta", "pubs_per_million", "flags")
SUGGESTION_COLUMNS = ("rank", "researcher_id", "avg_similarity", "pub_count")
YEARLY_COLUMNS = ("year", "pubs", "coauth_rate", "focus_theme", "is_grant_year")


class Real:
    """A real number pre-rendered with fixed precision."""

    __slots__ = ("text",)

    def __init__(self, value: float | Decimal):
        d = value if isinstance(value, Decimal) else Decimal(value)
        q = d.quantize(_QUANTUM, rounding=ROUND_HALF_EVEN)
        if q.is_zero():
            q = abs(q)
        self.text = f"{q:f}"

    def __str__(self) -> str:
        return self.text


def real(value) -> Real | None:
    return None if value is None else Real(value)


def researcher_rows(impacts: Iterable[ResearcherImpact]) -> list[dict]:
    return [
        {
            "researcher_id": r.researcher_id,
            "project_id": r.project_id,
            "productivity_delta": real(r.productivity_delta),
            "coauth_delta": real(r.coauth_delta),
            "focus_self_delta": real(r.focus_self_delta),
            "focus_theme_delta": real(r.focus_theme_delta),
            "flags": sorted(r.flags),
            "before_period": str(r.split.before),
            "after_period": str(r.split.after),
        }
        for r in sorted(impacts, key=lambda r: (r.researcher_id, r.project_id))
    ]


def org_rows(impacts: Iterable[OrgImpact]) -> list[dict]:
    return [
        {
            "org_id": o.org_id,
            "project_count": o.project_count,
            "total_funds": real(o.total_funds),
            "productivity_delta": real(o.productivity_delta),
            "pubs_per_million": real(o.pubs_per_million),
            "flags": sorted(o.flags),
        }
        for o in sorted(impacts, key=lambda o: o.org_id)
    ]


def suggestion_rows(suggestions: Sequence[Suggestion]) -> list[dict]:
    return [
        {"rank": s.rank, "researcher_id": s.researcher_id,
         "avg_similarity": real(s.avg_similarity), "pub_count": s.pub_count}
        for s in suggestions
    ]


def yearly_rows(rows: Sequence[YearRow]) -> list[dict]:
    return [
        {"year": r.year, "pubs": r.pubs, "coauth_rate": real(r.coauth_rate),
         "focus_theme": real(r.focus_theme), "is_grant_year": r.is_grant_year}
        for r in rows
    ]


def _json_value(v) -> str:
    if isinstance(v, Real):
        return v.text
    if isinstance(v, list):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    return json.dumps(v, ensure_ascii=False)


def render_json(columns: Sequence[str], rows: Sequence[dict]) -> str:
    if not rows:
        return "[]\n"
    lines = []
    for row in rows:
        body = ", ".join(f"{json.dumps(c)}: {_json_value(row[c])}" for c in columns)
        lines.append("  {" + body + "}")
    return "[\n" + ",\n".join(lines) + "\n]\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, list):
        return ";".join(v)
    return str(v)


def render_csv(columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_csv_cell(row[c]) for c in columns])
    return buf.getvalue()


def write_report(out_dir: Path, name: str, columns: Sequence[str], rows: Sequence[dict], fmt: str) -> Path:
    if fmt not in ("json", "csv"):
        raise ValueError(f"unknown report format {fmt!r}")
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}.{fmt}"
    text = render_json(columns, rows) if fmt == "json" else render_csv(columns, rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def safe_filename(part: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", part)
