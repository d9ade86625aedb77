"""Before/after funding impact indicators for researchers and organizations.

Every metric comes back as a :class:`Metric`: a value (``None`` when the
metric's preconditions fail) plus flags naming whatever was missing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .ingest import FundedProject, Publication, YearRange
from .vsm import DocumentVector, VectorSpace, cosine

# flag vocabulary
NO_PUBLICATIONS = "no_publications"
EMPTY_BEFORE_PERIOD = "empty_before_period"
EMPTY_AFTER_PERIOD = "empty_after_period"
NO_PUBS_BEFORE = "no_pubs_before"
NO_PUBS_AFTER = "no_pubs_after"
FEW_TEXTS_BEFORE = "lt2_abstracts_before"
FEW_TEXTS_AFTER = "lt2_abstracts_after"
NO_TEXTS_BEFORE = "no_abstracts_before"
NO_TEXTS_AFTER = "no_abstracts_after"
NO_FUNDS = "zero_total_funds"
UNRESOLVED_ORG = "unresolved_org"


class PreconditionError(ValueError):
    """A computation was asked for with inputs that make it undefined."""


class Metric(NamedTuple):
    value: float | None
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class PeriodSplit:
    before: YearRange
    after: YearRange

    def swapped(self) -> "PeriodSplit":
        return PeriodSplit(before=self.after, after=self.before)

    def period_of(self, year: int) -> str | None:
        if year in self.before:
            return "before"
        if year in self.after:
            return "after"
        return None


def split_periods(grant_year: int, window: YearRange) -> PeriodSplit:
    """Split the window at the grant year; the grant year starts the after period."""
    if grant_year not in window:
        raise PreconditionError(f"grant year {grant_year} outside corpus window {window}")
    return PeriodSplit(before=YearRange(window.start, grant_year - 1),
                       after=YearRange(grant_year, window.end))


def _by_period(pubs: Iterable[Publication], split: PeriodSplit):
    before, after = [], []
    for p in pubs:
        if p.year in split.before:
            before.append(p)
        elif p.year in split.after:
            after.append(p)
    return before, after


def _mean_per_year(pubs: Sequence[Publication], years: YearRange) -> float:
    return len(pubs) / len(years)


def productivity_delta(pubs: Sequence[Publication], split: PeriodSplit) -> Metric:
    """Mean publications per calendar year after the grant minus before."""
    if split.before.empty:
        return Metric(None, (EMPTY_BEFORE_PERIOD,))
    if split.after.empty:
        return Metric(None, (EMPTY_AFTER_PERIOD,))
    before, after = _by_period(pubs, split)
    flags = () if before or after else (NO_PUBLICATIONS,)
    return Metric(_mean_per_year(after, split.after) - _mean_per_year(before, split.before), flags)


def coauthor_rate(pubs: Sequence[Publication]) -> float:
    """Mean number of co-authors (authors minus one) per publication."""
    return math.fsum(len(p.author_ids) - 1 for p in pubs) / len(pubs)


def coauth_delta(pubs: Sequence[Publication], split: PeriodSplit) -> Metric:
    before, after = _by_period(pubs, split)
    flags = []
    if not before:
        flags.append(NO_PUBS_BEFORE)
    if not after:
        flags.append(NO_PUBS_AFTER)
    if flags:
        return Metric(None, tuple(flags))
    return Metric(coauthor_rate(after) - coauthor_rate(before))


def mean_pairwise_similarity(vectors: Sequence[DocumentVector]) -> float:
    pairs = list(combinations(vectors, 2))
    return math.fsum(cosine(a, b) for a, b in pairs) / len(pairs)


def mean_similarity_to(target: DocumentVector, vectors: Sequence[DocumentVector]) -> float:
    return math.fsum(cosine(target, v) for v in vectors) / len(vectors)


def _texts_by_period(pubs, split, space: VectorSpace):
    """Vectors of the publications that have any indexed terms, split by period."""
    before, after = _by_period(pubs, split)
    keep = lambda ps: [space.vector(p.pub_id) for p in ps if space.has_terms(p.pub_id)]
    return keep(before), keep(after)


def focus_self_delta(pubs: Sequence[Publication], split: PeriodSplit, space: VectorSpace) -> Metric:
    """Change in mean pairwise abstract similarity (topical concentration).

    Needs at least two abstracts with terms in each period.
    """
    before, after = _texts_by_period(pubs, split, space)
    flags = []
    if len(before) < 2:
        flags.append(FEW_TEXTS_BEFORE)
    if len(after) < 2:
        flags.append(FEW_TEXTS_AFTER)
    if flags:
        return Metric(None, tuple(flags))
    return Metric(mean_pairwise_similarity(after) - mean_pairwise_similarity(before))


def theme_vector(project: FundedProject, space: VectorSpace) -> DocumentVector:
    """Summary vector from the space, or vectorized on the fly if not indexed."""
    key = project_key(project.project_id)
    indexed = key in space.tokens
    tokens = space.tokens[key] if indexed else space.preprocess(project.summary)
    if not tokens:
        raise PreconditionError(f"project {project.project_id!r} has an empty summary after preprocessing")
    return space.vector(key) if indexed else space.vector_for_text(project.summary)


def focus_theme_delta(pubs: Sequence[Publication], project: FundedProject, split: PeriodSplit,
                      space: VectorSpace) -> Metric:
    """Change in mean similarity between the funded summary and the abstracts."""
    theme = theme_vector(project, space)
    before, after = _texts_by_period(pubs, split, space)
    flags = []
    if not before:
        flags.append(NO_TEXTS_BEFORE)
    if not after:
        flags.append(NO_TEXTS_AFTER)
    if flags:
        return Metric(None, tuple(flags))
    return Metric(mean_similarity_to(theme, after) - mean_similarity_to(theme, before))


@dataclass(frozen=True)
class ResearcherImpact:
    researcher_id: str
    project_id: str
    split: PeriodSplit
    productivity_delta: float | None
    coauth_delta: float | None
    focus_self_delta: float | None
    focus_theme_delta: float | None
    flags: frozenset[str]


def researcher_impact(researcher_id: str, pubs: Sequence[Publication], project: FundedProject,
                      window: YearRange, space: VectorSpace) -> ResearcherImpact:
    split = split_periods(project.grant_year, window)
    return impact_for_split(researcher_id, project, pubs, split, space)


def impact_for_split(researcher_id: str, project: FundedProject, pubs: Sequence[Publication],
                     split: PeriodSplit, space: VectorSpace) -> ResearcherImpact:
    metrics = {
        "productivity": productivity_delta(pubs, split),
        "coauth": coauth_delta(pubs, split),
        "focus_self": focus_self_delta(pubs, split, space),
        "focus_theme": focus_theme_delta(pubs, project, split, space),
    }
    flags = set()
    for name, m in metrics.items():
        flags.update(f"{name}:{f}" for f in m.flags)
    return ResearcherImpact(
        researcher_id=researcher_id,
        project_id=project.project_id,
        split=split,
        productivity_delta=metrics["productivity"].value,
        coauth_delta=metrics["coauth"].value,
        focus_self_delta=metrics["focus_self"].value,
        focus_theme_delta=metrics["focus_theme"].value,
        flags=frozenset(flags),
    )


@dataclass(frozen=True)
class OrgImpact:
    org_id: str
    project_count: int
    total_funds: Decimal
    productivity_delta: float | None
    pubs_per_million: float | None
    flags: frozenset[str] = frozenset()


def org_impact(org_id: str, projects: Sequence[FundedProject], pubs: Sequence[Publication],
               window: YearRange) -> OrgImpact:
    """Organization productivity change, split at its earliest grant year.

    ``pubs_per_million`` is the after-period publication gain (delta times the
    number of after years) per million currency units of total funding.
    """
    if not projects:
        raise PreconditionError(f"organization {org_id!r} has no funded projects")
    total = sum((p.budget for p in projects), Decimal(0))
    split = split_periods(min(p.grant_year for p in projects), window)
    prod = productivity_delta(pubs, split)
    flags = set(prod.flags)
    per_million = None
    if total <= 0:
        flags.add(NO_FUNDS)
    elif prod.value is not None:
        per_million = prod.value * len(split.after) / (float(total) / 1e6)
    return OrgImpact(org_id, len(projects), total, prod.value, per_million, frozenset(flags))


@dataclass(frozen=True)
class YearRow:
    year: int
    pubs: int
    coauth_rate: float | None
    focus_theme: float | None
    is_grant_year: bool


def yearly_table(pubs: Sequence[Publication], window: YearRange, grant_years: Iterable[int],
                 theme: DocumentVector | None, space: VectorSpace) -> list[YearRow]:
    """Per-year publication count, co-authorship rate and theme similarity.

    Years without publications (or without scorable abstracts for the theme
    column) carry ``None`` rather than 0.
    """
    grant_years = set(grant_years)
    per_year: dict[int, list[Publication]] = {y: [] for y in window}
    for p in pubs:
        if p.year in per_year:
            per_year[p.year].append(p)
    rows = []
    for year, ps in per_year.items():
        coauth = coauthor_rate(ps) if ps else None
        focus = None
        if theme is not None:
            vecs = [space.vector(p.pub_id) for p in ps if space.has_terms(p.pub_id)]
            if vecs:
                focus = mean_similarity_to(theme, vecs)
        rows.append(YearRow(year, len(ps), coauth, focus, year in grant_years))
    return rows


def project_key(project_id: str) -> tuple[str, str]:
    return ("project", project_id)


def build_space(pubs: Iterable[Publication], projects: Iterable[FundedProject], config=None) -> VectorSpace:
    """One global TF-IDF space over all abstracts plus all project summaries.

    Publications are keyed by ``pub_id``; projects by :func:`project_key`.
    """
    texts: dict = {p.pub_id: p.abstract for p in pubs}
    for proj in projects:
        texts[project_key(proj.project_id)] = proj.summary
    if config is None:
        return VectorSpace.from_texts(texts)
    return VectorSpace.from_texts(texts, config)
