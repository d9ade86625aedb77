"""CSV ingestion for publications, funded projects and organization aliases,
plus the entity graph linking researchers, publications, organizations and
projects.
"""

from __future__ import annotations

import csv
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

log = logging.getLogger(__name__)

PUBLICATION_COLUMNS = ("pub_id", "title", "abstract", "year", "author_ids", "org_ids")
PROJECT_COLUMNS = ("project_id", "title", "summary", "pi_ids", "pio_id", "grant_year", "budget", "status")
ALIAS_COLUMNS = ("org_id", "canonical_name", "alias")

LIST_SEP = ";"


class SchemaError(Exception):
    """Input file does not conform to its schema."""


class RowError(SchemaError):
    def __init__(self, path, row: int, column: str | None, message: str):
        self.path = str(path)
        self.row = row
        self.column = column
        where = f"{self.path}: row {row}"
        if column:
            where += f", column {column!r}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class YearRange:
    """Inclusive calendar-year range; empty when ``start > end``."""

    start: int
    end: int

    def __contains__(self, year: int) -> bool:
        return self.start <= year <= self.end

    def __len__(self) -> int:
        return max(0, self.end - self.start + 1)

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.start, self.end + 1))

    @property
    def empty(self) -> bool:
        return self.start > self.end

    def __str__(self) -> str:
        return f"{self.start}-{self.end}" if not self.empty else "empty"


DEFAULT_WINDOW = YearRange(2005, 2013)


class Status(str, Enum):
    CLOSED = "closed"
    IN_PROGRESS = "in_progress"


@dataclass(frozen=True)
class Publication:
    pub_id: str
    title: str
    abstract: str
    year: int
    author_ids: tuple[str, ...]
    org_ids: frozenset[str]


@dataclass(frozen=True)
class FundedProject:
    project_id: str
    title: str
    summary: str
    pi_ids: tuple[str, ...]
    pio_id: str
    grant_year: int
    budget: Decimal
    status: Status


@dataclass(frozen=True)
class Organization:
    org_id: str
    canonical_name: str
    aliases: frozenset[str]


@dataclass(frozen=True)
class Researcher:
    researcher_id: str
    display_name: str
    pub_ids: frozenset[str]


@dataclass
class LoadResult:
    """Records kept by a load, with counts of what was dropped and why."""

    records: list
    total_rows: int = 0
    dropped_window: int = 0
    dropped_status: int = 0
    dropped_invalid: int = 0
    errors: list[RowError] = field(default_factory=list)

    @property
    def kept(self) -> int:
        return len(self.records)

    @property
    def dropped(self) -> int:
        return self.dropped_window + self.dropped_status + self.dropped_invalid

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]


def normalize_name(name: str) -> str:
    return " ".join(name.split()).casefold()


def _split_list(cell: str) -> list[str]:
    return [part.strip() for part in cell.split(LIST_SEP) if part.strip()]


def _read_rows(path, required: Sequence[str]) -> Iterator[tuple[int, dict[str, str]]]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"{path}: no such file")
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing required column(s): {', '.join(missing)}")
        # header is row 1
        for rowno, row in enumerate(reader, start=2):
            if None in row:
                raise RowError(path, rowno, None, f"expected {len(header)} fields, got more")
            if any(v is None for v in row.values()):
                raise RowError(path, rowno, None, f"expected {len(header)} fields, got fewer")
            yield rowno, row


def _parse_int(path, rowno, column, cell) -> int:
    try:
        return int(cell.strip())
    except ValueError:
        raise RowError(path, rowno, column, f"not an integer: {cell!r}") from None


def _parse_ids(path, rowno, column, cell) -> tuple[str, ...]:
    ids = _split_list(cell)
    if not ids:
        raise RowError(path, rowno, column, "at least one id required")
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise RowError(path, rowno, column, f"duplicate id(s): {', '.join(dupes)}")
    return tuple(ids)


def _load(path, required, parse, skip_invalid: bool) -> LoadResult:
    result = LoadResult(records=[])
    for rowno, row in _read_rows(path, required):
        result.total_rows += 1
        try:
            outcome = parse(rowno, row)
        except RowError as err:
            if not skip_invalid:
                raise
            log.warning("skipping invalid row: %s", err)
            result.errors.append(err)
            result.dropped_invalid += 1
            continue
        if outcome == "window":
            result.dropped_window += 1
        elif outcome == "status":
            result.dropped_status += 1
        else:
            result.records.append(outcome)
    return result


def load_publications(path, window: YearRange = DEFAULT_WINDOW, skip_invalid: bool = False) -> LoadResult:
    """Read ``publications.csv``.

    Rows dated outside ``window`` are dropped and counted. Malformed rows raise
    :class:`RowError` unless ``skip_invalid`` is set, in which case they are
    dropped and recorded in ``errors``.
    """

    def parse(rowno, row):
        pub_id = row["pub_id"].strip()
        if not pub_id:
            raise RowError(path, rowno, "pub_id", "empty id")
        year = _parse_int(path, rowno, "year", row["year"])
        authors = _parse_ids(path, rowno, "author_ids", row["author_ids"])
        if year not in window:
            return "window"
        return Publication(
            pub_id=pub_id,
            title=row["title"],
            abstract=row["abstract"],
            year=year,
            author_ids=authors,
            org_ids=frozenset(_split_list(row["org_ids"])),
        )

    return _load(path, PUBLICATION_COLUMNS, parse, skip_invalid)


def _parse_status(path, rowno, cell) -> Status:
    token = cell.strip().lower()
    try:
        return Status(token)
    except ValueError:
        # unknown tokens are a schema problem even in skip-invalid mode
        raise SchemaError(
            f"{path}: row {rowno}, column 'status': unknown status {cell!r} "
            f"(expected one of: {', '.join(s.value for s in Status)})"
        ) from None


def _parse_budget(path, rowno, cell) -> Decimal:
    try:
        budget = Decimal(cell.strip())
    except InvalidOperation:
        raise RowError(path, rowno, "budget", f"not a number: {cell!r}") from None
    if not budget.is_finite() or budget < 0:
        raise RowError(path, rowno, "budget", f"must be a non-negative amount, got {cell!r}")
    return budget


def load_projects(path, closed_only: bool = True, window: YearRange | None = None,
                  skip_invalid: bool = False) -> LoadResult:
    """Read ``projects.csv``.

    With ``closed_only`` the in-progress projects are dropped (and counted).
    When ``window`` is given a grant year outside it is a row error.
    """

    def parse(rowno, row):
        project_id = row["project_id"].strip()
        if not project_id:
            raise RowError(path, rowno, "project_id", "empty id")
        status = _parse_status(path, rowno, row["status"])
        pis = _parse_ids(path, rowno, "pi_ids", row["pi_ids"])
        pio = row["pio_id"].strip()
        if not pio:
            raise RowError(path, rowno, "pio_id", "empty organization")
        grant_year = _parse_int(path, rowno, "grant_year", row["grant_year"])
        if window is not None and grant_year not in window:
            raise RowError(path, rowno, "grant_year", f"{grant_year} outside corpus window {window}")
        budget = _parse_budget(path, rowno, row["budget"])
        if closed_only and status is not Status.CLOSED:
            return "status"
        return FundedProject(
            project_id=project_id,
            title=row["title"],
            summary=row["summary"],
            pi_ids=pis,
            pio_id=pio,
            grant_year=grant_year,
            budget=budget,
            status=status,
        )

    return _load(path, PROJECT_COLUMNS, parse, skip_invalid)


class AliasTable:
    """Organization alias lookup, matching names case- and whitespace-insensitively."""

    def __init__(self, orgs: Iterable[Organization] = ()):
        self.orgs: dict[str, Organization] = {}
        self._by_name: dict[str, str] = {}
        for org in orgs:
            self.add(org)

    def add(self, org: Organization) -> None:
        if org.org_id in self.orgs:
            raise SchemaError(f"duplicate organization id {org.org_id!r}")
        names = set(org.aliases) | {org.canonical_name}
        for name in names:
            key = normalize_name(name)
            other = self._by_name.get(key)
            if other is not None and other != org.org_id:
                raise SchemaError(f"alias {name!r} maps to both {other!r} and {org.org_id!r}")
        for name in names:
            self._by_name[normalize_name(name)] = org.org_id
        self.orgs[org.org_id] = Organization(org.org_id, org.canonical_name, frozenset(names))

    def lookup(self, name: str) -> str | None:
        if name in self.orgs:
            return name
        return self._by_name.get(normalize_name(name))

    def __len__(self) -> int:
        return len(self.orgs)

    def __contains__(self, org_id: str) -> bool:
        return org_id in self.orgs


def load_aliases(path) -> AliasTable:
    """Read ``org_aliases.csv`` (one alias per row)."""
    canonical: dict[str, str] = {}
    aliases: dict[str, set[str]] = defaultdict(set)
    seen_alias: dict[str, str] = {}
    for rowno, row in _read_rows(path, ALIAS_COLUMNS):
        org_id = row["org_id"].strip()
        if not org_id:
            raise RowError(path, rowno, "org_id", "empty id")
        name = row["canonical_name"].strip()
        if not name:
            raise RowError(path, rowno, "canonical_name", "empty name")
        if canonical.setdefault(org_id, name) != name:
            raise RowError(path, rowno, "canonical_name",
                           f"conflicting canonical names for {org_id!r}: {canonical[org_id]!r} vs {name!r}")
        alias = row["alias"].strip()
        for candidate in (name, alias):
            if not candidate:
                continue
            key = normalize_name(candidate)
            owner = seen_alias.setdefault(key, org_id)
            if owner != org_id:
                raise RowError(path, rowno, "alias", f"{candidate!r} already maps to {owner!r}")
        if alias:
            aliases[org_id].add(alias)
    return AliasTable(Organization(oid, canonical[oid], frozenset(aliases[oid])) for oid in canonical)


UNRESOLVED = None


def resolve_org(name: str, aliases: AliasTable) -> str | None:
    """Map an organization name (or id) to its org id.

    Returns ``None`` when no alias matches after lowercasing and collapsing
    whitespace. No fuzzy matching is attempted.
    """
    org_id = aliases.lookup(name)
    if org_id is None:
        log.info("unresolved organization name: %r", name)
    return org_id


@dataclass
class EntityGraph:
    """Researchers, publications, organizations and projects with links both ways."""

    publications: dict[str, Publication]
    projects: dict[str, FundedProject]
    researchers: dict[str, Researcher]
    organizations: dict[str, Organization]
    org_pubs: dict[str, frozenset[str]]
    project_org: dict[str, str | None]
    # researchers named as PIs but with no publications in the corpus
    flagged_researchers: frozenset[str]
    # raw organization names that matched nothing -> publications citing them
    unresolved_orgs: dict[str, frozenset[str]]

    def pubs_of(self, researcher_id: str) -> list[Publication]:
        r = self.researchers.get(researcher_id)
        if r is None:
            return []
        return sorted((self.publications[p] for p in r.pub_ids), key=lambda p: (p.year, p.pub_id))

    def pubs_of_org(self, org_id: str) -> list[Publication]:
        return sorted((self.publications[p] for p in self.org_pubs.get(org_id, ())),
                      key=lambda p: (p.year, p.pub_id))

    @property
    def funded_researchers(self) -> list[str]:
        return sorted({r for p in self.projects.values() for r in p.pi_ids})


def link_entities(pubs: Iterable[Publication], projects: Iterable[FundedProject],
                  aliases: AliasTable | None = None) -> EntityGraph:
    """Build the entity graph.

    Organization references in publications and projects are resolved through
    ``aliases``; unresolved references are recorded, never fatal.
    """
    aliases = aliases if aliases is not None else AliasTable()
    publications: dict[str, Publication] = {}
    for pub in pubs:
        if pub.pub_id in publications:
            raise SchemaError(f"duplicate publication id {pub.pub_id!r}")
        publications[pub.pub_id] = pub

    by_author: dict[str, set[str]] = defaultdict(set)
    org_pubs: dict[str, set[str]] = defaultdict(set)
    unresolved: dict[str, set[str]] = defaultdict(set)
    resolved_cache: dict[str, str | None] = {}
    for pub in publications.values():
        for author in pub.author_ids:
            by_author[author].add(pub.pub_id)
        for raw in pub.org_ids:
            if raw not in resolved_cache:
                resolved_cache[raw] = resolve_org(raw, aliases)
            org_id = resolved_cache[raw]
            if org_id is None:
                unresolved[raw].add(pub.pub_id)
            else:
                org_pubs[org_id].add(pub.pub_id)

    project_map: dict[str, FundedProject] = {}
    project_org: dict[str, str | None] = {}
    for project in projects:
        if project.project_id in project_map:
            raise SchemaError(f"duplicate project id {project.project_id!r}")
        project_map[project.project_id] = project
        project_org[project.project_id] = resolve_org(project.pio_id, aliases)

    flagged = set()
    for project in project_map.values():
        for pi in project.pi_ids:
            if pi not in by_author:
                log.warning("PI %r of project %r has no publications", pi, project.project_id)
                flagged.add(pi)
                by_author[pi] = set()

    researchers = {rid: Researcher(rid, rid, frozenset(ids)) for rid, ids in by_author.items()}
    return EntityGraph(
        publications=publications,
        projects=project_map,
        researchers=researchers,
        organizations=dict(aliases.orgs),
        org_pubs={k: frozenset(v) for k, v in org_pubs.items()},
        project_org=project_org,
        flagged_researchers=frozenset(flagged),
        unresolved_orgs={k: frozenset(v) for k, v in unresolved.items()},
    )


def write_publications(path, pubs: Sequence[Publication]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PUBLICATION_COLUMNS)
        for p in pubs:
            w.writerow([p.pub_id, p.title, p.abstract, p.year,
                        LIST_SEP.join(p.author_ids), LIST_SEP.join(sorted(p.org_ids))])


def write_projects(path, projects: Sequence[FundedProject]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PROJECT_COLUMNS)
        for p in projects:
            w.writerow([p.project_id, p.title, p.summary, LIST_SEP.join(p.pi_ids), p.pio_id,
                        p.grant_year, str(p.budget), p.status.value])


def write_aliases(path, table: AliasTable) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ALIAS_COLUMNS)
        for org_id in sorted(table.orgs):
            org = table.orgs[org_id]
            for alias in sorted(org.aliases):
                w.writerow([org_id, org.canonical_name, alias])


def orgs_from_mapping(mapping: Mapping[str, tuple[str, Iterable[str]]]) -> AliasTable:
    """Convenience constructor: ``{org_id: (canonical_name, aliases)}``."""
    return AliasTable(Organization(oid, name, frozenset(al)) for oid, (name, al) in mapping.items())
