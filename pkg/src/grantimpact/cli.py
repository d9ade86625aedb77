"""Command-line front end: ``validate``, ``impact`` and ``suggest``."""

from __future__ import annotations

import argparse
import logging
import sys
from collections import defaultdict
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from . import reports
from .ingest import (AliasTable, EntityGraph, LoadResult, SchemaError, YearRange, link_entities,
                     load_aliases, load_projects, load_publications)
from .metrics import (UNRESOLVED_ORG, PreconditionError, build_space, org_impact, researcher_impact,
                      theme_vector, yearly_table)
from .suggest import DEFAULT_TOP_K, suggest_candidates
from .textpipe import PipelineConfig

log = logging.getLogger("grantimpact")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SCHEMA = 2
EXIT_PRECONDITION = 3


@dataclass
class RunConfig:
    pubs: Path
    projects: Path
    orgs: Path
    start: int = 2005
    end: int = 2013
    out: Path = Path(".")
    format: str = "json"
    stopwords: Path | None = None
    top_k: int = DEFAULT_TOP_K
    skip_invalid: bool = False
    exclude: list[str] = field(default_factory=list)
    exclude_pis: bool = False

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"window start {self.start} is after end {self.end}")
        if self.top_k < 1:
            raise ValueError(f"--top-k must be >= 1, got {self.top_k}")
        if self.format not in ("json", "csv"):
            raise ValueError(f"--format must be json or csv, got {self.format!r}")

    @property
    def window(self) -> YearRange:
        return YearRange(self.start, self.end)


@dataclass
class Inputs:
    pubs: LoadResult
    projects: LoadResult
    aliases: AliasTable
    graph: EntityGraph


def load_inputs(cfg: RunConfig) -> Inputs:
    aliases = load_aliases(cfg.orgs)
    pubs = load_publications(cfg.pubs, cfg.window, skip_invalid=cfg.skip_invalid)
    projects = load_projects(cfg.projects, closed_only=True, window=cfg.window, skip_invalid=cfg.skip_invalid)
    graph = link_entities(pubs.records, projects.records, aliases)
    return Inputs(pubs, projects, aliases, graph)


def _pipeline_config(cfg: RunConfig) -> PipelineConfig:
    return PipelineConfig.from_stopword_file(cfg.stopwords)


def _load_line(name: str, res: LoadResult, filtered_label: str) -> str:
    line = f"{name}: {res.kept} kept, {res.dropped} dropped"
    if res.dropped:
        parts = []
        if res.dropped_window:
            parts.append(f"{res.dropped_window} outside window")
        if res.dropped_status:
            parts.append(f"{res.dropped_status} {filtered_label}")
        if res.dropped_invalid:
            parts.append(f"{res.dropped_invalid} invalid")
        line += f" ({', '.join(parts)})"
    return line


def cmd_validate(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    inputs = load_inputs(cfg)
    for res in (inputs.pubs, inputs.projects):
        for err in res.errors:
            print(f"invalid: {err}", file=sys.stderr)
    print(_load_line("publications", inputs.pubs, "filtered"), file=out)
    print(_load_line("projects", inputs.projects, "not closed"), file=out)
    print(f"organizations: {len(inputs.aliases)}", file=out)
    unresolved_pio = sum(1 for v in inputs.graph.project_org.values() if v is None)
    print(f"unresolved orgs: {len(inputs.graph.unresolved_orgs)} in publications, "
          f"{unresolved_pio} in projects", file=out)
    if inputs.graph.flagged_researchers:
        print(f"PIs without publications: {', '.join(sorted(inputs.graph.flagged_researchers))}", file=out)
    return EXIT_OK


def compute_impact(cfg: RunConfig, inputs: Inputs | None = None):
    """Researcher, organization and yearly impact for every closed project."""
    inputs = inputs or load_inputs(cfg)
    graph = inputs.graph
    window = cfg.window
    projects = [graph.projects[k] for k in sorted(graph.projects)]
    space = build_space(graph.publications.values(), projects, _pipeline_config(cfg))

    researcher_impacts = []
    projects_of: dict[str, list] = defaultdict(list)
    for project in projects:
        for pi in project.pi_ids:
            projects_of[pi].append(project)
            researcher_impacts.append(researcher_impact(pi, graph.pubs_of(pi), project, window, space))

    by_org: dict[str, list] = defaultdict(list)
    for project in projects:
        org_id = graph.project_org[project.project_id]
        by_org[org_id if org_id is not None else project.pio_id].append(project)
    org_impacts = []
    for org_id, org_projects in by_org.items():
        if org_id in graph.organizations:
            org_pubs = graph.pubs_of_org(org_id)
            imp = org_impact(org_id, org_projects, org_pubs, window)
        else:
            pub_ids = graph.unresolved_orgs.get(org_id, frozenset())
            org_pubs = [graph.publications[p] for p in sorted(pub_ids)]
            imp = org_impact(org_id, org_projects, org_pubs, window)
            imp = replace(imp, flags=imp.flags | {UNRESOLVED_ORG})
        org_impacts.append(imp)

    yearly = {}
    for rid, rprojects in sorted(projects_of.items()):
        first = min(rprojects, key=lambda p: (p.grant_year, p.project_id))
        yearly[rid] = yearly_table(graph.pubs_of(rid), window, {p.grant_year for p in rprojects},
                                   theme_vector(first, space), space)
    return researcher_impacts, org_impacts, yearly


def cmd_impact(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    researcher_impacts, org_impacts, yearly = compute_impact(cfg)
    written = [
        reports.write_report(cfg.out, "researcher_impact", reports.RESEARCHER_COLUMNS,
                             reports.researcher_rows(researcher_impacts), cfg.format),
        reports.write_report(cfg.out, "org_impact", reports.ORG_COLUMNS,
                             reports.org_rows(org_impacts), cfg.format),
    ]
    for rid, rows in yearly.items():
        written.append(reports.write_report(cfg.out, f"yearly_{reports.safe_filename(rid)}",
                                            reports.YEARLY_COLUMNS, reports.yearly_rows(rows), "csv"))
    for path in written:
        print(f"wrote {path}", file=out)
    return EXIT_OK


def compute_suggestions(cfg: RunConfig, project_id: str, inputs: Inputs | None = None):
    inputs = inputs or load_inputs(cfg)
    graph = inputs.graph
    project = graph.projects.get(project_id)
    if project is None:
        known = ", ".join(sorted(graph.projects)) or "(none)"
        raise PreconditionError(f"unknown project id {project_id!r}; known closed projects: {known}")
    space = build_space(graph.publications.values(), graph.projects.values(), _pipeline_config(cfg))
    if not space.tokens[("project", project_id)]:
        raise PreconditionError(f"project {project_id!r} has an empty summary after preprocessing")
    researchers = {rid: r.pub_ids for rid, r in graph.researchers.items()}
    exclude = set(cfg.exclude)
    if cfg.exclude_pis:
        exclude.update(project.pi_ids)
    return suggest_candidates(project.summary, researchers, space, top_k=cfg.top_k, exclude=exclude)


def cmd_suggest(cfg: RunConfig, project_id: str, out=None) -> int:
    out = out or sys.stdout
    suggestions = compute_suggestions(cfg, project_id)
    path = reports.write_report(cfg.out, "suggestions", reports.SUGGESTION_COLUMNS,
                                reports.suggestion_rows(suggestions), cfg.format)
    print(f"wrote {path}", file=out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pubs", type=Path, required=True, help="publications.csv")
    common.add_argument("--projects", type=Path, required=True, help="projects.csv")
    common.add_argument("--orgs", type=Path, required=True, help="org_aliases.csv")
    common.add_argument("--from", dest="start", type=int, default=2005, help="first corpus year (default 2005)")
    common.add_argument("--to", dest="end", type=int, default=2013, help="last corpus year (default 2013)")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--stopwords", type=Path, help="stop-word file, one word per line")
    common.add_argument("--top-k", type=int, default=DEFAULT_TOP_K)
    common.add_argument("--skip-invalid", action="store_true", help="drop and count malformed rows")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="grantimpact", description="Research grant impact analysis.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("validate", parents=[common], help="check input files and print row counts")
    sub.add_parser("impact", parents=[common], help="write researcher/org impact reports")
    p = sub.add_parser("suggest", parents=[common], help="rank candidate researchers for a project")
    p.add_argument("project_id")
    p.add_argument("--exclude", action="append", default=[], metavar="RESEARCHER_ID",
                   help="leave this researcher out of the ranking (repeatable)")
    p.add_argument("--exclude-pis", action="store_true", help="leave the project's own PIs out")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:  # usage errors and --help
        return stop.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig(pubs=args.pubs, projects=args.projects, orgs=args.orgs, start=args.start, end=args.end,
                        out=args.out, format=args.format, stopwords=args.stopwords, top_k=args.top_k,
                        skip_invalid=args.skip_invalid, exclude=getattr(args, "exclude", []),
                        exclude_pis=getattr(args, "exclude_pis", False))
    except ValueError as err:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {err}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "impact":
            return cmd_impact(cfg)
        return cmd_suggest(cfg, args.project_id)
    except (SchemaError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_SCHEMA
    except PreconditionError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
