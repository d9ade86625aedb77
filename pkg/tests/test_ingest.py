import csv
from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fixture_paths
from grantimpact.ingest import (AliasTable, Organization, RowError, SchemaError, Status, YearRange,
                                link_entities, load_aliases, load_projects, load_publications,
                                normalize_name, resolve_org, write_aliases, write_projects,
                                write_publications)

PUB_HEADER = "pub_id,title,abstract,year,author_ids,org_ids\n"
PROJ_HEADER = "project_id,title,summary,pi_ids,pio_id,grant_year,budget,status\n"
WINDOW = YearRange(2005, 2013)


def test_window_boundaries(write_csv):
    path = write_csv("p.csv", PUB_HEADER + "".join(
        f"p{y},t,a,{y},r1,\n" for y in (2004, 2005, 2013, 2014)))
    res = load_publications(path, WINDOW)
    assert [p.year for p in res] == [2005, 2013]
    assert res.dropped_window == 2
    assert res.kept + res.dropped == res.total_rows == 4


def test_empty_author_ids_is_row_error(write_csv):
    path = write_csv("p.csv", PUB_HEADER + "p1,t,a,2006,r1,\np2,t,a,2007,,\n")
    with pytest.raises(RowError) as err:
        load_publications(path, WINDOW)
    assert err.value.row == 3
    assert err.value.column == "author_ids"
    assert "row 3" in str(err.value) and "author_ids" in str(err.value)


def test_duplicate_author_in_record(write_csv):
    path = write_csv("p.csv", PUB_HEADER + "p1,t,a,2006,r1;r2;r1,\n")
    with pytest.raises(RowError, match="duplicate"):
        load_publications(path, WINDOW)


def test_bad_year_names_column(write_csv):
    path = write_csv("p.csv", PUB_HEADER + "p1,t,a,20x6,r1,\n")
    with pytest.raises(RowError, match="'year'"):
        load_publications(path, WINDOW)


def test_skip_invalid_counts(write_csv):
    path = write_csv("p.csv", PUB_HEADER + "p1,t,a,2006,r1,\np2,t,a,2007,,\np3,t,a,2001,r2,\n")
    res = load_publications(path, WINDOW, skip_invalid=True)
    assert [p.pub_id for p in res] == ["p1"]
    assert (res.dropped_invalid, res.dropped_window) == (1, 1)
    assert len(res.errors) == 1


def test_missing_column(write_csv):
    path = write_csv("p.csv", "pub_id,title,year,author_ids,org_ids\np1,t,2006,r1,\n")
    with pytest.raises(SchemaError, match="abstract"):
        load_publications(path, WINDOW)


def test_ragged_row(write_csv):
    path = write_csv("p.csv", PUB_HEADER + "p1,t,a,2006\n")
    with pytest.raises(RowError, match="row 2"):
        load_publications(path, WINDOW)


def test_basic_fixture_round_trip(tmp_path):
    paths = fixture_paths("basic")
    res = load_publications(paths["pubs"], WINDOW)
    assert len(res) == 10
    with open(paths["pubs"], newline="", encoding="utf-8") as fh:
        ids = [row["pub_id"] for row in csv.DictReader(fh)]
    assert [p.pub_id for p in res] == ids
    # quoted field with embedded quotes and newline
    assert res[0].abstract == 'Power aware video coding, with "complexity" scaling.'
    assert res[2].abstract == "Optical character recognition\nfor Nastaliq script."
    assert res[3].org_ids == {"COMSATS Institute of Information Technology", "NUST"}

    out = tmp_path / "again.csv"
    write_publications(out, res.records)
    assert load_publications(out, WINDOW).records == res.records


def test_projects_closed_only():
    res = load_projects(fixture_paths("basic")["projects"], closed_only=True)
    assert len(res) == 3
    assert all(p.status is Status.CLOSED for p in res)
    assert res.dropped_status == 2
    assert len(load_projects(fixture_paths("basic")["projects"], closed_only=False)) == 5


def test_table1_project_row():
    res = load_projects(fixture_paths("basic")["projects"])
    p = res[0]
    assert p.grant_year == 2009
    assert p.budget == Decimal("13030000")
    assert p.pi_ids == ("a01", "a02")


def test_projects_round_trip(tmp_path):
    res = load_projects(fixture_paths("basic")["projects"], closed_only=False)
    out = tmp_path / "proj.csv"
    write_projects(out, res.records)
    assert load_projects(out, closed_only=False).records == res.records


@pytest.mark.parametrize("budget", ["-5", "abc", "inf", "NaN"])
def test_bad_budget(write_csv, budget):
    path = write_csv("j.csv", PROJ_HEADER + f"j1,t,s,r1,O1,2009,{budget},closed\n")
    with pytest.raises(RowError, match="budget"):
        load_projects(path)


def test_unknown_status(write_csv):
    path = write_csv("j.csv", PROJ_HEADER + "j1,t,s,r1,O1,2009,10,pending\n")
    with pytest.raises(SchemaError, match="status"):
        load_projects(path)
    # fatal even with skip_invalid
    with pytest.raises(SchemaError):
        load_projects(path, skip_invalid=True)


def test_project_grant_year_outside_window(write_csv):
    path = write_csv("j.csv", PROJ_HEADER + "j1,t,s,r1,O1,2015,10,closed\n")
    with pytest.raises(RowError, match="grant_year"):
        load_projects(path, window=WINDOW)
    assert len(load_projects(path)) == 1


def test_resolve_org_normalizes():
    table = load_aliases(fixture_paths("basic")["orgs"])
    assert resolve_org("lahore university of management sciences ", table) == "LUMS"
    assert resolve_org("  LAHORE   University of Management Sciences", table) == "LUMS"
    assert resolve_org("Unknown Institute", table) is None
    # two spellings, one id
    assert resolve_org("COMSATS", table) == resolve_org("ciit", table) == "CIIT"


def test_resolve_org_no_fuzzy_matching():
    table = load_aliases(fixture_paths("basic")["orgs"])
    assert resolve_org("Lahore Univ of Management Sciences", table) is None


def test_alias_table_canonical_is_alias():
    table = load_aliases(fixture_paths("basic")["orgs"])
    for org in table.orgs.values():
        assert org.canonical_name in org.aliases
        normed = [normalize_name(a) for a in org.aliases]
        assert len(normed) == len(set(normed))


def test_alias_conflict_rejected(write_csv):
    path = write_csv("o.csv", "org_id,canonical_name,alias\nA,Alpha,AU\nB,Beta,au\n")
    with pytest.raises(SchemaError, match="already maps"):
        load_aliases(path)
    with pytest.raises(SchemaError):
        AliasTable([Organization("A", "Alpha", frozenset()), Organization("B", "alpha", frozenset())])


def test_alias_round_trip(tmp_path):
    table = load_aliases(fixture_paths("basic")["orgs"])
    out = tmp_path / "orgs.csv"
    write_aliases(out, table)
    assert load_aliases(out).orgs == table.orgs


@pytest.fixture
def basic_graph():
    paths = fixture_paths("basic")
    pubs = load_publications(paths["pubs"], WINDOW)
    projects = load_projects(paths["projects"], closed_only=False)
    return link_entities(pubs.records, projects.records, load_aliases(paths["orgs"]))


def test_link_symmetry(basic_graph):
    g = basic_graph
    for pub in g.publications.values():
        for r in pub.author_ids:
            assert pub.pub_id in g.researchers[r].pub_ids
    for r in g.researchers.values():
        for pid in r.pub_ids:
            assert r.researcher_id in g.publications[pid].author_ids


def test_pi_without_publications_is_flagged(basic_graph):
    assert basic_graph.flagged_researchers == {"a99"}
    assert basic_graph.researchers["a99"].pub_ids == frozenset()


def test_unresolved_org_keeps_publication(basic_graph):
    g = basic_graph
    assert g.unresolved_orgs == {"Unknown Institute": {"P-0009"}}
    assert "P-0009" in g.publications
    assert g.org_pubs["LUMS"] == {"2-s2.0-84859010001", "2-s2.0-84859010002", "P-0008"}
    assert g.project_org["ICT-01"] == "LUMS"


def test_pub_counts_five_pubs_two_researchers():
    from grantimpact.ingest import Publication
    authors = ["x", "y", "x", "y", "x"]
    pubs = [Publication(f"p{i}", "", "", 2006, (a,), frozenset()) for i, a in enumerate(authors)]
    g = link_entities(pubs, [])
    assert {r: len(v.pub_ids) for r, v in g.researchers.items()} == {"x": 3, "y": 2}


years = st.integers(min_value=1990, max_value=2030)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(years, st.booleans()), max_size=30))
def test_conservation(tmp_path_factory, rows):
    path = tmp_path_factory.mktemp("cons") / "p.csv"
    lines = [f"p{i},t,a,{y},{'r1' if ok else ''},\n" for i, (y, ok) in enumerate(rows)]
    path.write_text(PUB_HEADER + "".join(lines))
    res = load_publications(path, WINDOW, skip_invalid=True)
    assert res.kept + res.dropped == res.total_rows == len(rows)
    assert all(p.year in WINDOW for p in res)
