"""Deterministic synthetic datasets: a small case study modeled on a single
funded video-coding project, and a large corpus for scale checks."""

from __future__ import annotations

import random
from decimal import Decimal
from pathlib import Path

from .ingest import (AliasTable, FundedProject, Organization, Publication, Status, write_aliases,
                     write_projects, write_publications)

CASE_TOPICS = {
    "video": "power aware video coding encoder complexity battery energy consumption mobile "
             "devices portable motion estimation h264 bitrate rate distortion decoder low power",
    "image": "image processing segmentation edge detection texture compression wavelet "
             "denoising restoration pixel color histogram filtering",
    "network": "wireless network routing protocol throughput latency packet mesh congestion "
               "sensor nodes mac layer topology",
    "grid": "electric power grid transmission load flow voltage stability generator "
            "substation fault protection renewable",
    "nlp": "urdu language text corpus tokenization morphology parsing named entity "
           "translation speech recognition",
    "medical": "clinical patients diagnosis hospital disease treatment cohort mortality "
               "therapy trial outcomes",
    "database": "query optimization relational database index transaction storage "
                "schema join workload distributed",
    "crypto": "encryption cryptographic key protocol authentication cipher secure "
              "attack signature hash",
}

CASE_SUMMARY = (
    "Energy-aware video encoding for battery powered handheld devices. "
    "The project develops complexity scalable video encoders whose motion estimation and "
    "rate distortion decisions adapt to the remaining battery energy, reducing power "
    "consumption of video coding on mobile devices."
)

CASE_WINDOW = (2005, 2013)


def _abstract(rng: random.Random, topic_words: list[str], noise_words: list[str], n: int, noise: float) -> str:
    words = [rng.choice(noise_words) if rng.random() < noise else rng.choice(topic_words) for _ in range(n)]
    return "We study " + " ".join(words) + "."


def case_study_dataset(seed: int = 2009):
    """A funded project (grant 2009, budget 13.03 million) with two PIs and
    forty other researchers spread over eight topics.

    One PI publishes on power-aware video coding with a clear rise in output
    and team size after the grant; the other works on image processing.
    """
    rng = random.Random(seed)
    topics = {k: v.split() for k, v in CASE_TOPICS.items()}
    all_words = sorted({w for ws in topics.values() for w in ws})
    orgs = [
        Organization("LUMS", "Lahore University of Management Sciences",
                     frozenset({"LUMS", "Lahore Univ. of Management Sciences"})),
        Organization("NUST", "National University of Sciences and Technology", frozenset({"NUST"})),
        Organization("COMSATS", "COMSATS Institute of Information Technology", frozenset({"CIIT"})),
        Organization("UET", "University of Engineering and Technology Lahore", frozenset({"UET Lahore"})),
        Organization("QAU", "Quaid-i-Azam University", frozenset({"QAU"})),
    ]
    pubs: list[Publication] = []
    counter = 0

    def add(year, authors, topic, org_names, noise=0.25):
        nonlocal counter
        counter += 1
        pubs.append(Publication(
            pub_id=f"cs{counter:04d}",
            title=f"On {topic} {counter}",
            abstract=_abstract(rng, topics[topic], all_words, rng.randint(25, 40), noise),
            year=year,
            author_ids=tuple(authors),
            org_ids=frozenset(org_names),
        ))

    others = [f"r{i:02d}" for i in range(1, 41)]
    home = {rid: sorted(topics)[i % len(topics)] for i, rid in enumerate(others)}
    org_of = {rid: orgs[1 + i % 4].org_id for i, rid in enumerate(others)}

    # PI 1: video coding, 1 pub/yr solo-ish before, ~2 pubs/yr with larger teams after
    for year, n in zip(range(2005, 2014), (1, 1, 2, 1, 2, 2, 3, 2, 3)):
        for _ in range(n):
            team = ["pi_video"] + rng.sample(others, 1 if year < 2009 else rng.randint(2, 4))
            add(year, team, "video", ["Lahore University of Management Sciences"], noise=0.15)
    # PI 2: image processing, growing after 2009
    for year, n in zip(range(2005, 2014), (1, 0, 1, 1, 1, 2, 2, 2, 2)):
        for _ in range(n):
            team = ["pi_image"] + rng.sample(others, 1 if year < 2009 else rng.randint(2, 3))
            add(year, team, rng.choice(["image", "video", "image"]), ["LUMS"], noise=0.3)
    # LUMS colleague with unrelated output
    for year in range(2005, 2014, 2):
        add(year, ["lums_grid"], "grid", ["lums "], noise=0.2)
    # everybody else
    for rid in others:
        for _ in range(rng.randint(2, 6)):
            year = rng.randint(2005, 2013)
            add(year, [rid] + rng.sample([o for o in others if o != rid], rng.randint(0, 2)),
                home[rid], [orgs[[o.org_id for o in orgs].index(org_of[rid])].canonical_name])

    projects = [FundedProject(
        project_id="ICTRDF-2009-01",
        title="Energy-aware video encoding on handheld devices",
        summary=CASE_SUMMARY,
        pi_ids=("pi_image", "pi_video"),
        pio_id="Lahore University of Management Sciences (LUMS)",
        grant_year=2009,
        budget=Decimal("13.03e6"),
        status=Status.CLOSED,
    ), FundedProject(
        project_id="ICTRDF-2012-07",
        title="Urdu speech corpus",
        summary=CASE_TOPICS["nlp"],
        pi_ids=("r05",),
        pio_id="QAU",
        grant_year=2012,
        budget=Decimal("4500000"),
        status=Status.IN_PROGRESS,
    )]
    lums = orgs[0]
    orgs[0] = Organization(lums.org_id, lums.canonical_name,
                           lums.aliases | {"Lahore University of Management Sciences (LUMS)"})
    return pubs, projects, AliasTable(orgs)


def _pseudo_words(rng: random.Random, n: int) -> list[str]:
    onsets = ["b", "c", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "st", "pr", "tr", "qu"]
    vowels = ["a", "e", "i", "o", "u", "ai", "ou"]
    words: set[str] = set()
    while len(words) < n:
        words.add("".join(rng.choice(onsets) + rng.choice(vowels) for _ in range(rng.randint(2, 4))))
    return sorted(words)


def scale_dataset(n_pubs: int = 60_000, n_researchers: int = 40_000, n_orgs: int = 213,
                  n_projects: int = 17, n_topics: int = 60, seed: int = 7):
    """Large random corpus shaped like a national publication export."""
    rng = random.Random(seed)
    vocab = _pseudo_words(rng, 6000)
    topics = [rng.sample(vocab, 120) for _ in range(n_topics)]
    orgs = [Organization(f"ORG{i:03d}", f"Institute {i}", frozenset({f"Inst. {i}"})) for i in range(n_orgs)]
    researcher_topic = [rng.randrange(n_topics) for _ in range(n_researchers)]
    researcher_org = [rng.randrange(n_orgs) for _ in range(n_researchers)]
    # skewed co-author pool so some researchers are prolific
    prolific = list(range(min(2000, n_researchers)))

    pubs = []
    for i in range(n_pubs):
        first = i % n_researchers if i < n_researchers else rng.choice(prolific)
        team = [first]
        for _ in range(rng.randint(0, 4)):
            c = rng.choice(prolific) if rng.random() < 0.5 else rng.randrange(n_researchers)
            if c not in team:
                team.append(c)
        t = topics[researcher_topic[first]]
        words = [rng.choice(vocab) if rng.random() < 0.2 else rng.choice(t) for _ in range(rng.randint(100, 220))]
        pubs.append(Publication(
            pub_id=f"2-s2.0-{i:08d}",
            title=" ".join(words[:6]),
            abstract=" ".join(words),
            year=2005 + rng.randrange(9),
            author_ids=tuple(f"A{r:06d}" for r in team),
            org_ids=frozenset(orgs[researcher_org[r]].canonical_name for r in team),
        ))

    projects = []
    for j in range(n_projects):
        pis = rng.sample(prolific, rng.randint(1, 2))
        t = topics[researcher_topic[pis[0]]]
        projects.append(FundedProject(
            project_id=f"PRJ{j:03d}",
            title=f"Project {j}",
            summary=" ".join(rng.choice(t) for _ in range(60)),
            pi_ids=tuple(f"A{r:06d}" for r in pis),
            pio_id=orgs[researcher_org[pis[0]]].canonical_name,
            grant_year=rng.randint(2007, 2013),
            budget=Decimal(rng.randint(2, 40)) * Decimal("1000000"),
            status=Status.CLOSED,
        ))
    return pubs, projects, AliasTable(orgs)


def write_dataset(out_dir, pubs, projects, aliases) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"pubs": out / "publications.csv", "projects": out / "projects.csv", "orgs": out / "org_aliases.csv"}
    write_publications(paths["pubs"], pubs)
    write_projects(paths["projects"], projects)
    write_aliases(paths["orgs"], aliases)
    return paths
