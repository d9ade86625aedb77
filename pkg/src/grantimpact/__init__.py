"""Research grant impact assessment: before/after bibliometric deltas,
TF-IDF/cosine research-focus analysis and candidate suggestion."""

from .ingest import (AliasTable, EntityGraph, FundedProject, Organization, Publication, Researcher, SchemaError,
                     YearRange, link_entities, load_aliases, load_projects, load_publications, resolve_org)
from .metrics import (Metric, OrgImpact, PeriodSplit, PreconditionError, ResearcherImpact, build_space,
                      coauth_delta, focus_self_delta, focus_theme_delta, org_impact, productivity_delta,
                      researcher_impact, split_periods)
from .suggest import Suggestion, score_researcher, suggest_candidates
from .textpipe import PipelineConfig, preprocess, tokenize
from .vsm import CorpusIndex, DocumentVector, VectorSpace, build_index, cosine, tfidf_weight, vectorize

__version__ = "0.1.0"
