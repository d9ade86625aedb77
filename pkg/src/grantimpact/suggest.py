"""Rank researchers against a proposal by mean abstract-to-proposal similarity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .metrics import PreconditionError
from .vsm import DocumentVector, VectorSpace, cosine

DEFAULT_TOP_K = 10


@dataclass(frozen=True)
class Suggestion:
    rank: int
    researcher_id: str
    avg_similarity: float
    pub_count: int


def score_researcher(proposal: DocumentVector, pub_vectors: Sequence[DocumentVector]) -> tuple[float, int] | None:
    """Mean cosine between the proposal and each scorable publication.

    Returns ``None`` for a researcher with nothing to score, so they are left
    out of the ranking rather than scored 0.
    """
    n = len(pub_vectors)
    if n == 0:
        return None
    return math.fsum(cosine(proposal, v) for v in pub_vectors) / n, n


def rank_scores(scores: Mapping[str, tuple[float, int]], top_k: int = DEFAULT_TOP_K) -> list[Suggestion]:
    """Order by similarity, then publication count (both descending), then id."""
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1][0], -kv[1][1], kv[0]))
    return [Suggestion(rank, rid, sim, n) for rank, (rid, (sim, n)) in enumerate(ordered[:top_k], start=1)]


def researcher_vectors(researchers: Mapping[str, Iterable[str]], space: VectorSpace) -> dict[str, list[DocumentVector]]:
    """Map researcher id -> vectors of their publications that have terms.

    ``researchers`` maps ids to the keys of their publications in ``space``.
    Publications whose abstracts are empty after preprocessing are skipped.
    """
    return {
        rid: [space.vector(k) for k in sorted(keys) if space.has_terms(k)]
        for rid, keys in researchers.items()
    }


def suggest_candidates(proposal: str, researchers: Mapping[str, Iterable[str]], space: VectorSpace,
                       top_k: int = DEFAULT_TOP_K, exclude: Iterable[str] = ()) -> list[Suggestion]:
    """Top-k researchers for a proposal text.

    The proposal is vectorized against ``space`` without being added to its
    index. Researchers listed in ``exclude`` are not ranked.
    """
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    if not space.preprocess(proposal):
        raise PreconditionError("proposal is empty after preprocessing")
    pvec = space.vector_for_text(proposal)
    excluded = set(exclude)
    scores = {}
    for rid, vecs in researcher_vectors(researchers, space).items():
        if rid in excluded:
            continue
        s = score_researcher(pvec, vecs)
        if s is not None:
            scores[rid] = s
    return rank_scores(scores, top_k)
