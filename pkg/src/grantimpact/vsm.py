"""Vector-space model: document frequencies, TF-IDF weights, cosine similarity."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping, Sequence

from .textpipe import DEFAULT_CONFIG, PipelineConfig, pipeline_for


@dataclass(frozen=True)
class CorpusIndex:
    n_docs: int
    df: Mapping[str, int]

    @property
    def vocab_size(self) -> int:
        return len(self.df)

    def __contains__(self, term: str) -> bool:
        return term in self.df


def build_index(docs: Iterable[Sequence[str]]) -> CorpusIndex:
    """Count, for every term, the number of documents it occurs in."""
    df: Counter[str] = Counter()
    n = 0
    for doc in docs:
        n += 1
        df.update(set(doc))
    if n == 0:
        raise ValueError("cannot build an index over an empty document collection")
    return CorpusIndex(n_docs=n, df=MappingProxyType(dict(df)))


def tfidf_weight(tf: int, df: int, n_docs: int) -> float:
    """``tf * ln(N / df)``."""
    if tf < 0:
        raise ValueError(f"term frequency must be non-negative, got {tf}")
    if not 1 <= df <= n_docs:
        raise ValueError(f"document frequency {df} outside [1, {n_docs}]")
    if tf == 0 or df == n_docs:
        return 0.0
    return tf * math.log(n_docs / df)


@dataclass(frozen=True)
class DocumentVector:
    """Sparse non-negative term weights with a cached Euclidean norm.

    Build through :meth:`from_weights` so zero weights are pruned and the norm
    is computed consistently.
    """

    weights: Mapping[str, float]
    norm: float

    @classmethod
    def from_weights(cls, weights: Mapping[str, float]) -> "DocumentVector":
        kept = {t: w for t, w in weights.items() if w != 0.0}
        for t, w in kept.items():
            if not w > 0.0 or math.isinf(w):
                raise ValueError(f"weight for {t!r} must be positive and finite, got {w}")
        norm = math.sqrt(math.fsum(w * w for w in kept.values()))
        return cls(MappingProxyType(kept), norm)

    def scaled(self, factor: float) -> "DocumentVector":
        if not factor > 0:
            raise ValueError("scale factor must be positive")
        return DocumentVector.from_weights({t: w * factor for t, w in self.weights.items()})

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def is_zero(self) -> bool:
        return not self.weights


ZERO_VECTOR = DocumentVector.from_weights({})


def vectorize(doc: Sequence[str], index: CorpusIndex) -> DocumentVector:
    """TF-IDF vector for a token stream; terms missing from the index are dropped."""
    df = index.df
    n = index.n_docs
    weights = {}
    for term, tf in Counter(doc).items():
        d = df.get(term)
        if d is None:
            continue
        weights[term] = tfidf_weight(tf, d, n)
    return DocumentVector.from_weights(weights)


def cosine(a: DocumentVector, b: DocumentVector) -> float:
    """Cosine of the angle between two vectors, 0 when either is zero.

    The dot product uses ``math.fsum`` so the result does not depend on
    iteration order, which keeps ``cosine(a, b) == cosine(b, a)`` exact.
    """
    if a.norm == 0.0 or b.norm == 0.0:
        return 0.0
    small, large = (a.weights, b.weights) if len(a) <= len(b) else (b.weights, a.weights)
    dot = math.fsum(w * large[t] for t, w in small.items() if t in large)
    if dot == 0.0:
        return 0.0
    sim = dot / (a.norm * b.norm)
    return min(1.0, max(0.0, sim))


@dataclass
class VectorSpace:
    """Global TF-IDF space over a keyed text collection.

    Texts are preprocessed once; vectors are computed lazily and cached. Texts
    vectorized through :meth:`vector_for_text` are never added to the index.
    """

    index: CorpusIndex
    tokens: dict[Hashable, list[str]]
    config: PipelineConfig = DEFAULT_CONFIG
    _vectors: dict[Hashable, DocumentVector] = field(default_factory=dict, repr=False)

    @classmethod
    def from_texts(cls, texts: Mapping[Hashable, str], config: PipelineConfig = DEFAULT_CONFIG) -> "VectorSpace":
        pipe = pipeline_for(config)
        tokens = {key: pipe(text) for key, text in texts.items()}
        return cls(build_index(tokens.values()), tokens, config)

    def has_terms(self, key: Hashable) -> bool:
        return bool(self.tokens[key])

    def vector(self, key: Hashable) -> DocumentVector:
        vec = self._vectors.get(key)
        if vec is None:
            vec = self._vectors[key] = vectorize(self.tokens[key], self.index)
        return vec

    def preprocess(self, text: str) -> list[str]:
        return pipeline_for(self.config)(text)

    def vector_for_text(self, text: str) -> DocumentVector:
        return vectorize(self.preprocess(text), self.index)
