"""Text preprocessing: tokenize, lowercase, drop stop words, stem."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

from nltk.stem import PorterStemmer

_TOKEN_RE = re.compile(r"[^\W_]+")

# Porter can take several passes to settle (e.g. used -> us -> u).
_MAX_STEM_PASSES = 16


def read_stopword_file(path: str | Path) -> frozenset[str]:
    """One word per line; blank lines and ``#`` comments ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip().lower()
            if line:
                words.add(line)
    return frozenset(words)


@lru_cache(maxsize=1)
def english_stopwords() -> frozenset[str]:
    ref = resources.files("grantimpact").joinpath("data/stopwords_en.txt")
    with resources.as_file(ref) as path:
        return read_stopword_file(path)


@dataclass(frozen=True)
class PipelineConfig:
    stopwords: frozenset[str] = field(default_factory=english_stopwords)
    min_length: int = 2
    drop_numeric: bool = True
    stem: bool = True

    @classmethod
    def from_stopword_file(cls, path: str | Path | None, **kwargs) -> "PipelineConfig":
        if path is None:
            return cls(**kwargs)
        return cls(stopwords=read_stopword_file(path), **kwargs)


DEFAULT_CONFIG = PipelineConfig()


def _keep(token: str, min_length: int, drop_numeric: bool) -> bool:
    if len(token) < min_length:
        return False
    return not (drop_numeric and token.isdigit())


def tokenize(text: str, min_length: int = 2, drop_numeric: bool = True) -> list[str]:
    """Split on runs of non-alphanumeric characters and lowercase.

    Tokens shorter than ``min_length`` and digit-only tokens are dropped.

    >>> tokenize("video-coding (H.264)")
    ['video', 'coding']
    """
    out = []
    for run in _TOKEN_RE.findall(text):
        low = run.lower()
        # lowercasing can introduce non-alphanumeric code points (U+0130 -> i + U+0307)
        pieces = (low,) if low.isalnum() else _TOKEN_RE.findall(low)
        out.extend(t for t in pieces if _keep(t, min_length, drop_numeric))
    return out


class _Stemmer:
    def __init__(self):
        self._porter = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)

    def __call__(self, word: str) -> str:
        for _ in range(_MAX_STEM_PASSES):
            stemmed = self._porter.stem(word, to_lowercase=False)
            if stemmed == word:
                break
            word = stemmed
        return word


_stem = _Stemmer()


def stem(word: str) -> str:
    """Porter stem, repeated until the word stops changing."""
    return _stem(word)


class Pipeline:
    """Preprocessor bound to one config, memoizing the per-token transform."""

    def __init__(self, config: PipelineConfig = DEFAULT_CONFIG):
        self.config = config
        self._cache: dict[str, str | None] = {}

    def _transform(self, token: str) -> str | None:
        cfg = self.config
        if token in cfg.stopwords:
            return None
        if cfg.stem:
            token = _stem(token)
            # a stem that would be filtered when re-read is dropped now
            if not _keep(token, cfg.min_length, cfg.drop_numeric) or token in cfg.stopwords:
                return None
        return token

    def __call__(self, text: str) -> list[str]:
        cfg = self.config
        cache = self._cache
        tokens: list[str] = []
        for raw in tokenize(text or "", cfg.min_length, cfg.drop_numeric):
            try:
                term = cache[raw]
            except KeyError:
                term = cache[raw] = self._transform(raw)
            if term is not None:
                tokens.append(term)
        return tokens


@lru_cache(maxsize=8)
def pipeline_for(config: PipelineConfig) -> Pipeline:
    return Pipeline(config)


def preprocess(text: str, config: PipelineConfig = DEFAULT_CONFIG) -> list[str]:
    """Tokenize, lowercase, remove stop words and stem ``text``.

    >>> preprocess("The Coding of the Video")
    ['code', 'video']
    """
    return pipeline_for(config)(text)


def preprocess_many(texts: Iterable[str], config: PipelineConfig = DEFAULT_CONFIG) -> list[list[str]]:
    pipe = pipeline_for(config)
    return [pipe(t) for t in texts]
