"""Keyword-match scoring and corpus-standardized 0-10 ratings."""

from __future__ import annotations

import json
import statistics
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import to_bow
from .entities import ParsedResume
from .lda import KeywordList, LdaModel, doc_topics, infer_unseen, keywords_for_mixture

RATING_MIN = 0.0
RATING_MAX = 10.0
RATING_CENTER = 5.0


class ZeroVarianceError(ValueError):
    pass


@dataclass(frozen=True)
class DomainProfile:
    name: str
    keywords: frozenset[str]

    def __post_init__(self) -> None:
        normalized = frozenset(" ".join(k.lower().split()) for k in self.keywords)
        normalized = frozenset(k for k in normalized if k)
        if not normalized:
            raise ValueError(f"profile {self.name!r} has no keywords")
        object.__setattr__(self, "keywords", normalized)

    @classmethod
    def load(cls, path: str | Path) -> "DomainProfile":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(data["name"], frozenset(data["keywords"]))


@dataclass(frozen=True)
class CorpusStats:
    mean: float
    sd: float
    corpus_size: int = 0

    def __post_init__(self) -> None:
        if self.sd < 0:
            raise ValueError(f"sd must be >= 0, got {self.sd}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def load(cls, path: str | Path) -> "CorpusStats":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(float(data["mean"]), float(data["sd"]), int(data.get("corpus_size", 0)))


@dataclass(frozen=True)
class ScoreBreakdown:
    km: float
    wm: float
    final_score: float
    diff: float
    rating: float
    matched: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        d = asdict(self)
        d["matched"] = list(self.matched)
        return d


def matched_keywords(doc_keywords: KeywordList, profile: DomainProfile) -> set[str]:
    return {t for t in doc_keywords.terms() if t in profile.keywords}


def keyword_match(doc_keywords: KeywordList, profile: DomainProfile) -> float:
    """Share of the document's LDA keywords that belong to the profile."""
    terms = set(doc_keywords.terms())
    if not terms:
        raise ValueError("document keyword list is empty")
    return len(terms & profile.keywords) / len(terms)


def within_match(doc_tokens: Sequence[str], matched: Iterable[str]) -> float:
    """Fraction of token positions occupied by matched keywords."""
    matched = set(matched)
    if not matched or not doc_tokens:
        return 0.0
    return sum(1 for t in doc_tokens if t in matched) / len(doc_tokens)


def final_score(km: float, wm: float) -> float:
    return km * wm


def corpus_stats(scores: Sequence[float]) -> CorpusStats:
    """Mean and population standard deviation of reference final scores."""
    if len(scores) < 2:
        raise ValueError(f"need at least two scores, got {len(scores)}")
    # statistics works in exact rationals, so identical scores give sd == 0.
    return CorpusStats(statistics.mean(scores), statistics.pstdev(scores), len(scores))


def standardized_diff(score: float, stats: CorpusStats) -> float:
    return (score - stats.mean) / stats.sd


def rating(score: float, stats: CorpusStats, allow_zero_sd: bool = False) -> float:
    """Clamp ``5 + (score - mean) / sd`` to [0, 10].

    A zero-variance reference corpus raises unless ``allow_zero_sd`` is set,
    in which case every resume gets the center rating.
    """
    if stats.sd == 0:
        if allow_zero_sd:
            return RATING_CENTER
        raise ZeroVarianceError("corpus score standard deviation is zero")
    return min(RATING_MAX, max(RATING_MIN, RATING_CENTER + standardized_diff(score, stats)))


def document_keywords(
    model: LdaModel,
    tokens: Sequence[str],
    n: int = 30,
    doc_index: int | None = None,
    seed: int = 0,
    iterations: int = 100,
) -> KeywordList:
    """Top-n LDA keywords for a training document or an unseen token list."""
    if doc_index is not None:
        theta = doc_topics(model, doc_index)
    else:
        theta = infer_unseen(model, to_bow(tokens, model.vocab), iterations=iterations, seed=seed)
    return keywords_for_mixture(model, theta, n)


def score_document(
    model: LdaModel,
    tokens: Sequence[str],
    profile: DomainProfile,
    n: int = 30,
    doc_index: int | None = None,
    seed: int = 0,
) -> tuple[float, float, set[str]]:
    """Return ``(km, wm, matched)`` for one document."""
    keywords = document_keywords(model, tokens, n, doc_index, seed)
    matched = matched_keywords(keywords, profile)
    return keyword_match(keywords, profile), within_match(tokens, matched), matched


def rate_resume(
    parsed: ParsedResume,
    model: LdaModel,
    tokens: Sequence[str],
    profile: DomainProfile,
    stats: CorpusStats,
    n: int = 30,
    doc_index: int | None = None,
    seed: int = 0,
    allow_zero_sd: bool = False,
) -> ScoreBreakdown:
    """Score one resume and store the rounded rating on ``parsed``."""
    km, wm, matched = score_document(model, tokens, profile, n, doc_index, seed)
    score = final_score(km, wm)
    diff = standardized_diff(score, stats) if stats.sd > 0 else 0.0
    value = rating(score, stats, allow_zero_sd)
    parsed.rating = round(value, 2)
    return ScoreBreakdown(km, wm, score, diff, value, tuple(sorted(matched)))
