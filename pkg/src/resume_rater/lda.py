"""Latent Dirichlet Allocation trained by collapsed Gibbs sampling.

The sampler works on a flat token layout: ``words[i]`` is the vocabulary
index of token ``i`` and ``docs[i]`` the document it belongs to.  Each sweep
draws one block of uniforms from a seeded ``numpy`` generator and the
compiled kernel consumes them in token order, so a (corpus, config) pair
always yields the same model.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numba
import numpy as np

from .corpus import Vocabulary

ROW_SUM_TOL = 1e-9


class EmptyCorpusError(ValueError):
    pass


class EmptyDocumentError(ValueError):
    pass


@dataclass(frozen=True)
class LdaConfig:
    K: int
    alpha: float | None = None  # None -> 50 / K
    eta: float = 0.01
    iterations: int = 1000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.alpha is None:
            object.__setattr__(self, "alpha", 50.0 / self.K if self.K >= 1 else None)
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if not self.eta > 0:
            raise ValueError(f"eta must be > 0, got {self.eta}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")


@dataclass(frozen=True)
class SamplerCounts:
    topic_word: np.ndarray  # K x V
    doc_topic: np.ndarray  # D x K
    topic_totals: np.ndarray  # K


@dataclass(frozen=True)
class KeywordList:
    entries: list[tuple[str, float]]
    n: int

    def terms(self) -> list[str]:
        return [t for t, _ in self.entries]


@dataclass
class LdaModel:
    config: LdaConfig
    vocab: Vocabulary
    topic_word: np.ndarray
    doc_topic: np.ndarray
    doc_ids: list[str] = field(default_factory=list)
    assignments: list[np.ndarray] | None = None
    counts: SamplerCounts | None = None

    @property
    def num_topics(self) -> int:
        return self.topic_word.shape[0]

    @property
    def num_docs(self) -> int:
        return self.doc_topic.shape[0]

    def doc_index(self, doc_id: str) -> int:
        try:
            return self.doc_ids.index(doc_id)
        except ValueError:
            raise KeyError(f"unknown document id {doc_id!r}") from None

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "vocabulary": list(self.vocab.terms),
            "doc_ids": list(self.doc_ids),
            "topic_word": self.topic_word.tolist(),
            "doc_topic": self.doc_topic.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LdaModel":
        config = LdaConfig(**data["config"])
        vocab = Vocabulary(tuple(data["vocabulary"]))
        topic_word = np.asarray(data["topic_word"], dtype=np.float64)
        doc_topic = np.asarray(data["doc_topic"], dtype=np.float64)
        if topic_word.shape != (config.K, len(vocab)):
            raise ValueError(f"topic_word shape {topic_word.shape} != ({config.K}, {len(vocab)})")
        if doc_topic.ndim != 2 or doc_topic.shape[1] != config.K:
            raise ValueError(f"doc_topic shape {doc_topic.shape} does not have {config.K} columns")
        _check_stochastic(topic_word, "topic_word")
        _check_stochastic(doc_topic, "doc_topic")
        doc_ids = list(data.get("doc_ids") or [str(i) for i in range(doc_topic.shape[0])])
        return cls(config, vocab, topic_word, doc_topic, doc_ids)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "LdaModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _check_stochastic(m: np.ndarray, name: str) -> None:
    if np.any(m < 0):
        raise ValueError(f"{name} has negative entries")
    bad = np.flatnonzero(np.abs(m.sum(axis=1) - 1.0) > ROW_SUM_TOL)
    if bad.size:
        raise ValueError(f"{name} rows {bad.tolist()} do not sum to 1")


# -- sampling kernel ---------------------------------------------------------


@numba.njit(cache=True)
def _conditional_into(out, doc_topic_row, topic_word, topic_totals, w, alpha, eta, v_eta):
    total = 0.0
    for k in range(out.shape[0]):
        p = (doc_topic_row[k] + alpha) * (topic_word[k, w] + eta) / (topic_totals[k] + v_eta)
        out[k] = p
        total += p
    return total


@numba.njit(cache=True)
def _draw(weights, total, u):
    target = u * total
    acc = 0.0
    last = weights.shape[0] - 1
    for k in range(last):
        acc += weights[k]
        if target < acc:
            return k
    return last


@numba.njit(cache=True)
def _sweep(words, docs, z, topic_word, doc_topic, topic_totals, alpha, eta, uniforms):
    num_topics = topic_word.shape[0]
    v_eta = topic_word.shape[1] * eta
    weights = np.empty(num_topics)
    for i in range(words.shape[0]):
        w = words[i]
        d = docs[i]
        k = z[i]
        doc_topic[d, k] -= 1
        topic_word[k, w] -= 1
        topic_totals[k] -= 1
        total = _conditional_into(weights, doc_topic[d], topic_word, topic_totals, w, alpha, eta, v_eta)
        k = _draw(weights, total, uniforms[i])
        z[i] = k
        doc_topic[d, k] += 1
        topic_word[k, w] += 1
        topic_totals[k] += 1


@numba.njit(cache=True)
def _fold_in_sweep(words, z, doc_counts, topic_word, alpha, uniforms):
    num_topics = topic_word.shape[0]
    weights = np.empty(num_topics)
    for i in range(words.shape[0]):
        w = words[i]
        doc_counts[z[i]] -= 1
        total = 0.0
        for k in range(num_topics):
            p = (doc_counts[k] + alpha) * topic_word[k, w]
            weights[k] = p
            total += p
        k = _draw(weights, total, uniforms[i])
        z[i] = k
        doc_counts[k] += 1


def gibbs_conditional(
    counts: SamplerCounts, d: int, w: int, alpha: float, eta: float
) -> np.ndarray:
    """Normalized collapsed-Gibbs conditional over topics for word ``w`` in doc ``d``.

    ``counts`` must already exclude the token being resampled.
    """
    num_topics, vocab_size = counts.topic_word.shape
    out = np.empty(num_topics)
    total = _conditional_into(
        out,
        np.asarray(counts.doc_topic[d], dtype=np.float64),
        np.asarray(counts.topic_word, dtype=np.float64),
        np.asarray(counts.topic_totals, dtype=np.float64),
        w,
        float(alpha),
        float(eta),
        vocab_size * float(eta),
    )
    return out / total


def counts_from_assignments(
    corpus: Sequence[Sequence[int]], assignments: Sequence[np.ndarray], num_topics: int, vocab_size: int
) -> SamplerCounts:
    topic_word = np.zeros((num_topics, vocab_size), dtype=np.int64)
    doc_topic = np.zeros((len(corpus), num_topics), dtype=np.int64)
    for d, (doc, z) in enumerate(zip(corpus, assignments)):
        for w, k in zip(doc, z):
            topic_word[k, w] += 1
            doc_topic[d, k] += 1
    return SamplerCounts(topic_word, doc_topic, topic_word.sum(axis=1))


# -- training and inference ------------------------------------------------


def train(
    corpus: Sequence[Sequence[int]],
    config: LdaConfig,
    vocab: Vocabulary | None = None,
    doc_ids: Sequence[str] | None = None,
) -> LdaModel:
    """Fit topic-word and document-topic distributions by collapsed Gibbs sampling.

    ``corpus`` holds one vocabulary-index sequence per document.  When
    ``vocab`` is omitted the vocabulary size is taken as one past the largest
    index and terms are named by their index.
    """
    if len(corpus) == 0:
        raise EmptyCorpusError("cannot train on an empty corpus")
    lengths = np.array([len(doc) for doc in corpus], dtype=np.int64)
    words = np.fromiter((w for doc in corpus for w in doc), dtype=np.int64, count=int(lengths.sum()))
    if words.size == 0:
        raise EmptyCorpusError("corpus has no tokens after vocabulary filtering")
    if vocab is None:
        vocab = Vocabulary(tuple(str(i) for i in range(int(words.max()) + 1)))
    V = len(vocab)
    if V == 0:
        raise EmptyCorpusError("vocabulary is empty")
    if words.min() < 0 or words.max() >= V:
        raise ValueError("corpus contains indices outside the vocabulary")
    if doc_ids is None:
        doc_ids = [str(i) for i in range(len(corpus))]
    elif len(doc_ids) != len(corpus):
        raise ValueError("doc_ids must align with corpus")

    K, alpha, eta = config.K, float(config.alpha), float(config.eta)
    D = len(corpus)
    docs = np.repeat(np.arange(D, dtype=np.int64), lengths)

    rng = np.random.default_rng(config.seed)
    z = rng.integers(K, size=words.size, dtype=np.int64)
    topic_word = np.zeros((K, V), dtype=np.int64)
    doc_topic = np.zeros((D, K), dtype=np.int64)
    np.add.at(topic_word, (z, words), 1)
    np.add.at(doc_topic, (docs, z), 1)
    topic_totals = topic_word.sum(axis=1)

    for _ in range(config.iterations):
        _sweep(words, docs, z, topic_word, doc_topic, topic_totals, alpha, eta, rng.random(words.size))

    phi = (topic_word + eta) / (topic_totals[:, None] + V * eta)
    theta = (doc_topic + alpha) / (lengths[:, None] + K * alpha)
    splits = np.cumsum(lengths)[:-1]
    return LdaModel(
        config=config,
        vocab=vocab,
        topic_word=phi,
        doc_topic=theta,
        doc_ids=list(doc_ids),
        assignments=np.split(z, splits),
        counts=SamplerCounts(topic_word, doc_topic, topic_totals),
    )


def doc_topics(model: LdaModel, d: int) -> np.ndarray:
    if not 0 <= d < model.num_docs:
        raise IndexError(f"document index {d} out of range for {model.num_docs} documents")
    return model.doc_topic[d]


def infer_unseen(model: LdaModel, doc: Sequence[int], iterations: int = 100, seed: int = 0) -> np.ndarray:
    """Fold-in Gibbs estimate of a new document's topic mixture.

    Topic-word probabilities stay fixed at the trained values; only the
    document's own assignments are resampled.
    """
    words = np.asarray(doc, dtype=np.int64)
    if words.size == 0:
        raise EmptyDocumentError("document has no in-vocabulary tokens")
    V = model.topic_word.shape[1]
    if words.min() < 0 or words.max() >= V:
        raise ValueError("document contains indices outside the vocabulary")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    K, alpha = model.num_topics, float(model.config.alpha)
    rng = np.random.default_rng(seed)
    z = rng.integers(K, size=words.size, dtype=np.int64)
    doc_counts = np.bincount(z, minlength=K).astype(np.int64)
    phi = np.ascontiguousarray(model.topic_word, dtype=np.float64)
    for _ in range(iterations):
        _fold_in_sweep(words, z, doc_counts, phi, alpha, rng.random(words.size))
    return (doc_counts + alpha) / (words.size + K * alpha)


def keywords_for_mixture(model: LdaModel, theta: np.ndarray, n: int = 30) -> KeywordList:
    """Top-``n`` terms of P(term) = sum_z phi[z, term] * theta[z]; ties go to the lower index."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    probs = np.asarray(theta, dtype=np.float64) @ model.topic_word
    # Stable sort on negated probabilities keeps ties in vocabulary order.
    order = np.argsort(-probs, kind="stable")[:n]
    terms = model.vocab.terms
    return KeywordList([(terms[i], float(probs[i])) for i in order], n)


def top_keywords(model: LdaModel, d: int, n: int = 30) -> KeywordList:
    return keywords_for_mixture(model, doc_topics(model, d), n)


def top_topic_terms(model: LdaModel, k: int, n: int = 30) -> list[tuple[str, float]]:
    row = model.topic_word[k]
    order = np.argsort(-row, kind="stable")[:n]
    return [(model.vocab.terms[i], float(row[i])) for i in order]
