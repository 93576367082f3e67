"""Text ingestion, tokenization and vocabulary building."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

# Trailing characters kept on a token so skill names like "c++" and "c#" survive.
_KEEP_TRAILING = frozenset("+#")


@dataclass(frozen=True)
class RawDocument:
    id: str
    filename: str
    text: str


@dataclass(frozen=True)
class TokenizedDocument:
    id: str
    tokens: list[str]


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index = {term: i for i, term in enumerate(self.terms)}
        if len(index) != len(self.terms):
            raise ValueError("vocabulary terms must be unique")
        object.__setattr__(self, "index", index)

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: object) -> bool:
        return term in self.index


def load_wordlist(path: str | Path) -> frozenset[str]:
    """Read a one-entry-per-line list, skipping blanks and ``#`` comments."""
    entries = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        entries.add(" ".join(line.lower().split()))
    return frozenset(entries)


def default_stopwords() -> frozenset[str]:
    with resources.as_file(resources.files("resume_rater") / "data" / "stopwords.txt") as p:
        return load_wordlist(p)


def _strip_token(raw: str) -> str:
    start, end = 0, len(raw)
    while start < end and not raw[start].isalnum():
        start += 1
    while end > start and not (raw[end - 1].isalnum() or raw[end - 1] in _KEEP_TRAILING):
        end -= 1
    return raw[start:end]


def tokenize(text: str, stopwords: Iterable[str] = frozenset()) -> list[str]:
    """Lowercase, split on whitespace, trim punctuation and drop stopwords.

    Interior punctuation is kept ("node.js", "ci/cd"); a trailing ``+`` or
    ``#`` is kept as well. Token order follows the text.
    """
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else frozenset(stopwords)
    tokens = []
    for raw in text.lower().split():
        token = _strip_token(raw)
        if token and token not in stop:
            tokens.append(token)
    return tokens


def tokenize_document(doc: RawDocument, stopwords: Iterable[str] = frozenset()) -> TokenizedDocument:
    return TokenizedDocument(doc.id, tokenize(doc.text, stopwords))


def build_vocabulary(docs: Iterable[Sequence[str]], min_count: int = 1) -> Vocabulary:
    """Keep terms with total frequency >= ``min_count``, in first-occurrence order."""
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    counts: Counter[str] = Counter()
    for doc in docs:
        counts.update(doc)
    # Counter preserves insertion order, i.e. first occurrence.
    return Vocabulary(tuple(t for t, c in counts.items() if c >= min_count))


def to_bow(doc: Sequence[str], vocab: Vocabulary) -> list[int]:
    """Map tokens to vocabulary indices, dropping out-of-vocabulary tokens."""
    index = vocab.index
    return [index[t] for t in doc if t in index]


def read_corpus(directory: str | Path) -> list[RawDocument]:
    """Load every ``.txt`` file in ``directory``; ids are filename stems, sorted."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {directory}")
    docs = []
    for path in sorted(directory.glob("*.txt")):
        docs.append(RawDocument(path.stem, path.name, path.read_text(encoding="utf-8")))
    return docs
