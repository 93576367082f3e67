"""Per-entity precision/recall/F1 for extracted resume entities."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from statistics import fmean
from typing import Iterable, Mapping

from .entities import Gazetteers, ParsedResume, extract_colleges, extract_degrees, normalize

ENTITY_TYPES = ("College Name", "Degree", "Email", "Location", "Name", "Skills")


class AlignmentError(ValueError):
    def __init__(self, missing: list[str], extra: list[str]):
        self.missing = missing
        self.extra = extra
        parts = []
        if missing:
            parts.append(f"no prediction for gold ids {missing}")
        if extra:
            parts.append(f"no gold annotation for predicted ids {extra}")
        super().__init__("; ".join(parts))


@dataclass(frozen=True)
class GoldAnnotation:
    doc_id: str
    entities: dict[str, frozenset[str]]

    def __post_init__(self) -> None:
        unknown = set(self.entities) - set(ENTITY_TYPES)
        if unknown:
            raise ValueError(f"unknown entity types {sorted(unknown)} in {self.doc_id!r}")
        object.__setattr__(
            self, "entities", {k: _normalized(v) for k, v in self.entities.items()}
        )


@dataclass(frozen=True)
class EntityMetrics:
    precision: float
    recall: float
    f1: float
    support: int = 0


@dataclass
class EvalReport:
    per_entity: dict[str, EntityMetrics]
    macro: EntityMetrics
    accuracy_all: float
    accuracy_skills: float
    num_documents: int = 0

    def to_dict(self) -> dict:
        return {
            "per_entity": {k: vars(m) for k, m in self.per_entity.items()},
            "macro": vars(self.macro),
            "accuracy_all": self.accuracy_all,
            "accuracy_skills": self.accuracy_skills,
            "num_documents": self.num_documents,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvalReport":
        return cls(
            per_entity={k: EntityMetrics(**m) for k, m in data["per_entity"].items()},
            macro=EntityMetrics(**data["macro"]),
            accuracy_all=data["accuracy_all"],
            accuracy_skills=data["accuracy_skills"],
            num_documents=data.get("num_documents", 0),
        )


def _normalized(values: Iterable[str]) -> frozenset[str]:
    return frozenset(v for v in (normalize(x) for x in values) if v)


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def evaluate_entity(predicted: Iterable[str], gold: Iterable[str]) -> EntityMetrics:
    """Set-based metrics; two empty sets count as a perfect match."""
    p, g = set(predicted), set(gold)
    if not p and not g:
        return EntityMetrics(1.0, 1.0, 1.0, 0)
    hits = len(p & g)
    precision = hits / len(p) if p else 0.0
    recall = hits / len(g) if g else 0.0
    return EntityMetrics(precision, recall, f1_score(precision, recall), len(g))


def resume_entities(parsed: ParsedResume, gazetteers: Gazetteers) -> dict[str, frozenset[str]]:
    """Normalized entity sets of a parsed resume, keyed by evaluation type."""
    return {
        "College Name": _normalized(extract_colleges(parsed.education, gazetteers.colleges)),
        "Degree": _normalized(extract_degrees(parsed.education, gazetteers.degrees)),
        "Email": _normalized([parsed.email] if parsed.email else []),
        "Location": _normalized([parsed.city] if parsed.city else []),
        "Name": _normalized([parsed.name] if parsed.name else []),
        "Skills": _normalized(parsed.skills),
    }


def evaluate_corpus(
    predictions: Mapping[str, ParsedResume | Mapping[str, Iterable[str]]],
    golds: Iterable[GoldAnnotation],
    gazetteers: Gazetteers | None = None,
) -> EvalReport:
    """Average per-resume metrics for each entity type over the corpus.

    ``predictions`` maps document ids to parsed resumes or to ready-made
    entity sets.  Resume order never affects the result.
    """
    golds = list(golds)
    gold_ids = [g.doc_id for g in golds]
    missing = sorted(set(gold_ids) - set(predictions))
    extra = sorted(set(predictions) - set(gold_ids))
    if missing or extra:
        raise AlignmentError(missing, extra)
    if len(set(gold_ids)) != len(gold_ids):
        raise ValueError("duplicate gold doc ids")

    per_doc: dict[str, list[EntityMetrics]] = {t: [] for t in ENTITY_TYPES}
    exact = {t: 0 for t in ENTITY_TYPES}
    for gold in sorted(golds, key=lambda g: g.doc_id):
        pred = predictions[gold.doc_id]
        if isinstance(pred, ParsedResume):
            pred_sets = resume_entities(pred, gazetteers or Gazetteers.default())
        else:
            pred_sets = {t: _normalized(v) for t, v in pred.items()}
        for t in ENTITY_TYPES:
            p = pred_sets.get(t, frozenset())
            g = gold.entities.get(t, frozenset())
            per_doc[t].append(evaluate_entity(p, g))
            exact[t] += p == g

    n = len(golds)
    if n == 0:
        return EvalReport({}, EntityMetrics(0.0, 0.0, 0.0, 0), 0.0, 0.0, 0)
    per_entity = {
        t: EntityMetrics(
            fmean(m.precision for m in ms),
            fmean(m.recall for m in ms),
            fmean(m.f1 for m in ms),
            sum(m.support for m in ms),
        )
        for t, ms in per_doc.items()
    }
    macro = EntityMetrics(
        fmean(m.precision for m in per_entity.values()),
        fmean(m.recall for m in per_entity.values()),
        fmean(m.f1 for m in per_entity.values()),
        sum(m.support for m in per_entity.values()),
    )
    return EvalReport(
        per_entity=per_entity,
        macro=macro,
        accuracy_all=sum(exact.values()) / (n * len(ENTITY_TYPES)),
        accuracy_skills=exact["Skills"] / n,
        num_documents=n,
    )


def render_report(report: EvalReport, summary: bool = False) -> str:
    """Fixed-width table, one row per entity type, three decimals."""
    lines = [f"{'Entity':<14}{'precision':>11}{'recall':>9}{'F1-score':>10}"]
    ordered = [t for t in ENTITY_TYPES if t in report.per_entity]
    ordered += sorted(t for t in report.per_entity if t not in ENTITY_TYPES)
    for t in ordered:
        m = report.per_entity[t]
        lines.append(f"{t:<14}{m.precision:>11.3f}{m.recall:>9.3f}{m.f1:>10.3f}")
    if summary and report.per_entity:
        m = report.macro
        lines.append("")
        lines.append(f"{'macro avg':<14}{m.precision:>11.3f}{m.recall:>9.3f}{m.f1:>10.3f}")
        lines.append(f"accuracy (all entities): {report.accuracy_all:.3f}")
        lines.append(f"accuracy (skills only):  {report.accuracy_skills:.3f}")
    return "\n".join(lines) + "\n"


def load_gold(path: str | Path) -> list[GoldAnnotation]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [
        GoldAnnotation(item["doc_id"], {k: frozenset(v) for k, v in item["entities"].items()})
        for item in data
    ]
