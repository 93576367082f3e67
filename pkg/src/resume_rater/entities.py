"""Rule and gazetteer based entity extraction for plain-text resumes."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import RawDocument, load_wordlist

YearMonth = tuple[int, int]

# Fixed resolution for "Present" so parsing never depends on the wall clock.
DEFAULT_REFERENCE_DATE: YearMonth = (2024, 1)

GAZETTEER_KINDS = ("skills", "cities", "colleges", "degrees")


class MalformedRangeError(ValueError):
    """A date range whose start falls after its end."""


@dataclass(frozen=True)
class Gazetteer:
    kind: str
    entries: frozenset[str]
    _pattern: re.Pattern = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.kind not in GAZETTEER_KINDS:
            raise ValueError(f"unknown gazetteer kind {self.kind!r}")
        if not self.entries:
            raise ValueError(f"{self.kind} gazetteer is empty")
        normalized = frozenset(" ".join(e.lower().split()) for e in self.entries)
        object.__setattr__(self, "entries", normalized)
        # Longest entries first so the alternation prefers "new york city"
        # over "new york" at the same offset.
        alternatives = sorted(normalized, key=lambda e: (-len(e), e))
        body = "|".join(r"\s+".join(map(re.escape, e.split())) for e in alternatives)
        object.__setattr__(
            self, "_pattern", re.compile(rf"(?<![^\W_])(?:{body})(?![^\W_])", re.IGNORECASE)
        )

    @classmethod
    def from_file(cls, kind: str, path: str | Path) -> "Gazetteer":
        return cls(kind, load_wordlist(path))

    def finditer(self, text: str) -> Iterable[tuple[int, int, str]]:
        """Yield ``(start, end, entry)`` for non-overlapping whole-word hits."""
        for m in self._pattern.finditer(text):
            yield m.start(), m.end(), " ".join(m.group(0).lower().split())


@dataclass(frozen=True)
class Gazetteers:
    skills: Gazetteer
    cities: Gazetteer
    colleges: Gazetteer
    degrees: Gazetteer

    @classmethod
    def from_dir(cls, directory: str | Path) -> "Gazetteers":
        directory = Path(directory)
        return cls(*(Gazetteer.from_file(k, directory / f"{k}.txt") for k in GAZETTEER_KINDS))

    @classmethod
    def default(cls) -> "Gazetteers":
        with resources.as_file(resources.files("resume_rater") / "data" / "gazetteers") as p:
            return cls.from_dir(p)


@dataclass(frozen=True, order=True)
class DateRange:
    start: YearMonth
    end: YearMonth

    def __post_init__(self) -> None:
        for ym in (self.start, self.end):
            if not 1 <= ym[1] <= 12:
                raise ValueError(f"month out of range in {ym}")
        if self.start > self.end:
            raise MalformedRangeError(
                f"range starts {self.start[0]}-{self.start[1]:02d} after it ends "
                f"{self.end[0]}-{self.end[1]:02d}"
            )

    @property
    def months(self) -> int:
        return (self.end[0] - self.start[0]) * 12 + (self.end[1] - self.start[1])


@dataclass
class ParsedResume:
    name: str
    email: str | None = None
    number: str | None = None
    city: str | None = None
    work_exp: list[str] = field(default_factory=list)
    education: list[str] = field(default_factory=list)
    work_duration: int = 0
    education_duration: int = 0
    skills: list[str] = field(default_factory=list)
    rating: float | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "email": self.email,
            "number": self.number,
            "city": self.city,
            "work_exp": list(self.work_exp),
            "education": list(self.education),
            "work_duration": format_duration(self.work_duration),
            "education_duration": format_duration(self.education_duration),
            "skills": ", ".join(self.skills),
            "rating": None if self.rating is None else round(self.rating, 2),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ParsedResume":
        skills = data.get("skills") or []
        if isinstance(skills, str):
            skills = [s.strip() for s in skills.split(",") if s.strip()]
        return cls(
            name=data["name"],
            email=data.get("email"),
            number=data.get("number"),
            city=data.get("city"),
            work_exp=list(data.get("work_exp") or []),
            education=list(data.get("education") or []),
            work_duration=parse_duration(data.get("work_duration") or "0 years 0 months"),
            education_duration=parse_duration(data.get("education_duration") or "0 years 0 months"),
            skills=skills,
            rating=data.get("rating"),
        )


# -- durations ---------------------------------------------------------------

_DURATION_RE = re.compile(r"^\s*(\d+)\s+years?\s+(\d+)\s+months?\s*$")


def format_duration(months: int) -> str:
    years, rem = divmod(months, 12)
    return f"{years} years {rem} months"


def parse_duration(text: str) -> int:
    m = _DURATION_RE.match(text)
    if not m:
        raise ValueError(f"not a duration: {text!r}")
    return int(m.group(1)) * 12 + int(m.group(2))


def total_duration(ranges: Iterable[DateRange]) -> int:
    """Months covered by the union of ``ranges``.

    Each range is treated as the half-open month interval [start, end), so
    back-to-back jobs add up and concurrent ones are counted once.
    """
    spans = sorted(
        (s[0] * 12 + s[1] - 1, e[0] * 12 + e[1] - 1) for s, e in ((r.start, r.end) for r in ranges)
    )
    total = 0
    cur_start = cur_end = None
    for start, end in spans:
        if cur_end is None or start > cur_end:
            if cur_end is not None:
                total += cur_end - cur_start
            cur_start, cur_end = start, end
        else:
            cur_end = max(cur_end, end)
    if cur_end is not None:
        total += cur_end - cur_start
    return total


# -- contact fields ----------------------------------------------------------

_EMAIL_RE = re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,}")
_PHONE_RUN_RE = re.compile(r"(?<![\w+])(?:\+\s?)?\(?\d[\d().\- ]*")


def extract_email(text: str) -> str | None:
    m = _EMAIL_RE.search(text)
    return m.group(0) if m else None


def extract_phone(text: str, min_digits: int = 10, max_digits: int = 13) -> str | None:
    """First phone-like run with ``min_digits``..``max_digits`` digits, verbatim.

    A run of digits and separators is trimmed back, group by group, until
    its digit count fits; trimming never splits a digit group.
    """
    for m in _PHONE_RUN_RE.finditer(text):
        run = m.group(0)
        ends = [i + 1 for i, ch in enumerate(run) if ch.isdigit() and (i + 1 == len(run) or not run[i + 1].isdigit())]
        for end in reversed(ends):
            candidate = run[:end]
            digits = sum(ch.isdigit() for ch in candidate)
            if digits < min_digits:
                break
            if digits <= max_digits and _balanced(candidate):
                return candidate
    return None


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


def extract_name(filename: str, text: str = "") -> str:
    base = Path(filename).name
    stem = base.rsplit(".", 1)[0] if "." in base else base
    words = re.sub(r"[_\-.]+", " ", stem).split()
    if words:
        return " ".join(w.title() for w in words)
    for line in text.splitlines():
        if line.strip():
            return line.strip()
    return ""


_LOWER_WORDS = frozenset({"of", "and", "at", "in", "on", "the", "for"})


def display_form(entry: str) -> str:
    """Capitalize each word: "node.js" -> "Node.js", "university of x" -> "University of X"."""
    words = entry.split()
    return " ".join(
        w if i and w in _LOWER_WORDS else w[:1].upper() + w[1:] for i, w in enumerate(words)
    )


def extract_city(text: str, cities: Gazetteer) -> str | None:
    for _, _, entry in cities.finditer(text):
        return display_form(entry)
    return None


def extract_skills(text: str, skills: Gazetteer) -> list[str]:
    seen: dict[str, str] = {}
    for _, _, entry in skills.finditer(text):
        seen.setdefault(entry, display_form(entry))
    return list(seen.values())


# -- sections ----------------------------------------------------------------

PREAMBLE = "preamble"

_SECTION_KEYWORDS = {
    "work": {"work", "experience", "employment", "career"},
    "education": {"education", "academic", "academics", "qualifications"},
    "skills": {"skills", "technologies", "competencies", "expertise"},
    "other": {
        "projects", "summary", "objective", "profile", "certifications", "awards",
        "interests", "hobbies", "languages", "references", "publications", "activities",
        "achievements", "volunteer", "contact",
    },
}
_HEADER_FILLER = {
    "and", "&", "history", "professional", "technical", "relevant", "key", "core",
    "background", "training", "tools", "personal", "information", "details", "other",
    "additional", "academic",
}
_HEADER_WORDS = set().union(*_SECTION_KEYWORDS.values(), _HEADER_FILLER)


def section_label(line: str) -> str | None:
    """Section label for a header line, or None for ordinary content."""
    words = re.sub(r"[^\w&\s]", " ", line.lower()).split()
    if not words or len(words) > 4 or not set(words) <= _HEADER_WORDS:
        return None
    for label, keywords in _SECTION_KEYWORDS.items():
        if keywords & set(words):
            return label
    return None


def segment_sections(text: str) -> dict[str, list[str]]:
    sections: dict[str, list[str]] = {PREAMBLE: []}
    current = PREAMBLE
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        label = section_label(stripped)
        if label is not None:
            current = label
            sections.setdefault(label, [])
        else:
            sections[current].append(stripped)
    return sections


# -- dates -------------------------------------------------------------------

_MONTHS = {
    name: i
    for i, names in enumerate(
        [
            ("january", "jan"), ("february", "feb"), ("march", "mar"), ("april", "apr"),
            ("may",), ("june", "jun"), ("july", "jul"), ("august", "aug"),
            ("september", "sept", "sep"), ("october", "oct"), ("november", "nov"),
            ("december", "dec"),
        ],
        start=1,
    )
    for name in names
}
_MONTH_ALT = "|".join(sorted(_MONTHS, key=len, reverse=True))
_RANGE_RE = re.compile(
    rf"\b({_MONTH_ALT})\.?\s+(\d{{4}})\s*[-–—]\s*"
    rf"(?:({_MONTH_ALT})\.?\s+(\d{{4}})|(present|current|now))\b",
    re.IGNORECASE,
)


def parse_date_range(line: str, reference: YearMonth = DEFAULT_REFERENCE_DATE) -> DateRange | None:
    m = _RANGE_RE.search(line)
    if not m:
        return None
    start = (int(m.group(2)), _MONTHS[m.group(1).lower()])
    if m.group(5):
        end = reference
    else:
        end = (int(m.group(4)), _MONTHS[m.group(3).lower()])
    return DateRange(start, end)


def section_duration(lines: Sequence[str], reference: YearMonth = DEFAULT_REFERENCE_DATE) -> int:
    ranges = [r for r in (parse_date_range(line, reference) for line in lines) if r is not None]
    return total_duration(ranges)


# -- education ---------------------------------------------------------------

_DEGREE_TAIL_STOP = re.compile(r"\s*(?:,|\||;|\s-\s|\s–\s|\sat\s|\(|$)")
_COLLEGE_HINT = re.compile(r"\b(university|college|institute|school)\b", re.IGNORECASE)


def extract_degrees(lines: Sequence[str], degrees: Gazetteer) -> list[str]:
    """Degree marker plus field-of-study tail, e.g. "B.S. Computer Science"."""
    found: dict[str, str] = {}
    for line in lines:
        for start, _, _ in degrees.finditer(line):
            tail = line[start:]
            stop = _DEGREE_TAIL_STOP.search(tail, 1)
            value = tail[: stop.start()].strip() if stop else tail.strip()
            found.setdefault(normalize(value), value)
            break
    return list(found.values())


def extract_colleges(lines: Sequence[str], colleges: Gazetteer) -> list[str]:
    """Gazetteer hits, falling back to lines naming a university or college."""
    found: dict[str, str] = {}
    for line in lines:
        hits = [entry for _, _, entry in colleges.finditer(line)]
        if hits:
            for entry in hits:
                found.setdefault(entry, display_form(entry))
        elif _COLLEGE_HINT.search(line) and parse_date_range(line) is None:
            value = line.split(",")[0].strip()
            found.setdefault(normalize(value), value)
    return list(found.values())


def normalize(value: str) -> str:
    return " ".join(value.lower().split())


# -- composition -------------------------------------------------------------


def parse_resume(
    raw: RawDocument,
    gazetteers: Gazetteers,
    reference: YearMonth = DEFAULT_REFERENCE_DATE,
) -> ParsedResume:
    text = raw.text
    sections = segment_sections(text)
    work = sections.get("work", [])
    education = sections.get("education", [])
    return ParsedResume(
        name=extract_name(raw.filename, text),
        email=extract_email(text),
        number=extract_phone(text),
        city=extract_city(text, gazetteers.cities),
        work_exp=list(work),
        education=list(education),
        work_duration=section_duration(work, reference),
        education_duration=section_duration(education, reference),
        skills=extract_skills(text, gazetteers.skills),
    )
