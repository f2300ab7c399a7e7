import csv
import logging
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Tuple, Union

from ayat.errors import (
    ConfigError,
    CorpusIncomplete,
    DuplicateVerse,
    MalformedLine,
    RecordFileError,
    UnknownCategory,
    UnknownVerseRef,
)
from ayat.normalizer import normalize

logger = logging.getLogger(__name__)

SURA_COUNT = 114
VERSE_COUNT = 6236

AYAH_COUNTS: Tuple[int, ...] = (
    7, 286, 200, 176, 120, 165, 206, 75, 129, 109, 123, 111, 43, 52, 99, 128,
    111, 110, 98, 135, 112, 78, 118, 64, 77, 227, 93, 88, 69, 60, 34, 30, 73,
    54, 45, 83, 182, 88, 75, 85, 54, 53, 89, 59, 37, 35, 38, 29, 18, 45, 60,
    49, 62, 55, 78, 96, 29, 22, 24, 13, 14, 11, 11, 18, 12, 12, 30, 52, 52,
    44, 28, 28, 20, 56, 40, 31, 50, 40, 46, 42, 29, 19, 36, 25, 22, 17, 19,
    26, 30, 20, 15, 21, 11, 8, 8, 19, 5, 8, 8, 11, 11, 8, 3, 9, 5, 4, 7, 3,
    6, 3, 5, 4, 5, 6,
)


def canonical_ayah_count(sura: int) -> int:
    if not 1 <= sura <= SURA_COUNT:
        raise UnknownVerseRef(f"{sura}:?")
    return AYAH_COUNTS[sura - 1]


@dataclass(frozen=True, order=True)
class VerseRef:
    sura: int
    ayah: int

    def __post_init__(self) -> None:
        if not 1 <= self.sura <= SURA_COUNT:
            raise UnknownVerseRef(f"{self.sura}:{self.ayah}")
        if not 1 <= self.ayah <= AYAH_COUNTS[self.sura - 1]:
            raise UnknownVerseRef(f"{self.sura}:{self.ayah}")

    @classmethod
    def parse(cls, text: str) -> "VerseRef":
        """Parse ``"2:255"`` (surrounding parentheses allowed)."""
        sura, _, ayah = text.strip().strip("()").partition(":")
        try:
            return cls(int(sura), int(ayah))
        except ValueError as e:
            raise UnknownVerseRef(text) from e

    def __str__(self) -> str:
        return f"{self.sura}:{self.ayah}"


class Category(str, Enum):
    HereafterUnseens = "HereafterUnseens"
    StoriesOfProphets = "StoriesOfProphets"
    Disbelievers = "Disbelievers"
    ShariaLaw = "ShariaLaw"
    Jihad = "Jihad"
    UniverseCreation = "UniverseCreation"
    Worship = "Worship"
    BeliefBelievers = "BeliefBelievers"
    AboutQuran = "AboutQuran"
    Muhammad = "Muhammad"
    God = "God"
    Sins = "Sins"
    HumanBeing = "HumanBeing"
    General = "General"

    @property
    def display_name(self) -> str:
        return _DISPLAY_NAMES[self]

    @classmethod
    def lookup(cls, name: str) -> "Category":
        """Resolve an identifier or display name, ignoring case and spacing."""
        key = _category_key(name)
        try:
            return _CATEGORY_KEYS[key]
        except KeyError:
            raise UnknownCategory(name) from None

    def __str__(self) -> str:
        return self.value


_DISPLAY_NAMES = {
    Category.HereafterUnseens: "Hereafter & Unseens",
    Category.StoriesOfProphets: "Stories of Prophets",
    Category.Disbelievers: "Disbelievers",
    Category.ShariaLaw: "Sharia Law",
    Category.Jihad: "Jihad",
    Category.UniverseCreation: "Universe & Creation",
    Category.Worship: "Worship",
    Category.BeliefBelievers: "Belief & Believers",
    Category.AboutQuran: "About Quran",
    Category.Muhammad: "Muhammad",
    Category.God: "God",
    Category.Sins: "Sins",
    Category.HumanBeing: "Human Being",
    Category.General: "General",
}


def _category_key(name: str) -> str:
    return "".join(ch for ch in name.lower() if ch.isalnum())


_CATEGORY_KEYS = {}
for _category in Category:
    _CATEGORY_KEYS[_category_key(_category.value)] = _category
    _CATEGORY_KEYS[_category_key(_DISPLAY_NAMES[_category])] = _category

GENERAL_ONLY: FrozenSet[Category] = frozenset({Category.General})

_CATEGORY_ORDER = {category: position for position, category in enumerate(Category)}


def sorted_categories(categories: Iterable[Category]) -> Tuple[Category, ...]:
    """Categories in table order (HereafterUnseens first, General last)."""
    return tuple(sorted(set(categories), key=_CATEGORY_ORDER.__getitem__))


@dataclass(frozen=True)
class Verse:
    ref: VerseRef
    raw_text: str
    norm_tokens: Tuple[str, ...]
    categories: FrozenSet[Category] = GENERAL_ONLY

    @classmethod
    def from_text(cls, ref: VerseRef, raw_text: str) -> "Verse":
        return cls(ref, raw_text, tuple(normalize(raw_text).split()))

    @property
    def norm_text(self) -> str:
        return " ".join(self.norm_tokens)


@dataclass(frozen=True)
class QuranCorpus:
    verses: Mapping[VerseRef, Verse]
    by_sura: Tuple[Tuple[Verse, ...], ...]
    source_format: str = "tanzil-pipe"

    @classmethod
    def from_verses(cls, verses: List[Verse], source_format: str = "tanzil-pipe") -> "QuranCorpus":
        ordered = sorted(verses, key=lambda v: v.ref)
        suras: List[List[Verse]] = [[] for _ in range(SURA_COUNT)]
        for verse in ordered:
            suras[verse.ref.sura - 1].append(verse)
        return cls(
            verses=MappingProxyType({v.ref: v for v in ordered}),
            by_sura=tuple(tuple(s) for s in suras),
            source_format=source_format,
        )

    def __len__(self) -> int:
        return len(self.verses)

    def __iter__(self) -> Iterator[Verse]:
        for sura in self.by_sura:
            yield from sura

    def __contains__(self, ref: object) -> bool:
        return ref in self.verses

    def verse(self, ref: VerseRef) -> Verse:
        try:
            return self.verses[ref]
        except KeyError:
            raise UnknownVerseRef(ref) from None

    def verses_of(self, sura: int) -> Tuple[Verse, ...]:
        canonical_ayah_count(sura)
        return self.by_sura[sura - 1]

    @property
    def sura_count(self) -> int:
        return sum(1 for sura in self.by_sura if sura)


LineParser = Callable[[str], Tuple[str, str, str]]


def _parse_pipe(line: str) -> Tuple[str, str, str]:
    sura, ayah, text = line.split("|", 2)
    return sura, ayah, text


def _parse_tsv(line: str) -> Tuple[str, str, str]:
    sura, ayah, text = line.split("\t", 2)
    return sura, ayah, text


CORPUS_FORMATS: Dict[str, LineParser] = {
    "tanzil-pipe": _parse_pipe,
    "tsv": _parse_tsv,
}


def load_corpus(
    quran_file: Union[str, Path],
    format: str = "tanzil-pipe",
    allow_incomplete: bool = False,
) -> QuranCorpus:
    """Read one verse per line and normalize every verse.

    Blank lines and ``#`` comment lines are skipped. A corpus that does not
    hold all 6,236 verses raises ``CorpusIncomplete`` unless
    ``allow_incomplete`` is set, in which case it is logged and kept.
    """
    if format not in CORPUS_FORMATS:
        raise ConfigError(f"Unknown corpus format {format!r}; known: {sorted(CORPUS_FORMATS)}")
    parse = CORPUS_FORMATS[format]
    path = Path(quran_file)

    verses: Dict[VerseRef, Verse] = {}
    try:
        with path.open(encoding="utf-8-sig") as fh:
            for line_no, line in enumerate(fh, 1):
                line = line.rstrip("\r\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                try:
                    sura, ayah, text = parse(line)
                    ref = VerseRef(int(sura), int(ayah))
                except (ValueError, UnknownVerseRef) as e:
                    raise MalformedLine(line_no, line, str(path)) from e

                verse = Verse.from_text(ref, text.strip())
                if not verse.norm_tokens:
                    raise MalformedLine(line_no, line, str(path))
                if ref in verses:
                    raise DuplicateVerse(ref, line_no)
                verses[ref] = verse
    except OSError as e:
        raise RecordFileError(path) from e

    if len(verses) != VERSE_COUNT:
        if not allow_incomplete or not verses:
            raise CorpusIncomplete(len(verses))
        logger.warning("Loaded incomplete corpus from %s: %d verses", path, len(verses))

    corpus = QuranCorpus.from_verses(list(verses.values()), source_format=format)
    logger.info("Loaded %d verses in %d suras from %s", len(corpus), corpus.sura_count, path)
    return corpus


def _is_header(row: List[str]) -> bool:
    return bool(row) and not row[0].strip().isdigit()


def _parse_categories(cell: str, line_no: int) -> FrozenSet[Category]:
    categories = set()
    for name in cell.split(";"):
        # "Worship/Prayer": the subcategory is not modeled.
        main = name.split("/", 1)[0].strip()
        if not main:
            continue
        try:
            category = Category.lookup(main)
        except UnknownCategory:
            raise UnknownCategory(main, line_no) from None
        if category is Category.General:
            raise UnknownCategory(main, line_no)
        categories.add(category)
    return frozenset(categories)


def load_categories(category_file: Union[str, Path], corpus: QuranCorpus) -> QuranCorpus:
    """Attach expert categories; every unlisted verse gets exactly {General}."""
    path = Path(category_file)
    assigned: Dict[VerseRef, set] = {}

    try:
        with path.open(encoding="utf-8-sig", newline="") as fh:
            for line_no, row in enumerate(csv.reader(fh), 1):
                if not row or not "".join(row).strip():
                    continue
                if line_no == 1 and _is_header(row):
                    continue
                if len(row) < 3:
                    raise MalformedLine(line_no, ",".join(row), str(path))
                try:
                    ref = VerseRef(int(row[0]), int(row[1]))
                except ValueError as e:
                    raise UnknownVerseRef(f"{row[0]}:{row[1]}", line_no) from e
                if ref not in corpus:
                    raise UnknownVerseRef(ref, line_no)
                categories = _parse_categories(row[2], line_no)
                if not categories:
                    raise UnknownCategory(row[2], line_no)
                assigned.setdefault(ref, set()).update(categories)
    except OSError as e:
        raise RecordFileError(path) from e

    verses = [
        replace(verse, categories=frozenset(assigned.get(verse.ref, GENERAL_ONLY)))
        for verse in corpus
    ]
    categorized = QuranCorpus.from_verses(verses, source_format=corpus.source_format)
    logger.info(
        "Categorized %d verses from %s; %d left General",
        len(assigned),
        path,
        len(corpus) - len(assigned),
    )
    return categorized


def category_counts(corpus: QuranCorpus) -> Dict[Category, Tuple[int, float]]:
    """Per-category (count, percent of corpus verses), every category present."""
    counts = {category: 0 for category in Category}
    for verse in corpus:
        for category in verse.categories:
            counts[category] += 1
    total = len(corpus)
    return {
        category: (count, count / total * 100 if total else 0.0)
        for category, count in counts.items()
    }
