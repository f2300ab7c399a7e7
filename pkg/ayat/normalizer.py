"""Arabic preprocessing shared by verses and tweets.

Verses and tweets are compared in one normalized space: optional marks and
kashida are dropped, hamza-carrying letters are folded, mentions and hashtags
are removed. No stemming or stop-word removal is applied.
"""
import re
import unicodedata
from dataclasses import dataclass
from typing import Iterator, List, Tuple

# Tashkeel (U+064B-U+065F), superscript alef, and Quranic annotation signs.
DIACRITICS = re.compile(
    "[\u0610-\u061A\u064B-\u065F\u0670\u06D6-\u06DC\u06DF-\u06E8\u06EA-\u06ED]"
)
KASHIDA = "\u0640"

# Zero-width characters, bidi marks and isolates, BOM.
INVISIBLE = re.compile("[\u200B-\u200F\u202A-\u202E\u2066-\u2069\uFEFF]")

PRESENTATION_FORMS = re.compile("[\uFB50-\uFDFF\uFE70-\uFEFF]+")

# A mention or hashtag is a whole token starting with the marker.
MENTION_OR_HASHTAG = re.compile(r"(?<!\w)[@#]\S*")
HASHTAG = re.compile(r"(?<!\w)#([^\s#@]+)")

LETTER_MAP = str.maketrans(
    {
        "أ": "ا",  # alef with hamza above
        "إ": "ا",  # alef with hamza below
        "آ": "ا",  # alef with madda
        "ؤ": "ء",  # waw with hamza
        "ئ": "ء",  # yeh with hamza
        "ة": "ه",  # teh marbuta
        "ى": "ي",  # alef maksura
    }
)

SENTENCE_DELIMITERS = ".,،؛؟!?;:\u2026\n\r()[]«»\"\u201C\u201D"
SENTENCE_SPLIT = re.compile("[" + re.escape(SENTENCE_DELIMITERS) + "]")


def _fold_presentation_forms(text: str) -> str:
    return PRESENTATION_FORMS.sub(lambda m: unicodedata.normalize("NFKC", m.group()), text)


def normalize(raw: str) -> str:
    """Return ``raw`` in matching space, tokens joined by single spaces."""
    if not raw:
        return ""

    text = _fold_presentation_forms(raw)
    text = INVISIBLE.sub("", text)
    text = DIACRITICS.sub("", text).replace(KASHIDA, "")
    text = MENTION_OR_HASHTAG.sub(" ", text)
    text = text.translate(LETTER_MAP)
    return " ".join(text.split())


def tokenize(raw: str) -> Tuple[str, ...]:
    return tuple(normalize(raw).split())


def extract_hashtags(raw: str) -> List[str]:
    """Hashtag bodies of ``raw`` in order of appearance, normalized.

    Underscores join words inside a hashtag and are read as spaces.
    """
    if not raw:
        return []
    text = INVISIBLE.sub("", _fold_presentation_forms(raw))
    tags = []
    for body in HASHTAG.findall(text):
        tag = normalize(body.replace("_", " "))
        if tag:
            tags.append(tag)
    return tags


@dataclass(frozen=True)
class NormalizedText:
    tokens: Tuple[str, ...]
    sentence_bounds: Tuple[Tuple[int, int], ...]

    def sentences(self) -> Iterator[Tuple[str, ...]]:
        for start, end in self.sentence_bounds:
            yield self.tokens[start:end]

    def __len__(self) -> int:
        return len(self.sentence_bounds)


def split_sentences(raw: str) -> NormalizedText:
    """Split ``raw`` on punctuation and newlines, then normalize each piece.

    Sentences that normalize to nothing are dropped; bounds index into the
    concatenated token sequence.
    """
    tokens: List[str] = []
    bounds: List[Tuple[int, int]] = []

    for piece in SENTENCE_SPLIT.split(raw or ""):
        sentence = normalize(piece).split()
        if not sentence:
            continue
        start = len(tokens)
        tokens.extend(sentence)
        bounds.append((start, len(tokens)))

    return NormalizedText(tuple(tokens), tuple(bounds))
