import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Sequence, Tuple

from ayat.corpus import Category, QuranCorpus, VerseRef, sorted_categories
from ayat.errors import ConfigError
from ayat.normalizer import split_sentences

logger = logging.getLogger(__name__)

DEFAULT_MIN_TOKENS = 3

Tokens = Tuple[str, ...]


class MatchKind(str, Enum):
    FULL = "full"
    FRAGMENT = "fragment"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class MatchResult:
    verse: VerseRef
    kind: MatchKind
    tweet_sentence_index: int
    matched_span: Tuple[int, int]


@dataclass(frozen=True)
class MatchList:
    matches: Tuple[MatchResult, ...] = ()
    categories: Counter = field(default_factory=Counter)

    @property
    def validated(self) -> bool:
        return bool(self.matches)

    @property
    def distinct_verses(self) -> Tuple[VerseRef, ...]:
        return tuple(sorted({m.verse for m in self.matches}))

    def __len__(self) -> int:
        return len(self.matches)

    def __iter__(self):
        return iter(self.matches)


class MatchIndex:
    """Read-only lookup over the normalized token sequences of a corpus.

    Whole verses are keyed by their token tuple. Contiguous runs are found
    through an inverted index of ``min_tokens``-grams: the rarest gram of the
    query picks the candidate positions, each candidate is then verified
    against the verse tokens.
    """

    def __init__(
        self,
        corpus: QuranCorpus,
        min_tokens: int = DEFAULT_MIN_TOKENS,
        full_suppresses_fragments: bool = False,
    ) -> None:
        if min_tokens < 2:
            raise ConfigError(f"min_tokens must be at least 2, got {min_tokens}")
        self.corpus = corpus
        self.min_tokens = min_tokens
        self.full_suppresses_fragments = full_suppresses_fragments

        full: Dict[Tokens, List[VerseRef]] = {}
        grams: Dict[Tokens, List[Tuple[VerseRef, int]]] = {}
        for verse in corpus:
            tokens = verse.norm_tokens
            full.setdefault(tokens, []).append(verse.ref)
            for pos in range(len(tokens) - min_tokens + 1):
                grams.setdefault(tokens[pos:pos + min_tokens], []).append((verse.ref, pos))

        self._full = {key: tuple(refs) for key, refs in full.items()}
        self._grams = {key: tuple(postings) for key, postings in grams.items()}
        self._tokens = {verse.ref: verse.norm_tokens for verse in corpus}
        logger.debug(
            "Indexed %d verses, %d distinct %d-grams",
            len(self._tokens),
            len(self._grams),
            min_tokens,
        )

    def __len__(self) -> int:
        return len(self._tokens)

    def full_matches(self, tokens: Tokens) -> Tuple[VerseRef, ...]:
        return self._full.get(tokens, ())

    def containing(self, tokens: Tokens) -> List[Tuple[VerseRef, int]]:
        """Verses holding ``tokens`` as a contiguous run, with the first start.

        Results follow canonical verse order.
        """
        n = self.min_tokens
        if len(tokens) < n:
            return []

        best_offset, best = 0, None
        for offset in range(len(tokens) - n + 1):
            postings = self._grams.get(tokens[offset:offset + n])
            if postings is None:
                return []
            if best is None or len(postings) < len(best):
                best_offset, best = offset, postings

        length = len(tokens)
        found: Dict[VerseRef, int] = {}
        for ref, pos in best:
            start = pos - best_offset
            if start < 0 or ref in found:
                continue
            if self._tokens[ref][start:start + length] == tokens:
                found[ref] = start
        return list(found.items())


def build_index(
    corpus: QuranCorpus,
    min_tokens: int = DEFAULT_MIN_TOKENS,
    full_suppresses_fragments: bool = False,
) -> MatchIndex:
    return MatchIndex(corpus, min_tokens, full_suppresses_fragments)


def _assemble(
    full_refs: Sequence[VerseRef],
    containing: Iterable[Tuple[VerseRef, int]],
    length: int,
    sentence_index: int,
    full_suppresses_fragments: bool,
) -> List[MatchResult]:
    results = [
        MatchResult(ref, MatchKind.FULL, sentence_index, (0, length)) for ref in full_refs
    ]
    if results and full_suppresses_fragments:
        return results

    full_set = set(full_refs)
    for ref, start in containing:
        if ref in full_set:
            continue
        results.append(
            MatchResult(ref, MatchKind.FRAGMENT, sentence_index, (start, start + length))
        )
    return results


def match_sentence(
    index: MatchIndex, sentence_tokens: Sequence[str], sentence_index: int = 0
) -> List[MatchResult]:
    """Match one normalized sentence.

    Sentences shorter than ``index.min_tokens`` never match. A sentence equal
    to a whole verse yields a Full match for that verse; every other verse
    holding the sentence yields a Fragment match, unless the index was built
    with ``full_suppresses_fragments``.
    """
    tokens = tuple(sentence_tokens)
    if len(tokens) < index.min_tokens:
        return []
    return _assemble(
        index.full_matches(tokens),
        index.containing(tokens),
        len(tokens),
        sentence_index,
        index.full_suppresses_fragments,
    )


def brute_force_match(
    corpus: QuranCorpus,
    sentence_tokens: Sequence[str],
    min_tokens: int = DEFAULT_MIN_TOKENS,
    full_suppresses_fragments: bool = False,
    sentence_index: int = 0,
) -> List[MatchResult]:
    """Scan every verse; the reference answer for ``match_sentence``."""
    tokens = tuple(sentence_tokens)
    length = len(tokens)
    if length < min_tokens:
        return []

    full_refs = []
    containing = []
    for verse in corpus:
        verse_tokens = verse.norm_tokens
        if verse_tokens == tokens:
            full_refs.append(verse.ref)
        for start in range(len(verse_tokens) - length + 1):
            if verse_tokens[start:start + length] == tokens:
                containing.append((verse.ref, start))
                break
    return _assemble(full_refs, containing, length, sentence_index, full_suppresses_fragments)


def extract_verses(index: MatchIndex, tweet_text: str) -> MatchList:
    """Split a tweet into sentences and collect the matches of each."""
    text = split_sentences(tweet_text)
    matches: List[MatchResult] = []
    for sentence_index, sentence in enumerate(text.sentences()):
        matches.extend(match_sentence(index, sentence, sentence_index))

    categories: Counter = Counter()
    for match in matches:
        categories.update(index.corpus.verses[match.verse].categories)
    return MatchList(tuple(matches), categories)


def verse_categories(index: MatchIndex, ref: VerseRef) -> Tuple[Category, ...]:
    return sorted_categories(index.corpus.verses[ref].categories)
