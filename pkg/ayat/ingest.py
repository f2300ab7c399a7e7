import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

import ahocorasick

from ayat.errors import RecordFileError, SchemaViolation
from ayat.matcher import MatchIndex, MatchList, extract_verses
from ayat.normalizer import extract_hashtags, normalize, split_sentences

logger = logging.getLogger(__name__)

DEFAULT_KEY_PHRASES: Tuple[str, ...] = (
    "بسم الله الرحمن الرحيم",
    "صدق الله العظيم",
    "قوله تعالى",
    "قال تعالى",
    "قال المولى",
    "قال عز وجل",
    "قال في كتابه",
)

DEFAULT_APP_IDENTIFIERS: Tuple[str, ...] = ("du3a", "zad-muslim", "alathkar")

HUMAN = "human"
APP = "app"

TWITTER_TIME_FORMAT = "%a %b %d %H:%M:%S %z %Y"
HTML_TAG = re.compile(r"<[^>]+>")


@dataclass(frozen=True)
class TweetRecord:
    id: str
    text: str
    author_id: str
    author_name: str = ""
    followers: int = 0
    retweet_count: int = 0
    source_app: str = ""
    created_at: Optional[datetime] = None
    retweet_of: Optional[str] = None

    @property
    def is_retweet(self) -> bool:
        return self.retweet_of is not None


def parse_timestamp(value: Any) -> Optional[datetime]:
    """Accept ISO-8601, the Twitter v1.1 layout, or epoch seconds."""
    if value in (None, ""):
        return None
    if isinstance(value, (int, float)):
        return datetime.fromtimestamp(value, tz=timezone.utc)
    text = str(value).strip()
    try:
        return datetime.strptime(text, TWITTER_TIME_FORMAT)
    except ValueError:
        pass
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    return datetime.fromisoformat(text)


def _flatten_v1(obj: Dict[str, Any]) -> Dict[str, Any]:
    """Map a raw Twitter v1.1 status onto the flat record layout."""
    user = obj.get("user") or {}
    retweeted = obj.get("retweeted_status") or {}
    return {
        "id": obj.get("id_str", obj.get("id")),
        "text": obj.get("full_text", obj.get("text")),
        "author_id": user.get("id_str", user.get("id")),
        "author_name": user.get("screen_name", ""),
        "followers": user.get("followers_count", 0),
        "retweet_count": obj.get("retweet_count", 0),
        "source": obj.get("source", ""),
        "created_at": obj.get("created_at"),
        "retweet_of": retweeted.get("id_str", retweeted.get("id")),
    }


def _required_str(obj: Dict[str, Any], name: str, line_no: int) -> str:
    value = obj.get(name)
    if value is None or (isinstance(value, str) and not value.strip() and name != "text"):
        raise SchemaViolation(line_no, name)
    if not isinstance(value, (str, int)):
        raise SchemaViolation(line_no, name, "not a string")
    return str(value)


def _count(obj: Dict[str, Any], name: str, line_no: int) -> int:
    value = obj.get(name, 0)
    if value is None:
        return 0
    if isinstance(value, bool):
        raise SchemaViolation(line_no, name, "not an integer")
    try:
        count = int(value)
    except (TypeError, ValueError):
        raise SchemaViolation(line_no, name, "not an integer") from None
    if count < 0:
        raise SchemaViolation(line_no, name, "negative")
    return count


def record_from_json(obj: Any, line_no: int = 0) -> TweetRecord:
    if not isinstance(obj, dict):
        raise SchemaViolation(line_no, "<record>", "not an object")
    if isinstance(obj.get("user"), dict):
        obj = _flatten_v1(obj)

    try:
        created_at = parse_timestamp(obj.get("created_at"))
    except (ValueError, OverflowError, OSError):
        raise SchemaViolation(line_no, "created_at", "not a timestamp") from None

    retweet_of = obj.get("retweet_of")
    return TweetRecord(
        id=_required_str(obj, "id", line_no),
        text=_required_str(obj, "text", line_no),
        author_id=_required_str(obj, "author_id", line_no),
        author_name=str(obj.get("author_name") or ""),
        followers=_count(obj, "followers", line_no),
        retweet_count=_count(obj, "retweet_count", line_no),
        source_app=HTML_TAG.sub("", str(obj.get("source") or "")).strip(),
        created_at=created_at,
        retweet_of=str(retweet_of) if retweet_of not in (None, "") else None,
    )


def read_records(file: Union[str, Path], strict: bool = False) -> Iterator[TweetRecord]:
    """Yield records from a JSON-lines file in file order.

    Malformed lines and repeated ids are logged and skipped; with ``strict``
    the first one raises instead.
    """
    path = Path(file)
    seen: Set[str] = set()
    skipped = 0
    try:
        with path.open(encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    try:
                        obj = json.loads(line)
                    except json.JSONDecodeError:
                        raise SchemaViolation(line_no, "<record>", "not valid JSON") from None
                    record = record_from_json(obj, line_no)
                    if record.id in seen:
                        raise SchemaViolation(line_no, "id", "a duplicate")
                except SchemaViolation as e:
                    if strict:
                        raise
                    skipped += 1
                    logger.warning("%s: %s; skipped", path, e)
                    continue
                seen.add(record.id)
                yield record
    except OSError as e:
        raise RecordFileError(path, str(e)) from e

    if skipped:
        logger.warning("%s: %d malformed records skipped", path, skipped)


def write_records(records: Iterable[TweetRecord], file: Union[str, Path]) -> int:
    """Write records back as flat JSON lines; returns the number written."""
    count = 0
    with Path(file).open("w", encoding="utf-8") as fh:
        for record in records:
            obj = {
                "id": record.id,
                "text": record.text,
                "author_id": record.author_id,
                "author_name": record.author_name,
                "followers": record.followers,
                "retweet_count": record.retweet_count,
                "source": record.source_app,
                "created_at": record.created_at.isoformat() if record.created_at else None,
                "retweet_of": record.retweet_of,
            }
            fh.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")
            count += 1
    return count


def _read_list_file(file: Union[str, Path]) -> List[str]:
    path = Path(file)
    try:
        with path.open(encoding="utf-8-sig") as fh:
            lines = [line.strip() for line in fh]
    except OSError as e:
        raise RecordFileError(path, str(e)) from e
    return [line for line in lines if line and not line.startswith("#")]


class KeyPhraseSet:
    """Normalized key phrases scanned in one Aho-Corasick pass.

    Phrases and text are padded with spaces so only whole-token runs match,
    and sentences are separated by newlines so no phrase spans two of them.
    """

    def __init__(self, phrases: Iterable[str]) -> None:
        normalized: List[Tuple[str, ...]] = []
        for phrase in phrases:
            tokens = tuple(normalize(phrase).split())
            if tokens and tokens not in normalized:
                normalized.append(tokens)
        self.phrases: Tuple[Tuple[str, ...], ...] = tuple(normalized)

        self._automaton = ahocorasick.Automaton()
        for position, tokens in enumerate(self.phrases):
            self._automaton.add_word(f" {' '.join(tokens)} ", position)
        if self.phrases:
            self._automaton.make_automaton()

    @classmethod
    def default(cls) -> "KeyPhraseSet":
        return cls(DEFAULT_KEY_PHRASES)

    def __len__(self) -> int:
        return len(self.phrases)

    def find(self, raw_text: str) -> List[Tuple[str, ...]]:
        """Phrases present in ``raw_text``, in order of first appearance."""
        if not self.phrases:
            return []
        sentences = split_sentences(raw_text).sentences()
        haystack = " " + " \n ".join(" ".join(sentence) for sentence in sentences) + " "
        found: List[Tuple[str, ...]] = []
        for _, position in self._automaton.iter(haystack):
            phrase = self.phrases[position]
            if phrase not in found:
                found.append(phrase)
        return found

    def matches(self, raw_text: str) -> bool:
        return bool(self.find(raw_text))


def load_key_phrases(file: Union[str, Path]) -> KeyPhraseSet:
    return KeyPhraseSet(_read_list_file(file))


def keyphrase_filter(records: Iterable[TweetRecord], phrases: KeyPhraseSet) -> Iterator[TweetRecord]:
    for record in records:
        if phrases.matches(record.text):
            yield record


def hashtag_filter(records: Iterable[TweetRecord], hashtags: Iterable[str]) -> Iterator[TweetRecord]:
    """Keep records tagged with any of ``hashtags`` (compared normalized)."""
    wanted = {normalize(tag.lstrip("#").replace("_", " ")) for tag in hashtags}
    wanted.discard("")
    for record in records:
        if wanted.intersection(extract_hashtags(record.text)):
            yield record


def load_app_registry(file: Union[str, Path]) -> List[str]:
    return [identifier.lower() for identifier in _read_list_file(file)]


def detect_app_tweet(record: TweetRecord, app_registry: Sequence[str]) -> bool:
    source = record.source_app.lower()
    if not source:
        return False
    return any(identifier and identifier.lower() in source for identifier in app_registry)


@dataclass(frozen=True)
class ValidatedTweet:
    """A tweet holding at least one verse, with its folded retweet count."""

    record: TweetRecord
    matches: MatchList
    retweet_count: int
    dataset: str

    @property
    def author_id(self) -> str:
        return self.record.author_id

    @property
    def weight(self) -> int:
        return 1 + self.retweet_count

    @property
    def verse_count(self) -> int:
        return len(self.matches)


@dataclass(frozen=True)
class PartitionStats:
    accounts: FrozenSet[str] = frozenset()
    tweet_count: int = 0
    verse_count: int = 0
    tweet_volume: int = 0
    verse_volume: int = 0
    retweeted_tweets: int = 0

    @classmethod
    def of(cls, tweets: Iterable[ValidatedTweet]) -> "PartitionStats":
        accounts: Set[str] = set()
        tweet_count = verse_count = tweet_volume = verse_volume = retweeted = 0
        for tweet in tweets:
            accounts.add(tweet.author_id)
            weight = tweet.weight
            tweet_count += 1
            verse_count += tweet.verse_count
            tweet_volume += weight
            verse_volume += tweet.verse_count * weight
            retweeted += tweet.retweet_count > 0
        return cls(frozenset(accounts), tweet_count, verse_count, tweet_volume, verse_volume, retweeted)

    def merge(self, other: "PartitionStats") -> "PartitionStats":
        return PartitionStats(
            accounts=self.accounts | other.accounts,
            tweet_count=self.tweet_count + other.tweet_count,
            verse_count=self.verse_count + other.verse_count,
            tweet_volume=self.tweet_volume + other.tweet_volume,
            verse_volume=self.verse_volume + other.verse_volume,
            retweeted_tweets=self.retweeted_tweets + other.retweeted_tweets,
        )

    @property
    def account_count(self) -> int:
        return len(self.accounts)

    @property
    def avg_verses_per_tweet(self) -> float:
        return self.verse_count / self.tweet_count if self.tweet_count else 0.0

    @property
    def avg_retweets_per_tweet(self) -> float:
        if not self.tweet_count:
            return 0.0
        return (self.tweet_volume - self.tweet_count) / self.tweet_count

    @property
    def retweeted_fraction(self) -> float:
        return self.retweeted_tweets / self.tweet_count if self.tweet_count else 0.0


@dataclass(frozen=True)
class DatasetPartition:
    human_tweets: Tuple[ValidatedTweet, ...]
    app_tweets: Tuple[ValidatedTweet, ...]
    stats: Dict[str, PartitionStats] = field(default_factory=dict)
    records_seen: int = 0
    retweet_records: int = 0
    dangling_retweets: int = 0

    @property
    def validated_count(self) -> int:
        return len(self.human_tweets) + len(self.app_tweets)

    def tweets(self) -> Iterator[ValidatedTweet]:
        """Every validated tweet, human side first, each in input order."""
        yield from self.human_tweets
        yield from self.app_tweets


def partition_matched(
    matched: Iterable[Tuple[TweetRecord, Optional[MatchList]]],
    app_registry: Sequence[str],
) -> DatasetPartition:
    """Fold retweet records into their parents and split validated tweets.

    ``matched`` pairs each record with its matches (``None`` for explicit
    retweet records, which are never matched themselves).
    """
    originals: List[Tuple[TweetRecord, MatchList]] = []
    explicit_retweets: Counter = Counter()
    original_ids: Set[str] = set()
    records_seen = 0

    for record, matches in matched:
        records_seen += 1
        if record.is_retweet:
            explicit_retweets[record.retweet_of] += 1
            continue
        original_ids.add(record.id)
        if matches is not None and matches.validated:
            originals.append((record, matches))

    dangling = sum(n for parent, n in explicit_retweets.items() if parent not in original_ids)
    if dangling:
        logger.warning("%d retweet records reference tweets absent from the input", dangling)

    human: List[ValidatedTweet] = []
    app: List[ValidatedTweet] = []
    for record, matches in originals:
        retweets = max(record.retweet_count, explicit_retweets.get(record.id, 0))
        if detect_app_tweet(record, app_registry):
            app.append(ValidatedTweet(record, matches, retweets, APP))
        else:
            human.append(ValidatedTweet(record, matches, retweets, HUMAN))

    partition = DatasetPartition(
        human_tweets=tuple(human),
        app_tweets=tuple(app),
        stats={HUMAN: PartitionStats.of(human), APP: PartitionStats.of(app)},
        records_seen=records_seen,
        retweet_records=sum(explicit_retweets.values()),
        dangling_retweets=dangling,
    )
    logger.info(
        "Validated %d of %d records (%d human, %d app)",
        partition.validated_count,
        records_seen,
        len(human),
        len(app),
    )
    return partition


def match_records(
    records: Iterable[TweetRecord], index: MatchIndex
) -> Iterator[Tuple[TweetRecord, Optional[MatchList]]]:
    for record in records:
        yield record, None if record.is_retweet else extract_verses(index, record.text)


def partition(
    records: Iterable[TweetRecord], index: MatchIndex, app_registry: Sequence[str]
) -> DatasetPartition:
    return partition_matched(match_records(records, index), app_registry)
