import csv
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from ayat.corpus import Category, QuranCorpus, VerseRef
from ayat.errors import (
    ConfigError,
    DegenerateInput,
    EmptyDataset,
    MalformedLine,
    RecordFileError,
    UnknownGroupKey,
)
from ayat.ingest import APP, HUMAN, PartitionStats, ValidatedTweet
from ayat.matcher import MatchKind

logger = logging.getLogger(__name__)

DEFAULT_TOP_N = 10
DEFAULT_INFLUENTIAL_K = 500
DEFAULT_MIN_FREQUENCY = 10

GROUP_KEYS = ("dataset", "label")


class WeightMode(str, Enum):
    VOLUME = "volume"
    COUNT = "count"

    def __str__(self) -> str:
        return self.value


class KindFilter(str, Enum):
    FULL = "full"
    FRAGMENT = "fragment"
    BOTH = "both"

    def admits(self, kind: MatchKind) -> bool:
        return self is KindFilter.BOTH or self.value == kind.value


@dataclass(frozen=True)
class VerseOccurrence:
    verse: VerseRef
    kind: MatchKind
    sentence_index: int
    categories: FrozenSet[Category]


@dataclass(frozen=True)
class TweetMatches:
    """One validated tweet as the analyses see it."""

    tweet_id: str
    author_id: str
    dataset: str
    retweet_count: int
    followers: int
    occurrences: Tuple[VerseOccurrence, ...]
    text: str = ""

    @classmethod
    def from_validated(cls, tweet: ValidatedTweet, corpus: QuranCorpus) -> "TweetMatches":
        occurrences = tuple(
            VerseOccurrence(
                match.verse,
                match.kind,
                match.tweet_sentence_index,
                corpus.verses[match.verse].categories,
            )
            for match in tweet.matches
        )
        return cls(
            tweet_id=tweet.record.id,
            author_id=tweet.record.author_id,
            dataset=tweet.dataset,
            retweet_count=tweet.retweet_count,
            followers=tweet.record.followers,
            occurrences=occurrences,
            text=tweet.record.text,
        )

    @property
    def weight(self) -> int:
        return 1 + self.retweet_count

    @property
    def verse_count(self) -> int:
        return len(self.occurrences)

    def weight_for(self, mode: WeightMode) -> int:
        return self.weight if WeightMode(mode) is WeightMode.VOLUME else 1

    def weighted_occurrences(
        self, mode: WeightMode = WeightMode.VOLUME, distinct_verses: bool = False
    ) -> List[Tuple[VerseOccurrence, Fraction]]:
        """Each occurrence with the weight it contributes.

        With ``distinct_verses`` the verses matched by one sentence share that
        sentence's weight equally instead of each receiving all of it.
        """
        weight = Fraction(self.weight_for(mode))
        if not distinct_verses:
            return [(occurrence, weight) for occurrence in self.occurrences]
        per_sentence = Counter(occurrence.sentence_index for occurrence in self.occurrences)
        return [
            (occurrence, weight / per_sentence[occurrence.sentence_index])
            for occurrence in self.occurrences
        ]


@dataclass(frozen=True)
class CategoryDistribution:
    volumes: Mapping[Category, Fraction]
    total_verse_volume: Fraction

    def volume(self, category: Category) -> Fraction:
        return self.volumes.get(category, Fraction(0))

    def percentage(self, category: Category) -> float:
        if not self.total_verse_volume:
            return 0.0
        return float(self.volume(category) * 100 / self.total_verse_volume)

    @property
    def percentages(self) -> Dict[Category, float]:
        return {category: self.percentage(category) for category in Category}

    def __iter__(self):
        return iter(Category)


def _distribution(volumes: Mapping[Category, Fraction], total: Fraction) -> CategoryDistribution:
    return CategoryDistribution(
        {category: Fraction(volumes.get(category, 0)) for category in Category},
        Fraction(total),
    )


def category_distribution(
    tweets: Iterable[TweetMatches],
    weight_mode: WeightMode = WeightMode.VOLUME,
    distinct_verses: bool = False,
) -> CategoryDistribution:
    """Weighted share of matched verse volume falling into each category.

    A multi-category verse counts toward every one of its categories, so the
    percentages can sum past 100.
    """
    volumes: Dict[Category, Fraction] = defaultdict(Fraction)
    total = Fraction(0)
    for tweet in tweets:
        for occurrence, weight in tweet.weighted_occurrences(weight_mode, distinct_verses):
            total += weight
            for category in occurrence.categories:
                volumes[category] += weight
    if not total:
        raise EmptyDataset()
    return _distribution(volumes, total)


def quran_baseline(corpus: QuranCorpus) -> CategoryDistribution:
    volumes: Dict[Category, Fraction] = defaultdict(Fraction)
    for verse in corpus:
        for category in verse.categories:
            volumes[category] += 1
    return _distribution(volumes, Fraction(len(corpus)))


@dataclass(frozen=True)
class LeaderboardEntry:
    rank: int
    verse: VerseRef
    kind: MatchKind
    count: Fraction


@dataclass(frozen=True)
class VerseLeaderboard:
    entries: Tuple[LeaderboardEntry, ...]
    kind_filter: KindFilter

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def refs(self) -> List[VerseRef]:
        return [entry.verse for entry in self.entries]


_KIND_ORDER = {MatchKind.FULL: 0, MatchKind.FRAGMENT: 1}


def _verse_volumes(
    tweets: Iterable[TweetMatches],
    kind_filter: KindFilter,
    weight_mode: WeightMode,
    distinct_verses: bool,
) -> Counter:
    volumes: Counter = Counter()
    for tweet in tweets:
        for occurrence, weight in tweet.weighted_occurrences(weight_mode, distinct_verses):
            if kind_filter.admits(occurrence.kind):
                volumes[(occurrence.verse, occurrence.kind)] += weight
    return volumes


def _ranked(volumes: Counter) -> List[Tuple[Tuple[VerseRef, MatchKind], Fraction]]:
    return sorted(
        volumes.items(),
        key=lambda item: (-item[1], item[0][0], _KIND_ORDER[item[0][1]]),
    )


def top_verses(
    tweets: Iterable[TweetMatches],
    kind: Union[KindFilter, str] = KindFilter.BOTH,
    n: int = DEFAULT_TOP_N,
    weight_mode: WeightMode = WeightMode.VOLUME,
    distinct_verses: bool = False,
) -> VerseLeaderboard:
    """Most shared verses by weighted occurrence count.

    Ties are ordered by verse reference, then Full before Fragment.
    """
    if n < 1:
        raise ConfigError(f"n must be at least 1, got {n}")
    kind_filter = KindFilter(kind)
    ranked = _ranked(_verse_volumes(tweets, kind_filter, weight_mode, distinct_verses))
    entries = tuple(
        LeaderboardEntry(rank, verse, match_kind, count)
        for rank, ((verse, match_kind), count) in enumerate(ranked[:n], 1)
    )
    return VerseLeaderboard(entries, kind_filter)


def top_verse_per_category(
    tweets: Iterable[TweetMatches],
    kind: Union[KindFilter, str] = KindFilter.BOTH,
    weight_mode: WeightMode = WeightMode.VOLUME,
    distinct_verses: bool = False,
) -> Dict[Category, LeaderboardEntry]:
    """The single most shared verse of every category that has any."""
    kind_filter = KindFilter(kind)
    by_category: Dict[Category, Counter] = defaultdict(Counter)
    for tweet in tweets:
        for occurrence, weight in tweet.weighted_occurrences(weight_mode, distinct_verses):
            if not kind_filter.admits(occurrence.kind):
                continue
            for category in occurrence.categories:
                by_category[category][(occurrence.verse, occurrence.kind)] += weight

    top: Dict[Category, LeaderboardEntry] = {}
    for category in Category:
        if category not in by_category:
            continue
        (verse, match_kind), count = _ranked(by_category[category])[0]
        top[category] = LeaderboardEntry(1, verse, match_kind, count)
    return top


@dataclass(frozen=True)
class RetweetHistogram:
    counts: Mapping[int, int]

    @property
    def tweet_count(self) -> int:
        return sum(self.counts.values())

    @property
    def retweeted_fraction(self) -> float:
        total = self.tweet_count
        if not total:
            return 0.0
        return 1 - self.counts.get(0, 0) / total

    def items(self) -> List[Tuple[int, int]]:
        return sorted(self.counts.items())

    def loglog_points(self) -> List[Tuple[int, int]]:
        """(retweet_count, tweets) pairs drawable on log-log axes."""
        return [(count, freq) for count, freq in self.items() if count > 0 and freq > 0]

    def fit_loglog_slope(self, min_frequency: int = DEFAULT_MIN_FREQUENCY) -> float:
        """Least-squares slope of log(tweets) against log(retweet_count).

        Only the contiguous head of the histogram is used: retweet counts
        1, 2, 3, ... up to the first bin holding fewer than ``min_frequency``
        tweets.
        """
        xs, ys = [], []
        count = 1
        while self.counts.get(count, 0) >= min_frequency:
            xs.append(count)
            ys.append(self.counts[count])
            count += 1
        if len(xs) < 2:
            raise DegenerateInput(
                f"need at least 2 bins with {min_frequency}+ tweets to fit, got {len(xs)}"
            )
        slope, _ = np.polyfit(np.log(xs), np.log(ys), 1)
        return float(slope)


def retweet_histogram(retweet_counts: Iterable[int]) -> RetweetHistogram:
    return RetweetHistogram(dict(sorted(Counter(retweet_counts).items())))


class AccountLabel(str, Enum):
    PERSONAL_RCE = "Personal-RCE"
    PAGE_RCE = "Page-RCE"
    PERSONAL_GENERAL = "Personal-General"
    PAGE_GENERAL = "Page-General"

    @classmethod
    def from_parts(cls, main: str, secondary: str) -> "AccountLabel":
        main, secondary = main.strip().lower(), secondary.strip().lower()
        for label in cls:
            label_main, label_secondary = label.value.lower().split("-")
            if (main, secondary) == (label_main, label_secondary):
                return label
        raise ValueError(f"unknown account label {main!r}/{secondary!r}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class AccountProfile:
    author_id: str
    tweet_count: int
    total_retweets_received: int
    followers: int
    label: Optional[AccountLabel] = None


def load_account_labels(file: Union[str, Path]) -> Dict[str, AccountLabel]:
    """Read ``author_id,main_label,secondary_label`` rows (header optional)."""
    path = Path(file)
    labels: Dict[str, AccountLabel] = {}
    try:
        with path.open(encoding="utf-8-sig", newline="") as fh:
            for line_no, row in enumerate(csv.reader(fh), 1):
                if not row or not any(cell.strip() for cell in row):
                    continue
                if line_no == 1 and row[0].strip().lower() == "author_id":
                    continue
                if len(row) < 3:
                    raise MalformedLine(line_no, ",".join(row), str(path))
                try:
                    label = AccountLabel.from_parts(row[1], row[2])
                except ValueError:
                    raise MalformedLine(line_no, ",".join(row), str(path)) from None
                labels[row[0].strip()] = label
    except OSError as e:
        raise RecordFileError(path, str(e)) from e
    logger.info("Loaded %d account labels from %s", len(labels), path)
    return labels


def build_account_profiles(
    tweets: Iterable[TweetMatches], labels: Optional[Mapping[str, AccountLabel]] = None
) -> Dict[str, AccountProfile]:
    """Per-author totals keyed and ordered by author id.

    The follower count kept is the last one seen in input order.
    """
    tweet_counts: Counter = Counter()
    retweets: Counter = Counter()
    followers: Dict[str, int] = {}
    for tweet in tweets:
        tweet_counts[tweet.author_id] += 1
        retweets[tweet.author_id] += tweet.retweet_count
        followers[tweet.author_id] = tweet.followers

    labels = labels or {}
    unknown = set(labels) - set(tweet_counts)
    if unknown:
        logger.warning("%d labeled accounts have no validated tweets", len(unknown))

    return {
        author_id: AccountProfile(
            author_id,
            tweet_counts[author_id],
            retweets[author_id],
            followers[author_id],
            labels.get(author_id),
        )
        for author_id in sorted(tweet_counts)
    }


def select_influential(accounts: Iterable[AccountProfile], k: int = DEFAULT_INFLUENTIAL_K) -> List[AccountProfile]:
    if k < 1:
        raise ConfigError(f"k must be at least 1, got {k}")
    ranked = sorted(accounts, key=lambda account: (-account.total_retweets_received, account.author_id))
    return ranked[:k]


def follower_retweet_correlation(accounts: Sequence[AccountProfile]) -> float:
    """Pearson correlation between per-account retweets and follower counts."""
    if len(accounts) < 2:
        raise DegenerateInput(f"need at least 2 accounts, got {len(accounts)}")
    retweets = np.array([account.total_retweets_received for account in accounts], dtype=float)
    followers = np.array([account.followers for account in accounts], dtype=float)
    if np.ptp(retweets) == 0 or np.ptp(followers) == 0:
        raise DegenerateInput("retweets or followers are constant across accounts")
    r, _ = stats.pearsonr(retweets, followers)
    return float(np.clip(r, -1.0, 1.0))


def _group_of(
    tweet: TweetMatches, group_key: str, profiles: Mapping[str, AccountProfile]
) -> Optional[str]:
    if group_key == "dataset":
        return tweet.dataset
    profile = profiles.get(tweet.author_id)
    if profile is None or profile.label is None:
        return None
    return profile.label.value


def _group_order(group_key: str) -> List[str]:
    if group_key == "dataset":
        return [HUMAN, APP]
    return [label.value for label in AccountLabel]


def grouped_distribution(
    tweets: Iterable[TweetMatches],
    group_key: str,
    profiles: Optional[Mapping[str, AccountProfile]] = None,
    weight_mode: WeightMode = WeightMode.VOLUME,
    distinct_verses: bool = False,
) -> Dict[str, CategoryDistribution]:
    """One distribution per dataset or per imported account label.

    Groups without matches are left out; with ``label`` tweets by
    unlabeled accounts are ignored.
    """
    if group_key not in GROUP_KEYS:
        raise UnknownGroupKey(group_key)
    profiles = profiles or {}
    groups: Dict[str, List[TweetMatches]] = defaultdict(list)
    for tweet in tweets:
        group = _group_of(tweet, group_key, profiles)
        if group is not None:
            groups[group].append(tweet)

    ordered = _group_order(group_key)
    distributions: Dict[str, CategoryDistribution] = {}
    for group in ordered + sorted(set(groups) - set(ordered)):
        if group in groups and any(tweet.occurrences for tweet in groups[group]):
            distributions[group] = category_distribution(groups[group], weight_mode, distinct_verses)
    return distributions


def dataset_partition_stats(tweets: Iterable[TweetMatches]) -> Dict[str, PartitionStats]:
    by_dataset: Dict[str, List[TweetMatches]] = defaultdict(list)
    for tweet in tweets:
        by_dataset[tweet.dataset].append(tweet)
    return {dataset: PartitionStats.of(by_dataset.get(dataset, ())) for dataset in (HUMAN, APP)}


def labeled_partition_stats(
    tweets: Iterable[TweetMatches], profiles: Mapping[str, AccountProfile]
) -> Dict[str, PartitionStats]:
    """Partition statistics per account label, every label present."""
    by_label: Dict[str, List[TweetMatches]] = defaultdict(list)
    for tweet in tweets:
        group = _group_of(tweet, "label", profiles)
        if group is not None:
            by_label[group].append(tweet)
    return {label.value: PartitionStats.of(by_label.get(label.value, ())) for label in AccountLabel}


@dataclass(frozen=True)
class ReviewRow:
    stratum: MatchKind
    tweet_id: str
    verse: VerseRef
    kind: MatchKind
    text: str


@dataclass(frozen=True)
class ReviewSample:
    rows: Tuple[ReviewRow, ...]
    short_strata: Tuple[MatchKind, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)


def sample_for_review(
    tweets: Sequence[TweetMatches], n_full: int, n_fragment: int, seed: int
) -> ReviewSample:
    """Seeded uniform sample of matched tweets for manual precision review.

    A tweet is drawn at most once, into the first stratum whose kind it
    carries; each row shows the tweet's first match of that kind. A stratum
    with fewer candidates than requested is returned whole and flagged.
    """
    rng = np.random.default_rng(seed)
    rows: List[ReviewRow] = []
    short: List[MatchKind] = []
    taken = set()

    for stratum, wanted in ((MatchKind.FULL, n_full), (MatchKind.FRAGMENT, n_fragment)):
        if wanted <= 0:
            continue
        candidates = [
            tweet
            for tweet in tweets
            if tweet.tweet_id not in taken
            and any(occurrence.kind is stratum for occurrence in tweet.occurrences)
        ]
        if len(candidates) < wanted:
            logger.warning(
                "Only %d %s tweets available for review, %d requested",
                len(candidates),
                stratum,
                wanted,
            )
            short.append(stratum)
            picked = range(len(candidates))
        else:
            picked = sorted(rng.choice(len(candidates), size=wanted, replace=False).tolist())

        for position in picked:
            tweet = candidates[position]
            occurrence = next(o for o in tweet.occurrences if o.kind is stratum)
            taken.add(tweet.tweet_id)
            rows.append(ReviewRow(stratum, tweet.tweet_id, occurrence.verse, occurrence.kind, tweet.text))

    return ReviewSample(tuple(rows), tuple(short))
