import csv
import hashlib
import json
import logging
import math
from collections import defaultdict
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import pandas as pd

from ayat.analytics import (
    AccountProfile,
    CategoryDistribution,
    LeaderboardEntry,
    RetweetHistogram,
    ReviewSample,
    TweetMatches,
    VerseLeaderboard,
    VerseOccurrence,
)
from ayat.corpus import Category, QuranCorpus, VerseRef, sorted_categories
from ayat.errors import RecordFileError, SchemaViolation
from ayat.ingest import PartitionStats, ValidatedTweet
from ayat.matcher import MatchKind

logger = logging.getLogger(__name__)

MATCH_COLUMNS = ["tweet_id", "author_id", "dataset", "sentence", "sura", "ayah", "kind", "categories", "weight"]
TWEET_COLUMNS = [
    "tweet_id",
    "author_id",
    "author_name",
    "followers",
    "retweet_count",
    "weight",
    "dataset",
    "source",
    "created_at",
    "n_matches",
    "text",
]
LEADERBOARD_COLUMNS = ["rank", "sura", "ayah", "kind", "count"]
PARTITION_COLUMNS = [
    "dataset",
    "accounts",
    "tweets",
    "verses",
    "tweet_volume",
    "verse_volume",
    "avg_verses_per_tweet",
    "avg_retweets_per_tweet",
    "retweeted_fraction",
]

PathLike = Union[str, Path]


# Report numbers reach pandas as preformatted strings.
def fmt_float(value: float) -> str:
    return f"{value:.4f}"


def fmt_count(value: Union[int, Fraction]) -> str:
    """Whole counts print as integers, split counts with four decimals."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return fmt_float(float(value))


def write_tsv(rows: Sequence[Sequence[Any]], columns: List[str], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame([[str(value) for value in row] for row in rows], columns=columns)
    frame.to_csv(
        path, sep="\t", index=False, lineterminator="\n", quoting=csv.QUOTE_NONNUMERIC, encoding="utf-8"
    )
    logger.debug("Wrote %s (%d rows)", path, len(frame))
    return path


def read_tsv(path: PathLike, columns: List[str]) -> pd.DataFrame:
    path = Path(path)
    try:
        frame = pd.read_csv(path, sep="\t", dtype=str, keep_default_na=False, encoding="utf-8")
    except FileNotFoundError as e:
        raise RecordFileError(path, "does not exist") from e
    except (OSError, pd.errors.ParserError) as e:
        raise RecordFileError(path, str(e)) from e
    missing = [column for column in columns if column not in frame.columns]
    if missing:
        raise SchemaViolation(1, missing[0], "a missing column")
    return frame


def write_json(obj: Mapping[str, Any], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return path


def file_sha256(path: PathLike) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _categories_cell(categories: Iterable[Category]) -> str:
    return ";".join(category.value for category in sorted_categories(categories))


def write_extract(
    tweets: Iterable[ValidatedTweet], corpus: QuranCorpus, out_dir: PathLike
) -> Tuple[Path, Path]:
    """Write ``matches.tsv`` (one row per match) and ``tweets.tsv``."""
    out_dir = Path(out_dir)
    match_rows: List[List[Any]] = []
    tweet_rows: List[List[Any]] = []
    for tweet in tweets:
        record = tweet.record
        for match in tweet.matches:
            match_rows.append(
                [
                    record.id,
                    record.author_id,
                    tweet.dataset,
                    match.tweet_sentence_index,
                    match.verse.sura,
                    match.verse.ayah,
                    match.kind.value,
                    _categories_cell(corpus.verses[match.verse].categories),
                    tweet.weight,
                ]
            )
        tweet_rows.append(
            [
                record.id,
                record.author_id,
                record.author_name,
                record.followers,
                tweet.retweet_count,
                tweet.weight,
                tweet.dataset,
                record.source_app,
                record.created_at.isoformat() if record.created_at else "",
                len(tweet.matches),
                record.text,
            ]
        )
    return (
        write_tsv(match_rows, MATCH_COLUMNS, out_dir / "matches.tsv"),
        write_tsv(tweet_rows, TWEET_COLUMNS, out_dir / "tweets.tsv"),
    )


def _int_cell(value: str, line_no: int, column: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise SchemaViolation(line_no, column, "not an integer") from None


def read_extract(matches_path: PathLike, tweets_path: PathLike) -> List[TweetMatches]:
    """Join the two extract files back into ``TweetMatches`` in tweet-file order.

    Match rows without a tweet row, and tweet rows without matches, are
    dropped and counted in a warning.
    """
    matches = read_tsv(matches_path, MATCH_COLUMNS)
    tweets = read_tsv(tweets_path, TWEET_COLUMNS)

    occurrences: Dict[str, List[VerseOccurrence]] = defaultdict(list)
    for line_no, row in enumerate(matches.itertuples(index=False), 2):
        try:
            ref = VerseRef(_int_cell(row.sura, line_no, "sura"), _int_cell(row.ayah, line_no, "ayah"))
            kind = MatchKind(row.kind)
            categories = frozenset(Category(name) for name in row.categories.split(";") if name)
        except ValueError as e:
            if isinstance(e, SchemaViolation):
                raise
            raise SchemaViolation(line_no, "kind/categories", str(e)) from None
        occurrences[row.tweet_id].append(
            VerseOccurrence(ref, kind, _int_cell(row.sentence, line_no, "sentence"), categories)
        )

    joined: List[TweetMatches] = []
    seen = set()
    without_matches = 0
    for line_no, row in enumerate(tweets.itertuples(index=False), 2):
        seen.add(row.tweet_id)
        if row.tweet_id not in occurrences:
            without_matches += 1
            continue
        joined.append(
            TweetMatches(
                tweet_id=row.tweet_id,
                author_id=row.author_id,
                dataset=row.dataset,
                retweet_count=_int_cell(row.retweet_count, line_no, "retweet_count"),
                followers=_int_cell(row.followers, line_no, "followers"),
                occurrences=tuple(occurrences[row.tweet_id]),
                text=row.text,
            )
        )

    orphans = sum(len(found) for tweet_id, found in occurrences.items() if tweet_id not in seen)
    if orphans:
        logger.warning("%d match rows reference tweets missing from %s", orphans, tweets_path)
    if without_matches:
        logger.warning("%d tweets in %s have no match rows", without_matches, tweets_path)
    return joined


def write_category_distribution(
    baseline: CategoryDistribution,
    distributions: Mapping[str, CategoryDistribution],
    path: PathLike,
) -> Path:
    columns = ["category", "quran_count", "quran_percent"]
    for dataset in distributions:
        columns += [f"{dataset}_volume", f"{dataset}_percent"]
    rows = []
    for category in Category:
        row = [category.value, fmt_count(baseline.volume(category)), fmt_float(baseline.percentage(category))]
        for distribution in distributions.values():
            row += [fmt_count(distribution.volume(category)), fmt_float(distribution.percentage(category))]
        rows.append(row)
    return write_tsv(rows, columns, path)


def write_grouped_distribution(distributions: Mapping[str, CategoryDistribution], path: PathLike) -> Path:
    rows = [
        [group, category.value, fmt_count(distribution.volume(category)), fmt_float(distribution.percentage(category))]
        for group, distribution in distributions.items()
        for category in Category
    ]
    return write_tsv(rows, ["group", "category", "volume", "percent"], path)


def write_leaderboard(leaderboard: VerseLeaderboard, path: PathLike) -> Path:
    rows = [
        [entry.rank, entry.verse.sura, entry.verse.ayah, entry.kind.value, fmt_count(entry.count)]
        for entry in leaderboard
    ]
    return write_tsv(rows, LEADERBOARD_COLUMNS, path)


def write_top_by_category(top: Mapping[Category, LeaderboardEntry], path: PathLike) -> Path:
    rows = [
        [category.value, entry.verse.sura, entry.verse.ayah, entry.kind.value, fmt_count(entry.count)]
        for category, entry in top.items()
    ]
    return write_tsv(rows, ["category", "sura", "ayah", "kind", "count"], path)


def write_histogram(histogram: RetweetHistogram, path: PathLike) -> Path:
    return write_tsv(histogram.items(), ["retweet_count", "tweets"], path)


def write_loglog_points(histogram: RetweetHistogram, path: PathLike) -> Path:
    rows = [
        [count, freq, fmt_float(math.log10(count)), fmt_float(math.log10(freq))]
        for count, freq in histogram.loglog_points()
    ]
    return write_tsv(rows, ["retweet_count", "tweets", "log10_retweet_count", "log10_tweets"], path)


def partition_row(name: str, stats: PartitionStats) -> List[Any]:
    return [
        name,
        stats.account_count,
        stats.tweet_count,
        stats.verse_count,
        stats.tweet_volume,
        stats.verse_volume,
        fmt_float(stats.avg_verses_per_tweet),
        fmt_float(stats.avg_retweets_per_tweet),
        fmt_float(stats.retweeted_fraction),
    ]


def write_partition_stats(stats: Mapping[str, PartitionStats], path: PathLike) -> Path:
    return write_tsv([partition_row(name, s) for name, s in stats.items()], PARTITION_COLUMNS, path)


def write_influential(accounts: Sequence[AccountProfile], path: PathLike) -> Path:
    rows = [
        [
            rank,
            account.author_id,
            account.tweet_count,
            account.total_retweets_received,
            account.followers,
            account.label.value if account.label else "",
        ]
        for rank, account in enumerate(accounts, 1)
    ]
    return write_tsv(rows, ["rank", "author_id", "tweets", "retweets", "followers", "label"], path)


def write_review_sample(sample: ReviewSample, path: PathLike) -> Path:
    rows = [
        [row.stratum.value, row.tweet_id, row.verse.sura, row.verse.ayah, row.kind.value, row.text]
        for row in sample
    ]
    return write_tsv(rows, ["stratum", "tweet_id", "sura", "ayah", "kind", "text"], path)


def distribution_summary(distribution: CategoryDistribution) -> Dict[str, Any]:
    return {
        "total_verse_volume": fmt_count(distribution.total_verse_volume),
        "percent": {category.value: fmt_float(distribution.percentage(category)) for category in Category},
    }


def stats_summary(stats: PartitionStats) -> Dict[str, Any]:
    return dict(zip(PARTITION_COLUMNS[1:], partition_row("", stats)[1:]))
