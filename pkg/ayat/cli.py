import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from ayat import __version__, report
from ayat.analytics import (
    KindFilter,
    RetweetHistogram,
    build_account_profiles,
    category_distribution,
    dataset_partition_stats,
    follower_retweet_correlation,
    grouped_distribution,
    labeled_partition_stats,
    load_account_labels,
    quran_baseline,
    retweet_histogram,
    sample_for_review,
    select_influential,
    top_verse_per_category,
    top_verses,
)
from ayat.artifact import content_hash, load_artifact, save_artifact
from ayat.config import PipelineConfig
from ayat.corpus import QuranCorpus, category_counts, load_categories, load_corpus
from ayat.errors import AyatError, ConfigError, DegenerateInput, EmptyDataset
from ayat.ingest import (
    DEFAULT_APP_IDENTIFIERS,
    KeyPhraseSet,
    TweetRecord,
    hashtag_filter,
    keyphrase_filter,
    load_app_registry,
    load_key_phrases,
    match_records,
    partition_matched,
    read_records,
    write_records,
)
from ayat.matcher import MatchIndex, MatchList, build_index, extract_verses

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_EMPTY = 1
EXIT_INPUT = 2

SHARD_CHUNK = 2000


def _corpus_from_config(config: PipelineConfig) -> Tuple[QuranCorpus, str]:
    """The categorized corpus and its content hash, from source files or an artifact."""
    if config.corpus_path is not None and config.index_path is None:
        corpus = load_corpus(config.corpus_path, config.corpus_format, config.allow_incomplete)
        if config.categories_path is not None:
            corpus = load_categories(config.categories_path, corpus)
        return corpus, content_hash(corpus)

    artifact = load_artifact(config.resolved_index_path)
    return artifact.corpus, artifact.content_hash


def _app_registry(config: PipelineConfig) -> List[str]:
    if config.apps_path is None:
        return list(DEFAULT_APP_IDENTIFIERS)
    return load_app_registry(config.apps_path)


def _key_phrases(config: PipelineConfig) -> KeyPhraseSet:
    if config.phrases_path is None:
        return KeyPhraseSet.default()
    return load_key_phrases(config.phrases_path)


def cmd_build_index(config: PipelineConfig, args: argparse.Namespace) -> int:
    if config.corpus_path is None:
        raise ConfigError("build-index needs --corpus")
    corpus = load_corpus(config.corpus_path, config.corpus_format, config.allow_incomplete)
    if config.categories_path is not None:
        corpus = load_categories(config.categories_path, corpus)

    path = config.resolved_index_path
    digest = save_artifact(corpus, path)

    print(f"{len(corpus)} verses in {corpus.sura_count} suras; sha256 {digest}")
    for category, (count, percent) in category_counts(corpus).items():
        print(f"{category.display_name:<22}{count:>6}{percent:>8.1f}%")
    return EXIT_OK


def _scoped_records(config: PipelineConfig, records: Iterator[TweetRecord]) -> Iterator[TweetRecord]:
    if config.hashtags:
        records = hashtag_filter(records, config.hashtags)
    return records


def cmd_filter(config: PipelineConfig, args: argparse.Namespace) -> int:
    records = _scoped_records(config, read_records(args.records, config.strict))
    if not config.hashtags or config.phrases_path is not None:
        records = keyphrase_filter(records, _key_phrases(config))

    path = config.out_dir / "filtered.jsonl"
    path.parent.mkdir(parents=True, exist_ok=True)
    kept = write_records(records, path)
    print(f"{kept} records kept in {path}")
    return EXIT_OK if kept else EXIT_EMPTY


_WORKER_INDEX: Optional[MatchIndex] = None


def _init_worker(index_path: str, min_tokens: int, full_suppresses_fragments: bool) -> None:
    global _WORKER_INDEX
    corpus = load_artifact(index_path).corpus
    _WORKER_INDEX = build_index(corpus, min_tokens, full_suppresses_fragments)


def _match_chunk(records: List[TweetRecord]) -> List[Optional[MatchList]]:
    return [None if record.is_retweet else extract_verses(_WORKER_INDEX, record.text) for record in records]


def _chunks(records: List[TweetRecord], size: int) -> Iterator[List[TweetRecord]]:
    for start in range(0, len(records), size):
        yield records[start:start + size]


def _sharded_matches(
    config: PipelineConfig, records: List[TweetRecord], index_path: Path
) -> Iterator[Tuple[TweetRecord, Optional[MatchList]]]:
    """Match records across worker processes; results keep input order."""
    chunks = list(_chunks(records, SHARD_CHUNK))
    initargs = (str(index_path), config.min_tokens, config.full_suppresses_fragments)
    with ProcessPoolExecutor(config.workers, initializer=_init_worker, initargs=initargs) as pool:
        for chunk, results in zip(chunks, pool.map(_match_chunk, chunks)):
            yield from zip(chunk, results)


def cmd_extract(config: PipelineConfig, args: argparse.Namespace) -> int:
    corpus, digest = _corpus_from_config(config)
    records = _scoped_records(config, read_records(args.records, config.strict))
    registry = _app_registry(config)

    if config.workers > 1:
        index_path = config.resolved_index_path
        if config.index_path is None and config.corpus_path is not None:
            save_artifact(corpus, index_path)
        logger.info("Matching across %d worker processes", config.workers)
        partition = partition_matched(_sharded_matches(config, list(records), index_path), registry)
    else:
        index = build_index(corpus, config.min_tokens, config.full_suppresses_fragments)
        partition = partition_matched(match_records(records, index), registry)

    report.write_extract(partition.tweets(), corpus, config.out_dir)
    summary = {
        "index_sha256": digest,
        "records_sha256": report.file_sha256(args.records),
        "config": config.echo(),
        "records_seen": partition.records_seen,
        "retweet_records": partition.retweet_records,
        "dangling_retweets": partition.dangling_retweets,
        "validated_tweets": partition.validated_count,
        "verse_occurrences": sum(stats.verse_count for stats in partition.stats.values()),
        "datasets": {name: report.stats_summary(stats) for name, stats in partition.stats.items()},
    }
    report.write_json(summary, config.out_dir / "extract_summary.json")

    print(
        f"{partition.validated_count} of {partition.records_seen} records hold verses "
        f"({summary['verse_occurrences']} occurrences)"
    )
    if not partition.validated_count:
        logger.warning("No tweet in %s matched a verse", args.records)
        return EXIT_EMPTY
    return EXIT_OK


def _extract_inputs(config: PipelineConfig, args: argparse.Namespace) -> Tuple[Path, Path]:
    matches = Path(args.matches) if args.matches else config.out_dir / "matches.tsv"
    tweets = Path(args.tweets) if args.tweets else config.out_dir / "tweets.tsv"
    return matches, tweets


def _optional_statistic(compute: Callable[[], float], name: str) -> Optional[float]:
    try:
        return compute()
    except DegenerateInput as e:
        logger.warning("%s not computed: %s", name, e)
        return None


def cmd_analyze(config: PipelineConfig, args: argparse.Namespace) -> int:
    matches_path, tweets_path = _extract_inputs(config, args)
    tweets = report.read_extract(matches_path, tweets_path)
    if not tweets:
        raise EmptyDataset(f"{matches_path} holds no matched tweets")
    corpus, digest = _corpus_from_config(config)

    mode, distinct = config.weight, config.distinct_verses
    labels = load_account_labels(config.labels_path) if config.labels_path else {}
    profiles = build_account_profiles(tweets, labels)
    human = [tweet for tweet in tweets if tweet.dataset == "human"]
    out = config.out_dir

    distributions = {"all": category_distribution(tweets, mode, distinct)}
    distributions.update(grouped_distribution(tweets, "dataset", weight_mode=mode, distinct_verses=distinct))
    report.write_category_distribution(quran_baseline(corpus), distributions, out / "category_distribution.tsv")
    if labels:
        by_label = grouped_distribution(tweets, "label", profiles, mode, distinct)
        report.write_grouped_distribution(by_label, out / "grouped_distribution.tsv")

    top_n = config.top_n
    report.write_leaderboard(top_verses(human, KindFilter.FULL, top_n, mode, distinct), out / "top_full.tsv")
    report.write_leaderboard(top_verses(human, KindFilter.FRAGMENT, top_n, mode, distinct), out / "top_fragment.tsv")
    report.write_top_by_category(
        top_verse_per_category(human, KindFilter.BOTH, mode, distinct), out / "top_by_category.tsv"
    )

    histogram: RetweetHistogram = retweet_histogram(tweet.retweet_count for tweet in tweets)
    report.write_histogram(histogram, out / "retweet_histogram.tsv")
    report.write_loglog_points(histogram, out / "retweet_loglog.tsv")

    partition_stats = dataset_partition_stats(tweets)
    if labels:
        partition_stats.update(labeled_partition_stats(tweets, profiles))
    report.write_partition_stats(partition_stats, out / "partition_stats.tsv")

    influential = select_influential(profiles.values(), config.influential_k)
    report.write_influential(influential, out / "influential_accounts.tsv")

    accounts = list(profiles.values())
    correlation = _optional_statistic(lambda: follower_retweet_correlation(accounts), "correlation")
    slope = _optional_statistic(histogram.fit_loglog_slope, "log-log slope")

    inputs = {"matches": report.file_sha256(matches_path), "tweets": report.file_sha256(tweets_path)}
    if config.labels_path:
        inputs["labels"] = report.file_sha256(config.labels_path)
    summary: Dict[str, Any] = {
        "index_sha256": digest,
        "inputs_sha256": inputs,
        "config": config.echo(),
        "tweets": len(tweets),
        "accounts": len(profiles),
        "labeled_accounts": sum(1 for profile in profiles.values() if profile.label),
        "distribution": {name: report.distribution_summary(d) for name, d in distributions.items()},
        "retweeted_fraction": report.fmt_float(histogram.retweeted_fraction),
        "loglog_slope": None if slope is None else report.fmt_float(slope),
        "follower_retweet_correlation": None if correlation is None else report.fmt_float(correlation),
        "influential_retweets": sum(profile.total_retweets_received for profile in influential),
    }
    report.write_json(summary, out / "summary.json")
    print(f"Analyzed {len(tweets)} tweets from {len(profiles)} accounts into {out}")
    return EXIT_OK


def cmd_sample(config: PipelineConfig, args: argparse.Namespace) -> int:
    matches_path, tweets_path = _extract_inputs(config, args)
    tweets = report.read_extract(matches_path, tweets_path)
    if not tweets:
        raise EmptyDataset(f"{matches_path} holds no matched tweets")

    sample = sample_for_review(tweets, args.n_full, args.n_fragment, config.seed)
    path = report.write_review_sample(sample, config.out_dir / "review_sample.tsv")
    print(f"{len(sample)} tweets sampled into {path}")
    return EXIT_OK


def _add_corpus_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corpus", dest="corpus_path", help="Quran text file")
    parser.add_argument("--categories", dest="categories_path", help="verse category CSV")
    parser.add_argument("--corpus-format", dest="corpus_format", help="tanzil-pipe (default) or tsv")
    parser.add_argument(
        "--allow-incomplete", action="store_true", help="accept a corpus short of 6236 verses"
    )
    parser.add_argument("--index", dest="index_path", help="index artifact (default OUT/index.sqlite)")


def _add_extract_file_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--matches", help="matches.tsv (default OUT/matches.tsv)")
    parser.add_argument("--tweets", help="tweets.tsv (default OUT/tweets.tsv)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", dest="out_dir", default=".", help="output directory")
    common.add_argument("--seed", type=int, help="seed for sampling")
    common.add_argument("--strict", action="store_true", help="fail on the first malformed record")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")

    parser = argparse.ArgumentParser(
        prog="ayat", description="Find Quran verses in tweets and analyze how they are shared."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    build = commands.add_parser("build-index", parents=[common], help="parse and store the corpus")
    _add_corpus_arguments(build)
    build.set_defaults(handler=cmd_build_index)

    filter_ = commands.add_parser("filter", parents=[common], help="keep records with key phrases")
    filter_.add_argument("records", help="JSON-lines tweet records")
    filter_.add_argument("--phrases", dest="phrases_path", help="key phrase file")
    filter_.add_argument("--hashtag", dest="hashtags", action="append", help="keep records with this hashtag")
    filter_.set_defaults(handler=cmd_filter)

    extract = commands.add_parser("extract", parents=[common], help="match verses in records")
    extract.add_argument("records", help="JSON-lines tweet records")
    _add_corpus_arguments(extract)
    extract.add_argument("--apps", dest="apps_path", help="app identifier file")
    extract.add_argument("--min-tokens", dest="min_tokens", type=int)
    extract.add_argument("--allow-short-matches", action="store_true")
    extract.add_argument(
        "--full-suppresses-fragments",
        action="store_true",
        help="drop Fragment matches of a sentence that is a whole verse",
    )
    extract.add_argument("--hashtag", dest="hashtags", action="append", help="only records with this hashtag")
    extract.add_argument("--workers", type=int, help="worker processes")
    extract.set_defaults(handler=cmd_extract)

    analyze = commands.add_parser("analyze", parents=[common], help="write the report bundle")
    _add_extract_file_arguments(analyze)
    _add_corpus_arguments(analyze)
    analyze.add_argument("--labels", dest="labels_path", help="account label CSV")
    analyze.add_argument("--weight-mode", dest="weight_mode", choices=["volume", "count"])
    analyze.add_argument("--distinct-verses", action="store_true")
    analyze.add_argument("--top", dest="top_n", type=int)
    analyze.add_argument("--influential", dest="influential_k", type=int)
    analyze.set_defaults(handler=cmd_analyze)

    sample = commands.add_parser("sample", parents=[common], help="draw tweets for manual review")
    _add_extract_file_arguments(sample)
    sample.add_argument("--n-full", dest="n_full", type=int, default=100)
    sample.add_argument("--n-fragment", dest="n_fragment", type=int, default=100)
    sample.set_defaults(handler=cmd_sample)

    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(asctime)s - %(levelname)s - %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    try:
        config = PipelineConfig.from_args(args)
        return args.handler(config, args)
    except EmptyDataset as e:
        logger.warning("%s", e)
        return EXIT_EMPTY
    except AyatError as e:
        logger.error("%s", e)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
