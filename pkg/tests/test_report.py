import tempfile
import unittest
from fractions import Fraction
from pathlib import Path

from ayat.corpus import Category, VerseRef
from ayat.errors import RecordFileError, SchemaViolation
from ayat.matcher import MatchKind
from ayat.report import MATCH_COLUMNS, TWEET_COLUMNS, fmt_count, read_extract, write_tsv


def tweet_row(tweet_id, author_id="h1", retweets=0, text="نص"):
    return [tweet_id, author_id, "", 10, retweets, 1 + retweets, "human", "", "", 1, text]


class TestFormatting(unittest.TestCase):
    def test_counts(self):
        self.assertEqual(fmt_count(12), "12")
        self.assertEqual(fmt_count(Fraction(6, 2)), "3")
        self.assertEqual(fmt_count(Fraction(1, 3)), "0.3333")


class TestReadExtract(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def test_join_keeps_tweet_order(self):
        matches = write_tsv(
            [
                ["2", "h2", "human", 0, 112, 1, "full", "God", 1],
                ["1", "h1", "human", 1, 19, 64, "fragment", "AboutQuran;God", 5],
                ["9", "h9", "human", 0, 68, 4, "full", "Muhammad", 1],
            ],
            MATCH_COLUMNS,
            self.tmp / "matches.tsv",
        )
        tweets = write_tsv(
            [tweet_row("1", retweets=4, text="قال تعالى:\tوما كان ربك نسيا"), tweet_row("2", "h2"), tweet_row("3")],
            TWEET_COLUMNS,
            self.tmp / "tweets.tsv",
        )
        with self.assertLogs("ayat.report", level="WARNING") as logs:
            joined = read_extract(matches, tweets)

        self.assertEqual([tweet.tweet_id for tweet in joined], ["1", "2"])
        first = joined[0]
        self.assertEqual(first.retweet_count, 4)
        self.assertEqual(first.text, "قال تعالى:\tوما كان ربك نسيا")
        occurrence = first.occurrences[0]
        self.assertEqual((occurrence.verse, occurrence.kind), (VerseRef(19, 64), MatchKind.FRAGMENT))
        self.assertEqual(occurrence.categories, frozenset({Category.AboutQuran, Category.God}))
        self.assertEqual(len(logs.output), 2)

    def test_texts_survive_round_trip(self):
        texts = ["a\rb", "tab\there", 'say "hi"', "line\nbreak", "crlf\r\nend", "NA", ""]
        ids = [str(n) for n in range(len(texts))]
        matches = write_tsv(
            [[tweet_id, "h1", "human", 0, 112, 1, "full", "God", 1] for tweet_id in ids],
            MATCH_COLUMNS,
            self.tmp / "matches.tsv",
        )
        tweets = write_tsv(
            [tweet_row(tweet_id, text=text) for tweet_id, text in zip(ids, texts)],
            TWEET_COLUMNS,
            self.tmp / "tweets.tsv",
        )
        joined = read_extract(matches, tweets)
        self.assertEqual([tweet.text for tweet in joined], texts)
        self.assertEqual([tweet.tweet_id for tweet in joined], ids)

    def test_missing_column(self):
        matches = write_tsv([], MATCH_COLUMNS[:-1], self.tmp / "matches.tsv")
        tweets = write_tsv([], TWEET_COLUMNS, self.tmp / "tweets.tsv")
        with self.assertRaises(SchemaViolation) as ctx:
            read_extract(matches, tweets)
        self.assertEqual(ctx.exception.field, "weight")

    def test_bad_verse_cell(self):
        matches = write_tsv(
            [["1", "h1", "human", 0, "x", 1, "full", "God", 1]], MATCH_COLUMNS, self.tmp / "matches.tsv"
        )
        tweets = write_tsv([tweet_row("1")], TWEET_COLUMNS, self.tmp / "tweets.tsv")
        with self.assertRaises(SchemaViolation):
            read_extract(matches, tweets)

    def test_missing_file(self):
        with self.assertRaises(RecordFileError):
            read_extract(self.tmp / "matches.tsv", self.tmp / "tweets.tsv")
