import argparse
import unittest
from pathlib import Path

from ayat.analytics import WeightMode
from ayat.config import PipelineConfig
from ayat.errors import ConfigError


class TestPipelineConfig(unittest.TestCase):
    def test_defaults(self):
        config = PipelineConfig()
        config.validate()
        self.assertEqual(config.min_tokens, 3)
        self.assertEqual(config.weight, WeightMode.VOLUME)
        self.assertEqual(config.resolved_index_path, Path("index.sqlite"))

    def test_from_args(self):
        args = argparse.Namespace(
            corpus_path="data/quran-simple-clean.txt",
            out_dir="out",
            min_tokens=None,
            hashtags=["#مسجد_النور"],
            weight_mode="count",
            verbose=True,
        )
        config = PipelineConfig.from_args(args)
        self.assertEqual(config.corpus_path, Path("data/quran-simple-clean.txt"))
        self.assertEqual(config.out_dir, Path("out"))
        self.assertEqual(config.min_tokens, 3)
        self.assertEqual(config.hashtags, ("#مسجد_النور",))
        self.assertEqual(config.resolved_index_path, Path("out/index.sqlite"))

    def test_short_matches_need_override(self):
        with self.assertRaises(ConfigError):
            PipelineConfig(min_tokens=2).validate()
        PipelineConfig(min_tokens=2, allow_short_matches=True).validate()
        with self.assertRaises(ConfigError):
            PipelineConfig(min_tokens=1, allow_short_matches=True).validate()

    def test_invalid_values(self):
        for bad in (
            PipelineConfig(weight_mode="likes"),
            PipelineConfig(workers=0),
            PipelineConfig(top_n=0),
            PipelineConfig(influential_k=0),
            PipelineConfig(corpus_format="xml"),
        ):
            with self.assertRaises(ConfigError):
                bad.validate()

    def test_echo_leaves_out_location(self):
        first = PipelineConfig(out_dir=Path("run1"), corpus_path=Path("/data/a/quran.txt"), workers=4)
        second = PipelineConfig(out_dir=Path("run2"), corpus_path=Path("/other/quran.txt"))
        self.assertEqual(first.echo(), second.echo())
        self.assertEqual(first.echo()["corpus_path"], "quran.txt")
        self.assertNotIn("out_dir", first.echo())
