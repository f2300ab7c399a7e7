import random
import unittest

from ayat.normalizer import extract_hashtags, normalize, split_sentences, tokenize


class TestNormalize(unittest.TestCase):
    def test_strips_diacritics(self):
        self.assertEqual(normalize("إِنَّا فَتَحْنَا لَكَ فَتْحًا مُبِينًا"), "انا فتحنا لك فتحا مبينا")

    def test_folds_letter_variants(self):
        self.assertEqual(normalize("أإآ"), "ااا")
        self.assertEqual(normalize("مؤمن"), "مءمن")
        self.assertEqual(normalize("رحمة"), "رحمه")
        self.assertEqual(normalize("على"), "علي")

    def test_removes_kashida(self):
        self.assertEqual(normalize("الـــله"), "الله")

    def test_removes_mentions_and_hashtags(self):
        self.assertEqual(normalize("@user قل هو الله أحد #جمعة_مباركة"), "قل هو الله احد")

    def test_hashtag_inside_word_is_kept(self):
        self.assertEqual(normalize("abc#def"), "abc#def")

    def test_collapses_whitespace(self):
        self.assertEqual(normalize("  قل\t هو\n\nالله  "), "قل هو الله")

    def test_removes_invisible_characters(self):
        zwnj, rlm, bom = chr(0x200C), chr(0x200F), chr(0xFEFF)
        self.assertEqual(normalize(f"قل{zwnj} هو{rlm} الله{bom}"), "قل هو الله")

    def test_folds_presentation_forms(self):
        # LAM WITH ALEF ligature, isolated form.
        self.assertEqual(normalize(chr(0xFEFB)), "لا")

    def test_removes_quranic_marks(self):
        self.assertEqual(normalize("الرحيم" + chr(0x06DA)), "الرحيم")

    def test_empty_input(self):
        self.assertEqual(normalize(""), "")
        self.assertEqual(normalize("   "), "")
        self.assertEqual(tokenize("#"), ())

    def test_idempotent(self):
        samples = [
            "إِنَّا فَتَحْنَا لَكَ فَتْحًا مُبِينًا",
            "@user قل أعوذ برب الناس #الناس",
            "الـــرحمة على المؤمنين" + chr(0x200C),
            "#",
            "",
        ]
        for sample in samples:
            once = normalize(sample)
            self.assertEqual(normalize(once), once, sample)


class TestSplitSentences(unittest.TestCase):
    def test_splits_on_arabic_and_latin_punctuation(self):
        text = split_sentences("قل هو الله أحد، الله الصمد. لم يلد ولم يولد؟ نعم!")
        self.assertEqual(
            list(text.sentences()),
            [("قل", "هو", "الله", "احد"), ("الله", "الصمد"), ("لم", "يلد", "ولم", "يولد"), ("نعم",)],
        )

    def test_colon_and_newline_split(self):
        text = split_sentences("قال تعالى: وما كان ربك نسيا\nصدق الله العظيم")
        self.assertEqual(
            list(text.sentences()),
            [("قال", "تعالي"), ("وما", "كان", "ربك", "نسيا"), ("صدق", "الله", "العظيم")],
        )

    def test_empty_sentences_are_dropped(self):
        text = split_sentences("... ، #وسم .")
        self.assertEqual(len(text), 0)
        self.assertEqual(text.tokens, ())

    def test_bounds_index_into_tokens(self):
        text = split_sentences("من شر ما خلق. ملك الناس")
        self.assertEqual(text.sentence_bounds, ((0, 4), (4, 6)))
        self.assertEqual(text.tokens[4:6], ("ملك", "الناس"))

    def test_quotes_and_brackets_split(self):
        text = split_sentences("«قل هو الله أحد» (الإخلاص)")
        self.assertEqual(list(text.sentences()), [("قل", "هو", "الله", "احد"), ("الاخلاص",)])


class TestExtractHashtags(unittest.TestCase):
    def test_bodies_are_normalized(self):
        self.assertEqual(extract_hashtags("دعاء #جمعة_مباركة و #القرآن"), ["جمعه مباركه", "القران"])

    def test_no_hashtags(self):
        self.assertEqual(extract_hashtags("قل هو الله أحد"), [])
        self.assertEqual(extract_hashtags(""), [])


class TestNormalizeProperties(unittest.TestCase):
    def setUp(self):
        arabic = [chr(c) for c in range(0x0600, 0x0700)]
        forms = [chr(c) for c in list(range(0xFB50, 0xFE00)) + list(range(0xFE70, 0xFEFD))]
        invisible = [chr(c) for c in (0x200B, 0x200C, 0x200D, 0x200E, 0x200F, 0x202B, 0x2067, 0xFEFF)]
        self.alphabet = arabic + forms + invisible + list("@#_ .,!?:\n\t") + [" "] * 20
        self.forbidden = set(chr(c) for c in range(0x064B, 0x0660))
        self.forbidden |= {chr(0x0670), chr(0x0640)} | set("أإآؤئةى")
        self.forbidden |= set(chr(c) for c in range(0x0610, 0x061B))
        self.forbidden |= set(invisible)
        self.rng = random.Random(1447)

    def random_text(self):
        return "".join(self.rng.choice(self.alphabet) for _ in range(self.rng.randint(0, 40)))

    def test_random_strings(self):
        for _ in range(20_000):
            raw = self.random_text()
            once = normalize(raw)
            self.assertEqual(normalize(once), once, repr(raw))
            self.assertFalse(self.forbidden & set(once), repr(raw))
            for token in once.split():
                self.assertFalse(token.startswith(("@", "#")), repr(raw))
