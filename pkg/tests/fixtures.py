"""Corpora, category files and tweet records shared by the tests."""
import csv
import json
import random
from pathlib import Path
from typing import Any, Dict, Iterable, List, Tuple

from ayat.corpus import AYAH_COUNTS, Category, QuranCorpus, Verse, VerseRef

REAL_VERSES: List[Tuple[int, int, str]] = [
    (1, 1, "بسم الله الرحمن الرحيم"),
    (1, 2, "الحمد لله رب العالمين"),
    (1, 3, "الرحمن الرحيم"),
    (1, 4, "مالك يوم الدين"),
    (1, 5, "إياك نعبد وإياك نستعين"),
    (1, 6, "اهدنا الصراط المستقيم"),
    (1, 7, "صراط الذين أنعمت عليهم غير المغضوب عليهم ولا الضالين"),
    (19, 64, "وما نتنزل إلا بأمر ربك له ما بين أيدينا وما خلفنا وما بين ذلك وما كان ربك نسيا"),
    (27, 30, "إنه من سليمان وإنه بسم الله الرحمن الرحيم"),
    (33, 56, "إن الله وملائكته يصلون على النبي يا أيها الذين آمنوا صلوا عليه وسلموا تسليما"),
    (48, 1, "إِنَّا فَتَحْنَا لَكَ فَتْحًا مُبِينًا"),
    (
        65,
        1,
        "يا أيها النبي إذا طلقتم النساء فطلقوهن لعدتهن وأحصوا العدة واتقوا الله ربكم "
        "لا تخرجوهن من بيوتهن ولا يخرجن إلا أن يأتين بفاحشة مبينة وتلك حدود الله "
        "ومن يتعد حدود الله فقد ظلم نفسه لا تدري لعل الله يحدث بعد ذلك أمرا",
    ),
    (68, 4, "وإنك لعلى خلق عظيم"),
    (112, 1, "قل هو الله أحد"),
    (112, 2, "الله الصمد"),
    (112, 3, "لم يلد ولم يولد"),
    (112, 4, "ولم يكن له كفوا أحد"),
    (113, 1, "قل أعوذ برب الفلق"),
    (113, 2, "من شر ما خلق"),
    (113, 3, "ومن شر غاسق إذا وقب"),
    (113, 4, "ومن شر النفاثات في العقد"),
    (113, 5, "ومن شر حاسد إذا حسد"),
    (114, 1, "قل أعوذ برب الناس"),
    (114, 2, "ملك الناس"),
    (114, 3, "إله الناس"),
    (114, 4, "من شر الوسواس الخناس"),
    (114, 5, "الذي يوسوس في صدور الناس"),
    (114, 6, "من الجنة والناس"),
]

REAL_CATEGORIES: List[Tuple[int, int, str]] = [
    (1, 1, "God"),
    (1, 5, "Worship"),
    (19, 64, "About Quran;God"),
    (27, 30, "Stories of Prophets"),
    (33, 56, "Muhammad;Worship"),
    (48, 1, "Muhammad;Jihad"),
    (65, 1, "Sharia Law/Divorce"),
    (68, 4, "Muhammad"),
    (112, 1, "God"),
    (112, 2, "God"),
    (113, 1, "Worship"),
    (114, 1, "Worship"),
]

TABLE_COUNTS: List[Tuple[Category, int]] = [
    (Category.HereafterUnseens, 1701),
    (Category.StoriesOfProphets, 1581),
    (Category.Disbelievers, 684),
    (Category.ShariaLaw, 487),
    (Category.Jihad, 397),
    (Category.UniverseCreation, 388),
    (Category.Worship, 337),
    (Category.BeliefBelievers, 331),
    (Category.AboutQuran, 330),
    (Category.Muhammad, 326),
    (Category.God, 322),
    (Category.Sins, 98),
    (Category.HumanBeing, 71),
]
GENERAL_COUNT = 1324

# Letters untouched by normalization, for synthetic words.
SYNTHETIC_LETTERS = "بتثجحخدذرزسشصضطظعغفقكلمنو"


def write_lines(path: Path, lines: Iterable[str]) -> Path:
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path


def write_quran(path: Path, verses: Iterable[Tuple[int, int, str]], separator: str = "|") -> Path:
    return write_lines(path, (f"{s}{separator}{a}{separator}{text}" for s, a, text in verses))


def write_categories(path: Path, rows: Iterable[Tuple[int, int, str]]) -> Path:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sura", "ayah", "categories"])
        for sura, ayah, categories in rows:
            writer.writerow([sura, ayah, categories])
    return path


def write_records(path: Path, records: Iterable[Dict[str, Any]]) -> Path:
    return write_lines(path, (json.dumps(record, ensure_ascii=False) for record in records))


def record(tweet_id: str, text: str, author_id: str = "a1", **fields: Any) -> Dict[str, Any]:
    obj = {"id": tweet_id, "text": text, "author_id": author_id}
    obj.update(fields)
    return obj


def synthetic_word(n: int) -> str:
    """A distinct word for every non-negative ``n``."""
    letters = SYNTHETIC_LETTERS
    word = letters[n % len(letters)]
    n //= len(letters)
    while n:
        word += letters[n % len(letters)]
        n //= len(letters)
    return word + "ا"


def all_refs() -> List[VerseRef]:
    return [VerseRef(sura, ayah) for sura, count in enumerate(AYAH_COUNTS, 1) for ayah in range(1, count + 1)]


def complete_verses() -> List[Tuple[int, int, str]]:
    """6,236 verses of synthetic text in canonical order."""
    return [
        (ref.sura, ref.ayah, f"{synthetic_word(ref.sura)} {synthetic_word(1000 + ref.ayah)} {synthetic_word(position)}")
        for position, ref in enumerate(all_refs())
    ]


def table_category_rows() -> List[Tuple[int, int, str]]:
    """Categories laid out so the per-category counts match the reference counts.

    Each category takes a contiguous run of the first 4,912 verses, wrapping
    around; the remaining 1,324 verses stay General.
    """
    refs = all_refs()
    span = len(refs) - GENERAL_COUNT
    assigned: Dict[int, List[str]] = {}
    cursor = 0
    for category, count in TABLE_COUNTS:
        for offset in range(count):
            assigned.setdefault((cursor + offset) % span, []).append(category.value)
        cursor = (cursor + count) % span
    return [(refs[i].sura, refs[i].ayah, ";".join(assigned[i])) for i in sorted(assigned)]


def synthetic_corpus(
    verse_count: int, vocabulary: int, rng: random.Random, min_len: int = 3, max_len: int = 20
) -> QuranCorpus:
    """Random verses over a small vocabulary, so runs repeat across verses."""
    words = [synthetic_word(n) for n in range(vocabulary)]
    refs = all_refs()[:verse_count]
    verses = [
        Verse.from_text(ref, " ".join(rng.choice(words) for _ in range(rng.randint(min_len, max_len))))
        for ref in refs
    ]
    return QuranCorpus.from_verses(verses)
