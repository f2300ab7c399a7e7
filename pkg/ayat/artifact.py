import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Union

from ayat.base import Base
from ayat.column import Column, Integer, String
from ayat.corpus import Category, QuranCorpus, Verse, VerseRef, sorted_categories
from ayat.dialect import SQLiteDBAPI
from ayat.errors import ArtifactError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"


class VerseRow(Base):
    __tablename__ = "verse"

    sura = Column("sura", Integer, nullable=False, primary_key=True, check="sura BETWEEN 1 AND 114")
    ayah = Column("ayah", Integer, nullable=False, primary_key=True, check="ayah >= 1")
    raw_text = Column("raw_text", String, nullable=False)
    categories = Column("categories", String, nullable=False, default="General")


class MetaRow(Base):
    __tablename__ = "artifact_meta"

    key = Column("key", String, nullable=False, primary_key=True)
    value = Column("value", String, nullable=False)


@dataclass(frozen=True)
class IndexArtifact:
    corpus: QuranCorpus
    content_hash: str
    meta: Dict[str, str]


def _categories_cell(verse: Verse) -> str:
    return ";".join(category.value for category in sorted_categories(verse.categories))


def content_hash(corpus: QuranCorpus) -> str:
    digest = hashlib.sha256()
    digest.update(f"schema={SCHEMA_VERSION}\nformat={corpus.source_format}\n".encode("utf-8"))
    for verse in corpus:
        line = f"{verse.ref.sura}|{verse.ref.ayah}|{verse.raw_text}|{_categories_cell(verse)}\n"
        digest.update(line.encode("utf-8"))
    return digest.hexdigest()


def save_artifact(corpus: QuranCorpus, path: Union[str, Path]) -> str:
    """Write ``corpus`` to a fresh SQLite file and return its content hash."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.exists():
        path.unlink()

    digest = content_hash(corpus)
    rows = [
        VerseRow(
            sura=verse.ref.sura,
            ayah=verse.ref.ayah,
            raw_text=verse.raw_text,
            categories=_categories_cell(verse),
        )
        for verse in corpus
    ]
    meta = [
        MetaRow(key="content_hash", value=digest),
        MetaRow(key="schema_version", value=SCHEMA_VERSION),
        MetaRow(key="source_format", value=corpus.source_format),
        MetaRow(key="verse_count", value=str(len(corpus))),
    ]
    with SQLiteDBAPI(path) as db:
        VerseRow.create_table(db)
        MetaRow.create_table(db)
        VerseRow.insert_many(db, rows)
        MetaRow.insert_many(db, meta)

    logger.info("Wrote index artifact %s (%d verses, sha256 %s)", path, len(rows), digest[:12])
    return digest


def load_artifact(path: Union[str, Path]) -> IndexArtifact:
    """Open an artifact written by ``save_artifact``.

    The match index is not stored; callers rebuild it from the returned corpus,
    which the stored content hash identifies.
    """
    path = Path(path)
    if not path.is_file():
        raise ArtifactError(path, "does not exist")

    with SQLiteDBAPI(path) as db:
        version = MetaRow.query(db).select("value").filter(key="schema_version").execute()
        if version != [(SCHEMA_VERSION,)]:
            found = version[0][0] if version else None
            raise ArtifactError(path, f"unsupported schema version {found!r}")
        meta = {row.key: row.value for row in MetaRow.query(db).select().all()}
        rows: List[VerseRow] = VerseRow.query(db).select().order_by("sura", "ayah").all()

    verses = []
    for row in rows:
        verse = Verse.from_text(VerseRef(row.sura, row.ayah), row.raw_text)
        categories = frozenset(Category(name) for name in row.categories.split(";") if name)
        verses.append(Verse(verse.ref, verse.raw_text, verse.norm_tokens, categories))
    corpus = QuranCorpus.from_verses(verses, source_format=meta.get("source_format", "tanzil-pipe"))

    digest = content_hash(corpus)
    if digest != meta.get("content_hash"):
        raise ArtifactError(path, "content hash does not match the stored verses")

    logger.info("Opened index artifact %s (%d verses)", path, len(corpus))
    return IndexArtifact(corpus, digest, meta)
