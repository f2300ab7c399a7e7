import logging
import sqlite3
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Tuple, Union

from ayat.errors import ArtifactError

logger = logging.getLogger(__name__)


class SQLiteDBAPI:
    """Thin DB-API wrapper over one SQLite file holding an index artifact."""

    def __init__(self, database: Union[str, Path]) -> None:
        self.database = str(database)
        try:
            self.conn = sqlite3.connect(self.database)
        except sqlite3.Error as e:
            raise ArtifactError(self.database, f"cannot open ({e})") from e
        self.cursor = self.conn.cursor()

    def execute(self, sql: str, parameters: Sequence[Any] = ()) -> List[Tuple]:
        try:
            self.cursor.execute(sql, parameters)
            rows = self.cursor.fetchall()
            self.commit()
            return rows
        except sqlite3.Error as e:
            self.rollback()
            raise ArtifactError(self.database, f"{e} while running {sql!r}") from e

    def executemany(self, sql: str, parameters: Iterable[Sequence[Any]]) -> None:
        try:
            self.cursor.executemany(sql, parameters)
            self.commit()
        except sqlite3.Error as e:
            self.rollback()
            raise ArtifactError(self.database, f"{e} while running {sql!r}") from e

    def commit(self) -> None:
        self.conn.commit()

    def rollback(self) -> None:
        self.conn.rollback()

    def close(self) -> None:
        self.conn.close()

    def __enter__(self) -> "SQLiteDBAPI":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        if exc_type:
            self.rollback()
        else:
            self.commit()
        self.close()
