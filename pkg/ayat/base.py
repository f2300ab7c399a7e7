from typing import Any, Dict, Iterable, List, Sequence, Tuple

from ayat.column import Column
from ayat.query import Query


class Base:
    """Declarative row model: subclasses list their columns as class attributes."""

    __tablename__ = ""

    def __init__(self, **kwargs: Any) -> None:
        columns = self.columns()
        unknown = set(kwargs) - set(columns)
        if unknown:
            raise TypeError(f"{type(self).__name__} has no columns {sorted(unknown)}")
        for name, column in columns.items():
            setattr(self, name, kwargs.get(name, column.default))

    @classmethod
    def table_name(cls) -> str:
        return cls.__tablename__ or cls.__name__

    @classmethod
    def columns(cls) -> Dict[str, Column]:
        columns: Dict[str, Column] = {}
        for klass in reversed(cls.__mro__):
            for name, attr in vars(klass).items():
                if isinstance(attr, Column):
                    columns[name] = attr
        return columns

    @classmethod
    def create_table_sql(cls) -> str:
        columns = list(cls.columns().values())
        definitions = [column.ddl() for column in columns]
        keys = [column.name for column in columns if column.primary_key]
        if keys:
            definitions.append(f"PRIMARY KEY ({', '.join(keys)})")
        return f"CREATE TABLE IF NOT EXISTS {cls.table_name()} ({', '.join(definitions)});"

    @classmethod
    def create_table(cls, engine: Any) -> None:
        engine.execute(cls.create_table_sql())

    @classmethod
    def insert_many(cls, engine: Any, instances: Iterable["Base"]) -> None:
        columns = cls.columns()
        names = ", ".join(column.name for column in columns.values())
        placeholders = ", ".join("?" for _ in columns)
        sql = f"INSERT INTO {cls.table_name()} ({names}) VALUES ({placeholders})"
        engine.executemany(sql, (instance.values() for instance in instances))

    @classmethod
    def query(cls, engine: Any) -> Query:
        return Query(cls, engine)

    @classmethod
    def from_row(cls, row: Sequence[Any]) -> "Base":
        return cls(**dict(zip(cls.columns(), row)))

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[Any]]) -> List["Base"]:
        return [cls.from_row(row) for row in rows]

    def values(self) -> Tuple[Any, ...]:
        return tuple(
            column.to_sql(getattr(self, name)) for name, column in self.columns().items()
        )

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other) and self.values() == other.values()

    def __repr__(self) -> str:
        fields = ", ".join(f"{name}={getattr(self, name)!r}" for name in self.columns())
        return f"{type(self).__name__}({fields})"
