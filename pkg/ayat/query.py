from typing import Any, List, Optional, Tuple


class SQLQueryBuilder:
    @staticmethod
    def select(table_name: str, columns: Optional[List[str]] = None) -> str:
        if columns is None or not columns:
            columns = ["*"]
        return f"SELECT {', '.join(columns)} FROM {table_name}"

    @staticmethod
    def filter(**filters: Any) -> Tuple[str, Tuple]:
        if not filters:
            return "", ()
        filter_str = " AND ".join(f"{key} = ?" for key in filters)
        return filter_str, tuple(filters.values())

    @staticmethod
    def order_by(*columns: str, direction: str = "ASC") -> str:
        if direction not in ("ASC", "DESC"):
            raise ValueError("direction must be 'ASC' or 'DESC'")
        return f" ORDER BY {', '.join(columns)} {direction}"


class Query:
    def __init__(self, model: Any, conn: Any) -> None:
        self.model = model
        self.conn = conn
        self.query_builder = SQLQueryBuilder()
        self.query: Optional[str] = None
        self.values: List[Any] = []

    def select(self, *columns: str) -> "Query":
        self.query = self.query_builder.select(self.model.table_name(), list(columns))
        return self

    def filter(self, **filters: Any) -> "Query":
        if self.query is None:
            raise ValueError("The 'select' method must be called before 'filter'.")
        filter_clause, filter_values = self.query_builder.filter(**filters)
        if filter_clause:
            self.query += f" WHERE {filter_clause}"
        self.values.extend(filter_values)
        return self

    def order_by(self, *columns: str, direction: str = "ASC") -> "Query":
        if self.query is None:
            raise ValueError("The 'select' method must be called before 'order_by'.")
        self.query += self.query_builder.order_by(*columns, direction=direction)
        return self

    def execute(self) -> List[Tuple]:
        if self.query is None:
            raise ValueError("Nothing to execute; call 'select' first.")
        return self.conn.execute(self.query, self.values)

    def all(self) -> List[Any]:
        """Execute a full-row select and build model instances."""
        return self.model.from_rows(self.execute())

    def __repr__(self) -> str:
        query_str = self.query or ""
        values_str = f", {self.values}" if self.values else ""
        return f"{query_str}{values_str}"
