from typing import Any, Optional, Union


class Integer(int):
    type_name = "INTEGER"
    python_type = int


class String(str):
    type_name = "TEXT"
    python_type = str


SQL_TYPES = (Integer, String)


class Column:
    """
    A typed column of an artifact table.
    """

    def __init__(
        self,
        name: str,
        data_type: type,
        nullable: bool = True,
        default: Union[int, str, None] = None,
        primary_key: bool = False,
        check: Optional[str] = None,
    ) -> None:
        """
        Args:
            name (str): The column name in the table.
            data_type (type): Integer or String.
            nullable (bool, optional): Whether NULL is accepted. Defaults to True.
            default (Union[int, str, None], optional): Value used when a row leaves the column unset.
            primary_key (bool, optional): Whether the column is (part of) the primary key.
            check (str, optional): A CHECK constraint expression.

        Raises:
            TypeError: If data_type is not one of the supported column types.
            ValueError: If default does not match data_type.
        """
        if not isinstance(data_type, type) or not issubclass(data_type, SQL_TYPES):
            raise TypeError("data_type must be Integer or String")
        if default is not None and not isinstance(default, data_type.python_type):
            raise ValueError("default value must be of the same type as data_type")
        if check is not None and not isinstance(check, str):
            raise TypeError("check must be a string")

        self.name = name
        self.data_type = data_type
        self.nullable = nullable
        self.default = default
        self.primary_key = primary_key
        self.check = check

    def ddl(self) -> str:
        column_def = f"{self.name} {self.data_type.type_name}"
        if not self.nullable:
            column_def += " NOT NULL"
        if self.default is not None:
            column_def += f" DEFAULT {self.default!r}"
        if self.check is not None:
            column_def += f" CHECK ({self.check})"
        return column_def

    def to_sql(self, value: Any) -> Any:
        if value is None:
            if not self.nullable and self.default is None:
                raise ValueError(f"column {self.name!r} does not accept NULL")
            return self.default
        return self.data_type.python_type(value)

    def __repr__(self) -> str:
        return f"Column({self.name}, {self.data_type.__name__}, nullable={self.nullable}, primary_key={self.primary_key})"
