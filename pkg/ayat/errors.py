from typing import Any, Optional


class AyatError(Exception):
    """Base class for every error raised by ayat."""


class InputError(AyatError, ValueError):
    """Bad input data: a file or a value that cannot be used as given."""


class MalformedLine(InputError):
    def __init__(self, line_no: int, line: str = "", path: Optional[str] = None) -> None:
        self.line_no = line_no
        self.line = line
        self.path = path
        where = f"{path}:{line_no}" if path else f"line {line_no}"
        super().__init__(f"Malformed line at {where}: {line[:60]!r}")


class CorpusIncomplete(InputError):
    def __init__(self, found_count: int, expected_count: int = 6236) -> None:
        self.found_count = found_count
        self.expected_count = expected_count
        super().__init__(
            f"Corpus holds {found_count} verses, expected {expected_count}."
        )


class DuplicateVerse(InputError):
    def __init__(self, ref: Any, line_no: Optional[int] = None) -> None:
        self.ref = ref
        self.line_no = line_no
        suffix = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"Verse {ref} appears more than once{suffix}.")


class UnknownVerseRef(InputError):
    def __init__(self, ref: Any, line_no: Optional[int] = None) -> None:
        self.ref = ref
        self.line_no = line_no
        suffix = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"Unknown verse reference {ref}{suffix}.")


class UnknownCategory(InputError):
    def __init__(self, name: str, line_no: Optional[int] = None) -> None:
        self.name = name
        self.line_no = line_no
        suffix = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"Unknown category {name!r}{suffix}.")


class SchemaViolation(InputError):
    def __init__(self, line_no: int, field: str, reason: str = "missing") -> None:
        self.line_no = line_no
        self.field = field
        self.reason = reason
        super().__init__(f"Record at line {line_no}: field {field!r} is {reason}.")


class RecordFileError(InputError):
    def __init__(self, path: Any, reason: str = "cannot be read") -> None:
        self.path = str(path)
        super().__init__(f"{self.path}: {reason}")


class ArtifactError(InputError):
    def __init__(self, path: Any, reason: str) -> None:
        self.path = str(path)
        super().__init__(f"Index artifact {self.path}: {reason}")


class ConfigError(InputError):
    """Invalid pipeline configuration."""


class UnknownGroupKey(InputError):
    def __init__(self, key: str) -> None:
        self.key = key
        super().__init__(f"Unknown group key {key!r}; use 'dataset' or 'label'.")


class EmptyDataset(AyatError):
    """Raised when an analysis receives no matched verses."""

    def __init__(self, message: str = "No matched verses to analyze.") -> None:
        super().__init__(message)


class DegenerateInput(AyatError, ValueError):
    """Raised when a statistic is undefined for the given values."""
