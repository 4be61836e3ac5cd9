"""Exception hierarchy shared by all credlens modules."""


class CredlensError(Exception):
    """Base class for every error raised by credlens."""


class CorpusIOError(CredlensError, OSError):
    def __init__(self, path, reason):
        self.path = str(path)
        super().__init__(f"{self.path}: {reason}")


class RecordParseError(CredlensError, ValueError):
    def __init__(self, record_id, field, reason):
        self.record_id = record_id
        self.field = field
        super().__init__(f"record {record_id!r}, field {field!r}: {reason}")


class DuplicateIdError(CredlensError, ValueError):
    pass


class ConfigError(CredlensError, ValueError):
    pass


class LeakageError(CredlensError):
    """A target article was found inside its own history reference set."""


class UndefinedCorrelationError(CredlensError, ValueError):
    pass


class SampleSizeError(CredlensError, ValueError):
    pass


class FoldError(CredlensError, ValueError):
    pass


class TrainingError(CredlensError, ValueError):
    pass


class DataError(CredlensError, ValueError):
    pass


class SchemaError(CredlensError, ValueError):
    def __init__(self, missing, extra):
        self.missing = list(missing)
        self.extra = list(extra)
        super().__init__(f"feature schema mismatch: missing={self.missing} extra={self.extra}")
