class SegmenterError(Exception):
    """Base class of every error the segmenter raises on purpose."""


class ShapeError(SegmenterError, ValueError):
    pass


class ContractError(SegmenterError, ValueError):
    pass


class ConfigError(SegmenterError, ValueError):
    pass


class CorpusError(SegmenterError, ValueError):
    def __init__(self, message: str, line_number: int | None = None) -> None:
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DecodeError(SegmenterError, RuntimeError):
    pass


class DecodeConsistencyError(SegmenterError, ValueError):
    pass


class TrainingError(SegmenterError, RuntimeError):
    pass


class AlignmentError(SegmenterError, ValueError):
    def __init__(self, message: str, index: int, unit: str = "sentence") -> None:
        self.index = index
        super().__init__(f"{unit} {index}: {message}")


class CheckpointError(SegmenterError, ValueError):
    def __init__(self, message: str, field: str) -> None:
        self.field = field
        super().__init__(f"checkpoint field '{field}': {message}")
