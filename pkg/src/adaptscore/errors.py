"""Exception hierarchy shared across the toolkit."""


class AdaptScoreError(Exception):
    """Base class for all toolkit errors."""


class DataError(AdaptScoreError):
    """Malformed or degenerate input data."""


class ZeroVector(DataError):
    def __init__(self, row_index: int):
        self.row_index = row_index
        super().__init__(f"row {row_index} has (near-)zero norm and cannot be normalized")


class DimensionMismatch(DataError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"dimension mismatch: expected {expected}, got {got}")


class DegenerateClass(DataError):
    def __init__(self, class_id: int):
        self.class_id = class_id
        super().__init__(f"class {class_id} sums to a (near-)zero vector; centroid undefined")


class MissingClass(DataError):
    def __init__(self, class_id: int):
        self.class_id = class_id
        super().__init__(f"class {class_id} has no members")


class TooFewClasses(DataError):
    def __init__(self, num_classes: int):
        self.num_classes = num_classes
        super().__init__(f"need at least 2 classes, got {num_classes}")


class TooFewSamples(DataError):
    def __init__(self, needed: int, got: int):
        self.needed = needed
        self.got = got
        super().__init__(f"need at least {needed} samples, got {got}")


class LabelOutOfRange(DataError):
    def __init__(self, label: int, num_classes: int):
        self.label = label
        self.num_classes = num_classes
        super().__init__(f"label {label} outside [0, {num_classes})")


class SingletonClass(DataError):
    def __init__(self, class_id: int):
        self.class_id = class_id
        super().__init__(f"class {class_id} has a single member; silhouette undefined")


class LengthMismatch(DataError):
    def __init__(self, len_x: int, len_y: int):
        self.len_x = len_x
        self.len_y = len_y
        super().__init__(f"length mismatch: {len_x} vs {len_y}")


class ConstantInput(DataError):
    def __init__(self):
        super().__init__("both inputs are constant; correlation undefined")


class MissingScore(DataError):
    def __init__(self, candidate_id: str, method: str):
        self.candidate_id = candidate_id
        self.method = method
        super().__init__(f"candidate {candidate_id!r} has no score for method {method!r}")


class EmptyClassAfterSubsample(DataError):
    def __init__(self, class_id: int):
        self.class_id = class_id
        super().__init__(f"class {class_id} empty after subsampling (10 retries exhausted)")


class ConfigInvalid(AdaptScoreError):
    pass


class FormatError(AdaptScoreError):
    """On-disk format violations."""


class BadMagic(FormatError):
    def __init__(self, path: str, magic: bytes):
        self.path = path
        self.magic = magic
        super().__init__(f"{path}: unrecognized magic bytes {magic!r}")


class TruncatedFile(FormatError):
    def __init__(self, path: str, expected: int, got: int):
        self.path = path
        self.expected = expected
        self.got = got
        super().__init__(f"{path}: expected {expected} bytes, got {got}")


class RaggedCsv(FormatError):
    def __init__(self, path: str, line: int):
        self.path = path
        self.line = line
        super().__init__(f"{path}: line {line} has an inconsistent field count")


class NonFiniteValue(FormatError):
    def __init__(self, row: int, col: int):
        self.row = row
        self.col = col
        super().__init__(f"non-finite value at row {row}, col {col}")
