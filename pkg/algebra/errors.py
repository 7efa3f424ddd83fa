from typing import Any, Optional, Sequence, Tuple


class WorkbenchError(ValueError):
    """Base class for every error raised by the workbench."""

    exit_code = 1


class DomainError(WorkbenchError):
    """The input is well-formed but fails a mathematical requirement."""

    exit_code = 1


class ParseError(WorkbenchError):
    """Malformed input text."""

    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class CapExceeded(WorkbenchError):
    """A configured size or enumeration cap would be exceeded."""

    exit_code = 3

    def __init__(self, what: str, size: int, limit: int):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(f"{what}: {size} exceeds the configured limit {limit}")


class InvariantViolation(WorkbenchError):
    """An internal consistency check failed; always an implementation defect."""

    exit_code = 1


class OutOfRangeEntry(DomainError):
    def __init__(self, position: Tuple[int, int], value: int, order: int):
        self.position = position
        self.value = value
        super().__init__(
            f"table entry at {position} is {value}, outside [0, {order})"
        )


class NotAssociative(DomainError):
    def __init__(self, a: int, b: int, c: int, line: Optional[int] = None):
        self.triple = (a, b, c)
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}not associative at ({a}, {b}, {c})")


class NotAHomomorphism(DomainError):
    def __init__(self, a: int, b: int):
        self.pair = (a, b)
        super().__init__(f"map does not respect the product of ({a}, {b})")


class NotACongruence(DomainError):
    def __init__(self, a: int, b: int, s: int):
        self.witness = (a, b, s)
        super().__init__(
            f"partition is not compatible: {a} ~ {b} but translation by {s} separates them"
        )


class CarrierMismatch(DomainError):
    def __init__(self, left_order: int, right_order: int):
        super().__init__(
            f"congruences live on different carriers (orders {left_order} and {right_order})"
        )


class NotInvariant(DomainError):
    def __init__(self, a: int, b: int):
        self.pair = (a, b)
        super().__init__(f"endomorphism separates the related pair ({a}, {b})")


class NotFullyInvariant(DomainError):
    def __init__(self, witness: Tuple[Sequence[int], int, int], kind: str = "fully invariant"):
        self.witness = witness
        f, a, b = witness
        super().__init__(
            f"congruence is not {kind}: {list(f)} separates the related pair ({a}, {b})"
        )


class NotAChain(DomainError):
    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(f"family members {i} and {j} are incomparable under refinement")


class NoEqualityMember(DomainError):
    def __init__(self):
        super().__init__(
            "family does not separate points: its finest member is not the equality congruence"
        )


class NotGenerating(DomainError):
    def __init__(self, missing: int):
        self.missing = missing
        super().__init__(f"the given set does not generate element {missing}")


class LevelOutOfRange(DomainError):
    def __init__(self, level: int, available: int):
        super().__init__(f"level {level} is not available (tower has {available} levels)")


class NotSurjective(DomainError):
    def __init__(self, position: int, missing: Any):
        super().__init__(f"connecting map {position} misses element {missing}")


class SizeBoundExceeded(CapExceeded):
    pass


class EnumerationCapExceeded(CapExceeded):
    pass


class CongruenceCapExceeded(CapExceeded):
    pass


class OracleBoundExceeded(CapExceeded):
    pass
