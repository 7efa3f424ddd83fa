from dataclasses import dataclass, replace
from typing import Any, Optional


@dataclass(frozen=True)
class WorkbenchConfig:
    """
    Limits shared by every kernel.

    Attributes:
        max_order (int): Largest carrier order any construction may produce
        cap_end (int): Largest End S the backtracking search may return
        cap_congruences (int): Largest congruence family that may be enumerated
        oracle_bound (int): Largest n^n the brute-force End oracle may scan
        composition_limit (int): Largest End S whose composition table is built
        associativity_check_limit (int): Largest derived table re-checked over n^3 triples
        workers (int): Process pool width for the End search (1 = sequential)
    """
    max_order: int = 4096
    cap_end: int = 100_000
    cap_congruences: int = 100_000
    oracle_bound: int = 10 ** 7
    composition_limit: int = 4096
    associativity_check_limit: int = 512
    workers: int = 1

    def with_overrides(self, **overrides: Any) -> "WorkbenchConfig":
        """
        Return a copy with the non-None overrides applied

        Args:
            **overrides: Field values, None meaning "keep the current value"

        Returns:
            WorkbenchConfig: Updated configuration
        """
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes)


DEFAULT_CONFIG = WorkbenchConfig()


def resolve(config: Optional[WorkbenchConfig]) -> WorkbenchConfig:
    return DEFAULT_CONFIG if config is None else config
