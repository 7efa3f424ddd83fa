import logging
import re
from pathlib import Path
from typing import List, Optional, Tuple, Union

from algebra.config import WorkbenchConfig, resolve
from algebra.errors import NotAssociative, OutOfRangeEntry, ParseError
from algebra.semigroup import BUILTIN_KINDS, FiniteSemigroup, SemigroupBuilder

logger = logging.getLogger(__name__)


def content_lines(text: str) -> List[Tuple[int, str]]:
    """
    Non-blank lines with comments removed, paired with their 1-based line numbers
    """
    lines = []
    for number, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((number, line))
    return lines


def parse_integers(line: str, number: int, what: str) -> List[int]:
    try:
        return [int(token) for token in line.split()]
    except ValueError:
        raise ParseError(f"{what} must be space-separated decimal integers", line=number) from None


class SemigroupReader:
    @staticmethod
    def parse(text: str, config: Optional[WorkbenchConfig] = None) -> FiniteSemigroup:
        """
        Parse the semigroup text format

        A ``semigroup <n>`` header, n rows of n indices, then an optional
        ``labels`` line. ``#`` starts a comment; blank lines are skipped.

        Args:
            text (str): File contents
            config (Optional[WorkbenchConfig]): Limits

        Returns:
            FiniteSemigroup: The validated semigroup
        """
        config = resolve(config)
        lines = content_lines(text)
        if not lines:
            raise ParseError("empty input: expected a 'semigroup <n>' header")

        number, header = lines[0]
        keyword, _, size = header.partition(" ")
        if keyword != "semigroup" or not re.fullmatch(r"[0-9]+", size.strip()):
            raise ParseError(f"expected 'semigroup <n>', found {header!r}", line=number)
        order = int(size)
        if order < 1:
            raise ParseError("order must be positive", line=number)

        rows: List[List[int]] = []
        row_lines: List[int] = []
        labels = None
        for number, line in lines[1:]:
            if line.startswith("labels"):
                if len(rows) < order:
                    raise ParseError(f"labels line before all {order} rows", line=number)
                if labels is not None:
                    raise ParseError("duplicate labels line", line=number)
                labels = line.split()[1:]
                if len(labels) != order:
                    raise ParseError(f"expected {order} labels, found {len(labels)}", line=number)
                if len(set(labels)) != order:
                    raise ParseError("labels must be pairwise distinct", line=number)
                continue
            if len(rows) == order:
                raise ParseError("unexpected content after the table", line=number)
            row = parse_integers(line, number, "table rows")
            if len(row) != order:
                raise ParseError(f"row has {len(row)} entries, expected {order}", line=number)
            rows.append(row)
            row_lines.append(number)

        if len(rows) < order:
            raise ParseError(f"expected {order} rows, found {len(rows)}", line=lines[-1][0])

        try:
            semigroup = SemigroupBuilder.validate_table(order, rows, labels=labels, config=config)
        except OutOfRangeEntry as error:
            raise ParseError(str(error), line=row_lines[error.position[0]]) from error
        except NotAssociative as error:
            a, b, c = error.triple
            raise NotAssociative(a, b, c, line=row_lines[a]) from error
        logger.debug("parsed a semigroup of order %d", order)
        return semigroup

    @staticmethod
    def read(path: Union[str, Path], config: Optional[WorkbenchConfig] = None) -> FiniteSemigroup:
        with open(path, encoding="utf-8") as handle:
            return SemigroupReader.parse(handle.read(), config)

    @staticmethod
    def render(semigroup: FiniteSemigroup) -> str:
        """Serialize in the format ``parse`` reads."""
        lines = [f"semigroup {semigroup.order}"]
        lines.extend(" ".join(str(v) for v in row) for row in semigroup.rows)
        if semigroup.labels is not None:
            lines.append("labels " + " ".join(semigroup.labels))
        return "\n".join(lines) + "\n"

    @staticmethod
    def write(semigroup: FiniteSemigroup, path: Union[str, Path]) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(SemigroupReader.render(semigroup))

    @staticmethod
    def is_builtin(source: str) -> bool:
        kind, separator, _ = source.partition(":")
        return bool(separator) and kind in BUILTIN_KINDS

    @staticmethod
    def load(
        source: str,
        config: Optional[WorkbenchConfig] = None,
        base_dir: Optional[Path] = None
    ) -> FiniteSemigroup:
        """
        Resolve a semigroup source: a builtin token such as ``cyclic:4`` or a file path

        Args:
            source (str): Token or path
            config (Optional[WorkbenchConfig]): Limits
            base_dir (Optional[Path]): Directory relative paths are resolved against

        Returns:
            FiniteSemigroup: The loaded semigroup
        """
        if SemigroupReader.is_builtin(source):
            return SemigroupBuilder.from_builtin(source, config)
        path = Path(source)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return SemigroupReader.read(path, config)
