import logging
from pathlib import Path
from typing import List, Optional, Union

from algebra.config import WorkbenchConfig, resolve
from algebra.errors import ParseError
from algebra.inverse_system import InverseSystem
from algebra.semigroup import FiniteSemigroup, Morphism, SemigroupBuilder
from data_ingestion.semigroup_reader import (
    SemigroupReader,
    content_lines,
    parse_integers,
)

logger = logging.getLogger(__name__)


class TowerReader:
    """
    Reads tower files:

        tower
        level <source>
        level <source>
        map <images of level 1 in level 0>
        ...

    A source is a builtin token, a semigroup file path (relative to the tower
    file) or ``table <row>;<row>;...`` inline. The map after level i + 1 is the
    connecting map from level i + 1 onto level i.
    """

    @staticmethod
    def _level(source: str, number: int, config: WorkbenchConfig, base_dir: Optional[Path]) -> FiniteSemigroup:
        if source.startswith("table "):
            rows = [
                parse_integers(row, number, "inline table rows")
                for row in source[len("table"):].split(";") if row.strip()
            ]
            body = "\n".join(" ".join(str(v) for v in row) for row in rows)
            try:
                return SemigroupReader.parse(f"semigroup {len(rows)}\n{body}\n", config)
            except ParseError as error:
                raise ParseError(f"inline table: {error}", line=number) from error
        try:
            return SemigroupReader.load(source, config, base_dir)
        except OSError as error:
            raise ParseError(f"cannot read level {source!r}: {error.strerror}", line=number) from error

    @staticmethod
    def parse(
        text: str,
        config: Optional[WorkbenchConfig] = None,
        base_dir: Optional[Path] = None
    ) -> InverseSystem:
        """
        Parse a tower file into a validated InverseSystem

        Args:
            text (str): File contents
            config (Optional[WorkbenchConfig]): Limits
            base_dir (Optional[Path]): Directory level paths are resolved against

        Returns:
            InverseSystem: Levels with their verified surjective connecting maps
        """
        config = resolve(config)
        lines = content_lines(text)
        if not lines or lines[0][1] != "tower":
            raise ParseError("expected a 'tower' header", line=lines[0][0] if lines else None)

        levels: List[FiniteSemigroup] = []
        connecting: List[Morphism] = []
        for number, line in lines[1:]:
            keyword, _, rest = line.partition(" ")
            rest = rest.strip()
            if keyword == "level":
                if len(connecting) != max(len(levels) - 1, 0):
                    raise ParseError(f"level {len(levels) - 1} has no map below it", line=number)
                if not rest:
                    raise ParseError("level needs a source", line=number)
                levels.append(TowerReader._level(rest, number, config, base_dir))
            elif keyword == "map":
                if len(levels) < 2 or len(connecting) != len(levels) - 2:
                    raise ParseError("map must follow the level it maps from", line=number)
                images = parse_integers(rest, number, "map images")
                if len(images) != levels[-1].order:
                    raise ParseError(
                        f"map has {len(images)} images, expected {levels[-1].order}", line=number
                    )
                connecting.append(SemigroupBuilder.check_morphism(images, levels[-1], levels[-2]))
            else:
                raise ParseError(f"unknown tower entry {keyword!r}", line=number)

        if not levels:
            raise ParseError("tower has no levels", line=lines[0][0])
        if len(connecting) != len(levels) - 1:
            raise ParseError(f"level {len(levels) - 1} has no map below it", line=lines[-1][0])

        system = InverseSystem(levels=tuple(levels), connecting=tuple(connecting))
        logger.info("read a tower with level orders %s", system.orders)
        return system

    @staticmethod
    def read(path: Union[str, Path], config: Optional[WorkbenchConfig] = None) -> InverseSystem:
        path = Path(path)
        with open(path, encoding="utf-8") as handle:
            return TowerReader.parse(handle.read(), config, base_dir=path.parent)

    @staticmethod
    def render(system: InverseSystem) -> str:
        """Serialize with every level inline."""
        lines = ["tower"]
        for i, level in enumerate(system.levels):
            lines.append("level table " + ";".join(" ".join(str(v) for v in row) for row in level.rows))
            if i:
                lines.append("map " + " ".join(str(v) for v in system.connecting[i - 1].map))
        return "\n".join(lines) + "\n"
