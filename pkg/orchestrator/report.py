import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np
import pandas as pd

Entry = Tuple[str, Any]


def plain(value: Any) -> Any:
    """Convert a finding value to JSON-ready builtins."""
    if isinstance(value, pd.DataFrame):
        return [{key: plain(v) for key, v in record.items()} for record in value.to_dict(orient="records")]
    if isinstance(value, dict):
        return {str(key): plain(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def text_value(value: Any) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, (bool, np.bool_)):
        return "yes" if value else "no"
    return str(value)


@dataclass
class Report:
    """
    Ordered findings of one command, serialized deterministically.

    Finding values are scalars, lists (one line per item in text) or
    DataFrames (rendered as aligned tables).
    """
    command: str
    inputs: List[Entry] = field(default_factory=list)
    findings: List[Entry] = field(default_factory=list)
    witnesses: List[Dict[str, Any]] = field(default_factory=list)

    def add(self, key: str, value: Any) -> "Report":
        self.findings.append((key, value))
        return self

    def witness(self, **record: Any) -> "Report":
        self.witnesses.append(record)
        return self

    def finding(self, key: str) -> Any:
        for name, value in self.findings:
            if name == key:
                return value
        raise KeyError(key)

    def to_text(self) -> str:
        lines = [f"command: {self.command}"]
        for key, value in self.inputs:
            lines.append(f"input {key}: {text_value(value)}")

        for key, value in self.findings:
            if isinstance(value, pd.DataFrame):
                lines.append(f"{key}:")
                table = value.astype(object).apply(lambda column: column.map(text_value))
                lines.extend("  " + row for row in table.to_string(index=False).split("\n"))
            elif isinstance(value, (list, tuple)):
                lines.append(f"{key}: ({len(value)})")
                lines.extend(f"  {text_value(item)}" for item in value)
            else:
                lines.append(f"{key}: {text_value(value)}")

        if self.witnesses:
            lines.append(f"witnesses: ({len(self.witnesses)})")
            for record in self.witnesses:
                lines.append("  " + "; ".join(f"{k}={text_value(v)}" for k, v in record.items()))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        document: Dict[str, Any] = {"command": self.command}
        document["inputs"] = {key: plain(value) for key, value in self.inputs}
        for key, value in self.findings:
            document[key] = plain(value)
        document["witnesses"] = plain(self.witnesses)
        return json.dumps(document, indent=2, ensure_ascii=False) + "\n"

    def render(self, output_format: str = "text") -> str:
        if output_format == "json":
            return self.to_json()
        return self.to_text()
