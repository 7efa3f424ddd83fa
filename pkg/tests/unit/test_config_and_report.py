import json

import pandas as pd
import pytest

from algebra.config import DEFAULT_CONFIG, WorkbenchConfig, resolve
from algebra.errors import (
    CongruenceCapExceeded,
    DomainError,
    InvariantViolation,
    NotAssociative,
    ParseError,
    WorkbenchError,
)
from orchestrator.report import Report


class TestConfig:
    def test_defaults(self):
        assert DEFAULT_CONFIG.max_order == 4096
        assert DEFAULT_CONFIG.workers == 1
        assert resolve(None) is DEFAULT_CONFIG

    def test_overrides_skip_none(self):
        config = DEFAULT_CONFIG.with_overrides(cap_end=10, max_order=None)
        assert config.cap_end == 10
        assert config.max_order == DEFAULT_CONFIG.max_order

    def test_frozen(self):
        with pytest.raises(AttributeError):
            WorkbenchConfig().cap_end = 5


class TestErrors:
    def test_exit_codes(self):
        assert NotAssociative(0, 1, 2).exit_code == 1
        assert ParseError("bad", line=3).exit_code == 2
        assert CongruenceCapExceeded("congruence count", 11, 10).exit_code == 3
        assert InvariantViolation("defect").exit_code == 1

    def test_hierarchy(self):
        assert issubclass(DomainError, WorkbenchError)
        assert issubclass(WorkbenchError, ValueError)

    def test_parse_error_names_the_line(self):
        assert str(ParseError("row has 1 entries, expected 2", line=4)) == "line 4: row has 1 entries, expected 2"


class TestReport:
    def build(self) -> Report:
        report = Report("tower", inputs=[("levels", 2)])
        report.add("depth", 2)
        report.add("ok", True)
        report.add("members", ["{0}{1}", "{0 1}"])
        report.add("levels", pd.DataFrame([
            {"word_length": 1, "count": 1, "shift": True},
            {"word_length": 2, "count": 7, "shift": None},
        ], dtype=object))
        report.witness(kind="example", pair="0 1")
        return report

    def test_text(self):
        text = self.build().to_text()
        assert text.startswith("command: tower\ninput levels: 2\ndepth: 2\nok: yes\nmembers: (2)\n  {0}{1}\n")
        assert "n/a" in text
        assert text.endswith("witnesses: (1)\n  kind=example; pair=0 1\n")

    def test_json_keeps_report_order(self):
        document = json.loads(self.build().to_json())
        assert list(document) == ["command", "inputs", "depth", "ok", "members", "levels", "witnesses"]
        assert document["levels"][1] == {"word_length": 2, "count": 7, "shift": None}
        assert document["ok"] is True

    def test_serialization_is_repeatable(self):
        assert self.build().render("json") == self.build().render("json")
        assert self.build().render("text") == self.build().render("text")

    def test_finding_lookup(self):
        report = self.build()
        assert report.finding("depth") == 2
        with pytest.raises(KeyError):
            report.finding("missing")
