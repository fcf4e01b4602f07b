from typing import Any, Dict, List, Optional

from models.config import RunConfig
from models.results import Verdict, VerdictStatus

TOOL_NAME = "torus-discrepancy"
TOOL_VERSION = "0.1.0"


class Report:
    """
    Result of one CLI command

    `items` hold per-quantity results as plain dicts with exact "p/q"
    strings; `failures` counts identity mismatches and item errors that make
    the run fail.
    """

    def __init__(self, command: str, config: RunConfig):
        self.command = command
        self.config = config
        self.items: List[Dict[str, Any]] = []
        self.verdicts: List[Verdict] = []
        self.constants: Dict[str, str] = {}
        self.failures = 0
        self.timing: Optional[Dict[str, float]] = None
        self.document: Optional[str] = None
        self.rows: List[Dict[str, str]] = []

    def add_item(self, item: Dict[str, Any]) -> None:
        self.items.append(item)

    def add_verdicts(self, verdicts: List[Verdict]) -> None:
        self.verdicts.extend(verdicts)

    def count(self, status: VerdictStatus) -> int:
        return sum(1 for v in self.verdicts if v.status == status)

    @property
    def violations(self) -> int:
        return self.count(VerdictStatus.VIOLATED)

    @property
    def warnings(self) -> int:
        return self.count(VerdictStatus.INCONCLUSIVE)

    @property
    def exit_code(self) -> int:
        """0 when everything holds (INCONCLUSIVE only warns), 1 on any violation or mismatch"""
        return 1 if self.violations or self.failures else 0

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "tool": TOOL_NAME,
            "version": TOOL_VERSION,
            "command": self.command,
            "config": self.config.model_dump(mode="json"),
            "items": self.items,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "summary": {
                "holds": self.count(VerdictStatus.HOLDS),
                "violated": self.violations,
                "inconclusive": self.warnings,
                "failures": self.failures,
                "exit_code": self.exit_code,
            },
        }
        if self.constants:
            data["constants"] = self.constants
        if self.rows:
            data["rows"] = self.rows
        if self.timing is not None:
            data["timing"] = self.timing
        return data

    def __repr__(self):
        return f"<Report {self.command} items={len(self.items)} verdicts={len(self.verdicts)}>"
