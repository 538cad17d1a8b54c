import json
import time
from collections import defaultdict
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..analysis import Certificate
from ..config import get_config
from .render import RunVisualizer

REPORT_SCHEMA = "report_v1"


class RunReport(BaseModel):
    """
    What a CLI run prints on stdout. Wall time and thread count are only filled
    in with --timings, so reports are byte-identical across runs otherwise.
    """

    model_config = ConfigDict(populate_by_name=True)

    report_schema: str = Field(default=REPORT_SCHEMA, serialization_alias="schema")
    command: List[str]
    config_hash: Optional[str] = None
    seed: int
    caps: Dict[str, int]
    result: Dict[str, Any] = Field(default_factory=dict)
    certificates: List[Dict[str, Any]] = Field(default_factory=list)
    exit_code: int = 0
    verified: Optional[bool] = None
    error: Optional[str] = None
    partial: Optional[Any] = None
    wall_time_s: Optional[float] = None
    threads: Optional[int] = None

    def to_json(self) -> str:
        return json.dumps(self.model_dump(by_alias=True, exclude_none=True), sort_keys=True, indent=2)


class RunTracker:
    """
    Tracks one CLI run:
    - counts operations invoked and certificate kinds emitted
    - measures wall time
    - echoes operations and certificates to stderr when verbose
    """

    def __init__(self, command: str, verbose: bool = False, visualizer: Optional[RunVisualizer] = None):
        self.command = command
        self.verbose = verbose
        self._visualizer = visualizer or RunVisualizer()
        self._started = time.perf_counter()
        self._finished: Optional[float] = None
        self.operation_counts = defaultdict(int)
        self.certificate_counts = defaultdict(int)
        self.certificates: List[Certificate] = []
        self.exit_code = 0
        self.config = get_config()

    @property
    def threads(self) -> int:
        return self.config.threads

    def add_operation(self, name: str, arguments: Optional[Dict[str, Any]] = None) -> None:
        self.operation_counts[name] += 1
        if self.verbose:
            self._visualizer.print_operation(name, arguments or {})

    def add_certificate(self, certificate: Certificate, label: Optional[str] = None) -> None:
        self.certificate_counts[certificate.kind.value] += 1
        self.certificates.append(certificate)
        if self.verbose:
            self._visualizer.print_certificate(certificate, label)

    def signal_error(self, message: str) -> None:
        self._visualizer.print_error(message)

    def finish(self, exit_code: int) -> None:
        self.exit_code = exit_code
        self._finished = time.perf_counter()

    def wall_time(self) -> float:
        end = self._finished if self._finished is not None else time.perf_counter()
        return end - self._started

    def print_summary(self) -> None:
        self._visualizer.write(self.get_summary())

    def get_summary(self) -> str:
        return self._visualizer.get_summary(self)


__all__ = ["REPORT_SCHEMA", "RunReport", "RunTracker"]
