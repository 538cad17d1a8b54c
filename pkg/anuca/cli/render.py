import sys
from pprint import pformat
from typing import Any, Dict, Optional, Protocol, Sequence, TextIO

from ..analysis import Certificate
from ..engine import Pattern

_WIDTH = 70
GLYPHS = ".#23456789abcdefghijklmnopqrstuvwxyz"


class SummaryView(Protocol):
    command: str
    operation_counts: dict
    certificate_counts: dict
    exit_code: int
    threads: int

    def wall_time(self) -> float: ...


def render_space_time(history: Sequence[Pattern]) -> str:
    """One glyph row per step for one-dimensional states; d=2 states are printed as stacked frames."""
    lines = []
    for step, state in enumerate(history):
        if state.dim == 1:
            lines.append(f"{step:>4} | " + "".join(GLYPHS[int(a)] for a in state.symbols))
            continue
        box = state.box()
        lines.append(f"step {step}")
        width = box.sides[-1]
        for i in range(0, len(state.symbols), width):
            lines.append("     | " + "".join(GLYPHS[int(a)] for a in state.symbols[i:i + width]))
    return "\n".join(lines)


class RunVisualizer:
    """Boxed human-readable sections on stderr."""

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream

    def write(self, text: str = "") -> None:
        print(text, file=self.stream if self.stream is not None else sys.stderr)

    def _box(self, title: str, fields: Dict[str, Any]) -> None:
        self.write("=" * _WIDTH)
        self.write(f"┌────────────────────────── {title} ──────────────────────────")
        for label, value in fields.items():
            if isinstance(value, (dict, list)):
                self.write(f"│ {label:<10}:")
                for line in pformat(value, indent=2, width=60).splitlines():
                    self.write(f"│   {line}")
            else:
                self.write(f"│ {label:<10}: {value}")
        self.write(f"└{'─' * (_WIDTH - 1)}\n")

    def print_operation(self, name: str, arguments: Dict[str, Any]) -> None:
        self._box("Operation", {"Name": name, "Arguments": arguments or "(none)"})

    def print_certificate(self, certificate: Certificate, label: Optional[str] = None) -> None:
        title = "Refutation" if certificate.is_refutation else "Certificate"
        fields: Dict[str, Any] = {"Kind": certificate.kind.value}
        if label:
            fields["For"] = label
        fields["Payload"] = certificate.payload
        self._box(title, fields)

    def print_render(self, text: str) -> None:
        self._box("Space-time", {})
        self.write(text)

    def print_error(self, message: str) -> None:
        self.write(f"[ERROR] --> {message}")

    def get_summary(self, tracker: SummaryView) -> str:
        lines = [
            "=" * _WIDTH,
            "# Summary #########################################################",
            f"Command: {tracker.command}",
            f"Exit code: {tracker.exit_code}",
            f"Wall time: {tracker.wall_time():.3f} s",
            f"Threads: {tracker.threads}",
            "Operations:",
        ]
        if tracker.operation_counts:
            lines.extend(f"  - {name}: {count}" for name, count in tracker.operation_counts.items())
        else:
            lines.append("  (none)")
        lines.append("Certificates:")
        if tracker.certificate_counts:
            lines.extend(f"  - {kind}: {count}" for kind, count in tracker.certificate_counts.items())
        else:
            lines.append("  (none)")
        lines.append("########################################################")
        return "\n".join(lines)


__all__ = ["GLYPHS", "RunVisualizer", "render_space_time"]
