"""Per-phase and per-move-category summaries of a session's timing records."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

from .events import SessionLog


class EmptyLog(ValueError):
    pass


@dataclass(frozen=True)
class PhaseSummary:
    count: int
    mean: float
    max: float


def timing_report(log: SessionLog) -> Dict[str, Dict[str, PhaseSummary]]:
    """Group timing records by phase, and execution times by move category.

    Categories (slide/jump/capture/castle) come from the executed command
    flags recorded in the trajectory events.
    """
    if not log.timings:
        raise EmptyLog("no timing records in the session log")
    by_phase: Dict[str, list] = {}
    for record in log.timings:
        by_phase.setdefault(record.phase, []).append(record.duration)
    phases = {
        phase: PhaseSummary(len(values), sum(values) / len(values), max(values))
        for phase, values in sorted(by_phase.items())
    }

    categories: Dict[str, list] = {}
    for event in log.events:
        if event.kind == "trajectory_done":
            categories.setdefault(event.payload["category"], []).append(
                event.payload["duration"]
            )
    category_summaries = {
        name: PhaseSummary(len(values), sum(values) / len(values), max(values))
        for name, values in sorted(categories.items())
    }
    return {"phases": phases, "execution_by_category": category_summaries}


def format_report(report) -> str:
    lines = ["phase            count   mean(s)    max(s)"]
    for phase, summary in report["phases"].items():
        lines.append(f"{phase:<16} {summary.count:>5} {summary.mean:>9.3f} {summary.max:>9.3f}")
    if report["execution_by_category"]:
        lines.append("execution by move category:")
        for name, summary in report["execution_by_category"].items():
            lines.append(
                f"  {name:<14} {summary.count:>5} {summary.mean:>9.3f} {summary.max:>9.3f}"
            )
    return "\n".join(lines)
