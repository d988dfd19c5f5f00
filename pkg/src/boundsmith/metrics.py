"""Measurement records and the CSV / text-table reporters."""
from __future__ import annotations

from dataclasses import dataclass

CSV_COLUMNS = (
    "model", "mode", "size", "pv", "vars", "clauses", "scenarios", "avg_ms", "total_ms"
)


@dataclass
class MetricsRecord:
    model: str
    mode: str  # analyzer | baseline | reach
    size: int | None  # absent for analyzer mode
    num_primary: int
    num_vars: int
    num_clauses: int
    num_scenarios: int
    avg_ms: int
    total_ms: int
    timed_out: bool = False
    timeout_ms: int | None = None

    def sort_key(self):
        return (self.model, self.mode, -1 if self.size is None else self.size)

    def to_doc(self) -> dict:
        return {
            "model": self.model,
            "mode": self.mode,
            "size": self.size,
            "pv": self.num_primary,
            "vars": self.num_vars,
            "clauses": self.num_clauses,
            "scenarios": self.num_scenarios,
            "avg_ms": self.avg_ms,
            "total_ms": self.total_ms,
            "timed_out": self.timed_out,
            "timeout_ms": self.timeout_ms,
        }


def metrics_from_doc(doc: dict) -> MetricsRecord:
    return MetricsRecord(
        model=doc["model"],
        mode=doc["mode"],
        size=doc["size"],
        num_primary=doc["pv"],
        num_vars=doc["vars"],
        num_clauses=doc["clauses"],
        num_scenarios=doc["scenarios"],
        avg_ms=doc["avg_ms"],
        total_ms=doc["total_ms"],
        timed_out=doc.get("timed_out", False),
        timeout_ms=doc.get("timeout_ms"),
    )


def emit_csv(records: list[MetricsRecord]) -> str:
    """Stable column order; timing fields left empty on timeout."""
    lines = [",".join(CSV_COLUMNS)]
    for r in sorted(records, key=MetricsRecord.sort_key):
        avg, total = ("", "") if r.timed_out else (str(r.avg_ms), str(r.total_ms))
        lines.append(
            ",".join(
                [
                    r.model,
                    r.mode,
                    "" if r.size is None else str(r.size),
                    str(r.num_primary),
                    str(r.num_vars),
                    str(r.num_clauses),
                    str(r.num_scenarios),
                    avg,
                    total,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def emit_table(records: list[MetricsRecord]) -> str:
    rows = [list(CSV_COLUMNS)]
    for r in sorted(records, key=MetricsRecord.sort_key):
        if r.timed_out:
            avg, total = "-", f"TIMEOUT({r.timeout_ms})"
        else:
            avg, total = str(r.avg_ms), str(r.total_ms)
        rows.append(
            [
                r.model,
                r.mode,
                "" if r.size is None else str(r.size),
                str(r.num_primary),
                str(r.num_vars),
                str(r.num_clauses),
                str(r.num_scenarios),
                avg,
                total,
            ]
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(CSV_COLUMNS))]
    out = []
    for row in rows:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"
