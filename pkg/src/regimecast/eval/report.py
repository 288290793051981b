"""CSV and JSON serializations of sweep tables, plus the literature comparison."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path

from .harness import EvaluationReport

CSV_HEADER = ("series", "model", "kp", "kv", "offset", "mape", "rrmse", "seed")

# best published MAPE per series from earlier studies
BENCHMARKS = {
    "BTC": 0.011,
    "S&P BSE SENSEX": 0.009,
    "MSFT": 0.052,
    "INTC": 0.045,
    "NKSH": 0.046,
}


def reports_to_csv(reports: list[EvaluationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow([r.series, r.model, r.kp, r.kv, r.offset, repr(r.mape), repr(r.rrmse), r.seed])
    return buf.getvalue()


def write_reports_csv(reports: list[EvaluationReport], path: str | Path) -> None:
    Path(path).write_text(reports_to_csv(reports))


def read_reports_csv(path: str | Path) -> list[EvaluationReport]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        offset = row["offset"] if row["offset"] == "full" else int(row["offset"])
        out.append(
            EvaluationReport(
                row["series"], row["model"], int(row["kp"]), int(row["kv"]), offset,
                float(row["mape"]), float(row["rrmse"]), int(row["seed"]),
            )
        )
    return out


def reports_to_json(reports: list[EvaluationReport], **extra) -> str:
    """Deterministic JSON; wall-clock timings are deliberately left out."""
    doc = {**extra, "rows": [r.to_dict() for r in reports]}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def timings_to_json(reports: list[EvaluationReport]) -> str:
    rows = [
        {"series": r.series, "model": r.model, "kp": r.kp, "kv": r.kv, "offset": r.offset, "seconds": r.seconds}
        for r in reports
    ]
    return json.dumps({"rows": rows, "total_seconds": sum(r.seconds for r in reports)}, indent=1) + "\n"


@dataclass(frozen=True)
class BenchmarkRow:
    series: str
    reference: float
    achieved: float | None

    @property
    def ratio(self) -> float | None:
        return None if self.achieved is None else self.achieved / self.reference


def compare_benchmarks(achieved: dict[str, float] | list[EvaluationReport]) -> list[BenchmarkRow]:
    """Reference MAPEs beside the best achieved value per series (None where not run)."""
    if not isinstance(achieved, dict):
        best: dict[str, float] = {}
        for r in achieved:
            best[r.series] = min(best.get(r.series, r.mape), r.mape)
        achieved = best
    return [BenchmarkRow(name, ref, achieved.get(name)) for name, ref in BENCHMARKS.items()]


def format_benchmarks(rows: list[BenchmarkRow]) -> str:
    lines = ["series,reference,achieved,ratio"]
    for r in rows:
        a = "" if r.achieved is None else f"{r.achieved:.3f}"
        q = "" if r.ratio is None else f"{r.ratio:.3f}"
        lines.append(f"{r.series},{r.reference:.3f},{a},{q}")
    return "\n".join(lines) + "\n"
