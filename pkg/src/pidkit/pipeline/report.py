"""EvalReport serialization: key/value text, single-row CSV, JSON records and PR-curve CSV."""

import csv
import io
import json
from typing import Any

from pidkit.metrics.models import EvalReport, PRPoint
from pidkit.shared.errors import ReportFormatError

REPORT_FORMATS = ("text", "csv", "records")
PR_COLUMNS = ("confidence", "recall", "precision")


def _rate(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.6f}"


def _text(report: EvalReport) -> str:
    lines = [
        f"model: {report.label}",
        f"frames: {report.frames}",
        f"p_t: {report.p_t}",
        f"c_t: {report.c_t:.6f}",
        f"acc_formula: {report.acc_formula.value}",
        f"PID_mAP: {_rate(report.pid_map)}",
        f"PID_Acc: {_rate(report.pid_acc)}",
    ]
    lines += [f"PID_AP@{p}: {_rate(ap)}" for p, ap in sorted(report.pid_ap.items())]
    counts = report.counts
    lines += [
        f"tp: {counts.tp}",
        f"fp: {counts.fp}",
        f"fn: {counts.fn}",
        f"tn: {counts.tn}",
        f"total: {counts.total}",
    ]
    if report.crop_fraction is not None:
        lines.append(f"crop_fraction: {report.crop_fraction:.6f}")
    return "\n".join(lines) + "\n"


def csv_row(report: EvalReport) -> dict[str, str]:
    """Flat columns; floats use repr so they read back exactly, None becomes empty."""

    def cell(v: float | int | None) -> str:
        return "" if v is None else repr(v)

    row = {
        "model": report.label,
        "frames": str(report.frames),
        "p_t": str(report.p_t),
        "c_t": repr(report.c_t),
        "acc_formula": report.acc_formula.value,
        "pid_map": cell(report.pid_map),
        "pid_acc": cell(report.pid_acc),
    }
    row.update({f"pid_ap@{p}": cell(ap) for p, ap in sorted(report.pid_ap.items())})
    c = report.counts
    row.update(
        tp=str(c.tp), fp=str(c.fp), fn=str(c.fn), tn=str(c.tn), total=str(c.total),
        crop_fraction=cell(report.crop_fraction),
    )
    return row


def _csv(report: EvalReport) -> str:
    row = csv_row(report)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(row), lineterminator="\n")
    writer.writeheader()
    writer.writerow(row)
    return buf.getvalue()


def _records(report: EvalReport) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def emit_report(report: EvalReport, fmt: str = "text") -> bytes:
    """Serialize a report as UTF-8 bytes in one of ``REPORT_FORMATS``."""
    match fmt:
        case "text":
            return _text(report).encode()
        case "csv":
            return _csv(report).encode()
        case "records":
            return _records(report).encode()
    raise ReportFormatError(f"unknown report format {fmt!r}; choose from {', '.join(REPORT_FORMATS)}")


def parse_report_csv(data: bytes) -> dict[str, Any]:
    """Read back a CSV report into typed values (ints, floats, None for empty cells)."""
    rows = list(csv.DictReader(io.StringIO(data.decode())))
    if len(rows) != 1:
        raise ReportFormatError(f"expected one report row, got {len(rows)}")
    parsed: dict[str, Any] = {}
    for key, value in rows[0].items():
        if key in ("model", "acc_formula"):
            parsed[key] = value
        elif value == "":
            parsed[key] = None
        elif key in ("frames", "p_t", "tp", "fp", "fn", "tn", "total"):
            parsed[key] = int(value)
        else:
            parsed[key] = float(value)
    return parsed


def parse_report_records(data: bytes) -> EvalReport:
    """Validate a records report against the EvalReport schema."""
    return EvalReport.model_validate_json(data)


def emit_pr_curve(points: list[PRPoint]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PR_COLUMNS)
    for pt in points:
        writer.writerow([repr(pt.confidence), repr(pt.recall), repr(pt.precision)])
    return buf.getvalue().encode()
