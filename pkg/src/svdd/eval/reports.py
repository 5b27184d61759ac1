"""Partition reports, test-set averaging and comparison tables."""

import csv
import io
import json
import os
import tempfile
from dataclasses import asdict, dataclass

from .eer import Label, ScoredTrial, compute_eer

TEST_PARTITIONS = ("T01", "T02", "T03", "T04")


@dataclass(frozen=True)
class PartitionReport:
    partition: str
    eer_percent: float
    threshold: float
    n_bonafide: int
    n_deepfake: int

    def __post_init__(self):
        if not (0.0 <= self.eer_percent <= 100.0):
            raise ValueError(f"eer_percent out of range: {self.eer_percent}")


def evaluate_partition(partition: str, trials: list[ScoredTrial]) -> PartitionReport:
    """EER and class counts for one partition's scored trials."""
    eer, threshold = compute_eer(trials)
    return PartitionReport(
        partition=partition,
        eer_percent=100.0 * eer,
        threshold=threshold,
        n_bonafide=sum(1 for t in trials if t.label is Label.BONAFIDE),
        n_deepfake=sum(1 for t in trials if t.label is Label.DEEPFAKE),
    )


def average_test_eer(reports: dict[str, PartitionReport]) -> float:
    """Unweighted mean EER (percent) over exactly the four test conditions."""
    missing = [p for p in TEST_PARTITIONS if p not in reports]
    extra = [p for p in reports if p not in TEST_PARTITIONS]
    if missing or extra:
        raise ValueError(f"need exactly T01..T04: missing={missing}, extra={extra}")
    return sum(reports[p].eer_percent for p in TEST_PARTITIONS) / len(TEST_PARTITIONS)


def compare_with_quoted_baseline(reports: dict[str, PartitionReport],
                                 quoted: dict[str, float]) -> list[dict]:
    """Absolute EER differences against externally published numbers.

    quoted maps condition name (partition or 'test_avg') -> EER percent.
    """
    available = {p: r.eer_percent for p, r in reports.items()}
    try:
        available["test_avg"] = average_test_eer(
            {p: r for p, r in reports.items() if p in TEST_PARTITIONS}
        )
    except ValueError:
        pass

    rows = []
    for condition, quoted_eer in sorted(quoted.items()):
        if condition not in available:
            raise ValueError(f"condition {condition!r} missing from this run's reports")
        ours = available[condition]
        rows.append({
            "condition": condition,
            "eer_percent": ours,
            "quoted_eer_percent": float(quoted_eer),
            "abs_difference": abs(ours - float(quoted_eer)),
        })
    return rows


def trials_to_csv(trials: list[ScoredTrial]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["clip_id", "label", "score"])
    for t in trials:
        writer.writerow([t.clip_id, t.label.value, repr(t.score)])
    return buf.getvalue()


def trials_from_csv(text: str) -> list[ScoredTrial]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["clip_id", "label", "score"]:
        raise ValueError(f"bad score file header: {header}")
    return [ScoredTrial(clip_id=row[0], label=Label(row[1]), score=float(row[2]))
            for row in reader if row]


def report_to_dict(reports: dict[str, PartitionReport], extras: dict | None = None) -> dict:
    doc = {"partitions": {p: asdict(r) for p, r in sorted(reports.items())}}
    if all(p in reports for p in TEST_PARTITIONS):
        doc["test_avg_eer_percent"] = average_test_eer(
            {p: reports[p] for p in TEST_PARTITIONS}
        )
    if extras:
        doc.update(extras)
    return doc


def write_json(path, doc: dict) -> None:
    """Atomic, byte-stable JSON dump (sorted keys, repr floats)."""
    directory = os.path.dirname(os.path.abspath(str(path))) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, str(path))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_text(path, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(str(path))) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, str(path))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
