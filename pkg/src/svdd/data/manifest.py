"""Dataset manifests: CSV schema, integrity validation, partition bookkeeping."""

import csv
import io
import os
from dataclasses import dataclass, field, replace

from ..eval.eer import Label

PARTITIONS = ("Train", "Val", "T01", "T02", "T03", "T04")
VARIANTS = ("Vocals", "Mixture")

# Reference clip counts (bonafide, deepfake) per partition for the full
# singing-voice deepfake corpus this toolkit targets. T03 is T02 repeated
# over four communication codecs, so its counts are exactly 4x T02.
REFERENCE_COUNTS = {
    "Train": (5251, 4519),
    "Val": (1089, 543),
    "T01": (370, 1208),
    "T02": (1685, 1006),
    "T03": (6740, 4024),
    "T04": (353, 166),
}

CSV_HEADER = ["clip_id", "path", "label", "singer_id", "language", "partition", "variant", "codec"]


class ManifestError(Exception):
    pass


@dataclass(frozen=True)
class ClipRecord:
    clip_id: str
    path: str
    label: Label
    singer_id: str
    language: str
    partition: str
    variant: str
    codec: str = ""

    def __post_init__(self):
        if self.partition not in PARTITIONS:
            raise ManifestError(f"unknown partition tag {self.partition!r} for clip {self.clip_id!r}")
        if self.variant not in VARIANTS:
            raise ManifestError(f"unknown variant {self.variant!r} for clip {self.clip_id!r}")


@dataclass
class Manifest:
    records: list[ClipRecord] = field(default_factory=list)

    def by_partition(self, partition: str) -> list[ClipRecord]:
        return [r for r in self.records if r.partition == partition]

    def counts(self, partition: str) -> tuple[int, int]:
        part = self.by_partition(partition)
        bona = sum(1 for r in part if r.label is Label.BONAFIDE)
        return (bona, len(part) - bona)

    def singers(self, partition: str) -> set[str]:
        return {r.singer_id for r in self.by_partition(partition)}


def load_manifest(path) -> Manifest:
    """Parse and schema-validate a manifest CSV; duplicate clip_ids are rejected."""
    with open(str(path), "r", encoding="utf-8", newline="") as fh:
        return parse_manifest(fh.read(), source=str(path))


def parse_manifest(text: str, source: str = "<string>") -> Manifest:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ManifestError(f"{source}: empty manifest")
    if header != CSV_HEADER:
        raise ManifestError(f"{source}:1: bad header {header!r}, expected {CSV_HEADER!r}")

    records = []
    seen: set[str] = set()
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise ManifestError(f"{source}:{line_no}: expected {len(CSV_HEADER)} fields, got {len(row)}")
        clip_id, path, label, singer, language, partition, variant, codec = row
        if clip_id in seen:
            raise ManifestError(f"{source}:{line_no}: duplicate clip_id {clip_id!r}")
        seen.add(clip_id)
        try:
            rec = ClipRecord(clip_id=clip_id, path=path, label=Label(label),
                             singer_id=singer, language=language,
                             partition=partition, variant=variant, codec=codec)
        except ValueError as exc:
            raise ManifestError(f"{source}:{line_no}: {exc}")
        records.append(rec)
    return Manifest(records=records)


def save_manifest(path, manifest: Manifest) -> None:
    with open(str(path), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in manifest.records:
            writer.writerow([r.clip_id, r.path, r.label.value, r.singer_id,
                             r.language, r.partition, r.variant, r.codec])


def flag_missing_audio(manifest: Manifest, base_dir: str = "") -> list[str]:
    missing = []
    for r in manifest.records:
        path = os.path.join(base_dir, r.path) if base_dir else r.path
        if not os.path.exists(path):
            missing.append(r.clip_id)
    return missing


def validate_against_reference(manifest: Manifest,
                               reference: dict[str, tuple[int, int]] | None = None) -> dict:
    """Count comparison per partition plus singer-overlap structure checks.

    Returns {"violations": [...], "counts": {...}}; an empty violation list
    means the manifest matches the reference partitioning.
    """
    reference = REFERENCE_COUNTS if reference is None else reference
    violations = []
    counts = {}
    for partition, want in reference.items():
        got = manifest.counts(partition)
        counts[partition] = {"bonafide": got[0], "deepfake": got[1]}
        if got != tuple(want):
            violations.append(
                f"count violation: {partition} bonafide/deepfake is {got[0]}/{got[1]}, "
                f"expected {want[0]}/{want[1]}"
            )

    train_singers = manifest.singers("Train")
    for singer in sorted(manifest.singers("T01") - train_singers):
        violations.append(f"seen-singer violation: T01 singer {singer!r} absent from Train")
    for singer in sorted(manifest.singers("T02") & train_singers):
        violations.append(f"unseen-singer violation: T02 singer {singer!r} also in Train")
    return {"violations": violations, "counts": counts}


def make_reference_manifest(variant: str = "Vocals") -> Manifest:
    """Synthetic manifest with exactly the reference counts and overlap structure.

    Paths are placeholders; this exists so the validator can be exercised
    without the real corpus.
    """
    train_singers = [f"singer{i:02d}" for i in range(12)]
    unseen_singers = [f"singer{i:02d}" for i in range(12, 20)]
    t04_singers = [f"singer{i:02d}" for i in range(20, 24)]
    codecs = ["c1", "c2", "c3", "c4"]

    records = []

    def add(partition, label, count, singers, language, codec=""):
        for i in range(count):
            n = len(records)
            records.append(ClipRecord(
                clip_id=f"{partition.lower()}_{label.value}_{i:05d}",
                path=f"audio/{partition}/{n:06d}.wav",
                label=label, singer_id=singers[i % len(singers)],
                language=language, partition=partition, variant=variant, codec=codec,
            ))

    add("Train", Label.BONAFIDE, 5251, train_singers, "lang_a")
    add("Train", Label.DEEPFAKE, 4519, train_singers, "lang_a")
    add("Val", Label.BONAFIDE, 1089, train_singers, "lang_a")
    add("Val", Label.DEEPFAKE, 543, train_singers, "lang_a")
    add("T01", Label.BONAFIDE, 370, train_singers, "lang_a")
    add("T01", Label.DEEPFAKE, 1208, train_singers, "lang_a")
    add("T02", Label.BONAFIDE, 1685, unseen_singers, "lang_a")
    add("T02", Label.DEEPFAKE, 1006, unseen_singers, "lang_a")
    for k, codec in enumerate(codecs):
        for label, count in ((Label.BONAFIDE, 1685), (Label.DEEPFAKE, 1006)):
            for i in range(count):
                records.append(ClipRecord(
                    clip_id=f"t03_{codec}_{label.value}_{i:05d}",
                    path=f"audio/T03/{codec}/{i:06d}.wav",
                    label=label, singer_id=unseen_singers[i % len(unseen_singers)],
                    language="lang_a", partition="T03", variant=variant, codec=codec,
                ))
    add("T04", Label.BONAFIDE, 353, t04_singers, "lang_b")
    add("T04", Label.DEEPFAKE, 166, t04_singers, "lang_b")
    return Manifest(records=records)


def with_partition(record: ClipRecord, partition: str, **changes) -> ClipRecord:
    return replace(record, partition=partition, **changes)
