"""End-to-end orchestration: extraction, training, evaluation, reporting.

This module is the single implementation behind both the HTTP service and
the CLI. All file writes are atomic (temp file + rename) and all outputs are
byte-stable for fixed inputs and seed.
"""

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import oracles
from .config import ExperimentConfig, FeatureSpec
from .data.manifest import Manifest, PARTITIONS, load_manifest
from .encoder.config import EncoderConfig, named_config
from .encoder.model import encode, load_weights
from .features.audio import load_audio, pad_or_trim
from .features.cepstral import dct_matrix, lfcc, mfcc
from .features.cqt import cqcc
from .features.featio import read_feature, write_feature
from .features.filterbank import apply_filterbank, linear_filterbank, mel_filterbank
from .features.spectral import ENCODER_SAMPLE_RATE, log_mel_spectrogram
from .features.types import FeatureKind, FeatureMatrix
from .eval.eer import Label, ScoredTrial, compute_eer_from_arrays
from .eval.reports import (
    PartitionReport,
    evaluate_partition,
    report_to_dict,
    trials_to_csv,
    write_json,
    write_text,
)
from .heads.cnn import CnnHeadConfig
from .heads.headio import load_head, save_head
from .heads.resnet import ResNet34Config
from .heads.train import BONAFIDE, DEEPFAKE, TrainConfig, score_batch, train

ENCODER_CLIP_SAMPLES = 30 * ENCODER_SAMPLE_RATE

_VARIANT_TAG = {"vocals": "Vocals", "mixtures": "Mixture"}


class PipelineError(Exception):
    pass


@dataclass
class ExtractResult:
    written: int = 0
    skipped: int = 0
    failures: list[dict] = field(default_factory=list)


class EncoderContext:
    """Weights loaded once per run; read-only and safe to share across workers."""

    def __init__(self, spec: FeatureSpec):
        self.cfg = _encoder_config(spec)
        self.weights = load_weights(spec.weights_path, self.cfg)


def _encoder_config(spec: FeatureSpec) -> EncoderConfig:
    if spec.system == "w_custom":
        dims = spec.encoder
        return EncoderConfig(size_name="custom", n_blocks=dims.n_blocks,
                             d_model=dims.d_model, n_heads=dims.n_heads, d_ff=dims.d_ff)
    return named_config(spec.system.removeprefix("w_"))


def compute_feature(spec: FeatureSpec, audio_path: str, clip_id: str,
                    ctx: EncoderContext | None = None) -> FeatureMatrix:
    wav = load_audio(audio_path, target_rate=ENCODER_SAMPLE_RATE)
    if spec.needs_encoder():
        wav = pad_or_trim(wav, ENCODER_CLIP_SAMPLES)
        mel = log_mel_spectrogram(wav, source_clip=clip_id)
        enc = encode(mel, ctx.cfg, ctx.weights, source_clip=clip_id)
        return FeatureMatrix(values=enc.values, frame_rate=mel.frame_rate / 2.0,
                             kind=FeatureKind.ENCODING, source_clip=clip_id)
    if spec.system == "logmel":
        return log_mel_spectrogram(wav, source_clip=clip_id)
    if spec.system == "mfcc":
        return mfcc(wav, n_mels=spec.n_filters, n_coeffs=spec.n_coeffs, source_clip=clip_id)
    if spec.system == "lfcc":
        return lfcc(wav, n_filters=spec.n_filters, n_coeffs=spec.n_coeffs, source_clip=clip_id)
    if spec.system == "cqcc":
        return cqcc(wav, bins_per_octave=spec.bins_per_octave, fmin=spec.fmin,
                    fmax=spec.fmax, n_coeffs=spec.n_coeffs, source_clip=clip_id)
    raise PipelineError(f"unhandled feature system {spec.system!r}")


def _safe_id(clip_id: str) -> str:
    return "".join(c if c.isalnum() or c in "-_." else "_" for c in clip_id)


def cache_path(cache_dir: str, clip_id: str, spec: FeatureSpec, key: str) -> str:
    return os.path.join(cache_dir, f"{_safe_id(clip_id)}__{spec.system}__{key}.feat")


def _records_for(config: ExperimentConfig, manifest: Manifest):
    tag = _VARIANT_TAG[config.variant]
    records = [r for r in manifest.records if r.variant == tag]
    if not records:
        raise PipelineError(f"manifest has no records for variant {config.variant!r}")
    return records


def _audio_path(manifest_path: str, record_path: str) -> str:
    if os.path.isabs(record_path):
        return record_path
    return os.path.join(os.path.dirname(os.path.abspath(manifest_path)), record_path)


def run_extract(config: ExperimentConfig) -> ExtractResult:
    """Compute and cache the configured feature for every manifest clip.

    Idempotent: entries newer than their source audio are skipped.
    """
    manifest = load_manifest(config.manifest)
    records = _records_for(config, manifest)
    os.makedirs(config.cache_dir, exist_ok=True)
    key = config.feature.cache_key()
    ctx = EncoderContext(config.feature) if config.feature.needs_encoder() else None

    result = ExtractResult()

    def one(record):
        audio = _audio_path(config.manifest, record.path)
        target = cache_path(config.cache_dir, record.clip_id, config.feature, key)
        if os.path.exists(target) and os.path.exists(audio) \
                and os.path.getmtime(target) >= os.path.getmtime(audio):
            return "skipped", record.clip_id, None
        try:
            feat = compute_feature(config.feature, audio, record.clip_id, ctx)
            write_feature(target, feat)
            return "written", record.clip_id, None
        except Exception as exc:
            return "failed", record.clip_id, str(exc)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(one, records))
    else:
        outcomes = [one(r) for r in records]

    for status, clip_id, error in outcomes:
        if status == "written":
            result.written += 1
        elif status == "skipped":
            result.skipped += 1
        else:
            result.failures.append({"clip_id": clip_id, "error": error})
    return result


def _load_cached(config: ExperimentConfig, records, key: str) -> list[np.ndarray]:
    out = []
    for record in records:
        target = cache_path(config.cache_dir, record.clip_id, config.feature, key)
        if not os.path.exists(target):
            raise PipelineError(f"missing feature file for clip {record.clip_id!r}: {target}")
        out.append(read_feature(target, source_clip=record.clip_id).values)
    return out


def _head_arch_config(config: ExperimentConfig, feature_dim: int):
    if config.head == "cnn":
        return CnnHeadConfig(feature_dim=feature_dim)
    return ResNet34Config()


def head_archive_path(config: ExperimentConfig) -> str:
    return os.path.join(config.out_dir, f"head_{config.head}.svddtnsr")


def run_train(config: ExperimentConfig) -> dict:
    """Train the configured head on Train, select on Val, save the archive."""
    extract = run_extract(config)
    if extract.failures:
        raise PipelineError(f"feature extraction failed for {len(extract.failures)} clips: "
                            f"{extract.failures[:3]}")
    manifest = load_manifest(config.manifest)
    records = _records_for(config, manifest)
    key = config.feature.cache_key()

    train_recs = [r for r in records if r.partition == "Train"]
    val_recs = [r for r in records if r.partition == "Val"]
    if not train_recs or not val_recs:
        raise PipelineError("manifest needs non-empty Train and Val partitions")

    x_train = _load_cached(config, train_recs, key)
    x_val = _load_cached(config, val_recs, key)
    y_train = [BONAFIDE if r.label is Label.BONAFIDE else DEEPFAKE for r in train_recs]
    y_val = [BONAFIDE if r.label is Label.BONAFIDE else DEEPFAKE for r in val_recs]

    arch_config = _head_arch_config(config, x_train[0].shape[1])
    train_cfg = TrainConfig(lr=config.train.lr, batch_size=config.train.batch_size,
                            max_epochs=config.train.max_epochs,
                            early_stop_patience=config.train.early_stop_patience,
                            seed=config.seed)
    head = train(config.head, arch_config, x_train, y_train, x_val, y_val, train_cfg)

    os.makedirs(config.out_dir, exist_ok=True)
    path = head_archive_path(config)
    save_head(path, head, arch_config)
    best = head.history[head.best_epoch]
    return {
        "head_path": path,
        "history": head.history,
        "best_epoch": head.best_epoch,
        "best_val_eer_percent": 100.0 * best["val_eer"],
    }


def run_eval(config: ExperimentConfig, head_path: str | None = None) -> dict:
    """Score every partition and emit byte-stable reports and score files."""
    extract = run_extract(config)
    if extract.failures:
        raise PipelineError(f"feature extraction failed for {len(extract.failures)} clips: "
                            f"{extract.failures[:3]}")
    head = load_head(head_path or head_archive_path(config))
    manifest = load_manifest(config.manifest)
    records = _records_for(config, manifest)
    key = config.feature.cache_key()
    os.makedirs(config.out_dir, exist_ok=True)

    reports: dict[str, PartitionReport] = {}
    for partition in PARTITIONS:
        part_recs = sorted([r for r in records if r.partition == partition],
                           key=lambda r: r.clip_id)
        if not part_recs:
            continue
        matrices = _load_cached(config, part_recs, key)
        scores = []
        for b0 in range(0, len(matrices), 64):
            scores.extend(score_batch(head, matrices[b0:b0 + 64]).tolist())
        trials = [ScoredTrial(clip_id=r.clip_id, label=r.label, score=float(np.clip(s, 0.0, 1.0)))
                  for r, s in zip(part_recs, scores)]
        reports[partition] = evaluate_partition(partition, trials)
        write_text(os.path.join(config.out_dir, f"scores_{partition}.csv"), trials_to_csv(trials))

    doc = report_to_dict(reports, extras={
        "feature_system": config.feature.system,
        "head": config.head,
        "variant": config.variant,
        "seed": config.seed,
    })
    write_json(os.path.join(config.out_dir, "report.json"), doc)
    return doc


def run_report(run_dirs: list[str], out_dir: str,
               quoted: dict[str, float] | None = None,
               quoted_label: str = "quoted") -> dict:
    """Aggregate run reports into a flat feature x partition EER table."""
    from .eval.reports import compare_with_quoted_baseline

    os.makedirs(out_dir, exist_ok=True)
    rows = []
    comparisons = {}
    for run_dir in run_dirs:
        report_path = os.path.join(run_dir, "report.json")
        if not os.path.exists(report_path):
            raise PipelineError(f"no report.json in {run_dir}")
        with open(report_path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        label = f"{doc.get('feature_system', '?')}+{doc.get('head', '?')}/{doc.get('variant', '?')}"
        for partition, entry in sorted(doc.get("partitions", {}).items()):
            rows.append((label, partition, entry["eer_percent"]))
        if "test_avg_eer_percent" in doc:
            rows.append((label, "test_avg", doc["test_avg_eer_percent"]))
        if quoted:
            partition_reports = {
                p: PartitionReport(partition=p, eer_percent=e["eer_percent"],
                                   threshold=e["threshold"], n_bonafide=e["n_bonafide"],
                                   n_deepfake=e["n_deepfake"])
                for p, e in doc.get("partitions", {}).items()
            }
            comparisons[label] = compare_with_quoted_baseline(partition_reports, quoted)

    lines = ["system,partition,eer_percent"]
    lines += [f"{label},{partition},{value!r}" for label, partition, value in rows]
    write_text(os.path.join(out_dir, "eer_table.csv"), "\n".join(lines) + "\n")

    doc = {"rows": [{"system": l, "partition": p, "eer_percent": v} for l, p, v in rows]}
    if comparisons:
        doc["comparisons"] = {"against": quoted_label, "per_system": comparisons}
    write_json(os.path.join(out_dir, "report_tables.json"), doc)
    return doc


def run_spectro(audio_a: str, audio_b: str, out_dir: str) -> dict:
    """Aligned log-spectrogram dumps for qualitative bonafide/deepfake contrasts."""
    os.makedirs(out_dir, exist_ok=True)
    mats = []
    for path in (audio_a, audio_b):
        wav = load_audio(path, target_rate=ENCODER_SAMPLE_RATE)
        mats.append(log_mel_spectrogram(wav, source_clip=os.path.basename(path)))
    n = min(m.n_frames for m in mats)
    out_paths = []
    for tag, mat in zip(("a", "b"), mats):
        clipped = FeatureMatrix(values=mat.values[:n], frame_rate=mat.frame_rate,
                                kind=mat.kind, source_clip=mat.source_clip)
        path = os.path.join(out_dir, f"spectro_{tag}.feat")
        write_feature(path, clipped)
        out_paths.append(path)
    meta = {"a": audio_a, "b": audio_b, "frames": n,
            "files": out_paths, "frame_rate": mats[0].frame_rate}
    write_json(os.path.join(out_dir, "spectro.json"), meta)
    return meta


def run_selftest(seed: int = 0) -> dict:
    """Quick oracle suite: filterbank, DCT, attention, EER, Adam, gradients."""
    from .encoder.model import (
        multi_head_self_attention,
        scaled_dot_attention,
        transformer_block,
    )
    from .encoder.randinit import random_weights, toy_config
    from .heads.gradcheck import grad_check
    from .heads.cnn import CnnHead
    import torch

    rng = np.random.default_rng(seed)
    checks = []

    def check(name, passed, detail):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    bank = mel_filterbank(16000, 400, 20)
    frame = rng.uniform(0.0, 2.0, size=bank.shape[1])
    direct = oracles.filterbank_direct(frame, bank)
    fast = apply_filterbank(frame[None, :], bank)[0]
    err = float(np.max(np.abs(direct - fast) / np.maximum(np.abs(direct), 1e-30)))
    check("mel filterbank vs direct summation", err < 1e-9, f"max rel err {err:.2e}")

    lin = linear_filterbank(16000, 400, 20)
    direct = oracles.filterbank_direct(frame, lin)
    fast = apply_filterbank(frame[None, :], lin)[0]
    err = float(np.max(np.abs(direct - fast) / np.maximum(np.abs(direct), 1e-30)))
    check("linear filterbank vs direct summation", err < 1e-9, f"max rel err {err:.2e}")

    m = dct_matrix(24)
    err = float(np.max(np.abs(m.T @ m - np.eye(24))))
    check("DCT-II orthonormality", err < 1e-9, f"max |M^T M - I| = {err:.2e}")

    q, k, v = (rng.standard_normal((5, 4)).astype(np.float32) for _ in range(3))
    err = float(np.max(np.abs(scaled_dot_attention(q, k, v) - oracles.softmax_attention(q, k, v))))
    check("scaled dot attention vs loop oracle", err < 1e-5, f"max abs dev {err:.2e}")

    cfg = toy_config(n_blocks=1, d_model=8, n_heads=2, d_ff=16, n_mels=8, max_frames=8)
    weights = random_weights(cfg, seed=seed)
    x = rng.standard_normal((6, 8)).astype(np.float32)
    bw = weights.blocks[0]
    err = float(np.max(np.abs(multi_head_self_attention(x, bw.attn, 2)
                              - oracles.multi_head_attention(x, bw.attn, 2))))
    check("multi-head attention vs head-loop oracle", err < 1e-5, f"max abs dev {err:.2e}")
    err = float(np.max(np.abs(transformer_block(x, bw, 2) - oracles.transformer_block(x, bw, 2))))
    check("transformer block vs straight-line oracle", err < 1e-5, f"max abs dev {err:.2e}")

    worst = 0.0
    for _ in range(25):
        bona = rng.uniform(0.0, 1.0, size=int(rng.integers(2, 40)))
        deep = rng.uniform(0.0, 1.0, size=int(rng.integers(2, 40)))
        fast_eer, _ = compute_eer_from_arrays(bona, deep)
        slow_eer, _ = oracles.eer_threshold_sweep(bona, deep)
        worst = max(worst, abs(fast_eer - slow_eer))
    check("EER vs exhaustive threshold sweep", worst < 1e-9, f"max dev {worst:.2e}")

    w = torch.nn.Parameter(torch.tensor([1.0], dtype=torch.float64))
    opt = torch.optim.Adam([w], lr=0.001, betas=(0.9, 0.999), eps=1e-8)
    (w**2).sum().backward()
    opt.step()
    expected = oracles.adam_single_step(1.0, 2.0)
    err = abs(float(w.item()) - expected)
    check("single Adam step vs hand computation", err < 1e-9,
          f"w1={float(w.item()):.6f}, expected {expected:.6f}")

    torch.manual_seed(seed)
    tiny = CnnHead(CnnHeadConfig(feature_dim=8, input_frames=16, channels=(2, 2)))
    inputs = torch.randn(4, 1, 16, 8, dtype=torch.float64,
                         generator=torch.Generator().manual_seed(seed))
    targets = torch.tensor([0, 1, 0, 1])
    rel = grad_check(tiny, inputs, targets, n_params=60, seed=seed)
    check("CNN gradient vs finite differences", rel < 1e-3, f"max rel err {rel:.2e}")

    return {"passed": all(c["passed"] for c in checks), "checks": checks}
