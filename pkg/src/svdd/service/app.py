"""HTTP surface wrapping the pipeline; one endpoint per pipeline command.

Paths in requests refer to the service host's filesystem: the service is a
local daemon that keeps encoder weights warm across requests, not a public
API. Validation failures map to 4xx, everything else to 500 with detail.
"""

from fastapi import FastAPI, HTTPException

from .. import __version__, pipeline
from ..config import ExperimentConfig, FeatureSpec
from ..data.manifest import (
    ManifestError,
    flag_missing_audio,
    load_manifest,
    validate_against_reference,
)
from ..data.synthetic import generate_surrogate
from ..eval.eer import Label, ScoredTrial, compute_eer
from ..features.audio import AudioError, load_audio
from ..features.featio import write_feature
from ..features.vad import VadConfig, segment_by_vad
from . import models

app = FastAPI(title="svdd", version=__version__)

_BAD_REQUEST = (ValueError, ManifestError, AudioError, pipeline.PipelineError,
                FileNotFoundError)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _BAD_REQUEST as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.get("/health", response_model=models.HealthResponse)
def health():
    return models.HealthResponse(status="ok", version=__version__)


@app.post("/extract", response_model=models.ExtractResponse)
def extract(req: models.ExtractRequest):
    result = _guard(pipeline.run_extract, req.config)
    return models.ExtractResponse(written=result.written, skipped=result.skipped,
                                  failures=result.failures)


@app.post("/train", response_model=models.TrainResponse)
def train(req: models.TrainRequest):
    summary = _guard(pipeline.run_train, req.config)
    return models.TrainResponse(**summary)


@app.post("/eval", response_model=models.EvalResponse)
def evaluate(req: models.EvalRequest):
    report = _guard(pipeline.run_eval, req.config, req.head_path)
    return models.EvalResponse(report=report)


@app.post("/report", response_model=models.ReportResponse)
def report(req: models.ReportRequest):
    tables = _guard(pipeline.run_report, req.run_dirs, req.out_dir,
                    req.quoted, req.quoted_label)
    return models.ReportResponse(tables=tables)


@app.post("/spectro", response_model=models.SpectroResponse)
def spectro(req: models.SpectroRequest):
    meta = _guard(pipeline.run_spectro, req.audio_a, req.audio_b, req.out_dir)
    return models.SpectroResponse(meta=meta)


@app.post("/eer", response_model=models.EerResponse)
def eer(req: models.EerRequest):
    def compute():
        trials = [ScoredTrial(clip_id=str(t.get("clip_id", i)), label=Label(t["label"]),
                              score=float(t["score"]))
                  for i, t in enumerate(req.trials)]
        return compute_eer(trials)

    value, threshold = _guard(compute)
    return models.EerResponse(eer=value, eer_percent=100.0 * value, threshold=threshold)


@app.post("/manifest/validate", response_model=models.ValidateManifestResponse)
def validate_manifest(req: models.ValidateManifestRequest):
    def run():
        manifest = load_manifest(req.manifest)
        result = validate_against_reference(manifest)
        missing = flag_missing_audio(manifest, base_dir="") if req.check_audio else []
        return result, missing

    result, missing = _guard(run)
    return models.ValidateManifestResponse(violations=result["violations"],
                                           counts=result["counts"], missing_audio=missing)


@app.post("/synthetic", response_model=models.SyntheticResponse)
def synthetic(req: models.SyntheticRequest):
    import os

    manifest = _guard(generate_surrogate, req.out_dir, seed=req.seed,
                      separability=req.separability,
                      t04_separability=req.t04_separability)
    counts = {p: dict(zip(("bonafide", "deepfake"), manifest.counts(p)))
              for p in ("Train", "Val", "T01", "T02", "T03", "T04")}
    return models.SyntheticResponse(
        manifest_path=os.path.join(str(req.out_dir), "manifest.csv"),
        n_clips=len(manifest.records), counts=counts)


@app.post("/feature/clip", response_model=models.FeatureClipResponse)
def feature_clip(req: models.FeatureClipRequest):
    def run():
        spec = FeatureSpec(**req.feature)
        ctx = pipeline.EncoderContext(spec) if spec.needs_encoder() else None
        feat = pipeline.compute_feature(spec, req.audio_path,
                                        clip_id=req.audio_path, ctx=ctx)
        write_feature(req.out_path, feat)
        return feat

    feat = _guard(run)
    return models.FeatureClipResponse(out_path=req.out_path, n_frames=feat.n_frames,
                                      n_dims=feat.n_dims, kind=feat.kind.value)


@app.post("/vad", response_model=models.VadResponse)
def vad(req: models.VadRequest):
    def run():
        wav = load_audio(req.audio_path)
        cfg = VadConfig(frame_ms=req.frame_ms, energy_threshold_db=req.energy_threshold_db,
                        min_speech_s=req.min_speech_s, max_clip_s=req.max_clip_s,
                        merge_gap_s=req.merge_gap_s)
        return segment_by_vad(wav, cfg)

    return models.VadResponse(intervals=_guard(run))


@app.post("/selftest", response_model=models.SelftestResponse)
def selftest():
    result = pipeline.run_selftest()
    return models.SelftestResponse(**result)
