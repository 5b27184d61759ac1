"""Request and response schemas for the HTTP service."""

from typing import Optional

from pydantic import BaseModel, Field

from ..config import ExperimentConfig


class HealthResponse(BaseModel):
    status: str
    version: str


class ExtractRequest(BaseModel):
    config: ExperimentConfig


class ExtractResponse(BaseModel):
    written: int
    skipped: int
    failures: list[dict]


class TrainRequest(BaseModel):
    config: ExperimentConfig


class TrainResponse(BaseModel):
    head_path: str
    best_epoch: int
    best_val_eer_percent: float
    history: list[dict]


class EvalRequest(BaseModel):
    config: ExperimentConfig
    head_path: Optional[str] = None


class EvalResponse(BaseModel):
    report: dict


class ReportRequest(BaseModel):
    run_dirs: list[str]
    out_dir: str
    quoted: Optional[dict[str, float]] = None
    quoted_label: str = "quoted"


class ReportResponse(BaseModel):
    tables: dict


class SpectroRequest(BaseModel):
    audio_a: str
    audio_b: str
    out_dir: str


class SpectroResponse(BaseModel):
    meta: dict


class EerRequest(BaseModel):
    trials: list[dict] = Field(description="rows of {clip_id, label, score}")


class EerResponse(BaseModel):
    eer: float
    eer_percent: float
    threshold: float


class ValidateManifestRequest(BaseModel):
    manifest: str
    check_audio: bool = False


class ValidateManifestResponse(BaseModel):
    violations: list[str]
    counts: dict
    missing_audio: list[str] = Field(default_factory=list)


class SyntheticRequest(BaseModel):
    out_dir: str
    seed: int = 0
    separability: float = 1.0
    t04_separability: float = 0.35


class SyntheticResponse(BaseModel):
    manifest_path: str
    n_clips: int
    counts: dict


class FeatureClipRequest(BaseModel):
    audio_path: str
    out_path: str
    feature: dict = Field(default_factory=dict, description="FeatureSpec fields")


class FeatureClipResponse(BaseModel):
    out_path: str
    n_frames: int
    n_dims: int
    kind: str


class SelftestResponse(BaseModel):
    passed: bool
    checks: list[dict]


class VadRequest(BaseModel):
    audio_path: str
    frame_ms: float = 30.0
    energy_threshold_db: float = -35.0
    min_speech_s: float = 1.0
    max_clip_s: float = 20.0
    merge_gap_s: float = 0.5


class VadResponse(BaseModel):
    intervals: list[tuple[float, float]]
