"""Energy-threshold voice activity detection for cutting songs into clips."""

from dataclasses import dataclass

import numpy as np

from .types import Waveform


@dataclass(frozen=True)
class VadConfig:
    frame_ms: float = 30.0
    energy_threshold_db: float = -35.0  # relative to whole-clip RMS
    min_speech_s: float = 1.0
    max_clip_s: float = 20.0
    merge_gap_s: float = 0.5

    def __post_init__(self):
        if self.frame_ms <= 0:
            raise ValueError("frame_ms must be positive")
        if self.min_speech_s <= 0:
            raise ValueError("min_speech_s must be positive")
        if self.max_clip_s < self.min_speech_s:
            raise ValueError("max_clip_s must be >= min_speech_s")


def frame_energies_db(wav: Waveform, cfg: VadConfig) -> np.ndarray:
    """Per-frame RMS in dB relative to the clip RMS."""
    frame_len = max(int(round(cfg.frame_ms * wav.sample_rate / 1000.0)), 1)
    n_frames = wav.samples.size // frame_len
    if n_frames < 1:
        raise ValueError("waveform shorter than one VAD frame")
    trimmed = wav.samples[: n_frames * frame_len].reshape(n_frames, frame_len)
    frame_rms = np.sqrt(np.mean(trimmed**2, axis=1))
    clip_rms = np.sqrt(np.mean(wav.samples**2))
    if clip_rms <= 0.0:
        return np.full(n_frames, -np.inf)
    return 20.0 * np.log10(np.maximum(frame_rms, 1e-12) / clip_rms)


def segment_by_vad(wav: Waveform, cfg: VadConfig = VadConfig()) -> list[tuple[float, float]]:
    """Active intervals (start_s, end_s): sorted, disjoint, each >= min_speech_s.

    Gaps shorter than merge_gap_s are bridged; intervals longer than
    max_clip_s are split at the lowest-energy interior frame (chosen so both
    halves keep at least min_speech_s when possible).
    """
    energies = frame_energies_db(wav, cfg)
    frame_s = cfg.frame_ms / 1000.0
    active = energies >= cfg.energy_threshold_db

    intervals = _runs(active)
    intervals = _merge(intervals, int(np.ceil(cfg.merge_gap_s / frame_s)))
    min_frames = int(np.ceil(cfg.min_speech_s / frame_s))
    intervals = [(a, b) for a, b in intervals if b - a >= min_frames]

    max_frames = int(np.floor(cfg.max_clip_s / frame_s))
    out: list[tuple[int, int]] = []
    stack = list(reversed(intervals))
    while stack:
        a, b = stack.pop()
        if b - a <= max_frames:
            out.append((a, b))
            continue
        lo, hi = a + min_frames, b - min_frames
        if lo >= hi:
            out.append((a, b))
            continue
        split = lo + int(np.argmin(energies[lo:hi]))
        stack.append((split, b))
        stack.append((a, split))

    duration = wav.samples.size / wav.sample_rate
    return [(a * frame_s, min(b * frame_s, duration)) for a, b in out]


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Half-open [start, end) frame ranges where mask is true."""
    runs = []
    start = None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, mask.size))
    return runs


def _merge(runs: list[tuple[int, int]], gap_frames: int) -> list[tuple[int, int]]:
    if not runs:
        return []
    merged = [runs[0]]
    for a, b in runs[1:]:
        pa, pb = merged[-1]
        if a - pb < gap_frames:
            merged[-1] = (pa, b)
        else:
            merged.append((a, b))
    return merged
