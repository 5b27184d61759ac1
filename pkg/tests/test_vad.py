import numpy as np
import pytest

from svdd.features.types import Waveform
from svdd.features.vad import VadConfig, frame_energies_db, segment_by_vad

from helpers import sine

SR = 16000


def _concat(*parts):
    return Waveform(samples=np.concatenate(parts), sample_rate=SR)


def test_all_zero_waveform_gives_no_intervals():
    wav = Waveform(samples=np.zeros(SR * 3), sample_rate=SR)
    assert segment_by_vad(wav) == []


def test_two_tones_with_wide_gap_stay_separate():
    wav = _concat(sine(300.0, 5.0, SR), np.zeros(SR * 2), sine(300.0, 5.0, SR))
    cfg = VadConfig(merge_gap_s=1.0)
    intervals = segment_by_vad(wav, cfg)
    assert len(intervals) == 2
    frame = cfg.frame_ms / 1000.0
    (a0, a1), (b0, b1) = intervals
    assert abs(a0 - 0.0) <= frame and abs(a1 - 5.0) <= frame
    assert abs(b0 - 7.0) <= frame and abs(b1 - 12.0) <= frame


def test_narrow_gap_is_merged():
    wav = _concat(sine(300.0, 5.0, SR), np.zeros(SR // 2), sine(300.0, 5.0, SR))
    intervals = segment_by_vad(wav, VadConfig(merge_gap_s=1.0))
    assert len(intervals) == 1
    assert abs(intervals[0][0] - 0.0) <= 0.03
    assert abs(intervals[0][1] - 10.5) <= 0.06


def test_short_bursts_are_dropped():
    wav = _concat(sine(300.0, 0.3, SR), np.zeros(SR * 2), sine(300.0, 3.0, SR))
    intervals = segment_by_vad(wav, VadConfig(min_speech_s=1.0, merge_gap_s=0.2))
    assert len(intervals) == 1
    assert intervals[0][1] - intervals[0][0] >= 1.0


def test_long_interval_split_below_max():
    wav = Waveform(samples=sine(300.0, 45.0, SR), sample_rate=SR)
    cfg = VadConfig(max_clip_s=20.0)
    intervals = segment_by_vad(wav, cfg)
    assert len(intervals) >= 2
    for a, b in intervals:
        assert b - a <= cfg.max_clip_s + cfg.frame_ms / 1000.0


def test_intervals_sorted_disjoint_within_duration(rng):
    for _ in range(10):
        n = int(rng.integers(SR, SR * 8))
        samples = rng.standard_normal(n) * rng.uniform(0.001, 0.5)
        gate = rng.random(n) < 0.5
        wav = Waveform(samples=samples * gate, sample_rate=SR)
        intervals = segment_by_vad(wav, VadConfig(min_speech_s=0.2, max_clip_s=2.0))
        duration = n / SR
        prev_end = 0.0
        for a, b in intervals:
            assert 0.0 <= a < b <= duration + 1e-9
            assert a >= prev_end - 1e-9
            prev_end = b


def test_frame_energy_reference_is_clip_rms():
    wav = Waveform(samples=np.ones(SR), sample_rate=SR)
    db = frame_energies_db(wav, VadConfig())
    np.testing.assert_allclose(db, 0.0, atol=1e-9)


def test_config_validation():
    with pytest.raises(ValueError):
        VadConfig(frame_ms=0.0)
    with pytest.raises(ValueError):
        VadConfig(min_speech_s=2.0, max_clip_s=1.0)
