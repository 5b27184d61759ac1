import numpy as np
import pytest

from svdd.features.cepstral import dct_matrix
from svdd.features.cqt import cqcc, cqt_frequencies, cqt_magnitude, q_factor
from svdd.features.spectral import LOG_FLOOR
from svdd.features.types import FeatureKind, Waveform

from helpers import naive_cqt_bin, sine


def _wav(samples):
    return Waveform(samples=samples, sample_rate=16000)


def test_pure_tone_peaks_at_matching_bin():
    bpo, fmin = 12, 100.0
    for k in (3, 10, 17):
        freq = fmin * 2.0 ** (k / bpo)
        mag = cqt_magnitude(_wav(sine(freq, 1.0, 16000)), bins_per_octave=bpo,
                            fmin=fmin, fmax=3200.0)
        mid_frame = mag[mag.shape[0] // 2]
        assert int(np.argmax(mid_frame)) == k


def test_octave_apart_tones_differ_by_bins_per_octave():
    bpo, fmin = 12, 100.0
    peaks = []
    for freq in (200.0, 400.0):
        mag = cqt_magnitude(_wav(sine(freq, 1.0, 16000)), bins_per_octave=bpo,
                            fmin=fmin, fmax=3200.0)
        peaks.append(int(np.argmax(mag[mag.shape[0] // 2])))
    assert peaks[1] - peaks[0] == bpo


def test_cqt_matches_naive_windowed_dft(rng):
    bpo, fmin, fmax, hop = 12, 200.0, 1600.0, 512
    samples = rng.standard_normal(8000) * 0.2
    mag = cqt_magnitude(_wav(samples), bins_per_octave=bpo, fmin=fmin, fmax=fmax, hop=hop)
    freqs = cqt_frequencies(bpo, fmin, fmax)
    q = q_factor(bpo)
    frame = 7
    for k in (0, len(freqs) // 2, len(freqs) - 1):
        expected = naive_cqt_bin(samples, 16000, freqs[k], q)(frame * hop)
        assert abs(mag[frame, k] - expected) < 1e-9


def test_zero_input_gives_dct_of_log_floor():
    feat = cqcc(_wav(np.zeros(8000)), bins_per_octave=12, fmin=100.0, fmax=3200.0, n_coeffs=10)
    n_bins = cqt_frequencies(12, 100.0, 3200.0).size
    expected = dct_matrix(2 * n_bins) @ np.full(2 * n_bins, np.log10(LOG_FLOOR))
    np.testing.assert_allclose(feat.values[0], expected[:10], atol=1e-4)
    assert np.all(feat.values == feat.values[0])
    assert feat.kind is FeatureKind.CQCC


def test_invalid_frequency_range_rejected():
    wav = _wav(np.zeros(4000))
    with pytest.raises(ValueError, match="invalid frequency range"):
        cqt_magnitude(wav, fmin=0.0)
    with pytest.raises(ValueError, match="invalid frequency range"):
        cqt_magnitude(wav, fmin=100.0, fmax=9000.0)
    with pytest.raises(ValueError, match="invalid frequency range"):
        cqt_magnitude(wav, fmin=3200.0, fmax=100.0)


def test_cqcc_shape_and_frame_rate():
    feat = cqcc(_wav(sine(440.0, 0.5, 16000)), bins_per_octave=12, fmin=100.0,
                fmax=3200.0, n_coeffs=15, hop=256)
    assert feat.values.shape == (int(np.ceil(0.5 * 16000 / 256)), 15)
    assert feat.frame_rate == 16000 / 256
