from .audio import AudioError, load_audio, pad_or_trim, resample, save_wav
from .cepstral import dct_matrix, lfcc, mfcc
from .cqt import cqcc, cqt_frequencies, cqt_magnitude
from .featio import FeatureFormatError, read_feature, write_feature
from .filterbank import (
    apply_filterbank,
    linear_center_frequencies,
    linear_filterbank,
    mel_filterbank,
)
from .spectral import ENCODER_N_MELS, ENCODER_SAMPLE_RATE, ENCODER_STFT, log_mel_spectrogram
from .stft import StftConfig, hann_window, power_spectrogram
from .types import FeatureKind, FeatureMatrix, Waveform
from .vad import VadConfig, frame_energies_db, segment_by_vad

__all__ = [
    "AudioError",
    "ENCODER_N_MELS",
    "ENCODER_SAMPLE_RATE",
    "ENCODER_STFT",
    "FeatureFormatError",
    "FeatureKind",
    "FeatureMatrix",
    "StftConfig",
    "VadConfig",
    "Waveform",
    "apply_filterbank",
    "cqcc",
    "cqt_frequencies",
    "cqt_magnitude",
    "dct_matrix",
    "frame_energies_db",
    "hann_window",
    "lfcc",
    "linear_center_frequencies",
    "linear_filterbank",
    "load_audio",
    "log_mel_spectrogram",
    "mel_filterbank",
    "mfcc",
    "pad_or_trim",
    "power_spectrogram",
    "read_feature",
    "resample",
    "save_wav",
    "segment_by_vad",
    "write_feature",
]
