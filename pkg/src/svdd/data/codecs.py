"""Codec round trips for the communication-codec stress condition.

Codecs come from a JSON configuration mapping tag -> spec. External codecs
run a command template with {input}/{output} placeholders against temp WAV
files; builtin tags are self-contained DSP degradations so the harness stays
usable on hosts without encoder binaries.
"""

import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, replace as dc_replace

import numpy as np

from ..features.audio import load_audio, resample, save_wav
from ..features.types import Waveform
from .manifest import ClipRecord, ManifestError

BUILTIN_CODECS = ("identity", "mulaw8k", "resample8k", "quant6bit", "lowpass3k")


class CodecError(Exception):
    pass


@dataclass(frozen=True)
class CodecSpec:
    tag: str
    kind: str = "builtin"  # "builtin" or "command"
    command: str = ""      # template with {input} and {output}
    bitrate_kbps: float = 0.0

    def __post_init__(self):
        if self.kind == "builtin" and self.tag not in BUILTIN_CODECS:
            raise CodecError(f"unknown builtin codec {self.tag!r}; expected one of {BUILTIN_CODECS}")
        if self.kind == "command" and ("{input}" not in self.command or "{output}" not in self.command):
            raise CodecError(f"codec {self.tag!r}: command template needs {{input}} and {{output}}")
        if self.kind not in ("builtin", "command"):
            raise CodecError(f"codec {self.tag!r}: kind must be builtin or command")


def codec_set_from_config(config: dict) -> dict[str, CodecSpec]:
    specs = {}
    for tag, entry in config.items():
        specs[tag] = CodecSpec(tag=tag, kind=entry.get("kind", "command"),
                               command=entry.get("command", ""),
                               bitrate_kbps=float(entry.get("bitrate_kbps", 0.0)))
    return specs


def codec_augment(wav: Waveform, spec: CodecSpec) -> Waveform:
    """Encode-decode round trip; output is resampled back to the input rate.

    Duration is preserved to within one 10 ms frame (trim/pad after decode).
    """
    if spec.kind == "builtin":
        out = _builtin(wav, spec.tag)
    else:
        out = _external(wav, spec)
    return _fix_duration(out, wav.samples.size)


def _fix_duration(wav: Waveform, n_samples: int) -> Waveform:
    x = wav.samples
    if x.size > n_samples:
        x = x[:n_samples]
    elif x.size < n_samples:
        x = np.pad(x, (0, n_samples - x.size))
    return Waveform(samples=x, sample_rate=wav.sample_rate)


def _builtin(wav: Waveform, tag: str) -> Waveform:
    if tag == "identity":
        return wav
    if tag == "mulaw8k":
        narrow = resample(wav, 8000)
        mu = 255.0
        compressed = np.sign(narrow.samples) * np.log1p(mu * np.abs(narrow.samples)) / np.log1p(mu)
        quantized = np.round(compressed * 127.0) / 127.0
        expanded = np.sign(quantized) * (np.expm1(np.abs(quantized) * np.log1p(mu))) / mu
        return resample(Waveform(samples=expanded, sample_rate=8000), wav.sample_rate)
    if tag == "resample8k":
        return resample(resample(wav, 8000), wav.sample_rate)
    if tag == "quant6bit":
        levels = 2 ** 6 / 2 - 1
        return Waveform(samples=np.round(wav.samples * levels) / levels, sample_rate=wav.sample_rate)
    if tag == "lowpass3k":
        spectrum = np.fft.rfft(wav.samples)
        freqs = np.fft.rfftfreq(wav.samples.size, d=1.0 / wav.sample_rate)
        spectrum[freqs > 3000.0] = 0.0
        return Waveform(samples=np.fft.irfft(spectrum, n=wav.samples.size), sample_rate=wav.sample_rate)
    raise CodecError(f"unknown builtin codec {tag!r}")


def _external(wav: Waveform, spec: CodecSpec) -> Waveform:
    with tempfile.TemporaryDirectory() as tmp:
        src = os.path.join(tmp, "in.wav")
        dst = os.path.join(tmp, "out.wav")
        save_wav(src, wav)
        cmd = [part.format(input=src, output=dst, bitrate=spec.bitrate_kbps)
               for part in shlex.split(spec.command)]
        try:
            proc = subprocess.run(cmd, capture_output=True, timeout=120)
        except FileNotFoundError:
            raise CodecError(f"codec {spec.tag!r}: encoder binary {cmd[0]!r} not found on host")
        except subprocess.TimeoutExpired:
            raise CodecError(f"codec {spec.tag!r}: command timed out")
        if proc.returncode != 0:
            raise CodecError(
                f"codec {spec.tag!r} failed ({proc.returncode}): {proc.stderr.decode(errors='replace')[:500]}"
            )
        if not os.path.exists(dst):
            raise CodecError(f"codec {spec.tag!r} produced no output file")
        return load_audio(dst, target_rate=wav.sample_rate)


def build_t03(t02_records: list[ClipRecord], codec_tags: list[str]) -> list[ClipRecord]:
    """Cross product of the unseen-singer test clips with the four codecs."""
    if len(codec_tags) != 4:
        raise ManifestError(f"T03 requires exactly 4 codecs, got {len(codec_tags)}")
    out = []
    for codec in codec_tags:
        for rec in t02_records:
            out.append(dc_replace(
                rec,
                clip_id=f"{rec.clip_id}__{codec}",
                partition="T03",
                codec=codec,
            ))
    return out
