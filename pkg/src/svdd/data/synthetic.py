"""Desk-scale surrogate corpus generator.

Real singing audio cannot be redistributed, so the full pipeline is exercised
on synthetic bonafide/deepfake surrogates with controlled separability. The
class cue is redundant on purpose: deepfake surrogates get abrupt note
onsets, a brighter harmonic tilt, slight inharmonicity and a louder white
noise floor, while bonafide surrogates fade smoothly with a quieter pink
floor. A cue gap of 1 between the classes is easy to separate; smaller gaps
are harder. The unseen-context split gets a register shift plus a narrow cue
gap centered mid-timbre, which is the injected domain gap that makes it the
hardest condition.
"""

import os
from dataclasses import dataclass

import numpy as np

from ..eval.eer import Label
from ..features.audio import save_wav
from ..features.types import Waveform
from .codecs import CodecSpec, codec_augment
from .manifest import ClipRecord, Manifest, save_manifest

SAMPLE_RATE = 16000
CLIP_SECONDS = 1.6

DEFAULT_CODECS = ("identity", "mulaw8k", "quant6bit", "lowpass3k")

DEFAULT_SIZES = {
    "Train": (100, 100),
    "Val": (25, 25),
    "T01": (12, 12),
    "T02": (12, 12),
    "T04": (12, 12),
}


@dataclass(frozen=True)
class Singer:
    singer_id: str
    base_f0: float
    vibrato_hz: float


def _singer_pool(prefix: str, count: int, rng: np.random.Generator,
                 f0_lo: float, f0_hi: float) -> list[Singer]:
    return [
        Singer(
            singer_id=f"{prefix}{i:02d}",
            base_f0=float(rng.uniform(f0_lo, f0_hi)),
            vibrato_hz=float(rng.uniform(4.5, 6.5)),
        )
        for i in range(count)
    ]


def synth_clip(rng: np.random.Generator, singer: Singer, cue: float,
               register_shift: float = 0.0) -> Waveform:
    """One synthetic sung phrase: a few notes of a harmonic stack plus noise floor.

    cue in [0, 1] interpolates the timbre from fully bonafide (0) to fully
    deepfake (1); the class gap of a partition is the distance between the
    cue values its two classes are rendered with.
    """
    n = int(CLIP_SECONDS * SAMPLE_RATE)
    t = np.arange(n) / SAMPLE_RATE

    # cue-interpolated timbre parameters
    attack_s = 0.08 + cue * (0.002 - 0.08)
    tilt = 1.0 + cue * (0.55 - 1.0)
    inharmonic = cue * 0.004
    noise_gain = 10.0 ** ((-36.0 + cue * 10.0) / 20.0)
    noise_white = cue  # 0 = pink, 1 = white

    n_notes = int(rng.integers(3, 6))
    edges = np.sort(rng.uniform(0.15, 0.85, size=n_notes - 1)) if n_notes > 1 else np.array([])
    bounds = np.concatenate([[0.0], edges, [1.0]]) * n

    signal = np.zeros(n)
    for k in range(n_notes):
        a, b = int(bounds[k]), int(bounds[k + 1])
        if b - a < int(0.05 * SAMPLE_RATE):
            continue
        semitones = float(rng.integers(-4, 8)) + register_shift
        f0 = singer.base_f0 * 2.0 ** (semitones / 12.0)
        seg_t = t[a:b] - t[a]
        vibrato = 1.0 + 0.01 * np.sin(2.0 * np.pi * singer.vibrato_hz * seg_t)
        note = np.zeros(b - a)
        for h in range(1, 7):
            amp = 1.0 / h ** tilt
            freq = f0 * h * (1.0 + inharmonic * h)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            note += amp * np.sin(2.0 * np.pi * freq * vibrato * seg_t + phase)
        note *= _envelope(b - a, attack_s)
        signal[a:b] += note

    signal /= max(np.abs(signal).max(), 1e-9)
    signal *= 0.35

    white = rng.standard_normal(n)
    pink = _pink(white)
    noise = noise_white * white + (1.0 - noise_white) * pink
    noise /= max(np.abs(noise).max(), 1e-9)
    signal += noise_gain * noise
    return Waveform(samples=signal, sample_rate=SAMPLE_RATE)


def _envelope(length: int, attack_s: float) -> np.ndarray:
    ramp = max(int(attack_s * SAMPLE_RATE), 1)
    ramp = min(ramp, length // 2)
    env = np.ones(length)
    if ramp > 0:
        fade = 0.5 - 0.5 * np.cos(np.pi * np.arange(ramp) / ramp)
        env[:ramp] = fade
        env[-ramp:] = fade[::-1]
    return env


def _pink(white: np.ndarray) -> np.ndarray:
    spectrum = np.fft.rfft(white)
    freqs = np.arange(spectrum.size, dtype=np.float64)
    freqs[0] = 1.0
    return np.fft.irfft(spectrum / np.sqrt(freqs), n=white.size)


def generate_surrogate(out_dir, seed: int = 0, variant: str = "Vocals",
                       sizes: dict[str, tuple[int, int]] | None = None,
                       codec_tags: tuple[str, ...] = DEFAULT_CODECS,
                       separability: float = 1.0,
                       t04_separability: float = 0.2) -> Manifest:
    """Write surrogate WAVs plus a manifest CSV; fully determined by seed.

    Partition analogs mirror the real corpus: the seen-singer test split
    reuses training singers on fresh material, the unseen-singer split uses
    held-out singers, the codec split replays it through len(codec_tags)
    codecs, and the unseen-context split carries the injected domain shift:
    a register change plus a cue gap shrunk to t04_separability, with the
    bonafide side bled toward the deepfake timbre so the training decision
    boundary no longer fits.
    """
    out_dir = str(out_dir)
    audio_dir = os.path.join(out_dir, "audio")
    os.makedirs(audio_dir, exist_ok=True)
    sizes = DEFAULT_SIZES if sizes is None else sizes

    pool_rng = np.random.default_rng(seed)
    train_singers = _singer_pool("s", 8, pool_rng, 180.0, 320.0)
    unseen_singers = _singer_pool("u", 4, pool_rng, 180.0, 320.0)
    shifted_singers = _singer_pool("x", 4, pool_rng, 180.0, 320.0)

    t04_bona_cue = max(0.5 - t04_separability / 2.0, 0.0)
    t04_deep_cue = min(0.5 + t04_separability / 2.0, 1.0)
    plan = {
        "Train": (train_singers, "lang_a", 0.0, separability, 0.0),
        "Val": (train_singers, "lang_a", 0.0, separability, 0.0),
        "T01": (train_singers, "lang_a", 0.0, separability, 0.0),
        "T02": (unseen_singers, "lang_a", 0.0, separability, 0.0),
        "T04": (shifted_singers, "lang_b", t04_bona_cue, t04_deep_cue, 5.0),
    }

    records: list[ClipRecord] = []
    t02_waves: list[tuple[ClipRecord, Waveform]] = []

    for partition, (n_bona, n_deep) in sizes.items():
        singers, language, bona_cue, deep_cue, register = plan[partition]
        for label, count in ((Label.BONAFIDE, n_bona), (Label.DEEPFAKE, n_deep)):
            for i in range(count):
                clip_id = f"{partition.lower()}_{label.value}_{i:04d}"
                rng = np.random.default_rng(_clip_seed(seed, clip_id))
                singer = singers[i % len(singers)]
                cue = deep_cue if label is Label.DEEPFAKE else bona_cue
                wav = synth_clip(rng, singer, cue, register)
                rel_path = os.path.join("audio", clip_id + ".wav")
                save_wav(os.path.join(out_dir, rel_path), wav)
                rec = ClipRecord(clip_id=clip_id, path=rel_path, label=label,
                                 singer_id=singer.singer_id, language=language,
                                 partition=partition, variant=variant)
                records.append(rec)
                if partition == "T02":
                    t02_waves.append((rec, wav))

    for codec in codec_tags:
        spec = CodecSpec(tag=codec, kind="builtin")
        for rec, wav in t02_waves:
            clip_id = f"{rec.clip_id}__{codec}"
            rel_path = os.path.join("audio", clip_id + ".wav")
            save_wav(os.path.join(out_dir, rel_path), codec_augment(wav, spec))
            records.append(ClipRecord(clip_id=clip_id, path=rel_path, label=rec.label,
                                      singer_id=rec.singer_id, language=rec.language,
                                      partition="T03", variant=variant, codec=codec))

    manifest = Manifest(records=records)
    save_manifest(os.path.join(out_dir, "manifest.csv"), manifest)
    return manifest


def _clip_seed(seed: int, clip_id: str) -> int:
    digest = 0
    for ch in clip_id:
        digest = (digest * 131 + ord(ch)) % (2**31 - 1)
    return (seed * 2654435761 + digest) % (2**63 - 1)
