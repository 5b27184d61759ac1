import numpy as np
import pytest

from svdd.features.featio import FeatureFormatError, read_feature, write_feature
from svdd.features.types import FeatureKind, FeatureMatrix


def test_roundtrip_bit_identical(tmp_path, rng):
    feat = FeatureMatrix(values=rng.standard_normal((37, 13)).astype(np.float32),
                         frame_rate=100.0, kind=FeatureKind.MFCC, source_clip="clip1")
    path = tmp_path / "clip1.feat"
    write_feature(path, feat)
    back = read_feature(path, source_clip="clip1")
    assert back.values.tobytes() == feat.values.tobytes()
    assert back.kind is FeatureKind.MFCC
    assert back.frame_rate == 100.0
    assert back.values.shape == (37, 13)


def test_header_is_single_text_line(tmp_path):
    feat = FeatureMatrix(values=np.zeros((2, 3), dtype=np.float32),
                         frame_rate=50.0, kind=FeatureKind.LOGMEL)
    path = tmp_path / "x.feat"
    write_feature(path, feat)
    with open(path, "rb") as fh:
        header = fh.readline().decode("utf-8")
    assert header.startswith("SVDDFEAT v1 kind=LogMel T=2 D=3 frame_rate=")
    assert (path.stat().st_size - len(header)) == 2 * 3 * 4


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "bad.feat"
    path.write_bytes(b"NOTAFEAT v1 kind=MFCC T=1 D=1 frame_rate=1\n" + b"\x00" * 4)
    with pytest.raises(FeatureFormatError, match="bad magic"):
        read_feature(path)


def test_truncated_payload_rejected(tmp_path):
    feat = FeatureMatrix(values=np.ones((4, 4), dtype=np.float32),
                         frame_rate=100.0, kind=FeatureKind.CQCC)
    path = tmp_path / "t.feat"
    write_feature(path, feat)
    raw = path.read_bytes()
    path.write_bytes(raw[:-8])
    with pytest.raises(FeatureFormatError, match="truncated"):
        read_feature(path)


def test_malformed_header_rejected(tmp_path):
    path = tmp_path / "m.feat"
    path.write_bytes(b"SVDDFEAT v1 kind=MFCC T=x D=1 frame_rate=1.0\n")
    with pytest.raises(FeatureFormatError, match="malformed"):
        read_feature(path)
