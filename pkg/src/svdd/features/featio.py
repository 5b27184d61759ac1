"""Feature dump format: one text header line, then raw little-endian float32.

Layout: `SVDDFEAT v1 kind=<kind> T=<T> D=<D> frame_rate=<f>\\n` followed by
T*D float32 values, row-major (time-major).
"""

import os
import tempfile

import numpy as np

from .types import FeatureKind, FeatureMatrix

MAGIC = b"SVDDFEAT"
VERSION = "v1"


class FeatureFormatError(Exception):
    pass


def write_feature(path, feat: FeatureMatrix) -> None:
    values = np.ascontiguousarray(feat.values, dtype="<f4")
    header = (
        f"SVDDFEAT {VERSION} kind={feat.kind.value} T={feat.n_frames} "
        f"D={feat.n_dims} frame_rate={feat.frame_rate!r}\n"
    )
    # Write to a sibling temp file then rename so readers never see partial dumps.
    directory = os.path.dirname(os.path.abspath(str(path))) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(header.encode("utf-8"))
            fh.write(values.tobytes())
        os.replace(tmp, str(path))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_feature(path, source_clip: str = "") -> FeatureMatrix:
    with open(str(path), "rb") as fh:
        header = fh.readline()
        if not header.startswith(MAGIC):
            raise FeatureFormatError(f"bad magic in {path}")
        fields = header.decode("utf-8").strip().split()
        if len(fields) != 6 or fields[1] != VERSION:
            raise FeatureFormatError(f"malformed header in {path}: {header!r}")
        try:
            kv = dict(item.split("=", 1) for item in fields[2:])
            kind = FeatureKind(kv["kind"])
            n_frames = int(kv["T"])
            n_dims = int(kv["D"])
            frame_rate = float(kv["frame_rate"])
        except (KeyError, ValueError) as exc:
            raise FeatureFormatError(f"malformed header in {path}: {exc}")

        blob = fh.read(4 * n_frames * n_dims)
        if len(blob) != 4 * n_frames * n_dims:
            raise FeatureFormatError(
                f"truncated payload in {path}: expected {4 * n_frames * n_dims} bytes, got {len(blob)}"
            )
        values = np.frombuffer(blob, dtype="<f4").reshape(n_frames, n_dims)
    return FeatureMatrix(values=values, frame_rate=frame_rate, kind=kind, source_clip=source_clip)
