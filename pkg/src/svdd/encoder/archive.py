"""Portable tensor archive v1.

Byte layout: 8-byte magic `SVDDTNSR`, u32 version, u32 header length, UTF-8
JSON header mapping tensor name -> {dtype, shape, offset, byte_length}, then a
contiguous blob of little-endian float32 values (row-major), then a trailing
u32 CRC32 of the blob. Offsets are relative to the start of the blob.
"""

import json
import os
import struct
import tempfile
import zlib

import numpy as np

MAGIC = b"SVDDTNSR"
VERSION = 1


class ArchiveError(Exception):
    pass


def write_archive(path, tensors: dict[str, np.ndarray]) -> None:
    entries = {}
    chunks = []
    offset = 0
    for name in sorted(tensors):
        arr = np.ascontiguousarray(tensors[name], dtype="<f4")
        raw = arr.tobytes()
        entries[name] = {
            "dtype": "f32",
            "shape": list(arr.shape),
            "offset": offset,
            "byte_length": len(raw),
        }
        chunks.append(raw)
        offset += len(raw)

    header = json.dumps(entries, sort_keys=True).encode("utf-8")
    blob = b"".join(chunks)
    crc = zlib.crc32(blob) & 0xFFFFFFFF

    directory = os.path.dirname(os.path.abspath(str(path))) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<II", VERSION, len(header)))
            fh.write(header)
            fh.write(blob)
            fh.write(struct.pack("<I", crc))
        os.replace(tmp, str(path))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_archive(path) -> dict[str, np.ndarray]:
    with open(str(path), "rb") as fh:
        magic = fh.read(8)
        if magic != MAGIC:
            raise ArchiveError(f"bad magic in {path}: {magic!r}")
        version, header_len = struct.unpack("<II", fh.read(8))
        if version != VERSION:
            raise ArchiveError(f"unsupported archive version {version} in {path}")
        try:
            entries = json.loads(fh.read(header_len).decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ArchiveError(f"corrupt archive header in {path}: {exc}")

        rest = fh.read()
    if len(rest) < 4:
        raise ArchiveError(f"truncated archive {path}")
    blob, (stored_crc,) = rest[:-4], struct.unpack("<I", rest[-4:])
    if zlib.crc32(blob) & 0xFFFFFFFF != stored_crc:
        raise ArchiveError(f"checksum failure for blob in {path}")

    tensors = {}
    for name, meta in entries.items():
        if meta.get("dtype") != "f32":
            raise ArchiveError(f"tensor {name!r}: unsupported dtype {meta.get('dtype')!r}")
        shape = tuple(int(s) for s in meta["shape"])
        offset, byte_length = int(meta["offset"]), int(meta["byte_length"])
        expected = 4 * int(np.prod(shape)) if shape else 4
        if byte_length != expected:
            raise ArchiveError(
                f"tensor {name!r}: byte_length {byte_length} does not match shape {shape}"
            )
        if offset < 0 or offset + byte_length > len(blob):
            raise ArchiveError(f"tensor {name!r}: data range outside blob")
        tensors[name] = np.frombuffer(
            blob, dtype="<f4", count=byte_length // 4, offset=offset
        ).reshape(shape)
    return tensors
