"""On-disk formats: PEMB/PLBL binaries, CSV/text fallbacks, manifest and
report JSON.

PEMB v1: magic "PEMB", version byte 1, dtype byte 0 (float32 LE), two
reserved zero bytes, n and d as u64 LE, then n*d floats row-major
(24-byte header). PLBL v1: magic "PLBL", version byte 1, three reserved
zero bytes, n as u64 LE, then n u32 LE class ids (16-byte header).
Values are stored at 32-bit precision and widened to float64 in memory.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .embed_core import EmbeddingSet
from .errors import BadMagic, NonFiniteValue, RaggedCsv, TruncatedFile

PEMB_MAGIC = b"PEMB"
PLBL_MAGIC = b"PLBL"
PEMB_HEADER = struct.Struct("<4sBB2xQQ")
PLBL_HEADER = struct.Struct("<4sB3xQ")

REPORT_SCHEMA = "adaptscore-report-v1"


def save_embeddings(path, e: EmbeddingSet) -> None:
    path = Path(path)
    payload = e.data.astype("<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(PEMB_HEADER.pack(PEMB_MAGIC, 1, 0, e.n, e.dim))
        fh.write(payload)


def save_embeddings_csv(path, e: EmbeddingSet) -> None:
    # repr of the float32 value round-trips within 1 ulp of 32-bit
    data32 = e.data.astype(np.float32)
    with open(path, "w") as fh:
        for row in data32:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def _check_finite(arr: np.ndarray) -> None:
    if not np.isfinite(arr).all():
        r, c = np.argwhere(~np.isfinite(arr))[0]
        raise NonFiniteValue(int(r), int(c))


def load_embeddings(path) -> EmbeddingSet:
    """Load a PEMB or CSV embedding file (sniffed by magic bytes)."""
    path = Path(path)
    blob = path.read_bytes()
    if blob[:4] == PEMB_MAGIC:
        if len(blob) < PEMB_HEADER.size:
            raise TruncatedFile(str(path), PEMB_HEADER.size, len(blob))
        magic, version, dtype, n, d = PEMB_HEADER.unpack_from(blob)
        if version != 1 or dtype != 0:
            raise BadMagic(str(path), blob[:6])
        expected = PEMB_HEADER.size + 4 * n * d
        if len(blob) != expected:
            raise TruncatedFile(str(path), expected, len(blob))
        arr = np.frombuffer(blob, dtype="<f4", offset=PEMB_HEADER.size).reshape(n, d)
        arr = arr.astype(np.float64)
        _check_finite(arr)
        return EmbeddingSet(arr)
    try:
        text = blob.decode("utf-8")
    except UnicodeDecodeError:
        raise BadMagic(str(path), blob[:4]) from None
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise RaggedCsv(str(path), lineno)
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise RaggedCsv(str(path), lineno) from None
    if not rows:
        raise TruncatedFile(str(path), 1, 0)
    arr = np.asarray(rows, dtype=np.float64)
    _check_finite(arr)
    return EmbeddingSet(arr)


def save_labels(path, labels) -> None:
    labels = np.asarray(labels, dtype=np.int64)
    with open(path, "wb") as fh:
        fh.write(PLBL_HEADER.pack(PLBL_MAGIC, 1, labels.shape[0]))
        fh.write(labels.astype("<u4").tobytes())


def save_labels_text(path, labels) -> None:
    with open(path, "w") as fh:
        for v in np.asarray(labels, dtype=np.int64):
            fh.write(f"{int(v)}\n")


def load_labels(path) -> np.ndarray:
    """Load a PLBL or plain-text label file (sniffed by magic bytes)."""
    path = Path(path)
    blob = path.read_bytes()
    if blob[:4] == PLBL_MAGIC:
        if len(blob) < PLBL_HEADER.size:
            raise TruncatedFile(str(path), PLBL_HEADER.size, len(blob))
        magic, version, n = PLBL_HEADER.unpack_from(blob)
        if version != 1:
            raise BadMagic(str(path), blob[:5])
        expected = PLBL_HEADER.size + 4 * n
        if len(blob) != expected:
            raise TruncatedFile(str(path), expected, len(blob))
        return np.frombuffer(blob, dtype="<u4", offset=PLBL_HEADER.size).astype(np.int64)
    try:
        text = blob.decode("utf-8")
    except UnicodeDecodeError:
        raise BadMagic(str(path), blob[:4]) from None
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            v = int(line.strip())
        except ValueError:
            raise RaggedCsv(str(path), lineno) from None
        if v < 0:
            raise RaggedCsv(str(path), lineno)
        values.append(v)
    if not values:
        raise TruncatedFile(str(path), 1, 0)
    return np.asarray(values, dtype=np.int64)


def load_manifest(path) -> dict:
    with open(path) as fh:
        manifest = json.load(fh)
    ids = [c["id"] for c in manifest.get("candidates", [])]
    if len(ids) != len(set(ids)):
        raise ValueError("candidate ids must be unique")
    return manifest


def dump_report(report: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_accuracy_csv(path) -> dict:
    """candidate_id,accuracy_percent rows into a dict."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.strip().split(",")
            if len(parts) != 2:
                raise RaggedCsv(str(path), lineno)
            out[parts[0]] = float(parts[1])
    return out
