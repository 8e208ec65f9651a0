"""Permutation files: text ("old new" per line, 1-based) and binary
(b"PRM1", n as uint32 LE, then n uint32 LE new IDs in old-ID order)."""
from __future__ import annotations

import os
import struct

import numpy as np

from ..graph import GraphFormatError, Permutation

_MAGIC = b"PRM1"


def write_permutation(p: Permutation, path: str | os.PathLike, binary: bool = False) -> None:
    if binary:
        with open(path, "wb") as fh:
            fh.write(_MAGIC + struct.pack("<I", p.n) + p.forward.astype("<u4").tobytes())
        return
    with open(path, "w") as fh:
        for old, new in enumerate(p.forward.tolist(), 1):
            fh.write(f"{old} {new}\n")


def read_permutation(path: str | os.PathLike) -> Permutation:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] == _MAGIC:
        (n,) = struct.unpack_from("<I", data, 4)
        body = np.frombuffer(data, dtype="<u4", offset=8)
        if body.size != n:
            raise GraphFormatError(f"permutation file declares {n} entries, has {body.size}")
        return Permutation(body.astype(np.int64))
    pairs = []
    for lineno, line in enumerate(data.decode().splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2 or not all(t.isdigit() for t in parts):
            raise GraphFormatError(f"line {lineno}: expected 'old new', got {s!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    n = len(pairs)
    fwd = np.zeros(n, dtype=np.int64)
    for old, new in pairs:
        if not 1 <= old <= n:
            raise GraphFormatError(f"old id {old} outside 1..{n}")
        fwd[old - 1] = new
    return Permutation(fwd)
