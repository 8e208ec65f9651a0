"""MGS file container: 12-byte header, optional sampled index, bitstream.

Header (little-endian where multi-byte)::

    0  4  magic b"MGS3"
    4  1  version_minor (2)
    5  1  codec id (bv 0, bg 1, cs 2, cg 3)
    6  1  flags: bit0 index mode, bit1 code family (0 fibonacci, 1 zeta-3),
          bits 2-7 log2 of the index stride (index mode only, else 0)
    7  1  log2 of the reference window (rounded up)
    8  4  n (uint32)

Index mode inserts, right after the header, ``ceil(n/k)`` uint64 bit offsets
(relative to the bitstream start) of vertices 0, k, 2k, ...; CG streams add a
cluster directory (uint32 K, then K x (uint64 bit offset, uint32 size)).
"""
from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass

import numpy as np

from .bitcodes import CodeFamily
from .codecs import (CODEC_IDS, CODEC_NAMES, CorruptStream, EncodedStream, StreamInfo,
                     decode_range, encode, read_preamble)
from .graph import DirectedGraph

MAGIC = b"MGS3"
VERSION_MINOR = 2
HEADER_SIZE = 12
DEFAULT_STRIDE = 64
_HEADER = struct.Struct("<4sBBBBI")

FLAG_INDEX = 0x01
FLAG_ZETA = 0x02


class ContainerError(ValueError):
    pass


@dataclass(frozen=True)
class ContainerHeader:
    codec: str
    n: int
    log2_window: int
    family: str = "fibonacci"
    index_mode: bool = False
    log2_stride: int = 0
    version_minor: int = VERSION_MINOR

    @property
    def window(self) -> int:
        return 1 << self.log2_window

    @property
    def stride(self) -> int | None:
        return (1 << self.log2_stride) if self.index_mode else None

    @property
    def code_family(self) -> CodeFamily:
        return CodeFamily.zeta(3) if self.family == "zeta3" else CodeFamily.fibonacci()

    def pack(self) -> bytes:
        if not 0 <= self.n < 2 ** 32:
            raise ContainerError("n must fit in 32 bits")
        if self.family not in ("fibonacci", "zeta3"):
            raise ContainerError(f"unsupported code family {self.family}")
        if not 0 <= self.log2_stride < 64:
            raise ContainerError("stride exponent must fit in 6 bits")
        flags = (FLAG_INDEX if self.index_mode else 0) | (FLAG_ZETA if self.family == "zeta3" else 0)
        if self.index_mode:
            flags |= self.log2_stride << 2
        return _HEADER.pack(MAGIC, self.version_minor, CODEC_IDS[self.codec], flags,
                            self.log2_window, self.n)

    @classmethod
    def parse(cls, data: bytes) -> "ContainerHeader":
        if len(data) < HEADER_SIZE:
            raise ContainerError(f"file shorter than the {HEADER_SIZE}-byte header")
        magic, minor, codec, flags, lw, n = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise ContainerError("bad magic; not an MGS container")
        if minor != VERSION_MINOR:
            raise ContainerError(f"unsupported version 3.{minor}")
        if codec not in CODEC_NAMES:
            raise ContainerError(f"unknown codec id {codec}")
        index = bool(flags & FLAG_INDEX)
        if not index and flags >> 2:
            raise ContainerError("reserved flag bits set")
        return cls(CODEC_NAMES[codec], n, lw, "zeta3" if flags & FLAG_ZETA else "fibonacci",
                   index, flags >> 2 if index else 0, minor)


def _log2_ceil(x: int) -> int:
    return max(0, (x - 1).bit_length())


def index_overhead_bits(n: int, stride: int, clusters: int | None = None) -> int:
    """Size of the index section: sample table plus the CG cluster directory."""
    bits = math.ceil(n / stride) * 64
    if clusters is not None:
        bits += 32 + 96 * clusters
    return bits


def _family_name(f: CodeFamily) -> str:
    return "zeta3" if (f.name == "zeta3") else "fibonacci"


def build_container(stream: EncodedStream, mode: str = "children") -> bytes:
    """Frame ``stream`` as a file (``mode`` is 'children' or 'index')."""
    if mode not in ("children", "index"):
        raise ContainerError(f"unknown mode {mode!r}")
    if stream.positions.shape[0] != stream.n:
        raise ContainerError(f"stream holds {stream.positions.shape[0]} records, header says n={stream.n}")
    index = mode == "index"
    stride = stream.stride
    if index and not stride:
        raise ContainerError("index mode needs a stream encoded with a stride")
    if stride and stride & (stride - 1):
        raise ContainerError("stride must be a power of two")
    hdr = ContainerHeader(stream.codec, stream.n, _log2_ceil(stream.window), _family_name(stream.family),
                          index, stride.bit_length() - 1 if index else 0)
    parts = [hdr.pack()]
    if index:
        samples = stream.positions[::stride].astype("<u8")
        parts.append(samples.tobytes())
        if stream.codec == "cg":
            parts.append(struct.pack("<I", len(stream.cluster_sizes)))
            for off, size in zip(stream.cluster_offsets.tolist(), stream.cluster_sizes):
                parts.append(struct.pack("<QI", off, size))
    parts.append(stream.data)
    return b"".join(parts)


def compress(g: DirectedGraph, codec: str = "bg", mode: str = "children", stride: int = DEFAULT_STRIDE,
             **kwargs) -> bytes:
    """Encode ``g`` and frame it; index mode clips references at sample points."""
    stream = encode(g, codec, stride=stride if mode == "index" else None, **kwargs)
    return build_container(stream, mode)


@dataclass
class OpenedContainer:
    header: ContainerHeader
    info: StreamInfo
    bitstream: bytes
    samples: np.ndarray | None
    directory: list[tuple[int, int]] | None
    index_bytes: int


def open_container(data: bytes) -> OpenedContainer:
    hdr = ContainerHeader.parse(data)
    pos = HEADER_SIZE
    samples = None
    directory = None
    if hdr.index_mode:
        cnt = math.ceil(hdr.n / hdr.stride)
        end = pos + 8 * cnt
        if len(data) < end:
            raise ContainerError("truncated sample table")
        samples = np.frombuffer(data, dtype="<u8", count=cnt, offset=pos).astype(np.int64)
        pos = end
        if hdr.codec == "cg":
            if len(data) < pos + 4:
                raise ContainerError("truncated cluster directory")
            (k,) = struct.unpack_from("<I", data, pos)
            pos += 4
            if len(data) < pos + 12 * k:
                raise ContainerError("truncated cluster directory")
            directory = [struct.unpack_from("<QI", data, pos + 12 * i) for i in range(k)]
            pos += 12 * k
        if samples.size and np.any(np.diff(samples) <= 0):
            raise ContainerError("sample offsets must be strictly increasing")
    bitstream = data[pos:]
    window = hdr.window if hdr.codec != "bv" else 0
    try:
        info = read_preamble(bitstream, hdr.codec, hdr.n, window, hdr.code_family, hdr.stride)
    except (ValueError, EOFError) as exc:
        if isinstance(exc, CorruptStream):
            raise
        raise CorruptStream(getattr(exc, "position", 0), f"bad preamble: {exc}") from exc
    return OpenedContainer(hdr, info, bitstream, samples, directory, pos - HEADER_SIZE)


def decompress(data: bytes) -> DirectedGraph:
    """Decode any container produced by :func:`compress`."""
    c = open_container(data)
    n = c.header.n
    if n == 0:
        return DirectedGraph.empty(0)
    op, oi = decode_range(c.bitstream, c.info, 0, n, c.info.records_start)
    return DirectedGraph(op, oi)


class RandomAccess:
    """Successor queries on an index-mode container.

    ``records_decoded`` counts vertex records decoded by the last query.
    """

    def __init__(self, data: bytes):
        self.c = open_container(data)
        if not self.c.header.index_mode:
            raise ContainerError("random access needs an index-mode container")
        self.stride = self.c.header.stride
        self.records_decoded = 0
        self.total_decoded = 0

    @property
    def n(self) -> int:
        return self.c.header.n

    def successors(self, v: int) -> np.ndarray:
        """1-based successors of 1-based vertex ``v``."""
        if not 1 <= v <= self.n:
            raise IndexError(f"vertex {v} outside 1..{self.n}")
        v0 = v - 1
        b = (v0 // self.stride) * self.stride
        op, oi = decode_range(self.c.bitstream, self.c.info, b, v0 + 1, int(self.c.samples[b // self.stride]))
        self.records_decoded = v0 + 1 - b
        self.total_decoded += self.records_decoded
        return oi[op[-2]:op[-1]] + 1


def random_access(data: bytes, v: int) -> np.ndarray:
    return RandomAccess(data).successors(v)


def bpe(file_bytes: int | bytes | str | os.PathLike, m: int) -> float:
    """Bits per edge: 8 x file size / m."""
    if m <= 0:
        raise ValueError("bits per edge needs m > 0")
    if isinstance(file_bytes, (bytes, bytearray)):
        size = len(file_bytes)
    elif isinstance(file_bytes, int):
        size = file_bytes
    else:
        size = os.path.getsize(file_bytes)
    return 8 * size / m


def write_container(path: str | os.PathLike, data: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(data)


def read_container(path: str | os.PathLike) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()
