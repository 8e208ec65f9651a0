"""Bit-granular streams and universal integer codes.

Bits are packed MSB-first inside each byte and the last byte is zero
padded.  Every code takes a strictly positive integer; callers shift
their domain (``x + 1``, zigzag, ...) before writing.

The low-level routines are numba kernels operating on a ``uint8`` buffer
plus a small ``int64`` state vector ``st``:

* writers: ``st[0]`` is the bit cursor;
* readers: ``st[0]`` cursor, ``st[1]`` bit limit, ``st[2]`` error flag
  (set when a read runs past the limit; reads past the end yield zeros).

The encoders and decoders in :mod:`refgraph.kernel` and
:mod:`refgraph.codecs` call these directly; :class:`BitWriter` and
:class:`BitReader` wrap them for Python callers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numba import njit

FIB = 0
GAMMA = 1
DELTA = 2
ZETA = 3

_FAMILY_NAMES = {FIB: "fibonacci", GAMMA: "gamma", DELTA: "delta", ZETA: "zeta"}


def _fib_table() -> np.ndarray:
    # F(2), F(3), ... = 1, 2, 3, 5, ... while representable in int64
    out = [1, 2]
    while out[-1] + out[-2] < 2**62:
        out.append(out[-1] + out[-2])
    return np.array(out, dtype=np.int64)


FIBS = _fib_table()


class TruncatedStream(ValueError):
    """Raised when a read runs past the end of the available bits."""

    def __init__(self, position: int, what: str = "stream"):
        super().__init__(f"truncated {what} at bit {position}")
        self.position = position


# --------------------------------------------------------------------------
# numba primitives


@njit(cache=True)
def put_bits(buf, st, value, nbits):
    p = st[0]
    for i in range(nbits - 1, -1, -1):
        if (value >> i) & 1:
            buf[p >> 3] |= np.uint8(128 >> (p & 7))
        p += 1
    st[0] = p


@njit(cache=True)
def get_bit(buf, st):
    p = st[0]
    st[0] = p + 1
    if p >= st[1]:
        st[2] = 1
        return 0
    return (buf[p >> 3] >> (7 - (p & 7))) & 1


@njit(cache=True)
def get_bits(buf, st, nbits):
    v = 0
    for _ in range(nbits):
        v = (v << 1) | get_bit(buf, st)
    return v


@njit(cache=True)
def bit_length(x):
    n = 0
    while x > 0:
        x >>= 1
        n += 1
    return n


@njit(cache=True)
def code_len(x, fam, k):
    """Length in bits of the codeword for ``x >= 1``."""
    if fam == GAMMA:
        return 2 * bit_length(x) - 1
    if fam == DELTA:
        nb = bit_length(x)
        return 2 * bit_length(nb) - 1 + nb - 1
    if fam == ZETA:
        h = (bit_length(x) - 1) // k
        s = (h + 1) * k
        if x - (1 << (h * k)) < (1 << (h * k)):
            return h + s
        return h + 1 + s
    # fibonacci: index of the largest F <= x, plus the terminator
    j = 0
    while j + 1 < FIBS.shape[0] and FIBS[j + 1] <= x:
        j += 1
    return j + 2


@njit(cache=True)
def write_code(buf, st, x, fam, k):
    if fam == GAMMA:
        nb = bit_length(x)
        st[0] += nb - 1
        put_bits(buf, st, x, nb)
    elif fam == DELTA:
        nb = bit_length(x)
        lb = bit_length(nb)
        st[0] += lb - 1
        put_bits(buf, st, nb, lb)
        put_bits(buf, st, x, nb - 1)
    elif fam == ZETA:
        h = (bit_length(x) - 1) // k
        st[0] += h
        put_bits(buf, st, 1, 1)
        s = (h + 1) * k
        lo = 1 << (h * k)
        y = x - lo
        if y < lo:
            put_bits(buf, st, y, s - 1)
        else:
            put_bits(buf, st, y + lo, s)
    else:
        j = 0
        while j + 1 < FIBS.shape[0] and FIBS[j + 1] <= x:
            j += 1
        p = st[0]
        r = x
        for i in range(j, -1, -1):
            if FIBS[i] <= r:
                r -= FIBS[i]
                buf[(p + i) >> 3] |= np.uint8(128 >> ((p + i) & 7))
        st[0] = p + j + 1
        put_bits(buf, st, 1, 1)


@njit(cache=True)
def read_code(buf, st, fam, k):
    """Decode one codeword; on truncation sets ``st[2]`` and returns 0."""
    if fam == GAMMA or fam == DELTA:
        z = 0
        while get_bit(buf, st) == 0:
            z += 1
            if st[2] or z > 62:
                st[2] = 1
                return 0
        nb = (1 << z) | get_bits(buf, st, z)
        if fam == GAMMA:
            return nb
        if nb > 63:
            st[2] = 1
            return 0
        return (1 << (nb - 1)) | get_bits(buf, st, nb - 1)
    if fam == ZETA:
        h = 0
        while get_bit(buf, st) == 0:
            h += 1
            if st[2] or (h + 1) * k > 62:
                st[2] = 1
                return 0
        s = (h + 1) * k
        lo = 1 << (h * k)
        t = get_bits(buf, st, s - 1)
        if t >= lo:
            t = ((t << 1) | get_bit(buf, st)) - lo
        return t + lo
    v = 0
    prev = 0
    i = 0
    while True:
        b = get_bit(buf, st)
        if st[2]:
            return 0
        if b == 1 and prev == 1:
            return v
        if b == 1:
            if i >= FIBS.shape[0]:
                st[2] = 1
                return 0
            v += FIBS[i]
        prev = b
        i += 1


@njit(cache=True)
def _encode_many(values, fam, k, nbits):
    buf = np.zeros((nbits + 7) // 8 + 1, dtype=np.uint8)
    st = np.zeros(1, dtype=np.int64)
    ends = np.empty(values.shape[0], dtype=np.int64)
    for i in range(values.shape[0]):
        write_code(buf, st, values[i], fam, k)
        ends[i] = st[0]
    return buf, ends


@njit(cache=True)
def _decode_many(buf, limit, count, fam, k):
    st = np.zeros(3, dtype=np.int64)
    st[1] = limit
    out = np.empty(count, dtype=np.int64)
    ends = np.empty(count, dtype=np.int64)
    for i in range(count):
        out[i] = read_code(buf, st, fam, k)
        ends[i] = st[0]
        if st[2]:
            return out[:i], ends[:i], st[1]
    return out, ends, -1


@njit(cache=True)
def _lengths(values, fam, k):
    out = np.empty(values.shape[0], dtype=np.int64)
    for i in range(values.shape[0]):
        out[i] = code_len(values[i], fam, k)
    return out


@njit(cache=True)
def length_table(upto, fam, k):
    """``table[x]`` = codeword length of x for 1 <= x <= upto (table[0] unused)."""
    t = np.zeros(upto + 1, dtype=np.int64)
    for x in range(1, upto + 1):
        t[x] = code_len(x, fam, k)
    return t


# --------------------------------------------------------------------------
# Python surface


@dataclass(frozen=True)
class CodeFamily:
    kind: int
    k: int = 0

    def __post_init__(self):
        if self.kind not in _FAMILY_NAMES:
            raise ValueError(f"unknown code family {self.kind}")
        if self.kind == ZETA and not 1 <= self.k <= 7:
            raise ValueError("zeta parameter must be in 1..7")

    @classmethod
    def fibonacci(cls) -> "CodeFamily":
        return cls(FIB)

    @classmethod
    def gamma(cls) -> "CodeFamily":
        return cls(GAMMA)

    @classmethod
    def delta(cls) -> "CodeFamily":
        return cls(DELTA)

    @classmethod
    def zeta(cls, k: int = 3) -> "CodeFamily":
        return cls(ZETA, k)

    @classmethod
    def parse(cls, name: str) -> "CodeFamily":
        name = name.strip().lower()
        if name in ("fib", "fibonacci"):
            return cls.fibonacci()
        if name == "gamma":
            return cls.gamma()
        if name == "delta":
            return cls.delta()
        if name.startswith("zeta"):
            k = name[4:].lstrip("-_") or "3"
            return cls.zeta(int(k))
        raise ValueError(f"unknown code family {name!r}")

    @property
    def name(self) -> str:
        base = _FAMILY_NAMES[self.kind]
        return f"zeta{self.k}" if self.kind == ZETA else base

    def length(self, x: int) -> int:
        if x < 1:
            raise ValueError(f"codes are defined for x >= 1, got {x}")
        return int(code_len(x, self.kind, self.k))

    def lengths(self, values) -> np.ndarray:
        return _lengths(np.asarray(values, dtype=np.int64), self.kind, self.k)


ALL_FAMILIES = (
    [CodeFamily.fibonacci(), CodeFamily.gamma(), CodeFamily.delta()]
    + [CodeFamily.zeta(k) for k in range(1, 8)]
)


class BitWriter:
    """Append-only bit sink."""

    def __init__(self, capacity_bytes: int = 64):
        self._buf = np.zeros(max(capacity_bytes, 16), dtype=np.uint8)
        self._st = np.zeros(1, dtype=np.int64)

    @property
    def bits(self) -> int:
        return int(self._st[0])

    def _reserve(self, nbits: int) -> None:
        need = (self.bits + nbits) // 8 + 2
        if need > self._buf.shape[0]:
            grown = np.zeros(max(need, 2 * self._buf.shape[0]), dtype=np.uint8)
            grown[: self._buf.shape[0]] = self._buf
            self._buf = grown

    def write_bits(self, value: int, nbits: int) -> None:
        if nbits == 0:
            return
        if value < 0 or value >> nbits:
            raise ValueError(f"{value} does not fit in {nbits} bits")
        self._reserve(nbits)
        while nbits > 62:
            nbits -= 62
            put_bits(self._buf, self._st, (value >> nbits) & ((1 << 62) - 1), 62)
        put_bits(self._buf, self._st, value & ((1 << nbits) - 1), nbits)

    def write_bit(self, bit: int) -> None:
        self.write_bits(1 if bit else 0, 1)

    def write_int(self, x: int, family: CodeFamily) -> int:
        n = family.length(x)
        self._reserve(n)
        write_code(self._buf, self._st, x, family.kind, family.k)
        return n

    def getvalue(self) -> bytes:
        return self._buf[: (self.bits + 7) // 8].tobytes()


class BitReader:
    """Sequential bit source over a byte string."""

    def __init__(self, data: bytes | np.ndarray, limit_bits: int | None = None, start: int = 0):
        self._buf = np.frombuffer(bytes(data), dtype=np.uint8) if not isinstance(data, np.ndarray) else data
        self._st = np.zeros(3, dtype=np.int64)
        self._st[0] = start
        self._st[1] = self._buf.shape[0] * 8 if limit_bits is None else limit_bits

    @property
    def position(self) -> int:
        return int(self._st[0])

    @property
    def remaining(self) -> int:
        return int(self._st[1] - self._st[0])

    def _check(self, start: int, what: str) -> None:
        if self._st[2]:
            self._st[0] = start
            self._st[2] = 0
            raise TruncatedStream(start, what)

    def read_bits(self, nbits: int) -> int:
        start = self.position
        if nbits > self.remaining:
            raise TruncatedStream(start, "fixed-width field")
        v = 0
        while nbits > 0:
            take = min(nbits, 62)
            v = (v << take) | int(get_bits(self._buf, self._st, take))
            nbits -= take
        return v

    def read_bit(self) -> int:
        return self.read_bits(1)

    def read_int(self, family: CodeFamily) -> int:
        start = self.position
        x = int(read_code(self._buf, self._st, family.kind, family.k))
        self._check(start, f"{family.name} codeword")
        return x


def encode_int(x: int, family: CodeFamily, sink: BitWriter) -> int:
    """Write ``x`` with ``family``; returns the number of bits written."""
    return sink.write_int(x, family)


def decode_int(source: BitReader, family: CodeFamily) -> int:
    return source.read_int(family)


def stop_list_overhead(count: int) -> int:
    """Flag bits spent by a STOP-terminated list of ``count`` values."""
    return count + 1


def write_stop_list(values: Iterable[int], family: CodeFamily, sink: BitWriter) -> int:
    """Write ``values`` as a STOP-terminated list; returns bits written.

    Each value is preceded by a 1 flag and the list ends with a 0 flag, so
    the empty list is the single bit ``0``.
    """
    start = sink.bits
    for x in values:
        sink.write_bit(1)
        sink.write_int(x, family)
    sink.write_bit(0)
    return sink.bits - start


def read_stop_list(source: BitReader, family: CodeFamily) -> list[int]:
    out: list[int] = []
    while source.read_bit():
        out.append(source.read_int(family))
    return out


def encode_many(values: Sequence[int], family: CodeFamily) -> tuple[bytes, np.ndarray]:
    """Concatenate codewords; returns the bytes and each codeword's end bit."""
    arr = np.asarray(values, dtype=np.int64)
    if arr.size and arr.min() < 1:
        raise ValueError("codes are defined for x >= 1")
    nbits = int(family.lengths(arr).sum()) if arr.size else 0
    buf, ends = _encode_many(arr, family.kind, family.k, nbits)
    return buf[: (nbits + 7) // 8].tobytes(), ends


def decode_many(data: bytes, count: int, family: CodeFamily,
                limit_bits: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Decode ``count`` consecutive codewords; returns values and end bits."""
    buf = np.frombuffer(data, dtype=np.uint8)
    limit = buf.shape[0] * 8 if limit_bits is None else limit_bits
    vals, ends, err = _decode_many(buf, limit, count, family.kind, family.k)
    if err >= 0:
        raise TruncatedStream(int(ends[-1]) if len(ends) else 0, f"{family.name} stream")
    return vals, ends
