"""LZW dictionaries, code streams and Huffman code lengths.

Everything here works on plain ``bytes``. The LZW table starts with the 256
single-byte codes and grows without bound; only the learned multi-byte
patterns are reported as dictionary entries.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Mapping

__all__ = [
    "EmptyInputError",
    "LzwDictionary",
    "CodeStream",
    "LzwState",
    "as_byte_sequence",
    "lzw_pass",
    "lzw_compress",
    "lzw_decompress",
    "lzw_decode_codes",
    "lzw_compressed_length",
    "emitted_code_bits",
    "huffman_code_lengths",
    "huffman_cost",
    "dict_size",
    "dict_entropy",
    "dict_huffman_bits",
    "stream_entropy",
]

ALPHABET = 256


class EmptyInputError(ValueError):
    pass


def as_byte_sequence(data) -> bytes:
    """Validate ``data`` as a non-empty byte string and return it as ``bytes``."""
    if isinstance(data, str):
        raise TypeError("expected bytes, got str; encode the text first")
    data = bytes(data)
    if not data:
        raise EmptyInputError("empty input")
    return data


@dataclass(frozen=True)
class LzwDictionary:
    entries: dict[bytes, int]
    emitted_codes: int
    source_length: int

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, pattern) -> bool:
        return bytes(pattern) in self.entries


@dataclass(frozen=True)
class CodeStream:
    codes: tuple[int, ...]
    code_frequencies: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.code_frequencies and self.codes:
            object.__setattr__(self, "code_frequencies", dict(Counter(self.codes)))

    def __len__(self) -> int:
        return len(self.codes)


def lzw_pass(data) -> tuple[LzwDictionary, CodeStream]:
    """Run LZW over ``data`` and return the learned dictionary and code stream.

    Each dictionary entry maps a learned pattern to the number of times it
    was emitted as a code.
    """
    data = as_byte_sequence(data)
    table: dict[int, int] = {}
    patterns: list[bytes] = [bytes((b,)) for b in range(ALPHABET)]
    codes: list[int] = []
    w = data[0]
    for c in data[1:]:
        key = (w << 8) | c
        nxt = table.get(key)
        if nxt is None:
            codes.append(w)
            table[key] = len(patterns)
            patterns.append(patterns[w] + bytes((c,)))
            w = c
        else:
            w = nxt
    codes.append(w)

    freq = Counter(codes)
    entries = {patterns[code]: freq.get(code, 0) for code in range(ALPHABET, len(patterns))}
    dictionary = LzwDictionary(entries, emitted_codes=len(codes), source_length=len(data))
    return dictionary, CodeStream(tuple(codes), dict(freq))


def emitted_code_bits(n_codes: int) -> int:
    """Total width of ``n_codes`` codes under variable-width emission.

    The i-th code (from 0) is written while the next free code is 256 + i, so
    its width is ``(256 + i).bit_length()``.
    """
    total = 0
    lo = ALPHABET
    hi = ALPHABET + n_codes
    while lo < hi:
        width = lo.bit_length()
        band_end = min(hi, 1 << width)
        total += (band_end - lo) * width
        lo = band_end
    return total


def lzw_compress(data) -> tuple[bytes, int]:
    """Compress ``data`` into a packed variable-width LZW bit stream.

    Returns the packed bytes (zero-padded to a byte boundary) and the exact
    number of payload bits.
    """
    data = as_byte_sequence(data)
    table: dict[int, int] = {}
    get = table.get
    nxt = ALPHABET
    out = bytearray()
    acc = 0
    nbits = 0
    total = 0
    w = data[0]
    for c in data[1:]:
        key = (w << 8) | c
        code = get(key)
        if code is None:
            width = nxt.bit_length()
            acc = (acc << width) | w
            nbits += width
            total += width
            while nbits >= 8:
                nbits -= 8
                out.append((acc >> nbits) & 0xFF)
            acc &= (1 << nbits) - 1
            table[key] = nxt
            nxt += 1
            w = c
        else:
            w = code
    width = nxt.bit_length()
    acc = (acc << width) | w
    nbits += width
    total += width
    while nbits >= 8:
        nbits -= 8
        out.append((acc >> nbits) & 0xFF)
    if nbits:
        out.append((acc << (8 - nbits)) & 0xFF)
    return bytes(out), total


def lzw_decode_codes(codes) -> bytes:
    """Invert a code sequence produced by :func:`lzw_pass`."""
    codes = list(codes)
    if not codes:
        raise EmptyInputError("empty code stream")
    patterns: list[bytes] = [bytes((b,)) for b in range(ALPHABET)]
    prev = patterns[codes[0]]
    out = [prev]
    for code in codes[1:]:
        if code < len(patterns):
            cur = patterns[code]
        elif code == len(patterns):
            # code defined by this very step (cScSc)
            cur = prev + prev[:1]
        else:
            raise ValueError(f"invalid LZW code {code} with table size {len(patterns)}")
        patterns.append(prev + cur[:1])
        out.append(cur)
        prev = cur
    return b"".join(out)


def lzw_decompress(packed: bytes, n_bits: int | None = None) -> bytes:
    """Unpack and decode a stream written by :func:`lzw_compress`."""
    if n_bits is None:
        n_bits = len(packed) * 8
    if n_bits > len(packed) * 8:
        raise ValueError("bit count exceeds packed length")
    codes = []
    acc = 0
    have = 0
    remaining = n_bits
    width = ALPHABET.bit_length()
    pos = 0
    while remaining >= width:
        while have < width:
            acc = (acc << 8) | packed[pos]
            pos += 1
            have += 8
        have -= width
        codes.append(acc >> have)
        acc &= (1 << have) - 1
        remaining -= width
        width = (ALPHABET + len(codes)).bit_length()
    return lzw_decode_codes(codes)


def lzw_compressed_length(data) -> int:
    """Size in bits of the LZW-compressed form of ``data``."""
    return lzw_compress(data)[1]


def huffman_code_lengths(frequencies: Mapping[Hashable, int]) -> dict:
    """Optimal prefix-code lengths for the given symbol frequencies.

    Ties are broken by frequency, then by the lowest symbol index (symbols are
    indexed in sorted order; a merged node carries its smallest leaf index).
    A lone symbol gets length 1.
    """
    symbols = [s for s, f in frequencies.items() if f > 0]
    if not symbols:
        raise ValueError("empty alphabet")
    try:
        symbols.sort()
    except TypeError:
        symbols.sort(key=repr)
    if len(symbols) == 1:
        return {symbols[0]: 1}

    lengths = dict.fromkeys(symbols, 0)
    heap = [(frequencies[s], idx, [s]) for idx, s in enumerate(symbols)]
    heapq.heapify(heap)
    while len(heap) > 1:
        f1, i1, leaves1 = heapq.heappop(heap)
        f2, i2, leaves2 = heapq.heappop(heap)
        if len(leaves1) < len(leaves2):
            leaves1, leaves2 = leaves2, leaves1
        for s in leaves1:
            lengths[s] += 1
        for s in leaves2:
            lengths[s] += 1
        leaves1.extend(leaves2)
        heapq.heappush(heap, (f1 + f2, min(i1, i2), leaves1))
    return lengths


def huffman_cost(counts) -> int:
    """Weighted Huffman code length, sum(freq * len), from the counts alone."""
    counts = [c for c in counts if c > 0]
    if not counts:
        raise ValueError("empty alphabet")
    if len(counts) == 1:
        return counts[0]
    heapq.heapify(counts)
    total = 0
    pop, push = heapq.heappop, heapq.heappush
    while len(counts) > 1:
        merged = pop(counts) + pop(counts)
        total += merged
        push(counts, merged)
    return total


def stream_entropy(counts) -> float:
    """Total Shannon information sum(f * log2(N / f)) of a frequency table."""
    counts = [c for c in counts if c > 0]
    if not counts:
        raise ValueError("empty code stream")
    n = sum(counts)
    return n * math.log2(n) - sum(c * math.log2(c) for c in counts)


def dict_size(d: LzwDictionary) -> int:
    return len(d.entries)


def dict_entropy(d: LzwDictionary, stream: CodeStream) -> float:
    """Information content of the emitted code stream, in bits."""
    if not stream.codes:
        raise EmptyInputError("empty code stream")
    return stream_entropy(stream.code_frequencies.values())


def dict_huffman_bits(stream: CodeStream) -> int:
    if not stream.codes:
        raise EmptyInputError("empty code stream")
    lengths = huffman_code_lengths(stream.code_frequencies)
    return sum(f * lengths[c] for c, f in stream.code_frequencies.items())


class LzwState:
    """Paused LZW scan, resumable on further input.

    Scanning ``x`` once and then resuming on ``y`` reproduces the LZW pass over
    the concatenation ``x + y`` exactly, so per-object state can be cached and
    pairwise work is proportional to the appended part only.
    """

    __slots__ = ("table", "pending", "counts", "source_length")

    def __init__(self, table, pending, counts, source_length):
        self.table = table
        self.pending = pending
        self.counts = counts
        self.source_length = source_length

    @classmethod
    def scan(cls, data, track_counts: bool = True) -> "LzwState":
        data = as_byte_sequence(data)
        state = cls({}, data[0], {} if track_counts else None, 1)
        state._feed(data[1:])
        return state

    def extend(self, data) -> "LzwState":
        """Return a new state continued over ``data``; ``self`` is unchanged."""
        data = bytes(data)
        counts = None if self.counts is None else self.counts.copy()
        state = LzwState(self.table.copy(), self.pending, counts, self.source_length)
        state._feed(data)
        return state

    def _feed(self, data: bytes) -> None:
        table = self.table
        get = table.get
        nxt = ALPHABET + len(table)
        w = self.pending
        counts = self.counts
        if counts is None:
            for c in data:
                key = (w << 8) | c
                code = get(key)
                if code is None:
                    table[key] = nxt
                    nxt += 1
                    w = c
                else:
                    w = code
        else:
            cget = counts.get
            for c in data:
                key = (w << 8) | c
                code = get(key)
                if code is None:
                    counts[w] = cget(w, 0) + 1
                    table[key] = nxt
                    nxt += 1
                    w = c
                else:
                    w = code
        self.pending = w
        self.source_length += len(data)

    @property
    def n_entries(self) -> int:
        return len(self.table)

    @property
    def emitted_codes(self) -> int:
        # every emission but the final flush adds exactly one entry
        return len(self.table) + 1

    def final_counts(self) -> dict[int, int]:
        """Code frequencies including the final flush of the pending code."""
        if self.counts is None:
            raise ValueError("state was scanned without code counts")
        counts = self.counts.copy()
        counts[self.pending] = counts.get(self.pending, 0) + 1
        return counts
