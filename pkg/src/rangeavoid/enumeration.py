"""Vectorised exhaustive evaluation over all inputs.

Output vectors are turned into *lexicographic keys*: output 0 is the most
significant bit, so numeric order on keys is string order on ``.vec`` text.
Keys fit a uint64 when ``m <= 63``; longer outputs fall back to packed rows.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Iterator, Union

import numpy as np

from .circuit import LocalCircuit, PolyFunction
from .errors import BudgetError, StretchError
from .gf2 import GF2Vector

Function = Union[LocalCircuit, PolyFunction]

CHUNK_BITS = 16
BITMAP_MAX_M = 30
KEY_MAX_M = 63


def default_enum_limit() -> int:
    return int(os.environ.get("RANGEAVOID_ENUM_LIMIT", 1 << 26))


def check_limit(n: int, limit: int | None) -> None:
    if limit is None:
        limit = default_enum_limit()
    if n >= 64 or (1 << n) > limit:
        raise BudgetError(f"exhaustive enumeration of 2^{n} inputs exceeds limit {limit}")


def output_bits(fn: Function, xs: np.ndarray) -> np.ndarray:
    """Array of shape ``(len(xs), m)`` with the outputs on each input in ``xs``."""
    xs = xs.astype(np.uint64, copy=False)
    out = np.zeros((len(xs), fn.m), dtype=np.uint8)
    one = np.uint64(1)
    if isinstance(fn, LocalCircuit):
        for j, o in enumerate(fn.outputs):
            table = np.array(o.table_bits(), dtype=np.uint8)
            pos = np.zeros(len(xs), dtype=np.uint64)
            for t, i in enumerate(o.inputs):
                pos |= ((xs >> np.uint64(i)) & one) << np.uint64(t)
            out[:, j] = table[pos]
    else:
        for j, masks in enumerate(fn.masks):
            acc = np.zeros(len(xs), dtype=np.uint8)
            for mask in masks:
                mk = np.uint64(mask)
                acc ^= ((xs & mk) == mk).astype(np.uint8)
            out[:, j] = acc
    return out


def keys_from_bits(bits: np.ndarray) -> np.ndarray:
    m = bits.shape[1]
    keys = np.zeros(bits.shape[0], dtype=np.uint64)
    for j in range(m):
        keys |= bits[:, j].astype(np.uint64) << np.uint64(m - 1 - j)
    return keys


def lex_key(y: GF2Vector) -> int:
    return sum(b << (y.length - 1 - j) for j, b in enumerate(y))


def vector_from_key(key: int, m: int) -> GF2Vector:
    return GF2Vector.from_bits((key >> (m - 1 - j)) & 1 for j in range(m)) if m else GF2Vector(0)


def chunks(n: int) -> Iterator[tuple[int, int]]:
    total = 1 << n
    step = 1 << CHUNK_BITS
    for start in range(0, total, step):
        yield start, min(total, start + step)


def _xs(start: int, stop: int) -> np.ndarray:
    return np.arange(start, stop, dtype=np.uint64)


def _map_chunks(func, n: int, workers: int):
    spans = list(chunks(n))
    if workers <= 1 or len(spans) == 1:
        return [func(s) for s in spans]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, spans))


def range_bitmap(fn: Function, limit: int | None = None, workers: int = 1) -> np.ndarray:
    """Boolean array indexed by lexicographic key, true on the range."""
    if fn.m > BITMAP_MAX_M:
        raise BudgetError(f"range bitmap needs m <= {BITMAP_MAX_M}, got {fn.m}")
    check_limit(fn.n, limit)

    def part(span):
        return np.unique(keys_from_bits(output_bits(fn, _xs(*span))))

    bitmap = np.zeros(1 << fn.m, dtype=bool)
    for keys in _map_chunks(part, fn.n, workers):
        bitmap[keys] = True
    return bitmap


def find_preimage(fn: Function, y: GF2Vector, limit: int | None = None,
                  workers: int = 1) -> int | None:
    """Some input (as an int) mapping to ``y``, or None when ``y`` is avoided."""
    check_limit(fn.n, limit)
    target = np.frombuffer(np.packbits(np.array(list(y), dtype=np.uint8)).tobytes(), dtype=np.uint8)

    def part(span):
        bits = output_bits(fn, _xs(*span))
        packed = np.packbits(bits, axis=1)
        hits = np.flatnonzero(np.all(packed == target, axis=1))
        return span[0] + int(hits[0]) if len(hits) else None

    if workers <= 1:
        for span in chunks(fn.n):
            hit = part(span)
            if hit is not None:
                return hit
        return None
    for hit in _map_chunks(part, fn.n, workers):
        if hit is not None:
            return hit
    return None


def _range_is_full(fn: Function) -> StretchError:
    return StretchError(f"every vector of length {fn.m} is in the range (n={fn.n})")


def least_avoided_key(fn: Function, limit: int | None = None, workers: int = 1,
                      require_stretch: bool = True) -> int:
    """Lexicographic key of the least output vector outside the range.

    With ``require_stretch=False`` maps with ``m <= n`` are searched too; a
    StretchError is raised if their range turns out to be everything.
    """
    if require_stretch and fn.m <= fn.n:
        raise StretchError(f"need m > n for a guaranteed avoided point, got n={fn.n}, m={fn.m}")
    check_limit(fn.n, limit)
    if fn.m <= BITMAP_MAX_M:
        bitmap = range_bitmap(fn, limit, workers)
        if bitmap.all():
            raise _range_is_full(fn)
        return int(np.argmin(bitmap))
    if fn.m <= KEY_MAX_M:
        def part(span):
            return np.unique(keys_from_bits(output_bits(fn, _xs(*span))))
        keys = np.unique(np.concatenate(_map_chunks(part, fn.n, workers)))
        gaps = np.flatnonzero(keys != np.arange(len(keys), dtype=np.uint64))
        if not len(gaps) and len(keys) == 1 << fn.m:
            raise _range_is_full(fn)
        return int(gaps[0]) if len(gaps) else len(keys)

    def part_rows(span):
        return np.unique(np.packbits(output_bits(fn, _xs(*span)), axis=1), axis=0)

    rows = np.unique(np.concatenate(_map_chunks(part_rows, fn.n, workers)), axis=0)
    pad = rows.shape[1] * 8 - fn.m
    candidate = 0
    for row in rows:
        value = int.from_bytes(row.tobytes(), "big") >> pad
        if value != candidate:
            break
        candidate += 1
    if candidate == 1 << fn.m:
        raise _range_is_full(fn)
    return candidate
