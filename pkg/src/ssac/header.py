"""Compressed sparse-row headers for sparse coding vectors.

A coding vector with m nonzero entries, each drawn from a small allowed
set of coefficients, is shipped as m fixed-width (set-index, position)
pairs instead of a full length-n vector of field symbols.  This module
defines the allowed set, the sparse-row and bit-string containers, the
bit-exact encoder/decoder, and closed-form header-length models for the
compressed scheme and the two baselines it is measured against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import FieldMismatchError, FieldSpec, log_base_two
from .linalg import GfVector


class MalformedHeaderError(ValueError):
    """A header bit string that cannot decode under the session parameters."""


def position_bits(n: int) -> int:
    """Bits needed to address a position in a length-n vector."""
    if n < 2:
        raise ValueError(f"vector length must be at least 2, got {n}")
    return (n - 1).bit_length()


class AllowedSet:
    """The coefficient values a sparse coding vector may use.

    Values must be distinct, nonzero, and primitive in their field, and
    the set size must be a power of two so a set index packs into whole
    bits.  ``unchecked`` skips the primitivity requirement for
    experiments with deliberately non-primitive coefficients.
    """

    def __init__(self, field: FieldSpec, elements, *, require_primitive: bool = True):
        elements = tuple(int(e) for e in elements)
        if len(elements) < 2 or len(elements) & (len(elements) - 1):
            raise ValueError(f"set size must be a power of two >= 2, got {len(elements)}")
        if len(set(elements)) != len(elements):
            raise ValueError(f"elements must be distinct, got {elements}")
        for e in elements:
            if not 0 <= e < field.order:
                raise FieldMismatchError(f"{e} is not an element of {field!r}")
            if e == 0:
                raise ValueError("0 is not an allowed coefficient")
            if require_primitive and not field.is_primitive(e):
                raise ValueError(f"{e} is not primitive in {field!r}")
        self.field = field
        self.elements = elements
        self._index = {e: i for i, e in enumerate(elements)}

    @classmethod
    def unchecked(cls, field: FieldSpec, elements) -> AllowedSet:
        return cls(field, elements, require_primitive=False)

    @property
    def index_bits(self) -> int:
        return log_base_two(len(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, value: int) -> bool:
        return value in self._index

    def index_of(self, value: int) -> int:
        return self._index[value]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AllowedSet)
            and other.field == self.field
            and other.elements == self.elements
        )

    def __repr__(self) -> str:
        return f"AllowedSet({self.field!r}, {self.elements})"


@dataclass(frozen=True)
class SparseRow:
    """A sparse coding vector: (position, set-index) entries over length n.

    Positions are strictly ascending, which makes the encoded header
    canonical for the vector it describes.
    """

    n: int
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"vector length must be at least 2, got {self.n}")
        entries = tuple((int(p), int(i)) for p, i in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("a sparse row needs at least one entry")
        last = -1
        for pos, idx in entries:
            if pos <= last:
                raise ValueError(f"positions must be strictly ascending, got {entries}")
            if pos >= self.n:
                raise ValueError(f"position {pos} out of range for n={self.n}")
            if idx < 0:
                raise ValueError(f"negative set index {idx}")
            last = pos

    @property
    def m(self) -> int:
        return len(self.entries)

    def positions(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)


@dataclass(frozen=True)
class HeaderBits:
    """An immutable bit string stored as (value, length), MSB first."""

    value: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError(f"negative bit length {self.length}")
        if self.value < 0 or self.value >> self.length:
            raise ValueError(f"value 0x{self.value:x} does not fit in {self.length} bits")

    def bitstring(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    @classmethod
    def from_bitstring(cls, bits: str) -> HeaderBits:
        if bits and set(bits) - {"0", "1"}:
            raise ValueError(f"not a bit string: {bits!r}")
        return cls(int(bits, 2) if bits else 0, len(bits))

    def __str__(self) -> str:
        return self.bitstring()


def encode_header(row: SparseRow, allowed: AllowedSet) -> HeaderBits:
    """Pack a sparse row as m (set-index, position) fixed-width pairs."""
    ib = allowed.index_bits
    pb = position_bits(row.n)
    value = 0
    for pos, idx in row.entries:
        if idx >= len(allowed):
            raise ValueError(f"set index {idx} out of range for {allowed!r}")
        value = (value << ib) | idx
        value = (value << pb) | pos
    return HeaderBits(value, row.m * (ib + pb))


def decode_header(bits: HeaderBits, n: int, m: int, allowed: AllowedSet) -> SparseRow:
    """Inverse of :func:`encode_header`; strict about length and ordering."""
    ib = allowed.index_bits
    pb = position_bits(n)
    expected = m * (ib + pb)
    if bits.length != expected:
        raise MalformedHeaderError(
            f"header is {bits.length} bits, expected {expected} for m={m}, n={n}"
        )
    entries = []
    shift = expected
    for _ in range(m):
        shift -= ib
        idx = (bits.value >> shift) & ((1 << ib) - 1)
        shift -= pb
        pos = (bits.value >> shift) & ((1 << pb) - 1)
        entries.append((pos, idx))
    try:
        return SparseRow(n, tuple(entries))
    except ValueError as exc:
        raise MalformedHeaderError(str(exc)) from exc


def expand(row: SparseRow, allowed: AllowedSet) -> GfVector:
    """Densify a sparse row into a length-n vector of field values."""
    data = np.zeros(row.n, dtype=np.uint8)
    for pos, idx in row.entries:
        if idx >= len(allowed):
            raise ValueError(f"set index {idx} out of range for {allowed!r}")
        data[pos] = allowed.elements[idx]
    return GfVector(allowed.field, data)


def sparsify(vec: GfVector, allowed: AllowedSet, m: int) -> SparseRow | None:
    """Sparse form of a dense vector, or None when it does not fit.

    Fails when the vector has a number of nonzeros other than m or uses
    a coefficient outside the allowed set.
    """
    if vec.field != allowed.field:
        raise FieldMismatchError("vector and allowed set live in different fields")
    positions = np.nonzero(vec.data)[0]
    if len(positions) != m:
        return None
    entries = []
    for pos in positions:
        value = int(vec.data[pos])
        if value not in allowed:
            return None
        entries.append((int(pos), allowed.index_of(value)))
    return SparseRow(len(vec), tuple(entries))


def header_len_ssac(m: int, n: int, q_set_size: int) -> int:
    """Header bits for the sparse scheme: m * (log2 |Q| + ceil(log2 n))."""
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    return m * (log_base_two(q_set_size) + position_bits(n))


def header_len_rlnc(n: int, q: int) -> int:
    """Header bits for a full coding vector: n symbols of log2 q bits."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return n * log_base_two(q)


def header_len_ecc(m: int, n: int, q: int) -> int:
    """Header bits for the erasure-coded compression baseline.

    The baseline ships m positions, each carried as ceil(log2 n) field
    symbols of log2 q bits.
    """
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    return m * position_bits(n) * log_base_two(q)


def default_allowed_set(field: FieldSpec) -> AllowedSet:
    """The stock two-element allowed set for a field.

    GF(16) under 0x19 uses {4, 14} and GF(256) under 0x14d uses {21, 43};
    any other field falls back to its two smallest primitive elements.
    """
    stock = {(4, 0b11001): (4, 14), (8, 0b101001101): (21, 43)}
    pair = stock.get((field.width, field.poly))
    if pair is None:
        prims = field.primitive_elements()
        if len(prims) < 2:
            raise ValueError(f"{field!r} has fewer than two primitive elements")
        pair = tuple(prims[:2])
    return AllowedSet(field, pair)
