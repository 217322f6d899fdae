"""On-disk container for coded packets.

Layout, all multi-byte integers big-endian:

    magic "SSAC" | version 0x01 | field width (1) | reducing polynomial (2)
    | n (2) | m (1) | allowed-set size (1) | allowed elements (1 each)
    | packet count (4)

followed by one block per packet: the header bits packed MSB-first and
zero-padded to a byte boundary, a 4-byte symbol count, and the payload
symbols packed MSB-first at the field width (two per byte for width 4,
high nibble first; one per byte for width 8).  Every packet in a file
carries the same symbol count.  Writing what was read reproduces the
input byte for byte.
"""

from __future__ import annotations

import io
from typing import BinaryIO

import numpy as np

from .coding import CodedPacket, CodingParams
from .gf import field
from .header import AllowedSet, HeaderBits

MAGIC = b"SSAC"
VERSION = 1


class PacketFileError(ValueError):
    """The byte stream is not a well-formed packet file."""


def pack_symbols(width: int, symbols: np.ndarray) -> bytes:
    """Pack field symbols into bytes, MSB-first, zero-padded at the end."""
    symbols = np.asarray(symbols, dtype=np.uint8).ravel()
    shifts = np.arange(width - 1, -1, -1, dtype=np.uint8)
    bits = (symbols[:, None] >> shifts) & 1
    return np.packbits(bits.ravel()).tobytes()


def unpack_symbols(width: int, data: bytes, count: int) -> np.ndarray:
    """Recover `count` symbols from MSB-first packed bytes."""
    needed = (count * width + 7) // 8
    if len(data) < needed:
        raise PacketFileError(
            f"need {needed} payload bytes for {count} symbols, got {len(data)}"
        )
    bits = np.unpackbits(np.frombuffer(data[:needed], dtype=np.uint8))
    if bits[count * width :].any():
        raise PacketFileError("nonzero padding bits after packed symbols")
    weights = (1 << np.arange(width - 1, -1, -1)).astype(np.uint16)
    return (bits[: count * width].reshape(count, width) * weights).sum(axis=1).astype(
        np.uint8
    )


def packed_size(width: int, count: int) -> int:
    return (count * width + 7) // 8


def _header_bytes(header: HeaderBits) -> bytes:
    nbytes = (header.length + 7) // 8
    return (header.value << (8 * nbytes - header.length)).to_bytes(nbytes, "big")


def write_packets(out: BinaryIO | str, params: CodingParams, packets) -> None:
    """Serialize packets produced under `params` to a path or binary stream."""
    packets = list(packets)
    lengths = {len(p.payload) for p in packets}
    if len(lengths) > 1:
        raise PacketFileError(f"payload lengths differ: {sorted(lengths)}")
    if isinstance(out, str):
        with open(out, "wb") as fh:
            write_packets(fh, params, packets)
        return
    fld = params.field
    out.write(MAGIC)
    out.write(bytes([VERSION, fld.width]))
    out.write(fld.poly.to_bytes(2, "big"))
    out.write(params.n.to_bytes(2, "big"))
    out.write(bytes([params.m, len(params.allowed)]))
    out.write(bytes(params.allowed.elements))
    out.write(len(packets).to_bytes(4, "big"))
    for packet in packets:
        if packet.header.length != params.header_bits:
            raise PacketFileError(
                f"header is {packet.header.length} bits, expected {params.header_bits}"
            )
        out.write(_header_bytes(packet.header))
        out.write(len(packet.payload).to_bytes(4, "big"))
        out.write(pack_symbols(fld.width, packet.payload))


def _take(stream: BinaryIO, count: int, what: str) -> bytes:
    data = stream.read(count)
    if len(data) != count:
        raise PacketFileError(f"truncated file while reading {what}")
    return data


def read_packets(src: BinaryIO | str) -> tuple[CodingParams, list[CodedPacket]]:
    """Parse a packet file back into its parameters and packets."""
    if isinstance(src, str):
        with open(src, "rb") as fh:
            return read_packets(fh)
    if _take(src, 4, "magic") != MAGIC:
        raise PacketFileError("bad magic")
    version = _take(src, 1, "version")[0]
    if version != VERSION:
        raise PacketFileError(f"unsupported version {version}")
    width = _take(src, 1, "field width")[0]
    if not 1 <= width <= 8:
        raise PacketFileError(f"field width {width} out of range")
    poly = int.from_bytes(_take(src, 2, "polynomial"), "big")
    n = int.from_bytes(_take(src, 2, "n"), "big")
    m = _take(src, 1, "m")[0]
    q_set_size = _take(src, 1, "allowed-set size")[0]
    if q_set_size < 2 or q_set_size & (q_set_size - 1):
        raise PacketFileError(f"allowed-set size {q_set_size} is not a power of two")
    try:
        fld = field(width, poly)
    except ValueError as exc:
        raise PacketFileError(str(exc)) from exc
    elements = tuple(_take(src, q_set_size, "allowed elements"))
    try:
        allowed = AllowedSet.unchecked(fld, elements)
        params = CodingParams(fld, n, m, allowed)
    except ValueError as exc:
        raise PacketFileError(str(exc)) from exc
    count = int.from_bytes(_take(src, 4, "packet count"), "big")
    header_bits = params.header_bits
    header_nbytes = (header_bits + 7) // 8
    pad = 8 * header_nbytes - header_bits
    packets = []
    payload_len = None
    for i in range(count):
        raw = int.from_bytes(_take(src, header_nbytes, f"packet {i} header"), "big")
        if raw & ((1 << pad) - 1):
            raise PacketFileError(f"packet {i} header has nonzero padding bits")
        header = HeaderBits(raw >> pad, header_bits)
        length = int.from_bytes(_take(src, 4, f"packet {i} payload length"), "big")
        if payload_len is None:
            payload_len = length
        elif length != payload_len:
            raise PacketFileError(
                f"packet {i} carries {length} symbols, earlier packets {payload_len}"
            )
        data = _take(src, packed_size(width, length), f"packet {i} payload")
        packets.append(CodedPacket(header, unpack_symbols(width, data, length)))
    if src.read(1):
        raise PacketFileError("trailing bytes after last packet")
    return params, packets


def to_bytes(params: CodingParams, packets) -> bytes:
    buf = io.BytesIO()
    write_packets(buf, params, packets)
    return buf.getvalue()


def from_bytes(data: bytes) -> tuple[CodingParams, list[CodedPacket]]:
    return read_packets(io.BytesIO(data))
