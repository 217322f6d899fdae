"""Sparse network coding with a small allowed coefficient set.

A source emits packets whose coding vectors carry exactly m nonzero
coefficients drawn from the allowed set, so each packet ships a compact
header instead of a full-length vector.  Intermediate nodes buffer k
packets and search for a fresh sparse vector inside the row space of
their buffer; sinks stack expanded rows and invert.  The per-draw
solvability test runs against a factored row-space oracle, which agrees
exactly with ``left_solve``; the emitted combiner always comes from
``left_solve`` itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gf import FieldMismatchError, FieldSpec
from .header import (
    AllowedSet,
    HeaderBits,
    SparseRow,
    decode_header,
    encode_header,
    expand,
    header_len_ssac,
)
from .linalg import GfMatrix, GfVector, RowSpace, left_solve, mat_vec_left, rank, solve_full_rank

#: Candidates per vectorised draw block in the recode search loop.
SEARCH_BLOCK = 512


class RecodeError(Exception):
    """Recoding gave up: no admissible sparse vector within max_attempts."""

    def __init__(self, attempts: int):
        super().__init__(f"no admissible sparse vector after {attempts} attempts")
        self.attempts = attempts


class InsufficientRankError(Exception):
    """Decoding failed: the received rows do not span the message space."""

    def __init__(self, rank_achieved: int, needed: int):
        super().__init__(f"received rank {rank_achieved}, need {needed}")
        self.rank = rank_achieved
        self.needed = needed


@dataclass(frozen=True)
class CodingParams:
    """Session parameters shared by every node in a coding session."""

    field: FieldSpec
    n: int
    m: int
    allowed: AllowedSet
    max_attempts: int = 100_000

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"generation size must be at least 2, got {self.n}")
        if not 2 <= self.m <= self.n:
            raise ValueError(f"m must satisfy 2 <= m <= n, got m={self.m}, n={self.n}")
        if self.allowed.field != self.field:
            raise FieldMismatchError("allowed set does not live in the session field")
        if self.max_attempts < 1:
            raise ValueError(f"max_attempts must be positive, got {self.max_attempts}")

    @property
    def header_bits(self) -> int:
        return header_len_ssac(self.m, self.n, len(self.allowed))


@dataclass(frozen=True)
class CodedPacket:
    """A header plus the combined payload symbols it describes."""

    header: HeaderBits
    payload: np.ndarray

    def __post_init__(self):
        payload = np.asarray(self.payload, dtype=np.uint8)
        payload.setflags(write=False)
        object.__setattr__(self, "payload", payload)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CodedPacket)
            and other.header == self.header
            and np.array_equal(other.payload, self.payload)
        )


@dataclass(frozen=True)
class NodeBuffer:
    """The k packets a recoding node currently holds, in sparse form."""

    params: CodingParams
    rows: tuple[SparseRow, ...]
    payloads: GfMatrix

    def __post_init__(self):
        if not self.rows:
            raise ValueError("a node buffer needs at least one packet")
        for row in self.rows:
            if row.n != self.params.n:
                raise ValueError(f"row length {row.n} != session n {self.params.n}")
            if row.m != self.params.m:
                raise ValueError(f"row has {row.m} entries, session m is {self.params.m}")
            for _, idx in row.entries:
                if idx >= len(self.params.allowed):
                    raise ValueError(f"set index {idx} out of range")
        if self.payloads.field != self.params.field:
            raise FieldMismatchError("payloads do not live in the session field")
        if self.payloads.rows != len(self.rows):
            raise ValueError(
                f"{len(self.rows)} rows but {self.payloads.rows} payload rows"
            )

    @property
    def k(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class RecodeOutcome:
    """A recoded packet plus the row, combiner, and search cost behind it."""

    packet: CodedPacket
    row: SparseRow
    attempts: int
    combiner: GfVector


def _draw_entries(params: CodingParams, rng) -> tuple[tuple[int, int], ...]:
    """One candidate draw as ascending (position, set-index) pairs.

    Positions come from rejection sampling while m is small relative to n
    and from a partial permutation otherwise; either way the result is a
    uniform m-subset.  Set indices are drawn after the positions are
    fixed, one per entry in ascending position order.
    """
    n, m = params.n, params.m
    if m > n // 2:
        pos = sorted(rng.permutation(n)[:m].tolist())
    elif m == 2:
        while True:
            a, b = rng.integers(0, n, size=2).tolist()
            if a != b:
                break
        pos = (a, b) if a < b else (b, a)
    else:
        while True:
            cand = rng.integers(0, n, size=m).tolist()
            if len(set(cand)) == m:
                break
        pos = sorted(cand)
    idx = rng.integers(0, len(params.allowed), size=m).tolist()
    return tuple(zip(pos, idx))


def random_sparse_vector(params: CodingParams, rng) -> SparseRow:
    """Draw a sparse row: m distinct uniform positions, coefficients uniform
    over the allowed set.
    """
    return SparseRow(params.n, _draw_entries(params, rng))


class ForcedRowRng:
    """RNG stand-in that makes every candidate draw produce one fixed row.

    Position draws and set-index draws alternate, mirroring how the
    search consumes a real generator; block-shaped requests are served by
    tiling the row, so a forced recode finds an admissible row on attempt
    one and an inadmissible one fails after max_attempts as usual.
    """

    def __init__(self, row: SparseRow):
        self._pos = np.array([p for p, _ in row.entries], dtype=np.int64)
        self._idx = np.array([i for _, i in row.entries], dtype=np.int64)
        self._positions_next = True

    def integers(self, low, high=None, size=None):
        src = self._pos if self._positions_next else self._idx
        self._positions_next = not self._positions_next
        shape = (size,) if isinstance(size, int) else tuple(size)
        if shape == (len(src),):
            return src.copy()
        if len(shape) == 2 and shape[1] == len(src):
            return np.tile(src, (shape[0], 1))
        raise ValueError(f"forced draw cannot serve shape {shape}")

    def permutation(self, n: int):
        if not self._positions_next:
            raise RuntimeError("forced draw out of phase")
        self._positions_next = False
        rest = np.setdiff1d(np.arange(n, dtype=np.int64), self._pos)
        return np.concatenate([self._pos, rest])


def expand_rows(params: CodingParams, rows) -> GfMatrix:
    """Stack sparse rows into a dense k x n matrix."""
    data = np.zeros((len(rows), params.n), dtype=np.uint8)
    values = params.allowed.elements
    for i, row in enumerate(rows):
        for pos, idx in row.entries:
            data[i, pos] = values[idx]
    return GfMatrix(params.field, data)


def source_encode(params: CodingParams, originals: GfMatrix, k: int, rng) -> list[CodedPacket]:
    """Emit k source packets over an n x L block of original symbols.

    k must be at least n.  Rows are drawn independently, so spanning the
    full space is likely but not guaranteed; receivers must check rank.
    """
    if originals.field != params.field:
        raise FieldMismatchError("originals do not live in the session field")
    if originals.rows != params.n:
        raise ValueError(f"originals have {originals.rows} rows, expected n={params.n}")
    if originals.cols < 1:
        raise ValueError("originals need at least one symbol column")
    if k < params.n:
        raise ValueError(f"source must emit at least n={params.n} packets, got {k}")
    packets = []
    for _ in range(k):
        row = random_sparse_vector(params, rng)
        vec = expand(row, params.allowed)
        payload = mat_vec_left(vec, originals)
        packets.append(CodedPacket(encode_header(row, params.allowed), payload.data))
    return packets


def _entry_codes(pos: np.ndarray, idx: np.ndarray, n: int, qs: int) -> np.ndarray:
    """Fold (positions, indices) rows into one comparable integer per row."""
    codes = np.zeros(len(pos), dtype=np.int64)
    for col in range(pos.shape[1]):
        codes = (codes * n + pos[:, col]) * qs + idx[:, col]
    return codes


def _emit(buffer: NodeBuffer, dense: GfMatrix, row: SparseRow, attempts: int) -> RecodeOutcome:
    params = buffer.params
    target = expand(row, params.allowed)
    combiner = left_solve(dense, target)
    if combiner is None or mat_vec_left(combiner, dense) != target:
        raise AssertionError("row-space oracle and solver disagree")
    payload = mat_vec_left(combiner, buffer.payloads)
    packet = CodedPacket(encode_header(row, params.allowed), payload.data)
    return RecodeOutcome(packet, row, attempts, combiner)


def recode(buffer: NodeBuffer, rng) -> RecodeOutcome:
    """Search for a fresh sparse vector in the buffer's row space and emit it.

    Candidates are iid uniform sparse rows; one is accepted when it is
    solvable against the buffer and differs from every buffered row, and
    every candidate inspected counts as an attempt.  Draws happen in
    fixed-size vectorised blocks, so results are deterministic for a
    fixed generator state.  Raises RecodeError after max_attempts
    candidates.
    """
    params = buffer.params
    n, m = params.n, params.m
    dense = expand_rows(params, buffer.rows)
    space = RowSpace(dense)
    values = params.allowed.elements
    qs = len(values)

    if m > n // 2:
        # permutation-based draws cannot be blocked; stay sequential
        taken = frozenset(row.entries for row in buffer.rows)
        attempts = 0
        while attempts < params.max_attempts:
            key = _draw_entries(params, rng)
            attempts += 1
            if key in taken:
                continue
            if space.contains_entries((pos, values[idx]) for pos, idx in key):
                return _emit(buffer, dense, SparseRow(n, key), attempts)
        raise RecodeError(attempts)

    # (set index, position) -> scaled null-space row, stacked for fancy indexing
    scaled = np.stack([space.scaled_basis_t(v) for v in values])
    buffered = np.unique(
        _entry_codes(
            np.array([[p for p, _ in r.entries] for r in buffer.rows], dtype=np.int64),
            np.array([[i for _, i in r.entries] for r in buffer.rows], dtype=np.int64),
            n,
            qs,
        )
    )

    attempts = 0
    while attempts < params.max_attempts:
        block = min(SEARCH_BLOCK, params.max_attempts - attempts)
        pos = np.asarray(rng.integers(0, n, size=(block, m)))
        idx = np.asarray(rng.integers(0, qs, size=(block, m)))
        pos = np.sort(pos, axis=1)
        valid = (
            (pos[:, 0] != pos[:, 1])
            if m == 2
            else np.all(np.diff(pos, axis=1) > 0, axis=1)
        )
        acc = scaled[idx[:, 0], pos[:, 0]]
        for col in range(1, m):
            acc = acc ^ scaled[idx[:, col], pos[:, col]]
        solvable = ~acc.any(axis=1) if acc.shape[1] else np.ones(block, dtype=bool)
        admissible = valid & solvable
        if admissible.any():
            admissible &= ~np.isin(_entry_codes(pos, idx, n, qs), buffered)
        hits = np.nonzero(admissible)[0]
        if hits.size:
            h = int(hits[0])
            attempts += int(np.count_nonzero(valid[: h + 1]))
            row = SparseRow(n, tuple(zip(pos[h].tolist(), idx[h].tolist())))
            return _emit(buffer, dense, row, attempts)
        attempts += int(np.count_nonzero(valid))
    raise RecodeError(attempts)


def k_opt(m: int, n: int, log_base: float = 2.0) -> int:
    """Recommended buffer size: round(m * log(n / m)), at least 1.

    The logarithm base is configurable because the rule is used with
    base 2 and base e in different studies; base 2 is the default.
    """
    if m < 1 or n <= m:
        raise ValueError(f"need n > m >= 1, got m={m}, n={n}")
    if log_base <= 1.0:
        raise ValueError(f"log base must exceed 1, got {log_base}")
    return max(1, round(m * math.log(n / m, log_base)))


def buffer_from_packets(params: CodingParams, packets) -> NodeBuffer:
    """Decode packet headers into a NodeBuffer ready for recoding."""
    packets = list(packets)
    if not packets:
        raise ValueError("need at least one packet")
    rows = tuple(
        decode_header(p.header, params.n, params.m, params.allowed) for p in packets
    )
    lengths = {len(p.payload) for p in packets}
    if len(lengths) != 1:
        raise ValueError(f"payload lengths differ: {sorted(lengths)}")
    payloads = GfMatrix(params.field, np.stack([p.payload for p in packets]))
    return NodeBuffer(params, rows, payloads)


def sink_decode(params: CodingParams, packets) -> GfMatrix:
    """Recover the original n x L block from received packets.

    Expands every header, stacks the dense rows, and solves against the
    stacked payloads.  Raises InsufficientRankError when the rows do not
    reach rank n.
    """
    buffer = buffer_from_packets(params, packets)
    dense = expand_rows(params, buffer.rows)
    solution = solve_full_rank(dense, buffer.payloads)
    if solution is None:
        raise InsufficientRankError(rank(dense), params.n)
    return solution


def full_rank_probability_trial(params: CodingParams, overhead: int, rng) -> bool:
    """One Monte-Carlo trial: do n + overhead random rows reach rank n?

    Sparse rows are drawn through random_sparse_vector.  m == n selects
    the dense reference instead: every coefficient is uniform over the
    whole field, the classical random-matrix baseline that the sparse
    scheme is calibrated against.
    """
    if overhead < 0:
        raise ValueError(f"overhead must be non-negative, got {overhead}")
    count = params.n + overhead
    if params.m == params.n:
        data = rng.integers(0, params.field.order, size=(count, params.n))
        dense = GfMatrix(params.field, data.astype(np.uint8))
    else:
        rows = [random_sparse_vector(params, rng) for _ in range(count)]
        dense = expand_rows(params, rows)
    return rank(dense) == params.n
