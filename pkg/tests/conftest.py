import numpy as np
import pytest

from ssac.coding import CodingParams, NodeBuffer
from ssac.gf import field
from ssac.header import AllowedSet, SparseRow
from ssac.linalg import GfMatrix, GfVector

# The five-packet buffer, combiner, and composite row used as the shared
# golden fixture throughout the suite (n=8, m=3, GF(16), Q={4,14}).
EXAMPLE_ROWS = [
    [0, 0, 0, 4, 0, 0, 14, 4],
    [4, 0, 4, 0, 0, 14, 0, 0],
    [0, 0, 0, 14, 0, 14, 4, 0],
    [0, 0, 4, 0, 14, 0, 14, 0],
    [0, 14, 0, 14, 0, 0, 0, 14],
]
EXAMPLE_COMBINER = [1, 0, 0, 1, 5]
EXAMPLE_TARGET = [0, 4, 4, 0, 14, 0, 0, 0]
EXAMPLE_HEADER_BITS = "000100101100"
EXAMPLE_HEADER_BYTES = bytes([0x12, 0xC0])


@pytest.fixture(scope="session")
def f16():
    return field(4, 0b11001)


@pytest.fixture(scope="session")
def f256():
    return field(8, 0b101001101)


@pytest.fixture(scope="session")
def q16(f16):
    return AllowedSet(f16, (4, 14))


@pytest.fixture(scope="session")
def q256(f256):
    return AllowedSet(f256, (21, 43))


@pytest.fixture(scope="session")
def example_params(f16, q16):
    return CodingParams(f16, 8, 3, q16)


@pytest.fixture(scope="session")
def example_matrix(f16):
    return GfMatrix.from_rows(f16, EXAMPLE_ROWS)


@pytest.fixture(scope="session")
def example_sparse_rows(example_params):
    rows = []
    for dense in EXAMPLE_ROWS:
        entries = tuple(
            (pos, example_params.allowed.index_of(val))
            for pos, val in enumerate(dense)
            if val
        )
        rows.append(SparseRow(8, entries))
    return tuple(rows)


@pytest.fixture
def example_buffer(example_params, example_sparse_rows):
    rng = np.random.default_rng(42)
    payloads = GfMatrix(
        example_params.field, rng.integers(0, 16, size=(5, 6)).astype(np.uint8)
    )
    return NodeBuffer(example_params, example_sparse_rows, payloads)


@pytest.fixture(scope="session")
def example_target(f16):
    return GfVector(f16, EXAMPLE_TARGET)
