"""Arithmetic in the binary extension fields GF(2^w) for 1 <= w <= 8.

Field elements are plain Python integers in ``[0, 2^w)``; bit ``i`` of an
element is the coefficient of ``x^i`` in the polynomial basis.  A
:class:`FieldSpec` validates its modulus eagerly, locates a multiplicative
generator, and precomputes log/antilog, multiplication, and inverse tables,
so every per-element operation afterwards is a table lookup.  The tables
are frozen after construction, which makes a spec safe to share across
threads and worker processes.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

#: Default modulus per width, bit i = coefficient of x^i.  Width 4 is
#: x^4 + x^3 + 1 and width 8 is x^8 + x^6 + x^3 + x^2 + 1; the remaining
#: widths use standard low-weight irreducible polynomials.
DEFAULT_POLYS = {
    1: 0b11,         # x + 1
    2: 0b111,        # x^2 + x + 1
    3: 0b1011,       # x^3 + x + 1
    4: 0b11001,      # x^4 + x^3 + 1
    5: 0b100101,     # x^5 + x^2 + 1
    6: 0b1000011,    # x^6 + x + 1
    7: 0b10000011,   # x^7 + x + 1
    8: 0b101001101,  # x^8 + x^6 + x^3 + x^2 + 1
}


class FieldMismatchError(ValueError):
    """An integer is not a valid element of the field it was used with."""


def _poly_degree(p: int) -> int:
    return p.bit_length() - 1


def _poly_mod(a: int, b: int) -> int:
    """Remainder of carry-less division of polynomial a by polynomial b."""
    db = _poly_degree(b)
    while a and _poly_degree(a) >= db:
        a ^= b << (_poly_degree(a) - db)
    return a


def _is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1 .. deg(poly)//2."""
    half = _poly_degree(poly) // 2
    for d in range(2, 1 << (half + 1)):
        if _poly_mod(poly, d) == 0:
            return False
    return True


def _prime_factors(x: int) -> list[int]:
    out = []
    d = 2
    while d * d <= x:
        if x % d == 0:
            out.append(d)
            while x % d == 0:
                x //= d
        d += 1
    if x > 1:
        out.append(x)
    return out


class FieldSpec:
    """GF(2^width) under the given irreducible modulus.

    Attributes
    ----------
    width : int
        Extension degree w, between 1 and 8.
    poly : int
        Modulus bitmask including the leading x^w term.
    order : int
        Number of field elements, 2^w.
    mul_table, inv_table : numpy.ndarray
        Read-only lookup tables used by the vectorised linear algebra.
    """

    def __init__(self, width: int, poly: int | None = None):
        if not 1 <= width <= 8:
            raise ValueError(f"width must be in 1..8, got {width}")
        if poly is None:
            poly = DEFAULT_POLYS[width]
        if _poly_degree(poly) != width:
            raise ValueError(
                f"modulus 0b{poly:b} has degree {_poly_degree(poly)}, expected {width}"
            )
        if not _is_irreducible(poly):
            raise ValueError(f"modulus 0b{poly:b} is reducible")
        self.width = width
        self.poly = poly
        self.order = 1 << width
        self._build_tables()

    def _mul_raw(self, a: int, b: int) -> int:
        """Shift-and-reduce product, used only to bootstrap the tables."""
        acc = 0
        while b:
            if b & 1:
                acc ^= a
            b >>= 1
            a <<= 1
            if a & self.order:
                a ^= self.poly
        return acc

    def _build_tables(self) -> None:
        q = self.order
        gen = None
        for g in range(1, q):
            val, steps = g, 1
            while val != 1:
                val = self._mul_raw(val, g)
                steps += 1
            if steps == q - 1:
                gen = g
                break
        if gen is None:  # unreachable for an irreducible modulus
            raise ValueError(f"no generator found for 0b{self.poly:b}")

        exp = np.zeros(q - 1, dtype=np.uint8)
        log = np.zeros(q, dtype=np.int64)
        val = 1
        for i in range(q - 1):
            exp[i] = val
            log[val] = i
            val = self._mul_raw(val, gen)

        outer = (log[1:, None] + log[None, 1:]) % (q - 1)
        mul = np.zeros((q, q), dtype=np.uint8)
        mul[1:, 1:] = exp[outer]
        inv = np.zeros(q, dtype=np.uint8)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]

        for t in (exp, log, mul, inv):
            t.setflags(write=False)
        self._exp = exp
        self._log = log
        self.mul_table = mul
        self.inv_table = inv
        self.generator = gen

    def _check(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise FieldMismatchError(f"{a} is not an element of {self!r}")
        return a

    def add(self, a: int, b: int) -> int:
        """Field addition (and subtraction): carry-less XOR."""
        self._check(a)
        self._check(b)
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return int(self.inv_table[a])

    def pow(self, a: int, e: int) -> int:
        """Repeated-squaring exponentiation; negative e inverts a first."""
        self._check(a)
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("0 cannot be raised to a non-positive power")
            return 0
        e %= self.order - 1 if self.order > 2 else 1
        result, base = 1, a
        while e:
            if e & 1:
                result = int(self.mul_table[result, base])
            base = int(self.mul_table[base, base])
            e >>= 1
        return result

    def is_primitive(self, a: int) -> bool:
        """True when a generates the whole multiplicative group."""
        self._check(a)
        if a == 0:
            return False
        return all(
            self.pow(a, (self.order - 1) // p) != 1
            for p in _prime_factors(self.order - 1)
        )

    def primitive_elements(self) -> list[int]:
        return [a for a in range(1, self.order) if self.is_primitive(a)]

    def elements(self) -> range:
        return range(self.order)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldSpec)
            and other.width == self.width
            and other.poly == self.poly
        )

    def __hash__(self) -> int:
        return hash((self.width, self.poly))

    def __repr__(self) -> str:
        return f"FieldSpec(width={self.width}, poly=0x{self.poly:x})"


@lru_cache(maxsize=None)
def _cached_field(width: int, poly: int) -> FieldSpec:
    return FieldSpec(width, poly)


def field(width: int, poly: int | None = None) -> FieldSpec:
    """Shared, cached FieldSpec for the given width and modulus."""
    if poly is None:
        if width not in DEFAULT_POLYS:
            raise ValueError(f"width must be in 1..8, got {width}")
        poly = DEFAULT_POLYS[width]
    return _cached_field(width, poly)


def field_for_order(q: int, poly: int | None = None) -> FieldSpec:
    """Shared FieldSpec for a field of q = 2^w elements."""
    width = q.bit_length() - 1
    if q < 2 or (1 << width) != q:
        raise ValueError(f"field order must be a power of two in 2..256, got {q}")
    return field(width, poly)


def log_base_two(q: int) -> int:
    """log2 of a power of two, used for header sizes in bits."""
    if q < 1 or q & (q - 1):
        raise ValueError(f"expected a power of two, got {q}")
    return q.bit_length() - 1
