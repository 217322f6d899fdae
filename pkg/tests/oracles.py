"""Independent reference implementations used to cross-check the library.

Everything here is deliberately naive: schoolbook polynomial arithmetic
over GF(2), scalar row reduction, brute-force enumeration.  None of it
imports the fast paths it is checking.
"""

from itertools import combinations, product


def deg(p: int) -> int:
    return p.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    acc = 0
    shift = 0
    while b >> shift:
        if (b >> shift) & 1:
            acc ^= a << shift
        shift += 1
    return acc


def poly_rem(a: int, b: int) -> int:
    while a and deg(a) >= deg(b):
        a ^= b << (deg(a) - deg(b))
    return a


def school_mul(a: int, b: int, poly: int) -> int:
    return poly_rem(poly_mul(a, b), poly)


def brute_order(a: int, poly: int, q: int) -> int:
    """Multiplicative order of a nonzero element by repeated multiplication."""
    val, k = a, 1
    while val != 1:
        val = school_mul(val, a, poly)
        k += 1
        assert k <= q, "order walk left the group"
    return k


def irreducible_brute(poly: int) -> bool:
    """Trial division by every polynomial up to half the degree."""
    d = deg(poly)
    for f in range(2, 1 << (d // 2 + 1)):
        if deg(f) < 1:
            continue
        if poly_rem(poly, f) == 0:
            return False
    return True


def scalar_rank(fld, rows) -> int:
    """Row reduction one scalar at a time; no vectorized code paths."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead_inv = fld.inv(m[r][c])
        m[r] = [fld.mul(lead_inv, v) for v in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                fac = m[i][c]
                m[i] = [fld.add(v, fld.mul(fac, w)) for v, w in zip(m[i], m[r])]
        r += 1
        if r == nrows:
            break
    return r


def solvable_left(fld, rows, target) -> bool:
    """Does some combination of the rows equal the target vector?"""
    base = scalar_rank(fld, rows)
    return scalar_rank(fld, list(rows) + [list(target)]) == base


def enumerate_admissible(params, buffer_rows):
    """Every sparse target a recode step may emit, found by brute force.

    Returns the (position, set-index) entry tuples of all vectors with
    exactly m nonzeros from the allowed set that lie in the row space of
    the buffer and differ from every buffered row.
    """
    n, m = params.n, params.m
    values = params.allowed.elements
    dense_rows = []
    taken = set()
    for row in buffer_rows:
        taken.add(row.entries)
        dense = [0] * n
        for pos, idx in row.entries:
            dense[pos] = values[idx]
        dense_rows.append(dense)
    found = set()
    for positions in combinations(range(n), m):
        for idxs in product(range(len(values)), repeat=m):
            entries = tuple(zip(positions, idxs))
            if entries in taken:
                continue
            target = [0] * n
            for pos, idx in entries:
                target[pos] = values[idx]
            if solvable_left(params.field, dense_rows, target):
                found.add(entries)
    return found


def full_rank_product(q: int, n: int) -> float:
    """Classical probability that a uniform n x n matrix over GF(q) is regular."""
    p = 1.0
    for i in range(1, n + 1):
        p *= 1.0 - float(q) ** -i
    return p
