"""2x2 matrices over F_p: the square-root decision and exact censuses.

The decision procedure follows the trace identity for B with B*B = A:
with s = det B and t = Tr B (t nonzero), t*B = A + s*I and t^2 = Tr A + 2s,
so all candidate roots come from the square roots of det A.  Scalar
matrices u*I fall outside that derivation (t can be 0) and get their own
fallback; every witness the procedure returns is re-verified by an
actual matrix product, so an incomplete candidate list can only produce
a wrong "not found", and that is exactly what the census cross-check
(every matrix, small p) pins down.
"""

from typing import NamedTuple, Optional

import numpy as np

from .errors import InternalInvariantViolation, TooLarge

DEFAULT_CENSUS_BOUND = 127
PAIR_CENSUS_BOUND = 10_000


class Mat2(NamedTuple):
    a: int
    b: int
    c: int
    d: int


def identity():
    return Mat2(1, 0, 0, 1)


def reduce_mat(A, F):
    p = F.p
    return Mat2(A[0] % p, A[1] % p, A[2] % p, A[3] % p)


def mul(A, B, F):
    """Exact product A*B mod p."""
    p = F.p
    return Mat2(
        (A.a * B.a + A.b * B.c) % p,
        (A.a * B.b + A.b * B.d) % p,
        (A.c * B.a + A.d * B.c) % p,
        (A.c * B.b + A.d * B.d) % p,
    )


def det(A, F):
    return (A.a * A.d - A.b * A.c) % F.p


def trace(A, F):
    return (A.a + A.d) % F.p


class SquareWitness(NamedTuple):
    found: bool
    B: Optional[Mat2]


def _verified(A, B, F):
    if mul(B, B, F) == A:
        return SquareWitness(True, B)
    return None


def has_square_root(A, F):
    """Decide whether some B satisfies B*B = A; any witness is re-verified.

    Accepts every matrix in M_2(F_p), scalar and singular ones included.
    """
    p = F.p

    if A.b == 0 and A.c == 0 and A.a == A.d:
        # Scalar A = u*I.  Scalar roots w*I need w^2 = u; the trace-zero
        # matrix [[0,1],[u,0]] squares to u*I for every u, 0 included.
        u = A.a
        for w in F.sqrt_roots(u):
            hit = _verified(A, Mat2(w, 0, 0, w), F)
            if hit:
                return hit
        hit = _verified(A, Mat2(0, 1, u, 0), F)
        if hit:
            return hit
        raise InternalInvariantViolation("scalar fallback failed for u=%d, p=%d" % (u, p))

    tA = trace(A, F)
    for s in F.sqrt_roots(det(A, F)):
        # Both signs of the root are covered because sqrt_roots returns the pair.
        t2 = (tA + 2 * s) % p
        for t in F.sqrt_roots(t2):
            if t == 0:
                continue
            ti = F.inv(t)
            B = Mat2(ti * (A.a + s) % p, ti * A.b % p, ti * A.c % p, ti * (A.d + s) % p)
            hit = _verified(A, B, F)
            if hit:
                return hit
    return SquareWitness(False, None)


class Census(NamedTuple):
    p: int
    n_total: int
    n_singular: int
    n_square: int
    n_nonsquare_invertible: int
    ratio: float


def census(F, bound=DEFAULT_CENSUS_BOUND):
    """Exact census of squares in M_2(F_p) by enumerating every B.

    Marks B*B for all p^4 matrices B in a flat table indexed by
    ((m11*p + m12)*p + m21)*p + m22, then tallies squares and the
    invertible non-squares.  O(p^4) time and p^4 table entries; capped
    by `bound` (default 127).
    """
    p = F.p
    if p > bound:
        raise TooLarge("census needs p <= %d, got %d" % (bound, p))
    p3 = p**3
    n_total = p**4
    marked = np.zeros(n_total, dtype=bool)

    b = np.arange(p, dtype=np.int64).reshape(p, 1, 1)
    c = np.arange(p, dtype=np.int64).reshape(1, p, 1)
    d = np.arange(p, dtype=np.int64).reshape(1, 1, p)
    bc = (b * c) % p
    e22 = (d * d + bc) % p
    for a in range(p):
        apd = (a + d) % p
        e11 = (a * a + bc) % p
        e12 = (b * apd) % p
        e21 = (c * apd) % p
        idx = ((e11 * p + e12) * p + e21) * p + e22
        marked[idx.ravel()] = True

    n_square = int(np.count_nonzero(marked))
    n_singular = 0
    n_nonsq_inv = 0
    for a in range(p):
        blk = marked[a * p3 : (a + 1) * p3].reshape(p, p, p)
        detb = (a * d - b * c) % p
        singular = detb == 0
        n_singular += int(np.count_nonzero(singular))
        n_nonsq_inv += int(np.count_nonzero(~blk & ~singular))

    return Census(p, n_total, n_singular, n_square, n_nonsq_inv, n_nonsq_inv / n_total)


class PairImageCensus(NamedTuple):
    typeA_count: int
    typeB_count: int
    image_size: int


def pair_image_census(F):
    """Classify pairs (s, q) with q a square and count the image of (s,q) -> (s^2, q-2s).

    Type A pairs satisfy 4s = q - w^2 for some nonzero w, i.e. q - 4s is
    a nonzero square; the rest are type B.  The image count is asserted
    against typeA/2 + typeB (they agree up to O(p) boundary pairs).
    """
    p = F.p
    if p > PAIR_CENSUS_BOUND:
        raise TooLarge("pair census needs p <= %d, got %d" % (PAIR_CENSUS_BOUND, p))
    leg = F.legendre_table()
    squares = np.unique((np.arange(p, dtype=np.int64) ** 2) % p)  # (p+1)/2 values, 0 included

    type_a = 0
    uniques = []
    slab = max(1, 2_000_000 // len(squares))
    for lo in range(0, p, slab):
        s = np.arange(lo, min(lo + slab, p), dtype=np.int64).reshape(-1, 1)
        disc = (squares - 4 * s) % p
        type_a += int(np.count_nonzero(leg[disc] == 1))
        codes = ((s * s) % p) * p + (squares - 2 * s) % p
        uniques.append(np.unique(codes))
    image = int(np.unique(np.concatenate(uniques)).size)

    n_pairs = p * (p + 1) // 2
    type_b = n_pairs - type_a
    if abs(image - (type_a / 2 + type_b)) > p:
        raise InternalInvariantViolation(
            "pair image %d deviates from typeA/2 + typeB = %g beyond p" % (image, type_a / 2 + type_b)
        )
    return PairImageCensus(type_a, type_b, image)
