"""Matrix products, the square-root decision, and the exact censuses."""

import random

import pytest

from detsums import Mat2, TooLarge, census, has_square_root, mul, pair_image_census
from detsums.mat2 import det, identity, trace

from conftest import field

# Census numbers frozen from this package's own full-enumeration runs.
CENSUS_FIXTURES = {
    3: (29, 33, 32),
    5: (223, 145, 318),
    7: (865, 385, 1320),
    11: (5341, 1441, 8520),
    13: (10459, 2353, 16842),
}


def all_mats(p):
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    yield Mat2(a, b, c, d)


def test_mul_identity(rng):
    F = field(7)
    for _ in range(20):
        A = Mat2(*(rng.randrange(7) for _ in range(4)))
        assert mul(A, identity(), F) == A
        assert mul(identity(), A, F) == A


def test_mul_nilpotent():
    F = field(11)
    N = Mat2(0, 1, 0, 0)
    assert mul(N, N, F) == Mat2(0, 0, 0, 0)


def test_mul_shear():
    for p in (5, 13):
        F = field(p)
        S = Mat2(1, 1, 0, 1)
        assert mul(S, S, F) == Mat2(1, 2 % p, 0, 1)


def test_mul_associative(rng):
    F = field(13)
    for _ in range(30):
        A, B, C = (Mat2(*(rng.randrange(13) for _ in range(4))) for _ in range(3))
        assert mul(mul(A, B, F), C, F) == mul(A, mul(B, C, F), F)


def test_identity_has_root():
    w = has_square_root(identity(), field(7))
    assert w.found
    assert mul(w.B, w.B, field(7)) == identity()


def test_nilpotent_has_no_root():
    for p in (5, 7, 13):
        assert not has_square_root(Mat2(0, 1, 0, 0), field(p)).found


def test_nonsquare_det_blocks_root():
    F = field(5)
    A = Mat2(2, 0, 0, 1)  # det = 2, a non-residue mod 5
    assert F.legendre(det(A, F)) == -1
    assert not has_square_root(A, F).found


def test_scalar_matrices_always_decided():
    for p in (5, 13):
        F = field(p)
        for u in range(p):
            w = has_square_root(Mat2(u, 0, 0, u), F)
            assert w.found
            assert mul(w.B, w.B, F) == Mat2(u, 0, 0, u)


def test_witness_soundness(rng):
    for p in (5, 13, 31):
        F = field(p)
        for _ in range(150):
            A = Mat2(*(rng.randrange(p) for _ in range(4)))
            w = has_square_root(A, F)
            if w.found:
                assert mul(w.B, w.B, F) == A
            if F.legendre(det(A, F)) == -1:
                assert not w.found


def test_decision_matches_exhaustive_oracle():
    """Full agreement with the mark-all-squares oracle at p = 3 and 5."""
    for p in (3, 5):
        F = field(p)
        squares = {mul(B, B, F) for B in all_mats(p)}
        for A in all_mats(p):
            assert has_square_root(A, F).found == (A in squares), (p, A)


def test_census_fixtures():
    for p, (n_sq, n_sing, n_nsi) in CENSUS_FIXTURES.items():
        cen = census(field(p))
        assert cen.n_total == p**4
        assert (cen.n_square, cen.n_singular, cen.n_nonsquare_invertible) == (n_sq, n_sing, n_nsi)
        assert cen.ratio == n_nsi / p**4


def test_census_totals():
    for p in (3, 5, 7, 11):
        cen = census(field(p))
        # singular count has a closed form: p^4 - |GL_2|
        assert cen.n_singular == p**4 - (p * p - 1) * (p * p - p)
        assert cen.n_square >= p * p
        assert cen.n_nonsquare_invertible <= (p * p - 1) * (p * p - p)
        # categories partition: squares, invertible non-squares, singular non-squares
        singular_nonsquares = cen.n_total - cen.n_square - cen.n_nonsquare_invertible
        assert 0 <= singular_nonsquares <= cen.n_singular


def test_census_against_decision():
    for p in (3, 7):
        F = field(p)
        cen = census(F)
        n_sq = sum(1 for A in all_mats(p) if has_square_root(A, F).found)
        n_nsi = sum(
            1 for A in all_mats(p) if det(A, F) != 0 and not has_square_root(A, F).found
        )
        assert (cen.n_square, cen.n_nonsquare_invertible) == (n_sq, n_nsi)


def test_census_bound():
    with pytest.raises(TooLarge):
        census(field(11), bound=7)


def test_pair_image_fixtures():
    # Frozen from this package's own enumeration runs.
    assert pair_image_census(field(11)) == (30, 36, 51)
    assert pair_image_census(field(31)) == (240, 256, 376)


def test_pair_image_domain_and_range():
    for p in (3, 5, 11, 31, 101):
        pic = pair_image_census(field(p))
        assert pic.typeA_count + pic.typeB_count == p * (p + 1) // 2
        assert 0 < pic.image_size <= p * p


def test_pair_image_oracle():
    """Re-derive the p=11 classification with plain loops."""
    p = 11
    F = field(p)
    squares = sorted({(t * t) % p for t in range(p)})
    type_a = 0
    image = set()
    for s in range(p):
        for q in squares:
            disc = (q - 4 * s) % p
            if F.legendre(disc) == 1:
                type_a += 1
            image.add(((s * s) % p, (q - 2 * s) % p))
    pic = pair_image_census(F)
    assert pic.typeA_count == type_a
    assert pic.image_size == len(image)
