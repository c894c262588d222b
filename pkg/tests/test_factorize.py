import random

import pytest

from binorm.chevalley import elementary
from binorm.factorize import bounded_length, factorize_bounded, factorize_euclid
from binorm.groups import Matrix
from binorm.rings import ZI, ZSQRT2, ZZ, RingDescriptor
from support import random_sl

RINGS = [ZZ, ZSQRT2, ZI]


def test_bounded_length_values():
    assert [bounded_length(n) for n in (3, 4, 5)] == [7, 16, 27]


@pytest.mark.parametrize("factorize", [factorize_euclid, factorize_bounded])
def test_identity_has_no_factors(factorize):
    assert factorize(Matrix.identity_matrix(3)).factors == []


def test_single_elementary_is_one_factor():
    A = elementary("A", 3, (1, 2), 5)
    for fac in (factorize_euclid(A), factorize_bounded(A)):
        assert len(fac.factors) == 1
        assert fac.product() == A


def test_large_single_elementary_bounded():
    A = elementary("A", 3, (1, 3), 10**9)
    fac = factorize_bounded(A)
    assert len(fac.factors) == 1 and fac.factors[0].t == ZZ(10**9)


def test_two_by_two_block():
    A = Matrix([[2, 1, 0], [1, 1, 0], [0, 0, 1]])
    fac = factorize_euclid(A)
    assert len(fac.factors) == 2
    assert fac.product() == A


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.name)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_euclid_multiplies_back(ring, n):
    rng = random.Random(n)
    for _ in range(10):
        A = random_sl(rng, n, ring, 20, 10**6)
        assert factorize_euclid(A).product() == A


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.name)
@pytest.mark.parametrize("n", [3, 4, 5])
def test_bounded_head_is_within_limit(ring, n):
    rng = random.Random(100 + n)
    for scale in (10**3, 10**9):
        for _ in range(8 if n < 5 else 3):
            A = random_sl(rng, n, ring, 30, scale)
            fac = factorize_bounded(A)
            assert fac.product() == A
            assert not fac.fell_back
            assert len(fac.factors) - fac.tail <= bounded_length(n)
            assert fac.bound == bounded_length(n)


def test_bounded_rejects_rank_one():
    with pytest.raises(ValueError, match="rank >= 2"):
        factorize_bounded(Matrix.identity_matrix(2))


def test_determinant_must_be_one():
    with pytest.raises(ValueError):
        factorize_euclid(Matrix([[2, 0, 0], [0, 1, 0], [0, 0, 1]]))
    with pytest.raises(ValueError):
        factorize_bounded(Matrix([[-1, 0, 0], [0, 1, 0], [0, 0, 1]]))


def test_unit_determinant_over_quadratic_ring():
    u = ZSQRT2(1, 1)
    A = Matrix([[u, 0, 0], [0, u.unit_inverse(), 0], [0, 0, 1]], ZSQRT2)
    assert factorize_bounded(A).product() == A
    i = ZI(0, 1)
    B = Matrix([[i, 0, 0], [0, 1, 0], [0, 0, -i]], ZI)
    assert factorize_euclid(B).product() == B


def test_search_cap_falls_back_to_euclid():
    # with a single allowed shift (t = 0) some matrices need the Euclid fallback
    flags = []
    for seed in range(20):
        A = random_sl(random.Random(seed), 3, ZZ, 30, 10**6)
        fac = factorize_bounded(A, search_cap=1)
        assert fac.product() == A and fac.mode == "bounded"
        flags.append(fac.fell_back)
    assert any(flags) and not all(flags)
