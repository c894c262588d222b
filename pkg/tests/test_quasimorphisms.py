import itertools
import random
from fractions import Fraction

import pytest

from binorm.groups import FreeWord
from binorm.metrics import _reduced_words, free_binorm_upper
from binorm.quasimorphisms import (
    BrooksQM,
    binorm_lower_bound,
    brooks_count,
    defect_at,
    empirical_defect,
    evaluate,
    homogenize,
    power,
    undistorted_certificate,
)

S2 = [FreeWord.parse(c) for c in "xyXY"]


def W(text):
    return FreeWord.parse(text)


def naive_count(pattern: str, word: str) -> int:
    return sum(1 for i in range(len(word)) if word.startswith(pattern, i))


def test_overlapping_occurrences_are_counted():
    assert brooks_count(W("xx"), W("xxxx")) == 3
    assert brooks_count(W("xyx"), W("xyxyx")) == 2


def test_count_matches_string_search():
    rng = random.Random(0)
    for _ in range(500):
        g = FreeWord([rng.choice([1, -1, 2, -2]) for _ in range(30)])
        w = FreeWord([rng.choice([1, -1, 2, -2]) for _ in range(3)])
        if w.is_identity():
            continue
        assert brooks_count(w, g) == naive_count(w.to_string(), g.to_string())


def test_antisymmetry_exhaustive():
    words = [FreeWord(w) for w in _reduced_words(2, 8)]
    patterns = [FreeWord(p) for p in _reduced_words(2, 3) if p]
    for p in patterns:
        q = BrooksQM(p)
        for g in words:
            assert evaluate(q, g.inverse()) == -evaluate(q, g)


def test_single_letter_is_exponent_sum():
    q = BrooksQM.parse("x")
    assert q.is_homomorphism
    for g in ("xxyXx", "yxY", "XXX"):
        assert q(W(g)) == W(g).exponent_sums()[0]


def test_defect_bound_holds_on_random_pairs():
    q = BrooksQM.parse("xy", defect_bound=3)
    rng = random.Random(1)
    letters = [1, -1, 2, -2]
    for _ in range(100_000):
        g = FreeWord([rng.choice(letters) for _ in range(rng.randint(0, 12))])
        h = FreeWord([rng.choice(letters) for _ in range(rng.randint(0, 12))])
        assert defect_at(q, g, h) <= q.defect_bound


def test_empirical_defect_is_reproducible_and_consistent():
    q = BrooksQM.parse("xy", defect_bound=3)
    est = empirical_defect(q, 10_000, 40, seed=5)
    assert 0 < est <= q.defect_bound
    assert est == empirical_defect(q, 10_000, 40, seed=5)


def test_inverse_pairs_have_zero_defect():
    q = BrooksQM.parse("xyx")
    for g in ("xyxY", "yyxyx", "x"):
        assert evaluate(q, W(g) * W(g).inverse()) - evaluate(q, W(g)) - evaluate(q, W(g).inverse()) == 0


def test_homomorphism_homogenizes_exactly():
    q = BrooksQM.parse("x")
    value, err = homogenize(q, W("xxy"), N=64)
    assert value == 2 and err == 0


def test_homogenization_is_conjugation_invariant():
    q = BrooksQM.parse("xy", defect_bound=3)
    b, a = W("xyxY"), W("yyX")
    vb, eb = homogenize(q, b, 64)
    vc, ec = homogenize(q, a * b * a.inverse(), 64)
    assert abs(vb - vc) <= 2 * max(eb, ec)


def test_homogenization_is_homogeneous():
    q = BrooksQM.parse("xy", defect_bound=3)
    g = W("xyxY")
    v1, e1 = homogenize(q, g, 64)
    v2, e2 = homogenize(q, power(g, 2), 64)
    assert abs(v2 - 2 * v1) <= e2 + 2 * e1


def test_precision_stops_early():
    q = BrooksQM.parse("xy", defect_bound=3)
    _, err = homogenize(q, W("xy"), N=64, precision=Fraction(1, 2))
    assert err == Fraction(3, 8)


def test_defect_is_required_for_long_patterns():
    with pytest.raises(ValueError):
        binorm_lower_bound(BrooksQM.parse("xy"), W("xy"))
    with pytest.raises(ValueError):
        BrooksQM.parse("")


def test_lower_bound_for_powers_of_x():
    q = BrooksQM.parse("x")
    for n in (1, 5, 40):
        rep = binorm_lower_bound(q, power(W("x"), n), S2, D=0)
        assert rep.bound == n and not rep.conditional


def test_lower_bound_of_identity_is_zero():
    assert binorm_lower_bound(BrooksQM.parse("x"), W(""), S2).bound == 0


def test_commutator_powers_grow_linearly():
    q = BrooksQM.parse("xy", defect_bound=3)
    bounds = [binorm_lower_bound(q, power(W("xyXY"), n), S2).bound for n in range(1, 9)]
    assert all(b == bounds[0] * (i + 1) for i, b in enumerate(bounds))
    assert bounds[0] > 0
    assert binorm_lower_bound(q, W("xyXY"), S2).conditional


def test_impossible_flag_when_constant_vanishes():
    rep = binorm_lower_bound(BrooksQM.parse("xy"), W("xy"), [W("x"), W("X")], D=0)
    assert rep.impossible and rep.bound is None


def test_lower_bound_never_exceeds_search_upper_bound():
    qs = [(BrooksQM.parse("x"), 0), (BrooksQM.parse("y"), 0), (BrooksQM.parse("xy"), 3)]
    words = ["yxY", "yyxYY", "xyXY", "xx", "xyxY", "yyyxYYY"]
    for (q, D), w in itertools.product(qs, words):
        upper = free_binorm_upper(W(w), S2, conj_cap=3, letter_cap=3)
        if upper is not None:
            assert binorm_lower_bound(q, W(w), S2, D).bound <= upper


def test_undistorted_generator():
    rep = undistorted_certificate(BrooksQM.parse("x"), W("x"), S2, 0)
    assert rep.status == "certified" and rep.tau_lower == 1 and not rep.conditional


def test_conjugate_of_generator_is_consistent_with_upper_bound():
    rep = undistorted_certificate(BrooksQM.parse("x"), W("yxY"), S2, 0)
    # |g^n| <= n for a conjugate of a generator, so tau <= 1
    assert rep.tau_lower == 1


def test_zero_homogenization_is_inconclusive():
    rep = undistorted_certificate(BrooksQM.parse("xy", defect_bound=3), W("xx"), S2)
    assert rep.status == "inconclusive" and rep.tau_lower is None


def test_power_matches_repeated_multiplication():
    rng = random.Random(2)
    for _ in range(2000):
        g = FreeWord([rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(0, 9))])
        n = rng.randint(0, 6)
        expected = g.identity()
        for _ in range(n):
            expected = expected * g
        assert power(g, n) == expected
    with pytest.raises(ValueError):
        power(W("x"), -1)
