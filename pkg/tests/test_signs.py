"""Sign bookkeeping: pair classification, order, counts, levels."""

import itertools

import pytest
from hypothesis import given, strategies as st

from pohst.signs import (
    SignVector,
    alpha_beta,
    boundary_counts,
    classify_pairs,
    level_profile,
    min_heavy_target,
    pair_order_cmp,
    pair_sign_maps,
    prefix_signs,
    product_sign,
    y_sign_counts,
)

sign_vectors = st.lists(st.sampled_from([1, -1]), min_size=0, max_size=10).map(
    lambda bits: SignVector(tuple(bits))
)


def all_sigmas(n):
    for bits in itertools.product((1, -1), repeat=n):
        yield SignVector(bits)


def brute_product_sign(sigma, pair):
    # the independent route: multiply entries directly
    i, j = pair
    s = 1
    for k in range(i - 1, j):
        s *= sigma.entries[k]
    return s


def brute_classify(sigma):
    j_set, k_set = set(), set()
    n = len(sigma)
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            s = brute_product_sign(sigma, (i, j))
            if s == (-1) ** (i + j):
                j_set.add(((i, j), s))
            else:
                k_set.add(((i, j), s))
    return j_set, k_set


class TestSignVector:
    def test_from_string_roundtrip(self):
        assert SignVector.from_string("-+-").entries == (-1, 1, -1)
        assert SignVector((1, -1)).to_string() == "+-"

    def test_rejects_zero_and_junk(self):
        with pytest.raises(ValueError):
            SignVector((1, 0))
        with pytest.raises(ValueError):
            SignVector.from_string("x+")
        with pytest.raises(ValueError):
            SignVector.from_reals([0.5, 0.0])

    def test_from_reals(self):
        assert SignVector.from_reals([-0.5, 0.5]).to_string() == "-+"


class TestProductSign:
    def test_examples(self):
        assert product_sign(SignVector.from_string("+-"), (1, 2)) == -1
        assert product_sign(SignVector.from_string("+-+"), (1, 3)) == -1
        assert product_sign(SignVector.from_string("-+-"), (1, 3)) == 1

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            product_sign(SignVector.from_string("+-"), (1, 3))
        with pytest.raises(IndexError):
            product_sign(SignVector.from_string("+-"), (0, 1))

    def test_matches_direct_multiplication(self):
        for n in range(1, 7):
            for sigma in all_sigmas(n):
                for i in range(1, n + 1):
                    for j in range(i, n + 1):
                        assert product_sign(sigma, (i, j)) == brute_product_sign(
                            sigma, (i, j)
                        )

    @given(sign_vectors.filter(lambda s: len(s) >= 2))
    def test_adjacent_pairs_extend_by_one_entry(self, sigma):
        n = len(sigma)
        for i in range(1, n + 1):
            for j in range(i, n):
                assert product_sign(sigma, (i, j + 1)) == product_sign(
                    sigma, (i, j)
                ) * sigma.entries[j]


class TestClassify:
    def test_example_mixed(self):
        j_set, k_set = classify_pairs(SignVector.from_string("-+-"))
        assert {(p.pair, p.product_sign) for p in j_set} == {
            ((2, 2), 1), ((1, 2), -1), ((2, 3), -1), ((1, 3), 1)
        }
        assert {(p.pair, p.product_sign) for p in k_set} == {((1, 1), -1), ((3, 3), -1)}

    def test_example_all_positive(self):
        j_set, k_set = classify_pairs(SignVector.from_string("++"))
        assert {(p.pair, p.product_sign) for p in j_set} == {((1, 1), 1), ((2, 2), 1)}
        assert {(p.pair, p.product_sign) for p in k_set} == {((1, 2), 1)}

    def test_example_single(self):
        j_set, k_set = classify_pairs(SignVector.from_string("+"))
        assert [(p.pair, p.product_sign) for p in j_set] == [((1, 1), 1)]
        assert k_set == []

    def test_covers_triangle_disjointly(self):
        for n in range(0, 8):
            for sigma in all_sigmas(n):
                j_set, k_set = classify_pairs(sigma)
                pairs = [p.pair for p in j_set] + [p.pair for p in k_set]
                assert len(pairs) == len(set(pairs)) == n * (n + 1) // 2
                assert all(not p.canonical for p in j_set)
                assert all(p.canonical for p in k_set)

    def test_matches_brute_force(self):
        for n in range(1, 7):
            for sigma in all_sigmas(n):
                j_set, k_set = classify_pairs(sigma)
                bj, bk = brute_classify(sigma)
                assert {(p.pair, p.product_sign) for p in j_set} == bj
                assert {(p.pair, p.product_sign) for p in k_set} == bk

    def test_maps_agree_with_lists(self):
        sigma = SignVector.from_string("-++-+")
        j_set, k_set = classify_pairs(sigma)
        jmap, kmap = pair_sign_maps(sigma)
        assert jmap == {p.pair: p.product_sign for p in j_set}
        assert kmap == {p.pair: p.product_sign for p in k_set}


class TestPairOrder:
    def test_figure_facts(self):
        assert pair_order_cmp((1, 1), (2, 2)) == -1
        assert pair_order_cmp((2, 2), (1, 2)) == -1
        assert pair_order_cmp((1, 2), (3, 3)) == -1

    pairs = st.tuples(st.integers(1, 9), st.integers(1, 9)).map(
        lambda t: (min(t), max(t))
    )

    @given(pairs, pairs)
    def test_antisymmetric_and_total(self, a, b):
        if a == b:
            assert pair_order_cmp(a, b) == 0
        else:
            assert pair_order_cmp(a, b) == -pair_order_cmp(b, a) != 0

    @given(pairs, pairs, pairs)
    def test_transitive(self, a, b, c):
        if pair_order_cmp(a, b) <= 0 and pair_order_cmp(b, c) <= 0:
            assert pair_order_cmp(a, c) <= 0


class TestAlphaBeta:
    def test_examples(self):
        assert alpha_beta(SignVector.from_string("-+-")) == (1, 2)
        assert alpha_beta(SignVector.from_string("++")) == (2, 0)
        assert alpha_beta(SignVector(())) == (0, 0)

    @given(sign_vectors)
    def test_ties_to_y_counts(self, sigma):
        alpha, beta = alpha_beta(sigma)
        p, m = y_sign_counts(sigma)
        assert alpha + beta == len(sigma)
        assert (p, m) == (alpha + 1, beta)
        assert min_heavy_target(sigma) == min(alpha + 1, beta)


class TestLevelProfile:
    def test_examples(self):
        prof = level_profile(SignVector.from_string("-+-"), 2)
        assert (prof.p, prof.m) == (1, 2)
        prof = level_profile(SignVector.from_string("-+-"), 3)
        assert (prof.p, prof.m, prof.stable) == (2, 2, False)
        prof = level_profile(SignVector.from_string("+-+"), 0)
        assert (prof.p, prof.m) == (1, 0)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            level_profile(SignVector.from_string("+"), 2)

    @given(sign_vectors)
    def test_counts_sum(self, sigma):
        for j in range(len(sigma) + 1):
            prof = level_profile(sigma, j)
            assert prof.p + prof.m == j + 1
            t = prefix_signs(sigma)
            assert prof.p == sum(1 for r in range(j + 1) if t[r] > 0)


class TestBoundaryCounts:
    def test_examples(self):
        assert boundary_counts(SignVector.from_string("-++")) == (1, 2)
        assert boundary_counts(SignVector.from_string("+")) == (0, 0)
        assert boundary_counts(SignVector.from_string("-")) == (0, 1)

    def test_offset_identity_small(self):
        # full exhaustive range runs in the acceptance suite
        for n in (3, 5, 7):
            for sigma in all_sigmas(n):
                if sum(1 for s in sigma if s < 0) % 2 == 1:
                    b_plus, b_minus = boundary_counts(sigma)
                    assert b_plus + 1 == b_minus
