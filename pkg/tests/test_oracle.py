import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_instance
from permsample import Instance, Matching
from permsample.oracle import EnumerationCapExceeded, enumerate_matchings, exact_permanent, uniformity_chisq


def brute_permanent(a):
    n = len(a)
    return sum(all(a[i][p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


class TestExactPermanent:
    def test_identity(self):
        assert exact_permanent(Instance.identity(6)) == 1

    def test_all_ones(self):
        assert exact_permanent(Instance.ones(6)) == 720
        assert exact_permanent(Instance.ones(10)) == math.factorial(10)

    def test_fig1(self, fig1):
        assert exact_permanent(fig1) == 2 == len(enumerate_matchings(fig1))

    def test_identity_30(self):
        assert exact_permanent(Instance.identity(30)) == 1

    def test_refuses_large(self):
        with pytest.raises(ValueError):
            exact_permanent(Instance.identity(31))

    def test_big_integers(self):
        assert exact_permanent(Instance.ones(13)) == math.factorial(13) > 2**32

    def test_zero_line(self):
        assert exact_permanent(Instance([[1, 1], [0, 0]])) == 0

    def test_unbalanced_component(self):
        assert exact_permanent(Instance([[1, 1, 1], [1, 0, 0], [1, 0, 0]])) == 0

    def test_matches_brute_force(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            inst = random_instance(rng, n_max=6, p_low=0.1)
            assert exact_permanent(inst) == brute_permanent(inst.adj.tolist())

    def test_matches_enumeration(self):
        rng = np.random.default_rng(4)
        for _ in range(500):
            inst = random_instance(rng, n_max=8)
            assert exact_permanent(inst) == len(enumerate_matchings(inst))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_permutation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng, n_max=8)
        n = inst.n
        shuffled = inst.adj[rng.permutation(n)][:, rng.permutation(n)]
        assert exact_permanent(Instance(shuffled)) == exact_permanent(inst)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_block_diagonal(self, seed):
        rng = np.random.default_rng(seed)
        a = random_instance(rng, n_max=5)
        b = random_instance(rng, n_max=5)
        n, m = a.n, b.n
        block = np.zeros((n + m, n + m), dtype=int)
        block[:n, :n] = a.adj
        block[n:, n:] = b.adj
        assert exact_permanent(Instance(block)) == exact_permanent(a) * exact_permanent(b)


class TestEnumerate:
    def test_identity(self):
        assert enumerate_matchings(Instance.identity(4)) == [Matching((0, 1, 2, 3))]

    def test_all_ones_sorted(self):
        got = enumerate_matchings(Instance.ones(3))
        assert [m.assign for m in got] == sorted(itertools.permutations(range(3)))

    def test_fig1_forced_edges(self, fig1):
        got = enumerate_matchings(fig1)
        assert len(got) == 2
        for m in got:
            assert m.assign[0] == 0 and m.assign[2] == 3
            assert m.is_perfect_matching_of(fig1)

    def test_cap(self):
        with pytest.raises(EnumerationCapExceeded) as info:
            enumerate_matchings(Instance.ones(6), max_count=100)
        assert info.value.partial_count == 100


class TestChiSquare:
    def test_degenerate(self):
        support = [Matching((0, 1)), Matching((1, 0))]
        res = uniformity_chisq([support[0]] * 100, support)
        assert res.statistic == pytest.approx(100.0)
        assert res.dof == 1
        assert res.p_value < 1e-20

    def test_calibration(self):
        support = [Matching(p) for p in itertools.permutations(range(3))]
        rng = np.random.default_rng(99)
        passes = 0
        for _ in range(100):
            draws = rng.integers(0, 6, size=10_000)
            res = uniformity_chisq([support[d] for d in draws], support)
            passes += res.p_value > 1e-3
        assert passes >= 99

    def test_p_value_matches_scipy(self):
        from scipy.stats import chi2

        support = [Matching((0, 1, 2)), Matching((1, 0, 2)), Matching((2, 1, 0))]
        samples = [support[0]] * 30 + [support[1]] * 40 + [support[2]] * 50
        res = uniformity_chisq(samples, support)
        assert res.statistic == pytest.approx(5.0)
        assert res.p_value == pytest.approx(chi2.sf(5.0, 2), rel=1e-12)

    def test_outside_support(self):
        support = [Matching((0, 1)), Matching((1, 0))]
        with pytest.raises(ValueError, match="not in the support"):
            uniformity_chisq([Matching((0, 1))] * 20 + [Matching((2, 2))], support)

    def test_undersampled(self):
        support = [Matching((0, 1)), Matching((1, 0))]
        with pytest.raises(ValueError, match="< 5"):
            uniformity_chisq([Matching((0, 1))] * 6, support)

    def test_small_support(self):
        with pytest.raises(ValueError):
            uniformity_chisq([Matching((0,))] * 10, [Matching((0,))])
