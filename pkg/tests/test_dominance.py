import numpy as np
import pytest
from hypothesis import given

from pdrank.dominance import (
    NoCommonRankerError,
    dominance_matrix,
    joint_counts,
    joint_prob,
    pairwise_prob,
)
from pdrank.rankmatrix import Orientation, RankMatrix, canonicalize, rerank

from .conftest import complete_matrices, matrices_with_missing


class TestPairwiseProb:
    def test_split_columns(self, toy3):
        assert pairwise_prob(toy3, 0, 1) == (0.5, 2)

    def test_diagonal(self, toy3):
        assert pairwise_prob(toy3, 2, 2) == (1.0, 2)

    def test_nfl_manning_luck(self, nfl):
        # Manning's rank number is larger than Luck's for 12 of the 13 experts.
        e = nfl.entities
        p, m = pairwise_prob(canonicalize(nfl), e.index("Peyton Manning"), e.index("Andrew Luck"))
        assert (p, m) == (12 / 13, 13)

    def test_overlap_denominator(self, nfl):
        e = nfl.entities
        dalton, hoyer = e.index("Andy Dalton"), e.index("Brian Hoyer")
        p, m = pairwise_prob(nfl, dalton, hoyer)
        assert m == 10
        assert p == 1.0

    def test_no_common_ranker(self):
        m = RankMatrix(("a", "b", "c"), np.array([[1, np.nan], [np.nan, 1], [2, 2]]))
        with pytest.raises(NoCommonRankerError) as info:
            pairwise_prob(m, 0, 1)
        assert info.value.pairs == [(0, 1)]


class TestDominanceMatrix:
    def test_toy(self, toy3):
        dom = dominance_matrix(toy3)
        # p[k, i] estimates P(X_k <= X_i)
        expected = np.array([[1.0, 0.5, 1.0], [0.5, 1.0, 1.0], [0.0, 0.0, 1.0]])
        np.testing.assert_array_equal(dom.p, expected)
        np.testing.assert_array_equal(dom.p.sum(axis=0), [1.5, 1.5, 3.0])

    @given(complete_matrices(m_range=(1, 1)))
    def test_single_column_is_binary(self, m):
        p = dominance_matrix(m).p
        assert set(np.unique(p)) <= {0.0, 1.0}

    def test_lists_all_disjoint_pairs(self):
        m = RankMatrix(("a", "b", "c"), np.array([[1, np.nan], [np.nan, 1], [np.nan, 2]]))
        with pytest.raises(NoCommonRankerError) as info:
            dominance_matrix(m)
        assert info.value.pairs == [(0, 1), (0, 2)]

    @given(matrices_with_missing())
    def test_invariants(self, m):
        dom = dominance_matrix(m)
        p = dom.p
        assert ((0 <= p) & (p <= 1)).all()
        assert (np.diag(p) == 1).all()
        assert (dom.overlap == dom.overlap.T).all()
        off = ~np.eye(m.n_entities, dtype=bool)
        np.testing.assert_allclose((p + p.T)[off], 1.0, atol=1e-15)

    @given(matrices_with_missing())
    def test_matches_pairwise_prob(self, m):
        dom = dominance_matrix(m)
        for k in range(m.n_entities):
            for i in range(m.n_entities):
                assert (dom.p[k, i], dom.overlap[k, i]) == pairwise_prob(m, k, i)

    @given(matrices_with_missing())
    def test_rank_equivalence(self, m):
        """Raw values and within-column ranks give the same estimates."""
        scaled = m.with_values(np.where(m.observed, m.values * 10 + 3, np.nan))
        np.testing.assert_array_equal(dominance_matrix(scaled).p, dominance_matrix(rerank(scaled)).p)

    @given(matrices_with_missing())
    def test_unrelated_column_deletion(self, m):
        # Deleting a column that already misses row 0 or row 1 leaves p[0, 1] unchanged.
        obs = m.observed
        cols = [j for j in range(m.n_rankers) if not (obs[0, j] and obs[1, j])]
        if not cols:
            return
        keep = [j for j in range(m.n_rankers) if j != cols[0]]
        smaller = RankMatrix(m.entities, m.values[:, keep], m.orientation)
        assert pairwise_prob(smaller, 0, 1) == pairwise_prob(m, 0, 1)

    def test_complete_column_sums_are_mean_ranks(self):
        values = np.array([[3, 1, 2, 4], [1, 4, 4, 3], [2, 3, 1, 1], [4, 2, 3, 2]], dtype=float)
        m = RankMatrix(tuple("abcd"), values, Orientation.HIGHER_IS_BETTER)
        np.testing.assert_allclose(dominance_matrix(m).p.sum(axis=0), values.mean(axis=1), atol=1e-14)


class TestJointProb:
    def test_toy(self, toy3):
        assert joint_prob(toy3, 0, 1, 2) == (1.0, 2)
        assert joint_prob(toy3, 1, 2, 0) == (0.0, 2)

    def test_requires_distinct(self, toy3):
        with pytest.raises(ValueError):
            joint_prob(toy3, 1, 1, 0)

    def test_no_overlap(self):
        m = RankMatrix(("a", "b", "c"), np.array([[1, np.nan], [np.nan, 1], [2, 2]]))
        with pytest.raises(NoCommonRankerError):
            joint_prob(m, 0, 1, 2)

    @given(complete_matrices())
    def test_frechet_bounds(self, m):
        p = dominance_matrix(m).p
        n = m.n_entities
        for i in range(n):
            for s in range(n):
                for t in range(n):
                    if s == t:
                        continue
                    j, _ = joint_prob(m, s, t, i)
                    assert max(0.0, p[s, i] + p[t, i] - 1) - 1e-12 <= j <= min(p[s, i], p[t, i]) + 1e-12

    @given(matrices_with_missing())
    def test_counts_agree(self, m):
        n = m.n_entities
        for i in range(n):
            hits, seen = joint_counts(m, i)
            for s in range(n):
                for t in range(n):
                    if s == t or seen[s, t] == 0:
                        continue
                    j, overlap = joint_prob(m, s, t, i)
                    assert overlap == seen[s, t]
                    assert j == pytest.approx(hits[s, t] / seen[s, t], abs=1e-15)
