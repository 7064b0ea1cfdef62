import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import multivariate_normal

from pdrank.criteria import Criterion
from pdrank.dominance import dominance_matrix
from pdrank.inference import Mode
from pdrank.rankmatrix import validate
from pdrank.simulation import (
    Missingness,
    Scenario,
    benchmark_case,
    coverage_experiment,
    coverage_sweep,
    generate,
    replication_rng,
    true_cpdp_variance,
    true_ctpdp_bound,
    true_joint_prob_normal,
    true_pairwise_prob_normal,
    true_scores,
)

# Case 3 CPDP truth, four decimals.
CASE3_CPDP = [2.0547, 1.9882, 2.8794, 3.9209, 5.0120, 6.1067, 7.1850, 8.2022, 9.0606, 8.5903]


class TestTruth:
    def test_equal_means(self):
        assert true_pairwise_prob_normal(2.0, 1.0, 2.0, 1.0) == 0.5

    def test_formula(self):
        assert true_pairwise_prob_normal(1, 1, 2, 1) == pytest.approx(0.5 * math.erfc(-1 / 2), abs=1e-15)

    def test_rejects_nonpositive_variance(self):
        with pytest.raises(ValueError):
            true_pairwise_prob_normal(0, 0, 1, 1)

    def test_case3_table(self):
        truth = true_scores(benchmark_case(3))
        np.testing.assert_array_equal(np.round(truth.cpdp, 4), CASE3_CPDP)
        assert truth.cpdp_rank[8] == 10 and truth.cpdp_rank[9] == 9
        assert truth.cpdp_rank[1] == 1 and truth.cpdp_rank[0] == 2
        np.testing.assert_array_equal(truth.ctpdp_rank, np.arange(1, 11))

    @pytest.mark.parametrize("case", [1, 2])
    def test_equal_variance_ranks_follow_means(self, case):
        truth = true_scores(benchmark_case(case))
        np.testing.assert_array_equal(truth.cpdp_rank, truth.mean_rank)
        np.testing.assert_array_equal(truth.ctpdp_rank, truth.mean_rank)

    def test_identical_entities_tie(self):
        truth = true_scores(Scenario((1, 1, 3), (1, 1, 1), 5))
        assert truth.cpdp[0] == truth.cpdp[1]
        assert truth.cpdp_rank[0] == truth.cpdp_rank[1]

    @pytest.mark.parametrize("s,t,i", [(0, 1, 2), (0, 9, 4), (9, 3, 0), (2, 7, 8)])
    def test_joint_against_bivariate_normal(self, s, t, i):
        # (X_s - X_i, X_t - X_i) is bivariate normal sharing the X_i term.
        sc = benchmark_case(3)
        mu, var = np.array(sc.means), np.array(sc.variances)
        vs, vt = var[s] + var[i], var[t] + var[i]
        cov = [[vs, var[i]], [var[i], vt]]
        oracle = multivariate_normal(mean=[mu[s] - mu[i], mu[t] - mu[i]], cov=cov).cdf([0, 0])
        assert true_joint_prob_normal(sc, s, t, i) == pytest.approx(oracle, abs=1e-6)

    def test_variance_shrinks_with_m(self):
        sc = benchmark_case(1)
        np.testing.assert_allclose(true_cpdp_variance(sc, 10), 3 * true_cpdp_variance(sc, 30), rtol=1e-12)
        assert (true_ctpdp_bound(sc, 10) >= 0).all()


class TestScenario:
    def test_validation(self):
        with pytest.raises(ValueError):
            Scenario((1, 2), (1,), 5)
        with pytest.raises(ValueError):
            Scenario((1, 2), (1, -1), 5)
        with pytest.raises(ValueError):
            Scenario((1, 2), (1, 1), 0)
        with pytest.raises(ValueError):
            Missingness(1.2, 0.1)
        with pytest.raises(ValueError):
            benchmark_case(5)

    def test_cases(self):
        assert benchmark_case(2).missingness == Missingness(0.4, 0.4)
        assert benchmark_case(4).missingness == Missingness(0.4, 0.3)
        assert benchmark_case(3).variances[0] == 9 and benchmark_case(3).variances[9] == 16


class TestGenerate:
    def test_deterministic(self):
        sc = benchmark_case(2, m=12, seed=4)
        a = generate(sc, replication_rng(4, 7))
        b = generate(sc, replication_rng(4, 7))
        np.testing.assert_array_equal(a.values, b.values)
        c = generate(sc, replication_rng(4, 8))
        assert not np.array_equal(a.values, c.values, equal_nan=True)

    def test_complete_is_valid(self):
        m = generate(benchmark_case(1, m=7))
        assert m.is_complete
        assert validate(m) is m

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 40), st.integers(0, 10_000), st.sampled_from([2, 4]))
    def test_missingness_counts(self, m, rep, case):
        sc = benchmark_case(case, m=m, seed=3)
        mat = generate(sc, replication_rng(sc.seed, rep))
        validate(mat)
        missing = (~mat.observed).sum(axis=1)
        cap = math.floor(sc.missingness.max_cell_fraction * m)
        if cap == 0:
            assert mat.is_complete
            return
        assert (missing > 0).sum() <= 4
        assert missing.max() <= cap
        # every pair is estimable
        assert (dominance_matrix(mat).overlap > 0).all()

    def test_exactly_four_rows(self):
        sc = benchmark_case(2, m=30)
        for rep in range(20):
            missing = (~generate(sc, replication_rng(0, rep)).observed).sum(axis=1)
            assert (missing > 0).sum() == 4
            assert missing.max() <= 12


class TestCoverage:
    def test_single_rep(self):
        r = coverage_experiment(benchmark_case(3, m=5), reps=1)
        assert r.coverage in (0.0, 1.0)
        assert r.reps == 1

    def test_degenerate(self):
        sc = Scenario((1, 100, 200, 300), (1e-4,) * 4, 4)
        for c in (Criterion.CPDP, Criterion.CTPDP):
            for mode in Mode:
                assert coverage_experiment(sc, reps=5, mode=mode, criterion=c).coverage == 1.0

    def test_seeded_reproducibility(self):
        sc = benchmark_case(4, m=8, seed=9)
        a = coverage_experiment(sc, reps=30, mode=Mode.INDIVIDUAL)
        b = coverage_experiment(sc, reps=30, mode=Mode.INDIVIDUAL)
        assert a == b
        assert len(a.per_entity) == 10

    def test_refuses_tied_truth(self):
        with pytest.raises(ValueError):
            coverage_experiment(Scenario((1, 1, 3), (1, 1, 1), 5), reps=1)

    def test_rejects_zero_reps(self):
        with pytest.raises(ValueError):
            coverage_experiment(benchmark_case(1), reps=0)

    def test_band(self):
        r = coverage_experiment(benchmark_case(1, m=10), reps=40)
        lo, hi = r.band
        assert lo <= r.coverage <= hi
        assert r.mc_stderr == pytest.approx(math.sqrt(r.coverage * (1 - r.coverage) / 40))

    def test_sweep(self):
        out = coverage_sweep(benchmark_case(1), [5, 10], reps=3)
        assert [r.m for r in out] == [5, 10]

    @pytest.mark.slow
    def test_ctpdp_covers_at_least_cpdp(self):
        sc = benchmark_case(1, m=30)
        cp = coverage_experiment(sc, 300, criterion=Criterion.CPDP)
        ct = coverage_experiment(sc, 300, criterion=Criterion.CTPDP)
        assert ct.coverage >= cp.coverage - 2 * cp.mc_stderr


@pytest.mark.slow
def test_ctpdp_bound_dominates_sampling_variance():
    # Closely spaced means and small m make majority flips common, so the
    # sample variance is estimated precisely and the bound is not tight.
    from pdrank.criteria import ctpdp_scores

    sc = Scenario(tuple(np.arange(6) * 0.3), (1,) * 6, 9, seed=5)
    reps = 4000
    t = np.array(
        [ctpdp_scores(dominance_matrix(generate(sc, replication_rng(sc.seed, r))), True).scores for r in range(reps)]
    )
    assert (t.var(axis=0, ddof=1) <= true_ctpdp_bound(sc)).all()
