import math

import numpy as np
import pytest

from ttabma import (
    BmaConfig,
    CandidateModel,
    FittedModel,
    PredictionTable,
    bayes_factor,
    generate_candidates,
    posterior_weight,
    run_bma,
)
from ttabma.errors import NonFiniteError, SingleClassError, TooManyColumnsError

from conftest import make_table
from oracles import enumeration_weights, sweep_oracle


def rich_table():
    """Accepts four models including pairs; exercises the accumulators."""
    return make_table(16, n_rows=60, n_columns=4, signal_noise=1.2)


def dummy_candidate(bic_value, subset=(0,)):
    fitted = FittedModel(0.0, np.zeros(len(subset)), 0.0, 1, True)
    return CandidateModel(subset, fitted, bic_value, -0.5 * bic_value)


class TestGenerateCandidates:
    def test_size_one_gives_all_singletons(self):
        assert generate_candidates(1, [], 3) == [(0,), (1,), (2,)]

    def test_supersets_of_single_accepted(self):
        assert generate_candidates(2, [(1,)], 3) == [(0, 1), (1, 2)]

    def test_supersets_of_pair(self):
        # brute-force check: all 3-subsets of 4 columns containing {0, 1}
        expected = [
            combo
            for combo in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
            if {0, 1} <= set(combo)
        ]
        assert generate_candidates(3, [(0, 1)], 4) == expected
        assert expected == [(0, 1, 2), (0, 1, 3)]

    def test_empty_previous_ends_sweep(self):
        assert generate_candidates(2, [], 5) == []

    def test_size_out_of_range(self):
        with pytest.raises(ValueError):
            generate_candidates(0, [], 3)
        with pytest.raises(ValueError):
            generate_candidates(4, [(0,)], 3)


class TestRunBmaGreedy:
    def test_single_column_reduces_to_plain_fit(self):
        table = make_table(5, n_rows=40, n_columns=1)
        summary = run_bma(table)
        assert [m.subset for m in summary.accepted] == [(0,)]
        assert summary.inclusion_prob.tolist() == [1.0]
        model = summary.accepted[0]
        assert summary.expected_coeffs[0] == model.fitted.coefficients[0]
        assert summary.expected_intercept == model.fitted.intercept

    def test_identical_columns_tie_keeps_first_singleton(self):
        column = make_table(9, n_rows=50, n_columns=1).column(0)
        labels = make_table(9, n_rows=50, n_columns=1).labels
        table = PredictionTable(np.column_stack([column] * 3), labels)
        summary = run_bma(table)
        assert [m.subset for m in summary.accepted] == [(0,)]
        assert summary.inclusion_prob.tolist() == [1.0, 0.0, 0.0]

    @pytest.mark.parametrize(
        "table_fn",
        [
            lambda: make_table(42, n_rows=200, n_columns=3, adversarial=(2,)),
            rich_table,
        ],
    )
    def test_matches_independent_sweep_oracle(self, table_fn):
        table = table_fn()
        summary = run_bma(table)
        oracle = sweep_oracle(table)
        assert [m.subset for m in summary.accepted] == oracle["accepted"]
        assert summary.log_l_total == pytest.approx(oracle["log_l_total"], abs=1e-9)
        assert summary.inclusion_prob == pytest.approx(
            oracle["inclusion_prob"], abs=1e-9
        )
        assert summary.expected_coeffs == pytest.approx(
            oracle["expected_coeffs"], abs=1e-9
        )
        assert summary.expected_intercept == pytest.approx(
            oracle["expected_intercept"], abs=1e-9
        )

    def test_rich_fixture_accepts_pairs(self):
        summary = run_bma(rich_table())
        assert [m.subset for m in summary.accepted] == [
            (0,),
            (3,),
            (0, 2),
            (0, 3),
        ]

    def test_acceptance_log_likelihoods_strictly_increase(self):
        summary = run_bma(rich_table())
        values = [m.log_model_likelihood for m in summary.accepted]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_log_model_likelihood_is_half_bic(self):
        for model in run_bma(rich_table()).accepted:
            assert model.log_model_likelihood == -model.bic / 2

    def test_inclusion_probabilities_within_bounds(self):
        summary = run_bma(rich_table())
        assert np.all(summary.inclusion_prob >= 0.0)
        assert np.all(summary.inclusion_prob <= 1.0 + 1e-12)

    def test_candidate_model_validates_subset(self):
        with pytest.raises(ValueError):
            dummy_candidate(10.0, ())
        with pytest.raises(ValueError):
            dummy_candidate(10.0, (2, 1))
        with pytest.raises(ValueError):
            CandidateModel((0,), FittedModel(0.0, np.zeros(1), 0.0, 1, True), 10.0, -4.0)

    def test_inclusion_consistency(self):
        summary = run_bma(rich_table())
        weights = summary.posterior_weights()
        for j in range(summary.n_columns):
            direct = sum(
                w
                for w, m in zip(weights, summary.accepted)
                if j in m.subset
            )
            assert summary.inclusion_prob[j] == pytest.approx(direct, abs=1e-9)

    def test_zero_inclusion_means_zero_coefficient(self):
        summary = run_bma(rich_table())
        for j in range(summary.n_columns):
            if summary.inclusion_prob[j] == 0.0:
                assert summary.expected_coeffs[j] == 0.0

    def test_deterministic_bit_identical(self):
        a = run_bma(rich_table())
        b = run_bma(rich_table())
        assert a.log_l_total == b.log_l_total
        assert np.array_equal(a.inclusion_prob, b.inclusion_prob)
        assert np.array_equal(a.expected_coeffs, b.expected_coeffs)
        assert a.expected_intercept == b.expected_intercept
        assert [m.bic for m in a.accepted] == [m.bic for m in b.accepted]


class TestRunBmaFull:
    def test_every_subset_accepted(self):
        table = make_table(5, n_rows=40, n_columns=3)
        summary = run_bma(table, BmaConfig(mode="full"))
        assert len(summary.accepted) == 7
        assert summary.mode == "full"

    def test_matches_textbook_enumeration(self):
        table = rich_table()
        summary = run_bma(table, BmaConfig(mode="full"))
        oracle_weights, oracle_log_total = enumeration_weights(table)
        weights = summary.posterior_weights()
        assert summary.log_l_total == pytest.approx(oracle_log_total, abs=1e-9)
        for w, model in zip(weights, summary.accepted):
            assert w == pytest.approx(oracle_weights[model.subset], abs=1e-9)
        assert weights.sum() == pytest.approx(1.0, abs=1e-9)

    def test_column_permutation_equivariance(self):
        table = rich_table()
        permutation = [2, 0, 3, 1]
        permuted = PredictionTable(
            table.predictions[:, permutation], table.labels
        )
        base = run_bma(table, BmaConfig(mode="full"))
        other = run_bma(permuted, BmaConfig(mode="full"))
        for new_col, old_col in enumerate(permutation):
            assert other.inclusion_prob[new_col] == pytest.approx(
                base.inclusion_prob[old_col], abs=1e-9
            )
            assert other.expected_coeffs[new_col] == pytest.approx(
                base.expected_coeffs[old_col], abs=1e-9
            )

    def test_log_space_matches_linear_space_on_small_instance(self):
        table = make_table(21, n_rows=16, n_columns=3)
        summary = run_bma(table)
        assert all(m.bic < 50 for m in summary.accepted)
        linear = sweep_oracle(table, exact=False)
        assert summary.log_l_total == pytest.approx(linear["log_l_total"], abs=1e-9)
        assert summary.inclusion_prob == pytest.approx(
            linear["inclusion_prob"], abs=1e-9
        )


class TestWeightsAndFactors:
    def test_single_model_weight_is_one(self):
        table = make_table(5, n_rows=40, n_columns=1)
        summary = run_bma(table)
        assert posterior_weight(summary.accepted[0], summary.log_l_total) == 1.0

    def test_equal_bic_splits_evenly(self):
        a = dummy_candidate(12.0, (0,))
        b = dummy_candidate(12.0, (1,))
        log_total = float(np.logaddexp(a.log_model_likelihood, b.log_model_likelihood))
        assert posterior_weight(a, log_total) == pytest.approx(0.5, abs=1e-12)
        assert posterior_weight(b, log_total) == pytest.approx(0.5, abs=1e-12)

    def test_fixture_weights_match_oracle_and_sum_to_one(self):
        table = rich_table()
        summary = run_bma(table)
        oracle = sweep_oracle(table)
        weights = summary.posterior_weights()
        assert weights.sum() == pytest.approx(1.0, abs=1e-9)
        recomputed = [
            math.exp(m.log_model_likelihood - oracle["log_l_total"])
            for m in summary.accepted
        ]
        assert weights == pytest.approx(recomputed, abs=1e-9)

    def test_bayes_factor_identities(self):
        model = dummy_candidate(30.0)
        assert bayes_factor(model, model) == 1.0
        stronger = dummy_candidate(30.0 - 2.0 * math.log(10.0), (1,))
        assert bayes_factor(stronger, model) == pytest.approx(10.0, rel=1e-12)

    def test_fixture_best_vs_second_best(self):
        summary = run_bma(rich_table())
        ordered = sorted(
            summary.accepted, key=lambda m: m.log_model_likelihood, reverse=True
        )
        best, second = ordered[0], ordered[1]
        expected = math.exp(second.bic / 2 - best.bic / 2)
        assert bayes_factor(best, second) == pytest.approx(expected, rel=1e-12)
        assert bayes_factor(best, second) > 1.0


class TestErrors:
    def test_too_many_columns(self):
        table = make_table(5, n_rows=30, n_columns=3)
        with pytest.raises(TooManyColumnsError):
            run_bma(table, BmaConfig(max_columns=2))

    def test_single_class(self):
        table = PredictionTable(np.full((5, 2), 0.5), np.ones(5, dtype=int))
        with pytest.raises(SingleClassError):
            run_bma(table)

    def test_fit_error_names_offending_subset(self, monkeypatch):
        import ttabma.bma as bma_module

        def exploding_fit(design, config):
            raise NonFiniteError("boom")

        monkeypatch.setattr(bma_module, "fit_logistic", exploding_fit)
        table = make_table(5, n_rows=30, n_columns=2)
        with pytest.raises(NonFiniteError, match=r"\(0,\)"):
            run_bma(table)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            BmaConfig(mode="both")
        with pytest.raises(ValueError):
            BmaConfig(max_columns=0)
