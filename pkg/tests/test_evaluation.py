from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from patsim.errors import ConstantInputError, DomainError
from patsim.evaluation import EvalSummary, average_ranks, evaluate, pearson, spearman
from patsim.hybrid import SimilarityReport
from patsim.ratings import AdjudicatedScore


def naive_pearson_raw_moments(x, y) -> float:
    # Single-pass raw-moment form, written long-hand.
    n = len(x)
    sx = sy = sxy = sxx = syy = 0.0
    for xi, yi in zip(x, y):
        sx += xi
        sy += yi
        sxy += xi * yi
        sxx += xi * xi
        syy += yi * yi
    return (n * sxy - sx * sy) / math.sqrt((n * sxx - sx * sx) * (n * syy - sy * sy))


def naive_pearson_covariance(x, y) -> float:
    # Two-pass covariance / (sigma_x * sigma_y), plain loops.
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    cov = sxx = syy = 0.0
    for xi, yi in zip(x, y):
        cov += (xi - mx) * (yi - my)
        sxx += (xi - mx) ** 2
        syy += (yi - my) ** 2
    return cov / math.sqrt(sxx * syy)


def brute_force_ranks(values) -> list[float]:
    # Average rank = mean of the 1-based sorted positions of equal values.
    ranks = []
    for v in values:
        positions = [i + 1 for i, w in enumerate(sorted(values)) if w == v]
        ranks.append(sum(positions) / len(positions))
    return ranks


class TestPearson:
    def test_perfect_linearity(self):
        x = [1.0, 2.0, 3.0, 4.0]
        assert pearson(x, [2 * v + 1 for v in x]) == 1.0

    def test_perfect_inverse(self):
        x = [1.0, 2.0, 3.0, 4.0]
        assert pearson(x, [-v for v in x]) == -1.0

    def test_matches_covariance_oracle(self):
        x, y = [1.0, 2.0, 3.0], [1.0, 3.0, 2.0]
        assert abs(pearson(x, y) - naive_pearson_covariance(x, y)) <= 1e-12

    def test_matches_raw_moment_oracle_on_random_data(self):
        rng = np.random.default_rng(23)
        for _ in range(200):
            n = int(rng.integers(2, 201))
            x = rng.standard_normal(n)
            y = rng.standard_normal(n)
            assert abs(pearson(x, y) - naive_pearson_raw_moments(x, y)) <= 1e-12

    def test_constant_input_rejected(self):
        with pytest.raises(ConstantInputError):
            pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            pearson([1.0, 2.0], [1.0, 2.0, 3.0])

    def test_too_short(self):
        with pytest.raises(DomainError):
            pearson([1.0], [2.0])

    def test_non_finite_rejected(self):
        with pytest.raises(DomainError):
            pearson([1.0, float("nan")], [1.0, 2.0])


finite_lists = st.lists(st.floats(-100, 100, allow_nan=False), min_size=3, max_size=40)


@given(finite_lists)
def test_pearson_symmetry_and_affine_invariance(values):
    x = np.asarray(values)
    y = np.sin(x) + 0.1 * x  # deterministic companion series
    # A tiny spread under a large affine shift is numerically degenerate;
    # the invariance is only meaningful on well-conditioned inputs.
    if np.std(x) < 0.1 or np.std(y) < 0.01:
        return
    r = pearson(x, y)
    assert r == pytest.approx(pearson(y, x), abs=1e-12)
    assert r == pytest.approx(pearson(2.5 * x + 7.0, y), abs=1e-12)
    assert r == pytest.approx(pearson(x, 0.3 * y - 2.0), abs=1e-12)


class TestAverageRanks:
    def test_no_ties(self):
        assert average_ranks([30.0, 10.0, 20.0]).tolist() == [3.0, 1.0, 2.0]

    def test_ties_get_fractional_ranks(self):
        assert average_ranks([1.0, 2.0, 2.0, 3.0]).tolist() == [1.0, 2.5, 2.5, 4.0]

    @given(st.lists(st.integers(0, 9).map(float), min_size=1, max_size=30))
    def test_matches_brute_force_oracle(self, values):
        assert average_ranks(values).tolist() == brute_force_ranks(values)


class TestSpearman:
    def test_monotone_increasing_is_one(self):
        x = [3.0, 1.0, 4.0, 1.5, 9.0]
        y = [math.exp(v) for v in x]  # monotone, nonlinear
        assert spearman(x, y) == 1.0

    def test_monotone_decreasing_is_minus_one(self):
        x = [3.0, 1.0, 4.0, 1.5, 9.0]
        y = [-math.exp(v) for v in x]
        assert spearman(x, y) == -1.0

    def test_tied_data_matches_rank_then_pearson_oracle(self):
        x, y = [1.0, 2.0, 2.0, 3.0], [1.0, 2.0, 3.0, 4.0]
        want = naive_pearson_covariance(brute_force_ranks(x), brute_force_ranks(y))
        assert abs(spearman(x, y) - want) <= 1e-12

    def test_closed_form_on_tie_free_data(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            n = int(rng.integers(3, 100))
            x = rng.permutation(n).astype(float)
            y = rng.permutation(n).astype(float)
            rx, ry = average_ranks(x), average_ranks(y)
            d = rx - ry
            closed = 1.0 - 6.0 * float(np.dot(d, d)) / (n * (n * n - 1))
            assert abs(spearman(x, y) - closed) <= 1e-12

    def test_paper_literal_denominator(self):
        x = [1.0, 2.0, 3.0, 4.0]
        y = [4.0, 3.0, 2.0, 1.0]
        # Fully discordant, n=4: sum(D^2) = 9+1+1+9 = 20.
        assert spearman(x, y, mode="paper-literal") == pytest.approx(1 - 6 * 20 / (4 * 3), abs=1e-12)
        assert spearman(x, y, mode="standard") == -1.0

    def test_paper_literal_agrees_when_ranks_coincide(self):
        x = [1.0, 2.0, 3.0]
        y = [10.0, 20.0, 30.0]
        assert spearman(x, y, mode="paper-literal") == 1.0

    def test_unknown_mode_rejected(self):
        with pytest.raises(DomainError):
            spearman([1.0, 2.0], [1.0, 2.0], mode="bogus")

    def test_constant_input_rejected(self):
        with pytest.raises(ConstantInputError):
            spearman([2.0, 2.0], [1.0, 2.0])


def report(sd: float, td: float, i: int) -> SimilarityReport:
    return SimilarityReport(f"A{i}", f"B{i}", sd=sd, td=td, sdtd=(td + 1) * sd / 2, model_id="m")


def truth(score: float) -> AdjudicatedScore:
    return AdjudicatedScore(score=score, route="panel_mean", distance=0.0)


class TestEvaluate:
    def test_rescaled_scores_correlate_perfectly(self):
        rng = np.random.default_rng(1)
        reports = [report(float(s), float(t), i) for i, (s, t) in enumerate(rng.uniform(0.05, 1.0, size=(20, 2)))]
        truths = [truth(10.0 * r.sdtd) for r in reports]
        summary = evaluate(reports, truths, "sdtd")
        assert summary.pearson == pytest.approx(1.0, abs=1e-12)
        assert summary.spearman == 1.0
        assert summary.n == 20

    def test_single_observation_rejected(self):
        with pytest.raises(DomainError):
            evaluate([report(0.5, 0.5, 0)], [truth(5.0)], "sd")

    def test_misaligned_lengths_rejected(self):
        with pytest.raises(DomainError):
            evaluate([report(0.5, 0.5, 0)], [truth(5.0), truth(3.0)], "sd")

    def test_unknown_field_rejected(self):
        with pytest.raises(DomainError):
            evaluate([], [], "td")

    def test_truth_moments_are_population_style(self):
        reports = [report(0.2, 0.0, 0), report(0.4, 0.0, 1), report(0.9, 0.0, 2)]
        truths = [truth(1.0), truth(2.0), truth(3.0)]
        summary = evaluate(reports, truths, "sd")
        assert summary.truth_mean == pytest.approx(2.0)
        assert summary.truth_sd == pytest.approx(math.sqrt(2 / 3))

    def test_json_schema(self):
        summary = EvalSummary(n=3, pearson=0.123456789, spearman=-0.5, field="sd", truth_mean=1.5, truth_sd=0.25)
        payload = summary.to_json_dict()
        assert list(payload) == ["n", "pearson", "spearman", "field", "truth_mean", "truth_sd"]
        assert payload["pearson"] == 0.123457

    def test_spearman_mode_passthrough(self):
        reports = [report(0.1, 0.0, 0), report(0.5, 0.0, 1), report(0.9, 0.0, 2), report(0.7, 0.0, 3)]
        truths = [truth(9.0), truth(7.0), truth(1.0), truth(3.0)]
        standard = evaluate(reports, truths, "sd").spearman
        literal = evaluate(reports, truths, "sd", spearman_mode="paper-literal").spearman
        assert standard == -1.0
        assert literal < standard
