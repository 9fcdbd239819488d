"""Sweeps, sharpness probing, identities and randomized soundness."""

import math
import random

import pytest

from pohst.analysis import (
    DegenerateInput,
    MaximizeConfig,
    bound_soundness_sample,
    identity_residual,
    iterated_identity_residual,
    maximize_f,
    pattern_from_index,
    sweep,
    sweep_summary,
)
from pohst.certify import RealVectorY
from pohst.signs import SignVector, min_heavy_target


def random_y(rng, n):
    mag = rng.uniform(0.5, 2.0)
    out = []
    for _ in range(n):
        out.append(rng.choice((1, -1)) * mag)
        mag *= 1.0 + rng.uniform(0.1, 2.0)
    return RealVectorY(tuple(out))


class TestSweep:
    def test_n2_exhaustive(self):
        records = list(sweep(2))
        assert len(records) == 4
        assert all(r.valid for r in records)
        by_sigma = {r.sigma: r for r in records}
        assert by_sigma["++"].heavy == 0 and by_sigma["++"].target == 0
        assert by_sigma["--"].heavy == 1

    def test_n1_heavy_counts(self):
        records = {r.sigma: r for r in sweep(1)}
        assert records["+"].heavy == 0
        assert records["-"].heavy == 1 == records["-"].target

    def test_n3_example_record(self):
        records = {r.sigma: r for r in sweep(3)}
        rec = records["-+-"]
        assert rec.heavy == 2 and rec.valid and rec.J == 4 and rec.K == 2

    def test_deterministic(self):
        assert list(sweep(4, seed=9)) == list(sweep(4, seed=9))

    def test_pattern_numbering(self):
        assert pattern_from_index(3, 0).to_string() == "+++"
        assert pattern_from_index(3, 1).to_string() == "-++"
        assert pattern_from_index(3, 6).to_string() == "+--"

    def test_subsample_deterministic_and_sorted(self):
        first = list(sweep(6, seed=3, exhaustive_cap=16))
        second = list(sweep(6, seed=3, exhaustive_cap=16))
        assert first == second
        assert 16 <= len(first) <= 64
        sigmas = [r.sigma for r in first]
        assert sigmas == [r.sigma for r in sorted(
            first, key=lambda r: [c == "-" for c in reversed(r.sigma)])]

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            list(sweep(25))
        assert list(sweep(0)) == []

    def test_summary_counts(self):
        records = list(sweep(3))
        summary = sweep_summary(records, 3)
        assert summary["patterns"] == 8
        assert summary["valid"] == 8 and summary["invalid"] == 0
        assert summary["ladder_used"] == 8
        assert summary["sampled"] is False

    def test_parallel_merge_matches_serial(self):
        # n=7 clears the worker threshold, so this drives the real pool
        serial = list(sweep(7))
        parallel = list(sweep(7, jobs=2))
        assert serial == parallel

    def test_construction_failure_yields_flagged_record(self, monkeypatch):
        import pohst.analysis as analysis
        from pohst.partition import SearchExhausted
        from pohst.signs import SignVector

        def refuse(sigma):
            raise SearchExhausted(sigma, "K")

        monkeypatch.setattr(analysis, "partitions_for", refuse)
        records = list(sweep(1))
        assert all(not r.valid and r.heavy == -1 for r in records)
        assert sweep_summary(records, 1)["invalid"] == 2

    def test_ladder_fraction_baseline(self):
        # pinned regression baseline: the case ladder covers every pattern
        # (measured exhaustively through n = 12); any drop is a regression
        for n in range(1, 10):
            summary = sweep_summary(list(sweep(n)), n)
            assert summary["ladder_used"] == summary["patterns"]
            assert summary["valid"] == summary["patterns"]


class TestMaximize:
    def test_single_negative_attains_two(self):
        result = maximize_f(SignVector.from_string("-"))
        assert result.best_value == 2.0
        assert result.gap == 0.0 and not result.exceeded_bound
        assert result.best_x == (-1.0,)

    def test_single_positive_hits_floor(self):
        cfg = MaximizeConfig(restarts=2, iterations=5)
        result = maximize_f(SignVector.from_string("+"), cfg)
        assert result.best_value == 1.0 - cfg.delta
        assert result.bound == 1.0

    def test_double_negative_approaches_two(self):
        cfg = MaximizeConfig(restarts=4, iterations=12, delta=1e-3)
        result = maximize_f(SignVector.from_string("--"), cfg)
        assert result.best_value >= 1.99
        assert result.best_value <= 2.0 * (1 + 1e-9)

    def test_deterministic_given_seed(self):
        cfg = MaximizeConfig(restarts=3, iterations=6, seed=42)
        a = maximize_f(SignVector.from_string("-+-"), cfg)
        b = maximize_f(SignVector.from_string("-+-"), cfg)
        assert a == b

    def test_never_exceeds_certified_bound(self):
        cfg = MaximizeConfig(restarts=3, iterations=8)
        for text in ("+", "-", "-+", "--", "-+-", "+-+-", "----"):
            sigma = SignVector.from_string(text)
            result = maximize_f(sigma, cfg)
            assert not result.exceeded_bound
            assert result.best_value <= (2.0 ** min_heavy_target(sigma)) * (1 + 1e-9)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            MaximizeConfig(delta=0.0)
        with pytest.raises(ValueError):
            MaximizeConfig(restarts=0)


class TestIdentity:
    def test_three_point_residual_is_exact_zero(self):
        assert identity_residual(RealVectorY((1.0, -2.0, 4.0))) == 0.0

    def test_examples(self):
        assert identity_residual(RealVectorY((1.0, 2.0, 4.0, 8.0))) <= 1e-12
        assert identity_residual(RealVectorY((1.0, -2.0, 4.0, -8.0, 16.0))) <= 1e-12
        assert iterated_identity_residual(RealVectorY((1.0, 2.0, 4.0, 8.0))) <= 1e-12
        assert iterated_identity_residual(
            RealVectorY((1.0, -2.0, 4.0, -8.0, 16.0))) <= 1e-12
        assert iterated_identity_residual(RealVectorY((1.0, -3.0, 9.0, -27.0))) <= 1e-12

    def test_minimum_sizes(self):
        with pytest.raises(ValueError):
            identity_residual(RealVectorY((1.0, 2.0)))
        with pytest.raises(ValueError):
            iterated_identity_residual(RealVectorY((1.0, 2.0, 4.0)))

    def test_random_residuals_small(self):
        rng = random.Random(31)
        for _ in range(100):
            y = random_y(rng, rng.randint(3, 8))
            assert identity_residual(y) <= 1e-9
        for _ in range(100):
            y = random_y(rng, rng.randint(4, 8))
            assert iterated_identity_residual(y) <= 1e-9

    def test_log_space_path_under_underflow(self):
        # tight ratios drive every factor small; the direct product of the
        # leave-two-out side underflows and the log path must take over
        rng = random.Random(7)
        mag, out = 1.0, []
        for _ in range(8):
            out.append(mag)
            mag *= 1.009
        y = RealVectorY(tuple(out))
        assert iterated_identity_residual(y) <= 1e-9


class TestSoundnessSample:
    def test_no_violations_smoke(self):
        report = bound_soundness_sample(4, 3000, seed=2)
        assert report.total_violations == 0
        assert report.group_violations == 0
        assert report.max_total_ratio <= 1.0 + 1e-12
        assert report.max_group_ratio <= 1.0 + 1e-12
        assert report.patterns == 16

    def test_single_entry_patterns(self):
        report = bound_soundness_sample(1, 2000, seed=3)
        assert report.total_violations == 0 and report.group_violations == 0
        assert report.patterns == 2
