import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toksat.discovery import accumulate_discovery, token_frequencies
from toksat.logmodel import (
    CheckpointGrid,
    assign_checkpoints,
    serialize_records,
    validate_record,
)
from toksat.simulate import (
    Splitmix64,
    SynthSpec,
    derive_seed,
    synth_candidate_log,
    synth_rank_sample,
    synth_trajectory,
)
from toksat.zipf import fit_zipf, rank_frequencies

GRID = CheckpointGrid()


class TestGenerator:
    def test_uniform_in_open_interval(self):
        rng = Splitmix64(42)
        values = [rng.uniform() for _ in range(10_000)]
        assert all(0.0 < v < 1.0 for v in values)
        assert 0.45 < sum(values) / len(values) < 0.55

    def test_streams_are_reproducible(self):
        a = Splitmix64(99)
        b = Splitmix64(99)
        assert [a.next_u64() for _ in range(100)] == [b.next_u64() for _ in range(100)]

    def test_clone_forks_identical_stream(self):
        a = Splitmix64(7)
        a.next_u64()
        b = a.clone()
        assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]

    def test_derive_seed_spreads_indices(self):
        seeds = {derive_seed(5, i) for i in range(10_000)}
        assert len(seeds) == 10_000

    def test_normal_moments(self):
        rng = Splitmix64(1234)
        values = [rng.normal() for _ in range(20_000)]
        mean = sum(values) / len(values)
        var = sum((v - mean) ** 2 for v in values) / len(values)
        assert abs(mean) < 0.02
        assert abs(var - 1.0) < 0.05


class TestTrajectory:
    def test_noiseless_anchor_at_120(self):
        spec = SynthSpec(seed=1, A=20000.0, k=0.02, B=500.0)
        traj = synth_trajectory(spec, GRID)
        assert traj.count_at(120.0) == 18686

    def test_noiseless_matches_model_everywhere(self):
        from toksat.satfit import eval_saturation

        spec = SynthSpec(seed=1, A=9000.0, k=0.035, B=120.0)
        traj = synth_trajectory(spec, GRID)
        for t, count in zip(traj.checkpoints, traj.counts):
            assert count == round(eval_saturation(spec.A, spec.k, spec.B, t))

    def test_same_seed_identical(self):
        spec = SynthSpec(seed=314)
        a = synth_trajectory(spec, GRID, noise_sigma=150.0)
        b = synth_trajectory(spec, GRID, noise_sigma=150.0)
        assert a == b

    def test_different_seeds_differ(self):
        a = synth_trajectory(SynthSpec(seed=1), GRID, noise_sigma=150.0)
        b = synth_trajectory(SynthSpec(seed=2), GRID, noise_sigma=150.0)
        assert a.counts != b.counts

    @given(st.integers(0, 2**32 - 1), st.floats(min_value=0.0, max_value=500.0))
    @settings(max_examples=40)
    def test_counts_always_non_decreasing(self, seed, sigma):
        traj = synth_trajectory(SynthSpec(seed=seed), GRID, noise_sigma=sigma)
        assert all(a <= b for a, b in zip(traj.counts, traj.counts[1:]))
        assert all(c >= 0 for c in traj.counts)

    def test_first_seen_consistent_with_counts(self):
        traj = synth_trajectory(SynthSpec(seed=8), GRID, noise_sigma=40.0)
        for t, count in zip(traj.checkpoints, traj.counts):
            assert sum(1 for w in traj.first_seen.values() if w <= t) == count


class TestRankSample:
    def test_high_alpha_concentrates_on_rank_one(self):
        spec = SynthSpec(seed=3, alpha=10.0, beta=0.0, vocab_size=100)
        table = synth_rank_sample(spec, 50_000)
        assert table.entries[1][0] >= 0.99 * 50_000

    def test_million_draws_recover_alpha(self):
        spec = SynthSpec(seed=12, alpha=1.7, beta=0.0, vocab_size=500)
        table = synth_rank_sample(spec, 1_000_000)
        fit = fit_zipf(rank_frequencies(table))
        assert fit.alpha == pytest.approx(1.7, abs=0.05)

    def test_same_seed_identical_tables(self):
        spec = SynthSpec(seed=77)
        assert synth_rank_sample(spec, 10_000) == synth_rank_sample(spec, 10_000)

    def test_draw_total_preserved(self):
        table = synth_rank_sample(SynthSpec(seed=5), 12_345)
        assert table.total_frequency() == 12_345

    def test_tiny_vocab_rejected(self):
        with pytest.raises(ValueError):
            synth_rank_sample(SynthSpec(seed=1, vocab_size=1, K=1), 10)


class TestCandidateLog:
    def test_k_equal_vocab_saturates_immediately(self):
        spec = SynthSpec(seed=9, vocab_size=30, K=30, steps_per_utterance=2,
                         utterance_seconds=60.0)
        log = synth_candidate_log(spec, total_minutes=120.0)
        windows = assign_checkpoints(log.records, GRID)
        traj = accumulate_discovery(log.records, windows)
        assert traj.counts == (30,) * len(traj.checkpoints)

    def test_pipeline_counts_match_generator_schedule(self):
        spec = SynthSpec(seed=21, vocab_size=400, K=25, steps_per_utterance=3,
                         utterance_seconds=45.0)
        log = synth_candidate_log(spec, total_minutes=130.0)
        windows = assign_checkpoints(log.records, GRID)
        traj = accumulate_discovery(log.records, windows)
        assert list(traj.counts) == log.expected_counts(GRID)

    def test_pipeline_frequencies_match_generator_schedule(self):
        spec = SynthSpec(seed=22, vocab_size=200, K=12, steps_per_utterance=2,
                         utterance_seconds=90.0)
        log = synth_candidate_log(spec, total_minutes=60.0)
        windows = assign_checkpoints(log.records, GRID)
        table = token_frequencies(log.records, 60.0, windows)
        expected = log.expected_frequencies(60.0)
        assert {tid: f for tid, (f, _) in table.entries.items()} == expected

    def test_same_seed_byte_identical_serialization(self):
        spec = SynthSpec(seed=40, vocab_size=80, K=10)
        a = synth_candidate_log(spec, total_minutes=30.0)
        b = synth_candidate_log(spec, total_minutes=30.0)
        assert serialize_records(a.records) == serialize_records(b.records)

    def test_records_pass_validation_with_spec_k(self):
        spec = SynthSpec(seed=33, vocab_size=120, K=17, steps_per_utterance=3)
        log = synth_candidate_log(spec, total_minutes=20.0)
        for rec in log.records:
            assert validate_record(rec, expected_k=spec.K) == []

    def test_covers_requested_minutes(self):
        spec = SynthSpec(seed=2, utterance_seconds=47.0)
        log = synth_candidate_log(spec, total_minutes=33.0)
        total_s = sum(r.duration_s for r in log.records)
        assert total_s >= 33.0 * 60.0
        assert total_s - 47.0 < 33.0 * 60.0

    @given(st.integers(0, 2**16))
    @settings(max_examples=20, deadline=None)
    def test_generation_order_isolation(self, seed):
        # Utterance substreams are independent: a log of the first N
        # utterances is a prefix of a longer log with the same seed.
        spec = SynthSpec(seed=seed, vocab_size=60, K=6, steps_per_utterance=1,
                         utterance_seconds=120.0)
        short = synth_candidate_log(spec, total_minutes=10.0)
        long = synth_candidate_log(spec, total_minutes=20.0)
        assert long.records[: len(short.records)] == short.records
