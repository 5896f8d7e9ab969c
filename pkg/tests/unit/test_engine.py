# Copyright (c) 2025 Walter M. Rafelsberger
# Licensed under the MIT License. See LICENSE file for details.

"""Tests for the sliding-window stream engine."""

import logging

import numpy as np
import pytest

from cumstream.exceptions import ConfigurationError, DegenerateDataError, ShapeError
from cumstream.statistics import (
    DataCostMeter,
    cumulant_series,
    moment_series,
    moms2cums,
    nu,
    window_report,
)
from cumstream.stream import StreamConfig, prime, resync, run, step


def relative_gap(first, second) -> float:
    return max(a.axpy(b, -1.0).knorm(2) / max(b.knorm(2), 1e-300)
               for a, b in zip(first.tensors, second.tensors))


def batches_of(stream, t, t_up):
    yield stream[:t]
    for start in range(t, stream.shape[0], t_up):
        yield stream[start:start + t_up]


class TestStreamConfig:
    @pytest.mark.parametrize("kwargs", [
        dict(n=2, d=1, t=10, t_up=2, b=1),
        dict(n=2, d=3, t=10, t_up=11, b=1),
        dict(n=2, d=3, t=10, t_up=0, b=1),
        dict(n=2, d=3, t=10, t_up=2, b=3),
        dict(n=2, d=3, t=10, t_up=2, b=0),
        dict(n=2, d=3, t=10, t_up=2, b=1, workers=0),
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ConfigurationError):
            StreamConfig(**kwargs)

    def test_update_equal_to_window_is_allowed(self):
        assert StreamConfig(n=1, d=2, t=4, t_up=4, b=1).t_up == 4


class TestPrime:
    def test_moments_match_window(self, small_batch):
        config = StreamConfig(n=4, d=4, t=200, t_up=10, b=3)
        state = prime(config, small_batch)
        assert state.window_index == 1
        fresh = moment_series(state.buffer.contents(), 4, 3)
        for a, b in zip(state.moments.tensors, fresh.tensors):
            np.testing.assert_array_equal(a.to_flat(), b.to_flat())

    def test_toy_stream(self, toy_stream):
        state = prime(StreamConfig(n=1, d=2, t=4, t_up=2, b=1), toy_stream[:4])
        assert state.moments[1].get((0,)) == 2.5
        assert state.moments[2].get((0, 0)) == 7.5
        assert state.moments.window_len == 4

    def test_wrong_row_count(self, toy_stream):
        with pytest.raises(ShapeError):
            prime(StreamConfig(n=1, d=2, t=4, t_up=2, b=1), toy_stream[:5])

    def test_logs_priming(self, small_batch, caplog):
        with caplog.at_level(logging.INFO, logger="cumstream.stream.engine"):
            prime(StreamConfig(n=4, d=3, t=200, t_up=10, b=2), small_batch)
        assert "Stream primed" in caplog.text


class TestStep:
    def test_toy_window_after_one_step(self, toy_stream):
        state = prime(StreamConfig(n=1, d=2, t=4, t_up=2, b=1), toy_stream[:4])
        state, cumulants = step(state, toy_stream[4:6])
        np.testing.assert_array_equal(state.buffer.contents(), toy_stream[2:6])
        assert state.window_index == 2
        assert cumulants[1].get((0,)) == pytest.approx(4.5)
        assert cumulants[2].get((0, 0)) == pytest.approx(1.25)

    def test_reinserting_outgoing_rows_changes_nothing(self, small_batch):
        config = StreamConfig(n=4, d=4, t=200, t_up=10, b=2)
        state = prime(config, small_batch)
        before = moms2cums(state.moments)
        state, after = step(state, small_batch[:10])
        assert relative_gap(after, before) <= 1e-12

    def test_no_original_rows_after_full_turnover(self, rng):
        t, t_up = 200, 10
        stream = rng.standard_normal((t + 20 * t_up, 3)) + rng.standard_exponential((t + 20 * t_up, 3))
        state = prime(StreamConfig(n=3, d=4, t=t, t_up=t_up, b=2), stream[:t])
        for k in range(20):
            state, cumulants = step(state, stream[t + k * t_up:t + (k + 1) * t_up])
        assert relative_gap(cumulants, cumulant_series(stream[t:], 4, 2)) <= 1e-8

    def test_hundred_steps_keep_moments_coherent(self, rng):
        t, t_up = 200, 10
        stream = rng.standard_normal((t + 100 * t_up, 4)) ** 2
        config = StreamConfig(n=4, d=4, t=t, t_up=t_up, b=2)
        state = prime(config, stream[:t])
        for k in range(100):
            state, cumulants = step(state, stream[t + k * t_up:t + (k + 1) * t_up])
        window = stream[100 * t_up:100 * t_up + t]
        np.testing.assert_array_equal(state.buffer.contents(), window)
        assert relative_gap(state.moments, moment_series(window, 4, 2)) <= 1e-8
        assert relative_gap(cumulants, cumulant_series(window, 4, 2)) <= 1e-8

    def test_data_cost_per_step(self, rng):
        meter = DataCostMeter()
        config = StreamConfig(n=3, d=3, t=300, t_up=15, b=2)
        state = prime(config, rng.standard_normal((300, 3)), meter)
        assert meter.rows_read == 300
        for _ in range(3):
            before = meter.rows_read
            state, _ = step(state, rng.standard_normal((15, 3)))
            assert meter.rows_read - before == 2 * 15

    def test_turnover_to_constant_rows_is_degenerate(self, rng):
        t, t_up = 100, 10
        state = prime(StreamConfig(n=3, d=4, t=t, t_up=t_up, b=2), rng.standard_normal((t, 3)))
        for _ in range(t // t_up):
            state, cumulants = step(state, np.full((t_up, 3), 0.3))
        with pytest.raises(DegenerateDataError):
            nu(cumulants, 4)
        with pytest.raises(DegenerateDataError):
            window_report(state.window_index, cumulants)

    def test_wrong_batch_length(self, small_batch):
        state = prime(StreamConfig(n=4, d=3, t=200, t_up=10, b=2), small_batch)
        with pytest.raises(ShapeError):
            step(state, small_batch[:9])
        assert state.window_index == 1

    def test_timings_are_recorded(self, small_batch):
        state = prime(StreamConfig(n=4, d=3, t=200, t_up=10, b=2), small_batch)
        state, _ = step(state, small_batch[:10])
        timings = state.last_timings
        assert timings.update >= 0 and timings.moms2cums >= 0
        assert timings.total >= timings.update


class TestResync:
    def test_periodic_resync_matches_fresh_moments(self, rng, caplog):
        stream = rng.standard_normal((100 + 6 * 5, 2))
        config = StreamConfig(n=2, d=3, t=100, t_up=5, b=1, resync_every=3)
        state = prime(config, stream[:100])
        with caplog.at_level(logging.INFO, logger="cumstream.stream.engine"):
            for k in range(3):
                state, _ = step(state, stream[100 + 5 * k:105 + 5 * k])
        assert "resynchronised" in caplog.text
        assert state.steps_since_resync == 0
        fresh = moment_series(state.buffer.contents(), 3, 1)
        for a, b in zip(state.moments.tensors, fresh.tensors):
            np.testing.assert_array_equal(a.to_flat(), b.to_flat())

    def test_resync_does_not_count_rows(self, small_batch):
        meter = DataCostMeter()
        state = prime(StreamConfig(n=4, d=2, t=200, t_up=10, b=2), small_batch, meter)
        resync(state)
        assert meter.rows_read == 200


class TestRun:
    def test_prime_only_source_emits_one_report(self, small_batch):
        reports = []
        run(StreamConfig(n=4, d=4, t=200, t_up=10, b=2), [small_batch], reports.append)
        assert [report.window for report in reports] == [1]

    def test_reports_follow_the_stream(self, rng):
        t, t_up = 60, 20
        stream = rng.standard_normal((t + 3 * t_up, 2)) + rng.standard_exponential((t + 3 * t_up, 2))
        reports = []
        run(StreamConfig(n=2, d=4, t=t, t_up=t_up, b=1), batches_of(stream, t, t_up), reports.append)
        assert [report.window for report in reports] == [1, 2, 3, 4]
        for w, report in enumerate(reports, start=1):
            window = stream[(w - 1) * t_up:(w - 1) * t_up + t]
            expected = window_report(w, cumulant_series(window, 4, 1))
            assert report.nu[4] == pytest.approx(expected.nu[4], rel=1e-8)
            assert report.norm_c2 == pytest.approx(expected.norm_c2, rel=1e-8)

    def test_partial_final_batch_is_discarded(self, rng, caplog):
        stream = rng.standard_normal((60 + 20 + 7, 2))
        reports = []
        with caplog.at_level(logging.WARNING, logger="cumstream.stream.engine"):
            run(StreamConfig(n=2, d=3, t=60, t_up=20, b=1), batches_of(stream, 60, 20),
                reports.append)
        assert len(reports) == 2
        assert "partial final batch of 7 rows" in caplog.text

    def test_short_batch_mid_stream_is_an_error(self, rng):
        stream = rng.standard_normal((60, 2))
        source = [stream, stream[:5], stream[:20]]
        with pytest.raises(ShapeError):
            run(StreamConfig(n=2, d=3, t=60, t_up=20, b=1), source, lambda report: None)

    def test_empty_source(self):
        with pytest.raises(ShapeError):
            run(StreamConfig(n=2, d=3, t=60, t_up=20, b=1), [], lambda report: None)

    def test_tap_sees_every_window(self, small_batch):
        seen = []
        run(StreamConfig(n=4, d=3, t=200, t_up=10, b=2),
            [small_batch, small_batch[:10], small_batch[10:20]], lambda report: None,
            tap=lambda state, cumulants: seen.append((state.window_index, cumulants.max_order)))
        assert seen == [(1, 3), (2, 3), (3, 3)]

    def test_deterministic_reports(self, rng):
        stream = rng.standard_normal((100 + 4 * 25, 3))
        outputs = []
        for _ in range(2):
            reports = []
            run(StreamConfig(n=3, d=4, t=100, t_up=25, b=2, workers=2),
                batches_of(stream, 100, 25), reports.append)
            outputs.append([report.to_json() for report in reports])
        assert outputs[0] == outputs[1]
