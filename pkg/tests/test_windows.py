"""Spanning distances, the sliding window, and the vectorised batch path."""

import numpy as np
import pytest

from gsrdetect.windows import (
    ObservationWindow,
    sliding_spanning_stats,
    spanning_distance,
)

from oracles import naive_decomposition, pairwise_spanning


def test_spanning_distance_three_points():
    # pairs (0,1), (1,2), (0,2): 1 + 1 + 4
    assert spanning_distance([[0.0], [1.0], [2.0]]) == 6.0


def test_spanning_distance_four_points():
    # all six pairs of {0, 1, 3, 4}: 1 + 9 + 16 + 4 + 9 + 1
    assert spanning_distance([[0.0], [1.0], [3.0], [4.0]]) == 40.0


def test_spanning_distance_identical_points_is_exactly_zero():
    pts = np.full((7, 3), 1.0 / 3.0)
    assert spanning_distance(pts) == 0.0


def test_spanning_distance_matches_enumeration_on_random_blocks():
    rng = np.random.default_rng(0)
    for _ in range(25):
        m = rng.integers(2, 12)
        d = rng.integers(1, 6)
        pts = rng.normal(size=(m, d)) * 3 + rng.normal(size=d)
        expected = pairwise_spanning(pts)
        assert spanning_distance(pts) == pytest.approx(expected, rel=1e-9)


def test_spanning_distance_rejects_bad_input():
    with pytest.raises(ValueError):
        spanning_distance([[1.0]])
    with pytest.raises(ValueError):
        spanning_distance([[1.0, 2.0], [1.0]])
    with pytest.raises(ValueError):
        spanning_distance([[np.nan], [1.0]])


def test_decompose_example_window():
    win = ObservationWindow.from_observations([[0.0], [1.0], [3.0], [4.0]])
    dec = win.decompose()
    assert dec.w_full == pytest.approx(40.0)
    assert dec.w_left == pytest.approx(1.0)
    assert dec.w_right == pytest.approx(1.0)
    assert dec.w_btw == pytest.approx(38.0)
    assert dec.w_rem == pytest.approx(36.0)


def test_decompose_identical_observations_gives_zeros():
    win = ObservationWindow.from_observations(np.full((8, 2), 0.7))
    dec = win.decompose()
    assert (dec.w_full, dec.w_left, dec.w_right, dec.w_rem, dec.w_btw) == (0, 0, 0, 0, 0)


def test_decompose_identical_halves_symmetric():
    win = ObservationWindow.from_observations([[0.0], [1.0], [0.0], [1.0]])
    dec = win.decompose()
    assert dec.w_left == dec.w_right == pytest.approx(1.0)


def test_decompose_requires_warm_window():
    win = ObservationWindow(2, 1)
    win.slide([1.0])
    with pytest.raises(ValueError, match="not warm"):
        win.decompose()


def test_slide_example():
    win = ObservationWindow.from_observations([[0.0], [1.0], [3.0], [4.0]])
    win.slide([5.0])
    assert win.left_half().ravel().tolist() == [1.0, 3.0]
    assert win.right_half().ravel().tolist() == [4.0, 5.0]
    dec = win.decompose()
    assert dec.w_left == pytest.approx(4.0)
    assert dec.w_right == pytest.approx(1.0)


def test_slide_constant_stream_stays_zero():
    win = ObservationWindow(3, 2)
    for _ in range(25):
        win.slide([2.5, -1.0])
        if win.is_warm:
            dec = win.decompose()
            assert dec.w_full == 0.0 and dec.w_btw == 0.0


def test_slide_full_replacement_equals_fresh_window():
    rng = np.random.default_rng(1)
    n, d = 4, 3
    win = ObservationWindow.from_observations(rng.normal(size=(2 * n, d)))
    fresh_data = rng.normal(size=(2 * n, d))
    for row in fresh_data:
        win.slide(row)
    fresh = ObservationWindow.from_observations(fresh_data)
    a, b = win.decompose(), fresh.decompose()
    assert a.w_full == pytest.approx(b.w_full, rel=1e-9)
    assert a.w_left == pytest.approx(b.w_left, rel=1e-9)
    assert a.w_right == pytest.approx(b.w_right, rel=1e-9)


def test_slide_rejects_dimension_mismatch_and_nonfinite():
    win = ObservationWindow(2, 2)
    with pytest.raises(ValueError, match="dimension"):
        win.slide([1.0])
    with pytest.raises(ValueError, match="non-finite"):
        win.slide([1.0, np.inf])


def test_incremental_matches_enumeration_over_many_slides():
    rng = np.random.default_rng(2)
    n, d = 5, 3
    data = rng.normal(size=(2 * n, d))
    win = ObservationWindow.from_observations(data)
    history = list(data)
    for _ in range(10 * 2 * n):
        y = rng.normal(size=d) * rng.uniform(0.5, 2.0) + rng.normal()
        win.slide(y)
        history.append(y)
        current = np.asarray(history[-2 * n :])
        expected = naive_decomposition(current)
        dec = win.decompose()
        scale = max(expected["w_full"], 1.0)
        assert abs(dec.w_full - expected["w_full"]) <= 1e-9 * scale
        assert abs(dec.w_left - expected["w_left"]) <= 1e-9 * scale
        assert abs(dec.w_right - expected["w_right"]) <= 1e-9 * scale
        assert abs(dec.w_btw - expected["w_btw"]) <= 1e-9 * scale
        assert abs(dec.w_rem - expected["w_rem"]) <= 1e-9 * scale


def test_additivity_and_residual_identity_on_random_windows():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(2, 8))
        d = int(rng.integers(1, 5))
        win = ObservationWindow.from_observations(rng.normal(size=(2 * n, d)))
        dec = win.decompose()
        assert dec.w_full == pytest.approx(dec.w_left + dec.w_right + dec.w_btw, rel=1e-9)
        assert dec.w_rem == pytest.approx(
            dec.w_full - 2 * (dec.w_left + dec.w_right), rel=1e-9, abs=1e-12
        )
        assert dec.w_full >= 0 and dec.w_left >= 0 and dec.w_right >= 0 and dec.w_btw >= 0


def test_running_sums_survive_long_streams():
    # drift control: after many slides the incremental stats still match a rebuild
    rng = np.random.default_rng(4)
    n, d = 6, 2
    win = ObservationWindow(n, d)
    history = []
    for _ in range(997):
        y = rng.normal(size=d) + 5.0
        win.slide(y)
        history.append(y)
    rebuilt = ObservationWindow.from_observations(np.asarray(history[-2 * n :]))
    a, b = win.decompose(), rebuilt.decompose()
    assert a.w_full == pytest.approx(b.w_full, rel=1e-9)
    assert a.w_left == pytest.approx(b.w_left, rel=1e-9)
    assert a.w_right == pytest.approx(b.w_right, rel=1e-9)


def test_sliding_spanning_stats_matches_window_path():
    rng = np.random.default_rng(5)
    n, d, t_len = 4, 3, 40
    stream = rng.normal(size=(t_len, d))
    stats = sliding_spanning_stats(stream, n)
    assert stats.clocks[0] == 2 * n and stats.clocks[-1] == t_len

    win = ObservationWindow(n, d)
    for t, row in enumerate(stream, start=1):
        win.slide(row)
        if t >= 2 * n:
            i = t - 2 * n
            dec = win.decompose()
            assert stats.w_left[i] == pytest.approx(dec.w_left, rel=1e-9, abs=1e-12)
            assert stats.w_right[i] == pytest.approx(dec.w_right, rel=1e-9, abs=1e-12)
            assert stats.w_full[i] == pytest.approx(dec.w_full, rel=1e-9, abs=1e-12)


def test_sliding_spanning_stats_rejects_short_streams():
    with pytest.raises(ValueError, match="never warms"):
        sliding_spanning_stats(np.zeros((5, 2)), 3)
