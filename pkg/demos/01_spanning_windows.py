"""Spanning distances and sliding windows.

The building block of every statistic in this package is the spanning
distance of a block of observations: the sum of squared Euclidean distances
over all unordered pairs.  A scanning window holds 2n observations; its
decomposition into full/left/right/between/residual parts is maintained
incrementally, so sliding costs O(d) per observation instead of O(n^2 d).
"""

import numpy as np

from gsrdetect import ObservationWindow, spanning_distance

# Tiny example in one dimension: points {0, 1, 3, 4}.
points = [[0.0], [1.0], [3.0], [4.0]]
print("spanning distance of {0, 1, 3, 4}:", spanning_distance(points))
print("  (pairs: 1 + 9 + 16 + 4 + 9 + 1 = 40)")

# The same four points as a warm window of half-length n=2: the left half
# {0, 1} precedes the candidate change time, the right half {3, 4} follows it.
window = ObservationWindow.from_observations(points)
dec = window.decompose()
print("\ndecomposition of the window [{0,1} | {3,4}]:")
print(f"  w_full  = {dec.w_full:6.1f}   (all 2n points)")
print(f"  w_left  = {dec.w_left:6.1f}   (older half)")
print(f"  w_right = {dec.w_right:6.1f}   (newer half)")
print(f"  w_btw   = {dec.w_btw:6.1f}   (cross pairs, = w_full - w_left - w_right)")
print(f"  w_rem   = {dec.w_rem:6.1f}   (residual,   = w_full - 2(w_left + w_right))")

# Slide one observation: 0 is evicted, 3 migrates into the older half, 5 enters.
window.slide([5.0])
print("\nafter sliding in 5.0:")
print("  left half :", window.left_half().ravel())
print("  right half:", window.right_half().ravel())
print("  decomposition:", window.decompose())

# On a longer random stream the incremental path tracks an exact rebuild.
rng = np.random.default_rng(0)
stream = rng.normal(size=(500, 3))
win = ObservationWindow(half_length=16, dim=3)
for row in stream:
    win.slide(row)
rebuilt = ObservationWindow.from_observations(stream[-32:])
a, b = win.decompose(), rebuilt.decompose()
print("\nafter 500 slides (n=16, d=3):")
print(f"  incremental w_full = {a.w_full:.12f}")
print(f"  rebuilt     w_full = {b.w_full:.12f}")
print(f"  relative gap       = {abs(a.w_full - b.w_full) / b.w_full:.2e}")
