#!/usr/bin/env python3
"""Time the two-scan transform on cubic images of increasing size.

Usage: python scripts/benchmark_two_scan.py [size ...]
"""

import sys
import time

import numpy as np

sys.path.insert(0, "src")

from latticedt.dt_engine import GridImage, chamfer_two_scan
from latticedt.lattice import cubic_lattice
from latticedt.presets import preset_mask


def best_time(mask, size, reps=5):
    fg = np.ones((size,) * 3, dtype=bool)
    fg[(size // 2,) * 3] = False
    img = GridImage.from_foreground(cubic_lattice(), (0, 0, 0), fg)
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        chamfer_two_scan(img, mask, unsafe=True)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    sizes = [int(a) for a in sys.argv[1:]] or [32, 64, 128, 192]
    mask = preset_mask("z3-3", (3, 4, 5))
    prev = None
    print(f"{'size':>6} {'points':>12} {'best (s)':>10} "
          f"{'ns/point':>10} {'x prev':>7}")
    for size in sizes:
        t = best_time(mask, size)
        pts = size ** 3
        ratio = "" if prev is None else f"{t / prev:6.2f}x"
        print(f"{size:>6} {pts:>12} {t:>10.4f} {t / pts * 1e9:>10.0f} "
              f"{ratio:>7}")
        prev = t


if __name__ == "__main__":
    main()
