#!/usr/bin/env python3
"""Benchmark the compiled image kernels against the pure-Python fallback.

    PYTHONPATH=src python3 benchmarks/bench_kernels.py [--images N] [--side S]

Times the three hot operations of the quality filter (box downsample, HSV
content masking, largest connected component) plus the end-to-end
assess_quality path on synthetic chart-like images.
"""

from __future__ import annotations

import argparse
import random
import time

from chartforge.quality import FilterParams, ImageBuffer, fallback
from chartforge.quality import kernels as active

try:
    from chartforge.quality import _imagekernels as compiled
except ImportError:
    compiled = None


def synth_image(seed: int, side: int) -> bytes:
    rng = random.Random(seed)
    px = bytearray(b"\xff" * (side * side * 3))
    for _ in range(6):
        x0, y0 = rng.randrange(side - 40), rng.randrange(side - 40)
        w, h = rng.randint(20, side // 3), rng.randint(20, side // 3)
        color = bytes((rng.randrange(256), rng.randrange(256), rng.randrange(256)))
        for y in range(y0, min(side, y0 + h)):
            base = y * side * 3
            for x in range(x0, min(side, x0 + w)):
                px[base + 3 * x : base + 3 * x + 3] = color
    return bytes(px)


def bench(label: str, fn, repeats: int) -> float:
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    elapsed = (time.perf_counter() - start) / repeats
    print(f"  {label:<28} {elapsed * 1000:9.2f} ms/image")
    return elapsed


def run(images: int, side: int):
    params = FilterParams()
    bufs = [synth_image(i, side) for i in range(images)]
    backends = [("python", fallback)]
    if compiled is not None:
        backends.insert(0, ("cython", compiled))
    else:
        print("compiled extension not built; benchmarking fallback only")

    print(f"\n-- box_downsample {side}x{side} -> 64x64 ({images} images) --")
    times = {}
    for name, mod in backends:
        times[name] = bench(name, lambda m=mod: [m.box_downsample(b, side, side, 64) for b in bufs], 1) / images

    small = [active.box_downsample(b, side, side, 64) for b in bufs]
    print(f"\n-- content_stats on 64x64 ({images} images) --")
    for name, mod in backends:
        bench(name, lambda m=mod: [m.content_stats(b, params.s_thresh, params.v_thresh) for b in small], 3)

    masks = [active.content_stats(b, params.s_thresh, params.v_thresh)[0] for b in small]
    print(f"\n-- largest_component on 64x64 ({images} images) --")
    for name, mod in backends:
        bench(name, lambda m=mod: [m.largest_component(b, 64, 64) for b in masks], 3)

    if compiled is not None:
        speedup = times["python"] / times["cython"]
        print(f"\ndownsample speedup (cython over python): {speedup:.1f}x")

    from chartforge.quality import assess_quality

    print(f"\n-- assess_quality end-to-end (active backend: {active.BACKEND}) --")
    imgs = [ImageBuffer(side, side, b) for b in bufs]
    bench("assess_quality", lambda: [assess_quality(im, params) for im in imgs], 1)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--images", type=int, default=8)
    ap.add_argument("--side", type=int, default=512)
    args = ap.parse_args()
    run(args.images, args.side)
