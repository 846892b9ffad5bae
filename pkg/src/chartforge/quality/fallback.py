"""Pure-Python reference implementations of the image kernels.

Selected at import time when the compiled extension is unavailable. Orders
of magnitude slower on large images (see benchmarks/bench_kernels.py) but
byte-for-byte equivalent, which the test suite asserts.
"""

from __future__ import annotations


def box_downsample(pixels: bytes, width: int, height: int, target: int) -> bytes:
    out = bytearray(target * target * 3)
    for oy in range(target):
        y0 = (oy * height) // target
        y1 = ((oy + 1) * height) // target
        y0 = min(y0, height - 1)
        y1 = max(y1, y0 + 1)
        for ox in range(target):
            x0 = (ox * width) // target
            x1 = ((ox + 1) * width) // target
            x0 = min(x0, width - 1)
            x1 = max(x1, x0 + 1)
            rs = gs = bs = 0
            for y in range(y0, y1):
                base = y * width * 3
                for x in range(x0, x1):
                    rs += pixels[base + 3 * x]
                    gs += pixels[base + 3 * x + 1]
                    bs += pixels[base + 3 * x + 2]
            count = (y1 - y0) * (x1 - x0)
            o = (oy * target + ox) * 3
            # round-half-up without float error: floor(sum/count + 1/2)
            out[o] = (2 * rs + count) // (2 * count)
            out[o + 1] = (2 * gs + count) // (2 * count)
            out[o + 2] = (2 * bs + count) // (2 * count)
    return bytes(out)


def content_stats(pixels: bytes, s_thresh: float, v_thresh: float):
    n = len(pixels) // 3
    mask = bytearray(n)
    content = white = 0
    sat_sum = val_sum = 0.0
    for i in range(n):
        r = pixels[3 * i]
        g = pixels[3 * i + 1]
        b = pixels[3 * i + 2]
        mx = max(r, g, b)
        mn = min(r, g, b)
        v = mx / 255.0
        s = 0.0 if mx == 0 else (mx - mn) / mx
        sat_sum += s
        val_sum += v
        if s > s_thresh or v < v_thresh:
            mask[i] = 1
            content += 1
        else:
            white += 1
    return bytes(mask), content, sat_sum, val_sum, white


def largest_component(mask: bytes, width: int, height: int) -> int:
    seen = bytearray(width * height)
    best = 0
    for start in range(width * height):
        if not mask[start] or seen[start]:
            continue
        seen[start] = 1
        stack = [start]
        size = 0
        while stack:
            cur = stack.pop()
            size += 1
            x, y = cur % width, cur // width
            for dy in (-1, 0, 1):
                ny = y + dy
                if ny < 0 or ny >= height:
                    continue
                for dx in (-1, 0, 1):
                    if dx == 0 and dy == 0:
                        continue
                    nx = x + dx
                    if nx < 0 or nx >= width:
                        continue
                    idx = ny * width + nx
                    if mask[idx] and not seen[idx]:
                        seen[idx] = 1
                        stack.append(idx)
        best = max(best, size)
    return best
