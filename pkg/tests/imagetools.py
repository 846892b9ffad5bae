"""Synthetic image fixtures for quality-filter tests.

Built directly as pixel buffers (no renderer involved) so the filter tests
stay hermetic and the expected content fractions can be counted by hand.
"""

from __future__ import annotations

import io
import random

from chartforge.quality import ImageBuffer


def solid(width: int, height: int, color=(255, 255, 255)) -> ImageBuffer:
    return ImageBuffer(width, height, bytes(color) * (width * height))


def with_rects(width: int, height: int, rects, background=(255, 255, 255)) -> ImageBuffer:
    """rects: list of (x0, y0, x1, y1, (r, g, b)) painted over the background."""
    px = bytearray(bytes(background) * (width * height))
    for x0, y0, x1, y1, color in rects:
        for y in range(y0, y1):
            base = y * width * 3
            for x in range(x0, x1):
                px[base + 3 * x : base + 3 * x + 3] = bytes(color)
    return ImageBuffer(width, height, bytes(px))


def dense_chart(width: int = 512, height: int = 512, shift: int = 0) -> ImageBuffer:
    """Three solid colored rectangles covering ~30% of a white canvas."""
    w3 = width // 8
    rects = [
        (40 + shift, 150, 40 + shift + w3, 480, (84, 112, 198)),
        (200 + shift, 250, 200 + shift + w3, 480, (238, 102, 102)),
        (360 + shift, 100, 360 + shift + w3, 480, (145, 204, 117)),
    ]
    return with_rects(width, height, rects)


def blank_variants() -> list[ImageBuffer]:
    """Blank fixtures: white and faint near-white tints (all non-content)."""
    return [
        solid(512, 512),
        solid(512, 512, (250, 250, 252)),
        solid(512, 512, (240, 240, 240)),
        solid(512, 512, (255, 252, 250)),
        solid(512, 512, (246, 248, 246)),
    ]


def scattered_noise(seed: int, width: int = 512, height: int = 512, cells: int = 20) -> ImageBuffer:
    """White canvas with ~0.5% isolated dark dots (aligned to the 64-grid).

    Dots are 8x8 blocks on distinct, non-adjacent downsample cells, so after
    the 512 -> 64 reduction they stay dark, isolated single pixels.
    """
    rng = random.Random(seed)
    grid = width // 64  # cell side in source pixels
    positions = set()
    while len(positions) < cells:
        cx, cy = rng.randrange(2, 62), rng.randrange(2, 62)
        if all(abs(cx - px) > 1 or abs(cy - py) > 1 for px, py in positions):
            positions.add((cx, cy))
    rects = [
        (cx * grid, cy * grid, (cx + 1) * grid, (cy + 1) * grid, (20, 20, 20))
        for cx, cy in sorted(positions)
    ]
    return with_rects(width, height, rects)


def to_png_bytes(img: ImageBuffer) -> bytes:
    from PIL import Image

    im = Image.frombytes("RGB", (img.width, img.height), img.pixels)
    buf = io.BytesIO()
    im.save(buf, format="PNG")
    return buf.getvalue()


def write_png(img: ImageBuffer, path) -> None:
    with open(path, "wb") as fh:
        fh.write(to_png_bytes(img))
