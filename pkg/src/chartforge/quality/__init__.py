"""Pixel-level image quality control.

Images are converted to HSV saturation/value features, downsampled with a
box filter, and rejected when content is too sparse (blank) or scattered
into dust on a white background (noise). Thresholds live in
``FilterParams`` because the right values depend on the rendering style;
the defaults are tuned for white-background chart renders.
"""

from __future__ import annotations

import io
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .kernels import BACKEND, box_downsample, content_stats, largest_component

__all__ = [
    "BACKEND",
    "FilterParams",
    "FilterReport",
    "ImageBuffer",
    "QualityReport",
    "assess_quality",
    "downsample",
    "filter_corpus",
    "load_image",
    "rgb_to_hsv",
]


@dataclass(frozen=True)
class ImageBuffer:
    """Row-major 8-bit RGB pixel buffer."""

    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("image dimensions must be positive")
        if len(self.pixels) != self.width * self.height * 3:
            raise ValueError(
                f"pixel buffer is {len(self.pixels)} bytes, expected "
                f"{self.width * self.height * 3} for {self.width}x{self.height} RGB"
            )


@dataclass(frozen=True)
class FilterParams:
    """Thresholds for the content/blank/noise decision.

    d_max sits above the dispersion that legitimately sparse charts reach
    (thin lines, scatter dots, box whiskers measure ~0.6-0.8 after
    downsampling) and below true scattered dust (~0.95).
    """

    s_thresh: float = 0.08
    v_thresh: float = 0.85
    f_min: float = 0.02
    f_noise: float = 0.05
    d_max: float = 0.85
    downsample_side: int = 64

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class QualityReport:
    verdict: str  # accept | reject_blank | reject_noise
    content_fraction: float
    dispersion: float
    mean_saturation: float
    mean_value: float
    white_fraction: float

    def to_dict(self) -> dict:
        return asdict(self)


def rgb_to_hsv(r: int, g: int, b: int) -> tuple[float, float, float]:
    """Standard 8-bit RGB -> (hue degrees [0, 360), s [0, 1], v [0, 1]).

    Hue is reported as 0 when saturation is 0.
    """
    mx = max(r, g, b)
    mn = min(r, g, b)
    v = mx / 255.0
    s = 0.0 if mx == 0 else (mx - mn) / mx
    if mx == mn:
        h = 0.0
    elif mx == r:
        h = (60.0 * (g - b) / (mx - mn)) % 360.0
    elif mx == g:
        h = 60.0 * (2.0 + (b - r) / (mx - mn))
    else:
        h = 60.0 * (4.0 + (r - g) / (mx - mn))
    return h, s, v


def downsample(img: ImageBuffer, target: int) -> ImageBuffer:
    """Box-filter mean resample to target x target (round-half-up channels)."""
    if target < 1:
        raise ValueError("target side must be >= 1")
    if img.width == target and img.height == target:
        return img
    return ImageBuffer(target, target, box_downsample(img.pixels, img.width, img.height, target))


def assess_quality(img: ImageBuffer, params: FilterParams = FilterParams()) -> QualityReport:
    """Classify one image as accept / reject_blank / reject_noise.

    Works on the downsampled image: a pixel is content iff its saturation
    exceeds ``s_thresh`` or its value falls below ``v_thresh``. Noise wins
    over blank: scattered dust (high dispersion, little content) is evidence
    of a broken render, not an empty one.
    """
    ds = downsample(img, params.downsample_side)
    mask, content, sat_sum, val_sum, white = content_stats(
        ds.pixels, params.s_thresh, params.v_thresh
    )
    total = ds.width * ds.height
    content_fraction = content / total
    if content > 0:
        dispersion = 1.0 - largest_component(mask, ds.width, ds.height) / content
    else:
        dispersion = 0.0

    if content > 0 and dispersion > params.d_max and content_fraction < params.f_noise:
        verdict = "reject_noise"
    elif content_fraction < params.f_min:
        verdict = "reject_blank"
    else:
        verdict = "accept"
    return QualityReport(
        verdict=verdict,
        content_fraction=content_fraction,
        dispersion=dispersion,
        mean_saturation=sat_sum / total,
        mean_value=val_sum / total,
        white_fraction=white / total,
    )


def load_image(path: str | Path) -> ImageBuffer:
    """Load a PNG as 8-bit RGB; alpha channels are composited over white."""
    from PIL import Image

    with Image.open(path) as im:
        return _to_buffer(im)


def image_from_png_bytes(data: bytes) -> ImageBuffer:
    from PIL import Image

    with Image.open(io.BytesIO(data)) as im:
        return _to_buffer(im)


def _to_buffer(im) -> ImageBuffer:
    from PIL import Image

    if im.mode in ("RGBA", "LA", "PA") or (im.mode == "P" and "transparency" in im.info):
        rgba = im.convert("RGBA")
        background = Image.new("RGBA", rgba.size, (255, 255, 255, 255))
        im = Image.alpha_composite(background, rgba)
    rgb = im.convert("RGB")
    return ImageBuffer(rgb.width, rgb.height, rgb.tobytes())


@dataclass
class FilterReport:
    counts: dict = field(default_factory=lambda: {"accept": 0, "reject_blank": 0, "reject_noise": 0})
    per_subtype: dict = field(default_factory=dict)
    io_errors: list = field(default_factory=list)
    params_used: dict = field(default_factory=dict)
    # every assessed record with its quality verdict attached; kept out of
    # to_dict() so the written report keeps its documented schema
    assessed: list = field(default_factory=list)

    def record(self, verdict: str, subtype: str | None):
        self.counts[verdict] = self.counts.get(verdict, 0) + 1
        if subtype:
            bucket = self.per_subtype.setdefault(
                subtype, {"accept": 0, "reject_blank": 0, "reject_noise": 0}
            )
            bucket[verdict] = bucket.get(verdict, 0) + 1

    def to_dict(self) -> dict:
        return {
            "counts": self.counts,
            "per_subtype": self.per_subtype,
            "io_errors": self.io_errors,
            "params_used": self.params_used,
        }


def filter_corpus(
    manifest: Sequence[Mapping],
    params: FilterParams = FilterParams(),
) -> tuple[list[dict], FilterReport]:
    """Assess every image in the manifest; keep the accepted ones.

    Manifest records need ``id`` and ``path`` keys (``subtype`` optional,
    used for the per-subtype breakdown). Unreadable images are recorded in
    the report and excluded; the run continues.
    """
    report = FilterReport(params_used=params.to_dict())
    kept: list[dict] = []
    for record in manifest:
        path = record["path"]
        try:
            img = load_image(path)
        except (OSError, ValueError) as exc:
            report.io_errors.append({"id": record.get("id"), "path": str(path), "message": str(exc)})
            continue
        quality = assess_quality(img, params)
        report.record(quality.verdict, record.get("subtype"))
        entry = dict(record)
        entry["quality"] = quality.to_dict()
        report.assessed.append(entry)
        if quality.verdict == "accept":
            kept.append(entry)
    return kept, report


def iter_borderline(
    assessed: Iterable[Mapping],
    params: FilterParams,
    margin: float = 0.20,
) -> list[Mapping]:
    """Records whose content_fraction is within +-margin of f_min.

    These are the manual-review candidates: automated thresholds are least
    trustworthy right at the decision boundary.
    """
    lo = params.f_min * (1.0 - margin)
    hi = params.f_min * (1.0 + margin)
    out = []
    for record in assessed:
        cf = record.get("quality", {}).get("content_fraction")
        if cf is not None and lo <= cf <= hi:
            out.append(record)
    return out
