"""Kernel backend selection: compiled extension if built, else pure Python."""

from __future__ import annotations

try:
    from . import _imagekernels as _impl

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on build environment
    from . import fallback as _impl

    BACKEND = "python"

box_downsample = _impl.box_downsample
content_stats = _impl.content_stats
largest_component = _impl.largest_component
