"""Pipeline orchestration: config, manifests, render workers, stages."""

from .config import PipelineConfig, config_from_dict, load_config
from .manifest import Manifest, read_jsonl, read_manifest, write_jsonl
from .renderer import RenderResult, RendererWorker, render_all

__all__ = [
    "Manifest",
    "PipelineConfig",
    "RenderResult",
    "RendererWorker",
    "config_from_dict",
    "load_config",
    "read_jsonl",
    "read_manifest",
    "render_all",
    "write_jsonl",
]
