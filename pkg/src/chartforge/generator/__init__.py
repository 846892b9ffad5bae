"""Chart spec generation: prompt-guided (LLM) and procedural (offline)."""

from .llm import (
    DEFAULT_MAX_TOKENS,
    DEFAULT_TEMPERATURE,
    HttpTextClient,
    LLMClient,
    MockLLMClient,
    generate_spec_llm,
    strip_code_fences,
)
from .procedural import generate_spec_procedural
from .templates import (
    ChartTemplate,
    SlotSpec,
    TemplateLibrary,
    default_templates,
    load_templates,
    load_wordlists,
)
from .topics import GenerationPrompt, TopicCatalog, build_prompt, default_topics, load_topics

__all__ = [
    "ChartTemplate",
    "DEFAULT_MAX_TOKENS",
    "DEFAULT_TEMPERATURE",
    "GenerationPrompt",
    "HttpTextClient",
    "LLMClient",
    "MockLLMClient",
    "SlotSpec",
    "TemplateLibrary",
    "TopicCatalog",
    "build_prompt",
    "default_templates",
    "default_topics",
    "generate_spec_llm",
    "generate_spec_procedural",
    "load_templates",
    "load_topics",
    "load_wordlists",
    "strip_code_fences",
]
