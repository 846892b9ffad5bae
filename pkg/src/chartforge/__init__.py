"""chartforge: a corpus-forging pipeline for chart reasoning datasets.

Stages: chart-spec generation, render + pixel-level quality filtering,
QA synthesis with a deterministic oracle, verified reasoning-trace dataset
construction, and rule-based reward / evaluation math.
"""

__version__ = "0.1.0"
