"""Per-category feature extractors.

Each extractor maps a document to ``{feature_id: value}`` where ``None``
marks a degenerate value (undefined for this text, e.g. a PoS-conditional
percentage when the class is absent). Degenerate values are flagged, never
silently NaN; training imputes them with training-split means.
"""

from cefrkit.features.lexical import compute_diversity, compute_sophistication_density
from cefrkit.features.morphology import compute_morphological
from cefrkit.features.surface import compute_surface

__all__ = [
    "compute_diversity",
    "compute_sophistication_density",
    "compute_morphological",
    "compute_surface",
]
