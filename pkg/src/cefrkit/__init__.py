"""cefrkit: CEFR level assessment for morphologically annotated learner texts."""

__version__ = "0.1.0"
