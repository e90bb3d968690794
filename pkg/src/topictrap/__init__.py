"""Topic-based search that keeps users out of the zero-result topic trap.

Queries on a topic, competency, or educational level are expanded along
the ontology; every selectable term is decorated with its live match
count; and related-term suggestions are merged from manual curation,
structural policy, and per-language latent-semantic similarity over
definition texts.
"""

__version__ = "0.1.0"
