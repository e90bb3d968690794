"""Exception hierarchy shared by all topictrap modules.

Every error carries a stable ``category`` string so the CLI can emit
one-line machine-parsable failures and the HTTP layer can map errors
to status codes without string matching.
"""

from __future__ import annotations


class TopictrapError(Exception):
    """Base class for all errors raised by this package."""

    category = "INTERNAL"


class ConfigError(TopictrapError):
    category = "CONFIG"


class ParseError(TopictrapError):
    """Malformed input file. ``line`` is 1-based when known."""

    category = "PARSE"

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:" if line is None else f"{path}:{line}:"
        super().__init__(f"{where} {message}".strip())


class DanglingReference(TopictrapError):
    """A record references a term uri that does not exist."""

    category = "DANGLING"

    def __init__(self, uri: str, referenced_by: str):
        self.uri = uri
        self.referenced_by = referenced_by
        super().__init__(f"unknown term {uri!r} referenced by {referenced_by!r}")


class HierarchyCycle(TopictrapError):
    """The topic parent relation contains a cycle."""

    category = "CYCLE"

    def __init__(self, cycle: list[str]):
        self.cycle = list(cycle)
        super().__init__("topic hierarchy cycle: " + " -> ".join(self.cycle))


class UnknownTerm(TopictrapError):
    category = "UNKNOWN_TERM"

    def __init__(self, uri: str):
        self.uri = uri
        super().__init__(f"unknown term: {uri!r}")


class KindMismatch(TopictrapError):
    category = "KIND_MISMATCH"

    def __init__(self, uri: str, expected: str, actual: str):
        self.uri = uri
        self.expected = expected
        self.actual = actual
        super().__init__(f"term {uri!r} has kind {actual}, expected {expected}")


class RangeError(TopictrapError):
    """A numeric value is outside its declared range."""

    category = "RANGE"


class SelfLoop(TopictrapError):
    category = "SELF_LOOP"

    def __init__(self, uri: str):
        self.uri = uri
        super().__init__(f"related edge may not connect {uri!r} to itself")


class NetworkError(TopictrapError):
    category = "NETWORK"


class SectionNotFound(TopictrapError):
    category = "SECTION_NOT_FOUND"

    def __init__(self, url: str, fragment: str):
        self.url = url
        self.fragment = fragment
        super().__init__(f"section #{fragment} not found in {url}")


class CacheMiss(TopictrapError):
    category = "CACHE_MISS"

    def __init__(self, uri: str, lang: str):
        self.uri = uri
        self.lang = lang
        super().__init__(f"no cached definition for ({uri!r}, {lang!r})")


class CorpusTooSmall(TopictrapError):
    category = "CORPUS_TOO_SMALL"


class NumericalFailure(TopictrapError):
    category = "NUMERICAL"


class LengthMismatch(TopictrapError):
    category = "LENGTH_MISMATCH"


class EmptyQuery(TopictrapError):
    category = "EMPTY_QUERY"


class DanglingAnnotation(TopictrapError):
    category = "DANGLING_ANNOTATION"

    def __init__(self, resource_id: str, uri: str):
        self.resource_id = resource_id
        self.uri = uri
        super().__init__(f"resource {resource_id!r} annotated with unknown term {uri!r}")


class StaleArtifact(TopictrapError):
    """A persisted artifact disagrees with the inputs it was built from."""

    category = "ARTIFACT"
