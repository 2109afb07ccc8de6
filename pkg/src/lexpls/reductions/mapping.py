"""Solution mappings: what a reduction leaves behind so target solutions can be pulled back."""
from __future__ import annotations

from dataclasses import dataclass, field


class ExtractionError(ValueError):
    """The target solution cannot be mapped back (names the defect)."""


class AuditError(AssertionError):
    """A reduction's output failed its construction self-check."""


@dataclass
class SolutionMapping:
    """``entries`` maps source-entity names to target-entity names.

    Target names are ``v<k>`` (1-based CNF variable), ``p<k>`` (0-based PLOM
    position), ``g<k>`` (1-based generator), ``P<k>`` (1-based player) or
    ``R<k>`` (1-based resource).
    """

    kind: str
    entries: dict[str, str] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def add(self, source: str, target: str) -> None:
        if source in self.entries:
            raise ValueError(f"duplicate mapping entry for {source}")
        self.entries[source] = target

    def target(self, source: str) -> str:
        try:
            return self.entries[source]
        except KeyError:
            raise ExtractionError(f"mapping has no entry for {source}") from None

    def index(self, source: str) -> int:
        """Numeric part of the target entity (as written in the file)."""
        return int(self.target(source)[1:])

    def var(self, source: str) -> int:
        """0-based CNF variable for a source entity."""
        tgt = self.target(source)
        if not tgt.startswith("v"):
            raise ExtractionError(f"{source} maps to {tgt}, not a CNF variable")
        return int(tgt[1:]) - 1

    def cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]


def format_mapping(mapping: SolutionMapping) -> str:
    lines = [f"kind {mapping.kind}"]
    for k, v in mapping.meta.items():
        lines.append(f"meta {k} {v}")
    for s, t in mapping.entries.items():
        lines.append(f"map {s} {t}")
    return "\n".join(lines) + "\n"


def parse_mapping(text: str) -> SolutionMapping:
    mapping = None
    for raw in text.splitlines():
        toks = raw.split(maxsplit=2)
        if not toks:
            continue
        if toks[0] == "kind":
            mapping = SolutionMapping(toks[1])
        elif mapping is None:
            raise ValueError("mapping file must start with 'kind <tag>'")
        elif toks[0] == "meta":
            mapping.meta[toks[1]] = toks[2] if len(toks) > 2 else ""
        elif toks[0] == "map" and len(toks) == 3:
            mapping.add(toks[1], toks[2])
        else:
            raise ValueError(f"bad mapping line {raw!r}")
    if mapping is None:
        raise ValueError("empty mapping file")
    return mapping
