"""Service configuration: one strict JSON file drives every command.

Unknown keys are rejected rather than ignored, so a typo in a tuning
knob fails loudly instead of silently running with defaults.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .errors import ConfigError

ENV_VAR = "TOPICTRAP_CONFIG"

FETCH_MODES = ("offline", "online")


@dataclass(frozen=True)
class Paths:
    ontology: str
    resources: str
    cache_dir: str
    index_dir: str
    manual_edges: str | None = None
    relatives: str | None = None  # default: <index_dir>/relatives.jsonl

    def relatives_path(self) -> str:
        if self.relatives is not None:
            return self.relatives
        return os.path.join(self.index_dir, "relatives.jsonl")

    def corpus_path(self) -> str:
        return os.path.join(self.cache_dir, "corpus.json")

    def fetch_report_path(self) -> str:
        return os.path.join(self.cache_dir, "fetch_report.json")


@dataclass(frozen=True)
class LsaConfig:
    k_max: int = 100
    threshold: float = 0.25


@dataclass(frozen=True)
class PolicyConfig:
    parent_child: float = 0.9
    ingredient: float = 0.85
    level_adjacent: float = 0.7


@dataclass(frozen=True)
class SearchWeights:
    descendant: float = 0.5
    ingredient: float = 0.6
    word_blend: float = 0.25


@dataclass(frozen=True)
class ServiceConfig:
    paths: Paths
    languages: tuple[str, ...] = ("en", "fr", "de")
    lsa: LsaConfig = field(default_factory=LsaConfig)
    policy: PolicyConfig = field(default_factory=PolicyConfig)
    weights: SearchWeights = field(default_factory=SearchWeights)
    fetch_mode: str = "offline"
    host: str = "127.0.0.1"
    port: int = 8080
    ui_origin: str = "*"
    ui_dir: str | None = None
    autocomplete_limit: int = 10
    suggest_limit: int = 12
    search_limit: int = 10

    @property
    def default_lang(self) -> str:
        return self.languages[0]


def _section(raw: dict, name: str, allowed: set[str]) -> dict:
    value = raw.get(name, {})
    if not isinstance(value, dict):
        raise ConfigError(f"{name} must be an object")
    unknown = set(value) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {name}: {sorted(unknown)}")
    return value


def _check_unit(name: str, value: float, minimum: float = 0.0) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{name} must be a number")
    if not (minimum <= value <= 1.0):
        raise ConfigError(f"{name} must be in [{minimum}, 1], got {value}")
    return float(value)


_TOP_KEYS = {
    "paths", "languages", "lsa", "policy", "weights", "fetch_mode",
    "host", "port", "ui_origin", "ui_dir",
    "autocomplete_limit", "suggest_limit", "search_limit",
}


def parse_config(raw: dict) -> ServiceConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    p = _section(raw, "paths", {"ontology", "resources", "cache_dir", "index_dir",
                                "manual_edges", "relatives"})
    for required in ("ontology", "resources", "cache_dir", "index_dir"):
        if not isinstance(p.get(required), str) or not p.get(required):
            raise ConfigError(f"paths.{required} is required")
    for optional in ("manual_edges", "relatives"):
        if optional in p and p[optional] is not None and not isinstance(p[optional], str):
            raise ConfigError(f"paths.{optional} must be a path or null")
    paths = Paths(
        ontology=p["ontology"],
        resources=p["resources"],
        cache_dir=p["cache_dir"],
        index_dir=p["index_dir"],
        manual_edges=p.get("manual_edges"),
        relatives=p.get("relatives"),
    )

    languages = raw.get("languages", ["en", "fr", "de"])
    if (not isinstance(languages, list) or not languages
            or not all(isinstance(l, str) and len(l) == 2 for l in languages)):
        raise ConfigError("languages must be a non-empty list of two-letter codes")

    l = _section(raw, "lsa", {"k_max", "threshold"})
    k_max = l.get("k_max", 100)
    if not isinstance(k_max, int) or isinstance(k_max, bool) or k_max < 1:
        raise ConfigError(f"lsa.k_max must be a positive integer, got {k_max!r}")
    lsa = LsaConfig(k_max=k_max, threshold=_check_unit("lsa.threshold", l.get("threshold", 0.25)))

    pol = _section(raw, "policy", {"parent_child", "ingredient", "level_adjacent"})
    policy = PolicyConfig(
        parent_child=_check_unit("policy.parent_child", pol.get("parent_child", 0.9)),
        ingredient=_check_unit("policy.ingredient", pol.get("ingredient", 0.85)),
        level_adjacent=_check_unit("policy.level_adjacent", pol.get("level_adjacent", 0.7)),
    )

    w = _section(raw, "weights", {"descendant", "ingredient", "word_blend"})
    weights = SearchWeights(
        descendant=_check_unit("weights.descendant", w.get("descendant", 0.5)),
        ingredient=_check_unit("weights.ingredient", w.get("ingredient", 0.6)),
        word_blend=_check_unit("weights.word_blend", w.get("word_blend", 0.25)),
    )

    fetch_mode = raw.get("fetch_mode", "offline")
    if fetch_mode not in FETCH_MODES:
        raise ConfigError(f"fetch_mode must be one of {FETCH_MODES}, got {fetch_mode!r}")

    port = raw.get("port", 8080)
    if not isinstance(port, int) or isinstance(port, bool) or not (1 <= port <= 65535):
        raise ConfigError(f"port must be in [1, 65535], got {port!r}")

    host = raw.get("host", "127.0.0.1")
    ui_origin = raw.get("ui_origin", "*")
    ui_dir = raw.get("ui_dir")
    for name, value in (("host", host), ("ui_origin", ui_origin)):
        if not isinstance(value, str) or not value:
            raise ConfigError(f"{name} must be non-empty text")
    if ui_dir is not None and not isinstance(ui_dir, str):
        raise ConfigError("ui_dir must be a path or null")

    limits = {}
    for name, default in (("autocomplete_limit", 10), ("suggest_limit", 12), ("search_limit", 10)):
        v = raw.get(name, default)
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        limits[name] = v

    return ServiceConfig(
        paths=paths,
        languages=tuple(languages),
        lsa=lsa,
        policy=policy,
        weights=weights,
        fetch_mode=fetch_mode,
        host=host,
        port=port,
        ui_origin=ui_origin,
        ui_dir=ui_dir,
        **limits,
    )


def load_config(path: str) -> ServiceConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {path}: {exc.msg}") from exc
    cfg = parse_config(raw)
    # relative data paths resolve against the config file's directory
    base = os.path.dirname(os.path.abspath(path))
    return _resolve_paths(cfg, base)


def _resolve_paths(cfg: ServiceConfig, base: str) -> ServiceConfig:
    def resolve(p: str | None) -> str | None:
        if p is None:
            return None
        return p if os.path.isabs(p) else os.path.join(base, p)

    paths = Paths(
        ontology=resolve(cfg.paths.ontology),
        resources=resolve(cfg.paths.resources),
        cache_dir=resolve(cfg.paths.cache_dir),
        index_dir=resolve(cfg.paths.index_dir),
        manual_edges=resolve(cfg.paths.manual_edges),
        relatives=resolve(cfg.paths.relatives),
    )
    return ServiceConfig(
        paths=paths,
        languages=cfg.languages,
        lsa=cfg.lsa,
        policy=cfg.policy,
        weights=cfg.weights,
        fetch_mode=cfg.fetch_mode,
        host=cfg.host,
        port=cfg.port,
        ui_origin=cfg.ui_origin,
        ui_dir=resolve(cfg.ui_dir),
        autocomplete_limit=cfg.autocomplete_limit,
        suggest_limit=cfg.suggest_limit,
        search_limit=cfg.search_limit,
    )


def resolve_config(cli_path: str | None) -> ServiceConfig:
    """Config from --config, falling back to the environment variable."""
    path = cli_path or os.environ.get(ENV_VAR)
    if not path:
        raise ConfigError(f"no config given: pass --config or set {ENV_VAR}")
    return load_config(path)
