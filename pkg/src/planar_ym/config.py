"""Run configuration shared by the command line and the verification suite."""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field, fields, replace
from typing import Any

from .graph import EmbeddedGraph, SpanningTree, build_grid, grid_comb_tree, spanning_tree
from .groups import build_group
from .levy import build_levy
from .loops import facial_lasso, grid_lasso, strip_lasso


class ConfigError(ValueError):
    pass


_TOKEN = re.compile(r"L\(\s*\d+\s*,\s*\d+\s*(?:-strip)?\s*\)|F\(\s*\d+\s*\)|\[[^\]]*\]")


@dataclass
class RunConfig:
    group: Any = "S3"
    levy: dict | None = None         # {"jumps": {label: rate}} or {"circle": {...}}; None = rate 1 off identity
    graph: dict = field(default_factory=lambda: {"grid": [2, 1]})
    areas: list | None = None
    loops: list = field(default_factory=list)
    tree: dict = field(default_factory=lambda: {"policy": "comb"})
    seed: int = 0
    threads: int = 1
    samples: int = 100000

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        return replace(cls(), **data)

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"{path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be an object")
        return cls.from_dict(data)


def parse_grid(text: str) -> list:
    m = re.fullmatch(r"\s*(\d+)\s*[xX]\s*(\d+)\s*", text)
    if not m:
        raise ConfigError(f"grid must look like WxH, got {text!r}")
    return [int(m.group(1)), int(m.group(2))]


def parse_areas(text: str) -> list:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"areas must be comma-separated numbers, got {text!r}") from None
    if any(not v > 0 for v in vals):
        raise ConfigError("areas must be strictly positive")
    return vals


def split_loop_tokens(text: str) -> list:
    tokens = _TOKEN.findall(text)
    rest = _TOKEN.sub("", text).replace(",", "").strip()
    if rest:
        raise ConfigError(f"cannot parse loop list near {rest!r}")
    return [t.replace(" ", "") for t in tokens]


def build_graph(cfg: RunConfig) -> EmbeddedGraph:
    src = cfg.graph or {}
    if "grid" in src:
        w, h = src["grid"]
        return build_grid(int(w), int(h))
    if "file" in src:
        try:
            with open(src["file"]) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"{src['file']}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{src['file']}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        return EmbeddedGraph.from_json(data)
    raise ConfigError("graph must give 'grid' or 'file'")


def build_tree(cfg: RunConfig, g: EmbeddedGraph) -> SpanningTree:
    spec = cfg.tree or {"policy": "comb"}
    policy = spec.get("policy", "comb")
    root = g.vertex(spec["root"]) if "root" in spec else 0
    if policy == "comb":
        if not g.grid:
            policy = "bfs"
        else:
            T = grid_comb_tree(g)
            return T if "root" not in spec else T.rerooted(root)
    if policy == "explicit":
        edges = [g.edge_by_id(e) for e in spec.get("edges", [])]
        return spanning_tree(g, root, "explicit", edges)
    return spanning_tree(g, root, policy)


def build_levy_from(cfg: RunConfig):
    desc = dict(cfg.levy or {})
    if "circle" in desc:
        return build_levy(desc)
    return build_levy(desc, build_group(cfg.group))


def resolve_loop(token: str, g: EmbeddedGraph, T: SpanningTree) -> tuple:
    m = re.fullmatch(r"L\((\d+),(\d+)-strip\)", token)
    if m:
        return strip_lasso(g, int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"L\((\d+),(\d+)\)", token)
    if m:
        return grid_lasso(g, int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"F\((\d+)\)", token)
    if m:
        f = int(m.group(1))
        if f >= len(g.bounded_faces):
            raise ConfigError(f"{token}: no bounded face {f}")
        return facial_lasso(T, f)
    if token.startswith("["):
        try:
            ids = json.loads(token)
        except json.JSONDecodeError:
            raise ConfigError(f"cannot parse edge list {token!r}") from None
        word = tuple(g.internal_dart(int(x)) for x in ids)
        g.check_path(word)
        return word
    raise ConfigError(f"unknown loop token {token!r}")


def resolve_loops(cfg: RunConfig, g: EmbeddedGraph, T: SpanningTree) -> tuple[list, list]:
    tokens = []
    for item in cfg.loops:
        tokens.extend(split_loop_tokens(item) if isinstance(item, str) else [json.dumps(item)])
    if not tokens:
        raise ConfigError("no loops given")
    return tokens, [resolve_loop(t, g, T) for t in tokens]


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
