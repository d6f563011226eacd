"""Seeded random instance generators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..graph import WeightedGraph

GENERATORS = ("gnp", "grid_plus_noise", "disjoint_cliques", "trees_plus_edges")


class ConfigError(ValueError):
    """Invalid corpus or experiment configuration."""


@dataclass(frozen=True)
class CorpusSpec:
    generator: str
    n_range: tuple = (6, 10)
    params: dict = field(default_factory=dict, hash=False)
    weights: tuple = (1, 1)
    seed: int = 0
    count: int = 10

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ConfigError(f"unknown generator {self.generator!r}; choose from {list(GENERATORS)}")
        lo, hi = self.n_range
        if not 1 <= lo <= hi:
            raise ConfigError(f"bad n_range {self.n_range!r}")
        wlo, whi = self.weights
        if not 1 <= wlo <= whi:
            raise ConfigError(f"bad weight range {self.weights!r}")
        if self.count < 0:
            raise ConfigError("count must be non-negative")

    def to_json_obj(self) -> dict:
        return {
            "generator": self.generator,
            "n_range": list(self.n_range),
            "params": dict(sorted(self.params.items())),
            "weights": list(self.weights),
            "seed": self.seed,
            "count": self.count,
        }


def _random_extra(rng, n: int, edges: set, extra: int) -> None:
    tries = 0
    while extra > 0 and tries < 50 * n * n:
        tries += 1
        u, v = sorted(int(x) for x in rng.integers(1, n + 1, size=2))
        if u != v and (u, v) not in edges:
            edges.add((u, v))
            extra -= 1


def _gnp(rng, n: int, params: dict) -> set:
    p = params.get("p", 0.4)
    mask = rng.random((n, n)) < p
    return {(u + 1, v + 1) for u in range(n) for v in range(u + 1, n) if mask[u, v]}


def _grid_plus_noise(rng, n: int, params: dict) -> set:
    cols = params.get("cols", 3)
    edges = set()
    for i in range(1, n + 1):
        if (i - 1) % cols + 1 < cols and i + 1 <= n:
            edges.add((i, i + 1))
        if i + cols <= n:
            edges.add((i, i + cols))
    _random_extra(rng, n, edges, params.get("extra", 1))
    return edges


def _disjoint_cliques(rng, n: int, params: dict) -> set:
    lo, hi = params.get("sizes", (3, 4))
    edges, start = set(), 1
    while start <= n:
        size = min(int(rng.integers(lo, hi + 1)), n - start + 1)
        block = range(start, start + size)
        edges |= {(u, v) for u in block for v in block if u < v}
        start += size
    _random_extra(rng, n, edges, params.get("extra", 0))
    return edges


def _trees_plus_edges(rng, n: int, params: dict) -> set:
    edges = set()
    for v in range(2, n + 1):
        u = int(rng.integers(1, v))
        edges.add((u, v))
    _random_extra(rng, n, edges, params.get("extra", 2))
    return edges


_BUILDERS = {
    "gnp": _gnp,
    "grid_plus_noise": _grid_plus_noise,
    "disjoint_cliques": _disjoint_cliques,
    "trees_plus_edges": _trees_plus_edges,
}


def generate_one(spec: CorpusSpec, index: int) -> WeightedGraph:
    """Instance ``index`` of the corpus; independent of the other instances."""
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, index]))
    lo, hi = spec.n_range
    n = int(rng.integers(lo, hi + 1))
    edges = _BUILDERS[spec.generator](rng, n, spec.params)
    wlo, whi = spec.weights
    ws = rng.integers(wlo, whi + 1, size=n)
    return WeightedGraph(range(1, n + 1), sorted(edges), {v: int(ws[v - 1]) for v in range(1, n + 1)})


def generate(spec: CorpusSpec) -> list:
    return [generate_one(spec, i) for i in range(spec.count)]
