"""Minor containment for small patterns and minor-family specifications.

The general test contracts edges of the host until the pattern appears as a
subgraph of the contracted graph. Hosts are first cut down to the pieces a
pattern can live in (components, blocks) and trimmed of vertices no model of
the pattern needs. Common patterns take dedicated linear-time routes.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import networkx as nx

from .graph import (
    GraphError,
    WeightedGraph,
    complete_bipartite,
    complete_graph,
    components,
    is_forest,
    load_graph,
)
from .treewidth import CapExceeded, is_tw_at_most_2

PATTERN_CAP = int(os.environ.get("FDELETION_PATTERN_CAP", "6"))


# -- small-graph canonical forms ------------------------------------------


@lru_cache(maxsize=4096)
def canonical_form(h: WeightedGraph) -> tuple:
    """``(n, sorted edge list)`` minimised over all vertex relabelings.

    Brute force over permutations; meant for patterns of at most ~7 vertices.
    """
    n = h.n
    idx = {v: i for i, v in enumerate(h.vertices)}
    es = [(idx[u], idx[v]) for u, v in h.edges]
    degs = [h.degree(v) for v in h.vertices]
    # permutations restricted to degree classes, placing high degree first
    classes = sorted(set(degs), reverse=True)
    groups = [[i for i in range(n) if degs[i] == d] for d in classes]
    best = None
    for parts in itertools.product(*(itertools.permutations(g) for g in groups)):
        order = [v for p in parts for v in p]
        pos = {v: i for i, v in enumerate(order)}
        enc = tuple(sorted((min(pos[a], pos[b]), max(pos[a], pos[b])) for a, b in es))
        if best is None or enc < best:
            best = enc
    return (n, best or ())


def _is_complete(h: WeightedGraph) -> bool:
    return h.m == h.n * (h.n - 1) // 2


K3 = complete_graph(3)
K4 = complete_graph(4)
K5 = complete_graph(5)
K23 = complete_bipartite(2, 3)
K33 = complete_bipartite(3, 3)


# -- general search ---------------------------------------------------------


def _monomorphic(hn: int, hadj: list, order: list, qn: int, qadj: list) -> bool:
    """Is the pattern (adjacency bitmasks) a subgraph of the quotient?"""
    hdeg = [bin(a).count("1") for a in hadj]
    qdeg = [bin(a).count("1") for a in qadj]
    assign = [-1] * hn
    used = 0

    def rec(k: int) -> bool:
        nonlocal used
        if k == hn:
            return True
        x = order[k]
        need = [assign[y] for y in range(hn) if hadj[x] >> y & 1 and assign[y] >= 0]
        for c in range(qn):
            if used >> c & 1 or qdeg[c] < hdeg[x]:
                continue
            if all(qadj[c] >> t & 1 for t in need):
                assign[x] = c
                used |= 1 << c
                if rec(k + 1):
                    return True
                used &= ~(1 << c)
                assign[x] = -1
        return False

    return rec(0)


def _pattern_masks(h: WeightedGraph):
    idx = {v: i for i, v in enumerate(h.vertices)}
    adj = [0] * h.n
    for u, v in h.edges:
        adj[idx[u]] |= 1 << idx[v]
        adj[idx[v]] |= 1 << idx[u]
    # search order: repeatedly take the vertex with most already-placed neighbours
    order, placed = [], 0
    rest = set(range(h.n))
    while rest:
        x = max(rest, key=lambda y: (bin(adj[y] & placed).count("1"), bin(adj[y]).count("1"), -y))
        order.append(x)
        placed |= 1 << x
        rest.discard(x)
    return adj, order


def _quotient(parts: tuple, nb: list) -> list:
    reach = []
    for p in parts:
        r = 0
        x = p
        while x:
            low = x & -x
            x ^= low
            r |= nb[low.bit_length() - 1]
        reach.append(r)
    k = len(parts)
    qadj = [0] * k
    for i in range(k):
        for j in range(i + 1, k):
            if reach[i] & parts[j]:
                qadj[i] |= 1 << j
                qadj[j] |= 1 << i
    return qadj


def _contraction_search(nb: list, h: WeightedGraph) -> bool:
    hadj, horder = _pattern_masks(h)
    hn, hm = h.n, h.m
    start = tuple(1 << i for i in range(len(nb)))
    seen = {start}
    stack = [start]
    while stack:
        parts = stack.pop()
        qadj = _quotient(parts, nb)
        qm = sum(bin(a).count("1") for a in qadj) // 2
        if len(parts) < hn or qm < hm:
            continue
        if _monomorphic(hn, hadj, horder, len(parts), qadj):
            return True
        if len(parts) == hn:
            continue
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                if qadj[i] >> j & 1:
                    merged = tuple(sorted(parts[:i] + parts[i + 1 : j] + parts[j + 1 :] + (parts[i] | parts[j],)))
                    if merged not in seen:
                        seen.add(merged)
                        stack.append(merged)
    return False


def _blocks(g: WeightedGraph) -> list:
    nxg = nx.Graph()
    nxg.add_nodes_from(g.vertices)
    nxg.add_edges_from(g.edges)
    return [frozenset(b) for b in nx.biconnected_components(nxg)]


def _trim(g: WeightedGraph, keep: frozenset, min_deg: int) -> tuple:
    """Peel degree <= 1 vertices; with ``min_deg >= 3`` also suppress degree 2.

    Returns adjacency sets over the surviving vertices.
    """
    adj = {v: set(g.neighbors(v)) & keep for v in keep}
    if min_deg < 2:
        return adj
    stack = list(adj)
    while stack:
        v = stack.pop()
        if v not in adj:
            continue
        ns = adj[v]
        if len(ns) <= 1:
            for a in ns:
                adj[a].discard(v)
            del adj[v]
            stack.extend(ns)
        elif len(ns) == 2 and min_deg >= 3:
            a, b = ns
            adj[a].discard(v)
            adj[b].discard(v)
            adj[a].add(b)
            adj[b].add(a)
            del adj[v]
            stack.extend((a, b))
    return adj


def _search_piece(g: WeightedGraph, piece: frozenset, h: WeightedGraph, hmin: int) -> bool:
    adj = _trim(g, piece, hmin)
    if len(adj) < h.n:
        return False
    verts = sorted(adj, key=g.index)
    idx = {v: i for i, v in enumerate(verts)}
    nb = [0] * len(verts)
    for v in verts:
        for u in adj[v]:
            nb[idx[v]] |= 1 << idx[u]
    if sum(bin(x).count("1") for x in nb) // 2 < h.m:
        return False
    return _contraction_search(nb, h)


def _is_two_connected(h: WeightedGraph) -> bool:
    if h.n < 3 or len(components(h)) != 1:
        return False
    return all(len(components(h.delete([v]))) == 1 for v in h.vertices)


def has_minor_general(g: WeightedGraph, h: WeightedGraph) -> bool:
    """Contraction search without pattern-specific shortcuts."""
    if h.n == 0:
        return True
    if h.n > g.n or h.m > g.m:
        return False
    hmin = min(h.degree(v) for v in h.vertices)
    if _is_two_connected(h):
        pieces = [b for b in _blocks(g) if len(b) >= h.n]
    elif len(components(h)) == 1:
        pieces = [c for c in components(g) if len(c) >= h.n]
    else:
        pieces = [frozenset(g.vertices)]
        hmin = 0
    return any(_search_piece(g, p, h, hmin) for p in pieces)


_K3_FORM = canonical_form(K3)
_K4_FORM = canonical_form(K4)


@lru_cache(maxsize=1 << 18)
def _has_minor_cached(g: WeightedGraph, h: WeightedGraph) -> bool:
    if h.n == 0:
        return True
    if h.n > g.n or h.m > g.m:
        return False
    if h.m == 0:
        return True
    if _is_complete(h):
        if h.n == 2:
            return g.m > 0
        if h.n == 3:
            return not is_forest(g)
        if h.n == 4:
            return not is_tw_at_most_2(g)
    return has_minor_general(g, h)


def has_minor(g: WeightedGraph, h: WeightedGraph, cap: int = PATTERN_CAP) -> bool:
    """True iff ``h`` is a minor of ``g``."""
    if h.n > cap:
        raise CapExceeded(f"pattern has {h.n} vertices, cap is {cap}")
    return _has_minor_cached(g, h)


# -- families ---------------------------------------------------------------


class FamilyError(ValueError):
    """Invalid minor family specification."""


@dataclass(frozen=True)
class MinorFamilySpec:
    """A finite forbidden-minor family with its treewidth bound.

    ``eta`` is trusted configuration: every graph without a minor from
    ``patterns`` is assumed to have treewidth at most ``eta``.
    """

    patterns: tuple
    eta: int
    name: str = ""

    def __post_init__(self):
        if not self.patterns:
            raise FamilyError("family has no patterns")
        if self.eta < 1:
            raise FamilyError("eta must be at least 1")
        for p in self.patterns:
            if p.n == 0:
                raise FamilyError("empty pattern graph")
            if p.n > PATTERN_CAP:
                raise FamilyError(f"pattern with {p.n} vertices exceeds cap {PATTERN_CAP}")
        if not any(is_planar_pattern(p) for p in self.patterns):
            raise FamilyError("family contains no planar graph")

    @property
    def h(self) -> int:
        return max(max(p.n, p.m) for p in self.patterns)

    @property
    def forms(self) -> frozenset:
        return frozenset(canonical_form(p) for p in self.patterns)

    @property
    def min_degree(self) -> int:
        return min(min(p.degree(v) for v in p.vertices) for p in self.patterns)

    @property
    def connected(self) -> bool:
        return all(len(components(p)) == 1 for p in self.patterns)

    def to_json_obj(self) -> dict:
        from .graph import to_json_obj

        return {"name": self.name, "eta": self.eta, "patterns": [to_json_obj(p) for p in self.patterns]}


def is_planar_pattern(p: WeightedGraph) -> bool:
    return not has_minor(p, K5) and not has_minor(p, K33)


_OUTERPLANAR_FORMS = frozenset({canonical_form(K4), canonical_form(K23)})


def _is_outerplanar(g: WeightedGraph) -> bool:
    nxg = nx.Graph()
    apex = object()
    nxg.add_nodes_from(g.vertices)
    nxg.add_edges_from(g.edges)
    nxg.add_edges_from((apex, v) for v in g.vertices)
    return nx.check_planarity(nxg)[0]


@lru_cache(maxsize=1 << 18)
def _free_cached(g: WeightedGraph, fam: MinorFamilySpec) -> bool:
    if fam.forms == _OUTERPLANAR_FORMS:
        return _is_outerplanar(g)
    return not any(has_minor(g, p) for p in fam.patterns)


def is_F_minor_free(g: WeightedGraph, fam: MinorFamilySpec) -> bool:
    """True iff no pattern of ``fam`` is a minor of ``g``."""
    return _free_cached(g, fam)


def is_hitting_set(g: WeightedGraph, fam: MinorFamilySpec, xs: Iterable) -> bool:
    return is_F_minor_free(g.delete(xs), fam)


PRESETS = {
    "k3": lambda: MinorFamilySpec((K3,), 1, "k3"),
    "k4": lambda: MinorFamilySpec((K4,), 2, "k4"),
    "outerplanar": lambda: MinorFamilySpec((K4, K23), 2, "outerplanar"),
}


def preset(name: str) -> MinorFamilySpec:
    if name in ("k5k33", "k5,k33", "kuratowski"):
        raise FamilyError("family contains no planar graph")
    try:
        return PRESETS[name]()
    except KeyError:
        raise FamilyError(f"unknown family preset {name!r}; choose from {sorted(PRESETS)}") from None


def treewidth_obstructions(eta: int) -> MinorFamilySpec:
    """Forbidden minors characterising treewidth at most ``eta`` (eta in {1, 2})."""
    if eta == 1:
        return MinorFamilySpec((K3,), 1, "tw1")
    if eta == 2:
        return MinorFamilySpec((K4,), 2, "tw2")
    raise FamilyError(f"treewidth obstructions are only built in for eta in {{1, 2}}, got {eta}")


def load_family(text: str) -> MinorFamilySpec:
    """Family from JSON: ``{"eta": int, "patterns": [graph, ...], "name": str}``."""
    import json

    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FamilyError(f"invalid family JSON: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(data, dict) or "patterns" not in data or "eta" not in data:
        raise FamilyError("family JSON needs 'eta' and 'patterns'")
    try:
        pats = tuple(load_graph(json.dumps(p), "json") for p in data["patterns"])
    except GraphError as exc:
        raise FamilyError(f"bad pattern graph: {exc}") from None
    return MinorFamilySpec(pats, int(data["eta"]), data.get("name", "custom"))
