"""Exact treewidth, tree decompositions, fast small-width tests and LCA closure."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .graph import WeightedGraph, components

TW_CAP = int(os.environ.get("FDELETION_TW_CAP", "25"))


class CapExceeded(RuntimeError):
    """An exponential routine was asked to run beyond its configured size cap."""


# -- tree decompositions ----------------------------------------------------


@dataclass(frozen=True)
class TreeDecomposition:
    """Rooted tree over integer node ids with a bag per node."""

    parent: dict
    bags: dict
    root: int = 0

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    @property
    def nodes(self) -> list:
        return sorted(self.bags)

    def tree_edges(self) -> list:
        return [(p, c) for c, p in sorted(self.parent.items()) if p is not None]

    def validate(self, g: WeightedGraph) -> None:
        """Raise ``ValueError`` unless this is a tree decomposition of ``g``."""
        nodes = set(self.bags)
        if set(self.parent) != nodes or self.root not in nodes or self.parent[self.root] is not None:
            raise ValueError("parent map does not describe a tree rooted at root")
        for t in nodes:
            seen = set()
            x = t
            while x is not None:
                if x in seen:
                    raise ValueError("parent map has a cycle")
                seen.add(x)
                x = self.parent[x]
            if self.root not in seen:
                raise ValueError("tree is not connected")
        for v in g.vertices:
            holding = {t for t in nodes if v in self.bags[t]}
            if not holding:
                raise ValueError(f"vertex {v!r} is in no bag")
            # connected iff exactly one holder has its parent outside the holders
            tops = [t for t in holding if self.parent[t] not in holding]
            if len(tops) != 1:
                raise ValueError(f"bags containing {v!r} are not connected")
        for u, v in g.edges:
            if not any(u in b and v in b for b in self.bags.values()):
                raise ValueError(f"edge {u!r}-{v!r} is in no bag")


def decomposition_from_order(g: WeightedGraph, order: list) -> TreeDecomposition:
    """Tree decomposition induced by an elimination ordering covering ``g``."""
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set(g.neighbors(v)) for v in g.vertices}
    bags, parent = {}, {}
    for i, v in enumerate(order):
        later = {u for u in adj[v] if pos[u] > i}
        bags[i] = frozenset(later | {v})
        for a in later:
            adj[a] |= later - {a}
    for i, v in enumerate(order):
        later = [u for u in bags[i] if u != v]
        parent[i] = min((pos[u] for u in later), default=None)
    roots = [i for i in parent if parent[i] is None]
    if not roots:
        return TreeDecomposition({0: None}, {0: frozenset()}, 0)
    # one tree per component; chain the roots so the result is a single tree
    root = roots[-1]
    for r in roots[:-1]:
        parent[r] = root
    return TreeDecomposition(parent, bags, root)


# -- exact treewidth --------------------------------------------------------


def _masks(g: WeightedGraph, verts: list):
    idx = {v: i for i, v in enumerate(verts)}
    nb = [0] * len(verts)
    for v in verts:
        m = 0
        for u in g.neighbors(v):
            if u in idx:
                m |= 1 << idx[u]
        nb[idx[v]] = m
    return nb


def _q(nb, s: int, v: int) -> int:
    """Vertices outside ``s`` and ``v`` reachable from ``v`` through ``s``."""
    seen = 1 << v
    frontier = nb[v] & s
    seen |= frontier
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        new = nb[low.bit_length() - 1] & s & ~seen
        seen |= new
        frontier |= new
    out = 0
    x = seen
    while x:
        low = x & -x
        x ^= low
        out |= nb[low.bit_length() - 1]
    return out & ~seen & ~s


def _min_fill_order(nb: list) -> tuple:
    n = len(nb)
    adj = [set(i for i in range(n) if nb[v] >> i & 1) for v in range(n)]
    alive = set(range(n))
    order, width = [], 0

    def fill(v):
        ns = list(adj[v])
        return sum(1 for i in range(len(ns)) for j in range(i + 1, len(ns)) if ns[j] not in adj[ns[i]])

    while alive:
        v = min(alive, key=lambda x: (fill(x), len(adj[x]), x))
        width = max(width, len(adj[v]))
        ns = adj[v]
        for a in ns:
            adj[a] |= ns - {a}
            adj[a].discard(v)
        alive.discard(v)
        order.append(v)
        adj[v] = set()
    return width, order


def _minor_min_width(nb: list) -> int:
    n = len(nb)
    adj = {v: set(i for i in range(n) if nb[v] >> i & 1) for v in range(n)}
    best = 0
    while adj:
        v = min(adj, key=lambda x: (len(adj[x]), x))
        best = max(best, len(adj[v]))
        if not adj[v]:
            del adj[v]
            continue
        u = min(adj[v], key=lambda x: (len(adj[x] & adj[v]), x))
        # contract u into v
        for x in adj[u]:
            if x != v:
                adj[x].discard(u)
                adj[x].add(v)
                adj[v].add(x)
        adj[v].discard(u)
        del adj[u]
    return best


def _decide(nb: list, k: int):
    """Elimination ordering of width <= k, or None."""
    n = len(nb)
    full = (1 << n) - 1
    prev = {0: None}
    layer = [0]
    for _ in range(n):
        nxt = []
        for s in layer:
            rest = full & ~s
            while rest:
                low = rest & -rest
                rest ^= low
                t = s | low
                if t in prev:
                    continue
                v = low.bit_length() - 1
                if bin(_q(nb, s, v)).count("1") <= k:
                    prev[t] = (s, v)
                    nxt.append(t)
        if not nxt:
            return None
        layer = nxt
    order = []
    s = full
    while s:
        s, v = prev[s]
        order.append(v)
    return order[::-1]


def _component_tw(nb: list) -> tuple:
    n = len(nb)
    if n == 0:
        return -1, []
    ub, order = _min_fill_order(nb)
    lb = _minor_min_width(nb)
    for k in range(lb, ub):
        found = _decide(nb, k)
        if found is not None:
            return k, found
    return ub, order


@lru_cache(maxsize=65536)
def _treewidth_cached(g: WeightedGraph) -> tuple:
    width = -1
    order = []
    for comp in components(g):
        verts = g.sort(comp)
        if len(verts) > TW_CAP:
            raise CapExceeded(f"exact treewidth capped at {TW_CAP} vertices per component")
        w, o = _component_tw(_masks(g, verts))
        width = max(width, w)
        order.extend(verts[i] for i in o)
    return width, tuple(order)


def treewidth_exact(g: WeightedGraph) -> tuple:
    """Exact treewidth and a decomposition attaining it.

    Width of the empty graph is -1 (a single empty bag).
    """
    width, order = _treewidth_cached(g)
    return width, decomposition_from_order(g, list(order))


def treewidth(g: WeightedGraph) -> int:
    return _treewidth_cached(g)[0]


# -- fast paths -------------------------------------------------------------


def is_tw_at_most_2(g: WeightedGraph, within: Iterable | None = None) -> bool:
    """Series-parallel reduction: delete degree <= 1, suppress degree 2."""
    keep = set(g.vertices) if within is None else set(within)
    adj = {v: set(g.neighbors(v)) & keep for v in keep}
    stack = [v for v in adj if len(adj[v]) <= 2]
    while stack:
        v = stack.pop()
        if v not in adj:
            continue
        ns = adj[v]
        if len(ns) > 2:
            continue
        if len(ns) == 2:
            a, b = ns
            adj[a].discard(v)
            adj[b].discard(v)
            adj[a].add(b)
            adj[b].add(a)
        else:
            for a in ns:
                adj[a].discard(v)
        del adj[v]
        stack.extend(a for a in ns if len(adj[a]) <= 2)
    return not adj


def is_tw_at_most(g: WeightedGraph, eta: int, within: Iterable | None = None) -> bool:
    """``tw(g) <= eta``, optionally for the subgraph induced by ``within``."""
    from .graph import is_forest

    if eta < 0:
        return (g.n if within is None else len(set(within))) == 0
    if eta == 0:
        keep = set(g.vertices) if within is None else set(within)
        return not any(u in keep and v in keep for u, v in g.edges)
    if eta == 1:
        return is_forest(g, within)
    if eta == 2:
        return is_tw_at_most_2(g, within)
    h = g if within is None else g.induced(within)
    return treewidth(h) <= eta


# -- LCA closure ------------------------------------------------------------


class RootedTree:
    """Rooted tree given by a parent map (the root maps to ``None``)."""

    def __init__(self, parent: dict):
        roots = [v for v, p in parent.items() if p is None]
        if len(roots) != 1:
            raise ValueError("rooted tree needs exactly one root")
        for v, p in parent.items():
            if p is not None and p not in parent:
                raise ValueError(f"parent {p!r} of {v!r} is not a node")
        self.parent = dict(parent)
        self.root = roots[0]
        self.depth = {}
        for v in parent:
            path = []
            x = v
            while x is not None and x not in self.depth:
                path.append(x)
                x = parent[x]
                if len(path) > len(parent):
                    raise ValueError("parent map has a cycle")
            d = -1 if x is None else self.depth[x]
            for y in reversed(path):
                d += 1
                self.depth[y] = d

    @property
    def nodes(self):
        return list(self.parent)

    def neighbors(self, v) -> set:
        out = {c for c, p in self.parent.items() if p == v}
        if self.parent[v] is not None:
            out.add(self.parent[v])
        return out

    def lca(self, u, v):
        if u not in self.parent or v not in self.parent:
            raise KeyError(f"node not in tree: {u if u not in self.parent else v!r}")
        while self.depth[u] > self.depth[v]:
            u = self.parent[u]
        while self.depth[v] > self.depth[u]:
            v = self.parent[v]
        while u != v:
            u, v = self.parent[u], self.parent[v]
        return u


def lca_closure(tree: RootedTree, s: Iterable) -> frozenset:
    """All pairwise least common ancestors of ``s`` (pairs may coincide)."""
    nodes = list(dict.fromkeys(s))
    for v in nodes:
        if v not in tree.parent:
            raise KeyError(f"node not in tree: {v!r}")
    # LCAs of consecutive nodes in DFS preorder generate the closure
    children: dict = {}
    for c, p in tree.parent.items():
        if p is not None:
            children.setdefault(p, []).append(c)
    pre = {}
    stack = [tree.root]
    while stack:
        x = stack.pop()
        pre[x] = len(pre)
        stack.extend(reversed(children.get(x, [])))
    nodes.sort(key=pre.__getitem__)
    out = set(nodes)
    for a, b in zip(nodes, nodes[1:]):
        out.add(tree.lca(a, b))
    return frozenset(out)
