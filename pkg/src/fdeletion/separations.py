"""Small-boundary separations, the modulator hitting family, important separators.

An eta-separation ``(C, S)`` has ``N(C) ⊆ S``, ``tw(G[C]) <= eta`` and
``|S| <= 2*eta + 2``; it is simple when ``G[C]`` is connected and
``N(C) = S``. The hitting family keeps the inclusion-maximal simple
separations, merges those sharing ``S`` and adds every edge that no simple
separation covers. Each member ``C ∪ S`` is a ``(3*eta + 2)``-protrusion, and
every treewidth-eta modulator meets a constant fraction of the members.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .graph import GraphError, WeightedGraph, components, open_neighborhood, reach
from .treewidth import is_tw_at_most

SIMPLE = "simple"
SEMI_SIMPLE = "semi_simple"
EDGE_PAIR = "edge_pair"


class PreconditionError(ValueError):
    """Input violates an operation's stated precondition."""


@dataclass(frozen=True)
class Separation:
    C: frozenset
    S: frozenset
    kind: str

    @property
    def protrusion(self) -> frozenset:
        return self.C | self.S

    def to_json_obj(self, g: WeightedGraph) -> dict:
        return {"kind": self.kind, "C": list(g.sort(self.C)), "S": list(g.sort(self.S))}


@dataclass(frozen=True)
class HittingFamily:
    eta: int
    separations: tuple

    @property
    def protrusions(self) -> list:
        return [s.protrusion for s in self.separations]

    def __len__(self) -> int:
        return len(self.separations)

    def to_json_obj(self, g: WeightedGraph) -> list:
        return [s.to_json_obj(g) for s in self.separations]


def max_separator_size(eta: int) -> int:
    return 2 * eta + 2


def protrusion_bound(eta: int) -> int:
    return 3 * eta + 2


# Documented exponent for the family-size bound |family| <= n ** (SIZE_EXPONENT * eta):
# |S_all| <= n * sum_{j <= 2eta+2} C(n, j) <= n ** (2eta+3) and edge-pairs add < n ** 2,
# so n ** (2eta+4) suffices for n >= 2, and 2eta + 4 <= 6 eta for eta >= 1.
SIZE_EXPONENT = 6


@lru_cache(maxsize=4096)
def enumerate_simple_separations(g: WeightedGraph, eta: int) -> tuple:
    """All simple eta-separations, ordered by ``S`` (size, then vertex order) then component."""
    if eta < 1:
        raise PreconditionError("eta must be at least 1")
    out = []
    for size in range(min(max_separator_size(eta), g.n) + 1):
        for s in itertools.combinations(g.vertices, size):
            sset = frozenset(s)
            rest = [v for v in g.vertices if v not in sset]
            for comp in components(g, rest):
                if open_neighborhood(g, comp) == sset and is_tw_at_most(g, eta, comp):
                    out.append(Separation(comp, sset, SIMPLE))
    return tuple(out)


def is_lt_maximal(g: WeightedGraph, eta: int, sep: Separation, all_seps: Iterable) -> bool:
    """No other simple separation has a strictly larger ``C``."""
    return not any(sep.C < other.C for other in all_seps)


def maximal_separations(g: WeightedGraph, eta: int) -> list:
    seps = enumerate_simple_separations(g, eta)
    return [s for s in seps if is_lt_maximal(g, eta, s, seps)]


@lru_cache(maxsize=4096)
def build_hitting_family(g: WeightedGraph, eta: int) -> HittingFamily:
    """The family of merged maximal simple separations plus uncovered edge-pairs."""
    if eta < 1:
        raise PreconditionError("eta must be at least 1")
    if is_tw_at_most(g, eta):
        raise PreconditionError(f"graph has treewidth at most {eta}; the hitting family needs tw > eta")
    seps = enumerate_simple_separations(g, eta)
    merged: dict = {}
    for s in seps:
        if is_lt_maximal(g, eta, s, seps):
            merged.setdefault(s.S, set()).update(s.C)
    family = [Separation(frozenset(c), sset, SEMI_SIMPLE) for sset, c in merged.items()]
    covers = [s.protrusion for s in seps]
    for u, v in g.edges:
        if not any(u in p and v in p for p in covers):
            family.append(Separation(frozenset(), frozenset((u, v)), EDGE_PAIR))
    return HittingFamily(eta, tuple(family))


# -- important separators ---------------------------------------------------


def _max_flow(g: WeightedGraph, sources: frozenset, sinks: frozenset, limit: int):
    """Vertex-disjoint path count from ``sources`` to ``sinks`` (capped at ``limit``).

    Returns ``(value, side)``: ``side`` is the reach of the sources behind the
    minimum separator closest to the sinks, so ``N(side)`` is that separator.
    ``value`` is ``limit`` (and ``side`` None) once the cap is hit, which
    includes sources adjacent to sinks.
    """
    INF = limit + 1
    cap: dict = {}
    adj: dict = {}

    def arc(a, b, c):
        cap[(a, b)] = cap.get((a, b), 0) + c
        cap.setdefault((b, a), 0)
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)

    for v in g.vertices:
        terminal = v in sources or v in sinks
        arc(("in", v), ("out", v), INF if terminal else 1)
        for u in g.neighbors(v):
            arc(("out", v), ("in", u), INF)
    for v in sources:
        arc("s", ("in", v), INF)
    for v in sinks:
        arc(("out", v), "t", INF)
    adj.setdefault("s", set())
    adj.setdefault("t", set())

    flow = 0
    while flow < limit:
        prev = {"s": None}
        q = deque(["s"])
        while q and "t" not in prev:
            a = q.popleft()
            for b in sorted(adj[a], key=repr):
                if b not in prev and cap[(a, b)] > 0:
                    prev[b] = a
                    q.append(b)
        if "t" not in prev:
            break
        path = []
        b = "t"
        while prev[b] is not None:
            path.append((prev[b], b))
            b = prev[b]
        push = min(cap[e] for e in path)
        push = min(push, limit - flow)
        for a, b in path:
            cap[(a, b)] -= push
            cap[(b, a)] += push
        flow += push
    if flow >= limit:
        return limit, None
    # nodes that can still reach t in the residual graph
    to_t = {"t"}
    q = deque(["t"])
    while q:
        b = q.popleft()
        for a in adj[b]:
            if a not in to_t and cap[(a, b)] > 0:
                to_t.add(a)
                q.append(a)
    strict = frozenset(v for v in g.vertices if ("out", v) not in to_t)
    return flow, reach(g, sources, [v for v in g.vertices if v not in strict])


def min_separator_size(g: WeightedGraph, sources: Iterable, sinks: Iterable, limit: int) -> int:
    """Size of a minimum vertex set avoiding both ends that separates them, capped at ``limit``."""
    return _max_flow(g, frozenset(sources), frozenset(sinks), limit)[0]


def is_important_separator(g: WeightedGraph, v, xs: frozenset, sep: frozenset) -> bool:
    if sep & (xs | {v}):
        return False
    r = reach(g, [v], sep)
    if r & xs:
        return False
    for s in sep:
        if not (reach(g, [v], sep - {s}) & xs):
            return False
    for u in sep:
        if min_separator_size(g, r | {u}, xs, len(sep) + 1) <= len(sep):
            return False
    return True


def enumerate_important_separators(g: WeightedGraph, v, xs: Iterable, k: int) -> list:
    """Important ``(v, X)``-separators of size at most ``k``, sorted by (size, vertex order)."""
    xs = g.check_subset(xs)
    if v not in g:
        raise GraphError(f"vertex {v!r} not in graph")
    if v in xs:
        raise PreconditionError("v must not belong to X")
    if k < 0:
        raise PreconditionError("k must be non-negative")

    found = set()

    def rec(h: WeightedGraph, src: frozenset, budget: int, chosen: frozenset):
        lam, side = _max_flow(h, src, xs, budget + 1)
        if lam > budget:
            return
        if lam == 0:
            found.add(chosen)
            return
        cut = open_neighborhood(h, side)
        u = h.sort(cut)[0]
        rec(h.delete([u]), src, budget - 1, chosen | {u})
        rec(h, src | {u}, budget, chosen)

    rec(g, frozenset([v]), k, frozenset())
    out = [s for s in found if is_important_separator(g, v, xs, s)]
    out.sort(key=lambda s: (len(s), g.sort_key(s)))
    return out
