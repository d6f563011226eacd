"""Exact minimum-weight deletion sets by branch and bound.

Every hitting set contains a vertex of any vertex set whose induced subgraph
still holds a forbidden minor, so the search repeatedly finds a small such
obstruction and branches on which of its vertices to delete. Ties between
optimal solutions are broken towards the lexicographically smallest set in
vertex order.
"""

from __future__ import annotations

import math
import os
from collections import deque
from functools import lru_cache

from .graph import WeightedGraph, is_forest
from .minors import K3, MinorFamilySpec, canonical_form, is_F_minor_free, treewidth_obstructions
from .treewidth import CapExceeded

EXACT_CAP = int(os.environ.get("FDELETION_EXACT_CAP", "20"))
INFEASIBLE = math.inf


def _shortest_cycle(g: WeightedGraph, alive: frozenset) -> list | None:
    best = None
    for s in g.sort(alive):
        dist, par = {s: 0}, {s: None}
        q = deque([s])
        while q:
            x = q.popleft()
            if best is not None and 2 * dist[x] + 1 >= len(best):
                break
            for y in g.sort(g.neighbors(x) & alive):
                if y not in dist:
                    dist[y], par[y] = dist[x] + 1, x
                    q.append(y)
                elif par[x] != y:
                    # close the cycle through x and y
                    a, b = [x], [y]
                    while a[-1] != s:
                        a.append(par[a[-1]])
                    while b[-1] != s:
                        b.append(par[b[-1]])
                    cyc = set(a) | set(b)
                    if len(cyc) == len(a) + len(b) - 1 and (best is None or len(cyc) < len(best)):
                        best = g.sort(cyc)
    return best


def _is_triangle_family(fam: MinorFamilySpec) -> bool:
    return fam.forms == frozenset({canonical_form(K3)})


def _obstruction(g: WeightedGraph, alive: frozenset, fam: MinorFamilySpec, locked: frozenset):
    """Inclusion-minimal vertex set inside ``alive`` carrying a forbidden minor, or None."""
    if _is_triangle_family(fam):
        if is_forest(g, alive):
            return None
        return _shortest_cycle(g, alive)
    if is_F_minor_free(g.induced(alive), fam):
        return None
    keep = set(alive)
    # shed deletable vertices first so the obstruction leans on locked ones
    for v in sorted(alive, key=lambda x: (x in locked, g.index(x))):
        trial = keep - {v}
        if not is_F_minor_free(g.induced(trial), fam):
            keep = trial
    return g.sort(keep)


def _search(g: WeightedGraph, fam: MinorFamilySpec, k: int | None):
    if g.n > EXACT_CAP:
        raise CapExceeded(f"exact solver capped at {EXACT_CAP} vertices, got {g.n}")
    best = [None, INFEASIBLE]

    def better(xs: frozenset, w: int) -> bool:
        if w != best[1]:
            return w < best[1]
        return g.sort_key(xs) < g.sort_key(best[0])

    def rec(chosen: frozenset, w: int, locked: frozenset):
        if w > best[1]:
            return
        alive = frozenset(g.vertices) - chosen
        obs = _obstruction(g, alive, fam, locked)
        if obs is None:
            if better(chosen, w):
                best[0], best[1] = chosen, w
            return
        if k is not None and len(chosen) >= k:
            return
        lock = set(locked)
        for v in obs:
            if v in locked:
                continue
            rec(chosen | {v}, w + g.weight(v), frozenset(lock))
            lock.add(v)

    rec(frozenset(), 0, frozenset())
    return best[0], best[1]


@lru_cache(maxsize=1 << 14)
def _solve_cached(g: WeightedGraph, fam: MinorFamilySpec, k: int | None):
    return _search(g, fam, k)


def solve_exact(g: WeightedGraph, fam: MinorFamilySpec) -> tuple:
    """Minimum-weight hitting set and its weight."""
    return _solve_cached(g, fam, None)


def solve_exact_k(g: WeightedGraph, fam: MinorFamilySpec, k: int) -> tuple:
    """Minimum-weight hitting set with at most ``k`` vertices, or ``(None, inf)``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return _solve_cached(g, fam, k)


def opt_eta(g: WeightedGraph, eta: int) -> int:
    """Minimum weight of a treewidth-``eta`` modulator (eta in {1, 2})."""
    return solve_exact(g, treewidth_obstructions(eta))[1]
