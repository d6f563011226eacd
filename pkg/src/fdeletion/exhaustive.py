"""Exhaustive replacement families for protrusions.

For a protrusion ``A`` with boundary ``∂A`` the builder enumerates every
boundary part ``S ⊆ ∂A`` and every interior part ``X_int``, and groups the
choices by the folio of what remains of ``A``. Two choices in the same group
behave identically for every outside context, so the cheapest one of each
group is a valid stand-in for the rest. The result satisfies: for each hitting
set ``X`` some candidate ``Y`` makes ``(X ∖ A) ∪ Y`` a hitting set that is no
heavier than ``X``.

Soundness-preserving shortcuts, each valid only under the stated property of
the forbidden family:

* patterns of minimum degree >= 2: interior vertices of degree <= 1 never
  need deleting and are peeled from the remainder before fingerprinting;
* minimum degree >= 3: interior degree-2 vertices are also suppressed;
* connected patterns: remainder components without boundary vertices that
  contain no forbidden minor are dropped;
* a choice whose remainder already contains a forbidden minor is discarded,
  and a choice is dropped when another with the same ``S`` is no heavier and
  its folio is a subset.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .boundaried import BoundariedGraph, canonical_encoding, folio
from .graph import WeightedGraph, boundary, components
from .minors import MinorFamilySpec, is_F_minor_free
from .separations import PreconditionError, protrusion_bound
from .treewidth import CapExceeded, is_tw_at_most

EXHAUST_CAP = int(os.environ.get("FDELETION_EXHAUST_CAP", "16"))
# reduced remainders above this size are keyed by their relabeled copy instead
# of a folio; isomorphic remainders share a folio, so the key stays sound
FOLIO_VERTEX_LIMIT = int(os.environ.get("FDELETION_FOLIO_LIMIT", "9"))


@dataclass(frozen=True)
class ExhaustiveFamily:
    protrusion: frozenset
    candidates: tuple
    size_stratified: dict | None = field(default=None, compare=False)

    @property
    def sets(self) -> list:
        return [y for y, _ in self.candidates]

    def nonempty(self) -> list:
        return [(y, w) for y, w in self.candidates if y]

    def __len__(self) -> int:
        return len(self.candidates)

    def to_json_obj(self, g: WeightedGraph) -> dict:
        out = {
            "protrusion": list(g.sort(self.protrusion)),
            "candidates": [{"set": list(g.sort(y)), "weight": w} for y, w in self.candidates],
        }
        if self.size_stratified is not None:
            out["size_stratified"] = {
                str(ell): [{"set": list(g.sort(y)), "weight": w} for y, w in cands]
                for ell, cands in sorted(self.size_stratified.items())
            }
        return out


def check_protrusion(g: WeightedGraph, a: Iterable, fam: MinorFamilySpec) -> tuple:
    """Validate ``A`` as an r-protrusion with r = 3 * eta + 2; returns (A, sorted boundary)."""
    a = g.check_subset(a)
    r = protrusion_bound(fam.eta)
    bd = boundary(g, a)
    if len(bd) > r:
        raise PreconditionError(f"A is not a protrusion: boundary size {len(bd)} exceeds {r}")
    if not is_tw_at_most(g, r, a):
        raise PreconditionError(f"A is not a protrusion: treewidth of G[A] exceeds {r}")
    return a, g.sort(bd)


def _peel(g: WeightedGraph, keep: set, fixed: frozenset) -> set:
    """Iteratively remove non-``fixed`` vertices of degree <= 1 inside ``keep``."""
    keep = set(keep)
    deg = {v: sum(1 for u in g.neighbors(v) if u in keep) for v in keep}
    stack = [v for v in keep if v not in fixed and deg[v] <= 1]
    while stack:
        v = stack.pop()
        if v not in keep:
            continue
        keep.discard(v)
        for u in g.neighbors(v):
            if u in keep:
                deg[u] -= 1
                if u not in fixed and deg[u] <= 1:
                    stack.append(u)
    return keep


def reduce_remainder(r: WeightedGraph, bd: tuple, fam: MinorFamilySpec) -> WeightedGraph:
    """Shrink a boundaried remainder without changing its behaviour towards ``fam``."""
    fixed = frozenset(bd)
    mindeg, connected = fam.min_degree, fam.connected
    if connected:
        drop = set()
        for comp in components(r):
            if not comp & fixed and is_F_minor_free(r.induced(comp), fam):
                drop |= comp
        if drop:
            r = r.delete(drop)
    if mindeg < 2:
        return r
    adj = {v: set(r.neighbors(v)) for v in r.vertices}
    changed = True
    while changed:
        changed = False
        for v in list(adj):
            if v in fixed or v not in adj:
                continue
            d = len(adj[v])
            if d <= 1 or (d == 2 and mindeg >= 3):
                ns = adj.pop(v)
                for u in ns:
                    adj[u].discard(v)
                if d == 2:
                    a, b = ns
                    adj[a].add(b)
                    adj[b].add(a)
                changed = True
    verts = [v for v in r.vertices if v in adj]
    edges = {(u, v) if r.index(u) < r.index(v) else (v, u) for u in adj for v in adj[u]}
    return WeightedGraph(verts, edges, {v: r.weight(v) for v in verts})


def _class_key(rem: WeightedGraph, bd: tuple, fam: MinorFamilySpec):
    red = reduce_remainder(rem, bd, fam)
    gb = BoundariedGraph(red, bd)
    if red.n <= FOLIO_VERTEX_LIMIT:
        return ("folio", folio(gb, fam.h).patterns)
    return ("iso", canonical_encoding(gb))


@lru_cache(maxsize=256)
def _choices(g: WeightedGraph, a: frozenset, fam: MinorFamilySpec) -> tuple:
    """All useful (S, Y, weight, key) for protrusion ``a``."""
    a, bd = check_protrusion(g, a, fam)
    bset = frozenset(bd)
    interior = a - bset
    if fam.min_degree >= 2:
        core = _peel(g, set(a), bset) - bset
    else:
        core = set(interior)
    core = g.sort(core)
    if len(core) + len(bd) > EXHAUST_CAP:
        raise CapExceeded(f"exhaustive family enumerates {len(core) + len(bd)} vertices, cap is {EXHAUST_CAP}")
    ga = g.induced(a)
    out = []
    for ssize in range(len(bd) + 1):
        for s in itertools.combinations(bd, ssize):
            sset = frozenset(s)
            rest_bd = tuple(b for b in bd if b not in sset)
            for xsize in range(len(core) + 1):
                for xi in itertools.combinations(core, xsize):
                    y = sset | frozenset(xi)
                    rem = ga.delete(y)
                    if not is_F_minor_free(rem, fam):
                        if not y:
                            # the empty choice is always listed, even when useless
                            out.append((sset, y, 0, ("dead",)))
                        continue
                    out.append((sset, y, g.weight_of(y), _class_key(rem, rest_bd, fam)))
    return tuple(out)


def _prune(entries: list) -> list:
    """Drop entries dominated by a no-heavier entry with the same S and a smaller folio."""
    out = []
    for sset, rank, y, w, key in entries:
        dominated = False
        if key[0] == "folio":
            for s2, r2, y2, w2, k2 in entries:
                if s2 == sset and y2 != y and k2[0] == "folio" and w2 <= w and k2[1] <= key[1]:
                    dominated = True
                    break
        if not dominated:
            out.append((sset, rank, y, w, key))
    return out


def _family(g: WeightedGraph, choices, size_limit: int | None) -> tuple:
    best: dict = {}
    for sset, y, w, key in choices:
        if size_limit is not None and len(y) > size_limit:
            continue
        rank = (w, len(y), g.sort_key(y))
        slot = (sset, key)
        if slot not in best or rank < best[slot][0]:
            best[slot] = (rank, y, w)
    entries = [(sset, rank, y, w, key) for (sset, key), (rank, y, w) in best.items()]
    entries = _prune(entries)
    entries.sort(key=lambda e: e[1])
    return tuple((y, w) for _, _, y, w, _ in entries)


def exhaustive_family(g: WeightedGraph, a: Iterable, fam: MinorFamilySpec) -> ExhaustiveFamily:
    """Replacement family for protrusion ``a``, sorted by (weight, size, vertex order)."""
    a = g.check_subset(a)
    return ExhaustiveFamily(a, _family(g, _choices(g, a, fam), None))


def exhaustive_family_sized(g: WeightedGraph, a: Iterable, fam: MinorFamilySpec, ell: int) -> ExhaustiveFamily:
    """Replacement family whose members have at most ``ell`` vertices.

    Serves every hitting set ``X`` with ``|X ∩ A| <= ell``. ``size_stratified``
    holds the families for each bound ``0..ell``; ``candidates`` is the one
    for ``ell``.
    """
    if ell < 0:
        raise PreconditionError("ell must be non-negative")
    a = g.check_subset(a)
    choices = _choices(g, a, fam)
    strata = {j: _family(g, choices, j) for j in range(ell + 1)}
    return ExhaustiveFamily(a, strata[ell], strata)


def count_classes(g: WeightedGraph, a: Iterable, fam: MinorFamilySpec) -> tuple:
    """(boundary size, distinct fingerprints observed) for the size audit."""
    a = g.check_subset(a)
    choices = _choices(g, a, fam)
    _, bd = check_protrusion(g, a, fam)
    return len(bd), len({key for *_, key in choices})

