"""Boundaried graphs, gluing, and folio fingerprints.

A folio lists the rooted minors of a boundaried graph up to a detail bound.
A pattern has unlabeled vertices (branch sets avoiding the boundary) and
labeled vertices, each labeled by the exact set of boundary labels its branch
set contains. Counting labels as sets matters: a branch set of a minor model
in a glued graph may touch several boundary vertices and be connected only
through the other side. With that convention, equal folios at detail ``h``
imply that no graph with at most ``h`` vertices and ``h`` edges can tell the
two boundaried graphs apart under any gluing.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache

from .graph import GraphError, WeightedGraph
from .treewidth import CapExceeded

FOLIO_CAP = int(os.environ.get("FDELETION_FOLIO_CAP", "16"))
MAX_DETAIL = 6


@dataclass(frozen=True)
class BoundariedGraph:
    """Graph with an ordered boundary; position ``i`` carries label ``i + 1``."""

    graph: WeightedGraph
    boundary: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple(self.boundary))
        if len(set(self.boundary)) != len(self.boundary):
            raise GraphError("boundary vertices must be distinct")
        for b in self.boundary:
            if b not in self.graph:
                raise GraphError(f"boundary vertex {b!r} not in graph")

    @property
    def t(self) -> int:
        return len(self.boundary)

    def label(self, v) -> int | None:
        try:
            return self.boundary.index(v) + 1
        except ValueError:
            return None

    def interior(self) -> list:
        bset = set(self.boundary)
        return [v for v in self.graph.vertices if v not in bset]


def compatible(g1: BoundariedGraph, g2: BoundariedGraph) -> bool:
    """Same boundary size and the label map is an isomorphism of the boundary graphs."""
    if g1.t != g2.t:
        return False
    b1, b2 = g1.boundary, g2.boundary
    for i in range(g1.t):
        for j in range(i + 1, g1.t):
            if g1.graph.has_edge(b1[i], b1[j]) != g2.graph.has_edge(b2[i], b2[j]):
                return False
    return True


def glue_with_map(g1: BoundariedGraph, g2: BoundariedGraph) -> tuple:
    """``g1 ⊕ g2`` plus the map from ``g2``'s vertices to the glued ids.

    ``g1`` keeps its ids; interior vertices of ``g2`` keep theirs unless they
    clash with ``g1``, in which case they become ``(v, 2)``.
    """
    if not compatible(g1, g2):
        raise GraphError("boundaried graphs are not compatible")
    mapping = {b2: b1 for b1, b2 in zip(g1.boundary, g2.boundary)}
    taken = set(g1.graph.vertices)
    for v in g2.interior():
        new = v if v not in taken else (v, 2)
        while new in taken:
            new = (new, 2)
        mapping[v] = new
        taken.add(new)
    verts = list(g1.graph.vertices) + [mapping[v] for v in g2.interior()]
    edges = set()
    for u, v in g1.graph.edges:
        edges.add(frozenset((u, v)))
    for u, v in g2.graph.edges:
        edges.add(frozenset((mapping[u], mapping[v])))
    weights = g1.graph.weights
    weights.update({mapping[v]: g2.graph.weight(v) for v in g2.interior()})
    glued = WeightedGraph(verts, [tuple(e) for e in edges], weights)
    # re-create so that edge order is canonical regardless of set iteration
    return WeightedGraph(glued.vertices, glued.edges, glued.weights), mapping


def glue(g1: BoundariedGraph, g2: BoundariedGraph) -> WeightedGraph:
    """Disjoint union with equally labeled boundary vertices identified."""
    return glue_with_map(g1, g2)[0]


# -- patterns ----------------------------------------------------------------


def pattern_key(labels: tuple, unlabeled: int, edges) -> tuple:
    """Canonical encoding of a rooted pattern.

    ``labels`` lists the label sets of labeled vertices (vertex ``i`` of the
    pattern for ``i < len(labels)``); the next ``unlabeled`` ids are unlabeled
    vertices; ``edges`` are index pairs. Labeled vertices are ordered by their
    sorted label tuples, unlabeled ones by the lexicographically least edge
    encoding over all orderings consistent with colour refinement.
    """
    nl = len(labels)
    lab_order = sorted(range(nl), key=lambda i: tuple(sorted(labels[i])))
    pos = {old: new for new, old in enumerate(lab_order)}
    es = [tuple(e) for e in edges]
    canon_labels = tuple(tuple(sorted(labels[i])) for i in lab_order)
    if not unlabeled:
        return (canon_labels, 0, tuple(sorted((min(pos[a], pos[b]), max(pos[a], pos[b])) for a, b in es)))
    unl = range(nl, nl + unlabeled)
    adj = {x: [] for x in range(nl + unlabeled)}
    for a, b in es:
        adj[a].append(b)
        adj[b].append(a)
    colour = {x: (len(adj[x]), tuple(sorted(pos[y] for y in adj[x] if y < nl))) for x in unl}
    for _ in range(unlabeled):
        new = {x: (colour[x], tuple(sorted(colour[y] for y in adj[x] if y >= nl))) for x in unl}
        ranks = {c: i for i, c in enumerate(sorted(set(new.values())))}
        new = {x: ranks[new[x]] for x in unl}
        stable = len(set(new.values())) == len(set(colour.values()))
        colour = new
        if stable:
            break
    groups = [[x for x in unl if colour[x] == c] for c in sorted(set(colour.values()))]
    best = None
    for parts in itertools.product(*(itertools.permutations(g) for g in groups)):
        p = dict(pos)
        i = nl
        for part in parts:
            for x in part:
                p[x] = i
                i += 1
        enc = sorted((p[a], p[b]) if p[a] < p[b] else (p[b], p[a]) for a, b in es)
        if best is None or enc < best:
            best = enc
    return (canon_labels, unlabeled, tuple(best))


@dataclass(frozen=True)
class Folio:
    h: int
    patterns: frozenset

    def __contains__(self, key) -> bool:
        return key in self.patterns

    def __len__(self) -> int:
        return len(self.patterns)

    def __le__(self, other: "Folio") -> bool:
        return self.patterns <= other.patterns


def _connected_sets(nb: list, root: int, allowed: int):
    """Connected vertex bitmasks containing ``root`` inside ``allowed``."""

    def grow(cur: int, frontier_block: int):
        yield cur
        ext = 0
        x = cur
        while x:
            low = x & -x
            x ^= low
            ext |= nb[low.bit_length() - 1]
        ext &= allowed & ~cur & ~frontier_block
        block = frontier_block
        while ext:
            low = ext & -ext
            ext ^= low
            yield from grow(cur | low, block)
            block |= low

    yield from grow(1 << root, 0)


def _induced_quotients(nb: list, bmask: list, h: int):
    """Distinct (labels, unlabeled, edges) of piece systems with <= h unlabeled pieces."""
    n = len(nb)
    seen = set()
    pieces: list = []

    def emit():
        labeled = [p for p in pieces if p[1]]
        unl = [p for p in pieces if not p[1]]
        order = labeled + unl
        reachm = []
        for mask, _ in order:
            r = 0
            x = mask
            while x:
                low = x & -x
                x ^= low
                r |= nb[low.bit_length() - 1]
            reachm.append(r)
        edges = tuple(
            (i, j) for i in range(len(order)) for j in range(i + 1, len(order)) if reachm[i] & order[j][0]
        )
        labels = tuple(lab for _, lab in labeled)
        seen.add(pattern_key(labels, len(unl), edges))

    def rec(start: int, avail: int, unl_count: int):
        emit()
        for m in range(start, n):
            if not avail >> m & 1:
                continue
            allowed = avail & ~((1 << m) - 1)
            for piece in _connected_sets(nb, m, allowed):
                lab = frozenset(bmask[i] for i in range(n) if piece >> i & 1 and bmask[i])
                if not lab and unl_count >= h:
                    continue
                pieces.append((piece, lab))
                rec(m + 1, avail & ~piece, unl_count + (0 if lab else 1))
                pieces.pop()

    rec(0, (1 << n) - 1, 0)
    return seen


@lru_cache(maxsize=1 << 18)
def _canon(labels: tuple, unl: int, edges: tuple) -> tuple:
    # without unlabeled vertices the key is canonical as it stands
    return pattern_key(labels, unl, edges) if unl else (labels, 0, edges)


@lru_cache(maxsize=1 << 16)
def _folio_from_encoding(enc: tuple, h: int) -> frozenset:
    n, edges, labels = enc
    nb = [0] * n
    for a, b in edges:
        nb[a] |= 1 << b
        nb[b] |= 1 << a
    # the folio is the closure of the induced quotients under edge deletion,
    # truncated to patterns with at most h edges
    seen = set(_induced_quotients(nb, list(labels), h))
    work = list(seen)
    while work:
        labs, unl, es = work.pop()
        for i in range(len(es)):
            sub = _canon(labs, unl, es[:i] + es[i + 1:])
            if sub not in seen:
                seen.add(sub)
                work.append(sub)
    return frozenset(k for k in seen if len(k[2]) <= h)


def canonical_encoding(gb: BoundariedGraph) -> tuple:
    """Relabeled copy of ``gb``: boundary first by label, interior by colour refinement.

    Equal encodings imply isomorphic boundaried graphs (the encoding is the
    relabeled graph itself); the refinement only makes isomorphic inputs
    likely to collide.
    """
    g = gb.graph
    lab = {v: i + 1 for i, v in enumerate(gb.boundary)}
    colour = {v: (0, lab[v]) if v in lab else (1, 0) for v in g.vertices}
    for _ in range(g.n):
        new = {v: (colour[v], tuple(sorted(colour[u] for u in g.neighbors(v)))) for v in g.vertices}
        ranks = {c: i for i, c in enumerate(sorted(set(new.values())))}
        new = {v: ranks[new[v]] for v in g.vertices}
        if len(set(new.values())) == len(set(colour.values())):
            colour = new
            break
        colour = new
    order = sorted(g.vertices, key=lambda v: (0 if v in lab else 1, lab.get(v, 0), colour[v], g.index(v)))
    pos = {v: i for i, v in enumerate(order)}
    edges = tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges))
    labels = tuple(lab.get(v, 0) for v in order)
    return (g.n, edges, labels)


def folio(gb: BoundariedGraph, h: int) -> Folio:
    """All rooted patterns with at most ``h`` unlabeled vertices and ``h`` edges."""
    if h > MAX_DETAIL:
        raise CapExceeded(f"folio detail {h} exceeds {MAX_DETAIL}")
    if gb.graph.n > FOLIO_CAP:
        raise CapExceeded(f"folio needs at most {FOLIO_CAP} vertices, got {gb.graph.n}")
    return Folio(h, _folio_from_encoding(canonical_encoding(gb), h))


def equivalent_h(g1: BoundariedGraph, g2: BoundariedGraph, h: int) -> bool:
    """Equal folios at detail ``h`` (requires compatible boundaries)."""
    if not compatible(g1, g2):
        raise GraphError("boundaried graphs are not compatible")
    return folio(g1, h) == folio(g2, h)
