"""Immutable node-weighted simple graphs and the set operations used everywhere else.

Vertex identifiers are opaque hashables. They are stable under deletion and
induced subgraphs, so a solution found in ``G - X`` is directly a vertex set of
``G``. Every set-valued result comes back in the graph's vertex order.
"""

from __future__ import annotations

import json
from typing import Hashable, Iterable, Iterator

Vertex = Hashable
VertexSet = frozenset


class GraphError(ValueError):
    """Malformed graph input or an operation on vertices the graph does not have."""


class WeightedGraph:
    """Simple undirected graph with positive integer vertex weights.

    Vertex order is the construction order and is what every deterministic
    ordering in the package refers to.
    """

    __slots__ = ("_vertices", "_index", "_adj", "_weight", "_hash", "_edges")

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[tuple] = (), weights=None):
        verts = tuple(vertices)
        index = {v: i for i, v in enumerate(verts)}
        if len(index) != len(verts):
            raise GraphError("duplicate vertex identifiers")
        adj: dict = {v: set() for v in verts}
        for e in edges:
            u, v = e
            if u not in index or v not in index:
                raise GraphError(f"edge {u!r}-{v!r} references an unknown vertex")
            if u == v:
                raise GraphError(f"self-loop at {u!r}")
            adj[u].add(v)
            adj[v].add(u)
        weights = weights or {}
        w = {}
        for v in verts:
            x = weights.get(v, 1)
            if isinstance(x, bool) or not isinstance(x, int) or x < 1:
                raise GraphError(f"weight of {v!r} must be a positive integer, got {x!r}")
            w[v] = x
        self._vertices = verts
        self._index = index
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}
        self._weight = w
        self._hash = None
        self._edges = None

    # -- basic accessors -------------------------------------------------

    @property
    def vertices(self) -> tuple:
        return self._vertices

    def __len__(self) -> int:
        return len(self._vertices)

    def __iter__(self) -> Iterator:
        return iter(self._vertices)

    def __contains__(self, v) -> bool:
        return v in self._index

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edges(self) -> tuple:
        """Edges as ``(u, v)`` pairs with ``u`` before ``v``, sorted by vertex order."""
        if self._edges is None:
            idx = self._index
            es = [(u, v) for u in self._vertices for v in self._adj[u] if idx[u] < idx[v]]
            es.sort(key=lambda e: (idx[e[0]], idx[e[1]]))
            self._edges = tuple(es)
        return self._edges

    def neighbors(self, v) -> frozenset:
        return self._adj[v]

    def degree(self, v) -> int:
        return len(self._adj[v])

    def has_edge(self, u, v) -> bool:
        return v in self._adj.get(u, ())

    def weight(self, v) -> int:
        return self._weight[v]

    @property
    def weights(self) -> dict:
        return dict(self._weight)

    def weight_of(self, vs: Iterable) -> int:
        return sum(self._weight[v] for v in vs)

    def index(self, v) -> int:
        return self._index[v]

    def sort(self, vs: Iterable) -> tuple:
        """``vs`` as a tuple in vertex order."""
        return tuple(sorted(vs, key=self._index.__getitem__))

    def sort_key(self, vs: Iterable) -> tuple:
        """Lexicographic comparison key of a vertex set (sorted positions)."""
        return tuple(sorted(self._index[v] for v in vs))

    def check_subset(self, vs: Iterable) -> frozenset:
        s = frozenset(vs)
        missing = [v for v in s if v not in self._index]
        if missing:
            raise GraphError(f"vertices not in graph: {missing!r}")
        return s

    # -- derived graphs --------------------------------------------------

    def induced(self, vs: Iterable) -> "WeightedGraph":
        keep = self.check_subset(vs)
        verts = [v for v in self._vertices if v in keep]
        g = WeightedGraph.__new__(WeightedGraph)
        g._vertices = tuple(verts)
        g._index = {v: i for i, v in enumerate(verts)}
        g._adj = {v: self._adj[v] & keep for v in verts}
        g._weight = {v: self._weight[v] for v in verts}
        g._hash = None
        g._edges = None
        return g

    def delete(self, vs: Iterable) -> "WeightedGraph":
        drop = self.check_subset(vs)
        if not drop:
            return self
        return self.induced(v for v in self._vertices if v not in drop)

    def with_weights(self, weights: dict) -> "WeightedGraph":
        w = dict(self._weight)
        w.update(weights)
        return WeightedGraph(self._vertices, self.edges, w)

    def relabel(self, mapping: dict) -> "WeightedGraph":
        verts = [mapping.get(v, v) for v in self._vertices]
        es = [(mapping.get(u, u), mapping.get(v, v)) for u, v in self.edges]
        w = {mapping.get(v, v): x for v, x in self._weight.items()}
        return WeightedGraph(verts, es, w)

    # -- identity --------------------------------------------------------

    def _key(self):
        return (self._vertices, self.edges, tuple(self._weight[v] for v in self._vertices))

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"


# -- set operations -------------------------------------------------------


def open_neighborhood(g: WeightedGraph, vs: Iterable) -> frozenset:
    """Vertices outside ``vs`` adjacent to some member of ``vs``."""
    a = g.check_subset(vs)
    out = set()
    for v in a:
        out.update(g.neighbors(v))
    return frozenset(out - a)


def closed_neighborhood(g: WeightedGraph, vs: Iterable) -> frozenset:
    a = g.check_subset(vs)
    return a | open_neighborhood(g, a)


def boundary(g: WeightedGraph, vs: Iterable) -> frozenset:
    """Members of ``vs`` with at least one neighbour outside ``vs``."""
    a = g.check_subset(vs)
    return frozenset(v for v in a if not g.neighbors(v) <= a)


def reach(g: WeightedGraph, sources: Iterable, avoid: Iterable = ()) -> frozenset:
    """Vertices reachable from ``sources`` in ``g - avoid``."""
    blocked = set(avoid)
    seen = set(s for s in sources if s not in blocked)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for x in g.neighbors(u):
            if x not in seen and x not in blocked:
                seen.add(x)
                stack.append(x)
    return frozenset(seen)


def components(g: WeightedGraph, within: Iterable | None = None) -> list:
    """Connected components, ordered by their earliest vertex.

    With ``within`` the components of ``g[within]`` are returned.
    """
    allowed = set(g.vertices) if within is None else set(within)
    out = []
    seen = set()
    for v in g.vertices:
        if v in seen or v not in allowed:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for x in g.neighbors(u):
                if x in allowed and x not in comp:
                    comp.add(x)
                    stack.append(x)
        seen |= comp
        out.append(frozenset(comp))
    return out


def is_connected(g: WeightedGraph, within: Iterable | None = None) -> bool:
    return len(components(g, within)) <= 1


def delete(g: WeightedGraph, vs: Iterable) -> WeightedGraph:
    return g.delete(vs)


def induced(g: WeightedGraph, vs: Iterable) -> WeightedGraph:
    return g.induced(vs)


def is_forest(g: WeightedGraph, within: Iterable | None = None) -> bool:
    """Acyclicity test via union-find."""
    allowed = set(g.vertices) if within is None else set(within)
    parent = {v: v for v in allowed}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        if u in allowed and v in allowed:
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
    return True


# -- constructors for common graphs ---------------------------------------


def complete_graph(n: int, start: int = 1) -> WeightedGraph:
    vs = range(start, start + n)
    return WeightedGraph(vs, [(u, v) for u in vs for v in vs if u < v])


def complete_bipartite(a: int, b: int, start: int = 1) -> WeightedGraph:
    left = list(range(start, start + a))
    right = list(range(start + a, start + a + b))
    return WeightedGraph(left + right, [(u, v) for u in left for v in right])


def path_graph(n: int, start: int = 1) -> WeightedGraph:
    vs = list(range(start, start + n))
    return WeightedGraph(vs, list(zip(vs, vs[1:])))


def cycle_graph(n: int, start: int = 1) -> WeightedGraph:
    vs = list(range(start, start + n))
    return WeightedGraph(vs, list(zip(vs, vs[1:])) + [(vs[-1], vs[0])])


def grid_graph(rows: int, cols: int) -> WeightedGraph:
    vid = lambda r, c: r * cols + c + 1
    vs = [vid(r, c) for r in range(rows) for c in range(cols)]
    es = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                es.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                es.append((vid(r, c), vid(r + 1, c)))
    return WeightedGraph(vs, es)


def disjoint_union(*graphs: WeightedGraph) -> WeightedGraph:
    """Disjoint union with vertices renumbered ``1..n`` in argument order."""
    verts, es, w = [], [], {}
    offset = 0
    for g in graphs:
        ren = {v: offset + i + 1 for i, v in enumerate(g.vertices)}
        verts.extend(ren[v] for v in g.vertices)
        es.extend((ren[u], ren[v]) for u, v in g.edges)
        w.update({ren[v]: g.weight(v) for v in g.vertices})
        offset += g.n
    return WeightedGraph(verts, es, w)


# -- serialization --------------------------------------------------------


def _parse_edgelist(text: str) -> WeightedGraph:
    n = None
    declared_m = None
    weights: dict = {}
    edges: list = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("c", "#")):
            continue
        parts = line.split()
        tag = parts[0]
        try:
            if tag == "p":
                if n is not None:
                    raise GraphError("duplicate header")
                if len(parts) != 3:
                    raise GraphError("header must be 'p <n> <m>'")
                n, declared_m = int(parts[1]), int(parts[2])
                if n < 0 or declared_m < 0:
                    raise GraphError("negative size in header")
            elif tag == "w":
                if n is None:
                    raise GraphError("weight line before header")
                if len(parts) != 3:
                    raise GraphError("weight line must be 'w <vertex> <weight>'")
                v, x = int(parts[1]), int(parts[2])
                if not 1 <= v <= n:
                    raise GraphError(f"vertex {v} out of range 1..{n}")
                if x < 1:
                    raise GraphError(f"weight must be positive, got {x}")
                weights[v] = x
            elif tag == "e":
                if n is None:
                    raise GraphError("edge line before header")
                if len(parts) != 3:
                    raise GraphError("edge line must be 'e <u> <v>'")
                u, v = int(parts[1]), int(parts[2])
                for x in (u, v):
                    if not 1 <= x <= n:
                        raise GraphError(f"vertex {x} out of range 1..{n}")
                if u == v:
                    raise GraphError(f"self-loop at vertex {u}")
                key = (min(u, v), max(u, v))
                if key in seen:
                    raise GraphError(f"parallel edge {u}-{v}")
                seen.add(key)
                edges.append((u, v))
            else:
                raise GraphError(f"unknown line type {tag!r}")
        except GraphError as exc:
            raise GraphError(f"line {lineno}: {exc}") from None
        except ValueError:
            raise GraphError(f"line {lineno}: expected integers in {raw!r}") from None
    if n is None:
        raise GraphError("missing 'p <n> <m>' header")
    if declared_m != len(edges):
        raise GraphError(f"header declares {declared_m} edges, found {len(edges)}")
    return WeightedGraph(range(1, n + 1), edges, weights)


def _parse_json(text: str) -> WeightedGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict) or "vertices" not in data:
        raise GraphError("JSON graph must be an object with a 'vertices' list")
    verts, weights = [], {}
    for i, item in enumerate(data["vertices"]):
        if isinstance(item, dict):
            if "id" not in item:
                raise GraphError(f"vertices[{i}] has no 'id'")
            vid = item["id"]
            weights[vid] = item.get("w", 1)
        else:
            vid = item
        if isinstance(vid, list):
            vid = tuple(vid)
        verts.append(vid)
    edges = []
    seen = set()
    for i, e in enumerate(data.get("edges", [])):
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise GraphError(f"edges[{i}] must be a pair")
        u, v = e
        if u == v:
            raise GraphError(f"edges[{i}]: self-loop at {u!r}")
        key = frozenset((u, v))
        if key in seen:
            raise GraphError(f"edges[{i}]: parallel edge {u!r}-{v!r}")
        seen.add(key)
        edges.append((u, v))
    return WeightedGraph(verts, edges, weights)


def load_graph(text: str, format: str = "edgelist") -> WeightedGraph:
    """Parse a graph from ``edgelist`` or ``json`` text."""
    if format == "edgelist":
        return _parse_edgelist(text)
    if format == "json":
        return _parse_json(text)
    raise GraphError(f"unknown graph format {format!r}")


def read_graph(path: str, format: str | None = None) -> WeightedGraph:
    if format is None:
        format = "json" if str(path).endswith(".json") else "edgelist"
    with open(path) as fh:
        return load_graph(fh.read(), format)


def to_json_obj(g: WeightedGraph) -> dict:
    return {
        "vertices": [{"id": v, "w": g.weight(v)} for v in g.vertices],
        "edges": [[u, v] for u, v in g.edges],
    }


def dump_graph(g: WeightedGraph, format: str = "edgelist") -> str:
    if format == "json":
        return json.dumps(to_json_obj(g), sort_keys=True)
    if format != "edgelist":
        raise GraphError(f"unknown graph format {format!r}")
    ren = {v: i + 1 for i, v in enumerate(g.vertices)}
    lines = [f"p {g.n} {g.m}"]
    lines += [f"w {ren[v]} {g.weight(v)}" for v in g.vertices]
    lines += [f"e {ren[u]} {ren[v]}" for u, v in g.edges]
    return "\n".join(lines) + "\n"
