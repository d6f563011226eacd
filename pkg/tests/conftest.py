import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fdeletion.graph import WeightedGraph

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def graphs(draw, min_n=0, max_n=8, max_weight=1, p=None):
    """Random simple graphs on vertices 1..n."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    if p is None:
        mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    else:
        mask = [draw(st.floats(0, 1)) < p for _ in pairs]
    edges = [e for e, keep in zip(pairs, mask) if keep]
    ws = draw(st.lists(st.integers(1, max_weight), min_size=n, max_size=n))
    return WeightedGraph(range(1, n + 1), edges, dict(zip(range(1, n + 1), ws)))


@st.composite
def graph_and_subset(draw, **kw):
    g = draw(graphs(**kw))
    mask = draw(st.lists(st.booleans(), min_size=g.n, max_size=g.n))
    return g, frozenset(v for v, keep in zip(g.vertices, mask) if keep)
