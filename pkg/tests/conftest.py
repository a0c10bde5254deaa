import sys
from pathlib import Path

from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from kempe_lab.coloring import ListAssignment  # noqa: E402
from kempe_lab.graph import Graph  # noqa: E402


@st.composite
def graphs(draw, min_n=1, max_n=6, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if connected:
        # thread a random spanning tree through the chosen edges
        for v in range(1, n):
            chosen.append((draw(st.integers(0, v - 1)), v))
    return Graph(n, chosen)


@st.composite
def list_instances(draw, min_n=1, max_n=6, palette=5, max_size=3, connected=False):
    g = draw(graphs(min_n, max_n, connected))
    lists = [
        draw(st.frozensets(st.integers(0, palette - 1), min_size=1, max_size=max_size))
        for _ in range(g.n)
    ]
    return g, ListAssignment(tuple(lists))
