"""Deterministic generators for the graph families used throughout."""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DomainError, VerificationError
from .graph_core import (
    Graph,
    bipartition,
    bisubdivide,
    is_matchable,
    is_matching_covered,
)


def _positive(*sizes):
    if any(s < 1 for s in sizes):
        raise DomainError("family sizes must be positive")


def complete_bipartite(a: int, b: int) -> Graph:
    """Sides 1..a and a+1..a+b; edges (i, j) in lexicographic order."""
    _positive(a, b)
    return Graph(a + b, tuple((i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)))


def complete(n: int) -> Graph:
    _positive(n)
    return Graph(n, tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise DomainError("a cycle needs at least three vertices")
    return Graph(n, tuple((i, i % n + 1) for i in range(1, n + 1)))


def path(n: int) -> Graph:
    _positive(n)
    return Graph(n, tuple((i, i + 1) for i in range(1, n)))


def petersen() -> Graph:
    """Outer pentagon 1..5, inner pentagram 6..10, spokes i -- i+5."""
    outer = [(i, i % 5 + 1) for i in range(1, 6)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(6 + i, 6 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


def wheel(spokes: int) -> Graph:
    """Rim 1..spokes, hub spokes+1."""
    rim = cycle(spokes).edges
    hub = spokes + 1
    return Graph(hub, rim + tuple((i, hub) for i in range(1, spokes + 1)))


# Tags of the interior ear vertices of the block.  Ear a1-u-v-b1 replaces
# edge a1b1 and ear a2-q-p-b2 replaces a2b2, so u, q sit on the b-side and
# v, p on the a-side; the links u_i p_{i+1} and v_i q_{i+1} keep the chain
# bipartite.
VYALYI_TAGS = {"u": 7, "v": 8, "q": 9, "p": 10}


def vyalyi_block() -> Graph:
    """K_{3,3} with edges a1b1 and a2b2 replaced by ears of length three."""
    k33 = complete_bipartite(3, 3)
    h = bisubdivide(k33, 0, 3)  # a1b1 -> a1, 7, 8, b1
    h = bisubdivide(h, 4, 3)  # a2b2 -> a2, 9, 10, b2
    return h


def vyalyi_blocks(n: int) -> list[frozenset]:
    _positive(n)
    return [frozenset(range(10 * i + 1, 10 * i + 11)) for i in range(n)]


def vyalyi(n: int) -> Graph:
    """n blocks H_1..H_n (block i on vertices 10(i-1)+1..10i) linked by
    u_i p_{i+1} and v_i q_{i+1}, cyclically."""
    _positive(n)
    h = vyalyi_block()
    edges = []
    for i in range(n):
        off = 10 * i
        edges.extend((a + off, b + off) for a, b in h.edges)
    t = VYALYI_TAGS
    for i in range(n):
        j = (i + 1) % n
        edges.append((t["u"] + 10 * i, t["p"] + 10 * j))
        edges.append((t["v"] + 10 * i, t["q"] + 10 * j))
    g = Graph(10 * n, tuple(edges))
    if bipartition(g) is None:
        raise VerificationError("Vyalyi graph is not bipartite")
    if any(g.degree(v) != 3 for v in g.vertices):
        raise VerificationError("Vyalyi graph is not cubic")
    if not is_matching_covered(g):
        raise VerificationError("Vyalyi graph is not matching covered")
    return g


def k33_copies(n: int) -> list[frozenset]:
    """Vertex sets of n disjoint K_{3,3} copies in complete_bipartite(3n, 3n):
    consecutive triples on each side."""
    _positive(n)
    return [frozenset([*range(3 * i + 1, 3 * i + 4), *range(3 * n + 3 * i + 1, 3 * n + 3 * i + 4)]) for i in range(n)]


def conformal_lower_bound(g: Graph, parts: Sequence[Iterable[int]], pf_values: Sequence[int]) -> int:
    """sum(pf) - (len(parts) - 1), peeling the parts off one at a time and
    checking that each is conformal in what is left of the graph."""
    if len(parts) != len(pf_values) or not parts:
        raise DomainError("need one pfaffian number per part")
    sets = [frozenset(p) for p in parts]
    seen = set()
    for s in sets:
        if not s or s & seen:
            raise DomainError("parts must be non-empty and pairwise disjoint")
        if not s <= set(g.vertices):
            raise DomainError("part contains vertices outside the graph")
        seen |= s
    remaining = set(g.vertices)
    for s in sets:
        rest = remaining - s
        if not (is_matchable(g, s) and is_matchable(g, rest)):
            raise DomainError(f"part {sorted(s)} is not conformal in the remaining graph")
        remaining = rest
    return sum(pf_values) - (len(sets) - 1)


FAMILIES = {
    "complete-bipartite": (complete_bipartite, 2),
    "complete": (complete, 1),
    "cycle": (cycle, 1),
    "path": (path, 1),
    "petersen": (petersen, 0),
    "wheel": (wheel, 1),
    "vyalyi-block": (vyalyi_block, 0),
    "vyalyi": (vyalyi, 1),
}


def generate(name: str, params: Sequence[int] = ()) -> Graph:
    try:
        fn, arity = FAMILIES[name]
    except KeyError:
        raise DomainError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}") from None
    if len(params) != arity:
        raise DomainError(f"family {name!r} takes {arity} parameter(s)")
    return fn(*params)
