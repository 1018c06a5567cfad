"""Multigraphs with vertices 1..n, perfect matchings, cuts and contractions.

Edges are identified by their position in ``Graph.edges``.  Parallel edges
are allowed (contractions create them), loops are not.  Perfect matchings
are ``frozenset`` objects of edge ids; internally they are also kept as
integer bitmasks over edge ids, which is what the cut tests operate on.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import random
from collections import Counter, deque
from typing import Iterable, NamedTuple, Sequence

from . import limits as _limits
from .errors import DomainError, ParseError, VerificationError

Matching = frozenset


@dataclasses.dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("vertex count must be non-negative")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        for i, (u, v) in enumerate(edges):
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise DomainError(f"edge {i} = {u}{v} has an endpoint outside 1..{self.n}")
            if u == v:
                raise DomainError(f"edge {i} is a loop at {u}")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @functools.cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """``incidence[v]`` lists the ids of edges at ``v`` (index 0 unused)."""
        inc = [[] for _ in range(self.n + 1)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def other_end(self, e: int, v: int) -> int:
        u, w = self.edges[e]
        return w if v == u else u

    def neighbours(self, v: int) -> list[int]:
        return sorted({self.other_end(e, v) for e in self.incidence[v]})

    def is_simple(self) -> bool:
        keys = [frozenset(e) for e in self.edges]
        return len(set(keys)) == len(keys)

    def multiplicity(self) -> Counter:
        return Counter(frozenset(e) for e in self.edges)

    def __str__(self):
        return format_graph(self)


class Cycle(NamedTuple):
    """Closed walk ``vertices[0] .. vertices[-1]``; ``edges[i]`` joins
    ``vertices[i]`` and ``vertices[i + 1]`` (indices taken cyclically)."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]


@dataclasses.dataclass(frozen=True)
class Cut:
    shore: frozenset
    complement: frozenset
    edges: frozenset

    @property
    def trivial(self) -> bool:
        return len(self.shore) == 1 or len(self.complement) == 1


class Contraction(NamedTuple):
    graph: Graph
    vertex_map: dict  # old vertex -> new vertex
    edge_map: dict  # old edge id -> new edge id (edges inside the shore vanish)


class Subgraph(NamedTuple):
    graph: Graph
    vertex_map: dict
    edge_map: dict


@dataclasses.dataclass(frozen=True)
class Piece:
    graph: Graph
    kind: str  # "brick" or "brace"


@dataclasses.dataclass(frozen=True)
class Decomposition:
    pieces: tuple[Piece, ...]
    cuts_used: tuple[frozenset, ...]

    @property
    def bricks(self):
        return [p.graph for p in self.pieces if p.kind == "brick"]

    @property
    def braces(self):
        return [p.graph for p in self.pieces if p.kind == "brace"]


# ---------------------------------------------------------------- text format


def parse_graph(text: str) -> Graph:
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise ParseError("empty graph document")
    lineno, header = lines[0]
    try:
        n, m = (int(x) for x in header.split())
    except ValueError:
        raise ParseError(f"expected header 'n m', got {header!r}", lineno) from None
    if n < 0 or m < 0:
        raise ParseError("negative size in header", lineno)
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"header announces {m} edges but {len(body)} edge lines follow", lineno)
    edges = []
    for lineno, ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {ln!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint in {ln!r}", lineno) from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"endpoint out of range 1..{n} in {ln!r}", lineno)
        if u == v:
            raise ParseError(f"loop at vertex {u}", lineno)
        edges.append((u, v))
    return Graph(n, tuple(edges))


def format_graph(g: Graph) -> str:
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


# ------------------------------------------------------------ basic predicates


def edge_mask(edge_ids: Iterable[int]) -> int:
    mask = 0
    for e in edge_ids:
        mask |= 1 << e
    return mask


def mask_edges(mask: int) -> frozenset:
    out = []
    e = 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return frozenset(out)


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = {1}
    queue = deque([1])
    while queue:
        v = queue.popleft()
        for e in g.incidence[v]:
            w = g.other_end(e, v)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == g.n


def bipartition(g: Graph) -> tuple[frozenset, frozenset] | None:
    """Return the colour classes of a proper 2-colouring, or None."""
    colour = {}
    for s in g.vertices:
        if s in colour:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for e in g.incidence[v]:
                w = g.other_end(e, v)
                if w not in colour:
                    colour[w] = 1 - colour[v]
                    queue.append(w)
                elif colour[w] == colour[v]:
                    return None
    return (
        frozenset(v for v, c in colour.items() if c == 0),
        frozenset(v for v, c in colour.items() if c == 1),
    )


def is_bipartite(g: Graph) -> bool:
    return bipartition(g) is not None


# ----------------------------------------------------------- perfect matchings


def _matchings(g: Graph, allowed: int, forced: int = 0, first_only: bool = False):
    """Yield perfect matchings (as edge bitmasks) of the subgraph induced by the
    vertex bitmask ``allowed`` (bit v for vertex v), containing edge ``forced``'s
    bits, branching on the lowest uncovered vertex."""
    covered = 0
    start = 0
    for e in mask_edges(forced):
        u, v = g.edges[e]
        bits = (1 << u) | (1 << v)
        if covered & bits or (allowed & bits) != bits:
            return
        covered |= bits
        start |= 1 << e
    inc = g.incidence
    edges = g.edges

    def rec(covered, chosen):
        free = allowed & ~covered
        if not free:
            yield chosen
            return
        v = (free & -free).bit_length() - 1
        for e in inc[v]:
            a, b = edges[e]
            w = b if a == v else a
            if free >> w & 1:
                yield from rec(covered | (1 << v) | (1 << w), chosen | (1 << e))

    for found in rec(covered, start):
        yield found
        if first_only:
            return


def _vertex_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@functools.lru_cache(maxsize=256)
def matching_masks(g: Graph) -> tuple[int, ...]:
    """Bitmasks of all perfect matchings in canonical order."""
    if g.n % 2:
        raise DomainError(f"graph has an odd number of vertices ({g.n})")
    found = list(_matchings(g, _vertex_mask(g.vertices)))
    found.sort(key=lambda mk: sorted(mask_edges(mk)))
    return tuple(found)


def enumerate_perfect_matchings(g: Graph) -> list[frozenset]:
    """All perfect matchings, ordered lexicographically by sorted edge ids."""
    return [mask_edges(mk) for mk in matching_masks(g)]


def is_matchable(g: Graph, vertices: Iterable[int] | None = None) -> bool:
    """Whether the subgraph induced by ``vertices`` (default: all) has a
    perfect matching.  The empty vertex set is matchable."""
    allowed = _vertex_mask(g.vertices if vertices is None else vertices)
    if bin(allowed).count("1") % 2:
        return False
    return next(_matchings(g, allowed, first_only=True), None) is not None


def is_perfect_matching(g: Graph, m: Iterable[int]) -> bool:
    seen = set()
    count = 0
    for e in m:
        u, v = g.edges[e]
        if u in seen or v in seen:
            return False
        seen.update((u, v))
        count += 1
    return len(seen) == g.n


def is_matching_covered(g: Graph) -> bool:
    if g.m == 0 or g.n % 2 or not is_connected(g):
        return False
    allowed = _vertex_mask(g.vertices)
    covered = 0
    for e in range(g.m):
        if covered >> e & 1:
            continue
        found = next(_matchings(g, allowed, forced=1 << e, first_only=True), None)
        if found is None:
            return False
        covered |= found
    return True


def is_conformal(g: Graph, vertices: Iterable[int]) -> bool:
    vs = frozenset(vertices)
    if not vs <= set(g.vertices):
        raise DomainError("vertex set is not contained in the graph")
    rest = [v for v in g.vertices if v not in vs]
    return is_matchable(g, vs) and is_matchable(g, rest)


# ----------------------------------------------------------------------- cuts


def _check_shore(g: Graph, shore) -> frozenset:
    x = frozenset(shore)
    if not x <= set(g.vertices):
        raise DomainError("shore contains vertices outside the graph")
    if not x or len(x) == g.n:
        raise DomainError("a cut shore must be a non-empty proper vertex subset")
    return x


def make_cut(g: Graph, shore: Iterable[int]) -> Cut:
    x = _check_shore(g, shore)
    edges = frozenset(i for i, (u, v) in enumerate(g.edges) if (u in x) != (v in x))
    return Cut(x, frozenset(g.vertices) - x, edges)


def is_tight(g: Graph, c: Cut) -> bool:
    cm = edge_mask(c.edges)
    masks = matching_masks(g)
    if not masks:
        raise DomainError("tightness is only defined for matchable graphs")
    return all(bin(mk & cm).count("1") == 1 for mk in masks)


def is_separating(g: Graph, c: Cut) -> bool:
    """Edge criterion: every edge lies in a perfect matching meeting ``c``
    exactly once.  The definitional test (both contractions matching covered)
    is evaluated as well and must agree."""
    if not is_matching_covered(g):
        raise DomainError("separating cuts are only defined in matching covered graphs")
    cm = edge_mask(c.edges)
    reach = 0
    for mk in matching_masks(g):
        if bin(mk & cm).count("1") == 1:
            reach |= mk
    by_edges = reach == (1 << g.m) - 1
    by_definition = is_matching_covered(contract_shore(g, c.shore).graph) and is_matching_covered(
        contract_shore(g, c.complement).graph
    )
    if by_edges != by_definition:
        raise VerificationError(
            f"separating-cut tests disagree on shore {sorted(c.shore)}: "
            f"edge test {by_edges}, contraction test {by_definition}"
        )
    return by_edges


def contract_shore(g: Graph, shore: Iterable[int]) -> Contraction:
    """G/X: the shore becomes the last vertex; loops vanish, parallels stay."""
    x = _check_shore(g, shore)
    keep = [v for v in g.vertices if v not in x]
    vmap = {v: i + 1 for i, v in enumerate(keep)}
    hub = len(keep) + 1
    for v in x:
        vmap[v] = hub
    edges, emap = [], {}
    for i, (u, v) in enumerate(g.edges):
        if u in x and v in x:
            continue
        emap[i] = len(edges)
        edges.append((vmap[u], vmap[v]))
    return Contraction(Graph(hub, tuple(edges)), vmap, emap)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Subgraph:
    vs = sorted(set(vertices))
    vmap = {v: i + 1 for i, v in enumerate(vs)}
    edges, emap = [], {}
    for i, (u, v) in enumerate(g.edges):
        if u in vmap and v in vmap:
            emap[i] = len(edges)
            edges.append((vmap[u], vmap[v]))
    return Subgraph(Graph(len(vs), tuple(edges)), vmap, emap)


def relabel(g: Graph, order: Sequence[int]) -> Graph:
    """Renumber so that ``order[i]`` becomes vertex ``i + 1``.  Edge ids and the
    stored endpoint order of every edge are preserved."""
    if sorted(order) != list(g.vertices):
        raise DomainError("order must list every vertex exactly once")
    new = {v: i + 1 for i, v in enumerate(order)}
    return Graph(g.n, tuple((new[u], new[v]) for u, v in g.edges))


def _shores(n: int, sizes: Iterable[int]):
    """Vertex subsets of the given sizes that avoid vertex n (one shore per
    cut up to complementation)."""
    for size in sizes:
        yield from itertools.combinations(range(1, n), size)


def nontrivial_tight_cuts(g: Graph) -> list[Cut]:
    n = g.n
    _limits.check(n, _limits.current().decomposition_vertices, "vertex count")
    masks = matching_masks(g)
    ends = [((1 << u), (1 << v)) for u, v in g.edges]
    found = []
    # even shores meet every perfect matching an even number of times
    for shore in _shores(n, range(3, n - 2, 2)):
        xm = _vertex_mask(shore)
        cm = 0
        for i, (bu, bv) in enumerate(ends):
            if bool(xm & bu) != bool(xm & bv):
                cm |= 1 << i
        if all(bin(mk & cm).count("1") == 1 for mk in masks):
            found.append(make_cut(g, shore))
    return found


def tight_cut_decomposition(g: Graph, seed: int | None = None) -> Decomposition:
    """Split along non-trivial tight cuts until only bricks and braces remain.
    ``seed`` picks among the available tight cuts at every step; ``None``
    always takes the first shore in enumeration order."""
    if not is_matching_covered(g):
        raise DomainError("tight cut decomposition needs a matching covered graph")
    _limits.check(g.n, _limits.current().decomposition_vertices, "vertex count")
    rng = random.Random(seed) if seed is not None else None
    pieces, used = [], []
    stack = [g]
    while stack:
        h = stack.pop()
        cuts = nontrivial_tight_cuts(h)
        if not cuts:
            pieces.append(Piece(h, "brace" if is_bipartite(h) else "brick"))
            continue
        c = cuts[0] if rng is None else rng.choice(cuts)
        used.append(c.shore)
        stack.append(contract_shore(h, c.complement).graph)
        stack.append(contract_shore(h, c.shore).graph)
    return Decomposition(tuple(pieces), tuple(used))


# ------------------------------------------------ bicontraction, bisubdivision


def _bicontractible(g: Graph, v: int) -> bool:
    return g.n >= 4 and g.degree(v) == 2 and len(g.neighbours(v)) == 2


def bicontract(g: Graph, v: int) -> Graph:
    if g.degree(v) != 2:
        raise DomainError(f"vertex {v} has degree {g.degree(v)}, not 2")
    if g.n < 4:
        raise DomainError("bicontraction needs at least four vertices")
    nbrs = g.neighbours(v)
    if len(nbrs) != 2:
        raise DomainError(f"vertex {v} has a single neighbour joined by parallel edges")
    u, w = nbrs
    return contract_shore(g, {u, v, w}).graph


def retract(g: Graph) -> Graph:
    """Bicontract degree-2 vertices (lowest label first) while possible."""
    if not is_matching_covered(g):
        raise DomainError("retract is defined for matching covered graphs")
    while True:
        v = next((v for v in g.vertices if _bicontractible(g, v)), None)
        if v is None:
            return g
        g = bicontract(g, v)


def bisubdivide(g: Graph, edge_id: int, ear_length: int) -> Graph:
    """Replace edge ``edge_id`` = uv by a u-v path of ``ear_length`` edges.
    The first ear edge keeps the id; the others are appended in path order."""
    if ear_length < 1 or ear_length % 2 == 0:
        raise DomainError(f"ear length must be odd and positive, got {ear_length}")
    if not 0 <= edge_id < g.m:
        raise DomainError(f"no edge with id {edge_id}")
    if ear_length == 1:
        return g
    u, v = g.edges[edge_id]
    fresh = list(range(g.n + 1, g.n + ear_length))
    path = [u, *fresh, v]
    edges = list(g.edges)
    edges[edge_id] = (path[0], path[1])
    edges.extend((path[i], path[i + 1]) for i in range(1, ear_length))
    return Graph(g.n + ear_length - 1, tuple(edges))


# ---------------------------------------------------------------- isomorphism


def underlying_simple(g: Graph) -> Graph:
    seen, edges = set(), []
    for u, v in g.edges:
        key = frozenset((u, v))
        if key not in seen:
            seen.add(key)
            edges.append((u, v))
    return Graph(g.n, tuple(edges))


def _refine(graphs: Sequence[Graph]) -> list[dict]:
    """Joint colour refinement (multiplicity-aware) so colours are comparable
    across the given graphs."""
    mults = [g.multiplicity() for g in graphs]
    colours = [{v: g.degree(v) for v in g.vertices} for g in graphs]
    for _ in range(max((g.n for g in graphs), default=0)):
        sigs = []
        for g, mult, col in zip(graphs, mults, colours):
            sig = {}
            for v in g.vertices:
                around = sorted((col[w], mult[frozenset((v, w))]) for w in g.neighbours(v))
                sig[v] = (col[v], tuple(around))
            sigs.append(sig)
        palette = {s: i for i, s in enumerate(sorted({s for sig in sigs for s in sig.values()}))}
        new = [{v: palette[s] for v, s in sig.items()} for sig in sigs]
        if all(len(set(a.values())) == len(set(b.values())) for a, b in zip(new, colours)):
            return new
        colours = new
    return colours


def is_isomorphic(a: Graph, b: Graph, simple: bool = False) -> bool:
    """Multiplicity-preserving isomorphism test by backtracking over
    colour-refined candidates.  With ``simple`` the underlying simple graphs
    are compared."""
    lim = _limits.current().isomorphism_vertices
    _limits.check(a.n, lim, "vertex count")
    _limits.check(b.n, lim, "vertex count")
    if simple:
        a, b = underlying_simple(a), underlying_simple(b)
    if a.n != b.n or a.m != b.m:
        return False
    ca, cb = _refine([a, b])
    if sorted(ca.values()) != sorted(cb.values()):
        return False
    ma, mb = a.multiplicity(), b.multiplicity()
    order = sorted(a.vertices, key=lambda v: (sum(1 for x in ca.values() if x == ca[v]), v))
    image: dict[int, int] = {}
    used: set[int] = set()

    def extend(i):
        if i == len(order):
            return True
        x = order[i]
        for y in b.vertices:
            if y in used or cb[y] != ca[x]:
                continue
            if all(ma[frozenset((x, p))] == mb[frozenset((y, q))] for p, q in image.items()):
                image[x] = y
                used.add(y)
                if extend(i + 1):
                    return True
                del image[x]
                used.discard(y)
        return False

    return extend(0)


def same_graphs_up_to_isomorphism(xs: Sequence[Graph], ys: Sequence[Graph], simple: bool = True) -> bool:
    """Multiset equality of two graph lists under isomorphism."""
    if len(xs) != len(ys):
        return False
    pool = list(ys)
    for x in xs:
        for i, y in enumerate(pool):
            if is_isomorphic(x, y, simple=simple):
                del pool[i]
                break
        else:
            return False
    return True
