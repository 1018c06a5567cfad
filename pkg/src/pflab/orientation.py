"""Orientations, matching signs, signature matrices and the pfaffian number.

An orientation stores one bit per edge id: bit ``e`` clear means the edge
``(u, v)`` is the arc u->v as stored in the graph, set means v->u.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import itertools
import time
from collections import deque
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import exact_linalg as la
from . import limits as _limits
from .errors import DomainError, VerificationError
from .graph_core import (
    Cut,
    Cycle,
    Graph,
    contract_shore,
    edge_mask,
    induced_subgraph,
    is_conformal,
    is_connected,
    is_matching_covered,
    is_perfect_matching,
    is_separating,
    make_cut,
    mask_edges,
    matching_masks,
)


@dataclasses.dataclass(frozen=True)
class Orientation:
    graph: Graph
    mask: int = 0

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.graph.m:
            raise DomainError("orientation mask has bits beyond the edge count")

    def arc(self, e: int) -> tuple[int, int]:
        """(tail, head) of edge ``e``."""
        u, v = self.graph.edges[e]
        return (v, u) if self.mask >> e & 1 else (u, v)

    def bits(self) -> str:
        return "".join("1" if self.mask >> e & 1 else "0" for e in range(self.graph.m))

    @classmethod
    def from_bits(cls, graph: Graph, bits: str) -> "Orientation":
        bits = bits.strip()
        if len(bits) != graph.m or set(bits) - {"0", "1"}:
            raise DomainError(f"expected a 0/1 string of length {graph.m}, got {bits!r}")
        return cls(graph, int(bits[::-1], 2) if bits else 0)


@dataclasses.dataclass(frozen=True)
class KOrientation:
    orientations: tuple[Orientation, ...]

    def __post_init__(self):
        object.__setattr__(self, "orientations", tuple(self.orientations))
        if not self.orientations:
            raise DomainError("a k-orientation needs k >= 1")
        g = self.orientations[0].graph
        if any(d.graph != g for d in self.orientations):
            raise DomainError("all orientations must share one graph")

    @property
    def graph(self) -> Graph:
        return self.orientations[0].graph

    @property
    def k(self) -> int:
        return len(self.orientations)

    def __iter__(self):
        return iter(self.orientations)

    def __getitem__(self, i):
        return self.orientations[i]

    def bits(self) -> list[str]:
        return [d.bits() for d in self.orientations]

    @classmethod
    def from_bits(cls, graph: Graph, bits: Iterable[str]) -> "KOrientation":
        return cls(tuple(Orientation.from_bits(graph, b) for b in bits))


@dataclasses.dataclass(frozen=True)
class SignMatrix:
    entries: tuple[tuple[int, ...], ...]
    matchings: tuple[frozenset, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


# ---------------------------------------------------------------------- signs


def _permutation_sign(perm: Sequence[int]) -> int:
    """Sign of ``i -> perm[i]`` for a permutation of 1..n given as a list."""
    n = len(perm)
    seen = [False] * (n + 1)
    sign = 1
    for start in range(1, n + 1):
        if seen[start]:
            continue
        length = 0
        v = start
        while not seen[v]:
            seen[v] = True
            v = perm[v - 1]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def matching_sign(d: Orientation, m: Iterable[int], order: Sequence[int] | None = None) -> int:
    """Sign of the permutation listing every matching arc tail first.  The
    edges are listed in ``order`` if given (the result does not depend on it)."""
    g = d.graph
    edges = list(m) if order is None else list(order)
    if not is_perfect_matching(g, edges):
        raise DomainError("matching_sign needs a perfect matching")
    if order is None:
        edges.sort()
    perm = []
    for e in edges:
        perm.extend(d.arc(e))
    return _permutation_sign(perm)


def cycle_sign(d: Orientation, q: Cycle) -> int:
    """+1 if an odd number of arcs are traversed forward, else -1."""
    size = len(q.edges)
    if size % 2:
        raise DomainError("the sign is only defined for even cycles")
    forward = 0
    for i, e in enumerate(q.edges):
        a, b = q.vertices[i], q.vertices[(i + 1) % size]
        if {a, b} != set(d.graph.edges[e]):
            raise DomainError(f"edge {e} does not join {a} and {b}")
        if d.arc(e)[0] == a:
            forward += 1
    return 1 if forward % 2 else -1


def forward_count(d: Orientation, vertices: Sequence[int], edges: Sequence[int]) -> int:
    """Forward arcs along the trail ``vertices[0], edges[0], vertices[1], ...``."""
    return sum(1 for i, e in enumerate(edges) if d.arc(e)[0] == vertices[i])


def alternating_cycles(g: Graph, m: Iterable[int], n: Iterable[int]) -> list[Cycle]:
    """The (M, N)-alternating cycles; each starts at its lowest vertex with
    the edge of ``m``."""
    m, n = frozenset(m), frozenset(n)
    diff = m ^ n
    at = {}
    for e in diff:
        for v in g.edges[e]:
            at.setdefault(v, []).append(e)
    cycles, done = [], set()
    for start in sorted(at):
        if start in done:
            continue
        vs, es = [start], []
        v, use_m = start, True
        while True:
            e = next(x for x in at[v] if (x in m) == use_m)
            es.append(e)
            v = g.other_end(e, v)
            use_m = not use_m
            if v == start:
                break
            vs.append(v)
        done.update(vs)
        cycles.append(Cycle(tuple(vs), tuple(es)))
    return cycles


def reverse(d: Orientation, edge_ids: Iterable[int]) -> Orientation:
    return Orientation(d.graph, d.mask ^ edge_mask(edge_ids))


def _cut_space_contains(g: Graph, mask: int) -> bool:
    basis = {}  # pivot bit -> vector, vectors are edge bitmasks
    for v in g.vertices:
        vec = edge_mask(g.incidence[v])
        while vec:
            top = vec.bit_length() - 1
            if top not in basis:
                basis[top] = vec
                break
            vec ^= basis[top]
    while mask:
        top = mask.bit_length() - 1
        if top not in basis:
            return False
        mask ^= basis[top]
    return True


def are_similar(d1: Orientation, d2: Orientation) -> bool:
    if d1.graph != d2.graph:
        raise DomainError("orientations of different graphs")
    return _cut_space_contains(d1.graph, d1.mask ^ d2.mask)


def _base_signs(g: Graph) -> list[int]:
    """Signs of the perfect matchings in the all-as-stored orientation."""
    zero = Orientation(g, 0)
    return [matching_sign(zero, mask_edges(mk)) for mk in matching_masks(g)]


def _sign_bits(g: Graph, masks: Sequence[int], base: Sequence[int], d_mask: int) -> int:
    """Bit r set iff matching r has sign -1 under the orientation ``d_mask``
    (uses sign_D(M) sign_D0(M) = (-1)^|M ∩ (D △ D0)|)."""
    out = 0
    for r, (mk, b) in enumerate(zip(masks, base)):
        neg = (b < 0) ^ (bin(mk & d_mask).count("1") & 1)
        out |= neg << r
    return out


def signature_matrix(kd: KOrientation) -> SignMatrix:
    g = kd.graph
    masks = matching_masks(g)
    if not masks:
        raise DomainError("graph has no perfect matching")
    base = _base_signs(g)
    cols = [_sign_bits(g, masks, base, d.mask) for d in kd]
    entries = tuple(tuple(-1 if c >> r & 1 else 1 for c in cols) for r in range(len(masks)))
    return SignMatrix(entries, tuple(mask_edges(mk) for mk in masks))


def solve_pfaffian_system(s: SignMatrix) -> list[Fraction] | None:
    rows, _ = s.shape
    return la.solve(s.entries, [1] * rows)


def rank_of_signature(s: SignMatrix) -> int:
    return la.rank(s.entries)


def is_pfaffian_orientation(d: Orientation) -> bool:
    col = {row[0] for row in signature_matrix(KOrientation((d,))).entries}
    return len(col) == 1


def is_pfaffian_korientation(kd: KOrientation) -> bool:
    return solve_pfaffian_system(signature_matrix(kd)) is not None


def spanning_tree(g: Graph) -> list[int]:
    """BFS tree from vertex 1, edges scanned in id order."""
    seen = {1}
    tree = []
    queue = deque([1])
    while queue:
        v = queue.popleft()
        for e in g.incidence[v]:
            w = g.other_end(e, v)
            if w not in seen:
                seen.add(w)
                tree.append(e)
                queue.append(w)
    return sorted(tree)


def orientation_class_representatives(g: Graph) -> list[Orientation]:
    """One orientation per similarity class: spanning tree edges as stored,
    all 2^(m-n+1) assignments on the remaining edges.  Class ``t`` puts bit
    ``j`` of ``t`` on the j-th non-tree edge."""
    lim = _limits.current()
    if g.n and not is_connected(g):
        raise DomainError("class representatives need a connected graph")
    _limits.check(g.m, lim.orientation_edges, "edge count")
    tree = set(spanning_tree(g)) if g.n else set()
    chords = [e for e in range(g.m) if e not in tree]
    _limits.check(len(chords), lim.cyclomatic, "cycle space dimension")
    reps = []
    for t in range(1 << len(chords)):
        mask = 0
        for j, e in enumerate(chords):
            if t >> j & 1:
                mask |= 1 << e
        reps.append(Orientation(g, mask))
    return reps


# ---------------------------------------------------------- pfaffian number


@dataclasses.dataclass(frozen=True)
class PfaffianNumber:
    k: int
    status: str  # "exact" or "lower_bound_only"
    witness: KOrientation | None
    alpha: tuple[Fraction, ...] | None
    class_indices: tuple[int, ...]
    classes: int
    distinct_vectors: int


_FEASIBLE: dict[tuple[int, int], bool] = {}


def _codes_feasible(k: int, mask: int) -> bool:
    """Whether the rows encoded in ``mask`` (bit c present = row with -1 in
    the positions of the set bits of c) admit x with row . x = 1."""
    key = (k, mask)
    hit = _FEASIBLE.get(key)
    if hit is None:
        full = (1 << k) - 1
        codes = [c for c in range(1 << k) if mask >> c & 1]
        if any(mask >> (c ^ full) & 1 for c in codes):
            # rows r and -r would need r.x = 1 and r.x = -1
            hit = False
        else:
            rows = [[-1 if c >> j & 1 else 1 for j in range(k)] for c in codes]
            hit = la.is_consistent(rows, [1] * len(rows))
        _FEASIBLE[key] = hit
    return hit


def _row_code_masks(bits: np.ndarray, prefix: Sequence[int], start: int, k: int):
    """Code masks for all subsets ``prefix + (l, m)`` with start <= l < m.
    Returns (pairs, masks) in lexicographic order of (l, m)."""
    count = bits.shape[0] - start
    if count < 2:
        return None, None
    li, mi = np.triu_indices(count, 1)
    li = li + start
    mi = mi + start
    pairs = np.stack([li, mi], axis=1)
    rows = bits.shape[1]
    j = len(prefix)
    if rows <= 64 and k <= 6:
        # code c is present iff some row lies in column j's negative set
        # exactly when bit j of c is set
        weights = np.left_shift(np.uint64(1), np.arange(rows, dtype=np.uint64))
        cols = (bits.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
        full = np.uint64((1 << rows) - 1)
        sides = (cols ^ full, cols)
        lsides = (sides[0][li], sides[1][li])
        msides = (sides[0][mi], sides[1][mi])
        masks = np.zeros(len(li), dtype=np.uint64)
        for pc in range(1 << j):
            pre = full
            for t, p in enumerate(prefix):
                pre &= sides[pc >> t & 1][p]
            if not pre:
                continue
            for lb in (0, 1):
                lp = lsides[lb] & pre
                for mb in (0, 1):
                    hit = (lp & msides[mb]) != 0
                    code = pc | lb << j | mb << (j + 1)
                    masks |= hit.astype(np.uint64) << np.uint64(code)
        return pairs, masks
    pc = np.zeros(rows, dtype=np.int64)
    for t, p in enumerate(prefix):
        pc |= bits[p].astype(np.int64) << t
    codes = pc[None, :] | (bits[li].astype(np.int64) << j) | (bits[mi].astype(np.int64) << (j + 1))
    if k <= 6:
        masks = np.bitwise_or.reduce(np.left_shift(np.uint64(1), codes.astype(np.uint64)), axis=1)
        return pairs, masks
    masks = [sum(1 << int(c) for c in set(row.tolist())) for row in codes]
    return pairs, masks


def _first_feasible_with_prefix(bits, prefix, k):
    start = prefix[-1] + 1 if prefix else 0
    pairs, masks = _row_code_masks(bits, prefix, start, k)
    if pairs is None:
        return None
    if k <= 6:
        uniq, inverse = np.unique(masks, return_inverse=True)
        ok = np.array([_codes_feasible(k, int(u)) for u in uniq], dtype=bool)
        hits = np.nonzero(ok[inverse])[0]
        if hits.size == 0:
            return None
        l, m = pairs[hits[0]]
        return (*prefix, int(l), int(m))
    for (l, m), mask in zip(pairs, masks):
        if _codes_feasible(k, mask):
            return (*prefix, int(l), int(m))
    return None


def _search_level(bits: np.ndarray, k: int, first: int | None, deadline: float | None):
    """First feasible k-subset (lexicographic) or None.  ``first`` restricts
    the smallest element.  Raises TimeoutError past the deadline."""
    n = bits.shape[0]
    if k == 2:
        if first is not None and first != 0:
            return None
        return _first_feasible_with_prefix(bits, (), 2)
    heads = range(n) if first is None else [first]
    for head in heads:
        for rest in itertools.combinations(range(head + 1, n), k - 3):
            if deadline is not None and time.monotonic() > deadline:
                raise TimeoutError
            found = _first_feasible_with_prefix(bits, (head, *rest), k)
            if found is not None:
                return found
    return None


def _worker(args):
    bits, k, first, deadline = args
    try:
        return first, _search_level(bits, k, first, deadline), False
    except TimeoutError:
        return first, None, True


def class_sign_vectors(g: Graph):
    """Sign vectors (bit r = matching r is negative) of every class
    representative, normalised so matching 0 is positive, deduplicated.
    Returns (representatives, [(vector, first class index)])."""
    reps = orientation_class_representatives(g)
    masks = matching_masks(g)
    base = _base_signs(g)
    full = (1 << len(masks)) - 1
    seen = {}
    for t, d in enumerate(reps):
        vec = _sign_bits(g, masks, base, d.mask)
        if vec & 1:
            vec ^= full
        seen.setdefault(vec, t)
    return reps, list(seen.items())


def pfaffian_number(
    g: Graph,
    k_budget: int | None = None,
    time_budget: float | None = None,
    jobs: int = 1,
) -> PfaffianNumber:
    """Smallest k such that some k class sign vectors span the all-ones
    vector, by exhaustive search in increasing k and lexicographic order."""
    if not is_matching_covered(g):
        raise DomainError("pfaffian_number needs a matching covered graph")
    reps, vectors = class_sign_vectors(g)
    rows = len(matching_masks(g))
    deadline = None if time_budget is None else time.monotonic() + time_budget
    bits = np.array([[v >> r & 1 for r in range(rows)] for v, _ in vectors], dtype=np.uint8)
    nvec = len(vectors)
    limit = nvec if k_budget is None else min(k_budget, nvec)

    def result(k, chosen, status):
        if chosen is None:
            return PfaffianNumber(k, status, None, None, (), len(reps), nvec)
        idx = tuple(vectors[i][1] for i in chosen)
        kd = KOrientation(tuple(reps[t] for t in idx))
        alpha = solve_pfaffian_system(signature_matrix(kd))
        if alpha is None:
            raise VerificationError("search witness does not solve the signature system")
        return PfaffianNumber(k, status, kd, tuple(alpha), idx, len(reps), nvec)

    if any(v == 0 for v, _ in vectors):
        return result(1, (next(i for i, (v, _) in enumerate(vectors) if v == 0),), "exact")
    for k in range(2, limit + 1):
        try:
            found = _run_level(bits, k, deadline, jobs)
        except TimeoutError:
            return result(k, None, "lower_bound_only")
        if found is not None:
            return result(k, found, "exact")
    return result(limit + 1, None, "lower_bound_only")


def _run_level(bits, k, deadline, jobs):
    if jobs <= 1 or k == 2:
        return _search_level(bits, k, None, deadline)
    tasks = [(bits, k, first, deadline) for first in range(bits.shape[0])]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_worker, t) for t in tasks]
        try:
            # deterministic merge: the smallest first element that succeeds
            for fut in futures:
                _, found, timed_out = fut.result()
                if timed_out:
                    raise TimeoutError
                if found is not None:
                    return found
        finally:
            for fut in futures:
                fut.cancel()
    return None


# ------------------------------------------------------- restriction, split


@dataclasses.dataclass(frozen=True)
class Restriction:
    korientation: KOrientation | None
    graph: Graph
    vertex_map: dict
    edge_map: dict


def _carry(kd: KOrientation, g: Graph, edge_map: dict) -> KOrientation:
    out = []
    for d in kd:
        mask = 0
        for old, new in edge_map.items():
            if d.mask >> old & 1:
                mask |= 1 << new
        out.append(Orientation(g, mask))
    return KOrientation(tuple(out))


def restrict_korientation(kd: KOrientation, vertices: Iterable[int]) -> tuple[Restriction, Restriction]:
    """Restrictions of ``kd`` to the subgraphs induced by ``vertices`` and by
    the remaining vertices (both renumbered in increasing order)."""
    g = kd.graph
    vs = frozenset(vertices)
    if not is_conformal(g, vs):
        raise DomainError("restriction needs a conformal vertex set")
    parts = []
    for side in (sorted(vs), [v for v in g.vertices if v not in vs]):
        sub = induced_subgraph(g, side)
        parts.append(Restriction(_carry(kd, sub.graph, sub.edge_map), sub.graph, sub.vertex_map, sub.edge_map))
    return parts[0], parts[1]


def contract_korientation(kd: KOrientation, shore: Iterable[int]) -> KOrientation:
    """The orientations inherited by G/shore."""
    c = contract_shore(kd.graph, shore)
    return _carry(kd, c.graph, c.edge_map)


@dataclasses.dataclass(frozen=True)
class SplitResult:
    result: KOrientation
    shores: tuple[frozenset, ...]
    paths: dict  # w -> (vertices, edges), traversed from the anchor end
    anchor_edge: int
    anchor_matching: frozenset
    alpha_inner: tuple[Fraction, ...]  # solution on G / complement
    alpha_outer: tuple[Fraction, ...]  # solution on G / shore


def _first_matching_meeting(masks, cm: int, f: int):
    """Canonically first perfect matching M with M ∩ C = {f}."""
    target = 1 << f
    return next((mk for mk in masks if mk & cm == target), None)


def _path_from_cycle(g: Graph, q: Cycle, inside: frozenset, start: int, end: int):
    """The part of cycle ``q`` lying in ``inside``, walked from start to end."""
    size = len(q.vertices)
    i = q.vertices.index(start)
    for step in (1, -1):
        vs, es = [start], []
        j = i
        while vs[-1] != end:
            if step == 1:
                e = q.edges[j]
                j = (j + 1) % size
            else:
                j = (j - 1) % size
                e = q.edges[j]
            w = q.vertices[j]
            if w not in inside:
                break
            es.append(e)
            vs.append(w)
        else:
            return tuple(vs), tuple(es)
    raise VerificationError(f"no path from {start} to {end} inside the shore")


def split_orientation_at_cut(g: Graph, c: Cut, kd: KOrientation) -> SplitResult:
    """Reverse a cut in every orientation so that both C-contractions of the
    resulting (similar) k-orientation are pfaffian."""
    if kd.graph != g:
        raise DomainError("k-orientation belongs to a different graph")
    if not is_separating(g, c):
        raise DomainError("cut not separating")
    if solve_pfaffian_system(signature_matrix(kd)) is None:
        raise DomainError("k-orientation is not pfaffian")
    x, xbar = c.shore, c.complement
    cm = edge_mask(c.edges)
    masks = matching_masks(g)
    e = min(c.edges)
    a, b = g.edges[e]
    u, v = (a, b) if a in x else (b, a)
    m_mask = _first_matching_meeting(masks, cm, e)
    if m_mask is None:
        raise VerificationError(f"no perfect matching meets the cut only in edge {e}")
    anchor = mask_edges(m_mask)

    ends = {}  # w -> lowest cut edge at w
    for f in sorted(c.edges):
        for w in g.edges[f]:
            ends.setdefault(w, f)

    paths = {}
    for w in sorted(ends):
        root, inside = (u, x) if w in x else (v, xbar)
        if w == root:
            paths[w] = ((w,), ())
            continue
        f = ends[w]
        mf = _first_matching_meeting(masks, cm, f)
        if mf is None:
            raise VerificationError(f"no perfect matching meets the cut only in edge {f}")
        cyc = next(q for q in alternating_cycles(g, anchor, mask_edges(mf)) if e in q.edges)
        if set(cyc.edges) & c.edges != {e, f}:
            raise VerificationError("alternating cycle crosses the cut outside {e, f}")
        path = _path_from_cycle(g, cyc, inside, root, w)
        if len(path[1]) % 2:
            raise VerificationError(f"path to {w} has odd length")
        paths[w] = path

    shores, result = [], []
    for d0 in kd:
        s = frozenset(w for w, (pv, pe) in paths.items() if forward_count(d0, pv, pe) % 2)
        shores.append(s)
        result.append(reverse(d0, make_cut(g, s).edges) if s and len(s) < g.n else d0)
    new = KOrientation(tuple(result))

    for d in new:
        for w, (pv, pe) in paths.items():
            if forward_count(d, pv, pe) % 2:
                raise VerificationError(f"path to {w} still has an odd number of forward arcs")
    alpha_inner = solve_pfaffian_system(signature_matrix(contract_korientation(new, xbar)))
    alpha_outer = solve_pfaffian_system(signature_matrix(contract_korientation(new, x)))
    if alpha_inner is None or alpha_outer is None:
        raise VerificationError("a C-contraction of the split k-orientation is not pfaffian")
    return SplitResult(new, tuple(shores), paths, e, anchor, tuple(alpha_inner), tuple(alpha_outer))
