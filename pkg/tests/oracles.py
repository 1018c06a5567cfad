"""Brute-force reference implementations, independent of pflab's algorithms.

Graphs are passed as (n, edge list) so nothing here depends on the
library's data structures or its matching enumeration.
"""

from __future__ import annotations

import itertools

import numpy as np


def perfect_matchings(n, edges):
    """All perfect matchings as sorted tuples of edge ids, by trying every
    edge subset of size n/2."""
    if n % 2:
        return []
    out = []
    for subset in itertools.combinations(range(len(edges)), n // 2):
        seen = set()
        for e in subset:
            seen.update(edges[e])
        if len(seen) == n:
            out.append(subset)
    return out


def permutation_parity(seq):
    """+1 or -1 by counting inversions."""
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def matching_sign(edges, reversed_mask, matching):
    """Sign of the permutation listing tail, head of every matching arc,
    arcs taken in the given order."""
    seq = []
    for e in matching:
        u, v = edges[e]
        seq.extend((v, u) if reversed_mask >> e & 1 else (u, v))
    return permutation_parity(seq)


def pairings(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i, x in enumerate(rest):
        for p in pairings(rest[:i] + rest[i + 1:]):
            yield [(first, x)] + p


def pfaffian(a):
    """Sum over all pairings of {0..n-1}, each with its crossing sign."""
    n = len(a)
    if n % 2:
        return 0
    total = 0
    for p in pairings(list(range(n))):
        seq = [x for pair in p for x in pair]
        term = permutation_parity(seq)
        for i, j in p:
            term *= a[i][j]
        total += term
    return total


def determinant(a):
    """Leibniz formula; exact on integers."""
    n = len(a)
    total = 0
    for perm in itertools.permutations(range(n)):
        term = permutation_parity(perm)
        for i, j in enumerate(perm):
            term *= a[i][j]
            if not term:
                break
        total += term
    return total


def rank_by_minors(a):
    """Largest k with a non-zero k x k minor."""
    rows, cols = len(a), len(a[0]) if a else 0
    for k in range(min(rows, cols), 0, -1):
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                if determinant([[a[r][c] for c in cs] for r in rs]):
                    return k
    return 0


def sign_vectors(n, edges):
    """Distinct sign vectors over every one of the 2^m orientations,
    normalised so that matching 0 has sign +1."""
    ms = perfect_matchings(n, edges)
    out = set()
    for mask in range(1 << len(edges)):
        v = tuple(matching_sign(edges, mask, m) for m in ms)
        if v[0] < 0:
            v = tuple(-x for x in v)
        out.add(v)
    return sorted(out)


def pfaffian_number(n, edges, k_max=4):
    """Smallest k such that k of the sign vectors span the all-ones vector,
    tested by floating point rank on tiny +-1 matrices; None beyond k_max."""
    vecs = sign_vectors(n, edges)
    ones = np.ones((len(vecs[0]), 1))
    for k in range(1, k_max + 1):
        for combo in itertools.combinations(vecs, k):
            s = np.array(combo, dtype=float).T
            if np.linalg.matrix_rank(s) == np.linalg.matrix_rank(np.hstack([s, ones])):
                return k
    return None


def pf_star(n, edges):
    """max |Pf(A_D)| over all 2^m orientations of a simple graph."""
    best = 0
    for mask in range(1 << len(edges)):
        a = [[0] * n for _ in range(n)]
        for e, (u, v) in enumerate(edges):
            t, h = (v, u) if mask >> e & 1 else (u, v)
            a[t - 1][h - 1], a[h - 1][t - 1] = 1, -1
        best = max(best, abs(pfaffian(a)))
    return best


def tight_cut_shores(n, edges):
    """Odd shores X with 3 <= |X| <= n - 3 met exactly once by every perfect
    matching, one shore per cut (the side avoiding vertex n)."""
    ms = perfect_matchings(n, edges)
    out = []
    for size in range(3, n - 2, 2):
        for shore in itertools.combinations(range(1, n), size):
            s = set(shore)
            if all(sum((edges[e][0] in s) != (edges[e][1] in s) for e in m) == 1 for m in ms):
                out.append(frozenset(shore))
    return out
