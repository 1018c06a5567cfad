"""Symbolic pfaffians over Z[t_1..t_d]/(t_i^2 - 1).

Exponent vectors in GF(2)^d are stored as integers (bit i = exponent of
``t_{i+1}``) and printed as bit strings with ``t_1`` first.
"""

from __future__ import annotations

import dataclasses
from collections import defaultdict
from typing import Iterable

from . import limits as _limits
from .errors import DomainError, VerificationError
from .exact_linalg import pf_star, pfaffian_expand
from .graph_core import Graph, matching_masks, mask_edges
from .orientation import (
    KOrientation,
    Orientation,
    matching_sign,
    signature_matrix,
    solve_pfaffian_system,
)


def bitstring(x: int, d: int) -> str:
    return "".join("1" if x >> i & 1 else "0" for i in range(d))


def parse_bitstring(s: str) -> int:
    if set(s) - {"0", "1"}:
        raise DomainError(f"not a bit string: {s!r}")
    return int(s[::-1], 2) if s else 0


class RingPoly:
    """Element of R_d: a sparse map exponent vector -> non-zero integer."""

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms=None):
        if d < 0:
            raise DomainError("negative ring dimension")
        self.d = d
        self.terms = {x: c for x, c in (terms or {}).items() if c}
        if any(x >> d for x in self.terms):
            raise DomainError(f"exponent vector longer than d = {d}")

    @classmethod
    def const(cls, d: int, c: int) -> "RingPoly":
        return cls(d, {0: c})

    @classmethod
    def monomial(cls, d: int, exponent: int, c: int = 1) -> "RingPoly":
        return cls(d, {exponent: c})

    def _coerce(self, other) -> "RingPoly":
        if isinstance(other, int):
            return RingPoly.const(self.d, other)
        if not isinstance(other, RingPoly):
            return NotImplemented
        if other.d != self.d:
            raise DomainError(f"ring dimension mismatch {self.d} vs {other.d}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for x, c in other.terms.items():
            out[x] = out.get(x, 0) + c
        return RingPoly(self.d, out)

    __radd__ = __add__

    def __neg__(self):
        return RingPoly(self.d, {x: -c for x, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = defaultdict(int)
        for x, a in self.terms.items():
            for y, b in other.terms.items():
                out[x ^ y] += a * b
        return RingPoly(self.d, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == ({0: other} if other else {})
        if isinstance(other, RingPoly):
            return self.d == other.d and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.d, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for x in sorted(self.terms):
            mono = "*".join(f"t{i + 1}" for i in range(self.d) if x >> i & 1)
            c = self.terms[x]
            parts.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(parts)

    def at_ones(self) -> int:
        """Image under t_i -> 1."""
        return sum(self.terms.values())

    def abs_coefficient_sum(self) -> int:
        return sum(abs(c) for c in self.terms.values())

    def to_json(self) -> dict:
        return {bitstring(x, self.d): c for x, c in sorted(self.terms.items())}

    @classmethod
    def from_json(cls, d: int, data: dict) -> "RingPoly":
        return cls(d, {parse_bitstring(k): int(v) for k, v in data.items()})


def ring_add(p: RingPoly, q: RingPoly) -> RingPoly:
    return p + q


def ring_mul(p: RingPoly, q: RingPoly) -> RingPoly:
    return p * q


@dataclasses.dataclass(frozen=True)
class SymbolicLabeling:
    d: int
    tau: tuple[int, ...]  # per edge id

    def __post_init__(self):
        object.__setattr__(self, "tau", tuple(self.tau))
        if self.d < 0 or any(t < 0 or t >> self.d for t in self.tau):
            raise DomainError(f"labels must lie in GF(2)^{self.d}")

    def to_json(self) -> dict:
        return {"d": self.d, "tau": {str(e): bitstring(t, self.d) for e, t in enumerate(self.tau)}}

    @classmethod
    def from_json(cls, data: dict, m: int | None = None) -> "SymbolicLabeling":
        d = int(data["d"])
        raw = {int(k): parse_bitstring(v) for k, v in data["tau"].items()}
        size = m if m is not None else (max(raw) + 1 if raw else 0)
        if set(raw) - set(range(size)) or len(raw) != size:
            raise DomainError("labeling must give exactly one label per edge id")
        return cls(d, tuple(raw[e] for e in range(size)))


def zero_labeling(g: Graph, d: int = 0) -> SymbolicLabeling:
    return SymbolicLabeling(d, (0,) * g.m)


def standard_basis_labeling(g: Graph) -> SymbolicLabeling:
    return SymbolicLabeling(g.m, tuple(1 << e for e in range(g.m)))


def tau_of_matching(lab: SymbolicLabeling, m: Iterable[int]) -> int:
    out = 0
    for e in m:
        out ^= lab.tau[e]
    return out


def _check(d0: Orientation, lab: SymbolicLabeling):
    if len(lab.tau) != d0.graph.m:
        raise DomainError("labeling and orientation disagree on the edge count")
    _limits.check(lab.d, _limits.current().ring_dimension, "ring dimension")


def symbolic_obstruction(d0: Orientation, lab: SymbolicLabeling):
    """A pair of perfect matchings with equal labels but different signs, or
    None when the symbolic orientation is pfaffian."""
    _check(d0, lab)
    buckets = {}
    for mk in matching_masks(d0.graph):
        m = mask_edges(mk)
        key = tau_of_matching(lab, m)
        sign = matching_sign(d0, m)
        if key in buckets and buckets[key][0] != sign:
            return buckets[key][1], m
        buckets.setdefault(key, (sign, m))
    return None


def is_pfaffian_symbolic(d0: Orientation, lab: SymbolicLabeling) -> bool:
    return symbolic_obstruction(d0, lab) is None


def symbolic_matrix(d0: Orientation, lab: SymbolicLabeling) -> list[list[RingPoly]]:
    _check(d0, lab)
    g = d0.graph
    if not g.is_simple():
        raise DomainError("the symbolic matrix needs a simple graph")
    zero = RingPoly(lab.d)
    a = [[zero] * g.n for _ in range(g.n)]
    for e in range(g.m):
        t, h = d0.arc(e)
        mono = RingPoly.monomial(lab.d, lab.tau[e])
        a[t - 1][h - 1] = mono
        a[h - 1][t - 1] = -mono
    return a


def pfaffian_ring(a: list[list[RingPoly]]) -> RingPoly:
    n = len(a)
    if any(len(row) != n for row in a):
        raise DomainError("matrix must be square")
    d = a[0][0].d if n else 0
    for i in range(n):
        if a[i][i] != 0:
            raise DomainError(f"non-zero diagonal entry at {i}")
        for j in range(i + 1, n):
            if a[i][j] != -a[j][i]:
                raise DomainError(f"entries ({i},{j}) and ({j},{i}) are not opposite")
    _limits.check(n, _limits.current().pfaffian_order, "matrix order")
    return pfaffian_expand(lambda i, j: a[i][j], n, RingPoly(d), RingPoly.const(d, 1))


def count_via_symbolic(d0: Orientation, lab: SymbolicLabeling) -> int:
    if not is_pfaffian_symbolic(d0, lab):
        raise DomainError("symbolic orientation is not pfaffian; the count would be wrong")
    return pfaffian_ring(symbolic_matrix(d0, lab)).abs_coefficient_sum()


def labeling_from_korientation(kd: KOrientation) -> tuple[Orientation, SymbolicLabeling]:
    """(D_k, tau) with tau(e)_i = 1 iff e is oriented differently in D_i and D_k.
    No pfaffian check; see symbolic_from_korientation."""
    last = kd[kd.k - 1]
    diffs = [d.mask ^ last.mask for d in kd.orientations[:-1]]
    tau = []
    for e in range(kd.graph.m):
        t = 0
        for i, diff in enumerate(diffs):
            if diff >> e & 1:
                t |= 1 << i
        tau.append(t)
    return last, SymbolicLabeling(kd.k - 1, tuple(tau))


def symbolic_from_korientation(kd: KOrientation) -> tuple[Orientation, SymbolicLabeling]:
    """The symbolic orientation of a pfaffian k-orientation, checked."""
    if solve_pfaffian_system(signature_matrix(kd)) is None:
        raise DomainError("k-orientation is not pfaffian")
    last, lab = labeling_from_korientation(kd)
    bad = symbolic_obstruction(last, lab)
    if bad is not None:
        raise VerificationError(f"constructed symbolic orientation is not pfaffian: {bad}")
    return last, lab


@dataclasses.dataclass(frozen=True)
class SpfBound:
    matchings: int
    pf_star: int
    bound: int | None  # None when Pf* = 0

    @property
    def unbounded(self) -> bool:
        return self.bound is None


def spf_lower_bound(g: Graph) -> SpfBound:
    """ceil(1/2 log2(|M| / Pf*)), computed in integers: the least b >= 0 with
    4^b * Pf* >= |M|."""
    count = len(matching_masks(g))
    star = pf_star(g)
    if star == 0:
        return SpfBound(count, 0, None)
    b = 0
    while (4 ** b) * star < count:
        b += 1
    return SpfBound(count, star, b)
