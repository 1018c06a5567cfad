"""Exact rational linear algebra, Hadamard and Khatri-Rao products, pfaffians.

Matrices are lists of rows; entries are converted to ``Fraction`` on entry so
every result is exact.
"""

from __future__ import annotations

import dataclasses
import math
from fractions import Fraction
from typing import Callable, Sequence

from . import limits as _limits
from .errors import DomainError, VerificationError

Vector = Sequence
Matrix = Sequence[Sequence]


def as_fractions(a: Matrix) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in a]


def _shape(a: Matrix) -> tuple[int, int]:
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if any(len(r) != cols for r in a):
        raise DomainError("ragged matrix")
    return rows, cols


def hadamard(u: Vector, v: Vector) -> list:
    if len(u) != len(v):
        raise DomainError(f"length mismatch {len(u)} vs {len(v)}")
    return [x * y for x, y in zip(u, v)]


def khatri_rao(a: Matrix, b: Matrix) -> list[list]:
    """Row ``i * len(b) + j`` (0-based) is ``a[i] ⊙ b[j]``."""
    _, na = _shape(a)
    _, nb = _shape(b)
    if a and b and na != nb:
        raise DomainError(f"column mismatch {na} vs {nb}")
    return [hadamard(ai, bj) for ai in a for bj in b]


def mat_vec(a: Matrix, x: Vector) -> list:
    return [sum((p * q for p, q in zip(row, x)), Fraction(0)) for row in a]


def rref(a: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = as_fractions(a)
    rows, cols = _shape(m)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def solve(a: Matrix, b: Vector) -> list[Fraction] | None:
    """One exact solution of ``a x = b`` (free variables set to 0), or None."""
    rows, cols = _shape(a)
    if len(b) != rows:
        raise DomainError("right-hand side length does not match the row count")
    if rows == 0:
        return [Fraction(0)] * cols
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    m, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for row, c in zip(m, pivots):
        x[c] = row[cols]
    if mat_vec(a, x) != [Fraction(v) for v in b]:
        raise VerificationError("elimination produced a vector that does not solve the system")
    return x


def is_consistent(a: Matrix, b: Vector) -> bool:
    """Whether the integer system ``a x = b`` has a rational solution, by
    fraction-free elimination on the augmented matrix."""
    rows = [[int(x) for x in r] + [int(bi)] for r, bi in zip(a, b)]
    if not rows:
        return True
    cols = len(rows[0]) - 1
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                row = [piv[c] * x - f * y for x, y in zip(rows[i], piv)]
                g = math.gcd(*row)
                rows[i] = [x // g for x in row] if g > 1 else row
        r += 1
    return all(any(row[:cols]) or not row[cols] for row in rows[r:])


def nullspace(a: Matrix) -> list[list[Fraction]]:
    _, cols = _shape(a)
    if not a:
        return [[Fraction(int(i == j)) for j in range(cols)] for i in range(cols)]
    m, pivots = rref(a)
    basis = []
    for f in range(cols):
        if f in pivots:
            continue
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, c in zip(m, pivots):
            v[c] = -row[f]
        basis.append(v)
    return basis


def determinant(a: Matrix) -> Fraction:
    m = as_fractions(a)
    n, cols = _shape(m)
    if n != cols:
        raise DomainError("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


# ------------------------------------------------------------ rank bound check


@dataclasses.dataclass(frozen=True)
class KhatriRaoReport:
    rank_a: int
    rank_b: int
    n: int
    holds: bool

    def as_dict(self):
        return {"rank_a": self.rank_a, "rank_b": self.rank_b, "n": self.n, "holds": self.holds}


def verify_khatri_rao_bound(a: Matrix, b: Matrix, alpha: Vector) -> KhatriRaoReport:
    """Given ``(a ⊛ b) alpha = 1`` with alpha zero-free, report whether
    ``rank(a) + rank(b) - 1 <= n``."""
    _, n = _shape(a)
    if len(alpha) != n:
        raise DomainError("alpha length differs from the column count")
    if any(Fraction(x) == 0 for x in alpha):
        raise DomainError("hypothesis violated: alpha has a zero entry")
    if mat_vec(khatri_rao(a, b), alpha) != [Fraction(1)] * (len(a) * len(b)):
        raise DomainError("hypothesis violated: alpha does not solve (A * B) x = 1")
    ra, rb = rank(a), rank(b)
    return KhatriRaoReport(ra, rb, n, ra + rb - 1 <= n)


# ------------------------------------------------------------------ pfaffians


def pfaffian_expand(entry: Callable[[int, int], object], order: int, zero, one):
    """Pfaffian by expansion along the first remaining row, memoised on the
    set of remaining indices.  ``entry(i, j)`` for i < j gives the upper
    triangle; the ring only needs +, - and *."""
    if order % 2:
        return zero
    memo = {0: one}

    def pf(rest: int):
        if rest in memo:
            return memo[rest]
        idx = [i for i in range(order) if rest >> i & 1]
        first = idx[0]
        total = zero
        for p in range(1, len(idx)):
            j = idx[p]
            a = entry(first, j)
            if a == zero:
                continue
            sub = pf(rest & ~(1 << first) & ~(1 << j))
            if sub == zero:
                continue
            term = a * sub
            total = total + term if p % 2 == 1 else total - term
        memo[rest] = total
        return total

    return pf((1 << order) - 1)


def check_skew(a: Matrix) -> int:
    n, cols = _shape(a)
    if n != cols:
        raise DomainError("skew matrix must be square")
    for i in range(n):
        if a[i][i] != 0:
            raise DomainError(f"non-zero diagonal entry at {i}")
        for j in range(i + 1, n):
            if a[i][j] != -a[j][i]:
                raise DomainError(f"entries ({i},{j}) and ({j},{i}) are not opposite")
    return n


def pfaffian_int(a: Matrix) -> int:
    """Exact pfaffian of an integer skew-symmetric matrix (odd order: 0,
    order 0: 1)."""
    n = check_skew(a)
    _limits.check(n, _limits.current().pfaffian_order, "matrix order")
    return pfaffian_expand(lambda i, j: int(a[i][j]), n, 0, 1)


def skew_adjacency(d) -> list[list[int]]:
    """Skew adjacency matrix of an orientation of a simple graph."""
    g = d.graph
    if not g.is_simple():
        raise DomainError("skew adjacency matrix needs a simple graph")
    a = [[0] * g.n for _ in range(g.n)]
    for e in range(g.m):
        t, h = d.arc(e)
        a[t - 1][h - 1] = 1
        a[h - 1][t - 1] = -1
    return a


def pf_star(g) -> int:
    """Largest ``|Pf(A_D)|`` over orientations; one orientation per
    similarity class suffices."""
    from .orientation import orientation_class_representatives

    if not g.is_simple():
        raise DomainError("Pf* is defined through A_D, which needs a simple graph")
    best = 0
    for d in orientation_class_representatives(g):
        best = max(best, abs(pfaffian_int(skew_adjacency(d))))
    return best


# ----------------------------------------------------------------- JSON forms


def fraction_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def matrix_to_json(a: Matrix) -> list[list[str]]:
    return [[fraction_str(x) for x in row] for row in a]


def matrix_from_json(rows) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]
