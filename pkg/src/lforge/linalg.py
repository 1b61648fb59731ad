"""Exact linear algebra over the rationals.

Two tools:

* Bareiss fraction-free elimination on integer matrices (rank, determinant,
  solving square systems).  Rational input is row-scaled to integers first.
* :class:`SparseEchelon`, an incremental row-echelon form over sparse vectors
  keyed by monomials, used to grow degree-wise spanning sets.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple


def _integer_rows(rows: Sequence[Sequence]) -> List[List[int]]:
    out = []
    for row in rows:
        row = [Fraction(v) for v in row]
        den = 1
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
        out.append([int(v * den) for v in row])
    return out


def bareiss_eliminate(rows: Sequence[Sequence], ncols: Optional[int] = None):
    """Fraction-free forward elimination.

    Returns ``(M, pivots, sign)`` where ``M`` is the integer echelon matrix,
    ``pivots`` the list of pivot (row, col) positions and ``sign`` the parity
    of row swaps.  Among candidate pivot rows the one with the largest
    magnitude entry is chosen.
    """
    M = _integer_rows(rows)
    if not M:
        return M, [], 1
    ncols = len(M[0]) if ncols is None else ncols
    nrows = len(M)
    pivots = []
    sign = 1
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        best = None
        for i in range(r, nrows):
            if M[i][c] and (best is None or abs(M[i][c]) > abs(M[best][c])):
                best = i
        if best is None:
            continue
        if best != r:
            M[r], M[best] = M[best], M[r]
            sign = -sign
        p = M[r][c]
        for i in range(r + 1, nrows):
            a = M[i][c]
            row_i, row_r = M[i], M[r]
            for j in range(c + 1, len(row_i)):
                row_i[j] = (p * row_i[j] - a * row_r[j]) // prev
            row_i[c] = 0
        pivots.append((r, c))
        prev = p
        r += 1
    return M, pivots, sign


def rank(rows: Sequence[Sequence]) -> int:
    if not rows or not len(rows[0]):
        return 0
    _, pivots, _ = bareiss_eliminate(rows)
    return len(pivots)


def determinant(rows: Sequence[Sequence]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square matrix")
    scale = Fraction(1)
    for row in rows:
        den = 1
        for v in row:
            den = den * Fraction(v).denominator // math.gcd(den, Fraction(v).denominator)
        scale /= den
    M, pivots, sign = bareiss_eliminate(rows)
    if len(pivots) < n:
        return Fraction(0)
    return sign * M[n - 1][n - 1] * scale


def solve(A: Sequence[Sequence], b: Sequence) -> List[Fraction]:
    """Solve the nonsingular square system ``A x = b`` exactly."""
    n = len(A)
    if n == 0:
        return []
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    M, pivots, _ = bareiss_eliminate(aug, ncols=n)
    if len(pivots) < n:
        raise ZeroDivisionError("singular system")
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(M[i][n])
        for j in range(i + 1, n):
            s -= M[i][j] * x[j]
        x[i] = s / M[i][i]
    return x


Vector = Dict[Hashable, Fraction]


class SparseEchelon:
    """Incrementally maintained echelon basis of sparse rational vectors.

    Each stored row is normalised so its pivot entry is 1 and the pivot key
    is absent from all rows inserted later.  ``insert`` returns ``True`` when
    the vector enlarges the span.
    """

    def __init__(self):
        self.rows: List[Tuple[Hashable, Vector]] = []

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Vector) -> Vector:
        v = {k: Fraction(c) for k, c in vec.items() if c}
        for key, row in self.rows:
            c = v.get(key)
            if c:
                for k, rc in row.items():
                    nv = v.get(k, 0) - c * rc
                    if nv:
                        v[k] = nv
                    else:
                        v.pop(k, None)
        return v

    def insert(self, vec: Vector) -> bool:
        v = self.reduce(vec)
        if not v:
            return False
        key = max(v)
        pc = v[key]
        row = {k: c / pc for k, c in v.items()}
        self.rows.append((key, row))
        return True

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)

