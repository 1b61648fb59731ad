"""Finitely generated graded subalgebras of the polynomial ring.

Degree pieces ``A_d`` are built from products of the generators and
row-reduced exactly.  Projection onto ``A`` is the apolar-orthogonal
projection, degree by degree; membership is "the projection leaves f fixed".
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence

from .apolar import _pair
from .errors import DimensionError, GradingError
from .linalg import SparseEchelon, solve
from .poly import Polynomial, homogeneous_components


@dataclass(frozen=True)
class ProjectionResult:
    projection: Polynomial
    residual: Polynomial
    member: bool


def primitive(f: Polynomial) -> Polynomial:
    """Scale ``f`` to coprime integer coefficients with a positive leading term."""
    if not f:
        return f
    from math import gcd

    den = 1
    num = 0
    for _, c in f.items():
        den = den * c.denominator // gcd(den, c.denominator)
    for _, c in f.items():
        num = gcd(num, int(c * den))
    lead = f.sorted_terms()[0][1]
    s = Fraction(den, num)
    return f.scale(s if lead > 0 else -s)


class GradedSubalgebra:
    """Subalgebra of R[x1..xn] generated by homogeneous polynomials.

    Degree bases are computed lazily and cached; the cache is filled under a
    lock so concurrent readers never see a half-built degree.
    """

    def __init__(self, generators: Sequence[Polynomial], n: int | None = None):
        gens = [g for g in generators]
        if n is None:
            if not gens:
                raise ValueError("need at least one generator or an explicit dimension")
            n = gens[0].n
        for g in gens:
            if g.n != n:
                raise DimensionError(f"generator in dimension {g.n}, algebra in {n}")
            if not g or not g.is_homogeneous() or g.degree < 1:
                raise GradingError(f"generator {g} is not homogeneous of positive degree")
        self.n = n
        self.generators = tuple(gens)
        self._basis: Dict[int, List[Polynomial]] = {0: [Polynomial.constant(1, n)]}
        self._gram: Dict[int, list] = {}
        self._lock = threading.RLock()

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"GradedSubalgebra(n={self.n}, generators=[{gens}])"

    @property
    def max_generator_degree(self) -> int:
        return max((g.degree for g in self.generators), default=0)

    # -- degree pieces ------------------------------------------------
    def degree_basis(self, d: int) -> List[Polynomial]:
        if d < 0:
            raise ValueError("degree must be non-negative")
        cached = self._basis.get(d)
        if cached is not None:
            return list(cached)
        with self._lock:
            if d not in self._basis:
                for e in range(1, d):
                    if e not in self._basis:
                        self._build(e)
                self._build(d)
            return list(self._basis[d])

    def _build(self, d: int) -> None:
        ech = SparseEchelon()
        basis = []
        for g in self.generators:
            e = g.degree
            if e > d:
                continue
            for b in self._basis[d - e]:
                p = g * b
                if ech.insert(p._terms):
                    basis.append(p)
        self._basis[d] = basis

    def hilbert_dims(self, D: int) -> List[int]:
        return [len(self.degree_basis(d)) for d in range(D + 1)]

    def decomposable_span(self, d: int) -> SparseEchelon:
        """Echelon form of (A+ . A+)_d, products of two positive-degree pieces."""
        ech = SparseEchelon()
        for g in self.generators:
            e = g.degree
            if e >= d:
                continue
            for b in self.degree_basis(d - e):
                ech.insert((g * b)._terms)
        return ech

    # -- projection ---------------------------------------------------
    def _gram_matrix(self, d: int):
        G = self._gram.get(d)
        if G is None:
            B = self.degree_basis(d)
            G = [[_pair(bi, bj) for bj in B] for bi in B]
            self._gram[d] = G
        return G

    def _project_homogeneous(self, f: Polynomial, d: int) -> Polynomial:
        B = self.degree_basis(d)
        if not B:
            return Polynomial.zero(self.n)
        G = self._gram_matrix(d)
        rhs = [_pair(b, f) for b in B]
        if not any(rhs):
            return Polynomial.zero(self.n)
        coeffs = solve(G, rhs)
        out = Polynomial.zero(self.n)
        for c, b in zip(coeffs, B):
            if c:
                out = out + b.scale(c)
        return out

    def reynolds(self, f: Polynomial) -> ProjectionResult:
        if f.n != self.n:
            raise DimensionError(f"polynomial in dimension {f.n}, algebra in {self.n}")
        proj = Polynomial.zero(self.n)
        for d, fd in homogeneous_components(f).items():
            proj = proj + self._project_homogeneous(fd, d)
        residual = f - proj
        return ProjectionResult(proj, residual, residual.is_zero())

    def contains(self, f: Polynomial) -> bool:
        return self.reynolds(f).member

    # -- generators ---------------------------------------------------
    def minimal_generators(self, D: int) -> List[Polynomial]:
        """Generators of degree <= D that are not products of lower-degree elements.

        The result is complete up to degree ``D`` only; no global minimality
        claim is made beyond that.
        """
        out = []
        for d in range(1, D + 1):
            gens_d = [g for g in self.generators if g.degree == d]
            if not gens_d:
                continue
            ech = self.decomposable_span(d)
            for g in gens_d:
                if ech.insert(g._terms):
                    out.append(g)
        return out


def degree_basis(A: GradedSubalgebra, d: int) -> List[Polynomial]:
    return A.degree_basis(d)


def hilbert_dims(A: GradedSubalgebra, D: int) -> List[int]:
    return A.hilbert_dims(D)


def reynolds(A: GradedSubalgebra, f: Polynomial) -> ProjectionResult:
    return A.reynolds(f)


def contains(A: GradedSubalgebra, f: Polynomial) -> bool:
    return A.contains(f)


def minimal_generators(A: GradedSubalgebra, D: int) -> List[Polynomial]:
    return A.minimal_generators(D)
