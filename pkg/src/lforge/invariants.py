"""Finite orthogonal groups acting on polynomials, and their invariant rings."""

from __future__ import annotations

import itertools
import math
import random
import re
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .algebra import GradedSubalgebra, primitive
from .errors import DimensionError, FloatModeError, GroupError
from .linalg import SparseEchelon
from .poly import Polynomial, monomials_of_degree, r_squared, substitute_linear

Matrix = Tuple[Tuple[Fraction, ...], ...]

FLOAT_TOL = 1e-12


def _identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n))
        for i in range(n)
    )


def _transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


class FiniteOrthogonalGroup:
    """An explicit finite subgroup of O(n).

    In exact mode entries are :class:`Fraction` and all axioms are checked
    exactly.  Float mode (``exact=False``) holds numpy arrays and checks the
    axioms to within ``1e-12``; it cannot be used for averaging.
    """

    def __init__(self, elements: Sequence, exact: bool = True, name: str | None = None):
        if not elements:
            raise GroupError("a group needs at least one element")
        self.exact = exact
        self.name = name
        if exact:
            els = [tuple(tuple(Fraction(v) for v in row) for row in m) for m in elements]
        else:
            els = [np.asarray(m, dtype=float) for m in elements]
        n = len(els[0])
        for m in els:
            if len(m) != n or any(len(row) != n for row in m):
                raise DimensionError("all group elements must be n x n")
        self.n = n
        self.elements = els
        self._verify()

    @classmethod
    def generated_by(cls, generators: Sequence, name: str | None = None) -> "FiniteOrthogonalGroup":
        gens = [tuple(tuple(Fraction(v) for v in row) for row in m) for m in generators]
        n = len(gens[0])
        elements = [_identity(n)]
        seen = set(elements)
        frontier = list(elements)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    p = _matmul(a, g)
                    if p not in seen:
                        if len(seen) > 10000:
                            raise GroupError("generated group is too large or infinite")
                        seen.add(p)
                        elements.append(p)
                        nxt.append(p)
            frontier = nxt
        return cls(elements, name=name)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self):
        label = self.name or "group"
        return f"FiniteOrthogonalGroup({label}, n={self.n}, order={self.order}, exact={self.exact})"

    def _verify(self) -> None:
        if self.exact:
            ident = _identity(self.n)
            table = set(self.elements)
            if len(table) != len(self.elements):
                raise GroupError("duplicate group elements")
            if ident not in table:
                raise GroupError("identity missing")
            for m in self.elements:
                if _matmul(_transpose(m), m) != ident:
                    raise GroupError(f"element {m} is not orthogonal")
                if _transpose(m) not in table:
                    raise GroupError("not closed under inverses")
            for a in self.elements:
                for b in self.elements:
                    if _matmul(a, b) not in table:
                        raise GroupError("not closed under products")
        else:
            I = np.eye(self.n)
            stack = np.array(self.elements)

            def member(m):
                return bool(np.any(np.all(np.abs(stack - m) <= FLOAT_TOL, axis=(1, 2))))

            if not member(I):
                raise GroupError("identity missing")
            for m in self.elements:
                if np.max(np.abs(m.T @ m - I)) > FLOAT_TOL:
                    raise GroupError("element is not orthogonal")
                if not member(m.T):
                    raise GroupError("not closed under inverses")
            for a in self.elements:
                for b in self.elements:
                    if not member(a @ b):
                        raise GroupError("not closed under products")


# ----------------------------------------------------------------------
# built-in groups
# ----------------------------------------------------------------------

def neg_id(n: int) -> FiniteOrthogonalGroup:
    ident = _identity(n)
    neg = tuple(tuple(-v for v in row) for row in ident)
    els = [ident] if n == 0 else [ident, neg]
    return FiniteOrthogonalGroup(els, name=f"neg_id({n})")


def signed_permutations(n: int) -> FiniteOrthogonalGroup:
    els = []
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            m = [[Fraction(0)] * n for _ in range(n)]
            for i, j in enumerate(perm):
                m[i][j] = Fraction(signs[i])
            els.append(tuple(tuple(r) for r in m))
    els.sort(key=lambda m: m != _identity(n))
    return FiniteOrthogonalGroup(els, name=f"signed_permutations({n})")


def cyclic_sign(n: int, axis: int) -> FiniteOrthogonalGroup:
    """Order-2 group flipping the sign of coordinate ``axis`` (1-based)."""
    if not 1 <= axis <= n:
        raise DimensionError(f"axis {axis} outside 1..{n}")
    ident = _identity(n)
    flip = tuple(
        tuple(Fraction(-1 if (i == j == axis - 1) else int(i == j)) for j in range(n))
        for i in range(n)
    )
    return FiniteOrthogonalGroup([ident, flip], name=f"cyclic_sign({n}, {axis})")


def dihedral(g: int) -> FiniteOrthogonalGroup:
    """Dihedral group of order 2g: rotations by 2πk/g and the reflection y -> -y.

    Exact only for g in {1, 2, 4}; other orders have irrational entries and
    come back in float mode.
    """
    if g < 1:
        raise ValueError("dihedral order parameter must be positive")
    mats = []
    for k in range(g):
        t = 2 * math.pi * k / g
        c, s = math.cos(t), math.sin(t)
        rot = [[c, -s], [s, c]]
        ref = [[c, s], [s, -c]]
        mats.extend([rot, ref])
    if g in (1, 2, 4):
        exact = [[[Fraction(round(v)) for v in row] for row in m] for m in mats]
        return FiniteOrthogonalGroup(exact, name=f"dihedral({g})")
    return FiniteOrthogonalGroup(mats, exact=False, name=f"dihedral({g})")


_BUILTIN = re.compile(r"^\s*([a-z_]+)\s*(?:\((.*)\)|:(.*))?\s*$")

BUILTINS = {
    "neg_id": neg_id,
    "signed_permutations": signed_permutations,
    "cyclic_sign": cyclic_sign,
    "dihedral": dihedral,
}


def parse_builtin(spec: str) -> Tuple[str, List[int]]:
    """Split ``"dihedral(3)"`` or ``"dihedral:3"`` into ``("dihedral", [3])``."""
    m = _BUILTIN.match(spec)
    if not m or m.group(1) not in BUILTINS:
        raise ValueError(f"unknown built-in group {spec!r}; choose from {sorted(BUILTINS)}")
    raw = m.group(2) if m.group(2) is not None else (m.group(3) or "")
    try:
        args = [int(a) for a in raw.split(",") if a.strip()]
    except ValueError:
        raise ValueError(f"bad arguments in built-in group {spec!r}") from None
    return m.group(1), args


def builtin_group(spec: str) -> FiniteOrthogonalGroup:
    name, args = parse_builtin(spec)
    try:
        return BUILTINS[name](*args)
    except TypeError:
        raise ValueError(f"wrong number of arguments for {name}: {args}") from None


# ----------------------------------------------------------------------
# action, averaging, invariant rings
# ----------------------------------------------------------------------

def act(g, f: Polynomial) -> Polynomial:
    """(g·f)(x) = f(g^{-1} x) = f(g^T x) for orthogonal g with exact entries."""
    n = len(g)
    if n != f.n:
        raise DimensionError(f"matrix is {n}x{n}, polynomial in dimension {f.n}")
    if isinstance(g, np.ndarray):
        raise FloatModeError("exact action needs rational matrix entries")
    forms = []
    for i in range(n):
        terms = {}
        for j in range(n):
            c = g[j][i]
            if c:
                m = [0] * n
                m[j] = 1
                terms[tuple(m)] = c
        forms.append(Polynomial(n, terms))
    return substitute_linear(f, forms)


def group_average(G: FiniteOrthogonalGroup, f: Polynomial) -> Polynomial:
    if not G.exact:
        raise FloatModeError("averaging requires an exact-mode group")
    if f.n != G.n:
        raise DimensionError(f"group on R^{G.n}, polynomial in dimension {f.n}")
    total = Polynomial.zero(f.n)
    for g in G.elements:
        total = total + act(g, f)
    return total.scale(Fraction(1, G.order))


def invariant_ring(G: FiniteOrthogonalGroup, D: int | None = None) -> GradedSubalgebra:
    """Generators of the invariant ring up to degree ``D`` (default: |G|).

    Degree by degree, averages of monomials that are not already products of
    lower-degree invariants become new generators.
    """
    if not G.exact:
        raise FloatModeError("invariant_ring requires an exact-mode group")
    D = G.order if D is None else D
    if D < 1:
        raise ValueError("degree cap must be at least 1")
    gens: List[Polynomial] = []
    for d in range(1, D + 1):
        ech = SparseEchelon()
        if gens:
            for b in GradedSubalgebra(gens, G.n).degree_basis(d):
                ech.insert(b._terms)
        for m in monomials_of_degree(G.n, d):
            avg = group_average(G, Polynomial.monomial(m))
            if avg and ech.insert(avg._terms):
                gens.append(primitive(avg))
    return GradedSubalgebra(gens, G.n)


def dihedral_second_generator(g: int) -> Polynomial:
    """Re((x1 + i x2)^g) with integer coefficients."""
    if g < 1:
        raise ValueError("g must be positive")
    terms = {}
    for k in range(0, g + 1, 2):
        terms[(g - k, k)] = math.comb(g, k) * (-1) ** (k // 2)
    return Polynomial(2, terms)


def dihedral_invariants(g: int) -> GradedSubalgebra:
    """Invariants of the order-2g dihedral group on R^2: r^2 and Re(z^g)."""
    return GradedSubalgebra([r_squared(2), dihedral_second_generator(g)])


def random_polynomial(
    n: int, max_degree: int, rng: random.Random, max_terms: int = 6, coeff_range: int = 5
) -> Polynomial:
    """Sparse polynomial with small random integer coefficients."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(0, max_degree)
        m = [0] * n
        for _ in range(d):
            m[rng.randrange(n)] += 1
        terms[tuple(m)] = rng.randint(-coeff_range, coeff_range)
    return Polynomial(n, terms)


def verify_reynolds_equals_average(
    G: FiniteOrthogonalGroup, D: int | None = None, trials: int = 50, seed: int = 0
) -> bool:
    """Check that apolar projection onto the invariant ring equals group averaging."""
    if not G.exact:
        raise FloatModeError("cross-check requires an exact-mode group")
    D = G.order if D is None else D
    A = invariant_ring(G, D)
    rng = random.Random(seed)
    ok = True
    for _ in range(trials):
        f = random_polynomial(G.n, D, rng)
        if A.reynolds(f).projection != group_average(G, f):
            ok = False
    return ok
