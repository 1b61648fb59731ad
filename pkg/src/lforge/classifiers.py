"""Certifiers for two special families of generators.

* Cartan–Münzner: a homogeneous F of degree g with ΔF = c r^(g-2) and
  |∇F|^2 = g^2 r^(2g-2).
* Jordan: a span of quadratics closed under f •_1 g = <∇f, ∇g>.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .apolar import bullet
from .errors import GradingError
from .linalg import SparseEchelon, solve
from .poly import Polynomial, laplacian, r_squared


@dataclass
class MunznerReport:
    degree: int
    laplacian_constant: Optional[Fraction]
    norm_identity_holds: bool
    radial: bool = False

    @property
    def passes(self) -> bool:
        return self.laplacian_constant is not None and self.norm_identity_holds


def _r_power(n: int, m: int) -> Optional[Polynomial]:
    """r^m for even m >= 0, None otherwise."""
    if m < 0 or m % 2:
        return None
    return r_squared(n) ** (m // 2)


def _proportionality(p: Polynomial, q: Polynomial) -> Optional[Fraction]:
    """c with p == c*q (q nonzero), else None."""
    if not p:
        return Fraction(0)
    m, c = next(iter(q.items()))
    ratio = p.coefficient(m) / c
    return ratio if p == q.scale(ratio) else None


def munzner_check(F: Polynomial) -> MunznerReport:
    if not F or not F.is_homogeneous():
        raise GradingError("Cartan–Münzner check needs a nonzero homogeneous polynomial")
    g = F.degree
    if g < 1:
        raise GradingError("degree must be at least 1")
    n = F.n
    lap = laplacian(F)
    base = _r_power(n, g - 2)
    if base is None:
        # odd degree: r^(g-2) is not a polynomial, only c = 0 can work
        c = Fraction(0) if not lap else None
    else:
        c = _proportionality(lap, base)
    grad_sq = bullet(F, F, 1)
    norm_ok = grad_sq == (r_squared(n) ** (g - 1)).scale(g * g)
    radial = g % 2 == 0 and _proportionality(F, r_squared(n) ** (g // 2)) is not None
    return MunznerReport(g, c, norm_ok, radial)


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def munzner_normalize(rho: Polynomial) -> Optional[Polynomial]:
    """Find a rational a != 0 (and b, for even degree) making a*rho + b*r^g Münzner.

    Returns ``None`` when no rational normalisation exists, when the
    Laplacian or gradient norm of ``rho`` is not of the required shape, or
    when ``rho`` is radial (a multiple of a power of r^2).
    """
    if not rho or not rho.is_homogeneous():
        raise GradingError("need a nonzero homogeneous polynomial")
    g = rho.degree
    n = rho.n
    r2 = r_squared(n)
    if g % 2 == 0 and _proportionality(rho, r2 ** (g // 2)) is not None:
        return None
    lap = laplacian(rho)
    base = _r_power(n, g - 2)
    if base is None:
        if lap:
            return None
    elif _proportionality(lap, base) is None:
        return None

    # |∇rho|^2 = p r^(2g-2) + q rho r^(g-2)   (q term only for even g)
    grad_sq = bullet(rho, rho, 1)
    top = r2 ** (g - 1)
    if g % 2 == 0:
        mixed = rho * base
        p, q = _decompose(grad_sq, [top, mixed])
    else:
        p = _proportionality(grad_sq, top)
        q = Fraction(0)
    if p is None or q is None:
        return None
    gg = g * g
    # b = -a q / (2 g^2);  a^2 (p + q^2 / (4 g^2)) = g^2
    denom = p + q * q / (4 * gg)
    if denom <= 0:
        return None
    a = _rational_sqrt(Fraction(gg) / denom)
    if a is None:
        return None
    b = -a * q / (2 * gg)
    F = rho.scale(a)
    if b:
        F = F + (r2 ** (g // 2)).scale(b)
    return F if munzner_check(F).passes else None


def _decompose(target: Polynomial, parts: Sequence[Polynomial]):
    """Exact coefficients x with target = sum x_i parts_i, or (None, None)."""
    keys = sorted({m for p in list(parts) + [target] for m, _ in p.items()})
    A = [[p.coefficient(m) for p in parts] for m in keys]
    b = [target.coefficient(m) for m in keys]
    # normal equations are exact over Q; verify afterwards
    AtA = [[sum(A[r][i] * A[r][j] for r in range(len(keys))) for j in range(len(parts))] for i in range(len(parts))]
    Atb = [sum(A[r][i] * b[r] for r in range(len(keys))) for i in range(len(parts))]
    try:
        x = solve(AtA, Atb)
    except ZeroDivisionError:
        return None, None
    recon = Polynomial.zero(target.n)
    for xi, p in zip(x, parts):
        recon = recon + p.scale(xi)
    if recon != target:
        return None, None
    return tuple(x)


@dataclass
class JordanReport:
    closed: bool
    failing_pair: Optional[Tuple[int, int]]
    escaping_product: Optional[Polynomial]
    dimension_of_span: int
    r2_in_span: bool


def jordan_closure_check(quadratics: Sequence[Polynomial]) -> JordanReport:
    """Is span(quadratics) + constants closed under •_1, with r^2 in the span?"""
    qs = list(quadratics)
    if not qs:
        raise ValueError("need at least one quadratic")
    for q in qs:
        if q and (not q.is_homogeneous() or q.degree != 2):
            raise GradingError(f"{q} is not a quadratic form")
    n = qs[0].n
    ech = SparseEchelon()
    dim = sum(1 for q in qs if ech.insert(q._terms))
    ech.insert(Polynomial.constant(1, n)._terms)
    r2_in = ech.contains(r_squared(n)._terms)
    for i, j in itertools.combinations_with_replacement(range(len(qs)), 2):
        prod = bullet(qs[i], qs[j], 1)
        if not ech.contains(prod._terms):
            return JordanReport(False, (i, j), prod, dim, r2_in)
    return JordanReport(r2_in, None, None, dim, r2_in)
