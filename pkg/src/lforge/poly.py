"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Polynomial` is an immutable map from exponent tuples to nonzero
:class:`fractions.Fraction` coefficients, together with an explicit ambient
dimension ``n``.  Variables are written ``x1 .. xn`` in the text format.

>>> f = parse("x1^2 + x2^2", 2)
>>> laplacian(f)
Polynomial('4', n=2)
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionError, PolySyntaxError

Monomial = Tuple[int, ...]
Coeff = Union[int, Fraction]


def monomial_degree(m: Monomial) -> int:
    return sum(m)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


class Polynomial:
    """Immutable sparse polynomial in ``n`` variables over the rationals."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, Coeff] | None = None):
        if n < 1:
            raise DimensionError(f"dimension must be positive, got {n}")
        self.n = n
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != n:
                    raise DimensionError(f"monomial {m} does not have length {n}")
                if any(e < 0 for e in m):
                    raise ValueError(f"negative exponent in {m}")
                c = _as_fraction(c)
                if c:
                    clean[m] = clean.get(m, 0) + c
                    if not clean[m]:
                        del clean[m]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.n = n
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, c: Coeff, n: int) -> "Polynomial":
        c = _as_fraction(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def variable(cls, i: int, n: int) -> "Polynomial":
        """The coordinate function ``x_i`` (1-based)."""
        if not 1 <= i <= n:
            raise DimensionError(f"variable index {i} outside 1..{n}")
        m = [0] * n
        m[i - 1] = 1
        return cls._raw(n, {tuple(m): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: Coeff = 1) -> "Polynomial":
        return cls(len(exponents), {tuple(exponents): coeff})

    # -- accessors ----------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def coefficient(self, m: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degrees(self) -> set:
        return {sum(m) for m in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.n, Fraction(0))

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Rational)):
            return Polynomial.constant(other, self.n)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw(self.n, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Polynomial):
            return self.scale(Fraction(1) / _as_fraction(other))
        return NotImplemented

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: Coeff) -> "Polynomial":
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.n)
        return Polynomial._raw(self.n, {m: c * v for m, v in self._terms.items()})

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self._terms == Polynomial.constant(other, self.n)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # -- presentation -------------------------------------------------
    def sorted_terms(self) -> list:
        """Terms in descending graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)!r}, n={self.n})"


Poly = Polynomial


# ----------------------------------------------------------------------
# formatting and parsing
# ----------------------------------------------------------------------

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(f: Polynomial) -> str:
    """Canonical text: graded-lex order, explicit ``*``, no ``^1``."""
    if not f._terms:
        return "0"
    pieces = []
    for idx, (m, c) in enumerate(f.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(f"x{i + 1}")
            elif e > 1:
                factors.append(f"x{i + 1}^{e}")
        if not factors:
            body = _format_coeff(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(a) + "*" + "*".join(factors)
        if idx == 0:
            pieces.append(("-" if sign == "-" else "") + body)
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _error(self, expected):
        raise PolySyntaxError(self.text, self.pos, expected)

    def _int(self, expected="integer") -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self._error(expected)
        return int(self.text[start:self.pos])

    def _factor(self) -> Monomial:
        if self._peek() != "x":
            self._error("'x'")
        self.pos += 1
        # the index must follow 'x' directly
        if self.pos >= len(self.text) or not self.text[self.pos].isdigit():
            self._error("variable index")
        at = self.pos
        idx = self._int("variable index")
        if not 1 <= idx <= self.n:
            raise DimensionError(f"variable x{idx} at position {at} exceeds dimension {self.n}")
        exp = 1
        if self._peek() == "^":
            self.pos += 1
            exp = self._int("exponent")
        m = [0] * self.n
        m[idx - 1] = exp
        return tuple(m)

    def _term(self) -> Tuple[Monomial, Fraction]:
        mono = [0] * self.n
        c = Fraction(1)
        ch = self._peek()
        if ch.isdigit():
            num = self._int("coefficient")
            den = 1
            if self._peek() == "/":
                self.pos += 1
                self._skip()
                at = self.pos
                den = self._int("positive denominator")
                if den == 0:
                    raise PolySyntaxError(self.text, at, "positive denominator")
            c = Fraction(num, den)
        elif ch == "x":
            mono = list(self._factor())
        else:
            self._error("coefficient or variable")
        while self._peek() == "*":
            self.pos += 1
            f = self._factor()
            mono = [a + b for a, b in zip(mono, f)]
        return tuple(mono), c

    def parse(self) -> Polynomial:
        terms: Dict[Monomial, Fraction] = {}
        sign = 1
        if self._peek() in "+-" and self._peek():
            sign = -1 if self._peek() == "-" else 1
            self.pos += 1
        while True:
            m, c = self._term()
            terms[m] = terms.get(m, 0) + sign * c
            ch = self._peek()
            if ch == "":
                break
            if ch not in "+-":
                self._error("'+', '-' or end of input")
            sign = -1 if ch == "-" else 1
            self.pos += 1
        return Polynomial(self.n, terms)


def parse(text: str, dimension: int) -> Polynomial:
    """Parse ``text`` in the ``x1 .. xn`` grammar into a polynomial.

    Raises :class:`PolySyntaxError` (with position) on malformed input and
    :class:`DimensionError` if a variable index exceeds ``dimension``.
    """
    if dimension < 1:
        raise DimensionError(f"dimension must be positive, got {dimension}")
    if not text.strip():
        raise PolySyntaxError(text, 0, "polynomial")
    return _Parser(text, dimension).parse()


# ----------------------------------------------------------------------
# ring helpers and differential operators
# ----------------------------------------------------------------------

def add(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check(g)
    return f + g


def mul(f: Polynomial, g: Polynomial) -> Polynomial:
    f._check(g)
    return f * g


def scale(f: Polynomial, c: Coeff) -> Polynomial:
    return f.scale(c)


def partial(f: Polynomial, i: int) -> Polynomial:
    """Formal derivative with respect to ``x_i`` (1-based)."""
    if not 1 <= i <= f.n:
        raise DimensionError(f"variable index {i} outside 1..{f.n}")
    j = i - 1
    out = {}
    for m, c in f._terms.items():
        e = m[j]
        if e:
            out[m[:j] + (e - 1,) + m[j + 1:]] = c * e
    return Polynomial._raw(f.n, out)


def falling(e: int, k: int) -> int:
    """e (e-1) ... (e-k+1)."""
    r = 1
    for t in range(k):
        r *= e - t
    return r


def partial_multi(f: Polynomial, alpha: Sequence[int]) -> Polynomial:
    """The mixed derivative d^alpha f, computed termwise."""
    if len(alpha) != f.n:
        raise DimensionError(f"multi-index length {len(alpha)} != {f.n}")
    out = {}
    for m, c in f._terms.items():
        if all(e >= a for e, a in zip(m, alpha)):
            k = 1
            for e, a in zip(m, alpha):
                k *= falling(e, a)
            out[tuple(e - a for e, a in zip(m, alpha))] = c * k
    return Polynomial._raw(f.n, out)


def laplacian(f: Polynomial) -> Polynomial:
    """Sum of the pure second derivatives."""
    out: Dict[Monomial, Fraction] = {}
    for m, c in f._terms.items():
        for j, e in enumerate(m):
            if e >= 2:
                mm = m[:j] + (e - 2,) + m[j + 1:]
                out[mm] = out.get(mm, 0) + c * e * (e - 1)
    return Polynomial._raw(f.n, {m: c for m, c in out.items() if c})


def gradient(f: Polynomial) -> list:
    return [partial(f, i) for i in range(1, f.n + 1)]


def r_squared(n: int) -> Polynomial:
    """x1^2 + ... + xn^2."""
    if n < 1:
        raise DimensionError(f"dimension must be positive, got {n}")
    terms = {}
    for i in range(n):
        m = [0] * n
        m[i] = 2
        terms[tuple(m)] = Fraction(1)
    return Polynomial._raw(n, terms)


def homogeneous_components(f: Polynomial) -> Dict[int, Polynomial]:
    comps: Dict[int, Dict[Monomial, Fraction]] = {}
    for m, c in f._terms.items():
        comps.setdefault(sum(m), {})[m] = c
    return {d: Polynomial._raw(f.n, t) for d, t in sorted(comps.items())}


def euler_operator(f: Polynomial) -> Polynomial:
    """sum_i x_i d_i f, i.e. each degree-j component scaled by j."""
    return Polynomial._raw(f.n, {m: c * sum(m) for m, c in f._terms.items() if sum(m)})


def evaluate(f: Polynomial, point: Sequence) -> Union[Fraction, float]:
    """Evaluate at a point.

    Rational/int coordinates give an exact :class:`Fraction`; any float
    coordinate switches to IEEE double arithmetic.
    """
    if len(point) != f.n:
        raise DimensionError(f"point has {len(point)} coordinates, expected {f.n}")
    if any(isinstance(v, (float, np.floating)) for v in point):
        pt = [float(v) for v in point]
        total = 0.0
        for m, c in f._terms.items():
            t = float(c)
            for v, e in zip(pt, m):
                if e:
                    t *= v ** e
            total += t
        return total
    pt = [_as_fraction(v) for v in point]
    powers = [{0: Fraction(1)} for _ in pt]
    total = Fraction(0)
    for m, c in f._terms.items():
        t = c
        for j, e in enumerate(m):
            if e:
                cache = powers[j]
                if e not in cache:
                    cache[e] = pt[j] ** e
                t *= cache[e]
        total += t
    return total


def monomials_of_degree(n: int, d: int) -> Iterator[Monomial]:
    """All exponent tuples of length ``n`` summing to ``d``, grlex descending."""
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            yield (first,) + rest


def multinomial(k: int, alpha: Iterable[int]) -> int:
    r = math.factorial(k)
    for a in alpha:
        r //= math.factorial(a)
    return r


def alpha_factorial(alpha: Iterable[int]) -> int:
    r = 1
    for a in alpha:
        r *= math.factorial(a)
    return r


def substitute_linear(f: Polynomial, forms: Sequence[Polynomial]) -> Polynomial:
    """Compose ``f`` with ``x_i -> forms[i]``."""
    if len(forms) != f.n:
        raise DimensionError("need one form per variable")
    n_out = forms[0].n if forms else f.n
    cache = [{0: Polynomial.constant(1, n_out)} for _ in forms]

    def power(j, e):
        c = cache[j]
        if e not in c:
            c[e] = power(j, e - 1) * forms[j]
        return c[e]

    result = Polynomial.zero(n_out)
    for m, c in f._terms.items():
        t = Polynomial.constant(c, n_out)
        for j, e in enumerate(m):
            if e:
                t = t * power(j, e)
        result = result + t
    return result


class CompiledPolynomial:
    """Vectorised float evaluation of a polynomial (and its gradient)."""

    def __init__(self, f: Polynomial):
        self.n = f.n
        items = list(f.items())
        self.exponents = np.array([m for m, _ in items], dtype=np.int64).reshape(len(items), f.n)
        self.coeffs = np.array([float(c) for _, c in items], dtype=float)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n:
            raise DimensionError(f"points have {X.shape[1]} coordinates, expected {self.n}")
        if not len(self.coeffs):
            return np.zeros(X.shape[0])
        mons = np.prod(X[:, None, :] ** self.exponents[None, :, :], axis=2)
        return mons @ self.coeffs
