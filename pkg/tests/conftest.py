import itertools
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import strategies as st

from lforge.poly import Polynomial


def to_sympy(f: Polynomial):
    xs = sp.symbols(f"x1:{f.n + 1}")
    expr = sp.Integer(0)
    for m, c in f.items():
        term = sp.Rational(c.numerator, c.denominator)
        for x, e in zip(xs, m):
            term *= x**e
        expr += term
    return sp.expand(expr), xs


def from_sympy(expr, xs) -> Polynomial:
    poly = sp.Poly(sp.expand(expr), *xs)
    terms = {}
    for m, c in poly.terms():
        c = sp.Rational(c)
        terms[tuple(m)] = Fraction(int(c.p), int(c.q))
    return Polynomial(len(xs), terms)


def sympy_bullet(f: Polynomial, g: Polynomial, k: int) -> Polynomial:
    """Sum over all ordered index tuples of iterated partials (no multinomials)."""
    ef, xs = to_sympy(f)
    eg, _ = to_sympy(g)
    total = sp.Integer(0)
    for idx in itertools.product(range(f.n), repeat=k):
        df, dg = ef, eg
        for i in idx:
            df = sp.diff(df, xs[i])
            dg = sp.diff(dg, xs[i])
        total += df * dg
    return from_sympy(total, xs)


def polynomials(n, max_degree=4, max_terms=5, homogeneous_degree=None):
    """Hypothesis strategy for sparse integer-coefficient polynomials."""
    if homogeneous_degree is None:
        exps = st.lists(st.integers(0, max_degree), min_size=n, max_size=n).filter(
            lambda m: sum(m) <= max_degree
        )
    else:
        d = homogeneous_degree
        exps = st.lists(st.integers(0, d), min_size=n, max_size=n).filter(lambda m: sum(m) == d)
    return st.dictionaries(
        exps.map(tuple), st.integers(-6, 6), max_size=max_terms
    ).map(lambda t: Polynomial(n, t))


def random_poly(rng: random.Random, n: int, max_degree: int, max_terms: int = 5, homogeneous=None):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = homogeneous if homogeneous is not None else rng.randint(0, max_degree)
        m = [0] * n
        for _ in range(d):
            m[rng.randrange(n)] += 1
        terms[tuple(m)] = rng.randint(-5, 5) or 1
    return Polynomial(n, terms)


@pytest.fixture
def rng():
    return random.Random(20261019)


# acceptance criteria: one PASS/FAIL line each in the terminal summary

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        number, title = mark.args
        ok = _CRITERIA.get(number, (title, True))[1] and rep.outcome == "passed"
        _CRITERIA[number] = (title, ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
