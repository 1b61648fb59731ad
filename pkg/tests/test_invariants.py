import random
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from lforge.errors import DimensionError, FloatModeError, GroupError
from lforge.invariants import (
    FiniteOrthogonalGroup,
    act,
    builtin_group,
    cyclic_sign,
    dihedral,
    dihedral_invariants,
    dihedral_second_generator,
    group_average,
    invariant_ring,
    neg_id,
    parse_builtin,
    random_polynomial,
    signed_permutations,
    verify_reynolds_equals_average,
)
from lforge.laplacian import is_laplacian, required_degree
from lforge.poly import Polynomial, laplacian, parse, r_squared

from conftest import from_sympy, random_poly, to_sympy

SWAP = [[0, 1], [1, 0]]


def P(s, n=2):
    return parse(s, n)


class TestGroups:
    def test_orders(self):
        assert neg_id(3).order == 2
        assert signed_permutations(2).order == 8
        assert signed_permutations(3).order == 48
        assert cyclic_sign(3, 2).order == 2
        assert dihedral(4).order == 8 and dihedral(4).exact
        assert dihedral(3).order == 6 and not dihedral(3).exact

    def test_rejects_non_group(self):
        with pytest.raises(GroupError):
            FiniteOrthogonalGroup([[[1, 0], [0, 1]], [[0, -1], [1, 0]]])  # not closed
        with pytest.raises(GroupError):
            FiniteOrthogonalGroup([[[2, 0], [0, 1]]])
        with pytest.raises(GroupError):
            FiniteOrthogonalGroup([SWAP])  # no identity

    def test_generated_by(self):
        G = FiniteOrthogonalGroup.generated_by([SWAP, [[-1, 0], [0, 1]]])
        assert G.order == 8

    def test_parse_builtin(self):
        assert parse_builtin("dihedral:3") == ("dihedral", [3])
        assert parse_builtin("cyclic_sign(2, 1)") == ("cyclic_sign", [2, 1])
        assert builtin_group("neg_id(2)").order == 2
        with pytest.raises(ValueError):
            parse_builtin("klein(4)")


class TestAct:
    def test_even_monomial(self):
        assert act(neg_id(2).elements[1], P("x1*x2")) == P("x1*x2")

    def test_odd_monomial(self):
        assert act(neg_id(2).elements[1], P("x1")) == P("-x1")

    def test_swap(self):
        G = FiniteOrthogonalGroup.generated_by([SWAP])
        assert act(G.elements[1], P("x1^2")) == P("x2^2")

    def test_inverse_convention(self):
        # rotation by 90 degrees: (g.f)(x) = f(g^-1 x); f = x1 -> x2
        rot = [[Fraction(0), Fraction(-1)], [Fraction(1), Fraction(0)]]
        assert act(rot, P("x1")) == P("x2")

    def test_commutes_with_laplacian(self, rng):
        for g in signed_permutations(3).elements[:12]:
            f = random_poly(rng, 3, 5)
            assert laplacian(act(g, f)) == act(g, laplacian(f))

    def test_float_matrix_rejected(self):
        with pytest.raises(FloatModeError):
            act(np.eye(2), P("x1"))

    def test_dimension(self):
        with pytest.raises(DimensionError):
            act(neg_id(3).elements[1], P("x1"))


class TestAverage:
    def test_odd(self):
        assert group_average(neg_id(2), P("x1")).is_zero()

    def test_even(self):
        assert group_average(neg_id(2), P("x1*x2")) == P("x1*x2")

    def test_signed_permutations(self):
        assert group_average(signed_permutations(2), P("x1^2")) == P("1/2*x1^2 + 1/2*x2^2")

    def test_float_mode(self):
        with pytest.raises(FloatModeError):
            group_average(dihedral(3), P("x1"))

    def test_equivariance_and_idempotence(self, rng):
        G = signed_permutations(2)
        for _ in range(10):
            f = random_poly(rng, 2, 6)
            avg = group_average(G, f)
            assert group_average(G, avg) == avg
            for g in G.elements:
                assert group_average(G, act(g, f)) == avg
                assert act(g, avg) == avg

    def test_sympy_oracle(self, rng):
        G = signed_permutations(2)
        for _ in range(5):
            f = random_poly(rng, 2, 4)
            e, xs = to_sympy(f)
            total = 0
            for g in G.elements:
                M = sp.Matrix([[sp.Rational(str(v)) for v in row] for row in g])
                sub = M.T * sp.Matrix(xs)
                total += e.subs({xs[0]: sub[0], xs[1]: sub[1]}, simultaneous=True)
            assert group_average(G, f) == from_sympy(total / G.order, xs)


class TestInvariantRing:
    def test_one_dimension(self):
        assert invariant_ring(neg_id(1)).generators == (parse("x1^2", 1),)

    def test_neg_id_plane(self):
        assert set(invariant_ring(neg_id(2)).generators) == {P("x1^2"), P("x1*x2"), P("x2^2")}

    def test_sign_change(self):
        assert set(invariant_ring(cyclic_sign(2, 2)).generators) == {P("x1"), P("x2^2")}

    def test_signed_permutations(self):
        A = invariant_ring(signed_permutations(2))
        assert [g.degree for g in A.generators] == [2, 4]
        assert A.hilbert_dims(8) == [1, 0, 1, 0, 2, 0, 2, 0, 3]

    def test_dihedral_exact_matches_closed_form(self):
        A = invariant_ring(dihedral(4))
        B = dihedral_invariants(4)
        assert A.hilbert_dims(12) == B.hilbert_dims(12)
        assert all(A.contains(g) for g in B.generators)
        assert all(B.contains(g) for g in A.generators)

    @pytest.mark.parametrize("G", [neg_id(1), neg_id(2), neg_id(3), signed_permutations(2), cyclic_sign(2, 2),
                                   cyclic_sign(3, 1), dihedral(4)], ids=repr)
    def test_invariant_and_laplacian(self, G):
        A = invariant_ring(G)
        for f in A.generators:
            assert all(act(g, f) == f for g in G.elements)
        assert is_laplacian(A, required_degree(A.generators)).witnesses == []


class TestDihedral:
    @pytest.mark.parametrize("g,expected", [(2, "x1^2 - x2^2"), (3, "x1^3 - 3*x1*x2^2"), (4, "x1^4 - 6*x1^2*x2^2 + x2^4")])
    def test_closed_form(self, g, expected):
        A = dihedral_invariants(g)
        assert A.generators == (r_squared(2), P(expected))

    @pytest.mark.parametrize("g", range(1, 9))
    def test_real_part_oracle(self, g):
        x, y = sp.symbols("x1:3")
        re = sp.expand(((x + sp.I * y) ** g + (x - sp.I * y) ** g) / 2)
        F = dihedral_second_generator(g)
        assert F == from_sympy(re, (x, y))
        assert laplacian(F).is_zero()

    @pytest.mark.parametrize("g", range(1, 9))
    def test_invariant_under_float_group(self, g):
        G = dihedral(g)
        F = dihedral_second_generator(g)
        from lforge.poly import CompiledPolynomial

        cf = CompiledPolynomial(F)
        X = np.random.default_rng(g).standard_normal((20, 2))
        for m in G.elements:
            Y = X @ np.asarray(m, dtype=float)  # rows: (m^T x)^T
            assert np.allclose(cf(Y), cf(X), atol=1e-9)


class TestCrossCheck:
    def test_small_examples(self):
        assert group_average(neg_id(1), parse("x1^3", 1)).is_zero()
        assert invariant_ring(neg_id(1)).reynolds(parse("x1^3", 1)).projection.is_zero()
        x2 = P("x1^2")
        assert group_average(neg_id(2), x2) == x2 == invariant_ring(neg_id(2)).reynolds(x2).projection
        y3 = P("x2^3")
        G = cyclic_sign(2, 2)
        assert group_average(G, y3).is_zero() and invariant_ring(G).reynolds(y3).projection.is_zero()

    @pytest.mark.parametrize("G", [neg_id(2), cyclic_sign(2, 1), dihedral(4)], ids=repr)
    def test_verify(self, G):
        assert verify_reynolds_equals_average(G, trials=10, seed=3)

    def test_float_group_rejected(self):
        with pytest.raises(FloatModeError):
            verify_reynolds_equals_average(dihedral(5), 4, 1)

    def test_detects_wrong_algebra(self):
        # a non-invariant algebra must disagree with averaging somewhere
        from lforge.algebra import GradedSubalgebra

        A = GradedSubalgebra([P("x1^2")])
        f = P("x2^2")
        assert A.reynolds(f).projection != group_average(neg_id(2), f)


def test_random_polynomial_is_seeded():
    a = random_polynomial(3, 4, random.Random(1))
    b = random_polynomial(3, 4, random.Random(1))
    assert a == b and a.degree <= 4
