import pytest

from lforge.algebra import GradedSubalgebra
from lforge.errors import CapExceeded, DegreeCapError
from lforge.invariants import dihedral_invariants
from lforge.laplacian import (
    LAPLACIAN_ESCAPES,
    PAIRING_ESCAPES,
    R2_MISSING,
    is_laplacian,
    laplacian_closure,
)
from lforge.poly import Polynomial, homogeneous_components, laplacian, parse, r_squared

from conftest import random_poly

R2 = r_squared(2)


def P(s, n=2):
    return parse(s, n)


class TestIsLaplacian:
    def test_jordan_triple(self):
        A = GradedSubalgebra([R2, P("x1^2 - x2^2"), P("2*x1*x2")])
        rep = is_laplacian(A, 2)
        assert rep.is_laplacian_up_to_checks and rep.witnesses == []
        assert rep.checked_pairs == 6

    def test_cubic_escapes(self):
        rep = is_laplacian(GradedSubalgebra([R2, P("x1^3")]), 4)
        assert not rep.is_laplacian_up_to_checks
        assert (P("6*x1"), LAPLACIAN_ESCAPES) in rep.witnesses
        assert (P("9*x1^4"), PAIRING_ESCAPES) in rep.witnesses

    def test_r2_missing(self):
        rep = is_laplacian(GradedSubalgebra([P("x1^2 - x2^2")]), 2)
        assert rep.witnesses[0] == (R2, R2_MISSING)

    def test_degree_cap(self):
        with pytest.raises(DegreeCapError):
            is_laplacian(dihedral_invariants(4), 5)

    @pytest.mark.parametrize("g", range(1, 9))
    def test_dihedral_family(self, g):
        A = dihedral_invariants(g)
        assert is_laplacian(A, max(2, 2 * g - 2))

    def test_soundness_on_random_members(self, rng):
        A = dihedral_invariants(3)
        assert is_laplacian(A, 4)
        gens = A.generators
        for _ in range(25):
            a = Polynomial.zero(2)
            for _ in range(3):
                e1, e2 = rng.randint(0, 3), rng.randint(0, 2)
                a = a + (gens[0] ** e1 * gens[1] ** e2).scale(rng.randint(-5, 5))
            assert A.contains(laplacian(a))
            for comp in homogeneous_components(a).values():
                assert A.contains(comp)


class TestClosure:
    def test_adds_r2(self):
        A, saturated = laplacian_closure([P("x1^2 - x2^2")], 4, 10)
        assert saturated
        assert set(A.generators) == {R2, P("x1^2 - x2^2")}

    def test_already_saturated(self):
        r2 = r_squared(3)
        A, saturated = laplacian_closure([r2], 4, 10)
        assert saturated and A.generators == (r2,)

    def test_harmonic_cubic(self):
        F = P("x1^3 - 3*x1*x2^2")
        A, saturated = laplacian_closure([F], 6, 10)
        assert saturated and set(A.generators) == {R2, F}

    def test_monotone_and_fixed_point(self):
        gens = [P("x1^2"), P("x1*x2")]
        A, saturated = laplacian_closure(gens, 4, 10)
        assert saturated
        assert all(A.contains(g) for g in gens)
        assert is_laplacian(A, 4)
        B, again = laplacian_closure(A.generators, 4, 10)
        assert again and set(B.generators) == set(A.generators)

    def test_cubic_collapses_to_linear(self):
        A, saturated = laplacian_closure([P("x1^3")], 3, 10)
        assert saturated and A.contains(P("x1")) and A.contains(P("x1^3"))

    def test_cap_reports_unsaturated(self):
        f = parse("x1*x2*x3", 3)
        A, saturated = laplacian_closure([f], 3, 10)
        assert not saturated and A.contains(f)
        B, saturated = laplacian_closure([f], 4, 10)
        assert saturated and B.hilbert_dims(4) == [1, 0, 1, 1, 2]

    def test_cap_raises_when_asked(self):
        f = parse("x1*x2*x3", 3)
        with pytest.raises(CapExceeded) as err:
            laplacian_closure([f], 3, 10, raise_on_cap=True)
        assert err.value.partial.contains(f)

    def test_generator_cap(self):
        _, saturated = laplacian_closure([P("x1^2"), P("x1*x2")], 4, 2)
        assert not saturated
