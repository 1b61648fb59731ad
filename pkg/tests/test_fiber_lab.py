import numpy as np
import pytest
import sympy as sp

from lforge.errors import DimensionError, EmptyFiber
from lforge.fiber_lab import (
    b_matrix,
    connectivity_report,
    equidistance_report,
    newton_project,
    poly_determinant,
    sample_fibers,
    singular_witness,
    sphere_samples,
    stratify,
    transcendence_degree,
)
from lforge.invariants import dihedral_invariants, invariant_ring, neg_id, signed_permutations
from lforge.laplacian import is_laplacian
from lforge.poly import Polynomial, parse, r_squared

from conftest import from_sympy, to_sympy

R2 = r_squared(2)
Q = parse("x1^2 - x2^2", 2)


def P(s, n=2):
    return parse(s, n)


class TestBMatrix:
    def test_single(self):
        B = b_matrix([R2])
        assert B.size == 1 and B.entries[0][0] == R2.scale(4)

    def test_pair(self):
        B = b_matrix([R2, Q])
        assert B.entries == [[R2.scale(4), Q.scale(4)], [Q.scale(4), R2.scale(4)]]
        assert B.determinant() == P("64*x1^2*x2^2")

    def test_linear(self):
        assert b_matrix([parse("x1", 1)]).entries[0][0] == Polynomial.constant(1, 1)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            b_matrix([R2, parse("x1", 3)])

    def test_determinant_oracle(self):
        gens = dihedral_invariants(3).generators + (P("x1^2*x2^2"),)
        B = b_matrix(gens)
        M = sp.Matrix([[to_sympy(e)[0] for e in row] for row in B.entries])
        xs = to_sympy(R2)[1]
        assert B.determinant() == from_sympy(sp.expand(M.det()), xs)

    def test_poly_determinant_small(self):
        x, y = P("x1"), P("x2")
        assert poly_determinant([[x, y], [y, x]]) == x * x - y * y

    @pytest.mark.parametrize("A", [dihedral_invariants(3), dihedral_invariants(5), invariant_ring(signed_permutations(2))],
                             ids=["D3", "D5", "B2"])
    def test_entries_in_algebra(self, A):
        assert is_laplacian(A, max(2, 2 * A.max_generator_degree - 2))
        B = b_matrix(A.generators)
        for i, row in enumerate(B.entries):
            for j, e in enumerate(row):
                assert e == B.entries[j][i]
                assert A.contains(e)
                assert e.degrees() <= {A.generators[i].degree + A.generators[j].degree - 2}


class TestTranscendence:
    def test_examples(self):
        assert transcendence_degree([R2, Q]) == 2
        assert transcendence_degree([r_squared(3)]) == 1
        assert transcendence_degree([R2, R2 * R2]) == 1

    @pytest.mark.parametrize("g", range(1, 7))
    def test_dihedral_full(self, g):
        assert transcendence_degree(dihedral_invariants(g).generators) == 2

    def test_bounded(self):
        gens = invariant_ring(neg_id(2)).generators
        assert len(gens) == 3 and transcendence_degree(gens) == 2

    def test_deterministic(self):
        gens = [parse("x1*x2", 3), parse("x2*x3", 3)]
        assert transcendence_degree(gens, seed=4) == transcendence_degree(gens, seed=4) == 2


class TestSphere:
    def test_unit_norm_and_seed(self):
        X = sphere_samples(3, 500, 11)
        assert np.all(np.abs(np.linalg.norm(X, axis=1) - 1) < 1e-12)
        assert np.array_equal(X, sphere_samples(3, 500, 11))
        assert not np.array_equal(X, sphere_samples(3, 500, 12))


class TestStratify:
    def test_off_axes(self):
        pts = np.array([[np.cos(t), np.sin(t)] for t in (0.3, 1.0, 2.0, 4.0)])
        rep = stratify([R2, Q], n_samples=0, points=pts)
        assert rep.generic_rank == 2 and rep.rank_histogram == {2: 4}
        assert rep.singular_witness_polynomial == P("64*x1^2*x2^2")

    def test_axis_point(self):
        rep = stratify([R2, Q], n_samples=50, seed=1, points=[[1.0, 0.0]])
        assert rep.ranks[-1] == 1 and rep.generic_rank == 2
        assert rep.witness_consistent

    def test_single_generator(self):
        rep = stratify([r_squared(4)], n_samples=100, seed=2)
        assert rep.rank_histogram == {1: 100} and rep.generic_rank == 1

    def test_deterministic_report(self):
        a = stratify(dihedral_invariants(3).generators, 200, seed=5).to_dict()
        b = stratify(dihedral_invariants(3).generators, 200, seed=5).to_dict()
        assert a == b and a["seed"] == 5

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_exact(self, seed):
        for gens in ([R2, Q], [r_squared(3)], [R2, R2 * R2], list(dihedral_invariants(4).generators)):
            assert stratify(gens, 200, seed=seed).generic_rank == transcendence_degree(gens, seed=seed)

    def test_witness_on_singular_points(self):
        # D4 orbits degenerate on the axes and diagonals
        pts = [[1, 0], [0, 1], [2 ** -0.5, 2 ** -0.5]]
        gens = dihedral_invariants(4).generators
        rep = stratify(gens, n_samples=100, seed=0, points=pts)
        assert list(rep.ranks[-3:]) == [1, 1, 1] and rep.witness_consistent
        assert singular_witness(gens, 2) == rep.singular_witness_polynomial


class TestSampleFibers:
    def test_dihedral4_orbit(self):
        fs = sample_fibers(dihedral_invariants(4).generators, n_samples=2000, seed=7)
        assert fs.components == [8, 8]
        assert np.all(np.abs(np.linalg.norm(fs.samples, axis=1) - 1) < 1e-12)

    def test_dihedral3_orbit(self):
        fs = sample_fibers(dihedral_invariants(3).generators, n_samples=2000, seed=1)
        assert fs.components == [6, 6]

    def test_latitude_circle(self):
        fs = sample_fibers([r_squared(3), parse("x1", 3)], [[1, 0.3]], n_samples=3000, seed=0)
        assert fs.components == [1]
        assert np.allclose(fs.cluster(0)[:, 0], 0.3)

    def test_two_circles(self):
        fs = sample_fibers([r_squared(3), parse("x1^2", 3)], [[1, 0.25]], n_samples=3000, seed=0)
        assert fs.components == [2]

    def test_two_points(self):
        fs = sample_fibers(dihedral_invariants(2).generators, [[1, 1]], n_samples=500, seed=0)
        # singular fiber: Newton converges only linearly towards +-(1, 0)
        pts = np.unique(np.round(fs.cluster(0), 3) + 0.0, axis=0)
        assert np.allclose(pts, [[-1, 0], [1, 0]])
        assert fs.components == [2]

    def test_clusters_partition(self):
        fs = sample_fibers(dihedral_invariants(3).generators, n_samples=500, seed=3, n_values=3)
        idx = np.concatenate(fs.clusters)
        assert sorted(idx.tolist()) == list(range(len(fs.samples)))
        for c in range(3):
            assert np.all(np.abs(fs.values[fs.labels == c] - fs.base_values[c]) <= fs.tol_value)

    def test_component_bound_for_groups(self):
        G = signed_permutations(2)
        fs = sample_fibers(invariant_ring(G).generators, n_samples=1000, seed=4)
        assert all(0 < c <= G.order for c in fs.components)

    def test_empty_fiber_warns(self):
        with pytest.warns(UserWarning):
            fs = sample_fibers(dihedral_invariants(2).generators, [[1, 5]], n_samples=100, seed=0)
        assert fs.empty == [0] and fs.components == [0]
        with pytest.raises(EmptyFiber):
            equidistance_report(fs, (0, 0))

    def test_bad_values(self):
        with pytest.raises(DimensionError):
            sample_fibers([R2, Q], [[1, 0, 0]])
        with pytest.raises(ValueError):
            sample_fibers([R2, Q], tol_value=0)

    def test_newton_projects(self):
        X = sphere_samples(2, 20, 0)
        Y, ok = newton_project([R2, Q], X, [1.0, 0.0])
        assert ok.all()
        assert np.allclose(np.abs(Y), 2 ** -0.5, atol=1e-9)


class TestEquidistance:
    def test_orbits(self):
        gens = dihedral_invariants(2).generators
        fs = sample_fibers(gens, [[1, 1], [1, 0]], n_samples=500, seed=0)
        rep = equidistance_report(fs, (0, 1))
        assert abs(rep["mean"] - np.pi / 4) < 1e-5 and rep["max_dev"] < 1e-5

    def test_single_fiber(self):
        fs = sample_fibers([r_squared(3)], [[1.0], [1.0]], n_samples=400, seed=0)
        rep = equidistance_report(fs, (0, 1))
        assert rep["mean"] < 1e-12

    def test_sign_group_orbits(self):
        fs = sample_fibers([R2, Q], [[1, 0.2], [1, -0.4]], n_samples=500, seed=0)
        rep = equidistance_report(fs, (0, 1))
        assert rep["max_dev"] < 1e-6

    def test_dihedral_family(self):
        fs = sample_fibers(dihedral_invariants(5).generators, n_samples=3000, seed=2)
        assert fs.components == [10, 10]
        assert equidistance_report(fs, (0, 1))["max_dev"] < 1e-6


def test_connectivity_report_is_evidence():
    fs = sample_fibers(dihedral_invariants(4).generators, n_samples=1000, seed=7)
    rep = connectivity_report(fs, 0.1)
    assert rep["label"] == "evidence" and rep["components"] == [8, 8]
    # a huge eps glues the orbit together
    assert connectivity_report(fs, 3.0)["components"] == [1, 1]
