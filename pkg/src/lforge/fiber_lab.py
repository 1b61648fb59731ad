"""Numerical level-set experiments on the unit sphere.

Everything here is evidence, not proof: fibers are sampled by Newton
projection from seeded sphere points, clustered by generator value, and
split into connected pieces with an epsilon-neighbourhood graph.  The exact
parts (the gradient-pairing matrix, its minors, the Jacobian rank at
rational points) are computed over the rationals.
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree
from scipy.stats import norm, qmc

from .apolar import bullet
from .errors import DimensionError, EmptyFiber
from .linalg import rank as exact_rank
from .poly import CompiledPolynomial, Polynomial, evaluate, partial

RANK_THRESHOLD = 1e-8
WITNESS_TOL = 1e-9
DEFAULT_TOL_VALUE = 1e-6
DEFAULT_EPS = 0.1
NEWTON_MAX_ITER = 50
NEWTON_TOL = 1e-10


def _check_gens(gens: Sequence[Polynomial]) -> int:
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].n
    for g in gens:
        if g.n != n:
            raise DimensionError("generators live in different dimensions")
    return n


# ----------------------------------------------------------------------
# the gradient-pairing matrix
# ----------------------------------------------------------------------

def poly_determinant(M: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Determinant of a small polynomial matrix by cofactor expansion with memoisation."""
    k = len(M)
    if k == 0:
        raise ValueError("empty matrix")
    n = M[0][0].n
    memo: Dict[Tuple[int, frozenset], Polynomial] = {}

    def rec(row: int, cols: Tuple[int, ...]) -> Polynomial:
        if row == k:
            return Polynomial.constant(1, n)
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = Polynomial.zero(n)
        for pos, c in enumerate(cols):
            entry = M[row][c]
            if not entry:
                continue
            sub = rec(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            total = total - term if pos % 2 else total + term
        memo[key] = total
        return total

    return rec(0, tuple(range(k)))


@dataclass
class BMatrix:
    """Symmetric matrix of gradient pairings rho_i •_1 rho_j."""

    generators: Tuple[Polynomial, ...]
    entries: List[List[Polynomial]]

    @property
    def size(self) -> int:
        return len(self.entries)

    def determinant(self) -> Polynomial:
        return poly_determinant(self.entries)

    def minors(self, m: int) -> List[Polynomial]:
        out = []
        idx = range(self.size)
        for rows in itertools.combinations(idx, m):
            for cols in itertools.combinations(idx, m):
                out.append(poly_determinant([[self.entries[i][j] for j in cols] for i in rows]))
        return out

    def evaluate(self, point) -> np.ndarray:
        return np.array([[float(evaluate(e, point)) for e in row] for row in self.entries])


def b_matrix(gens: Sequence[Polynomial]) -> BMatrix:
    _check_gens(gens)
    k = len(gens)
    entries = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            entries[i][j] = entries[j][i] = bullet(gens[i], gens[j], 1)
    return BMatrix(tuple(gens), entries)


# ----------------------------------------------------------------------
# Jacobian rank
# ----------------------------------------------------------------------

def _jacobian_polys(gens: Sequence[Polynomial]) -> List[List[Polynomial]]:
    return [[partial(g, j) for j in range(1, g.n + 1)] for g in gens]


def transcendence_degree(gens: Sequence[Polynomial], trials: int = 5, seed: int = 0) -> int:
    """Generic rank of the Jacobian, maximised over random rational points."""
    n = _check_gens(gens)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    J = _jacobian_polys(gens)
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        pt = [Fraction(rng.randint(-50, 50), rng.randint(1, 13)) for _ in range(n)]
        rows = [[evaluate(p, pt) for p in row] for row in J]
        best = max(best, exact_rank(rows))
        if best == min(len(gens), n):
            break
    return best


class _CompiledJacobian:
    def __init__(self, gens: Sequence[Polynomial]):
        self.values = [CompiledPolynomial(g) for g in gens]
        self.partials = [[CompiledPolynomial(p) for p in row] for row in _jacobian_polys(gens)]

    def value(self, X: np.ndarray) -> np.ndarray:
        return np.stack([f(X) for f in self.values], axis=1)

    def jacobian(self, X: np.ndarray) -> np.ndarray:
        return np.stack([np.stack([p(X) for p in row], axis=1) for row in self.partials], axis=1)


def sphere_samples(n: int, n_samples: int, seed: int) -> np.ndarray:
    """Seeded low-discrepancy points on the unit sphere in R^n.

    A scrambled Halton sequence is pushed through the normal quantile
    function and normalised, i.e. the normalised-Gaussian construction.
    """
    sampler = qmc.Halton(d=n, scramble=True, seed=seed)
    U = sampler.random(n_samples)
    U = np.clip(U, 1e-12, 1 - 1e-12)
    Z = norm.ppf(U)
    nrm = np.linalg.norm(Z, axis=1, keepdims=True)
    nrm[nrm == 0] = 1.0
    return Z / nrm


def float_ranks(gens: Sequence[Polynomial], X: np.ndarray, threshold: float = RANK_THRESHOLD) -> np.ndarray:
    J = _CompiledJacobian(gens).jacobian(X)
    s = np.linalg.svd(J, compute_uv=False)
    top = s[:, :1]
    return np.sum(s > threshold * np.where(top > 0, top, np.inf), axis=1)


@dataclass
class StratificationReport:
    generic_rank: int
    rank_histogram: Dict[int, int]
    ranks: np.ndarray
    points: np.ndarray
    singular_witness_polynomial: Polynomial
    witness_consistent: bool
    seed: int
    threshold: float = RANK_THRESHOLD

    def to_dict(self) -> dict:
        return {
            "generic_rank": int(self.generic_rank),
            "rank_histogram": {str(k): int(v) for k, v in sorted(self.rank_histogram.items())},
            "n_samples": int(len(self.ranks)),
            "singular_witness_polynomial": str(self.singular_witness_polynomial),
            "witness_consistent": bool(self.witness_consistent),
            "seed": self.seed,
            "rank_threshold": self.threshold,
        }


def singular_witness(gens: Sequence[Polynomial], m: int) -> Polynomial:
    """Product of the nonzero m x m minors of the gradient-pairing matrix."""
    n = _check_gens(gens)
    out = Polynomial.constant(1, n)
    if m == 0:
        return out
    for minor in b_matrix(gens).minors(m):
        if minor:
            out = out * minor
    return out


def stratify(
    gens: Sequence[Polynomial],
    n_samples: int = 1000,
    seed: int = 0,
    points: Optional[np.ndarray] = None,
    threshold: float = RANK_THRESHOLD,
) -> StratificationReport:
    """Histogram of Jacobian ranks over sphere samples (plus any extra ``points``)."""
    n = _check_gens(gens)
    if n_samples < 1 and points is None:
        raise ValueError("need at least one sample")
    X = sphere_samples(n, n_samples, seed) if n_samples > 0 else np.empty((0, n))
    if points is not None:
        X = np.vstack([X, np.atleast_2d(np.asarray(points, dtype=float))])
    ranks = float_ranks(gens, X, threshold)
    generic = int(ranks.max())
    hist: Dict[int, int] = {}
    for r in ranks:
        hist[int(r)] = hist.get(int(r), 0) + 1
    witness = singular_witness(gens, generic)
    low = X[ranks < generic]
    consistent = True
    if len(low):
        vals = CompiledPolynomial(witness)(low)
        consistent = bool(np.all(np.abs(vals) <= WITNESS_TOL))
    return StratificationReport(generic, hist, ranks, X, witness, consistent, seed, threshold)


# ----------------------------------------------------------------------
# fibers
# ----------------------------------------------------------------------

def _components(P: np.ndarray, eps: float) -> int:
    """Connected components of the graph joining points within angle ``eps``."""
    if len(P) == 0:
        return 0
    uniq = np.unique(np.round(P, 9), axis=0)
    if len(uniq) == 1:
        return 1
    chord = 2 * np.sin(eps / 2)
    pairs = cKDTree(uniq).query_pairs(chord, output_type="ndarray")
    m = len(uniq)
    graph = sparse.coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(m, m))
    count, _ = connected_components(graph, directed=False)
    return int(count)


@dataclass
class FiberSampleSet:
    generators: Tuple[Polynomial, ...]
    base_values: np.ndarray
    samples: np.ndarray
    values: np.ndarray
    labels: np.ndarray
    seed: int
    tol_value: float
    eps: float
    components: List[int] = field(default_factory=list)
    empty: List[int] = field(default_factory=list)

    def cluster(self, c: int) -> np.ndarray:
        return self.samples[self.labels == c]

    @property
    def clusters(self) -> List[np.ndarray]:
        return [np.flatnonzero(self.labels == c) for c in range(len(self.base_values))]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "tol_value": self.tol_value,
            "eps": self.eps,
            "base_values": [[float(v) for v in row] for row in self.base_values],
            "cluster_sizes": [int(np.sum(self.labels == c)) for c in range(len(self.base_values))],
            "components": list(self.components),
            "empty_clusters": list(self.empty),
        }


def newton_project(
    gens: Sequence[Polynomial],
    starts: np.ndarray,
    target: Sequence[float],
    max_iter: int = NEWTON_MAX_ITER,
    tol: float = NEWTON_TOL,
) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss–Newton projection of ``starts`` onto {rho = target, |p| = 1}.

    Returns the projected points and a boolean mask of converged rows.
    """
    cj = _CompiledJacobian(gens)
    T = np.append(np.asarray(target, dtype=float), 1.0)
    X = np.array(starts, dtype=float, copy=True)
    active = np.ones(len(X), dtype=bool)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if not len(idx):
            break
        P = X[idx]
        F = np.hstack([cj.value(P), np.sum(P * P, axis=1, keepdims=True)]) - T
        done = np.max(np.abs(F), axis=1) < tol
        active[idx[done]] = False
        idx, P, F = idx[~done], P[~done], F[~done]
        if not len(idx):
            break
        J = np.concatenate([cj.jacobian(P), 2 * P[:, None, :]], axis=1)
        step = np.einsum("bij,bj->bi", np.linalg.pinv(J), F)
        X[idx] = P - step
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    F = np.hstack([cj.value(X), np.ones((len(X), 1))]) - T
    converged = np.all(np.isfinite(F), axis=1) & (np.max(np.abs(F), axis=1) < max(tol, 1e-8))
    return X, converged


def _generic_values(cj: "_CompiledJacobian", n: int, n_values: int, seed: int) -> np.ndarray:
    # candidates far from the singular stratum: smallest kept singular value
    # of the constrained Jacobian at least half the best one in the pool
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((max(64, 8 * n_values), n))
    Z /= np.linalg.norm(Z, axis=1, keepdims=True)
    J = np.concatenate([cj.jacobian(Z), 2 * Z[:, None, :]], axis=1)
    s = np.linalg.svd(J, compute_uv=False)
    ranks = np.sum(s > RANK_THRESHOLD * s[:, :1], axis=1)
    m = ranks.max()
    score = np.where(ranks == m, s[:, m - 1] / s[:, 0], 0.0)
    good = np.flatnonzero(score >= 0.5 * score.max())
    pick = good[:n_values] if len(good) >= n_values else np.argsort(-score)[:n_values]
    return cj.value(Z[pick])


def sample_fibers(
    gens: Sequence[Polynomial],
    base_values: Union[str, Sequence[Sequence[float]]] = "auto",
    n_samples: int = 2000,
    seed: int = 0,
    tol_value: float = DEFAULT_TOL_VALUE,
    eps: float = DEFAULT_EPS,
    n_values: int = 2,
) -> FiberSampleSet:
    """Sample the level sets of ``gens`` on the unit sphere.

    With ``base_values="auto"`` the generator values at ``n_values`` seeded
    random sphere points are used, preferring points well inside the
    regular stratum.
    Each base value gets one cluster of Newton-projected samples; samples
    whose values miss the base value by more than ``tol_value`` are dropped.
    """
    n = _check_gens(gens)
    if tol_value <= 0 or eps <= 0:
        raise ValueError("tolerances must be positive")
    cj = _CompiledJacobian(gens)
    if isinstance(base_values, str):
        if base_values != "auto":
            raise ValueError("base_values must be 'auto' or a list of value vectors")
        V = _generic_values(cj, n, n_values, seed)
    else:
        V = np.atleast_2d(np.asarray(base_values, dtype=float))
        if V.shape[1] != len(gens):
            raise DimensionError(f"base values need {len(gens)} entries each")
    starts = sphere_samples(n, n_samples, seed)

    samples, values, labels, comps, empty = [], [], [], [], []
    for c, v in enumerate(V):
        X, ok = newton_project(gens, starts, v)
        X = X[ok]
        vals = cj.value(X) if len(X) else np.empty((0, len(gens)))
        keep = np.max(np.abs(vals - v), axis=1) <= tol_value if len(X) else np.zeros(0, bool)
        X, vals = X[keep], vals[keep]
        if not len(X):
            empty.append(c)
            warnings.warn(f"no samples landed on the fiber over {v.tolist()}", stacklevel=2)
        samples.append(X)
        values.append(vals)
        labels.append(np.full(len(X), c))
        comps.append(_components(X, eps))
    return FiberSampleSet(
        generators=tuple(gens),
        base_values=V,
        samples=np.vstack(samples) if samples else np.empty((0, n)),
        values=np.vstack(values) if values else np.empty((0, len(gens))),
        labels=np.concatenate(labels) if labels else np.empty(0, int),
        seed=seed,
        tol_value=tol_value,
        eps=eps,
        components=comps,
        empty=empty,
    )


def connectivity_report(fibers: FiberSampleSet, eps: float = DEFAULT_EPS) -> dict:
    """Component counts per cluster; advisory evidence, never a verdict."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    counts = [_components(fibers.cluster(c), eps) for c in range(len(fibers.base_values))]
    return {"eps": eps, "components": counts, "label": "evidence"}


def equidistance_report(fibers: FiberSampleSet, pair: Tuple[int, int]) -> dict:
    """Great-circle distance from each point of one cluster to the other cluster."""
    a, b = fibers.cluster(pair[0]), fibers.cluster(pair[1])
    if not len(a) or not len(b):
        raise EmptyFiber(f"cluster {pair[0] if not len(a) else pair[1]} is empty")
    chord, _ = cKDTree(b).query(a)
    dist = 2 * np.arcsin(np.clip(chord / 2, 0.0, 1.0))
    mean = float(dist.mean())
    return {"pair": list(pair), "mean": mean, "max_dev": float(np.max(np.abs(dist - mean)))}
