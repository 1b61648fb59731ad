"""Laplacian-property certification and saturation of generating sets.

For an algebra generated by homogeneous ``rho_1 .. rho_k`` with ``r^2`` in
it, being closed under the Laplacian reduces to finitely many membership
tests: every ``Δrho_i`` and every ``rho_i •_1 rho_j`` must lie in the algebra.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from .algebra import GradedSubalgebra, primitive
from .apolar import bullet
from .errors import CapExceeded, DegreeCapError
from .poly import Polynomial, laplacian, r_squared

log = logging.getLogger(__name__)

R2_MISSING = "r2_missing"
LAPLACIAN_ESCAPES = "laplacian_escapes"
PAIRING_ESCAPES = "gradient_pairing_escapes"


@dataclass
class LaplacianReport:
    witnesses: List[Tuple[Polynomial, str]] = field(default_factory=list)
    checked_pairs: int = 0

    @property
    def is_laplacian_up_to_checks(self) -> bool:
        return not self.witnesses

    def __bool__(self) -> bool:
        return self.is_laplacian_up_to_checks


def required_degree(generators: Sequence[Polynomial]) -> int:
    """Largest degree at which :func:`is_laplacian` tests membership."""
    top = max((g.degree for g in generators), default=1)
    return max(2, 2 * top - 2)


def is_laplacian(A: GradedSubalgebra, D: int) -> LaplacianReport:
    needed = required_degree(A.generators)
    if needed > D:
        raise DegreeCapError(needed, D)
    report = LaplacianReport()
    r2 = r_squared(A.n)
    if not A.contains(r2):
        report.witnesses.append((r2, R2_MISSING))
    for g in A.generators:
        lap = laplacian(g)
        if not A.contains(lap):
            report.witnesses.append((lap, LAPLACIAN_ESCAPES))
    for gi, gj in itertools.combinations_with_replacement(A.generators, 2):
        report.checked_pairs += 1
        p = bullet(gi, gj, 1)
        if not A.contains(p):
            report.witnesses.append((p, PAIRING_ESCAPES))
    return report


def _candidates(gens: List[Polynomial]):
    n = gens[0].n
    yield r_squared(n)
    for g in gens:
        yield laplacian(g)
    for gi, gj in itertools.combinations_with_replacement(gens, 2):
        yield bullet(gi, gj, 1)


def laplacian_closure(
    gens: Sequence[Polynomial],
    max_degree: int,
    max_generators: int,
    raise_on_cap: bool = False,
) -> Tuple[GradedSubalgebra, bool]:
    """Adjoin r^2, Laplacians and gradient pairings until nothing escapes.

    Returns ``(algebra, saturated)``.  ``saturated`` is ``False`` when a
    degree or generator-count cap stopped the loop; with ``raise_on_cap`` the
    cap raises :class:`CapExceeded` carrying the partial algebra instead.
    """
    current = [primitive(g) for g in gens]
    A = GradedSubalgebra(current)
    rounds = 0
    while True:
        rounds += 1
        added = False
        for cand in list(_candidates(list(A.generators))):
            if not cand or cand.is_constant() or A.contains(cand):
                continue
            if cand.degree > max_degree or len(A.generators) >= max_generators:
                msg = f"cap reached in round {rounds} adjoining degree {cand.degree}"
                log.info(msg)
                if raise_on_cap:
                    raise CapExceeded(msg, A)
                return A, False
            A = GradedSubalgebra(list(A.generators) + [primitive(cand)])
            added = True
        A = GradedSubalgebra(A.minimal_generators(A.max_generator_degree))
        if not added:
            return A, True
