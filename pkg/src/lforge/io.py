"""Loading algebra and group specification files.

Both formats are YAML (so plain JSON works too)::

    # algebra file
    dimension: 2
    generators: ["x1^2 + x2^2", "x1^2 - x2^2"]
    degree_cap: 6          # optional

    # group file: explicit matrices (rows of rationals) or a built-in
    dimension: 2
    matrices:
      - [[1, 0], [0, 1]]
      - [[0, 1], [1, 0]]
    # or
    builtin: signed_permutations(2)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

import yaml

from .algebra import GradedSubalgebra
from .errors import DimensionError, LforgeError
from .invariants import FiniteOrthogonalGroup, builtin_group
from .poly import Polynomial, parse


class SpecFileError(LforgeError, ValueError):
    """A specification file is missing fields or malformed."""


@dataclass
class AlgebraSpec:
    dimension: int
    generators: List[Polynomial]
    degree_cap: Optional[int] = None

    def algebra(self) -> GradedSubalgebra:
        return GradedSubalgebra(self.generators, self.dimension)


def _load_yaml(path) -> dict:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except OSError as exc:
        raise SpecFileError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise SpecFileError(f"{path}: not valid YAML/JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SpecFileError(f"{path}: expected a mapping at top level")
    return data


def parse_algebra(data: dict, source: str = "<algebra>") -> AlgebraSpec:
    try:
        n = int(data["dimension"])
        raw = data["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFileError(f"{source}: needs integer 'dimension' and list 'generators'") from exc
    if not isinstance(raw, list) or not raw:
        raise SpecFileError(f"{source}: 'generators' must be a nonempty list of strings")
    gens = [parse(str(s), n) for s in raw]
    cap = data.get("degree_cap")
    return AlgebraSpec(n, gens, None if cap is None else int(cap))


def load_algebra(path) -> AlgebraSpec:
    return parse_algebra(_load_yaml(path), str(path))


def parse_group(data: dict, source: str = "<group>") -> FiniteOrthogonalGroup:
    if "builtin" in data:
        return builtin_group(str(data["builtin"]))
    try:
        n = int(data["dimension"])
        mats = data["matrices"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFileError(f"{source}: needs 'builtin' or 'dimension' + 'matrices'") from exc
    elements = []
    for m in mats:
        rows = [[Fraction(str(v)) for v in row] for row in m]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise DimensionError(f"{source}: every matrix must be {n}x{n}")
        elements.append(rows)
    return FiniteOrthogonalGroup(elements, name=Path(source).stem)


def load_group(path) -> FiniteOrthogonalGroup:
    return parse_group(_load_yaml(path), str(path))
