"""Brute-force cellular models of sphere-pair polyhedral products.

Factor ``j`` is the pair (disk of dimension ``n_j + 1``, its boundary
sphere).  The CW model of the disk has cells ``v, s, t`` of dimensions
``0, n_j, n_j + 1`` with ``∂t = s``; for ``n_j = 0`` the sphere is a pair of
points, so the model is ``-, +, t`` with ``∂t = (+) - (-)``.  A product cell
combines a base cell of the paneled space (or nothing, for the classical
model over a bare simplicial complex) with one factor cell per ``j``; it
belongs to the product exactly when every factor showing its top cell lies
in a panel containing the base cell (respectively in the simplex indexing
the classical cell).

Boundaries are tensor-product boundaries with Koszul signs, factors ordered
base first and then by ascending ``j``.  The assembled chain complex is the
ground truth the closed-form decompositions are verified against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .complexes import SimplicialComplex
from .constructions import PanelComplex
from .homology import ChainComplex, boundary_terms
from .snf import IntMatrix


@dataclass(frozen=True)
class SpherePairs:
    """Dimensions ``n_j >= 0``; factor ``j`` is the pair ``(D^(n_j+1), S^n_j)``."""

    dims: tuple

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))
        if any(n < 0 for n in self.dims):
            raise ValueError("sphere dimensions must be nonnegative")

    @classmethod
    def uniform(cls, n: int, m: int) -> "SpherePairs":
        return cls(dims=(n,) * m)

    @classmethod
    def parse(cls, text: str) -> "SpherePairs":
        return cls(dims=tuple(int(x) for x in text.split(",") if x.strip() != ""))

    def __len__(self):
        return len(self.dims)

    @property
    def zero_part(self) -> frozenset:
        """The indices with a disconnected sphere factor (``n_j = 0``)."""
        return frozenset(j + 1 for j, n in enumerate(self.dims) if n == 0)

    def sphere_shift(self, J) -> int:
        """Total sphere dimension over ``J`` (the suspension amount)."""
        return sum(self.dims[j - 1] for j in J)

    def disk_shift(self, J) -> int:
        """Total disk dimension over ``J``."""
        return sum(self.dims[j - 1] + 1 for j in J)


def _factor_cells(n: int):
    """(name, dim) cells of the disk model, names sorted."""
    if n == 0:
        return (("+", 0), ("-", 0), ("t", 1))
    return (("s", n), ("t", n + 1), ("v", 0))


def _factor_boundary(n: int):
    """Boundary of the top cell; all other cells are cycles."""
    if n == 0:
        return {("t", 1): ((1, ("+", 0)), (-1, ("-", 0)))}
    return {("t", n + 1): ((1, ("s", n)),)}


class _FactorTables:
    def __init__(self, pairs: SpherePairs):
        self.all_cells = [_factor_cells(n) for n in pairs.dims]
        self.sphere_cells = [
            tuple(c for c in cells if c[0] != "t") for cells in self.all_cells
        ]
        self.top_cell = [
            next(c for c in cells if c[0] == "t") for cells in self.all_cells
        ]
        self.boundary = [_factor_boundary(n) for n in pairs.dims]

    def pattern_boundary(self, base_dim: int, pattern):
        """Koszul-signed factor boundary terms of a product cell."""
        sign = -1 if base_dim % 2 else 1
        for j, cell in enumerate(pattern):
            for coeff, target in self.boundary[j].get(cell, ()):
                yield sign * coeff, pattern[:j] + (target,) + pattern[j + 1 :]
            if cell[1] % 2:
                sign = -sign


def _assemble(cells, boundary_of):
    """Chain complex from a degree-keyed dict of cell lists and a boundary rule."""
    index = {d: {cell: i for i, cell in enumerate(cs)} for d, cs in cells.items()}
    dims = {d: len(cs) for d, cs in cells.items()}
    boundaries = {}
    for d, cs in cells.items():
        if d - 1 not in dims:
            continue
        entries = []
        lower = index[d - 1]
        for j, cell in enumerate(cs):
            acc: dict = {}
            for coeff, target in boundary_of(cell):
                i = lower[target]
                acc[i] = acc.get(i, 0) + coeff
            entries.extend((i, j, v) for i, v in acc.items() if v)
        boundaries[d] = IntMatrix(dims[d - 1], dims[d], entries)
    labels = {d: tuple(cs) for d, cs in cells.items()}
    return ChainComplex(dims, boundaries, labels=labels)


def panel_product_complex(panel_complex: PanelComplex, pairs: SpherePairs) -> ChainComplex:
    """Cellular chains of the sphere-pair product over a paneled space."""
    if len(pairs) != panel_complex.m:
        raise ValueError("one sphere pair per panel is required")
    tables = _FactorTables(pairs)
    base_cells = sorted(
        (tuple(sorted(s)) for s in panel_complex.space.simplices if s),
        key=lambda s: (len(s), s),
    )
    cells: dict = {}
    for base in base_cells:
        allowed = panel_complex.panel_index_of_cell(base)
        base_dim = len(base) - 1
        choices = [
            tables.all_cells[j - 1] if j in allowed else tables.sphere_cells[j - 1]
            for j in range(1, panel_complex.m + 1)
        ]
        for pattern in itertools.product(*choices):
            degree = base_dim + sum(dim for _, dim in pattern)
            cells.setdefault(degree, []).append((base, pattern))
    for d in cells:
        cells[d].sort(key=lambda cell: ((len(cell[0]), cell[0]), cell[1]))

    def boundary_of(cell):
        base, pattern = cell
        for sign, face in boundary_terms(base):
            if face:
                yield sign, (face, pattern)
        for coeff, new_pattern in tables.pattern_boundary(len(base) - 1, pattern):
            yield coeff, (base, new_pattern)

    return _assemble(cells, boundary_of)


def classical_product_complex(complex: SimplicialComplex, pairs: SpherePairs) -> ChainComplex:
    """Cellular chains of the classical sphere-pair product over a complex.

    Cells are the factor patterns whose top-cell set is a simplex; there is
    no base factor.  This is the direct model of the (real) moment-angle
    complex and its generalizations.
    """
    if len(pairs) != complex.m:
        raise ValueError("one sphere pair per vertex is required")
    tables = _FactorTables(pairs)
    cells: dict = {}
    for simplex in complex.simplices:
        choices = [
            (tables.top_cell[j - 1],)
            if j in simplex
            else tables.sphere_cells[j - 1]
            for j in range(1, complex.m + 1)
        ]
        for pattern in itertools.product(*choices):
            degree = sum(dim for _, dim in pattern)
            cells.setdefault(degree, []).append(pattern)
    for d in cells:
        cells[d].sort()

    def boundary_of(pattern):
        return tables.pattern_boundary(0, pattern)

    return _assemble(cells, boundary_of)


def classical_cell_count(complex: SimplicialComplex, pairs: SpherePairs) -> int:
    """Closed-form cell count ``sum over simplices of 2^(m - |simplex|)``.

    Valid for any sphere dimensions: every factor model has one top cell
    and two others.
    """
    m = complex.m
    return sum(2 ** (m - len(s)) for s in complex.simplices)
