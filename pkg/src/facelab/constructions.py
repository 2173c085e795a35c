"""Panel structures on simplicial complexes and their derived face data.

A panel complex is a finite simplicial complex ``Y`` together with closed
subcomplexes ``P_1 .. P_m`` (the panels).  For a subset ``J`` of panel
indices, ``P_J`` denotes the union and ``P_∩J`` the intersection of the
selected panels, with the conventions ``P_∅ = ∅`` and ``P_∩∅ = Y``.  The
faces are the connected components of the intersections ``P_∩J``; each face
``f`` carries its panel index ``I_f``, the set of all panels containing it.
The cells of ``Y`` lying in no panel form the core.

Construction entry points:

* :func:`panelize_generic` for explicit panels (e.g. the facets of a
  triangulated manifold with corners),
* :func:`panelize_simplicial` for the cone over the barycentric subdivision
  of a complex ``K``, paneled by the closed vertex stars, whose face poset
  reproduces ``K``,
* :func:`panelize_poset` for the analogous construction over a simplicial
  poset (intersections may now be disconnected; the component counts
  ``c_J`` are recorded),
* :func:`panelize_partition` for panels obtained by merging the canonical
  panels of ``K`` along a partition of its vertex set.

All derived data is computed eagerly over the ``2^m`` index subsets and the
result is immutable, so panel complexes can be shared freely across
parallel workers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .complexes import (
    InvalidComplexError,
    SimplicialComplex,
    SimplicialPoset,
    barycentric_subdivision,
    cone,
    face_subcomplex,
    poset_order_complex,
    restrict,
)


def subsets(m: int):
    """All subsets of ``{1..m}`` in (size, lexicographic) order."""
    for k in range(m + 1):
        for combo in itertools.combinations(range(1, m + 1), k):
            yield frozenset(combo)


def format_subset(J) -> str:
    return "{" + ",".join(map(str, sorted(J))) + "}"


@dataclass(frozen=True)
class Face:
    """A connected component of a panel intersection."""

    cells: frozenset  # nonempty simplices of Y forming the face
    panel_index: frozenset  # all panels containing the face
    face_id: tuple  # (|I_f|, smallest cell) -- stable across runs

    def __contains__(self, cell):
        return frozenset(cell) in self.cells


class PanelComplex:
    """A simplicial complex with panels and all derived face data."""

    def __init__(self, space: SimplicialComplex, panels):
        self.space = space
        self.panels = tuple(panels)
        self.m = len(self.panels)
        for i, panel in enumerate(self.panels):
            if panel.m != space.m or not panel.simplices <= space.simplices:
                raise InvalidComplexError(f"panel {i + 1} is not a subcomplex")
        self._intersections: dict = {}
        self._unions: dict = {}
        self._components: dict = {}
        for J in subsets(self.m):
            inter = space.simplices
            union = {frozenset()}
            for j in J:
                inter = inter & self.panels[j - 1].simplices
                union |= self.panels[j - 1].simplices
            if not J:
                union = frozenset([frozenset()])
            self._intersections[J] = frozenset(inter)
            self._unions[J] = frozenset(union)
            self._components[J] = _components(inter)
        self.faces = self._collect_faces()
        self.core = frozenset(
            s
            for s in space.simplices
            if s and not any(s in p.simplices for p in self.panels)
        )

    # -- derived sets -----------------------------------------------------

    def intersection(self, J) -> SimplicialComplex:
        """The subcomplex ``P_∩J`` (``Y`` itself for the empty set)."""
        return SimplicialComplex(
            m=self.space.m,
            simplices=self._intersections[frozenset(J)],
            vertex_names=self.space.vertex_names,
        )

    def union(self, J) -> SimplicialComplex:
        """The subcomplex ``P_J`` (empty for the empty set)."""
        return SimplicialComplex(
            m=self.space.m,
            simplices=self._unions[frozenset(J)],
            vertex_names=self.space.vertex_names,
        )

    def components(self, J) -> tuple:
        """Connected components of ``P_∩J`` as frozensets of cells."""
        return self._components[frozenset(J)]

    def component_count(self, J) -> int:
        return len(self._components[frozenset(J)])

    def panel_index_of_cell(self, cell) -> frozenset:
        s = frozenset(cell)
        return frozenset(
            j for j in range(1, self.m + 1) if s in self.panels[j - 1].simplices
        )

    def _collect_faces(self):
        seen = {}
        for J in subsets(self.m):
            for comp in self._components[J]:
                if comp in seen:
                    continue
                index = frozenset(
                    j
                    for j in range(1, self.m + 1)
                    if comp <= self.panels[j - 1].simplices
                )
                smallest = min(tuple(sorted(c)) for c in comp)
                seen[comp] = Face(
                    cells=comp, panel_index=index, face_id=(len(index), smallest)
                )
        return tuple(sorted(seen.values(), key=lambda f: f.face_id))

    def face_poset_pairs(self):
        """Strict inclusions between faces, as index pairs into ``faces``."""
        out = []
        for a, fa in enumerate(self.faces):
            for b, fb in enumerate(self.faces):
                if a != b and fa.cells < fb.cells:
                    out.append((a, b))
        return out

    def summary(self) -> dict:
        return {
            "m": self.m,
            "cells": sum(1 for s in self.space.simplices if s),
            "faces": [
                {
                    "cells": len(f.cells),
                    "panel_index": sorted(f.panel_index),
                    "id": [f.face_id[0], list(f.face_id[1])],
                }
                for f in self.faces
            ],
            "component_counts": {
                format_subset(J): self.component_count(J)
                for J in subsets(self.m)
                if self.component_count(J)
            },
            "core_cells": len(self.core),
        }


def _components(simplices) -> tuple:
    """Connected components of a complex given as a set of simplices.

    Components are joined through shared vertices (a positive-dimensional
    simplex is connected to each of its vertices), which coincides with
    topological connectivity for simplicial complexes.
    """
    nonempty = [s for s in simplices if s]
    if not nonempty:
        return ()
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for s in nonempty:
        parent.setdefault(s, s)
        for v in s:
            vs = frozenset([v])
            parent.setdefault(vs, vs)
            union(s, vs)
    groups: dict = {}
    for s in nonempty:
        groups.setdefault(find(s), set()).add(s)
    comps = [frozenset(cells) for cells in groups.values()]
    return tuple(sorted(comps, key=lambda c: min(tuple(sorted(s)) for s in c)))


# ---------------------------------------------------------------------------
# Panelizations
# ---------------------------------------------------------------------------


def panelize_generic(space: SimplicialComplex, panels) -> PanelComplex:
    """Panel complex from an explicit list of subcomplexes of ``space``."""
    return PanelComplex(space, panels)


def panelize_simplicial(complex: SimplicialComplex) -> PanelComplex:
    """Cone over the barycentric subdivision, paneled by closed vertex stars.

    Requires every vertex of ``1..m`` to occur in the complex.  The face
    over a simplex has that simplex as its panel index, nonempty panel
    intersections are exactly the index sets that are simplices, and the
    nerve of the panels reproduces the complex.
    """
    if not complex.is_minimal:
        raise InvalidComplexError("every vertex must lie in some simplex")
    subdivision = barycentric_subdivision(complex)
    space = cone(subdivision)
    panels = []
    for j in range(1, complex.m + 1):
        star = face_subcomplex(complex, {j}, subdivision=subdivision)
        panels.append(
            SimplicialComplex(
                m=space.m, simplices=star.simplices, vertex_names=space.vertex_names
            )
        )
    return PanelComplex(space, panels)


def panelize_poset(poset: SimplicialPoset) -> PanelComplex:
    """Cone over the order complex of a simplicial poset, star panels.

    Panel ``j`` is spanned by the chains whose elements all contain vertex
    ``j``; the intersection over ``J`` splits into one component per poset
    element with vertex set exactly ``J``.
    """
    order_complex = poset_order_complex(poset)
    space = cone(order_complex)
    panels = []
    for j in range(1, poset.m + 1):
        keep = {
            i + 1
            for i, name in enumerate(order_complex.vertex_names)
            if j in poset.vertex_set[name]
        }
        sub = restrict(order_complex, keep)
        panels.append(
            SimplicialComplex(
                m=space.m, simplices=sub.simplices, vertex_names=space.vertex_names
            )
        )
    return PanelComplex(space, panels)


def panelize_partition(complex: SimplicialComplex, blocks) -> PanelComplex:
    """Merge the canonical panels of ``complex`` along a vertex partition.

    ``blocks`` must partition ``1..m``; block ``i`` yields the union of the
    vertex-star panels of its members.
    """
    blocks = [frozenset(int(v) for v in block) for block in blocks]
    flat = sorted(v for block in blocks for v in block)
    if flat != list(range(1, complex.m + 1)):
        raise InvalidComplexError("blocks must partition the vertex set")
    fine = panelize_simplicial(complex)
    merged = []
    for block in blocks:
        cells = {frozenset()}
        for j in sorted(block):
            cells |= fine.panels[j - 1].simplices
        merged.append(
            SimplicialComplex(
                m=fine.space.m,
                simplices=frozenset(cells),
                vertex_names=fine.space.vertex_names,
            )
        )
    return PanelComplex(fine.space, merged)
