"""Additive decompositions of sphere-pair product cohomology.

Two closed-form decompositions, both indexed by subsets ``J`` of the panel
set, express the integral cohomology of a sphere-pair product over a
paneled space as a direct sum:

* :func:`union_summands` applies when the big factor of every pair is
  contractible (disks): the ``J`` summand is the relative cohomology
  ``H^*(Y, P_J)`` with all degrees raised by the total sphere dimension
  ``N_J`` over ``J`` (smashing with a sphere suspends; a 0-sphere factor
  contributes nothing, consistent with ``N_J`` weighting it zero).  The
  empty subset contributes the unreduced cohomology of ``Y``.

* :func:`intersection_summands` applies when the small factor of every
  pair is contractible: the ``J`` summand is the unreduced cohomology of
  the intersection ``P_∩J`` raised by the total disk dimension over ``J``
  (so one block per connected component), and the empty subset again
  contributes ``H^*(Y)``.

:func:`hochster_table` specializes the first decomposition to the canonical
panelizations of a simplicial complex or poset, where the summand for ``J``
collapses to the reduced cohomology of the full subcomplex ``K_J`` (or the
order complex of the full subposet) with degrees raised by ``N_J + 1``.
Subsets that span a nonempty simplex have contractible ``K_J`` and are
skipped, with the skip recorded; the empty subset stays because the empty
space has reduced cohomology Z in degree -1, which lands the unit of the
total ring in degree 0.

Summands are computed independently per subset and reported per subset, so
a mismatch against the brute-force model localizes immediately.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .complexes import (
    SimplicialComplex,
    SimplicialPoset,
    full_subcomplex,
    poset_order_complex,
)
from .constructions import PanelComplex, format_subset, panelize_poset, panelize_simplicial, subsets
from .homology import GradedGroup, chain_complex
from .polyprod import SpherePairs


@dataclass(frozen=True)
class Decomposition:
    """Per-subset graded groups (already in total degrees) and their sum."""

    mode: str
    summands: tuple  # tuple of (frozenset, GradedGroup), subsets in canonical order
    skipped: tuple = ()

    @property
    def total(self) -> GradedGroup:
        total = GradedGroup()
        for _, group in self.summands:
            total = total + group
        return total

    def summand(self, J) -> GradedGroup:
        J = frozenset(J)
        for subset, group in self.summands:
            if subset == J:
                return group
        return GradedGroup()

    def nonzero(self) -> list:
        return [(J, g) for J, g in self.summands if not g.is_trivial()]

    def rows(self):
        """CSV rows (subset, degree, rank, torsion) in canonical order."""
        for J, group in self.summands:
            for degree, rank, torsion in group.groups:
                yield (format_subset(J), degree, rank, ";".join(map(str, torsion)))

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "summands": [
                {"subset": sorted(J), "groups": g.to_json()}
                for J, g in self.summands
                if not g.is_trivial()
            ],
            "skipped": [sorted(J) for J in self.skipped],
            "total": self.total.to_json(),
        }


def _union_summand(panel_complex, pairs, J):
    rel = chain_complex(panel_complex.space, "relative", panel_complex.union(J))
    return rel.cohomology().shift(pairs.sphere_shift(J))


def _intersection_summand(panel_complex, pairs, J):
    if not J:
        return chain_complex(panel_complex.space).cohomology()
    inter = panel_complex.intersection(J)
    if inter.is_empty:
        return GradedGroup()
    return chain_complex(inter).cohomology().shift(pairs.disk_shift(J))


_WORKER_FN = {"union": _union_summand, "intersection": _intersection_summand}


def _one(args):
    mode, panel_complex, pairs, J = args
    return J, _WORKER_FN[mode](panel_complex, pairs, J)


def _decompose(mode, panel_complex, pairs, workers):
    if len(pairs) != panel_complex.m:
        raise ValueError("one sphere pair per panel is required")
    order = list(subsets(panel_complex.m))
    if workers and workers > 1:
        jobs = [(mode, panel_complex, pairs, J) for J in order]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            computed = dict(pool.map(_one, jobs))
    else:
        computed = {J: _WORKER_FN[mode](panel_complex, pairs, J) for J in order}
    return Decomposition(mode=mode, summands=tuple((J, computed[J]) for J in order))


def union_summands(
    panel_complex: PanelComplex, pairs: SpherePairs, workers: int = 1
) -> Decomposition:
    """Decomposition by panel unions; valid for disk-sphere pairs.

    Summand ``J``: relative ``H^*(Y, P_J)`` raised by the sphere dimension
    total ``N_J``.  The total is the unreduced cohomology of the product.
    """
    return _decompose("union", panel_complex, pairs, workers)


def intersection_summands(
    panel_complex: PanelComplex, pairs: SpherePairs, workers: int = 1
) -> Decomposition:
    """Decomposition by panel intersections; the pair roles are reversed.

    Pair ``j`` is read as (sphere of dimension ``n_j + 1``, contractible),
    so summand ``J`` is the unreduced ``H^*(P_∩J)`` raised by
    ``sum over J of (n_j + 1)``, vanishing when the intersection is empty.
    """
    return _decompose("intersection", panel_complex, pairs, workers)


# ---------------------------------------------------------------------------
# Hochster-type tables
# ---------------------------------------------------------------------------


def reduced_cohomology(complex: SimplicialComplex) -> GradedGroup:
    """Reduced simplicial cohomology; the empty complex gives Z in degree -1."""
    return chain_complex(complex, "reduced").cohomology()


def hochster_table(source, pairs: SpherePairs, workers: int = 1) -> Decomposition:
    """Subset-indexed table of reduced cohomology summands in total degrees.

    ``source`` is a simplicial complex (which must use all its vertex
    labels) or a simplicial poset.  For a uniform sphere dimension ``n``
    the ``J`` entry is the reduced cohomology of the full subcomplex (or of
    the order complex of the full subposet) raised by ``n|J| + 1``; mixed
    dimensions fall back to :func:`union_summands` on the canonical
    panelization, which agrees degree for degree.
    """
    uniform = len(set(pairs.dims)) <= 1
    if isinstance(source, SimplicialPoset):
        if not uniform:
            return union_summands(panelize_poset(source), pairs, workers)
        entries = []
        for J in subsets(source.m):
            sub = poset_order_complex(source.full_subposet(J))
            group = reduced_cohomology(sub).shift(pairs.sphere_shift(J) + 1)
            entries.append((J, group))
        return Decomposition(mode="hochster-poset", summands=tuple(entries))

    complex = source
    if not complex.is_minimal:
        raise ValueError("every vertex must lie in some simplex")
    if not uniform:
        return union_summands(panelize_simplicial(complex), pairs, workers)
    entries = []
    skipped = []
    for J in subsets(complex.m):
        if J and J in complex.simplices:
            skipped.append(J)
            continue
        group = reduced_cohomology(full_subcomplex(complex, J)).shift(
            pairs.sphere_shift(J) + 1
        )
        entries.append((J, group))
    return Decomposition(
        mode="hochster", summands=tuple(entries), skipped=tuple(skipped)
    )
