"""Exhaustive small-case verification of the decompositions.

Enumerates every simplicial complex whose support is exactly its vertex
set, up to a vertex bound, and checks for each uniform sphere dimension
that the union decomposition total, the classical product model over the
complex, and the panel product model over the canonical panelization agree
degree by degree, torsion included.  This is the package's own ground-truth
sweep: the formulas and the brute-force models are implemented
independently, so agreement across all downward-closed families is strong
evidence for both.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .complexes import SimplicialComplex, build_complex
from .constructions import panelize_simplicial
from .decomp import union_summands
from .polyprod import (
    SpherePairs,
    classical_cell_count,
    classical_product_complex,
    panel_product_complex,
)


def enumerate_complexes(max_vertices: int):
    """All complexes with support exactly ``1..m`` for ``m <= max_vertices``.

    Families are enumerated as downward-closed sets of nonempty subsets;
    each labeled complex with full support appears exactly once.
    """
    for m in range(max_vertices + 1):
        nonempty = [
            frozenset(c)
            for k in range(1, m + 1)
            for c in itertools.combinations(range(1, m + 1), k)
        ]
        n = len(nonempty)
        for mask in range(1 << n):
            family = [nonempty[i] for i in range(n) if mask >> i & 1]
            closed = all(
                s - {v} in family or len(s) == 1 for s in family for v in s
            )
            if not closed:
                continue
            support = frozenset().union(*family) if family else frozenset()
            if support != frozenset(range(1, m + 1)):
                continue
            yield SimplicialComplex(
                m=m, simplices=frozenset(family) | {frozenset()}
            )


@dataclass(frozen=True)
class VerifyResult:
    """Comparison of the decomposition total with the brute-force models."""

    label: str
    matches: bool
    formula: object
    oracles: tuple  # (name, GradedGroup) pairs
    first_mismatch: tuple | None  # (oracle name, degree, formula piece, oracle piece)

    def describe(self) -> str:
        if self.matches:
            return f"{self.label}: OK"
        name, degree, mine, theirs = self.first_mismatch
        return (
            f"{self.label}: MISMATCH vs {name} at degree {degree}: "
            f"formula {mine}, oracle {theirs}"
        )


def _compare(label, formula, oracles):
    for name, group in oracles:
        if group != formula:
            fa = formula.as_dict()
            fo = group.as_dict()
            for degree in sorted(set(fa) | set(fo)):
                if fa.get(degree, (0, ())) != fo.get(degree, (0, ())):
                    return VerifyResult(
                        label,
                        False,
                        formula,
                        tuple(oracles),
                        (name, degree, fa.get(degree, (0, ())), fo.get(degree, (0, ()))),
                    )
    return VerifyResult(label, True, formula, tuple(oracles), None)


def verify_panel_complex(panel_complex, pairs: SpherePairs, label="input", classical_source=None):
    """Union-decomposition total against the panel (and classical) oracle."""
    formula = union_summands(panel_complex, pairs).total
    panel_chain = panel_product_complex(panel_complex, pairs)
    panel_chain.check()
    oracles = [("panel model", panel_chain.cohomology())]
    if classical_source is not None:
        classical = classical_product_complex(classical_source, pairs)
        classical.check()
        if classical_cell_count(classical_source, pairs) != sum(
            classical.dims.values()
        ):
            raise AssertionError("classical cell count broke its closed form")
        oracles.append(("classical model", classical.cohomology()))
    return _compare(label, formula, oracles)


def _sweep_one(args):
    m, maximal, n = args
    complex = build_complex(m, maximal)
    pairs = SpherePairs.uniform(n, m)
    label = f"m={m} K={sorted(map(sorted, maximal))} n={n}"
    return verify_panel_complex(
        panelize_simplicial(complex), pairs, label=label, classical_source=complex
    )


def sweep(max_vertices: int = 4, sphere_dims=(0, 1), workers: int = 1):
    """Verify every small complex for each uniform sphere dimension.

    Returns the list of :class:`VerifyResult`, one per (complex, dimension),
    in deterministic enumeration order regardless of worker count.
    """
    jobs = []
    for complex in enumerate_complexes(max_vertices):
        maximal = tuple(tuple(sorted(s)) for s in complex.maximal_simplices())
        for n in sphere_dims:
            jobs.append((complex.m, maximal, n))
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_one, jobs, chunksize=8))
    return [_sweep_one(job) for job in jobs]
