"""Exact integral cohomology of polyhedral products over spaces with faces.

The package computes, over the integers and without floating point:

* panel structures on simplicial complexes and the faces they carve out,
* homology and cohomology via sparse Smith normal forms,
* brute-force cellular models of sphere-pair polyhedral products,
* the closed-form additive decompositions of their cohomology and the
  Hochster-type tables they specialize to,
* cup products, the block cohomology ring, and the three face rings
  (Stanley-Reisner, simplicial poset, topological) with isomorphism
  certificates.

Every closed-form result can be replayed against the brute-force models;
the ``facelab verify`` and ``facelab selftest`` commands do exactly that.
"""

from .complexes import (
    InvalidComplexError,
    SimplicialComplex,
    SimplicialPoset,
    barycentric_subdivision,
    build_complex,
    build_poset,
    cone,
    face_poset,
    face_subcomplex,
    full_subcomplex,
    nerve,
    poset_order_complex,
    restrict,
)
from .constructions import (
    Face,
    PanelComplex,
    panelize_generic,
    panelize_partition,
    panelize_poset,
    panelize_simplicial,
    subsets,
)
from .cupring import RingModel, simplicial_cup, sphere_pair_ring
from .decomp import (
    Decomposition,
    hochster_table,
    intersection_summands,
    reduced_cohomology,
    union_summands,
)
from .facering import (
    HilbertData,
    IsoReport,
    MonomialBlockRing,
    PosetFaceRing,
    PosetRingElement,
    hilbert_series,
    iso_check,
    poset_face_ring_multiply,
    stanley_reisner_ring,
    topological_face_ring,
)
from .homology import (
    ChainComplex,
    ChainComplexError,
    CochainComplexBases,
    GradedGroup,
    chain_complex,
    cohomology_groups,
    homology_groups,
    induced_inclusion_map,
    relative_cohomology,
)
from .polyprod import (
    SpherePairs,
    classical_cell_count,
    classical_product_complex,
    panel_product_complex,
)
from .snf import IntMatrix, SNFResult, kernel_basis, smith_normal_form, solve
from .sweep import enumerate_complexes, sweep, verify_panel_complex

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
