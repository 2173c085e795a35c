"""Finite abstract simplicial complexes and simplicial posets.

A simplicial complex on the vertex set ``{1, ..., m}`` is stored as the full
set of its simplices (subsets of the vertex set, always including the empty
set) together with its list of maximal simplices.  All derived constructions
(full subcomplexes, barycentric subdivisions, cones, nerves, order complexes)
return ordinary :class:`SimplicialComplex` objects again.

The canonical vertex order used everywhere for orientations, boundary signs
and cup products is the ascending order of the integer labels.  Constructions
that create new vertices (subdivisions, order complexes, cones) assign labels
so that this ascending order is reproducible: subdivision vertices are sorted
by (dimension, sorted vertex tuple) of the simplex they subdivide, order
complex vertices by (rank, element id), and a cone apex always receives the
maximal label.

A simplicial poset is a finite poset with a least element whose lower
segments are Boolean lattices; it generalizes the face poset of a simplicial
complex by allowing several elements with the same vertex set.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

Simplex = frozenset


def _canon(simplex) -> frozenset:
    return frozenset(int(v) for v in simplex)


def _sorted_simplices(simplices):
    """Deterministic order: by dimension, then lexicographic vertex tuple."""
    return sorted(simplices, key=lambda s: (len(s), tuple(sorted(s))))


class InvalidComplexError(ValueError):
    """Raised when input data does not describe a valid complex or poset."""


@dataclass(frozen=True)
class SimplicialComplex:
    """A finite abstract simplicial complex on vertices ``1..m``.

    ``simplices`` always contains the empty simplex.  ``vertex_names`` is
    optional metadata mapping the labels ``1..m`` to labels in an ambient
    complex (kept by :func:`full_subcomplex` and the subdivision
    constructions); it has no effect on the combinatorics.
    """

    m: int
    simplices: frozenset
    vertex_names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if frozenset() not in self.simplices:
            raise InvalidComplexError("a complex must contain the empty simplex")

    # -- basic queries ---------------------------------------------------

    def __contains__(self, simplex) -> bool:
        return _canon(simplex) in self.simplices

    @property
    def support(self) -> frozenset:
        """Vertices that occur in at least one simplex."""
        return frozenset().union(*self.simplices) if len(self.simplices) > 1 else frozenset()

    @property
    def is_minimal(self) -> bool:
        """True when every vertex label ``1..m`` occurs in some simplex."""
        return self.support == frozenset(range(1, self.m + 1))

    @property
    def is_empty(self) -> bool:
        """True for the empty complex ``{∅}`` (the empty space)."""
        return len(self.simplices) == 1

    def dim(self) -> int:
        return max(len(s) for s in self.simplices) - 1

    def simplices_of_dim(self, d: int) -> list:
        """All d-simplices as sorted vertex tuples, in canonical order."""
        return sorted(tuple(sorted(s)) for s in self.simplices if len(s) == d + 1)

    def f_vector(self) -> tuple:
        """Numbers of simplices per dimension, dimensions 0..dim."""
        if self.is_empty:
            return ()
        counts = {}
        for s in self.simplices:
            if s:
                counts[len(s) - 1] = counts.get(len(s) - 1, 0) + 1
        return tuple(counts.get(d, 0) for d in range(max(counts) + 1))

    def maximal_simplices(self) -> list:
        nonempty = [s for s in self.simplices if s]
        return _sorted_simplices(
            s for s in nonempty if not any(s < t for t in nonempty)
        )

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices if s)

    def _check_closed(self):
        for s in self.simplices:
            for v in s:
                if s - {v} not in self.simplices:
                    raise InvalidComplexError(f"not closed under subsets at {sorted(s)}")

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "maximal_simplices": [sorted(s) for s in self.maximal_simplices()],
        }


def build_complex(m: int, maximal) -> SimplicialComplex:
    """Downward closure of the given generating simplices on ``1..m``.

    Duplicated generators and generators contained in another one are
    accepted with a warning.  Vertex labels outside ``1..m`` are an error.
    """
    if m < 0:
        raise InvalidComplexError("vertex count must be nonnegative")
    gens = []
    seen = set()
    for raw in maximal:
        s = _canon(raw)
        if any(v < 1 or v > m for v in s):
            raise InvalidComplexError(f"vertex out of range in {sorted(s)}")
        if s in seen:
            warnings.warn(f"duplicate maximal simplex {sorted(s)}", stacklevel=2)
            continue
        seen.add(s)
        gens.append(s)
    for s in gens:
        if any(s < t for t in gens):
            warnings.warn(f"simplex {sorted(s)} is contained in another generator", stacklevel=2)
    simplices = {frozenset()}
    for s in gens:
        for k in range(len(s) + 1):
            simplices.update(frozenset(c) for c in itertools.combinations(s, k))
    return SimplicialComplex(m=m, simplices=frozenset(simplices))


def full_subcomplex(complex: SimplicialComplex, vertices) -> SimplicialComplex:
    """All simplices with vertices inside the given set, relabeled ``1..|J|``.

    The original labels are retained in ``vertex_names``.  The empty vertex
    set yields the empty complex.
    """
    J = sorted(_canon(vertices))
    relabel = {v: i + 1 for i, v in enumerate(J)}
    simplices = {
        frozenset(relabel[v] for v in s)
        for s in complex.simplices
        if s <= frozenset(J)
    }
    return SimplicialComplex(m=len(J), simplices=frozenset(simplices), vertex_names=tuple(J))


def restrict(complex: SimplicialComplex, vertices) -> SimplicialComplex:
    """Like :func:`full_subcomplex` but keeping the ambient labels and m.

    Used for panels, which must stay comparable with subcomplexes of the same
    ambient complex.
    """
    J = _canon(vertices)
    simplices = frozenset(s for s in complex.simplices if s <= J)
    return SimplicialComplex(m=complex.m, simplices=simplices, vertex_names=complex.vertex_names)


def _chains(cover_sets):
    """All chains (including the empty one) in a finite containment order.

    ``cover_sets`` is a list of frozensets; a chain is a tuple of indices
    whose sets are strictly nested in order.
    """
    order = _sorted_simplices(cover_sets)
    index = {s: i for i, s in enumerate(order)}
    above = {
        s: [t for t in order if s < t]
        for s in order
    }
    chains = [()]

    def extend(prefix, last):
        for nxt in above[last]:
            chain = prefix + (index[nxt],)
            chains.append(chain)
            extend(chain, nxt)

    for s in order:
        chains.append((index[s],))
        extend((index[s],), s)
    return order, chains


def barycentric_subdivision(complex: SimplicialComplex) -> SimplicialComplex:
    """The order complex of the nonempty simplices of ``complex``.

    Vertices are the nonempty simplices, labeled ``1..N`` in
    (dimension, lexicographic) order; simplices are the strictly nested
    chains.  ``vertex_names`` records the simplex each new vertex subdivides.
    """
    nonempty = [s for s in complex.simplices if s]
    order, chains = _chains(nonempty)
    simplices = frozenset(frozenset(i + 1 for i in chain) for chain in chains)
    names = tuple(tuple(sorted(s)) for s in order)
    return SimplicialComplex(m=len(order), simplices=simplices, vertex_names=names)


def face_subcomplex(
    complex: SimplicialComplex, simplex, subdivision: SimplicialComplex | None = None
) -> SimplicialComplex:
    """The closed star of ``simplex`` in the barycentric subdivision.

    This is the subcomplex of the subdivision spanned by the vertices that
    subdivide simplices containing ``simplex``; it realizes the poset of
    simplices above ``simplex`` and is contractible.  Returns a complex with
    the subdivision's ambient labels.  ``subdivision`` may be passed in to
    avoid recomputing it.
    """
    s = _canon(simplex)
    if not s or s not in complex.simplices:
        raise InvalidComplexError(f"{sorted(s)} is not a nonempty simplex of the complex")
    if subdivision is None:
        subdivision = barycentric_subdivision(complex)
    keep = {
        i + 1
        for i, name in enumerate(subdivision.vertex_names)
        if s <= frozenset(name)
    }
    return restrict(subdivision, keep)


def cone(complex: SimplicialComplex) -> SimplicialComplex:
    """Cone with a fresh apex carrying the maximal vertex label ``m + 1``."""
    apex = complex.m + 1
    simplices = set(complex.simplices)
    simplices.update(s | {apex} for s in complex.simplices)
    return SimplicialComplex(m=apex, simplices=frozenset(simplices), vertex_names=complex.vertex_names)


def nerve(subcomplexes) -> SimplicialComplex:
    """Nerve of a family of subcomplexes of a common complex.

    Vertex ``i`` of the nerve corresponds to the i-th member; a subset is a
    simplex when the members' intersection contains at least one nonempty
    simplex.  The empty family yields the empty complex.
    """
    members = list(subcomplexes)
    n = len(members)
    simplices = {frozenset()}
    for k in range(1, n + 1):
        for combo in itertools.combinations(range(n), k):
            common = set(members[combo[0]].simplices)
            for i in combo[1:]:
                common &= members[i].simplices
            if len(common) > 1:
                simplices.add(frozenset(v + 1 for v in combo))
    return SimplicialComplex(m=n, simplices=frozenset(simplices))


# ---------------------------------------------------------------------------
# Simplicial posets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimplicialPoset:
    """A finite poset with least element whose lower segments are Boolean.

    ``elements`` lists the element ids (strings) excluding the least element
    ``bottom``; ``below`` maps each element to the frozenset of elements
    strictly below it (the least element excluded).  ``vertex_set`` maps each
    element to the set of vertex labels of the atoms below it, a subset of
    ``1..m``.
    """

    elements: tuple
    bottom: str
    below: dict
    vertex_set: dict
    m: int = 0

    def leq(self, a, b) -> bool:
        return a == b or a in self.below[b]

    def rank(self, a) -> int:
        return len(self.vertex_set[a])

    def atoms(self) -> list:
        return [e for e in self.elements if self.rank(e) == 1]

    def atom_with_label(self, j: int) -> str:
        for e in self.elements:
            if self.vertex_set[e] == frozenset({j}):
                return e
        raise KeyError(j)

    def meet(self, a, b):
        """Greatest common lower bound, or None when it is not unique.

        For a valid simplicial poset the meet is unique whenever ``a`` and
        ``b`` have a common upper bound.
        """
        lower = ({a} | self.below[a]) & ({b} | self.below[b])
        if not lower:
            return self.bottom
        maximal = [e for e in lower if not any(e in self.below[f] for f in lower)]
        if len(maximal) != 1:
            return None
        return maximal[0]

    def join(self, a, b) -> tuple:
        """Minimal common upper bounds, possibly several or none."""
        upper = [
            e
            for e in self.elements
            if (a == e or a in self.below[e]) and (b == e or b in self.below[e])
        ]
        minimal = [e for e in upper if not any(f in self.below[e] for f in upper)]
        return tuple(sorted(minimal))

    def full_subposet(self, vertices) -> "SimplicialPoset":
        """Elements whose vertex set lies inside the given label set."""
        J = _canon(vertices)
        keep = [e for e in self.elements if self.vertex_set[e] <= J]
        keepset = set(keep)
        return SimplicialPoset(
            elements=tuple(keep),
            bottom=self.bottom,
            below={e: self.below[e] & keepset for e in keep},
            vertex_set={e: self.vertex_set[e] for e in keep},
            m=self.m,
        )


def build_poset(elements, covers, vertex_labels=None) -> SimplicialPoset:
    """Validated simplicial poset from covering relations.

    ``covers`` lists pairs ``[a, b]`` meaning ``a`` is covered by ``b``; the
    order is the transitive closure.  The least element is inferred as the
    unique minimal element.  ``vertex_labels`` optionally assigns the integer
    labels ``1..m`` to the rank-one elements (default: sorted by id).

    Raises :class:`InvalidComplexError` when there is no unique least
    element, a lower segment is not a Boolean lattice, or two elements with
    a common upper bound have no unique greatest common lower bound.
    """
    ids = [str(e) for e in elements]
    if len(set(ids)) != len(ids):
        raise InvalidComplexError("duplicate element ids")
    below = {e: set() for e in ids}
    parents = {e: set() for e in ids}
    for a, b in covers:
        a, b = str(a), str(b)
        if a not in below or b not in below:
            raise InvalidComplexError(f"cover ({a}, {b}) uses unknown element")
        parents[a].add(b)
    # transitive closure by repeated expansion (posets here are tiny)
    changed = True
    strictly_above = {e: set(parents[e]) for e in ids}
    while changed:
        changed = False
        for e in ids:
            new = set()
            for f in strictly_above[e]:
                new |= strictly_above[f]
            if not new <= strictly_above[e]:
                strictly_above[e] |= new
                changed = True
    for e in ids:
        if e in strictly_above[e]:
            raise InvalidComplexError("covering relations contain a cycle")
        for f in strictly_above[e]:
            below[f].add(e)

    minimal = [e for e in ids if not below[e]]
    if len(minimal) != 1:
        raise InvalidComplexError("poset must have a unique least element")
    bottom = minimal[0]
    proper = [e for e in ids if e != bottom]
    below = {e: frozenset(v for v in below[e] if v != bottom) for e in proper}

    atoms = [e for e in proper if not below[e]]
    if vertex_labels:
        labels = {str(k): int(v) for k, v in vertex_labels.items()}
        if sorted(labels) != sorted(atoms) or sorted(labels.values()) != list(
            range(1, len(atoms) + 1)
        ):
            raise InvalidComplexError("vertex labels must biject the atoms onto 1..m")
    else:
        labels = {a: i + 1 for i, a in enumerate(sorted(atoms))}

    vertex_set = {
        e: frozenset(labels[a] for a in atoms if a == e or a in below[e])
        for e in proper
    }

    poset = SimplicialPoset(
        elements=tuple(sorted(proper, key=lambda e: (len(vertex_set[e]), e))),
        bottom=bottom,
        below=below,
        vertex_set=vertex_set,
        m=len(atoms),
    )
    _validate_boolean_segments(poset)
    return poset


def _validate_boolean_segments(poset: SimplicialPoset):
    for e in poset.elements:
        segment = {e} | poset.below[e]
        verts = poset.vertex_set[e]
        if len(segment) != 2 ** len(verts) - 1:
            raise InvalidComplexError(
                f"lower segment of {e!r} is not Boolean (size mismatch)"
            )
        by_verts = {}
        for f in segment:
            key = poset.vertex_set[f]
            if not key <= verts or key in by_verts:
                raise InvalidComplexError(f"lower segment of {e!r} is not Boolean")
            by_verts[key] = f
        for f in segment:
            for g in segment:
                if (poset.vertex_set[f] < poset.vertex_set[g]) != (f in poset.below[g]):
                    raise InvalidComplexError(
                        f"lower segment of {e!r} is not order-isomorphic to a Boolean lattice"
                    )
    for a in poset.elements:
        for b in poset.elements:
            if poset.join(a, b) and poset.meet(a, b) is None:
                raise InvalidComplexError(
                    f"elements {a!r}, {b!r} have upper bounds but no unique meet"
                )


def face_poset(complex: SimplicialComplex) -> SimplicialPoset:
    """The face poset of a simplicial complex as a simplicial poset."""
    name = lambda s: ",".join(map(str, sorted(s)))
    nonempty = [s for s in complex.simplices if s]
    elements = [name(s) for s in _sorted_simplices(nonempty)]
    by_name = {name(s): s for s in nonempty}
    below = {
        e: frozenset(name(t) for t in nonempty if t < by_name[e]) for e in elements
    }
    vertex_set = {e: by_name[e] for e in elements}
    return SimplicialPoset(
        elements=tuple(elements),
        bottom="",
        below=below,
        vertex_set=vertex_set,
        m=complex.m,
    )


def poset_order_complex(poset: SimplicialPoset) -> SimplicialComplex:
    """Simplicial complex of chains in the poset minus its least element.

    This is the barycentric subdivision of the cell complex the poset
    describes, and the genuine simplicial model used for all homology
    computations.  Vertices are labeled ``1..N`` sorting elements by
    (rank, id); ``vertex_names`` records the element ids.
    """
    order = sorted(poset.elements, key=lambda e: (poset.rank(e), e))
    index = {e: i + 1 for i, e in enumerate(order)}
    chains = [()]

    def extend(chain, last):
        for nxt in order:
            if last in poset.below[nxt]:
                chains.append(chain + (nxt,))
                extend(chain + (nxt,), nxt)

    for e in order:
        chains.append((e,))
        extend((e,), e)
    simplices = frozenset(frozenset(index[e] for e in chain) for chain in chains)
    return SimplicialComplex(m=len(order), simplices=simplices, vertex_names=tuple(order))
