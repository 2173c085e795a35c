"""Face rings: Stanley-Reisner, simplicial-poset, and topological.

Three graded rings share one block structure, graded by subsets of the
panel or vertex index set under union:

* the Stanley-Reisner ring of a simplicial complex: polynomial generators
  ``x_1 .. x_m`` modulo the monomials whose support is not a simplex.  Its
  monomial basis groups by support ``J``, the block being the rank-one
  module spanned by the monomials with all exponents positive exactly on
  ``J``;

* the face ring of a simplicial poset: one generator per poset element,
  ``v_bottom = 1`` and ``v_a v_b = v_meet(a,b) * sum of v_c over the
  minimal common upper bounds`` (an empty sum meaning zero).  Its canonical
  basis is the chain monomials, products are rewritten to that normal form
  by reducing one incomparable pair at a time;

* the topological face ring of a paneled space: block ``J`` is the
  cohomology of the intersection ``P_∩J`` tensored with the exactly-``J``
  monomials, and the product pulls both cohomology factors back to the
  deeper intersection and cups them there.  Degree-zero cohomology uses the
  canonical component-indicator basis, so blocks of the canonical poset
  panelization line up one component per poset element.

:func:`hilbert_series` counts graded ranks (free rank and torsion are
reported separately, since dimension is not well defined over the integers
in the presence of torsion), and :func:`iso_check` is a certificate-style
comparison: graded dimensions always, block dimensions and structure
constants under the canonical generator correspondences where both sides
expose them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .complexes import SimplicialComplex, SimplicialPoset
from .constructions import PanelComplex, format_subset, subsets
from .cupring import FpBasis, simplicial_cup
from .homology import CochainComplexBases, chain_complex


class RewriteLimitError(RuntimeError):
    """The poset rewriting did not reach normal form within the step budget."""


# ---------------------------------------------------------------------------
# Block rings (Stanley-Reisner and topological)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockClass:
    """One coefficient-module basis class of a block."""

    q: int  # cohomological degree
    order: int  # 0 = free, d >= 2 = torsion of order d
    position: int  # index within the block
    component: tuple = ()  # smallest cell of the component, for q = 0 classes


class MonomialBlockRing:
    """Blocks of coefficient classes tensored with exactly-``J`` monomials."""

    def __init__(self, m, x_degree, blocks, coeff_products, coefficients="Z", kind="generic"):
        self.m = m
        self.x_degree = int(x_degree)
        self.blocks = {J: tuple(classes) for J, classes in blocks.items() if classes}
        self.coeff_products = coeff_products
        self.coefficients = coefficients
        self.kind = kind

    def block(self, J):
        return self.blocks.get(frozenset(J), ())

    def class_degree(self, J, position) -> int:
        return self.blocks[J][position].q

    # basis elements are ((J, position), exponents) with exponents a sorted
    # tuple of (variable, power >= 1) supported exactly on J

    def basis_elements(self, max_degree: int):
        """All basis elements of total degree at most ``max_degree``."""
        out = []
        for J in sorted(self.blocks, key=lambda s: (len(s), sorted(s))):
            for cls in self.blocks[J]:
                for exps in exponent_vectors(J, self.x_degree, max_degree - cls.q):
                    out.append(((J, cls.position), exps))
        return out

    def element_degree(self, element) -> int:
        (J, position), exps = element
        return self.class_degree(J, position) + self.x_degree * sum(
            e for _, e in exps
        )

    def multiply_basis(self, a, b) -> dict:
        """Product of two basis elements as ``{basis element: coeff}``."""
        (Ja, pa), ea = a
        (Jb, pb), eb = b
        target = Ja | Jb
        coeffs = self.coeff_products.get((Ja, pa, Jb, pb), {})
        merged: dict = {}
        for var, e in itertools.chain(ea, eb):
            merged[var] = merged.get(var, 0) + e
        exps = tuple(sorted(merged.items()))
        out = {}
        for pc, coeff in coeffs.items():
            if coeff:
                out[((target, pc), exps)] = coeff
        return out

    def multiply(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                for ec, c in self.multiply_basis(ea, eb).items():
                    out[ec] = out.get(ec, 0) + ca * cb * c
        return self._reduce(out)

    def _reduce(self, vec: dict) -> dict:
        out = {}
        for element, v in vec.items():
            (J, position), _ = element
            order = self.blocks[J][position].order
            if order:
                v %= order
            if self.coefficients != "Z":
                v %= int(self.coefficients)
            if v:
                out[element] = v
        return out

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "coefficients": str(self.coefficients),
            "x_degree": self.x_degree,
            "blocks": [
                {
                    "subset": sorted(J),
                    "classes": [
                        {"q": c.q, "order": c.order, "component": list(c.component)}
                        for c in classes
                    ],
                }
                for J, classes in sorted(
                    self.blocks.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))
                )
            ],
        }


def exponent_vectors(J, x_degree, budget):
    """Exponent tuples supported exactly on ``J`` with weighted degree <= budget.

    Weighted degree is ``x_degree`` times the exponent total; the empty
    support has the single empty vector.
    """
    J = sorted(J)
    if not J:
        return [()] if budget >= 0 else []
    out = []
    max_total = budget // x_degree if x_degree else len(J)
    for total in range(len(J), max_total + 1):
        for cuts in itertools.combinations(range(1, total), len(J) - 1):
            bounds = (0,) + cuts + (total,)
            exps = tuple(
                (v, bounds[i + 1] - bounds[i]) for i, v in enumerate(J)
            )
            out.append(exps)
    return out


def count_exponent_vectors(size: int, total: int) -> int:
    """Positive integer solutions of ``e_1 + ... + e_size = total``."""
    if size == 0:
        return 1 if total == 0 else 0
    return comb(total - 1, size - 1) if total >= size else 0


def stanley_reisner_ring(
    complex: SimplicialComplex, x_degree: int = 2, coefficients="Z"
) -> MonomialBlockRing:
    """The face ring of a simplicial complex as a block ring.

    One rank-one block per simplex; two blocks multiply to the union block
    when the union is again a simplex and to zero otherwise.
    """
    if not complex.is_minimal:
        raise ValueError("every vertex must lie in some simplex")
    blocks = {
        frozenset(s): (BlockClass(q=0, order=0, position=0),)
        for s in complex.simplices
    }
    coeff_products = {}
    for J in blocks:
        for Jp in blocks:
            if (J | Jp) in blocks:
                coeff_products[(J, 0, Jp, 0)] = {0: 1}
    return MonomialBlockRing(
        complex.m,
        x_degree,
        blocks,
        coeff_products,
        coefficients=coefficients,
        kind="stanley-reisner",
    )


class _IntersectionBlock:
    """Cohomology classes of one intersection, indicators in degree zero."""

    def __init__(self, panel_complex: PanelComplex, J, coefficients):
        self.J = J
        self.complex = panel_complex.intersection(J)
        self.components = panel_complex.components(J)
        self.coefficients = coefficients
        self.classes: list = []
        self.cells: dict = {}
        self._bases: dict = {}
        if self.complex.is_empty:
            return
        chain = chain_complex(self.complex)
        self.cells = {d: list(cs) for d, cs in chain.labels.items()}
        vertex_index = {c: i for i, c in enumerate(self.cells.get(0, []))}
        self._indicators = []
        for comp in self.components:
            vec = {
                vertex_index[tuple(sorted(s))]: 1 for s in comp if len(s) == 1
            }
            self._indicators.append(vec)
            self.classes.append(
                BlockClass(
                    q=0,
                    order=0,
                    position=len(self.classes),
                    component=min(tuple(sorted(s)) for s in comp),
                )
            )
        top = self.complex.dim()
        if coefficients == "Z":
            bases = CochainComplexBases(chain)
            for q in range(1, top + 1):
                basis = bases.basis(q)
                self._bases[q] = basis
                for cls in basis.classes:
                    self.classes.append(
                        BlockClass(q=q, order=cls.order, position=len(self.classes))
                    )
        else:
            p = int(coefficients)
            for q in range(1, top + 1):
                basis = FpBasis(
                    chain.boundary(q + 1).transpose(), chain.boundary(q).transpose(), p
                )
                self._bases[q] = basis
                for _ in basis.classes:
                    self.classes.append(
                        BlockClass(q=q, order=0, position=len(self.classes))
                    )

    def representative(self, position) -> tuple:
        """(degree, cochain over this block's cells) of a basis class."""
        cls = self.classes[position]
        if cls.q == 0:
            return 0, dict(self._indicators[position])
        basis = self._bases[cls.q]
        offset = min(
            i for i, c in enumerate(self.classes) if c.q == cls.q
        )
        k = position - offset
        if self.coefficients == "Z":
            return cls.q, dict(basis.classes[k].vector)
        vec = basis.classes[k]
        return cls.q, {i: v for i, v in enumerate(vec) if v}

    def coordinates(self, q, cochain) -> list:
        """Coordinates in the order of ``classes`` restricted to degree q."""
        if q == 0:
            vertex_cells = self.cells.get(0, [])
            out = []
            for vec in self._indicators:
                vertex = next(iter(vec))
                out.append(cochain.get(vertex, 0))
            return out
        return list(self._bases[q].coordinates(cochain))

    def positions_of_degree(self, q) -> list:
        return [i for i, c in enumerate(self.classes) if c.q == q]


def topological_face_ring(
    panel_complex: PanelComplex, x_degree: int = 2, coefficients="Z"
) -> MonomialBlockRing:
    """Block ring of intersection cohomologies with monomial twists.

    The coefficient product of classes from blocks ``J`` and ``J'`` pulls
    both back to ``P_∩(J ∪ J')`` along the inclusions and cups there.
    """
    data = {
        J: _IntersectionBlock(panel_complex, J, coefficients)
        for J in subsets(panel_complex.m)
    }
    blocks = {J: tuple(d.classes) for J, d in data.items() if d.classes}
    coeff_products: dict = {}
    for J, dJ in data.items():
        if not dJ.classes:
            continue
        for Jp, dJp in data.items():
            if not dJp.classes:
                continue
            target = data[J | Jp]
            if not target.classes:
                continue
            for a, ca in enumerate(dJ.classes):
                qa, rep_a = dJ.representative(a)
                pulled_a = _pullback(rep_a, dJ.cells.get(qa, []), target.cells.get(qa, []))
                for b, cb in enumerate(dJp.classes):
                    qb, rep_b = dJp.representative(b)
                    q = qa + qb
                    positions = target.positions_of_degree(q)
                    if not positions:
                        continue
                    pulled_b = _pullback(
                        rep_b, dJp.cells.get(qb, []), target.cells.get(qb, [])
                    )
                    cup = simplicial_cup(
                        target.complex, pulled_a, qa, pulled_b, qb, check=False
                    )
                    coords = target.coordinates(q, cup)
                    terms = {}
                    for pos, coeff in zip(positions, coords):
                        order = target.classes[pos].order
                        if order:
                            coeff %= order
                        if coefficients != "Z":
                            coeff %= int(coefficients)
                        if coeff:
                            terms[pos] = coeff
                    if terms:
                        coeff_products[(J, a, Jp, b)] = terms
    return MonomialBlockRing(
        panel_complex.m,
        x_degree,
        blocks,
        coeff_products,
        coefficients=coefficients,
        kind="topological",
    )


def _pullback(cochain: dict, source_cells: list, target_cells: list) -> dict:
    """Restrict a cochain along an inclusion of cell lists."""
    index = {c: i for i, c in enumerate(source_cells)}
    out = {}
    for i, c in enumerate(target_cells):
        v = cochain.get(index[c], 0) if c in index else 0
        if v:
            out[i] = v
    return out


# ---------------------------------------------------------------------------
# Simplicial poset face rings
# ---------------------------------------------------------------------------


class PosetRingElement(dict):
    """Integer combination of chain monomials.

    Keys are tuples of ``(element, exponent)`` along a strict chain, sorted
    by increasing rank; the empty tuple is the unit monomial.
    """

    def __add__(self, other):
        out = PosetRingElement(self)
        for k, v in other.items():
            new = out.get(k, 0) + v
            if new:
                out[k] = new
            else:
                out.pop(k, None)
        return out

    def scale(self, c):
        return PosetRingElement({k: c * v for k, v in self.items() if c * v})


class PosetFaceRing:
    """The face ring of a simplicial poset on its chain-monomial basis."""

    def __init__(self, poset: SimplicialPoset, x_degree: int = 2, step_limit: int = 10000):
        self.poset = poset
        self.x_degree = int(x_degree)
        self.step_limit = step_limit

    def one(self) -> PosetRingElement:
        return PosetRingElement({(): 1})

    def generator(self, element) -> PosetRingElement:
        if element == self.poset.bottom:
            return self.one()
        if element not in self.poset.below:
            raise KeyError(element)
        return PosetRingElement({((element, 1),): 1})

    def monomial_degree(self, monomial) -> int:
        return self.x_degree * sum(
            e * len(self.poset.vertex_set[el]) for el, e in monomial
        )

    def degree(self, element: PosetRingElement):
        degs = {self.monomial_degree(k) for k in element}
        return degs.pop() if len(degs) == 1 else None

    def multiply(self, a: PosetRingElement, b: PosetRingElement, choose_pair=None) -> PosetRingElement:
        """Product in chain-monomial normal form.

        ``choose_pair`` overrides the reduction strategy (default: first
        incomparable pair in rank order); any strategy must yield the same
        normal form, which the test suite exercises with random choices.
        """
        out = PosetRingElement()
        budget = [self.step_limit]
        for ka, va in a.items():
            for kb, vb in b.items():
                merged: dict = {}
                for el, e in itertools.chain(ka, kb):
                    merged[el] = merged.get(el, 0) + e
                out = out + self._normalize(merged, va * vb, budget, choose_pair)
        return out

    def _normalize(self, exps: dict, coeff, budget, choose_pair) -> PosetRingElement:
        if budget[0] <= 0:
            raise RewriteLimitError(
                "rewriting exceeded the step budget; the input poset is likely invalid"
            )
        budget[0] -= 1
        support = sorted(exps, key=lambda e: (self.poset.rank(e), e))
        pair = None
        candidates = [
            (x, y)
            for i, x in enumerate(support)
            for y in support[i + 1 :]
            if not (self.poset.leq(x, y) or self.poset.leq(y, x))
        ]
        if candidates:
            pair = choose_pair(candidates) if choose_pair else candidates[0]
        if pair is None:
            key = tuple((el, exps[el]) for el in support)
            return PosetRingElement({key: coeff})
        x, y = pair
        joins = self.poset.join(x, y)
        if not joins:
            return PosetRingElement()
        meet = self.poset.meet(x, y)
        out = PosetRingElement()
        for eta in joins:
            new = dict(exps)
            for el in (x, y):
                new[el] -= 1
                if not new[el]:
                    del new[el]
            if meet != self.poset.bottom:
                new[meet] = new.get(meet, 0) + 1
            new[eta] = new.get(eta, 0) + 1
            out = out + self._normalize(new, coeff, budget, choose_pair)
        return out

    def basis_monomials(self, max_degree: int) -> list:
        """Chain monomials of weighted degree at most ``max_degree``."""
        out = [()]
        elements = sorted(
            self.poset.elements, key=lambda e: (self.poset.rank(e), e)
        )

        def grow(chain, last, degree):
            for el in elements:
                if last is not None and last not in self.poset.below[el]:
                    continue
                w = self.x_degree * len(self.poset.vertex_set[el])
                if degree + w > max_degree:
                    continue
                e = 1
                while degree + e * w <= max_degree:
                    monomial = chain + ((el, e),)
                    out.append(monomial)
                    grow(monomial, el, degree + e * w)
                    e += 1

        grow((), None, 0)
        return sorted(out, key=lambda mono: (self.monomial_degree(mono), mono))

    def hilbert_ranks(self, max_degree: int) -> tuple:
        ranks = [0] * (max_degree + 1)
        for monomial in self.basis_monomials(max_degree):
            ranks[self.monomial_degree(monomial)] += 1
        return tuple(ranks)


def poset_face_ring_multiply(
    poset: SimplicialPoset, a: PosetRingElement, b: PosetRingElement, x_degree: int = 2
) -> PosetRingElement:
    return PosetFaceRing(poset, x_degree).multiply(a, b)


# ---------------------------------------------------------------------------
# Hilbert series and isomorphism certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HilbertData:
    """Graded free ranks and torsion counts up to a degree bound."""

    ranks: tuple
    torsion: tuple  # per degree, sorted tuple of (order, count)

    def rows(self):
        for degree, rank in enumerate(self.ranks):
            torsion = ";".join(f"{order}^{count}" for order, count in self.torsion[degree])
            yield (degree, rank, torsion)

    def first_difference(self, other):
        for degree in range(max(len(self.ranks), len(other.ranks))):
            mine = (
                self.ranks[degree] if degree < len(self.ranks) else 0,
                self.torsion[degree] if degree < len(self.torsion) else (),
            )
            theirs = (
                other.ranks[degree] if degree < len(other.ranks) else 0,
                other.torsion[degree] if degree < len(other.torsion) else (),
            )
            if mine != theirs:
                return degree, mine, theirs
        return None


def hilbert_series(ring, max_degree: int) -> HilbertData:
    """Graded dimensions of a block ring or a poset face ring."""
    if isinstance(ring, PosetFaceRing):
        return HilbertData(
            ranks=ring.hilbert_ranks(max_degree),
            torsion=((),) * (max_degree + 1),
        )
    ranks = [0] * (max_degree + 1)
    torsion = [dict() for _ in range(max_degree + 1)]
    for J, classes in ring.blocks.items():
        size = len(J)
        for cls in classes:
            for degree in range(cls.q, max_degree + 1):
                rest = degree - cls.q
                if ring.x_degree and rest % ring.x_degree:
                    continue
                total = rest // ring.x_degree if ring.x_degree else rest
                count = count_exponent_vectors(size, total)
                if not count:
                    continue
                if cls.order:
                    bucket = torsion[degree]
                    bucket[cls.order] = bucket.get(cls.order, 0) + count
                else:
                    ranks[degree] += count
    return HilbertData(
        ranks=tuple(ranks),
        torsion=tuple(tuple(sorted(t.items())) for t in torsion),
    )


@dataclass(frozen=True)
class IsoReport:
    isomorphic: bool
    detail: str
    first_mismatch: tuple | None = None

    def __bool__(self):
        return self.isomorphic


def iso_check(ring_a, ring_b, max_degree: int) -> IsoReport:
    """Certificate comparison of two rings up to a degree bound.

    Hilbert data is compared always.  Structure constants are compared
    under the canonical generator correspondence when one is available:
    block-to-block for two block rings (identity on monomials), and the
    chain-monomial-to-component map for a topological ring built from a
    poset panelization against that poset's face ring.
    """
    if isinstance(ring_b, PosetFaceRing) and isinstance(ring_a, MonomialBlockRing):
        return _iso_check_poset(ring_a, ring_b, max_degree)
    if isinstance(ring_a, PosetFaceRing) and isinstance(ring_b, MonomialBlockRing):
        return _iso_check_poset(ring_b, ring_a, max_degree)
    if isinstance(ring_a, PosetFaceRing) and isinstance(ring_b, PosetFaceRing):
        ha = hilbert_series(ring_a, max_degree)
        hb = hilbert_series(ring_b, max_degree)
        diff = ha.first_difference(hb)
        if diff:
            return IsoReport(False, "hilbert series differ", diff)
        return IsoReport(True, f"hilbert series agree up to degree {max_degree}")

    ha = hilbert_series(ring_a, max_degree)
    hb = hilbert_series(ring_b, max_degree)
    diff = ha.first_difference(hb)
    if diff:
        return IsoReport(False, "hilbert series differ", diff)
    if ring_a.x_degree != ring_b.x_degree or ring_a.m != ring_b.m:
        return IsoReport(False, "incompatible gradings", None)
    # blockwise dimensions
    for J in set(ring_a.blocks) | set(ring_b.blocks):
        ca = sorted((c.q, c.order) for c in ring_a.block(J))
        cb = sorted((c.q, c.order) for c in ring_b.block(J))
        if ca != cb:
            return IsoReport(
                False, "block dimensions differ", (format_subset(J), ca, cb)
            )
    # structure constants on the shared basis, class positions matched in order
    elements_a = ring_a.basis_elements(max_degree)
    for ea, eb in itertools.combinations_with_replacement(elements_a, 2):
        if ring_a.element_degree(ea) + ring_a.element_degree(eb) > max_degree:
            continue
        for left, right in ((ea, eb), (eb, ea)):
            pa = ring_a.multiply_basis(left, right)
            pb = ring_b.multiply_basis(left, right)
            if pa != pb:
                return IsoReport(
                    False, "structure constants differ", (left, right, pa, pb)
                )
    return IsoReport(
        True, f"graded pieces and structure constants agree up to degree {max_degree}"
    )


def _iso_check_poset(
    block_ring: MonomialBlockRing, poset_ring: PosetFaceRing, max_degree: int
) -> IsoReport:
    """Compare a topological ring with a poset face ring via chain monomials.

    The correspondence sends a chain monomial to the component class of its
    maximal element's intersection block, twisted by the product of the
    squarefree support monomials of the chain.
    """
    poset = poset_ring.poset
    if block_ring.x_degree != poset_ring.x_degree:
        return IsoReport(False, "incompatible gradings", None)
    ha = hilbert_series(block_ring, max_degree)
    hb = hilbert_series(poset_ring, max_degree)
    diff = ha.first_difference(hb)
    if diff:
        return IsoReport(False, "hilbert series differ", diff)

    component_position = _component_positions(block_ring, poset)
    if component_position is None:
        return IsoReport(
            False, "blocks do not match the poset's component structure", None
        )

    def rho(monomial):
        if not monomial:
            return ((frozenset(), 0), ())
        top_el = monomial[-1][0]
        exponents: dict = {}
        for el, e in monomial:
            for j in poset.vertex_set[el]:
                exponents[j] = exponents.get(j, 0) + e
        J = frozenset(poset.vertex_set[top_el])
        return ((J, component_position[top_el]), tuple(sorted(exponents.items())))

    monomials = poset_ring.basis_monomials(max_degree)
    images = [rho(mono) for mono in monomials]
    if len(set(images)) != len(images):
        return IsoReport(False, "correspondence is not injective", None)
    block_basis = set(
        map(_basis_key, block_ring.basis_elements(max_degree))
    )
    if set(map(_basis_key, images)) != block_basis:
        missing = block_basis - set(map(_basis_key, images))
        extra = set(map(_basis_key, images)) - block_basis
        return IsoReport(
            False, "correspondence is not onto the block basis", (sorted(missing)[:3], sorted(extra)[:3])
        )
    for ma, mb in itertools.combinations_with_replacement(monomials, 2):
        if (
            poset_ring.monomial_degree(ma) + poset_ring.monomial_degree(mb)
            > max_degree
        ):
            continue
        product = poset_ring.multiply(
            PosetRingElement({ma: 1}), PosetRingElement({mb: 1})
        )
        lhs = {_basis_key(rho(mono)): c for mono, c in product.items()}
        rhs = {
            _basis_key(el): c
            for el, c in block_ring.multiply_basis(rho(ma), rho(mb)).items()
        }
        if lhs != rhs:
            return IsoReport(
                False, "structure constants differ", (ma, mb, lhs, rhs)
            )
    return IsoReport(
        True, f"chain-monomial correspondence is a ring isomorphism up to degree {max_degree}"
    )


def _basis_key(element):
    (J, position), exps = element
    return (tuple(sorted(J)), position, exps)


def _component_positions(block_ring: MonomialBlockRing, poset: SimplicialPoset):
    """Map each poset element to its component class position, or None.

    Valid only for the topological ring of the canonical poset
    panelization: the components of the block for ``J`` are the stars of
    the elements with vertex set exactly ``J``, and the component's
    smallest cell is the chain starting there, i.e. the singleton of the
    element's order-complex label.
    """
    order = sorted(poset.elements, key=lambda e: (poset.rank(e), e))
    label = {el: i + 1 for i, el in enumerate(order)}
    out = {}
    for el in poset.elements:
        J = frozenset(poset.vertex_set[el])
        classes = block_ring.block(J)
        position = None
        for cls in classes:
            if cls.q == 0 and cls.component == (label[el],):
                position = cls.position
        if position is None:
            return None
        out[el] = position
    return out
