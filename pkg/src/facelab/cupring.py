"""Cup products and the block cohomology ring of sphere-pair products.

The simplicial cup product is the front-face/back-face formula on the
canonical ascending vertex order: evaluating ``u ∪ v`` on a ``(p+q)``-cell
multiplies ``u`` on the first ``p+1`` vertices with ``v`` on the last
``q+1``.  If ``u`` vanishes on a subcomplex ``A`` and ``v`` on ``B``, the
product vanishes on ``A ∪ B``, which is all we need for relative classes:
a relative cochain is stored on the cells outside its subcomplex and
silently extended by zero.

:func:`sphere_pair_ring` assembles the full cohomology ring of a sphere
pair product over a paneled space on the additive basis of the union
decomposition: one block per subset ``J``, the block being the chosen basis
of ``H^*(Y, P_J)`` with degrees raised by the sphere total ``N_J``.  The
product of blocks ``J`` and ``J'``:

* vanishes when the overlap ``J ∩ J'`` contains a factor with ``n_j >= 1``
  (the reduced diagonal of a suspension is null homotopic);
* is otherwise the relative cup product into block ``J ∪ J'``, scaled by a
  Koszul sign: moving the second cocycle past the first block's sphere
  classes gives ``(-1)^(q' N_J)``, and merging the two ascending sphere
  smash factors into one ascending list contributes the sign of that
  shuffle, graded by the sphere dimensions.

With these signs the ring is graded commutative and associative in the
total degree, and for uniformly 0-dimensional spheres it reduces to the
plain relative cup product ring.  The sphere generators are only fixed up
to sign, so the structure constants are canonical only up to the recorded
basis; every serialization includes it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import SimplicialComplex
from .constructions import PanelComplex, format_subset, subsets
from .homology import (
    CochainComplexBases,
    ChainComplexError,
    GradedGroup,
    cells_by_degree,
    chain_complex,
    _merge_torsion,
)
from .polyprod import SpherePairs
from .snf import IntMatrix


def coboundary(complex: SimplicialComplex, degree: int) -> IntMatrix:
    """Matrix of ``delta: C^degree -> C^(degree+1)`` on canonical cells."""
    return chain_complex(complex).boundary(degree + 1).transpose()


def is_cocycle(complex: SimplicialComplex, cochain: dict, degree: int) -> bool:
    return not coboundary(complex, degree).apply(cochain)


def vanishes_on(cochain: dict, cells: list, subcomplex: SimplicialComplex) -> bool:
    return all(
        v == 0 or frozenset(cells[i]) not in subcomplex.simplices
        for i, v in cochain.items()
    )


def simplicial_cup(
    complex: SimplicialComplex,
    u: dict,
    deg_u: int,
    v: dict,
    deg_v: int,
    left_annihilator: SimplicialComplex | None = None,
    right_annihilator: SimplicialComplex | None = None,
    check: bool = True,
) -> dict:
    """Front/back-face cup product of two cochains on canonical cells.

    Cochains are sparse over the (sorted tuple ordered) cells of their
    degree.  With annihilator subcomplexes given, the inputs are checked to
    vanish there and to be cocycles, and the output then represents a class
    relative to the union of the annihilators.
    """
    cells = cells_by_degree(complex)
    if check:
        if not is_cocycle(complex, u, deg_u) or not is_cocycle(complex, v, deg_v):
            raise ChainComplexError("cup factors must be cocycles")
        if left_annihilator is not None and not vanishes_on(
            u, cells.get(deg_u, []), left_annihilator
        ):
            raise ChainComplexError("left factor does not vanish on its subcomplex")
        if right_annihilator is not None and not vanishes_on(
            v, cells.get(deg_v, []), right_annihilator
        ):
            raise ChainComplexError("right factor does not vanish on its subcomplex")
    index_u = {c: i for i, c in enumerate(cells.get(deg_u, []))}
    index_v = {c: i for i, c in enumerate(cells.get(deg_v, []))}
    out: dict = {}
    for k, cell in enumerate(cells.get(deg_u + deg_v, [])):
        front = cell[: deg_u + 1]
        back = cell[deg_u:]
        a = u.get(index_u.get(front), 0) if front in index_u else 0
        if not a:
            continue
        b = v.get(index_v.get(back), 0) if back in index_v else 0
        if a and b:
            out[k] = a * b
    return out


# ---------------------------------------------------------------------------
# The block ring
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RingBasisElement:
    subset: frozenset
    q: int  # internal degree in H^*(Y, P_J)
    total_degree: int  # q + sphere total over the subset
    order: int  # 0 for a free class, d >= 2 for torsion of order d
    label: str


class RingModel:
    """Graded ring on an explicit basis with sparse structure constants.

    ``products[i, j]`` maps a basis index ``k`` to the integer coefficient
    of basis element ``k`` in ``basis[i] * basis[j]``; absent pairs multiply
    to zero.  Torsion coordinates are stored reduced modulo their order.
    """

    def __init__(self, basis, products, coefficients="Z"):
        self.basis = tuple(basis)
        self.products = dict(products)
        self.coefficients = coefficients

    def product(self, i: int, j: int) -> dict:
        return dict(self.products.get((i, j), {}))

    def multiply(self, a: dict, b: dict) -> dict:
        """Bilinear extension of the structure constants to combinations."""
        out: dict = {}
        for i, x in a.items():
            for j, y in b.items():
                for k, c in self.products.get((i, j), {}).items():
                    out[k] = out.get(k, 0) + x * y * c
        return self._reduce(out)

    def _reduce(self, vec: dict) -> dict:
        out = {}
        for k, v in vec.items():
            order = self.basis[k].order
            if order:
                v %= order
            if self.coefficients != "Z":
                v %= int(self.coefficients)
            if v:
                out[k] = v
        return out

    def additive(self) -> GradedGroup:
        """The underlying graded group, forgetting all products."""
        acc: dict = {}
        for el in self.basis:
            rank, torsion = acc.get(el.total_degree, (0, []))
            if el.order:
                torsion = torsion + [el.order]
            else:
                rank += 1
            acc[el.total_degree] = (rank, torsion)
        return GradedGroup.build(
            {d: (r, _merge_torsion(t)) for d, (r, t) in acc.items()}
        )

    def blocks(self) -> dict:
        out: dict = {}
        for i, el in enumerate(self.basis):
            out.setdefault(el.subset, []).append(i)
        return out

    def to_json(self) -> dict:
        return {
            "coefficients": str(self.coefficients),
            "basis": [
                {
                    "index": i,
                    "subset": sorted(el.subset),
                    "internal_degree": el.q,
                    "total_degree": el.total_degree,
                    "order": el.order,
                    "label": el.label,
                }
                for i, el in enumerate(self.basis)
            ],
            "products": [
                [i, j, sorted((k, c) for k, c in terms.items())]
                for (i, j), terms in sorted(self.products.items())
                if terms
            ],
        }


def shuffle_sign(pairs: SpherePairs, left, right) -> int:
    """Sign of merging two ascending sphere lists into one, graded by n_j."""
    inversions = sum(
        pairs.dims[i - 1] * pairs.dims[j - 1]
        for i in left
        for j in right
        if j < i
    )
    return -1 if inversions % 2 else 1


class _Block:
    """Additive data of one subset block: bases of H^*(Y, P_J) per degree."""

    def __init__(self, panel_complex: PanelComplex, J: frozenset):
        self.J = J
        self.subcomplex = panel_complex.union(J)
        self.chain = chain_complex(panel_complex.space, "relative", self.subcomplex)
        self.bases = CochainComplexBases(self.chain)
        self.cells = {d: list(cs) for d, cs in self.chain.labels.items()}


def _embed(cochain: dict, cells: list, ambient_index: dict) -> dict:
    return {ambient_index[cells[i]]: v for i, v in cochain.items() if v}


def _restrict(cochain: dict, ambient_cells: list, cells: list) -> dict:
    index = {c: i for i, c in enumerate(cells)}
    out = {}
    for i, v in cochain.items():
        c = ambient_cells[i]
        if c in index:
            if v:
                out[index[c]] = v
        elif v:
            raise ChainComplexError(
                "cup product does not vanish on the target subcomplex"
            )
    return out


def sphere_pair_ring(
    panel_complex: PanelComplex, pairs: SpherePairs, coefficients="Z"
) -> RingModel:
    """Cohomology ring of the sphere-pair product on the block basis.

    Integer coefficients use Smith-normal-form bases with torsion classes;
    a prime modulus computes the mod-p ring on mod-p bases instead.
    """
    if len(pairs) != panel_complex.m:
        raise ValueError("one sphere pair per panel is required")
    if coefficients != "Z":
        return _sphere_pair_ring_modp(panel_complex, pairs, int(coefficients))
    space = panel_complex.space
    space_cells = cells_by_degree(space)
    ambient_index = {
        d: {c: i for i, c in enumerate(cs)} for d, cs in space_cells.items()
    }
    top = space.dim()
    zero_part = pairs.zero_part

    blocks = {J: _Block(panel_complex, J) for J in subsets(panel_complex.m)}
    basis: list = []
    index_of: dict = {}
    for J in subsets(panel_complex.m):
        block = blocks[J]
        shift = pairs.sphere_shift(J)
        for q in range(0, top + 1):
            for k, cls in enumerate(block.bases.basis(q).classes):
                label = f"{format_subset(J)}:q{q}:{k}"
                index_of[(J, q, k)] = len(basis)
                basis.append(
                    RingBasisElement(
                        subset=J,
                        q=q,
                        total_degree=q + shift,
                        order=cls.order,
                        label=label,
                    )
                )

    products: dict = {}
    for i, a in enumerate(basis):
        block_a = blocks[a.subset]
        rep_a = block_a.bases.basis(a.q).classes[_class_pos(block_a, a)].vector
        full_a = _embed(rep_a, block_a.cells.get(a.q, []), ambient_index.get(a.q, {}))
        for j, b in enumerate(basis):
            overlap = a.subset & b.subset
            if overlap - zero_part:
                continue
            target_J = a.subset | b.subset
            target = blocks[target_J]
            q = a.q + b.q
            if q > top or not target.bases.basis(q).classes:
                continue
            block_b = blocks[b.subset]
            rep_b = block_b.bases.basis(b.q).classes[_class_pos(block_b, b)].vector
            full_b = _embed(
                rep_b, block_b.cells.get(b.q, []), ambient_index.get(b.q, {})
            )
            cup = simplicial_cup(space, full_a, a.q, full_b, b.q, check=False)
            rel = _restrict(cup, space_cells.get(q, []), target.cells.get(q, []))
            coords = target.bases.basis(q).coordinates(rel)
            sign = shuffle_sign(pairs, a.subset - zero_part, b.subset - zero_part)
            if (b.q * pairs.sphere_shift(a.subset)) % 2:
                sign = -sign
            terms = {}
            for k, cls in enumerate(target.bases.basis(q).classes):
                c = coords[k] * sign
                if cls.order:
                    c %= cls.order
                if c:
                    terms[index_of[(target_J, q, k)]] = c
            if terms:
                products[(i, j)] = terms
    return RingModel(basis, products, coefficients="Z")


def _class_pos(block: _Block, element: RingBasisElement) -> int:
    # recover the class index within its degree from the label suffix
    return int(element.label.rsplit(":", 1)[1])


# ---------------------------------------------------------------------------
# mod-p variant
# ---------------------------------------------------------------------------


class FpBasis:
    """Basis of one cohomology group over the field with p elements."""

    def __init__(self, delta_out: IntMatrix, delta_in: IntMatrix, p: int):
        self.p = p
        n = delta_out.ncols
        kernel = _fp_nullspace(delta_out, p)
        image = [_dense_col(delta_in, j, p) for j in range(delta_in.ncols)]
        pivots: dict = {}
        reduced_image = []
        for vec in image:
            vec = _fp_reduce(vec, pivots, p)
            if any(vec):
                pivots[_lead(vec)] = vec
                reduced_image.append(vec)
        self.classes = []
        self._solve_rows = list(reduced_image)
        for vec in kernel:
            red = _fp_reduce(vec, pivots, p)
            if any(red):
                pivots[_lead(red)] = red
                self._solve_rows.append(red)
                self.classes.append(vec)
        self._image_count = len(reduced_image)
        self._pivots = pivots
        self._n = n

    def coordinates(self, cochain: dict) -> tuple:
        vec = [0] * self._n
        for i, v in cochain.items():
            vec[i] = v % self.p
        coords = [0] * len(self._solve_rows)
        vec = list(vec)
        while any(vec):
            lead = _lead(vec)
            row = self._pivots.get(lead)
            if row is None:
                raise ChainComplexError("vector is not a cocycle mod p")
            pos = self._solve_rows.index(row)
            factor = vec[lead] * pow(row[lead], -1, self.p) % self.p
            coords[pos] = (coords[pos] + factor) % self.p
            vec = [(x - factor * y) % self.p for x, y in zip(vec, row)]
        return tuple(coords[self._image_count :])


def _dense_col(matrix: IntMatrix, j: int, p: int):
    out = [0] * matrix.nrows
    for r, v in matrix.column(j).items():
        out[r] = v % p
    return out


def _lead(vec):
    for i, v in enumerate(vec):
        if v:
            return i
    return None


def _fp_reduce(vec, pivots, p):
    vec = [v % p for v in vec]
    while any(vec):
        lead = _lead(vec)
        row = pivots.get(lead)
        if row is None:
            return vec
        factor = vec[lead] * pow(row[lead], -1, p) % p
        vec = [(x - factor * y) % p for x, y in zip(vec, row)]
    return vec


def _fp_nullspace(matrix: IntMatrix, p: int):
    """Basis vectors of the mod-p kernel, as dense columns."""
    ncols = matrix.ncols
    rows = [
        [v % p for v in _dense_row(matrix, r)] for r in range(matrix.nrows)
    ]
    pivots: dict = {}
    for row in rows:
        red = _fp_reduce(row, pivots, p)
        if any(red):
            pivots[_lead(red)] = red
    basis = []
    pivot_cols = set(pivots)
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = [0] * ncols
        vec[free] = 1
        # back-substitute pivot columns
        for lead in sorted(pivot_cols, reverse=True):
            row = pivots[lead]
            s = sum(row[c] * vec[c] for c in range(lead + 1, ncols)) % p
            vec[lead] = (-s) * pow(row[lead], -1, p) % p
        basis.append(vec)
    return basis


def _dense_row(matrix: IntMatrix, r: int):
    out = [0] * matrix.ncols
    for c, v in matrix._rows.get(r, {}).items():
        out[c] = v
    return out


def _sphere_pair_ring_modp(panel_complex, pairs, p):
    space = panel_complex.space
    space_cells = cells_by_degree(space)
    ambient_index = {
        d: {c: i for i, c in enumerate(cs)} for d, cs in space_cells.items()
    }
    top = space.dim()
    zero_part = pairs.zero_part
    blocks = {}
    for J in subsets(panel_complex.m):
        chain = chain_complex(space, "relative", panel_complex.union(J))
        cells = {d: list(cs) for d, cs in chain.labels.items()}
        bases = {
            q: FpBasis(
                chain.boundary(q + 1).transpose(), chain.boundary(q).transpose(), p
            )
            for q in range(0, top + 1)
        }
        blocks[J] = (cells, bases)
    basis = []
    index_of = {}
    for J in subsets(panel_complex.m):
        cells, bases = blocks[J]
        for q in range(0, top + 1):
            for k, vec in enumerate(bases[q].classes):
                index_of[(J, q, k)] = len(basis)
                basis.append(
                    RingBasisElement(
                        subset=J,
                        q=q,
                        total_degree=q + pairs.sphere_shift(J),
                        order=p,
                        label=f"{format_subset(J)}:q{q}:{k}",
                    )
                )
    products = {}
    for i, a in enumerate(basis):
        cells_a, bases_a = blocks[a.subset]
        vec_a = bases_a[a.q].classes[_class_pos_modp(a)]
        full_a = {
            ambient_index[a.q][cells_a[a.q][idx]]: v
            for idx, v in enumerate(vec_a)
            if v
        }
        for j, b in enumerate(basis):
            if (a.subset & b.subset) - zero_part:
                continue
            q = a.q + b.q
            if q > top:
                continue
            target_J = a.subset | b.subset
            cells_t, bases_t = blocks[target_J]
            if not bases_t[q].classes:
                continue
            cells_b, bases_b = blocks[b.subset]
            vec_b = bases_b[b.q].classes[_class_pos_modp(b)]
            full_b = {
                ambient_index[b.q][cells_b[b.q][idx]]: v
                for idx, v in enumerate(vec_b)
                if v
            }
            cup = simplicial_cup(space, full_a, a.q, full_b, b.q, check=False)
            rel = _restrict(cup, space_cells.get(q, []), cells_t.get(q, []))
            coords = bases_t[q].coordinates(rel)
            sign = shuffle_sign(pairs, a.subset - zero_part, b.subset - zero_part)
            if (b.q * pairs.sphere_shift(a.subset)) % 2:
                sign = -sign
            terms = {}
            for k, c in enumerate(coords):
                c = (c * sign) % p
                if c:
                    terms[index_of[(target_J, q, k)]] = c
            if terms:
                products[(i, j)] = terms
    return RingModel(basis, products, coefficients=str(p))


def _class_pos_modp(element: RingBasisElement) -> int:
    return int(element.label.rsplit(":", 1)[1])
