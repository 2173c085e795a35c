"""Chain complexes, graded abelian groups, and exact (co)homology.

Chain complexes store one sparse integer boundary matrix per degree with
``boundary[n]`` mapping degree-``n`` chains to degree ``n - 1``.  Homology is
computed from Smith normal forms: the free rank in degree ``n`` is
``dim C_n - rank ∂_n - rank ∂_{n+1}`` and the torsion coefficients are the
nontrivial invariant factors of ``∂_{n+1}``.  Cohomology is the homology of
the transposed complex with mirrored degrees, which places torsion exactly
as the universal coefficient theorem prescribes.

Simplicial chain complexes come in three flavors: absolute, reduced
(augmented in degree -1, so the empty complex has reduced homology Z in
degree -1), and relative to a subcomplex (the cells of the subcomplex are
dropped; all pairs in this package are good pairs).

:class:`CohomologyBasis` fixes an explicit basis of one cohomology group
with cocycle representatives and coordinate maps, which is what cup-product
and induced-map computations consume.  The chosen representatives are not
canonical; every downstream report records them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .complexes import SimplicialComplex
from .snf import IntMatrix, SNFResult, smith_normal_form


class ChainComplexError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Graded groups
# ---------------------------------------------------------------------------


def _group_str(rank, torsion):
    parts = []
    if rank == 1:
        parts.append("Z")
    elif rank:
        parts.append(f"Z^{rank}")
    parts.extend(f"Z/{d}" for d in torsion)
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GradedGroup:
    """A finitely generated graded abelian group.

    ``groups`` maps a degree to ``(rank, torsion)`` where ``torsion`` is a
    tuple of integers ``>= 2`` forming a divisibility chain.  Degrees with
    trivial group are never stored, so equality is meaningful.
    """

    groups: tuple = ()  # tuple of (degree, rank, torsion-tuple)

    @classmethod
    def build(cls, mapping) -> "GradedGroup":
        items = []
        for degree, (rank, torsion) in sorted(mapping.items()):
            torsion = tuple(int(d) for d in torsion)
            if any(d < 2 for d in torsion):
                raise ValueError("torsion coefficients must be >= 2")
            for a, b in zip(torsion, torsion[1:]):
                if b % a:
                    raise ValueError("torsion must form a divisibility chain")
            if rank or torsion:
                items.append((degree, rank, torsion))
        return cls(groups=tuple(items))

    def as_dict(self) -> dict:
        return {deg: (rank, torsion) for deg, rank, torsion in self.groups}

    def rank(self, degree: int) -> int:
        return self.as_dict().get(degree, (0, ()))[0]

    def torsion(self, degree: int) -> tuple:
        return self.as_dict().get(degree, (0, ()))[1]

    def degrees(self) -> list:
        return [deg for deg, _, _ in self.groups]

    def is_trivial(self) -> bool:
        return not self.groups

    def shift(self, offset: int) -> "GradedGroup":
        return GradedGroup(
            groups=tuple((deg + offset, rank, tor) for deg, rank, tor in self.groups)
        )

    def __add__(self, other: "GradedGroup") -> "GradedGroup":
        """Degreewise direct sum; torsion chains are merged back into chains."""
        merged: dict = {}
        for deg, rank, tor in self.groups + other.groups:
            r0, t0 = merged.get(deg, (0, []))
            merged[deg] = (r0 + rank, t0 + list(tor))
        out = {}
        for deg, (rank, tor) in merged.items():
            out[deg] = (rank, _merge_torsion(tor))
        return GradedGroup.build(out)

    def betti_vector(self, lo=None, hi=None):
        degs = self.degrees()
        if lo is None:
            lo = min(degs, default=0)
        if hi is None:
            hi = max(degs, default=-1)
        return tuple(self.rank(d) for d in range(lo, hi + 1))

    def is_point(self) -> bool:
        return self.groups == ((0, 1, ()),)

    def __str__(self):
        if not self.groups:
            return "0"
        return ", ".join(
            f"H[{deg}]={_group_str(rank, tor)}" for deg, rank, tor in self.groups
        )

    def to_json(self):
        return [
            {"degree": deg, "rank": rank, "torsion": list(tor)}
            for deg, rank, tor in self.groups
        ]


def _merge_torsion(factors) -> tuple:
    """Rewrite a multiset of cyclic orders as a divisibility chain.

    Splits every order into prime powers and re-layers them: the classical
    invariant-factor normalization of a finite abelian group.
    """
    primes: dict = {}
    for n in factors:
        n = int(n)
        p = 2
        while p * p <= n:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                primes.setdefault(p, []).append(e)
            p += 1
        if n > 1:
            primes.setdefault(n, []).append(1)
    layers = max((len(v) for v in primes.values()), default=0)
    chain = []
    for i in range(layers):
        d = 1
        for p, exps in primes.items():
            exps = sorted(exps, reverse=True)
            if i < len(exps):
                d *= p ** exps[i]
        chain.append(d)
    return tuple(sorted(chain))


# ---------------------------------------------------------------------------
# Chain complexes
# ---------------------------------------------------------------------------


class ChainComplex:
    """Boundary matrices ``boundary[n]: C_n -> C_{n-1}`` with cell labels."""

    def __init__(self, dims: dict, boundaries: dict, labels: dict | None = None, flavor="absolute"):
        self.dims = {n: d for n, d in dims.items() if d}
        self.boundaries = {}
        self.labels = labels or {}
        self.flavor = flavor
        for n, mat in boundaries.items():
            if mat.ncols != self.dims.get(n, 0) or mat.nrows != self.dims.get(n - 1, 0):
                raise ChainComplexError(f"boundary shape mismatch in degree {n}")
            if not mat.is_zero():
                self.boundaries[n] = mat

    def boundary(self, n: int) -> IntMatrix:
        return self.boundaries.get(
            n, IntMatrix(self.dims.get(n - 1, 0), self.dims.get(n, 0))
        )

    def degrees(self):
        return sorted(self.dims)

    def check(self):
        """Verify ∂∂ = 0 exactly; raises on corrupted input."""
        for n in sorted(self.boundaries):
            if n - 1 in self.boundaries:
                if not (self.boundaries[n - 1] @ self.boundaries[n]).is_zero():
                    raise ChainComplexError(f"∂∂ != 0 between degrees {n} and {n - 2}")
        return self

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * d for n, d in self.dims.items())

    def dual(self) -> "ChainComplex":
        """Transposed complex with mirrored degrees.

        With ``top`` the maximal degree, degree ``n`` cochains become degree
        ``top - n`` chains, so ``H_k(dual) == H^(top - k)(self)``.
        """
        degs = self.degrees()
        if not degs:
            return ChainComplex({}, {})
        top = max(degs)
        dims = {top - n: d for n, d in self.dims.items()}
        boundaries = {}
        for n, mat in self.boundaries.items():
            # delta^(n-1): C^(n-1) -> C^n turns into boundary at dual degree
            boundaries[top - n + 1] = mat.transpose()
        return ChainComplex(dims, boundaries, flavor=self.flavor)

    # -- homology ---------------------------------------------------------

    def homology(self, coefficients="Z") -> GradedGroup:
        """Homology as a graded group; ``coefficients`` is ``"Z"`` or a prime.

        Over a prime p only Betti numbers are reported (vector spaces carry
        no torsion).
        """
        out = {}
        if coefficients == "Z":
            snfs = {n: smith_normal_form(mat) for n, mat in self.boundaries.items()}
            ranks = {n: s.rank for n, s in snfs.items()}
            for n in self.degrees():
                rank = self.dims[n] - ranks.get(n, 0) - ranks.get(n + 1, 0)
                torsion = snfs[n + 1].torsion() if n + 1 in snfs else ()
                out[n] = (rank, torsion)
        else:
            p = int(coefficients)
            ranks = {n: rank_mod_p(mat, p) for n, mat in self.boundaries.items()}
            for n in self.degrees():
                out[n] = (self.dims[n] - ranks.get(n, 0) - ranks.get(n + 1, 0), ())
        return GradedGroup.build(out)

    def cohomology(self, coefficients="Z") -> GradedGroup:
        degs = self.degrees()
        if not degs:
            return GradedGroup()
        top = max(degs)
        dual_h = self.dual().homology(coefficients)
        return GradedGroup.build(
            {top - deg: (rank, tor) for deg, (rank, tor) in dual_h.as_dict().items()}
        )


def homology_groups(complex_or_chain, coefficients="Z") -> GradedGroup:
    """Homology of a chain complex or of a simplicial complex directly."""
    if isinstance(complex_or_chain, SimplicialComplex):
        complex_or_chain = chain_complex(complex_or_chain)
    return complex_or_chain.homology(coefficients)


def cohomology_groups(complex_or_chain, coefficients="Z") -> GradedGroup:
    if isinstance(complex_or_chain, SimplicialComplex):
        complex_or_chain = chain_complex(complex_or_chain)
    return complex_or_chain.cohomology(coefficients)


def rank_mod_p(matrix: IntMatrix, p: int) -> int:
    """Rank over the field with p elements, by sparse Gaussian elimination."""
    rows = [dict((c, v % p) for c, v in row.items() if v % p) for row in matrix._rows.values()]
    rows = [r for r in rows if r]
    rank = 0
    pivots: dict = {}
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            if c not in pivots:
                inv = pow(row[c], -1, p)
                pivots[c] = {k: (v * inv) % p for k, v in row.items()}
                rank += 1
                break
            factor = row[c]
            for k, v in pivots[c].items():
                new = (row.get(k, 0) - factor * v) % p
                if new:
                    row[k] = new
                else:
                    row.pop(k, None)
    return rank


# ---------------------------------------------------------------------------
# Simplicial chain complexes
# ---------------------------------------------------------------------------


def cells_by_degree(complex: SimplicialComplex) -> dict:
    """Canonically ordered simplices per dimension (sorted vertex tuples)."""
    out: dict = {}
    for s in complex.simplices:
        if s:
            out.setdefault(len(s) - 1, []).append(tuple(sorted(s)))
    for d in out:
        out[d].sort()
    return out


def boundary_terms(simplex: tuple):
    """Signed codimension-one faces with ascending-vertex-order signs."""
    for i in range(len(simplex)):
        yield (-1) ** i, simplex[:i] + simplex[i + 1 :]


def chain_complex(
    complex: SimplicialComplex,
    flavor: str = "absolute",
    subcomplex: SimplicialComplex | None = None,
) -> ChainComplex:
    """Simplicial chains: absolute, ``reduced``, or ``relative`` to a pair.

    For the relative flavor the subcomplex's cells are removed from every
    degree, which computes the (co)homology of the pair.  The reduced flavor
    augments with one degree ``-1`` cell.
    """
    if flavor == "relative":
        if subcomplex is None:
            raise ChainComplexError("relative flavor needs a subcomplex")
        if not subcomplex.simplices <= complex.simplices:
            raise ChainComplexError("pair is not a subcomplex")
        dropped = subcomplex.simplices
    elif flavor in ("absolute", "reduced"):
        if subcomplex is not None:
            raise ChainComplexError(f"{flavor} flavor takes no subcomplex")
        dropped = frozenset()
    else:
        raise ChainComplexError(f"unknown flavor {flavor!r}")

    cells = {
        d: [s for s in degree_cells if frozenset(s) not in dropped]
        for d, degree_cells in cells_by_degree(complex).items()
    }
    cells = {d: cs for d, cs in cells.items() if cs}
    index = {d: {s: i for i, s in enumerate(cs)} for d, cs in cells.items()}
    dims = {d: len(cs) for d, cs in cells.items()}
    boundaries = {}
    for d, cs in cells.items():
        if d == 0:
            continue
        entries = []
        lower = index.get(d - 1, {})
        for j, s in enumerate(cs):
            for sign, face in boundary_terms(s):
                if face in lower:
                    entries.append((lower[face], j, sign))
        boundaries[d] = IntMatrix(dims.get(d - 1, 0), dims[d], entries)
    if flavor == "reduced":
        dims[-1] = 1
        if 0 in cells:
            boundaries[0] = IntMatrix(1, dims[0], ((0, j, 1) for j in range(dims[0])))
    labels = {d: tuple(cs) for d, cs in cells.items()}
    if flavor == "reduced":
        labels[-1] = ("*",)
    return ChainComplex(dims, boundaries, labels=labels, flavor=flavor)


def relative_cohomology(
    complex: SimplicialComplex, subcomplex: SimplicialComplex, coefficients="Z"
) -> GradedGroup:
    """H^*(Y, A) of a simplicial pair; equals H^*(Y) when A is empty."""
    return chain_complex(complex, "relative", subcomplex).cohomology(coefficients)


# ---------------------------------------------------------------------------
# Cohomology bases and induced maps
# ---------------------------------------------------------------------------


@dataclass
class CohomologyClass:
    order: int  # 0 for a free generator, d >= 2 for torsion of order d
    vector: dict  # representative cocycle, sparse over the degree-q cells

    @property
    def is_free(self) -> bool:
        return self.order == 0


class CohomologyBasis:
    """Explicit basis of ``H^q`` of a cochain complex at one degree.

    Built from the coboundaries into and out of degree q.  ``classes`` lists
    free generators first, then torsion generators with their orders;
    ``coordinates`` maps any cocycle to its integer coordinates (torsion
    coordinates reduced into ``[0, d)``).
    """

    def __init__(self, delta_out: IntMatrix, delta_in: IntMatrix):
        # delta_out: C^q -> C^(q+1); delta_in: C^(q-1) -> C^q
        self.ncells = delta_out.ncols
        if delta_in.nrows != self.ncells:
            raise ChainComplexError("cochain degree mismatch")
        kernel = _kernel_with_solver(delta_out)
        self._kernel = kernel
        k = kernel.basis.ncols
        # express the image inside the kernel lattice
        img_cols = []
        for j in range(delta_in.ncols):
            col = delta_in.column(j)
            y = kernel.solve(col)
            if y is None:
                raise ChainComplexError("coboundary is not a cocycle; ∂∂ != 0")
            img_cols.append(y)
        entries = []
        for j, col in enumerate(img_cols):
            entries.extend((r, j, v) for r, v in col.items())
        X = IntMatrix(k, len(img_cols), entries)
        snf = smith_normal_form(X, transforms=True)
        self._snf = snf
        free, torsion = [], []
        for i in range(k):
            order = snf.diagonal[i] if i < snf.rank else 0
            if order == 1:
                continue
            rep = kernel.basis.apply(snf.Uinv.column(i))
            cls = CohomologyClass(order=order, vector=rep)
            (free if order == 0 else torsion).append(cls)
        self.classes = free + torsion

    @property
    def rank(self) -> int:
        return sum(1 for c in self.classes if c.is_free)

    def torsion_orders(self) -> tuple:
        return tuple(c.order for c in self.classes if not c.is_free)

    def group(self) -> tuple:
        return (self.rank, _merge_torsion(self.torsion_orders()))

    def coordinates(self, cocycle: dict) -> tuple:
        """Coordinates of a cocycle's class in the order of ``classes``.

        Free coordinates are integers, torsion coordinates residues in
        ``[0, d)``.  Raises when the vector is not a cocycle.
        """
        y = self._kernel.solve(cocycle)
        if y is None:
            raise ChainComplexError("vector is not a cocycle")
        w = self._snf.U.apply(y)
        free, torsion = [], []
        for i in range(self._kernel.basis.ncols):
            order = self._snf.diagonal[i] if i < self._snf.rank else 0
            if order == 1:
                continue
            coord = w.get(i, 0)
            if order:
                torsion.append(coord % order)
            else:
                free.append(coord)
        return tuple(free + torsion)


@dataclass
class _KernelSolver:
    basis: IntMatrix
    snf: SNFResult

    def solve(self, vector: dict):
        """Integer coordinates of a kernel vector in the kernel basis."""
        from .snf import solve as _solve

        return _solve(self.basis, vector, self.snf) if vector else {}


def _kernel_with_solver(matrix: IntMatrix) -> _KernelSolver:
    from .snf import kernel_basis

    basis = kernel_basis(matrix)
    return _KernelSolver(basis=basis, snf=smith_normal_form(basis, transforms=True))


class CochainComplexBases:
    """Cohomology bases of a chain complex, one per requested degree."""

    def __init__(self, chain: ChainComplex):
        self.chain = chain
        self._bases: dict = {}

    def basis(self, q: int) -> CohomologyBasis:
        if q not in self._bases:
            delta_out = self.chain.boundary(q + 1).transpose()
            delta_in = self.chain.boundary(q).transpose()
            self._bases[q] = CohomologyBasis(delta_out, delta_in)
        return self._bases[q]

    def group(self) -> GradedGroup:
        return self.chain.cohomology()


def restrict_cochain(
    ambient_cells: list, target_cells: list, cochain: dict
) -> dict:
    """Pull a cochain back along an inclusion of cell lists."""
    index = {s: i for i, s in enumerate(ambient_cells)}
    out = {}
    for i, s in enumerate(target_cells):
        v = cochain.get(index[s], 0) if s in index else 0
        if v:
            out[i] = v
    return out


def induced_inclusion_map(
    ambient: SimplicialComplex,
    sub: SimplicialComplex,
    degree: int,
    ambient_bases: CochainComplexBases | None = None,
    sub_bases: CochainComplexBases | None = None,
):
    """Matrix of ``H^q(ambient) -> H^q(sub)`` induced by an inclusion.

    Columns are coordinates (in the subcomplex's basis) of the restrictions
    of the ambient basis classes, so the matrix composes contravariantly.
    """
    if not sub.simplices <= ambient.simplices:
        raise ChainComplexError("not a subcomplex")
    ambient_bases = ambient_bases or CochainComplexBases(chain_complex(ambient))
    sub_bases = sub_bases or CochainComplexBases(chain_complex(sub))
    amb_cells = ambient_bases.chain.labels.get(degree, ())
    sub_cells = sub_bases.chain.labels.get(degree, ())
    bas_a = ambient_bases.basis(degree)
    bas_s = sub_bases.basis(degree)
    columns = []
    for cls in bas_a.classes:
        restricted = restrict_cochain(list(amb_cells), list(sub_cells), cls.vector)
        columns.append(bas_s.coordinates(restricted))
    entries = []
    for j, col in enumerate(columns):
        entries.extend((i, j, v) for i, v in enumerate(col) if v)
    return IntMatrix(len(bas_s.classes), len(bas_a.classes), entries)
