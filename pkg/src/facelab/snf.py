"""Sparse exact integer matrices and Smith normal form.

Everything here is arbitrary-precision integer arithmetic; no floats.  The
Smith normal form drives all homology computations, so the implementation
has two paths:

* a fast elimination phase that pivots on ``±1`` entries only (boundary
  matrices are almost entirely reducible this way, and unit pivots create no
  coefficient growth), followed by
* a textbook reduction of the small leftover block, with
  smallest-absolute-value pivoting and a global divisibility fix so the
  diagonal comes out as a divisibility chain.

When ``transforms=True`` the full reduction additionally tracks unimodular
``U`` and ``V`` with ``U @ A @ V == D`` together with their inverses, which
is what basis-dependent consumers (cohomology bases, cup products) need.
All pivot choices are deterministic, so identical inputs give identical
output.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass


class IntMatrix:
    """Immutable sparse integer matrix stored as rows of ``{col: value}``."""

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows: int, ncols: int, entries=()):
        self.nrows = nrows
        self.ncols = ncols
        rows: dict = {}
        for r, c, v in entries:
            if not 0 <= r < nrows or not 0 <= c < ncols:
                raise IndexError(f"entry ({r}, {c}) outside {nrows}x{ncols}")
            if v:
                row = rows.setdefault(r, {})
                if c in row:
                    raise ValueError(f"duplicate entry at ({r}, {c})")
                row[c] = v
        self._rows = rows

    @classmethod
    def from_dense(cls, dense) -> "IntMatrix":
        dense = [list(row) for row in dense]
        nrows = len(dense)
        ncols = len(dense[0]) if dense else 0
        return cls(
            nrows,
            ncols,
            ((r, c, v) for r, row in enumerate(dense) for c, v in enumerate(row) if v),
        )

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, ((i, i, 1) for i in range(n)))

    def entry(self, r: int, c: int) -> int:
        return self._rows.get(r, {}).get(c, 0)

    def triplets(self):
        """Entries as a sorted list of (row, col, value)."""
        return sorted(
            (r, c, v) for r, row in self._rows.items() for c, v in row.items()
        )

    def nnz(self) -> int:
        return sum(len(row) for row in self._rows.values())

    def is_zero(self) -> bool:
        return not self._rows

    def to_dense(self):
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for r, row in self._rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.ncols, self.nrows, ((c, r, v) for r, c, v in self.triplets())
        )

    def column(self, c: int):
        return {r: row[c] for r, row in self._rows.items() if c in row}

    def apply(self, vector: dict) -> dict:
        """Matrix times a sparse column vector ``{index: value}``."""
        out: dict = {}
        for r, row in self._rows.items():
            s = sum(v * vector[c] for c, v in row.items() if c in vector)
            if s:
                out[r] = s
        return out

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        entries = []
        for r, row in self._rows.items():
            acc: dict = {}
            for k, v in row.items():
                for c, w in other._rows.get(k, {}).items():
                    acc[c] = acc.get(c, 0) + v * w
            entries.extend((r, c, v) for c, v in acc.items() if v)
        return IntMatrix(self.nrows, other.ncols, entries)

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and (self.nrows, self.ncols) == (other.nrows, other.ncols)
            and self.triplets() == other.triplets()
        )

    def __repr__(self):
        return f"IntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def to_json(self) -> dict:
        return {
            "shape": [self.nrows, self.ncols],
            "entries": [list(t) for t in self.triplets()],
        }

    @classmethod
    def from_json(cls, data) -> "IntMatrix":
        return cls(data["shape"][0], data["shape"][1], data["entries"])


@dataclass
class SNFResult:
    """Diagonal of the Smith normal form plus optional transforms.

    ``diagonal`` lists the positive invariant factors (ones included), so
    ``rank == len(diagonal)``.  When transforms were requested,
    ``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``Uinv``, ``Vinv``
    their exact inverses.
    """

    nrows: int
    ncols: int
    diagonal: list
    U: IntMatrix | None = None
    V: IntMatrix | None = None
    Uinv: IntMatrix | None = None
    Vinv: IntMatrix | None = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def torsion(self) -> tuple:
        return tuple(d for d in self.diagonal if d > 1)

    def d_matrix(self) -> IntMatrix:
        return IntMatrix(
            self.nrows, self.ncols, ((i, i, d) for i, d in enumerate(self.diagonal))
        )


class _Workspace:
    """Mutable elimination state: the matrix and (optionally) transforms.

    Row operations update U and Uinv, column operations V and Vinv, so the
    invariant ``U @ A_original @ V == current`` holds throughout.
    """

    def __init__(self, matrix: IntMatrix, track: bool):
        self.nrows = matrix.nrows
        self.ncols = matrix.ncols
        self.row = {r: dict(row) for r, row in matrix._rows.items()}
        self.col = {}
        for r, row in self.row.items():
            for c in row:
                self.col.setdefault(c, set()).add(r)
        self.track = track
        if track:
            self.U = {r: {r: 1} for r in range(self.nrows)}
            self.Uinv = {r: {r: 1} for r in range(self.nrows)}
            self.V = {c: {c: 1} for c in range(self.ncols)}
            self.Vinv = {c: {c: 1} for c in range(self.ncols)}

    # -- primitive updates ------------------------------------------------

    def get(self, r, c):
        return self.row.get(r, {}).get(c, 0)

    def _set(self, r, c, v):
        row = self.row.setdefault(r, {})
        if v:
            row[c] = v
            self.col.setdefault(c, set()).add(r)
        else:
            if c in row:
                del row[c]
                self.col[c].discard(r)
                if not self.col[c]:
                    del self.col[c]
            if not row:
                del self.row[r]

    @staticmethod
    def _addrow(dst: dict, src: dict, q: int):
        for k, v in src.items():
            new = dst.get(k, 0) + q * v
            if new:
                dst[k] = new
            else:
                dst.pop(k, None)

    def row_add(self, dst, src, q, queue=None):
        """row[dst] += q * row[src]"""
        for c, v in list(self.row.get(src, {}).items()):
            new = self.get(dst, c) + q * v
            self._set(dst, c, new)
            if queue is not None and new in (1, -1):
                queue.append((dst, c))
        if self.track:
            self._addrow(self.U[dst], self.U[src], q)
            for r in range(self.nrows):
                col = self.Uinv[r]
                if dst in col:
                    self._addrow_entry(col, src, -q * col[dst])

    def _addrow_entry(self, mapping, key, delta):
        new = mapping.get(key, 0) + delta
        if new:
            mapping[key] = new
        else:
            mapping.pop(key, None)

    def col_add(self, dst, src, q, queue=None):
        """col[dst] += q * col[src]"""
        for r in list(self.col.get(src, ())):
            new = self.get(r, dst) + q * self.row[r][src]
            self._set(r, dst, new)
            if queue is not None and new in (1, -1):
                queue.append((r, dst))
        if self.track:
            for c in range(self.ncols):
                row = self.V[c]
                if src in row:
                    self._addrow_entry(row, dst, q * row[src])
            self._addrow(self.Vinv[src], self.Vinv[dst], -q)

    def row_swap(self, a, b):
        if a == b:
            return
        for c in set(self.row.get(a, {})) | set(self.row.get(b, {})):
            self.col.setdefault(c, set())
        ra, rb = self.row.pop(a, {}), self.row.pop(b, {})
        if rb:
            self.row[a] = rb
        if ra:
            self.row[b] = ra
        for c in set(ra) | set(rb):
            members = self.col[c]
            ina, inb = c in ra, c in rb
            members.discard(a)
            members.discard(b)
            if inb:
                members.add(a)
            if ina:
                members.add(b)
            if not members:
                del self.col[c]
        if self.track:
            self.U[a], self.U[b] = self.U[b], self.U[a]
            for r in range(self.nrows):
                col = self.Uinv[r]
                va, vb = col.pop(a, None), col.pop(b, None)
                if vb is not None:
                    col[a] = vb
                if va is not None:
                    col[b] = va

    def col_swap(self, a, b):
        if a == b:
            return
        for r in set(self.col.get(a, ())) | set(self.col.get(b, ())):
            row = self.row[r]
            va, vb = row.pop(a, None), row.pop(b, None)
            if vb is not None:
                row[a] = vb
            if va is not None:
                row[b] = va
        ca, cb = self.col.pop(a, set()), self.col.pop(b, set())
        if cb:
            self.col[a] = cb
        if ca:
            self.col[b] = ca
        if self.track:
            for c in range(self.ncols):
                row = self.V[c]
                va, vb = row.pop(a, None), row.pop(b, None)
                if vb is not None:
                    row[a] = vb
                if va is not None:
                    row[b] = va
            self.Vinv[a], self.Vinv[b] = self.Vinv.get(b, {}), self.Vinv.get(a, {})

    def row_negate(self, r):
        for c in self.row.get(r, {}):
            self.row[r][c] = -self.row[r][c]
        if self.track:
            self.U[r] = {k: -v for k, v in self.U[r].items()}
            for i in range(self.nrows):
                col = self.Uinv[i]
                if r in col:
                    col[r] = -col[r]

    def col_negate(self, c):
        for r in list(self.col.get(c, ())):
            self.row[r][c] = -self.row[r][c]
        if self.track:
            for i in range(self.ncols):
                row = self.V[i]
                if c in row:
                    row[c] = -row[c]
            self.Vinv[c] = {k: -v for k, v in self.Vinv[c].items()}

    def matrix(self, mapping, nrows, ncols) -> IntMatrix:
        return IntMatrix(
            nrows,
            ncols,
            ((r, c, v) for r, row in mapping.items() for c, v in row.items() if v),
        )


def _eliminate_units(ws: _Workspace):
    """Pivot on ±1 entries; returns the number of unit pivots extracted.

    After a unit pivot at (r, c) the column is cleared by row operations and
    the pivot row is then simply deleted: clearing it by column operations
    would only touch the already-zeroed column.  Only valid without
    transform tracking.
    """
    queue = deque()
    for r in sorted(ws.row):
        for c in sorted(ws.row[r]):
            if ws.row[r][c] in (1, -1):
                queue.append((r, c))
    pivots = 0
    done_rows = set()
    done_cols = set()
    while queue:
        r, c = queue.popleft()
        if r in done_rows or c in done_cols:
            continue
        p = ws.get(r, c)
        if p not in (1, -1):
            continue
        for other in sorted(ws.col.get(c, set()) - {r}):
            q = ws.row[other][c] * p
            ws.row_add(other, r, -q, queue)
        for cc in list(ws.row.get(r, {})):
            ws._set(r, cc, 0)
        done_rows.add(r)
        done_cols.add(c)
        pivots += 1
    return pivots


def _sym_div(v: int, p: int) -> int:
    """Quotient with minimal remainder: ``|v - q*p| <= |p| / 2``.

    Keeps elimination quotients small, which is what bounds the coefficient
    growth of the tracked transforms.  Python's remainder carries the sign
    of ``p``, so an oversized remainder always shrinks by stepping ``q`` up.
    """
    q, r = divmod(v, p)
    if 2 * abs(r) > abs(p):
        q += 1
    return q


def _clear_pivot(ws: _Workspace, k: int):
    """Zero out row and column ``k`` around the pivot at ``(k, k)``.

    Uses minimal-remainder division; a nonzero remainder becomes the new
    (strictly smaller) pivot, so this is a Euclidean loop.
    """
    while True:
        p = ws.get(k, k)
        restart = False
        for r in sorted(ws.col.get(k, set()) - {k}):
            q = _sym_div(ws.row[r][k], p)
            if q:
                ws.row_add(r, k, -q)
            if ws.get(r, k):
                ws.row_swap(k, r)
                restart = True
                break
        if restart:
            continue
        for c in sorted(set(ws.row.get(k, {})) - {k}):
            q = _sym_div(ws.row[k][c], p)
            if q:
                ws.col_add(c, k, -q)
            if ws.get(k, c):
                ws.col_swap(k, c)
                restart = True
                break
        if not restart:
            return


def _row_echelon_pass(ws: _Workspace):
    """Reduced row echelon over the integers: one left-to-right pass.

    Each pivot column is reduced to a single gcd entry by Euclidean row
    operations (smallest entry kept as the divisor), and the entries above
    each pivot are reduced to minimal remainders.  Keeping everything
    reduced on every pass is what bounds the coefficient growth.
    """
    r = 0
    for c in range(ws.ncols):
        if r >= ws.nrows:
            break
        while True:
            entries = sorted(i for i in ws.col.get(c, ()) if i >= r)
            if not entries:
                break
            best = min(entries, key=lambda i: (abs(ws.row[i][c]), i))
            if best != r and ws.get(r, c) == 0:
                ws.row_swap(r, best)
                continue
            if abs(ws.get(best, c)) < abs(ws.get(r, c)):
                ws.row_swap(r, best)
            p = ws.row[r][c]
            others = [i for i in entries if i != r and i in ws.col.get(c, ())]
            if not others:
                break
            for i in others:
                q = _sym_div(ws.row[i][c], p)
                if q:
                    ws.row_add(i, r, -q)
        if ws.get(r, c):
            p = ws.row[r][c]
            for i in sorted(set(ws.col.get(c, ())) - {r}):
                q = _sym_div(ws.row[i][c], p)
                if q:
                    ws.row_add(i, r, -q)
            r += 1


def _col_echelon_pass(ws: _Workspace):
    """The column-operation mirror of :func:`_row_echelon_pass`."""
    c = 0
    for r in range(ws.nrows):
        if c >= ws.ncols:
            break
        while True:
            entries = sorted(j for j in ws.row.get(r, {}) if j >= c)
            if not entries:
                break
            best = min(entries, key=lambda j: (abs(ws.row[r][j]), j))
            if best != c and ws.get(r, c) == 0:
                ws.col_swap(c, best)
                continue
            if abs(ws.get(r, best)) < abs(ws.get(r, c)):
                ws.col_swap(c, best)
            p = ws.row[r][c]
            others = [j for j in entries if j != c and j in ws.row.get(r, {})]
            if not others:
                break
            for j in others:
                q = _sym_div(ws.row[r][j], p)
                if q:
                    ws.col_add(j, c, -q)
        if ws.get(r, c):
            p = ws.row[r][c]
            for j in sorted(set(ws.row.get(r, {})) - {c}):
                q = _sym_div(ws.row[r][j], p)
                if q:
                    ws.col_add(j, c, -q)
            c += 1


def _is_diagonal(ws: _Workspace) -> bool:
    return all(len(row) == 1 for row in ws.row.values()) and all(
        len(col) == 1 for col in ws.col.values()
    )


def _compact_diagonal(ws: _Workspace) -> int:
    """Permute the isolated entries onto the leading diagonal."""
    k = 0
    while True:
        candidates = [
            (r, next(iter(ws.row[r])))
            for r in sorted(ws.row)
            if r >= k and next(iter(ws.row[r])) >= k
        ]
        if not candidates:
            break
        r, c = min(candidates)
        ws.row_swap(k, r)
        ws.col_swap(k, c)
        k += 1
    return k


def _reduce_textbook(ws: _Workspace):
    """Smith reduction by alternating reduced echelon passes.

    Row and column passes alternate until the matrix is diagonal (each
    pass meanwhile refines the staircase gcds, so the alternation
    terminates); the diagonal is then compacted and repaired into a
    divisibility chain by pairwise gcd/lcm steps.
    """
    guard = 0
    while ws.row and not _is_diagonal(ws):
        _row_echelon_pass(ws)
        if _is_diagonal(ws):
            break
        _col_echelon_pass(ws)
        guard += 1
        if guard > 4 * (ws.nrows + ws.ncols + 1):
            raise ArithmeticError("Smith reduction failed to converge; bug")
    k = _compact_diagonal(ws)
    # pairwise divisibility repair: (d_i, d_j) -> (gcd, lcm)
    changed = True
    while changed:
        changed = False
        for i in range(k):
            for j in range(i + 1, k):
                di, dj = ws.get(i, i), ws.get(j, j)
                if dj % di:
                    ws.col_add(i, j, 1)
                    _clear_pivot(ws, i)
                    changed = True
    for i in range(k):
        if ws.get(i, i) < 0:
            ws.row_negate(i)
    return [ws.get(i, i) for i in range(k)]


def smith_normal_form(matrix: IntMatrix, transforms: bool = False) -> SNFResult:
    """Smith normal form ``U @ A @ V == D`` over the integers.

    The diagonal is returned as a list of positive integers forming a
    divisibility chain; empty matrices are legal.  Transforms are tracked
    only on request since the diagonal alone is much cheaper.
    """
    ws = _Workspace(matrix, track=transforms)
    if transforms:
        diagonal = _reduce_textbook(ws)
        return SNFResult(
            matrix.nrows,
            matrix.ncols,
            diagonal,
            U=ws.matrix(ws.U, matrix.nrows, matrix.nrows),
            V=ws.matrix(ws.V, matrix.ncols, matrix.ncols),
            Uinv=ws.matrix(ws.Uinv, matrix.nrows, matrix.nrows),
            Vinv=ws.matrix(ws.Vinv, matrix.ncols, matrix.ncols),
        )
    units = _eliminate_units(ws)
    rest = _reduce_textbook(_Workspace(_remaining(ws), track=False))
    return SNFResult(matrix.nrows, matrix.ncols, [1] * units + rest)


def _remaining(ws: _Workspace) -> IntMatrix:
    """Repack the still-active entries of a workspace into a fresh matrix."""
    rows = sorted(ws.row)
    cols = sorted(ws.col)
    rmap = {r: i for i, r in enumerate(rows)}
    cmap = {c: i for i, c in enumerate(cols)}
    return IntMatrix(
        len(rows),
        len(cols),
        (
            (rmap[r], cmap[c], v)
            for r in rows
            for c, v in ws.row[r].items()
        ),
    )


def rank(matrix: IntMatrix) -> int:
    return smith_normal_form(matrix).rank


def kernel_basis(matrix: IntMatrix) -> IntMatrix:
    """Lattice basis of the integer kernel, as matrix columns.

    Columns of ``V`` beyond the rank span the kernel saturated in the
    ambient lattice, so integer kernel vectors are exactly their integer
    combinations.
    """
    snf = smith_normal_form(matrix, transforms=True)
    cols = []
    for i in range(snf.rank, matrix.ncols):
        cols.append(snf.V.column(i))
    entries = []
    for j, col in enumerate(cols):
        entries.extend((r, j, v) for r, v in col.items())
    return IntMatrix(matrix.ncols, len(cols), entries)


def solve(matrix: IntMatrix, rhs: dict, snf: SNFResult | None = None):
    """One integer solution of ``A x = b`` or None; ``b`` sparse ``{row: v}``.

    When many systems share the same matrix, pass a precomputed transform-
    tracking SNF.
    """
    if snf is None:
        snf = smith_normal_form(matrix, transforms=True)
    ub = snf.U.apply(rhs)
    x: dict = {}
    for i, v in ub.items():
        if i >= snf.rank:
            return None
        d = snf.diagonal[i]
        if v % d:
            return None
        if v // d:
            x[i] = v // d
    return snf.V.apply(x)
