"""Degreewise exact linear algebra over the coefficient field.

Every graded object here is finite dimensional in each internal degree:
free modules have standard-monomial bases, presented modules are quotients
by the degree-d span of their relation columns, and maps become matrices
over the field.  This layer is the independent oracle for Hilbert series,
kernels, cohomology ranks and minimal generator selection; it never looks
at resolutions.

Degree-d vectors are sparse dicts keyed by (component, monomial); spans are
kept as mutually reduced pivot rows so that membership tests only touch the
rows whose pivots actually occur.
"""

from __future__ import annotations

from typing import Optional


# ---------------------------------------------------------------------------
# monomial enumeration

def monomials_of_degree(ring, d: int) -> list:
    """All exponent tuples of weighted degree d over the base ring."""
    base = ring.base
    degrees = base.degrees
    n = base.nvars
    out = []

    def rec(i, remaining, acc):
        if i == n - 1:
            q, r = divmod(remaining, degrees[i])
            if r == 0:
                out.append(tuple(acc + [q]))
            return
        step = degrees[i]
        for e in range(remaining // step + 1):
            rec(i + 1, remaining - e * step, acc + [e])

    if d < 0:
        return []
    rec(0, d, [])
    return out


def standard_monomials(ring, d: int) -> list:
    """Monomials of degree d outside the leading-term ideal of the ring."""
    mons = monomials_of_degree(ring, d)
    if not ring.is_quotient:
        return mons
    return [m for m in mons if ring.is_standard_monomial(m)]


def free_basis(ring, twists, d: int) -> list:
    """Basis [(component, monomial)] of degree d of the free module."""
    out = []
    for comp, a in enumerate(twists):
        for m in standard_monomials(ring, d - a):
            out.append((comp, m))
    return out


def column_flat(column: dict, mon: tuple, ring) -> dict:
    """Sparse coordinates of NF(x^mon * column), keyed by (row, monomial)."""
    out = {}
    for row, poly in column.items():
        shifted = ring.nf(poly.mul_monomial(mon, 1))
        for m, c in shifted.terms.items():
            key = (row, m)
            prev = out.get(key)
            if prev is None:
                out[key] = c
            else:
                prev = prev + c
                if prev:
                    out[key] = prev
                else:
                    del out[key]
    return out


# ---------------------------------------------------------------------------
# sparse subspaces (rows mutually reduced, pivot-normalized)

class SparseSubspace:
    """Row space of sparse vectors with incremental membership tests."""

    __slots__ = ("field", "rows")

    def __init__(self, field):
        self.field = field
        self.rows: dict = {}  # pivot key -> sparse row with row[pivot] == 1

    def reduce(self, vec: dict) -> dict:
        v = dict(vec)
        # rows carry no other row's pivot, so one pass over the initial
        # pivots present suffices
        for p in [k for k in v if k in self.rows]:
            c = v.get(p)
            if not c:
                continue
            for k, rc in self.rows[p].items():
                delta = c * rc
                cur = v.get(k)
                if cur is None:
                    v[k] = -delta
                else:
                    cur = cur - delta
                    if cur:
                        v[k] = cur
                    else:
                        del v[k]
        return v

    def add(self, vec: dict) -> bool:
        """Insert if independent; True when the rank grew."""
        v = self.reduce(vec)
        if not v:
            return False
        p = max(v)
        inv = self.field.one / v[p]
        row = {k: c * inv for k, c in v.items()}
        for r in self.rows.values():
            f = r.get(p)
            if f:
                for k, c in row.items():
                    cur = r.get(k)
                    if cur is None:
                        r[k] = -f * c
                    else:
                        cur = cur - f * c
                        if cur:
                            r[k] = cur
                        else:
                            del r[k]
        self.rows[p] = row
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    @property
    def rank(self) -> int:
        return len(self.rows)


# ---------------------------------------------------------------------------
# dense exact linear algebra (for small cohomology pieces)

def rref(rows: list, field) -> tuple:
    """Reduced row echelon form in place; returns (rows, pivot columns)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def matrix_rank(rows: list, field) -> int:
    reduced, pivots = rref([list(r) for r in rows], field)
    return len(pivots)


class Subspace:
    """Dense row space with an incremental membership / reduction test."""

    def __init__(self, field, dim: int):
        self.field = field
        self.dim = dim
        self.rows: list = []
        self.pivots: list = []

    def reduce(self, vec: list) -> list:
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def add(self, vec: list) -> bool:
        v = self.reduce(vec)
        p = next((i for i, x in enumerate(v) if x), None)
        if p is None:
            return False
        inv = self.field.one / v[p]
        v = [x * inv for x in v]
        for i, row in enumerate(self.rows):
            if row[p]:
                f = row[p]
                self.rows[i] = [a - f * b for a, b in zip(row, v)]
        self.rows.append(v)
        self.pivots.append(p)
        return True

    def contains(self, vec: list) -> bool:
        return not any(self.reduce(vec))

    @property
    def rank(self) -> int:
        return len(self.rows)


def linear_solve(columns: list, target: list, field):
    """Some x with sum x_j columns_j = target, or None if inconsistent."""
    ncols = len(columns)
    nrows = len(target)
    rows = [
        [columns[j][i] for j in range(ncols)] + [target[i]] for i in range(nrows)
    ]
    reduced, pivots = rref(rows, field)
    x = [field.zero] * ncols
    for row, p in zip(reduced, pivots):
        if p == ncols:
            return None
        x[p] = row[-1]
    return x


def nullspace(columns: list, nrows: int, field) -> list:
    """Basis of {x : A x = 0} for A given by columns (dense lists)."""
    ncols = len(columns)
    if ncols == 0:
        return []
    rows = [[columns[j][i] for j in range(ncols)] for i in range(nrows)]
    reduced, pivots = rref(rows, field)
    free_cols = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free_cols:
        v = [field.zero] * ncols
        v[fc] = field.one
        for row, p in zip(reduced, pivots):
            v[p] = -row[fc]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# graded pieces of modules and maps

def _column_degree(col: dict, ring, twists) -> int:
    for row, poly in col.items():
        if poly:
            return poly.degree() + twists[row]
    return 0


def submodule_span(columns: list, ring, twists, d: int) -> SparseSubspace:
    """Degree-d span of the submodule generated by the columns."""
    space = SparseSubspace(ring.field)
    for col in columns:
        if not col:
            continue
        deg = _column_degree(col, ring, twists)
        for mon in standard_monomials(ring, d - deg):
            space.add(column_flat(col, mon, ring))
    return space


def module_dim_at(ring, twists, relations, d: int) -> int:
    """dim_k of degree d of coker(relations) inside the free module."""
    basis = free_basis(ring, twists, d)
    if not basis:
        return 0
    space = submodule_span(relations, ring, twists, d)
    return len(basis) - space.rank


def minimal_generators(columns: list, ring, twists) -> list:
    """Cull a homogeneous generating set of a submodule to a minimal one.

    Degree by degree, a generator is kept exactly when it is independent of
    the span of multiples of lower-degree generators and of the already-kept
    same-degree generators (graded Nakayama).
    """
    cols = [c for c in columns if any(p for p in c.values())]
    if not cols:
        return []
    degs = [_column_degree(c, ring, twists) for c in cols]
    kept = []
    kept_degs = []
    for d in sorted(set(degs)):
        space = SparseSubspace(ring.field)
        for col, cd in zip(kept, kept_degs):
            for mon in standard_monomials(ring, d - cd):
                space.add(column_flat(col, mon, ring))
        for col, cd in zip(cols, degs):
            if cd != d:
                continue
            if space.add(column_flat(col, ring.base._zero_mon, ring)):
                kept.append(col)
                kept_degs.append(d)
    return kept


class PresentedPiece:
    """Degree-d piece of a presented module, with coset coordinates."""

    def __init__(self, ring, twists, relations, d: int):
        self.ring = ring
        self.d = d
        self.field = ring.field
        self.free_keys = free_basis(ring, twists, d)
        self.rel_space = submodule_span(relations, ring, twists, d)
        taken = self.rel_space.rows
        self.coset_keys = [k for k in self.free_keys if k not in taken]
        self._pos = {k: i for i, k in enumerate(self.coset_keys)}

    @property
    def dim(self) -> int:
        return len(self.coset_keys)

    def coords_flat(self, flat: dict) -> list:
        """Dense coset coordinates of a sparse free-module vector."""
        reduced = self.rel_space.reduce(flat)
        out = [self.field.zero] * len(self.coset_keys)
        for k, c in reduced.items():
            out[self._pos[k]] = c
        return out


def map_matrix(piece_src: PresentedPiece, piece_dst: PresentedPiece, columns: dict):
    """Columns (in coset coords of the target) of a map on graded pieces.

    ``columns`` maps source components to {target row: Polynomial}; the
    coset basis of the source consists of single free-basis keys, so each
    image is one column application.
    """
    ring = piece_src.ring
    out = []
    for comp, mon in piece_src.coset_keys:
        col = columns.get(comp)
        if not col:
            out.append([piece_dst.field.zero] * piece_dst.dim)
            continue
        img = column_flat(col, mon, ring)
        out.append(piece_dst.coords_flat(img))
    return out
