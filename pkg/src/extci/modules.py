"""Graded free modules, degree-preserving maps, presented modules,
kernels, minimal presentations and minimal graded free resolutions.

Twist convention: a free module with twist list (a_1, ..., a_m) is
F = sum_j R(-a_j), so generator j sits in degree a_j and
H(F, t) = (sum_j t^{a_j}) H(R, t).  Twists may be negative.
"""

from __future__ import annotations

from typing import Optional

from . import degreewise
from .groebner import syzygies
from .hilbert import HilbertSeries
from .laurent import ORDER_INFINITY, series_order
from .poly import Polynomial

MINUS_INFINITY = float("-inf")


def _nf_column(col: dict, ring) -> dict:
    out = {}
    for row, poly in col.items():
        p = ring.nf(poly)
        if p:
            out[row] = p
    return out


def _column_degree(col: dict, twists) -> Optional[int]:
    """Common degree of a homogeneous column; None for the zero column."""
    degs = set()
    for row, poly in col.items():
        d = poly.is_homogeneous()
        if d is None:
            raise ValueError(f"matrix entry {poly!r} is not homogeneous")
        if poly:
            degs.add(d + twists[row])
    if not degs:
        return None
    if len(degs) > 1:
        raise ValueError("matrix column is not homogeneous for the twists")
    return degs.pop()


class GradedFreeModule:
    """A free module with a twist list."""

    def __init__(self, ring, twists):
        self.ring = ring
        self.twists = tuple(int(a) for a in twists)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def presented(self) -> "PresentedModule":
        return PresentedModule(self.ring, self.twists, [])

    def hilbert_series(self) -> HilbertSeries:
        return self.presented().hilbert_series()

    def __repr__(self) -> str:
        return f"Free({self.twists})"


class GradedMap:
    """A degree-preserving map between graded free modules.

    Stored as columns {row: Polynomial}; entry (r, c) must be homogeneous
    of degree source_twists[c] - target_twists[r].
    """

    def __init__(self, ring, source_twists, target_twists, columns, validate=True):
        self.ring = ring
        self.source_twists = tuple(source_twists)
        self.target_twists = tuple(target_twists)
        self.columns = [_nf_column(col, ring) for col in columns]
        if len(self.columns) != len(self.source_twists):
            raise ValueError("one column per source generator required")
        if validate:
            for c, col in enumerate(self.columns):
                for r, entry in col.items():
                    d = entry.is_homogeneous()
                    if d is None:
                        raise ValueError(
                            f"entry ({r},{c}) = {entry!r} is not homogeneous"
                        )
                    want = self.source_twists[c] - self.target_twists[r]
                    if entry and d != want:
                        raise ValueError(
                            f"entry ({r},{c}) has degree {d}, expected {want}"
                        )

    def is_zero(self) -> bool:
        return all(not col for col in self.columns)

    def entry(self, r: int, c: int) -> Polynomial:
        return self.columns[c].get(r, self.ring.zero)

    def apply(self, column: dict) -> dict:
        """Image of a source-ambient vector, as a target-ambient vector."""
        out: dict = {}
        for c, coeff in column.items():
            for r, entry in self.columns[c].items():
                p = out.get(r)
                term = entry * coeff
                out[r] = p + term if p is not None else term
        return _nf_column(out, self.ring)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other (matrix product self * other)."""
        if other.target_twists != self.source_twists:
            raise ValueError("composition shape mismatch")
        cols = [self.apply(col) for col in other.columns]
        return GradedMap(
            self.ring, other.source_twists, self.target_twists, cols, validate=False
        )

    def min_entry_degree(self) -> Optional[int]:
        degs = [
            p.is_homogeneous()
            for col in self.columns
            for p in col.values()
            if p
        ]
        return min(degs) if degs else None

    def twist(self, a: int) -> "GradedMap":
        return GradedMap(
            self.ring,
            tuple(t - a for t in self.source_twists),
            tuple(t - a for t in self.target_twists),
            self.columns,
            validate=False,
        )

    def __repr__(self) -> str:
        return f"GradedMap({self.source_twists} -> {self.target_twists})"


class PresentedModule:
    """coker(relations) inside a graded free module over the ring.

    ``canonical=True`` skips re-reducing entries to normal form (for columns
    that already come out of engine computations in canonical form).
    """

    def __init__(self, ring, gens_twists, relations, name: Optional[str] = None,
                 canonical: bool = False):
        self.ring = ring
        self.gens_twists = tuple(int(a) for a in gens_twists)
        rels = []
        degs = []
        for col in relations:
            if canonical:
                col = {r: p for r, p in col.items() if p}
            else:
                col = _nf_column(col, ring)
            d = _column_degree(col, self.gens_twists)
            if d is None:
                continue
            rels.append(col)
            degs.append(d)
        self.relations = rels
        self.rel_degrees = degs
        self.name = name
        self._hilbert: Optional[HilbertSeries] = None
        self._annihilator = None
        self._minimal = None
        self._resolution = None

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def free(ring, twists, name=None) -> "PresentedModule":
        return PresentedModule(ring, twists, [], name=name)

    @staticmethod
    def zero(ring) -> "PresentedModule":
        return PresentedModule(ring, (), [], name="0")

    @staticmethod
    def cyclic(ring, ideal_gens, name=None) -> "PresentedModule":
        """R/(ideal) with its generator in degree 0."""
        cols = [{0: g} for g in ideal_gens]
        return PresentedModule(ring, (0,), cols, name=name)

    @staticmethod
    def residue_field(ring, name="k") -> "PresentedModule":
        return PresentedModule.cyclic(ring, ring.variables(), name=name)

    @property
    def rank(self) -> int:
        return len(self.gens_twists)

    # -- series and numerical invariants -------------------------------------------

    def q_presentation(self) -> "PresentedModule":
        """The same module presented over the base polynomial ring."""
        if not self.ring.is_quotient:
            return self
        cols = [dict(c) for c in self.relations]
        for g in self.ring.generators:
            for j in range(self.rank):
                cols.append({j: g})
        return PresentedModule(self.ring.base, self.gens_twists, cols, canonical=True)

    def hilbert_series(self) -> HilbertSeries:
        if self._hilbert is None:
            self._hilbert = hilbert_series(self)
        return self._hilbert

    def dimension(self):
        """Krull dimension via the Laurent order; -infinity for 0."""
        o = series_order(self.hilbert_series())
        if o == ORDER_INFINITY:
            return MINUS_INFINITY
        return -o

    def finite_length(self) -> bool:
        return self.hilbert_series().as_laurent_polynomial() is not None

    def length(self) -> Optional[int]:
        """Total vector-space dimension when finite, else None."""
        return self.hilbert_series().value_at_one()

    def is_zero(self) -> bool:
        return self.hilbert_series().is_zero()

    def dim_at(self, d: int) -> int:
        """Degreewise dimension by standard-monomial linear algebra."""
        return degreewise.module_dim_at(self.ring, self.gens_twists, self.relations, d)

    def piece(self, d: int) -> degreewise.PresentedPiece:
        return degreewise.PresentedPiece(self.ring, self.gens_twists, self.relations, d)

    # -- constructions ---------------------------------------------------------------

    def twist(self, a: int) -> "PresentedModule":
        """M(a), with M(a)_i = M_{a+i}; multiplies the series by t^{-a}."""
        if a == 0:
            return self
        out = PresentedModule(
            self.ring,
            tuple(t - a for t in self.gens_twists),
            self.relations,
            name=f"{self.name}({a})" if self.name else None,
            canonical=True,
        )
        if self._hilbert is not None:
            out._hilbert = self._hilbert.shift(-a)
        return out

    def direct_sum(self, other: "PresentedModule") -> "PresentedModule":
        if self.ring != other.ring:
            raise ValueError("ring mismatch")
        offset = self.rank
        cols = [dict(c) for c in self.relations]
        for col in other.relations:
            cols.append({offset + r: p for r, p in col.items()})
        return PresentedModule(
            self.ring, self.gens_twists + other.gens_twists, cols, canonical=True
        )

    def annihilator(self) -> list:
        if self._annihilator is None:
            self._annihilator = annihilator(self)
        return self._annihilator

    def minimal_presentation(self) -> "PresentedModule":
        if self._minimal is None:
            self._minimal = minimal_presentation(self)
        return self._minimal

    def resolution(self) -> "Resolution":
        if self._resolution is None:
            self._resolution = Resolution(self)
        return self._resolution

    def __repr__(self) -> str:
        label = self.name or "module"
        return f"<{label}: twists {self.gens_twists}, {len(self.relations)} relations>"


class ModuleMap:
    """Degree-preserving map between presented modules, given on ambients."""

    def __init__(self, source: PresentedModule, target: PresentedModule, columns):
        if source.ring != target.ring:
            raise ValueError("ring mismatch")
        self.source = source
        self.target = target
        self.ambient = GradedMap(
            source.ring, source.gens_twists, target.gens_twists, columns
        )

    @property
    def columns(self):
        return self.ambient.columns

    def is_well_defined(self) -> bool:
        """Image of every source relation lies in the target relations' span."""
        from .groebner import buchberger

        if not self.source.relations:
            return True
        if not self.target.relations:
            gb = None
        else:
            gb = buchberger(
                self.target.relations, ring=self.target.ring,
                twists=self.target.gens_twists,
            )
        for col in self.source.relations:
            img = self.ambient.apply(col)
            if gb is None:
                if img:
                    return False
            elif not gb.contains_vec(
                _flatten(img, self.target.ring)
            ):
                return False
        return True


def _flatten(col: dict, ring) -> dict:
    from .groebner import vec_from_columns

    return vec_from_columns(col, ring)


# ---------------------------------------------------------------------------
# kernels

def kernel_preimage(phi: ModuleMap) -> list:
    """Generators of {u in source ambient : phi(u) in target relation span}."""
    combined = list(phi.columns) + list(phi.target.relations)
    syz = syzygies(combined, phi.source.ring, phi.target.gens_twists)
    m = len(phi.columns)
    out = []
    for col in syz:
        u = {r: p for r, p in col.items() if r < m}
        if u:
            out.append(u)
    return out


def kernel(phi: ModuleMap) -> PresentedModule:
    """ker(phi) as a presented module; .inclusion maps it into the source."""
    ring = phi.source.ring
    u_gens = kernel_preimage(phi)
    u_gens = degreewise.minimal_generators(
        u_gens + [dict(c) for c in phi.source.relations], ring,
        phi.source.gens_twists,
    )
    if not u_gens:
        ker = PresentedModule(ring, (), [])
        ker.inclusion = []
        return ker
    # generators already dying in the source present zero elements of the
    # kernel; they are harmless and disappear under minimal_presentation.
    combined = list(u_gens) + list(phi.source.relations)
    rel = syzygies(combined, ring, phi.source.gens_twists)
    gens_twists = []
    for c in u_gens:
        d = _column_degree(c, phi.source.gens_twists)
        gens_twists.append(0 if d is None else d)
    cols = []
    for col in rel:
        v = {r: p for r, p in col.items() if r < len(u_gens)}
        if v:
            cols.append(v)
    ker = PresentedModule(ring, gens_twists, cols, canonical=True)
    ker.inclusion = u_gens
    return ker


def kernel_series(phi: ModuleMap) -> HilbertSeries:
    """H(ker phi) without presenting the kernel.

    H(ker) = H(source) - H(ambient / preimage), needing one syzygy run.
    """
    u_gens = kernel_preimage(phi)
    coker_u = PresentedModule(
        phi.source.ring, phi.source.gens_twists, u_gens, canonical=True
    )
    return phi.source.hilbert_series() - coker_u.hilbert_series()


# ---------------------------------------------------------------------------
# minimal presentations

def minimal_presentation(module: PresentedModule) -> PresentedModule:
    """Prune unit entries and redundant relations; the result is isomorphic.

    Afterwards every relation entry lies in the irrelevant maximal ideal and
    the relation columns are a minimal generating set of the relation module.
    """
    ring = module.ring
    twists = list(module.gens_twists)
    cols = [dict(c) for c in module.relations]

    while True:
        pivot = None
        for c, col in enumerate(cols):
            for r, entry in col.items():
                if entry.is_unit_scalar():
                    pivot = (r, c, entry)
                    break
            if pivot:
                break
        if pivot is None:
            break
        r, c, u = pivot
        pivot_col = cols.pop(c)
        unit = u.terms[ring.base._zero_mon]
        new_cols = []
        for col in cols:
            e = col.get(r)
            if e is not None and e:
                factor = e.scale(ring.field.one / unit)
                # col := col - (e/u) * pivot_col
                updated = dict(col)
                for rr, pp in pivot_col.items():
                    prev = updated.get(rr, ring.zero)
                    updated[rr] = prev - ring.nf(factor * pp)
                col = updated
            col.pop(r, None)
            col = {
                (rr if rr < r else rr - 1): ring.nf(pp)
                for rr, pp in col.items()
                if ring.nf(pp)
            }
            new_cols.append(col)
        cols = new_cols
        twists.pop(r)

    cols = [c for c in cols if c]
    cols = degreewise.minimal_generators(cols, ring, tuple(twists))
    out = PresentedModule(ring, twists, cols, name=module.name)
    return out


# ---------------------------------------------------------------------------
# resolutions

class Resolution:
    """Minimal graded free resolution, built stepwise and extendable."""

    def __init__(self, module: PresentedModule):
        self.module = module
        self.ring = module.ring
        mp = module.minimal_presentation()
        self.f_twists = [mp.gens_twists]
        self.maps: list = []
        self.complete = mp.rank == 0 or not mp.relations
        if mp.relations:
            degs = [_column_degree(c, mp.gens_twists) for c in mp.relations]
            self.maps.append(
                GradedMap(self.ring, degs, mp.gens_twists, mp.relations)
            )
            self.f_twists.append(tuple(degs))

    @property
    def length(self) -> int:
        return len(self.maps)

    def twists(self, i: int) -> tuple:
        """Twist list of F_i (empty when the resolution has ended)."""
        if i < len(self.f_twists):
            return self.f_twists[i]
        return ()

    def rank(self, i: int) -> int:
        return len(self.twists(i))

    def differential(self, i: int) -> GradedMap:
        """The map F_i -> F_{i-1} (zero map once the resolution ended)."""
        if 1 <= i <= len(self.maps):
            return self.maps[i - 1]
        return GradedMap(self.ring, self.twists(i), self.twists(i - 1), [{}] * self.rank(i))

    def extend(self, steps: int) -> "Resolution":
        """Ensure differentials through homological degree ``steps``."""
        while not self.complete and len(self.maps) < steps:
            last = self.maps[-1]
            syz = syzygies(last.columns, self.ring, last.target_twists)
            syz = degreewise.minimal_generators(syz, self.ring, last.source_twists)
            if not syz:
                self.complete = True
                break
            degs = [_column_degree(c, last.source_twists) for c in syz]
            nxt = GradedMap(self.ring, degs, last.source_twists, syz)
            if nxt.min_entry_degree() is not None and nxt.min_entry_degree() < 1:
                raise AssertionError("resolution step is not minimal")
            self.maps.append(nxt)
            self.f_twists.append(tuple(degs))
        return self

    def betti_number(self, i: int) -> int:
        return self.rank(i)

    def syzygy_module(self, i: int) -> PresentedModule:
        """Omega^i = coker(differential i+1); requires the resolution there."""
        if i == 0:
            return self.module.minimal_presentation()
        if i > len(self.maps) and not self.complete:
            raise ValueError("resolution too short; extend it first")
        rels = self.maps[i].columns if i < len(self.maps) else []
        return PresentedModule(
            self.ring,
            self.twists(i),
            rels,
            name=f"syz^{i}({self.module.name})" if self.module.name else None,
            canonical=True,
        )


def minimal_free_resolution(module: PresentedModule, steps: int) -> Resolution:
    return module.resolution().extend(steps)


def syzygy(module: PresentedModule, i: int) -> PresentedModule:
    """The i-th syzygy module of the minimal resolution."""
    res = module.resolution().extend(i + 1)
    return res.syzygy_module(i)


# ---------------------------------------------------------------------------
# Hilbert series via the finite resolution over the base polynomial ring

def hilbert_series(module: PresentedModule) -> HilbertSeries:
    """Alternating twist sums of the finite base-ring resolution, over the
    denominator prod_l (1 - t^{deg x_l})."""
    qp = module.q_presentation()
    base = qp.ring
    res = Resolution(qp).extend(base.nvars + 1)
    if not res.complete:
        raise AssertionError("resolution over the polynomial ring did not end")
    num = HilbertSeries.zero()
    sign = 1
    for i in range(res.length + 1):
        step = HilbertSeries.zero()
        for a in res.twists(i):
            step = step + HilbertSeries.monomial(a)
        num = num + (step if sign > 0 else -step)
        sign = -sign
    return num * HilbertSeries.one_over(base.degrees)


def free_module_presentation(ring, twists) -> PresentedModule:
    return PresentedModule.free(ring, twists)


def dimension(module: PresentedModule):
    return module.dimension()


def dimension_oracle(module: PresentedModule, d: int, bound: int = 64) -> int:
    """Degreewise dimension by standard-monomial enumeration (no resolutions)."""
    if d > bound:
        raise ValueError(f"degree {d} exceeds the oracle bound {bound}")
    return module.dim_at(d)


# ---------------------------------------------------------------------------
# annihilators

def annihilator(module: PresentedModule) -> list:
    """Generators of {r in R : r * module = 0}."""
    ring = module.ring
    if module.rank == 0:
        return [ring.one]
    target = module.twist(module.gens_twists[0])
    for j in range(1, module.rank):
        target = target.direct_sum(module.twist(module.gens_twists[j]))
    col = {j * module.rank + j: ring.one for j in range(module.rank)}
    source = PresentedModule.free(ring, (0,))
    phi = ModuleMap(source, target, [col])
    gens = kernel_preimage(phi)
    polys = [c[0] for c in gens if 0 in c]
    cols = [{0: p} for p in polys]
    cols = degreewise.minimal_generators(cols, ring, (0,))
    return [c[0] for c in cols]


def quotient_by_ideal(ring, ideal_gens, name=None) -> PresentedModule:
    return PresentedModule.cyclic(ring, ideal_gens, name=name)
