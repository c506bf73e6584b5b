"""Buchberger engine for homogeneous ideals and submodules of graded free modules.

Elements of a free module are flattened to dicts mapping (component,
exponent-tuple) -> coefficient, so ideals are the rank-1 case of one engine.
The module order is position-over-term (lower component wins), with twists
folded into the degree function.

Syzygies are computed Schreyer-style: each input vector is augmented with a
tracking unit vector in shadow components that the pair selection never
touches.  Every S-pair whose ambient part reduces to zero leaves behind its
tracking part, and those tracking parts generate the syzygy module of the
inputs.  Inputs are never modified or discarded during the run, which keeps
the tracking rows honest.
"""

from __future__ import annotations

import heapq
from typing import Optional

from .poly import PolyRing, Polynomial, mon_div, mon_divides, mon_lcm, mon_mul


class InhomogeneousInput(ValueError):
    pass


# ---------------------------------------------------------------------------
# flat vectors: dict[(comp, mon)] -> coeff

def vec_from_columns(column: dict, ring) -> dict:
    """Flatten {row: Polynomial} to {(row, mon): coeff}."""
    out = {}
    for row, poly in column.items():
        if poly is None:
            continue
        for mon, coeff in poly.terms.items():
            out[(row, mon)] = coeff
    return out


def vec_to_column(vec: dict, ring) -> dict:
    """Unflatten to {row: Polynomial}, dropping zero rows."""
    rows: dict = {}
    for (comp, mon), coeff in vec.items():
        rows.setdefault(comp, {})[mon] = coeff
    return {r: Polynomial(ring.base, terms) for r, terms in rows.items()}


def vec_degree(vec: dict, ring, twists) -> Optional[int]:
    """Common weighted degree of a homogeneous vector; None if mixed.

    The zero vector counts as homogeneous of degree 0.
    """
    if not vec:
        return 0
    degs = {ring.wdeg(mon) + twists[comp] for comp, mon in vec}
    if len(degs) == 1:
        return degs.pop()
    return None


def _term_key(ring):
    ring_key = ring.order_key

    def key(term):
        comp, mon = term
        return (-comp, ring_key(mon))

    return key


def _leading(vec: dict, key):
    t = max(vec, key=key)
    return t, vec[t]


def _sub_multiple(work: dict, factor, shift: tuple, g: dict):
    """work -= factor * x^shift * g, in place."""
    for (comp, mon), coeff in g.items():
        t = (comp, mon_mul(mon, shift))
        delta = factor * coeff
        v = work.get(t)
        if v is None:
            work[t] = -delta
        else:
            v = v - delta
            if v:
                work[t] = v
            else:
                del work[t]


class _Basis:
    """Basis elements indexed by leading component for fast divisor lookup."""

    def __init__(self, key):
        self.key = key
        self.elements: list = []          # flat dicts
        self.leads: list = []             # ((comp, mon), coeff)
        self.by_comp: dict = {}           # comp -> list of indices

    def add(self, vec: dict) -> int:
        lt, lc = _leading(vec, self.key)
        idx = len(self.elements)
        self.elements.append(vec)
        self.leads.append((lt, lc))
        self.by_comp.setdefault(lt[0], []).append(idx)
        return idx

    def reducer_for(self, term) -> Optional[int]:
        comp, mon = term
        for idx in self.by_comp.get(comp, ()):
            if mon_divides(self.leads[idx][0][1], mon):
                return idx
        return None


def normal_form_vec(vec: dict, basis: _Basis, region: Optional[int] = None) -> dict:
    """Full normal form: no remaining term is divisible by a basis lead.

    Terms in components >= region (the tracking shadow) are never reduced
    and never scanned for leading terms; they only accumulate.
    """
    key = basis.key
    if region is None:
        active = dict(vec)
        passive: dict = {}
    else:
        active = {}
        passive = {}
        for t, c in vec.items():
            (active if t[0] < region else passive)[t] = c
    out: dict = {}
    while active:
        term, coeff = _leading(active, key)
        comp, mon = term
        idx = basis.reducer_for(term)
        if idx is None:
            out[term] = coeff
            del active[term]
            continue
        (lcomp, lmon), lcoeff = basis.leads[idx]
        factor = coeff / lcoeff
        shift = mon_div(mon, lmon)
        g = basis.elements[idx]
        if region is None:
            _sub_multiple(active, factor, shift, g)
        else:
            for (gc, gm), gv in g.items():
                t = (gc, mon_mul(gm, shift))
                tgt = active if gc < region else passive
                v = tgt.get(t)
                delta = factor * gv
                if v is None:
                    tgt[t] = -delta
                else:
                    v = v - delta
                    if v:
                        tgt[t] = v
                    else:
                        del tgt[t]
    out.update(passive)
    return out


def _check_homogeneous(vecs, ring, twists):
    for i, v in enumerate(vecs):
        if vec_degree(v, ring, twists) is None:
            raise InhomogeneousInput(f"generator {i} is not homogeneous")


def buchberger_flat(
    inputs: list,
    ring,
    twists,
    region: Optional[int] = None,
    degree_bound: Optional[int] = None,
    collect_syzygies: bool = False,
    product_criterion: Optional[bool] = None,
):
    """Run Buchberger on flat vectors; return (basis elements, syzygy shadows).

    ``region`` is the number of ambient components; components >= region are
    tracking shadows excluded from pair selection and reduction.  Pairs are
    processed in increasing degree of their S-vector (normal strategy), ties
    broken by generator index, so the run is deterministic.

    The product criterion is only valid for rank-1 ambient parts and never
    when syzygy shadows are being collected (a skipped coprime pair would
    lose its Koszul syzygy).
    """
    rank = region if region is not None else (
        1 + max((c for v in inputs for (c, _m) in v), default=0)
    )
    key = _term_key(ring)
    basis = _Basis(key)
    syzygies: list = []
    truncated = False

    if product_criterion is None:
        product_criterion = (rank == 1) and not collect_syzygies

    def lead_degree(idx):
        (comp, mon), _ = basis.leads[idx]
        return ring.wdeg(mon) + twists[comp]

    pairs: list = []  # heap of (degree, i, j, lcm)
    processed = set()

    def push_pairs(j):
        (cj, mj), _ = basis.leads[j]
        for i in range(j):
            (ci, mi), _ = basis.leads[i]
            if ci != cj:
                continue
            if product_criterion and mon_lcm(mi, mj) == mon_mul(mi, mj):
                continue
            lcm = mon_lcm(mi, mj)
            deg = ring.wdeg(lcm) + twists[ci]
            heapq.heappush(pairs, (deg, i, j, lcm))

    for v in inputs:
        if not v:
            continue
        basis.add(dict(v))
        push_pairs(len(basis.elements) - 1)

    while pairs:
        deg, i, j, lcm = heapq.heappop(pairs)
        if degree_bound is not None and deg > degree_bound:
            truncated = True
            break
        # chain criterion: a third element dividing the lcm whose pairs with
        # i and j were both actually processed makes this pair redundant.
        comp = basis.leads[i][0][0]
        skip = False
        for k in basis.by_comp.get(comp, ()):
            if k == i or k == j:
                continue
            if mon_divides(basis.leads[k][0][1], lcm):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a in processed and b in processed:
                    skip = True
                    break
        if skip:
            processed.add((i, j))
            continue
        processed.add((i, j))

        (ci, mi), lci = basis.leads[i]
        (cj, mj), lcj = basis.leads[j]
        s = {}
        _sub_multiple(s, -1 / lci, mon_div(lcm, mi), basis.elements[i])
        _sub_multiple(s, 1 / lcj, mon_div(lcm, mj), basis.elements[j])
        s = normal_form_vec(s, basis, region=rank)
        ambient = {t: c for t, c in s.items() if t[0] < rank}
        if ambient:
            basis.add(s)
            push_pairs(len(basis.elements) - 1)
        elif collect_syzygies and s:
            syzygies.append({(c - rank, m): v for (c, m), v in s.items()})

    return basis, syzygies, truncated


def _interreduce(vecs: list, ring, key) -> list:
    """Reduce each element against the others; drop zeros; make leads monic."""
    vecs = [v for v in vecs if v]
    changed = True
    while changed:
        changed = False
        vecs.sort(key=lambda v: key(max(v, key=key)))
        out = []
        for i, v in enumerate(vecs):
            others = _Basis(key)
            for j, w in enumerate(vecs):
                if j != i and w:
                    others.add(w)
            if others.elements:
                r = normal_form_vec(v, others)
            else:
                r = v
            if r != v:
                changed = True
            if r:
                out.append(r)
        vecs = out
    normed = []
    for v in vecs:
        _, lc = _leading(v, key)
        normed.append({t: c / lc for t, c in v.items()})
    normed.sort(key=lambda v: key(max(v, key=key)))
    return normed


class GroebnerBasis:
    """Reduced Groebner basis of a homogeneous ideal."""

    def __init__(self, ring: PolyRing, generators: list, truncated_at=None):
        self.ring = ring
        self.generators = generators
        self.order = ring.order
        self.truncated_at = truncated_at
        self._basis = _Basis(_term_key(ring))
        for g in generators:
            self._basis.add(vec_from_columns({0: g}, ring))

    def normal_form(self, f: Polynomial) -> Polynomial:
        vec = vec_from_columns({0: f}, self.ring)
        r = normal_form_vec(vec, self._basis)
        col = vec_to_column(r, self.ring)
        return col.get(0, self.ring.zero)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


class ModuleGroebnerBasis:
    """Reduced Groebner basis of a homogeneous submodule of a free module."""

    def __init__(self, ring, twists, generators_flat: list, truncated_at=None):
        self.ring = ring
        self.twists = tuple(twists)
        self.order = "position-over-term/" + ring.base.order
        self.generators_flat = generators_flat
        self.truncated_at = truncated_at
        self._basis = _Basis(_term_key(ring.base))
        for g in generators_flat:
            self._basis.add(g)

    @property
    def generators(self) -> list:
        return [vec_to_column(g, self.ring) for g in self.generators_flat]

    def normal_form_vec(self, vec: dict) -> dict:
        return normal_form_vec(vec, self._basis)

    def contains_vec(self, vec: dict) -> bool:
        return not self.normal_form_vec(vec)

    def __len__(self):
        return len(self.generators_flat)


def buchberger(gens, ring=None, twists=None, degree_bound=None):
    """Reduced Groebner basis of homogeneous polynomials or module columns.

    Polynomial input: a list of Polynomial over a free polynomial ring.
    Module input: a list of {row: Polynomial} columns plus ambient twists.
    """
    if gens and isinstance(gens[0], Polynomial):
        if ring is None:
            ring = gens[0].ring
        base = ring.base
        for g in gens:
            if g.is_homogeneous() is None:
                raise InhomogeneousInput(f"{g!r} is not homogeneous")
        vecs = [vec_from_columns({0: g}, base) for g in gens if g]
        if ring.is_quotient:
            vecs += [
                vec_from_columns({0: g}, base) for g in ring.ideal_groebner.generators
            ]
        basis, _syz, truncated = buchberger_flat(
            vecs, base, (0,), region=1, degree_bound=degree_bound
        )
        reduced = _interreduce(list(basis.elements), base, _term_key(base))
        polys = [vec_to_column(v, base).get(0, base.zero) for v in reduced]
        return GroebnerBasis(ring, polys, truncated_at=degree_bound if truncated else None)

    if ring is None or twists is None:
        raise ValueError("module input needs the ring and ambient twists")
    base = ring.base
    vecs = [vec_from_columns(col, base) for col in gens]
    _check_homogeneous(vecs, base, twists)
    rank = len(twists)
    if ring.is_quotient:
        for g in ring.ideal_groebner.generators:
            for j in range(rank):
                vecs.append({(j, mon): c for mon, c in g.terms.items()})
    basis, _syz, truncated = buchberger_flat(
        vecs, base, twists, region=rank, degree_bound=degree_bound
    )
    reduced = _interreduce(list(basis.elements), base, _term_key(base))
    return ModuleGroebnerBasis(
        ring, twists, reduced, truncated_at=degree_bound if truncated else None
    )


def normal_form(f, gb):
    """Remainder of f modulo a (module) Groebner basis."""
    if isinstance(gb, GroebnerBasis):
        return gb.normal_form(f)
    if isinstance(f, dict) and f and isinstance(next(iter(f.values())), Polynomial):
        vec = vec_from_columns(f, gb.ring)
        return vec_to_column(gb.normal_form_vec(vec), gb.ring)
    return gb.normal_form_vec(f)


def syzygies_flat(columns_flat: list, ring, twists, ideal_gb=None) -> list:
    """Generating flat vectors of {v : sum v_j * g_j = 0} over the ring.

    ``columns_flat`` live in a free module with the given twists.  When
    ``ideal_gb`` is given (a list of Polynomial generating an ideal I as a
    Groebner basis over the base ring), syzygies are taken modulo I: the
    relation is sum v_j g_j in I*F, and the returned coefficients are reduced
    to normal form mod I.
    """
    base = ring.base
    rank = len(twists)
    m = len(columns_flat)
    _check_homogeneous(columns_flat, base, twists)

    out = []
    work = []
    shadow_twists = list(twists)
    tracked = []  # original index per shadow component
    for i, col in enumerate(columns_flat):
        if not col:
            # a zero generator has the free trivial syzygy e_i
            out.append({(i, base._zero_mon): base.field.one})
            continue
        shadow_twists.append(vec_degree(col, base, twists))
        v = dict(col)
        v[(rank + len(tracked), base._zero_mon)] = base.field.one
        tracked.append(i)
        work.append(v)
    if ideal_gb:
        for g in ideal_gb:
            for j in range(rank):
                v = {(j, mon): c for mon, c in g.terms.items()}
                work.append(v)

    _basis, syz, _trunc = buchberger_flat(
        work, base, tuple(shadow_twists), region=rank, collect_syzygies=True
    )
    for s in syz:
        # map shadow slots back to original column indices
        v = {
            (tracked[c], mon): coeff
            for (c, mon), coeff in s.items()
            if c < len(tracked)
        }
        if ideal_gb is not None and v:
            col = vec_to_column(v, ring)
            col = {r: ring.nf(p) for r, p in col.items()}
            v = vec_from_columns({r: p for r, p in col.items() if p}, ring)
        if v:
            out.append(v)
    return out


def syzygies(columns: list, ring, twists) -> list:
    """Column view of syzygies_flat for {row: Polynomial} columns."""
    flat = [vec_from_columns(col, ring) for col in columns]
    ideal_gb = ring.ideal_groebner.generators if ring.is_quotient else None
    syz = syzygies_flat(flat, ring, twists, ideal_gb=ideal_gb)
    return [vec_to_column(s, ring) for s in syz]


def lift_coefficients(f, gens: list, ring=None):
    """Write f = sum a_i * gens_i; None when f is not in the ideal.

    All inputs homogeneous; the a_i come out homogeneous of the forced
    degrees.  Over a quotient ring the identity holds modulo the defining
    ideal.
    """
    if ring is None:
        ring = f.ring
    base = ring.base
    for g in gens:
        if g.is_homogeneous() is None:
            raise InhomogeneousInput("generators must be homogeneous")
    if f.is_homogeneous() is None:
        raise InhomogeneousInput("dividend must be homogeneous")
    if f.is_zero():
        return [base.zero for _ in gens]

    m = len(gens)
    work = []
    for i, g in enumerate(gens):
        v = vec_from_columns({0: g}, base)
        v[(1 + i, base._zero_mon)] = base.field.one
        work.append(v)
    if ring.is_quotient:
        for g in ring.ideal_groebner.generators:
            work.append(vec_from_columns({0: g}, base))
    twists = [0] + [g.degree() or 0 for g in gens]
    basis, _syz, _trunc = buchberger_flat(
        work, base, tuple(twists), region=1, collect_syzygies=False
    )
    target = vec_from_columns({0: f}, base)
    r = normal_form_vec(target, basis, region=1)
    if any(c == 0 for (c, _mon) in r):
        return None
    col = vec_to_column({(c - 1, mon): v for (c, mon), v in r.items()}, base)
    return [-(col.get(i, base.zero)) for i in range(m)]
