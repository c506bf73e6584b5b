"""Graded cohomology operators over a complete intersection, superficial
elements, the complexity-reducing pushout module, and the arbitrary-
complexity pair generator.

The operators come from lifting the resolution differentials to the base
polynomial ring: the square of the lifted differential factors through the
defining regular sequence, and the factor matrices descend to chain maps
of bidegree (-2, -e_n) on the resolution.  Their induced action on Ext
raises cohomological degree by 2 and twists by the generator degree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import degreewise
from .ext import ExtComputation, ExtProfile, ext_profile, fit_hilbert_polynomials, h_invariant
from .fields import PrimeField, RationalField
from .groebner import lift_coefficients
from .hilbert import HilbertSeries
from .modules import GradedMap, ModuleMap, PresentedModule, syzygy
from .quotient import QuotientRing


class LiftFailure(RuntimeError):
    """A squared differential entry failed to divide by the regular sequence."""


class EisenbudOperators:
    """Chain maps tau^n with components F_{j+2} -> F_j(-e_n), one per
    defining equation, satisfying lifted-square = sum f_n tau^n exactly."""

    def __init__(self, resolution, through_step: int):
        ring = resolution.ring
        if not isinstance(ring, QuotientRing):
            raise TypeError("cohomology operators need a quotient ring")
        self.ring = ring
        self.resolution = resolution.extend(through_step + 1)
        self.f = list(ring.generators)
        self.e = list(ring.generator_degrees)
        self.c = len(self.f)
        self.through_step = through_step
        self._tau: dict = {}

    def tau(self, n: int, j: int) -> GradedMap:
        """Component F_{j+2} -> F_j(-e_n) of the n-th operator (0-indexed n)."""
        if (n, j) not in self._tau:
            self._compute_level(j)
        return self._tau[(n, j)]

    def _compute_level(self, j: int):
        res = self.resolution
        base = self.ring.base
        d1 = res.differential(j + 1)
        d2 = res.differential(j + 2)
        rank_top = res.rank(j + 2)
        rank_bot = res.rank(j)
        cols_per_n = [[{} for _ in range(rank_top)] for _ in range(self.c)]
        for col in range(rank_top):
            # entry rows of the lifted square over the base ring
            image: dict = {}
            for mid, entry2 in d2.columns[col].items():
                for bot, entry1 in d1.columns[mid].items():
                    prod = entry1 * entry2
                    prev = image.get(bot)
                    image[bot] = prev + prod if prev is not None else prod
            for bot, entry in image.items():
                if not entry:
                    continue
                coeffs = lift_coefficients(entry, self.f, base)
                if coeffs is None:
                    raise LiftFailure(
                        f"entry ({bot},{col}) of the squared lift at step {j} "
                        "is outside the ideal; the sequence is not regular "
                        "or the resolution is corrupt"
                    )
                for n, a in enumerate(coeffs):
                    if a:
                        cols_per_n[n][col][bot] = a
        src = res.twists(j + 2)
        for n in range(self.c):
            tgt = tuple(a + self.e[n] for a in res.twists(j))
            self._tau[(n, j)] = GradedMap(
                self.ring, src, tgt,
                cols_per_n[n],
            )

    # -- verification -------------------------------------------------------------

    def verify_decomposition(self, j: int) -> bool:
        """Re-multiply: lifted square equals sum f_n tau^n at level j, exactly."""
        res = self.resolution
        d1 = res.differential(j + 1)
        d2 = res.differential(j + 2)
        taus = [self.tau(n, j) for n in range(self.c)]
        for col in range(res.rank(j + 2)):
            image: dict = {}
            for mid, entry2 in d2.columns[col].items():
                for bot, entry1 in d1.columns[mid].items():
                    prod = entry1 * entry2
                    prev = image.get(bot)
                    image[bot] = prev + prod if prev is not None else prod
            for bot in range(res.rank(j)):
                total = None
                for n in range(self.c):
                    term = taus[n].columns[col].get(bot)
                    if term is not None:
                        term = term * self.f[n]
                        total = term if total is None else total + term
                expect = image.get(bot)
                if expect is None or not expect:
                    if total is not None and total:
                        return False
                elif total is None or total != expect:
                    return False
        return True

    def verify_chain_map(self, n: int, j: int) -> bool:
        """d_j(-e) . tau_j = tau_{j-1} . d_{j+2} holds exactly over R."""
        res = self.resolution
        left = res.differential(j).twist(-self.e[n]).compose(self.tau(n, j))
        right = self.tau(n, j - 1).compose(res.differential(j + 2))
        return all(
            lc == rc for lc, rc in zip(left.columns, right.columns)
        )

    def chi_map(self, n: int, i: int, comp: ExtComputation) -> ModuleMap:
        """Hom(F_i, N)(e_n) -> Hom(F_{i+2}, N) induced by tau^n_i."""
        return chi_hom_map(comp, self.tau(n, i), self.e[n], i)

    def combined_tau(self, coefficients, j: int) -> GradedMap:
        """sum c_n tau^n_j for constant coefficients over one degree class."""
        active = [(n, c) for n, c in enumerate(coefficients) if c]
        es = {self.e[n] for n, _ in active}
        if len(es) != 1:
            raise ValueError("combined operator needs one generator degree")
        e = es.pop()
        res = self.resolution
        cols = [dict() for _ in range(res.rank(j + 2))]
        for n, cn in active:
            for ci, col in enumerate(self.tau(n, j).columns):
                for r, p in col.items():
                    prev = cols[ci].get(r)
                    term = p.scale(cn)
                    cols[ci][r] = prev + term if prev is not None else term
        tgt = tuple(a + e for a in res.twists(j))
        return GradedMap(self.ring, res.twists(j + 2), tgt, cols)


def eisenbud_operators(resolution, ring_or_steps, through_step: Optional[int] = None) -> EisenbudOperators:
    if through_step is None:
        through_step = ring_or_steps
    return EisenbudOperators(resolution, through_step)


def chi_hom_map(comp: ExtComputation, tau: GradedMap, e: int, i: int) -> ModuleMap:
    """Transport a chain-map component to Hom(F_i, N)(e) -> Hom(F_{i+2}, N)."""
    src = comp.hom_module(i).twist(e)
    dst = comp.hom_module(i + 2)
    nrank = comp._nmin.rank
    cols = []
    for t in range(comp.resolution.rank(i)):
        for u in range(nrank):
            col = {}
            for s in range(comp.resolution.rank(i + 2)):
                entry = tau.columns[s].get(t)
                if entry:
                    col[s * nrank + u] = entry
            cols.append(col)
    return ModuleMap(src, dst, cols)


# ---------------------------------------------------------------------------
# degreewise Ext pieces (cocycles modulo coboundaries, with coordinates)

class ExtPiece:
    """Basis of Ext^i(M,N)_d as cocycle representatives in Hom(F_i, N)_d."""

    def __init__(self, comp: ExtComputation, i: int, d: int):
        self.comp = comp
        self.i = i
        self.d = d
        ring = comp.ring
        self.field = ring.field
        hom_i = comp.hom_module(i)
        self.piece = hom_i.piece(d)
        nxt = comp.hom_module(i + 1).piece(d)
        if comp.resolution.rank(i + 1) > 0 and self.piece.dim:
            out_cols = degreewise.map_matrix(
                self.piece, nxt, dict(enumerate(comp.delta(i + 1).columns))
            )
        else:
            out_cols = [[self.field.zero] * 0 for _ in range(self.piece.dim)]
        cocycles = degreewise.nullspace(out_cols, nxt.dim, self.field) if out_cols else []
        if comp.resolution.rank(i + 1) == 0:
            # the complex ends: every element is a cocycle
            cocycles = []
            for j in range(self.piece.dim):
                v = [self.field.zero] * self.piece.dim
                v[j] = self.field.one
                cocycles.append(v)
        self.boundary = degreewise.Subspace(self.field, self.piece.dim)
        if i >= 1 and comp.resolution.rank(i - 1) > 0:
            prev = comp.hom_module(i - 1).piece(d)
            if prev.dim and self.piece.dim:
                for colv in degreewise.map_matrix(
                    prev, self.piece, dict(enumerate(comp.delta(i).columns))
                ):
                    self.boundary.add(colv)
        self.basis: list = []
        probe = degreewise.Subspace(self.field, self.piece.dim)
        for row in self.boundary.rows:
            probe.add(row)
        for v in cocycles:
            if probe.add(v):
                self.basis.append(v)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def express(self, vec: list):
        """Coordinates of a cocycle vector in the Ext basis, or None."""
        cols = [list(r) for r in self.boundary.rows] + [list(b) for b in self.basis]
        x = degreewise.linear_solve(
            [ [c[k] for k in range(self.piece.dim)] for c in cols ],
            vec, self.field,
        )
        if x is None:
            return None
        return x[len(self.boundary.rows):]


def induced_ext_matrix(comp: ExtComputation, chi: ModuleMap, e: int, i: int, d: int):
    """Matrix of the operator Ext^i_{d+e} -> Ext^{i+2}_d in Ext bases."""
    src = ExtPiece(comp, i, d + e)
    dst = ExtPiece(comp, i + 2, d)
    if src.dim == 0:
        return src, dst, []
    cols = degreewise.map_matrix(
        src.piece, dst.piece, dict(enumerate(chi.columns))
    )
    # cols maps the piece's coset basis; apply to Ext basis representatives
    out = []
    for b in src.basis:
        img = [dst.field.zero] * dst.piece.dim
        for j, c in enumerate(b):
            if c:
                for k, v in enumerate(cols[j]):
                    img[k] += c * v
        coords = dst.express(img)
        if coords is None:
            raise AssertionError("operator image is not a cocycle class")
        out.append(coords)
    return src, dst, out


# ---------------------------------------------------------------------------
# superficial elements

@dataclass
class SuperficialElement:
    coefficients: tuple
    e: int
    start: int
    window: tuple
    seed: int
    draws: int
    bijective: bool
    operator_indices: tuple
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "coefficients": [str(c) for c in self.coefficients],
            "twist": self.e,
            "start": self.start,
            "verified_window": list(self.window),
            "seed": self.seed,
            "draws": self.draws,
            "bijective": self.bijective,
            "warnings": list(self.warnings),
        }


class SuperficialSearchFailure(RuntimeError):
    pass


def _periodicity_start(profile: ExtProfile) -> int:
    """First index from which lengths repeat with period 2 (cx = 1 case)."""
    J = profile.J
    for t in range(profile.fext_hat + 1, J - 1):
        if all(
            profile.betti[i] == profile.betti[i + 2]
            for i in range(t, J - 1)
        ):
            return t
    return J - 2


def _support_degrees(series: HilbertSeries) -> list:
    p = series.as_laurent_polynomial()
    if p is None:
        raise ValueError("support of a non-finite-length module requested")
    return sorted(p)


def chi_injective_on_window(
    comp: ExtComputation,
    ops: EisenbudOperators,
    coefficients,
    e: int,
    start: int,
    window: int,
    require_bijective: bool = False,
) -> bool:
    for i in range(start, start + window + 1):
        if i + 2 > comp.max_step:
            break
        src_series = comp.ext_series(i)
        if src_series.is_zero():
            continue
        if require_bijective:
            if comp.ext_series(i + 2) != src_series.shift(-e):
                return False
        tau = ops.combined_tau(coefficients, i)
        chi = chi_hom_map(comp, tau, e, i)
        for ds in _support_degrees(src_series):
            d = ds - e
            src = ExtPiece(comp, i, ds)
            if src.dim == 0:
                continue
            dst = ExtPiece(comp, i + 2, d)
            cols = degreewise.map_matrix(
                src.piece, dst.piece, dict(enumerate(chi.columns))
            )
            probe = degreewise.Subspace(dst.field, dst.piece.dim)
            for row in dst.boundary.rows:
                probe.add(row)
            for b in src.basis:
                img = [dst.field.zero] * dst.piece.dim
                for j, c in enumerate(b):
                    if c:
                        for k, v in enumerate(cols[j]):
                            img[k] += c * v
                if not probe.add(img):
                    return False
    return True


def find_superficial(
    comp: ExtComputation,
    profile: ExtProfile,
    polys=None,
    seed: int = 0,
    max_draws: int = 20,
    window: Optional[int] = None,
) -> SuperficialElement:
    """Seeded random search for an operator combination that acts injectively
    on the Ext window, verified by exact degreewise rank computations."""

    ring = comp.ring
    if polys is None:
        polys = fit_hilbert_polynomials(profile)
    r = polys.r
    if r < 1:
        raise ValueError("superficial elements need complexity >= 1")
    field = ring.field
    if isinstance(field, PrimeField) and field.p < 101:
        raise ValueError("prime field too small for a reliable draw (need p >= 101)")

    ops = EisenbudOperators(comp.resolution, comp.max_step - 1)
    warnings = []
    # restrict to the most common generator degree when degrees are mixed
    degree_classes: dict = {}
    for n, e in enumerate(ops.e):
        degree_classes.setdefault(e, []).append(n)
    e, indices = max(degree_classes.items(), key=lambda kv: (len(kv[1]), -kv[0]))
    if len(degree_classes) > 1:
        warnings.append(
            f"operators restricted to generator degree {e} "
            f"(indices {tuple(i + 1 for i in indices)})"
        )

    start = profile.fext_hat + 1
    if r == 1:
        t = _periodicity_start(profile)
        start = max(start, t)
        warnings.append(
            f"period-2 start detected at step {t} from the length window (heuristic)"
        )
    w = window if window is not None else 2 * ring.codimension + 4
    w = min(w, comp.max_step - start - 2)
    if w < 2:
        raise SuperficialSearchFailure(
            "resolution window too short to verify a superficial element; increase J"
        )

    rng = random.Random(seed)
    tried = 0
    while tried < max_draws:
        tried += 1
        if len(indices) == 1:
            coeffs = {indices[0]: field.one}
        else:
            coeffs = {}
            for n in indices:
                if isinstance(field, RationalField):
                    coeffs[n] = Fraction(rng.randint(-9, 9))
                else:
                    coeffs[n] = field(rng.randrange(field.p))
            if not any(coeffs.values()):
                continue
        vec = tuple(
            coeffs.get(n, field.zero) if n in indices else field.zero
            for n in range(ops.c)
        )
        ok = chi_injective_on_window(
            comp, ops, vec, e, start, w, require_bijective=(r == 1)
        )
        if ok:
            return SuperficialElement(
                coefficients=vec,
                e=e,
                start=start,
                window=(start, start + w),
                seed=seed,
                draws=tried,
                bijective=(r == 1),
                operator_indices=tuple(indices),
                warnings=warnings,
            )
    raise SuperficialSearchFailure(
        f"no superficial element found in {max_draws} draws; the field may be "
        "too small or the verification window too short"
    )


# ---------------------------------------------------------------------------
# complexity reduction

@dataclass
class ReductionResult:
    n: int
    e: int
    module: PresentedModule
    chi: SuperficialElement
    profile: ExtProfile
    beta_window_checked: tuple
    beta_relation_holds: bool
    series_relation_holds: bool
    cx_before: int
    cx_after: int
    h_before: Fraction
    h_after: Fraction
    h_relation_holds: bool
    rho_formula_holds: Optional[bool] = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "twist": self.e,
            "chi": self.chi.to_json(),
            "beta_window": list(self.beta_window_checked),
            "beta_relation": self.beta_relation_holds,
            "ext_sequence_series": self.series_relation_holds,
            "cx": [self.cx_before, self.cx_after],
            "h": [str(self.h_before), str(self.h_after)],
            "h_relation": self.h_relation_holds,
            "rho_formula": self.rho_formula_holds,
        }


def pushout_module(comp: ExtComputation, ops: EisenbudOperators,
                   chi: SuperficialElement, n: int) -> PresentedModule:
    """Cokernel of syz^{n+2} -> F_{n+1} (+) syz^n(-e), the pushout row."""
    res = comp.resolution.extend(n + 3)
    e = chi.e
    tau_n = ops.combined_tau(chi.coefficients, n)
    top = res.twists(n + 1)
    bot = tuple(a + e for a in res.twists(n))
    ambient = top + bot
    offset = len(top)
    cols = []
    d_n2 = res.differential(n + 2)
    for c in range(res.rank(n + 2)):
        col = dict(d_n2.columns[c])
        for r, p in tau_n.columns[c].items():
            col[offset + r] = -p
        cols.append(col)
    d_n1 = res.differential(n + 1)
    for c in range(res.rank(n + 1)):
        col = {offset + r: p for r, p in d_n1.columns[c].items()}
        cols.append(col)
    K = PresentedModule(comp.ring, ambient, cols, name=f"K(n={n})")
    return K.minimal_presentation()


def reduce_complexity(
    comp: ExtComputation,
    profile: ExtProfile,
    chi: SuperficialElement,
    n: Optional[int] = None,
    parity: Optional[int] = None,
    check_window: int = 6,
    check_rho: bool = True,
) -> ReductionResult:
    """Build the pushout module K and certify the reduction laws on a window.

    Requires n > max(superficial start, clamped fext) and the resolution
    through n + 2.
    """
    polys = fit_hilbert_polynomials(profile)
    r = polys.r
    if r < 1:
        raise ValueError("nothing to reduce at complexity 0")
    floor = max(chi.start, profile.fext_hat)
    if n is None:
        n = floor + 1
        if parity is not None and n % 2 != parity:
            n += 1
    if n <= floor:
        raise ValueError(f"n must exceed {floor}")
    if n + 2 > comp.max_step:
        raise ValueError("resolution too short for this n; increase J")

    ops = EisenbudOperators(comp.resolution, comp.max_step - 1)
    K = pushout_module(comp, ops, chi, n)
    e = chi.e
    JK = min(profile.J - n - 1, profile.J)
    JK = max(JK, 2 * comp.ring.codimension + 6)
    prof_K = ext_profile(K, comp.N, JK, fext_certified=profile.fext_certified)

    beta_ok = True
    checked = []
    for i in range(2, 2 + check_window):
        if i + n + 1 > profile.J or i > prof_K.J:
            break
        lhs = prof_K.betti[i]
        b_hi = profile.betti[i + n + 1]
        b_lo = profile.betti[i + n - 1]
        if lhs is None or b_hi is None or b_lo is None:
            beta_ok = False
            break
        checked.append(i)
        if lhs != b_hi - b_lo:
            beta_ok = False
            break

    series_ok = True
    for i in checked:
        lhs = prof_K.series[i]
        rhs = profile.series[i + n + 1] - profile.series[i + n - 1].shift(-e)
        if lhs != rhs:
            series_ok = False
            break

    polys_K = fit_hilbert_polynomials(prof_K)
    h_M = h_invariant(polys)
    h_K = h_invariant(polys_K)
    h_expected = 2 * (-1) ** (n + 1) * (r - 1) * h_M
    rho_ok = None
    if check_rho:
        rho_ok = check_rho_formula(comp, prof_K.computation, n, e)
    return ReductionResult(
        n=n,
        e=e,
        module=K,
        chi=chi,
        profile=prof_K,
        beta_window_checked=tuple(checked),
        beta_relation_holds=beta_ok,
        series_relation_holds=series_ok,
        cx_before=r,
        cx_after=polys_K.r,
        h_before=h_M,
        h_after=h_K,
        h_relation_holds=(h_K == h_expected),
        rho_formula_holds=rho_ok,
    )


def check_rho_formula(
    comp_M: ExtComputation, comp_K: ExtComputation, n: int, e: int
) -> bool:
    """Exact rational-function identity linking rho^1(K,N) to rho^n(M,N)."""
    from .ext import rho

    lhs = rho(comp_K, 1)
    factor = HilbertSeries({-e: 1, 0: -1}, ())
    rhs = factor * rho(comp_M, n)
    if n % 2 == 1:
        rhs = -rhs
    rhs = rhs + comp_M.ext_series(n + 1) - comp_M.ext_series(n + 2)
    return lhs == rhs


# ---------------------------------------------------------------------------
# pairs of prescribed complexity

@dataclass
class GeneratedPair:
    M: PresentedModule
    N: PresentedModule
    ring: QuotientRing
    i: int
    j: int
    predicted_cx: int
    fext_certified: bool = True

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "predicted_cx": self.predicted_cx,
            "fext": 0,
        }


def generate_pair(Q, fs, i: int, j: int) -> GeneratedPair:
    """Modules with complexity max(i - j + 1, 0) over Q/(f_1..f_c).

    Built from syzygies of the residue field over the intermediate rings
    Q/(f_1..f_i) and Q/(f_j..f_c); the construction certifies that every
    Ext beyond step 0 has finite length.
    """
    fs = list(fs)
    c = len(fs)
    if not (1 <= i <= c and 1 <= j <= c):
        raise ValueError("need 1 <= i, j <= c")
    R = QuotientRing(Q, fs, check_regular=True)

    def syzygy_of_k(sub_fs):
        ring_sub = QuotientRing(Q, sub_fs) if sub_fs else Q
        dim_sub = Q.nvars - len(sub_fs)
        k_sub = PresentedModule.residue_field(ring_sub)
        return syzygy(k_sub, dim_sub)

    Mt = syzygy_of_k(fs[:i])
    Nt = syzygy_of_k(fs[j - 1:])
    M = PresentedModule(R, Mt.gens_twists, Mt.relations, name=f"M[{i}]")
    N = PresentedModule(R, Nt.gens_twists, Nt.relations, name=f"N[{j}]")
    return GeneratedPair(
        M=M.minimal_presentation(),
        N=N.minimal_presentation(),
        ring=R,
        i=i,
        j=j,
        predicted_cx=max(i - j + 1, 0),
    )
