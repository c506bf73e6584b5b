"""Ext modules over a graded complete intersection, their Hilbert series,
Betti numbers, even/odd Hilbert polynomials, complexity, Herbrand-type
differences, and the Laurent-coefficient invariants built from them.

Ext^i(M, N) is the cohomology of Hom(F, N) for a minimal free resolution F
of M; since the resolution is minimal, Hom(F_i, N) is the direct sum of
twisted copies of N and the induced maps are multiplication matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .groebner import syzygies
from .hilbert import HilbertSeries
from .laurent import ORDER_INFINITY, series_g, series_order
from .modules import (
    ModuleMap,
    PresentedModule,
    _column_degree,
    kernel,
    kernel_series,
)

_RING_SERIES: dict = {}


def ring_series(ring) -> HilbertSeries:
    key = id(ring)
    if key not in _RING_SERIES:
        _RING_SERIES[key] = PresentedModule.free(ring, (0,)).hilbert_series()
    return _RING_SERIES[key]


class ExtComputation:
    """Shared state for Ext^*(M, N) along one minimal resolution of M."""

    def __init__(self, M: PresentedModule, N: PresentedModule, max_step: int):
        if M.ring != N.ring:
            raise ValueError("ring mismatch")
        self.ring = M.ring
        self.M = M
        self.N = N
        self.max_step = max_step
        self.resolution = M.resolution().extend(max_step + 1)
        self._nmin = N.minimal_presentation()
        self._hom: dict = {}
        self._delta: dict = {}
        self._kernel_series: dict = {}
        self._ext_series: dict = {}
        self._ext_module: dict = {}

    # -- the Hom complex ---------------------------------------------------------

    def hom_module(self, i: int) -> PresentedModule:
        """Hom(F_i, N) = direct sum of N(a_t) over the twists of F_i."""
        if i not in self._hom:
            twists = self.resolution.twists(i)
            if not twists:
                mod = PresentedModule(self.ring, (), [])
                mod._hilbert = HilbertSeries.zero()
            else:
                nmin = self._nmin
                nrank = nmin.rank
                gens = []
                cols = []
                for t, a in enumerate(twists):
                    gens.extend(b - a for b in nmin.gens_twists)
                    for col in nmin.relations:
                        cols.append({t * nrank + r: p for r, p in col.items()})
                mod = PresentedModule(self.ring, gens, cols, canonical=True)
                series = HilbertSeries.zero()
                hn = nmin.hilbert_series()
                for a in twists:
                    series = series + hn.shift(-a)
                mod._hilbert = series
            self._hom[i] = mod
        return self._hom[i]

    def delta(self, i: int) -> ModuleMap:
        """Hom(partial_i, N): Hom(F_{i-1}, N) -> Hom(F_i, N), for i >= 1."""
        if i not in self._delta:
            src = self.hom_module(i - 1)
            dst = self.hom_module(i)
            partial = self.resolution.differential(i)
            nrank = self._nmin.rank
            cols = []
            for t in range(self.resolution.rank(i - 1)):
                for u in range(nrank):
                    col = {}
                    for s in range(self.resolution.rank(i)):
                        entry = partial.columns[s].get(t)
                        if entry:
                            col[s * nrank + u] = entry
                    cols.append(col)
            self._delta[i] = ModuleMap(src, dst, cols)
        return self._delta[i]

    # -- series --------------------------------------------------------------------

    def kernel_series(self, i: int) -> HilbertSeries:
        """H(ker delta^i), with delta^i = Hom(partial_i, N)."""
        if i not in self._kernel_series:
            if self.resolution.rank(i - 1) == 0:
                self._kernel_series[i] = HilbertSeries.zero()
            elif self.resolution.rank(i) == 0:
                self._kernel_series[i] = self.hom_module(i - 1).hilbert_series()
            else:
                self._kernel_series[i] = kernel_series(self.delta(i))
        return self._kernel_series[i]

    def ext_series(self, i: int) -> HilbertSeries:
        """H(Ext^i(M, N), t), exactly."""
        if i < 0:
            return HilbertSeries.zero()
        if i not in self._ext_series:
            if i > self.max_step:
                raise ValueError(f"resolution computed only through {self.max_step}")
            if i == 0:
                s = self.kernel_series(1)
            else:
                s = (
                    self.kernel_series(i + 1)
                    - self.hom_module(i - 1).hilbert_series()
                    + self.kernel_series(i)
                )
            self._ext_series[i] = s
        return self._ext_series[i]

    def ext_module(self, i: int) -> PresentedModule:
        """Ext^i(M, N) as a presented module (heavier than the series)."""
        if i not in self._ext_module:
            ring = self.ring
            hom_i = self.hom_module(i)
            if hom_i.rank == 0:
                self._ext_module[i] = PresentedModule(ring, (), [])
                return self._ext_module[i]
            if self.resolution.rank(i + 1) == 0:
                gens = [
                    {j: ring.one} for j in range(hom_i.rank)
                ]
                ker_gens = gens
            else:
                ker = kernel(self.delta(i + 1))
                ker_gens = ker.inclusion
            combined = list(ker_gens)
            nrel = len(combined)
            if i >= 1 and self.resolution.rank(i - 1) > 0:
                combined += self.delta(i).columns
            combined += hom_i.relations
            if not ker_gens:
                self._ext_module[i] = PresentedModule(ring, (), [])
                return self._ext_module[i]
            rel = syzygies(combined, ring, hom_i.gens_twists)
            twists = []
            for c in ker_gens:
                d = _column_degree(c, hom_i.gens_twists)
                twists.append(0 if d is None else d)
            cols = []
            for col in rel:
                v = {r: p for r, p in col.items() if r < nrel}
                if v:
                    cols.append(v)
            mod = PresentedModule(ring, twists, cols).minimal_presentation()
            self._ext_module[i] = mod
        return self._ext_module[i]


def ext_series(M: PresentedModule, N: PresentedModule, i: int) -> HilbertSeries:
    return ExtComputation(M, N, i).ext_series(i)


# ---------------------------------------------------------------------------
# profiles

@dataclass
class ExtProfile:
    """Per-step Ext data through homological degree J."""

    M: PresentedModule
    N: PresentedModule
    J: int
    series: list
    finite: list
    betti: list
    fext_hat: int
    window: int
    stable: bool
    fext_certified: bool = False
    warnings: list = field(default_factory=list)
    computation: Optional[ExtComputation] = None

    @property
    def codimension(self) -> int:
        return self.M.ring.codimension

    def betti_window(self) -> dict:
        return {
            i: self.betti[i] for i in range(self.fext_hat + 1, self.J + 1)
        }

    def to_json(self) -> dict:
        return {
            "max_step": self.J,
            "fext": self.fext_hat,
            "fext_status": "certified" if self.fext_certified else "heuristic-window",
            "stable_window": self.stable,
            "window": self.window,
            "betti": {str(i): b for i, b in enumerate(self.betti)},
            "finite_length": self.finite,
            "ext_series": [s.to_json() for s in self.series],
            "warnings": list(self.warnings),
        }


def ext_profile(
    M: PresentedModule,
    N: PresentedModule,
    J: int,
    fext_certified: bool = False,
    computation: Optional[ExtComputation] = None,
) -> ExtProfile:
    """Ext series, finite-length flags and Betti numbers through step J.

    The clamped fext is the smallest n >= 0 with every computed Ext^i,
    i > n, of finite length; stability of that reading over the trailing
    window is reported, not certified, unless the pair carries a
    certificate.
    """
    if J < 4:
        raise ValueError("profiles need at least 4 steps")
    comp = computation or ExtComputation(M, N, J)
    series = [comp.ext_series(i) for i in range(J + 1)]
    finite = [s.as_laurent_polynomial() is not None for s in series]
    betti = [s.value_at_one() for s in series]
    last_infinite = -1
    for i, f in enumerate(finite):
        if not f:
            last_infinite = i
    fext_hat = max(0, last_infinite)
    c = M.ring.codimension if M.ring.is_quotient else 0
    window = 2 * c + 4
    stable = all(finite[max(0, J - window + 1): J + 1])
    warnings = []
    if not stable:
        warnings.append(
            f"finite-length pattern not stable over the last {window} steps"
        )
    if not fext_certified:
        warnings.append(
            "fext determined from a finite window (heuristic); assert "
            "fext-finite or use a generated pair to certify"
        )
    return ExtProfile(
        M, N, J, series, finite, betti, fext_hat, window, stable,
        fext_certified=fext_certified, warnings=warnings, computation=comp,
    )


# ---------------------------------------------------------------------------
# even/odd Hilbert polynomials, complexity, h invariants

class FitError(RuntimeError):
    pass


@dataclass
class HilbertPolynomials:
    p_even: list          # Fraction coefficients, low degree first
    p_odd: list
    r: int                # complexity = 1 + max degree
    a_lead: Fraction      # coefficient of t^{r-1} in p_even
    b_lead: Fraction      # same for p_odd
    window_start: int
    window_end: int

    def eval_even(self, i: int) -> Fraction:
        return _poly_eval(self.p_even, i)

    def eval_odd(self, i: int) -> Fraction:
        return _poly_eval(self.p_odd, i)

    def eval(self, i: int) -> Fraction:
        return self.eval_even(i) if i % 2 == 0 else self.eval_odd(i)

    def to_json(self) -> dict:
        return {
            "p_even": [str(c) for c in self.p_even],
            "p_odd": [str(c) for c in self.p_odd],
            "complexity": self.r,
            "leading_even": str(self.a_lead),
            "leading_odd": str(self.b_lead),
            "verified_window": [self.window_start, self.window_end],
        }


def _poly_eval(coeffs: list, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _interpolate(points: list) -> list:
    """Newton interpolation; exact coefficients, low degree first."""
    n = len(points)
    xs = [Fraction(p[0]) for p in points]
    divided = [Fraction(p[1]) for p in points]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            divided[i] = (divided[i] - divided[i - 1]) / (xs[i] - xs[i - j])
    coeffs = [Fraction(0)] * n
    coeffs[0] = divided[n - 1]
    deg = 0
    for k in range(n - 2, -1, -1):
        # multiply by (x - xs[k]) and add divided[k]
        new = [Fraction(0)] * (deg + 2)
        for d in range(deg + 1):
            new[d + 1] += coeffs[d]
            new[d] -= coeffs[d] * xs[k]
        new[0] += divided[k]
        coeffs = new
        deg += 1
    while len(coeffs) > 1 and not coeffs[-1]:
        coeffs.pop()
    if coeffs == [Fraction(0)]:
        coeffs = []
    return coeffs


def fit_hilbert_polynomials(profile: ExtProfile) -> HilbertPolynomials:
    """Exact finite-difference fit of the even/odd Betti subsequences.

    Interpolates each parity on its trailing c points (degree <= c-1 by
    construction) and requires the fit to reproduce at least c+2 trailing
    window values per parity exactly.
    """
    c = max(profile.codimension, 1)
    start = profile.fext_hat + 1
    end = profile.J
    if not profile.stable:
        raise FitError("finite-length window is not stable; increase J")
    if end - start + 1 < 2 * (c + 2):
        raise FitError(
            f"need a finite-length window of length >= {2 * (c + 2)}; increase J"
        )
    out = {}
    for parity in (0, 1):
        pts = [
            (i, profile.betti[i])
            for i in range(start, end + 1)
            if i % 2 == parity and profile.betti[i] is not None
        ]
        if len(pts) < c + 2:
            raise FitError("not enough finite-length values per parity; increase J")
        coeffs = _interpolate(pts[-c:])
        if len(coeffs) > c:
            raise FitError(
                f"fitted degree exceeds codimension-1={c - 1}: "
                "not a complete intersection pair or a truncation artifact"
            )
        for i, b in pts:
            if _poly_eval(coeffs, i) != b:
                raise FitError(
                    "polynomial fit fails on the verification window; "
                    "increase J (persistent failure signals non-CI input)"
                )
        out[parity] = coeffs
    p_even, p_odd = out[0], out[1]
    deg_e = len(p_even) - 1 if p_even else -1
    deg_o = len(p_odd) - 1 if p_odd else -1
    r = 1 + max(deg_e, deg_o)
    a = p_even[r - 1] if 0 <= r - 1 < len(p_even) else Fraction(0)
    b = p_odd[r - 1] if 0 <= r - 1 < len(p_odd) else Fraction(0)
    return HilbertPolynomials(p_even, p_odd, r, a, b, start, end)


def complexity(profile: ExtProfile) -> int:
    return fit_hilbert_polynomials(profile).r


def h_invariant(polys: HilbertPolynomials) -> Fraction:
    """Difference of the degree-(r-1) coefficients; 0 when r = 0."""
    if polys.r == 0:
        return Fraction(0)
    return polys.a_lead - polys.b_lead


class HerbrandDivergence(ArithmeticError):
    pass


def herbrand_difference(profile: ExtProfile, polys: HilbertPolynomials, j: int) -> Fraction:
    """lim_n sum_{i=fext+1}^n (-1)^i beta_i / n^j, evaluated symbolically.

    The alternating partial sum is an exact quasi-polynomial in n (one
    polynomial per parity of n); the limit exists exactly when both parity
    polynomials have degree <= j and share their degree-j coefficient.
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    start = profile.fext_hat + 1

    def beta(i: int) -> Fraction:
        if i <= profile.J:
            b = profile.betti[i]
            if b is None:
                raise HerbrandDivergence("infinite length inside the sum range")
            return Fraction(b)
        return polys.eval(i)

    degree_cap = polys.r + 1
    n0 = profile.J + 2
    samples_needed = degree_cap + 2
    hi = n0 + 2 * samples_needed + 1
    s = Fraction(0)
    partial = {}
    for i in range(start, hi + 1):
        s += (-1) ** i * beta(i)
        partial[i] = s
    even_pts = [(n, partial[n]) for n in range(n0, hi + 1) if n % 2 == 0]
    odd_pts = [(n, partial[n]) for n in range(n0, hi + 1) if n % 2 == 1]
    s_even = _interpolate(even_pts[:samples_needed])
    s_odd = _interpolate(odd_pts[:samples_needed])
    for pts, fit in ((even_pts, s_even), (odd_pts, s_odd)):
        for n, v in pts:
            if _poly_eval(fit, n) != v:
                raise HerbrandDivergence("partial sums are not quasi-polynomial")
    coeff = {}
    for name, fit in (("even", s_even), ("odd", s_odd)):
        if len(fit) - 1 > j and any(fit[j + 1:]):
            raise HerbrandDivergence(
                f"partial sums grow like n^{len(fit) - 1} > n^{j}; "
                "the Herbrand limit diverges"
            )
        coeff[name] = fit[j] if j < len(fit) else Fraction(0)
    if coeff["even"] != coeff["odd"]:
        raise HerbrandDivergence("even/odd partial-sum limits disagree")
    return coeff["even"]


# ---------------------------------------------------------------------------
# the rational-function invariants

def phi(M: PresentedModule, N: PresentedModule) -> HilbertSeries:
    """H(M, 1/t) H(N, t) / H(R, 1/t), as an exact rational function."""
    hm = M.hilbert_series().invert_t()
    hn = N.hilbert_series()
    hr = ring_series(M.ring).invert_t()
    return hm * hn / hr


def omega(comp: ExtComputation, j: int) -> HilbertSeries:
    out = HilbertSeries.zero()
    for i in range(j + 1):
        s = comp.ext_series(i)
        out = out + (s if i % 2 == 0 else -s)
    return out


def rho(comp: ExtComputation, j: int) -> HilbertSeries:
    return omega(comp, j) - phi(comp.M, comp.N)


def epsilon(comp: ExtComputation, j: int) -> Fraction:
    """g^{dim R - j} of the alternating Ext-series sum through j."""
    d = PresentedModule.free(comp.ring, (0,)).dimension()
    return series_g(omega(comp, j), int(d) - j)


class WindowTooShort(RuntimeError):
    pass


def level_for_coefficient(comp: ExtComputation, n: int, J: int) -> int:
    """Smallest computed level l with g^n(Ext^i) = 0 for all i > l.

    Raises when the tail of the computed window still carries nonzero
    coefficients, since the reading would then be meaningless.
    """
    values = [series_g(comp.ext_series(i), n) for i in range(J + 1)]
    last = -1
    for i, v in enumerate(values):
        if v:
            last = i
    tail = max(2, (comp.ring.codimension if comp.ring.is_quotient else 0) + 2)
    if last > J - tail:
        raise WindowTooShort(
            f"g^{n}(Ext^i) is still nonzero at i={last}, too close to J={J}"
        )
    return max(last, 0)


def gamma(comp: ExtComputation, n: int, J: int) -> Fraction:
    """Stable coefficient g^n(rho^l) for l at least the vanishing level."""
    l = level_for_coefficient(comp, n, J)
    return series_g(rho(comp, l), n)


def rho_order(comp: ExtComputation, j: int):
    return series_order(rho(comp, j))
