"""Hilbert series as canonical rational functions.

A series is numerator(t) / prod_i (1 - t^{s_i}) with an integer Laurent
polynomial numerator and a multiset of positive denominator exponents.
Canonicalization cancels (1 - t^s) factors that divide the numerator
exactly; no cyclotomic factorization is attempted, so canonical forms are
compact but not unique, and equality is decided by exact subtraction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional


# ---------------------------------------------------------------------------
# integer Laurent polynomials as dict[exp] -> coeff

def lp_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out

def lp_neg(a: dict) -> dict:
    return {e: -c for e, c in a.items()}

def lp_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out

def lp_shift(a: dict, k: int) -> dict:
    return {e + k: c for e, c in a.items()}

def lp_sub_t(a: dict) -> dict:
    """Substitute t -> t^{-1}."""
    return {-e: c for e, c in a.items()}

def one_minus_t_pow(s: int) -> dict:
    return {0: 1, s: -1}

def lp_divexact(a: dict, b: dict) -> Optional[dict]:
    """Exact quotient a/b of Laurent polynomials, None if inexact.

    The quotient keeps integer coefficients when they are integral;
    otherwise Fractions are returned.
    """
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return {}
    sa, sb = min(a), min(b)
    da, db = max(a) - sa, max(b) - sb
    if da < db:
        return None
    A = [Fraction(a.get(sa + i, 0)) for i in range(da + 1)]
    B = [Fraction(b.get(sb + i, 0)) for i in range(db + 1)]
    q = [Fraction(0)] * (da - db + 1)
    for i in range(da - db, -1, -1):
        coeff = A[i + db] / B[db]
        q[i] = coeff
        if coeff:
            for j in range(db + 1):
                A[i + j] -= coeff * B[j]
    if any(A):
        return None
    shift = sa - sb
    out = {}
    for i, c in enumerate(q):
        if c:
            out[i + shift] = int(c) if c.denominator == 1 else c
    return out


def _den_sorted(exponents) -> tuple:
    den = tuple(sorted(exponents))
    if any((not isinstance(s, int)) or s < 1 for s in den):
        raise ValueError("denominator exponents must be positive integers")
    return den


class HilbertSeries:
    """numerator(t) * prod_i (1 - t^{s_i})^{-1}, exact and immutable."""

    __slots__ = ("numerator", "den")

    def __init__(self, numerator: dict, den=(), canonicalize: bool = True):
        num = {int(e): c for e, c in numerator.items() if c}
        for c in num.values():
            if not isinstance(c, int):
                raise TypeError("numerator coefficients must be integers")
        den = _den_sorted(den)
        if canonicalize and num and den:
            num, den = _cancel(num, den)
        if not num:
            den = ()
        self.numerator = num
        self.den = den

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero() -> "HilbertSeries":
        return HilbertSeries({}, ())

    @staticmethod
    def one() -> "HilbertSeries":
        return HilbertSeries({0: 1}, ())

    @staticmethod
    def monomial(a: int, coeff: int = 1) -> "HilbertSeries":
        return HilbertSeries({a: coeff}, ())

    @staticmethod
    def one_over(exponents) -> "HilbertSeries":
        """1 / prod (1 - t^{s_i})."""
        return HilbertSeries({0: 1}, exponents)

    @staticmethod
    def from_fraction(numerator: dict, exponents) -> "HilbertSeries":
        return HilbertSeries(numerator, exponents)

    # -- predicates -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.numerator

    def __bool__(self) -> bool:
        return bool(self.numerator)

    # -- arithmetic ---------------------------------------------------------------

    def _with_common_den(self, other: "HilbertSeries"):
        """Numerators of both over the multiset-union denominator."""
        union: list = []
        a = list(self.den)
        b = list(other.den)
        for s in set(a) | set(b):
            union += [s] * max(a.count(s), b.count(s))
        union.sort()
        na, nb = self.numerator, other.numerator
        ca = list(union)
        for s in a:
            ca.remove(s)
        cb = list(union)
        for s in b:
            cb.remove(s)
        for s in ca:
            na = lp_mul(na, one_minus_t_pow(s))
        for s in cb:
            nb = lp_mul(nb, one_minus_t_pow(s))
        return na, nb, tuple(union)

    def __add__(self, other: "HilbertSeries") -> "HilbertSeries":
        na, nb, den = self._with_common_den(other)
        return HilbertSeries(lp_add(na, nb), den)

    def __sub__(self, other: "HilbertSeries") -> "HilbertSeries":
        na, nb, den = self._with_common_den(other)
        return HilbertSeries(lp_add(na, lp_neg(nb)), den)

    def __neg__(self) -> "HilbertSeries":
        return HilbertSeries(lp_neg(self.numerator), self.den, canonicalize=False)

    def __mul__(self, other: "HilbertSeries") -> "HilbertSeries":
        return HilbertSeries(
            lp_mul(self.numerator, other.numerator), self.den + other.den
        )

    def __truediv__(self, other: "HilbertSeries") -> "HilbertSeries":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero series")
        if self.is_zero():
            return HilbertSeries.zero()
        num = dict(self.numerator)
        for s in other.den:
            num = lp_mul(num, one_minus_t_pow(s))
        den = list(self.den)
        unit_shift, unit_sign, factors, residual = _peel_standard_factors(
            other.numerator
        )
        den += factors
        num = lp_shift(num, -unit_shift)
        if unit_sign < 0:
            num = lp_neg(num)
        if residual != {0: 1}:
            # try the direct division first, then absorb the residual into
            # (1 - t^s) denominator factors via gcds with 1 - t^s
            q = lp_divexact(num, residual)
            if q is not None and all(isinstance(c, int) for c in q.values()):
                num = q
            else:
                num, extra = _absorb_residual(num, residual)
                den += extra
        return HilbertSeries(num, den)

    def shift(self, a: int) -> "HilbertSeries":
        """Multiply by t^a (the series of a twist by -a)."""
        return HilbertSeries(
            lp_shift(self.numerator, a), self.den, canonicalize=False
        )

    def scale(self, c: int) -> "HilbertSeries":
        return HilbertSeries(
            {e: c * v for e, v in self.numerator.items()}, self.den,
            canonicalize=False,
        )

    def invert_t(self) -> "HilbertSeries":
        """Substitute t -> t^{-1}, using (1-t^{-s}) = -t^{-s}(1-t^s)."""
        num = lp_sub_t(self.numerator)
        for s in self.den:
            num = lp_shift(num, s)
            num = lp_neg(num)
        return HilbertSeries(num, self.den, canonicalize=False)

    # -- equality -------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = HilbertSeries({0: other}, ())
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    # -- views ------------------------------------------------------------------------

    def as_laurent_polynomial(self) -> Optional[dict]:
        """Integer Laurent polynomial equal to the series, or None."""
        num = self.numerator
        for s in self.den:
            num = lp_divexact(num, one_minus_t_pow(s))
            if num is None:
                return None
        if num is not None and any(not isinstance(c, int) for c in num.values()):
            return None
        return num

    def value_at_one(self) -> Optional[int]:
        """Sum of coefficients when the series is a Laurent polynomial."""
        p = self.as_laurent_polynomial()
        if p is None:
            return None
        return sum(p.values())

    def coefficient(self, d: int) -> int:
        return self.coefficients(d, d)[0]

    def coefficients(self, lo: int, hi: int) -> list:
        """Power-series coefficients of t^lo .. t^hi, exactly."""
        if self.is_zero():
            return [0] * (hi - lo + 1)
        base = min(self.numerator)
        if hi < base:
            return [0] * (hi - lo + 1)
        width = hi - base + 1
        coeffs = [0] * width
        for e, c in self.numerator.items():
            if e <= hi:
                coeffs[e - base] = c
        for s in self.den:
            for i in range(s, width):
                coeffs[i] += coeffs[i - s]
        out = []
        for d in range(lo, hi + 1):
            out.append(coeffs[d - base] if d >= base else 0)
        return out

    def support_min(self) -> Optional[int]:
        """Least degree with a (potentially) nonzero coefficient."""
        if self.is_zero():
            return None
        return min(self.numerator)

    def to_json(self) -> dict:
        return {
            "numerator": sorted([e, c] for e, c in self.numerator.items()),
            "denominator": list(self.den),
        }

    @staticmethod
    def from_json(data: dict) -> "HilbertSeries":
        return HilbertSeries(
            {int(e): int(c) for e, c in data["numerator"]}, data["denominator"]
        )

    def __repr__(self) -> str:
        if not self.numerator:
            return "0"
        bits = []
        for e, c in sorted(self.numerator.items()):
            if e == 0:
                bits.append(f"{c}")
            else:
                cc = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                bits.append(f"{cc}t^{e}")
        num = " + ".join(bits).replace("+ -", "- ")
        if not self.den:
            return num
        den = "*".join(f"(1-t^{s})" for s in self.den)
        return f"({num})/({den})"


def _cancel(num: dict, den: tuple):
    """Cancel (1 - t^s) factors dividing the numerator; idempotent."""
    den = list(den)
    changed = True
    while changed and den:
        changed = False
        for s in sorted(set(den), reverse=True):
            while s in den:
                q = lp_divexact(num, one_minus_t_pow(s))
                if q is None or any(not isinstance(c, int) for c in q.values()):
                    break
                num = q
                den.remove(s)
                changed = True
                if not num:
                    return num, ()
    return num, tuple(sorted(den))


def _peel_standard_factors(num: dict):
    """Split an integer Laurent polynomial as sign * t^a * prod(1-t^{s}) * residual.

    Greedily peels (1 - t^s) with s the smallest positive exponent present;
    whatever remains is returned as the residual factor.
    """
    if not num:
        raise ZeroDivisionError("cannot factor the zero polynomial")
    shift = min(num)
    p = lp_shift(num, -shift)
    sign = 1
    if p[0] < 0:
        sign = -1
        p = lp_neg(p)
    factors = []
    while p != {0: 1}:
        positive = sorted(e for e in p if e > 0)
        peeled = False
        for s in positive:
            q = lp_divexact(p, one_minus_t_pow(s))
            if q is not None and all(isinstance(c, int) for c in q.values()):
                extra = min(q)
                if extra:
                    shift += extra
                    q = lp_shift(q, -extra)
                if q[0] < 0:
                    sign = -sign
                    q = lp_neg(q)
                p = q
                factors.append(s)
                peeled = True
                break
        if not peeled:
            break
    return shift, sign, factors, p


_ABSORB_BOUND = 64


def _content_primitive(p: dict):
    """Integer content (signed by the lowest term) and primitive part."""
    from math import gcd

    g = 0
    for c in p.values():
        g = gcd(g, abs(int(c)))
    if g == 0:
        return 1, p
    if p[min(p)] < 0:
        g = -g
    return g, {e: c // g for e, c in p.items()}


def _poly_gcd(a: dict, b: dict) -> dict:
    """Primitive integer gcd of two integer Laurent polynomials."""
    if not a:
        return _content_primitive(b)[1]
    if not b:
        return _content_primitive(a)[1]
    A = lp_shift(a, -min(a))
    B = lp_shift(b, -min(b))
    fa = {e: Fraction(c) for e, c in A.items()}
    fb = {e: Fraction(c) for e, c in B.items()}
    while fb:
        da, db = max(fa), max(fb)
        if da < db:
            fa, fb = fb, fa
            continue
        lead = fa[da] / fb[db]
        for e, c in list(fb.items()):
            k = e + da - db
            v = fa.get(k, Fraction(0)) - lead * c
            if v:
                fa[k] = v
            else:
                fa.pop(k, None)
        if not fa:
            fa, fb = fb, {}
            break
        if max(fa) >= da:
            raise AssertionError("gcd reduction did not progress")
        if max(fa) < db:
            fa, fb = fb, fa
    # clear denominators, make primitive
    lcm = 1
    for c in fa.values():
        lcm = lcm * c.denominator // __import__("math").gcd(lcm, c.denominator)
    ints = {e: int(c * lcm) for e, c in fa.items()}
    return _content_primitive(ints)[1]


def _absorb_residual(num: dict, residual: dict):
    """Rewrite num / residual as num' / prod(1 - t^{s_j}).

    Every irreducible factor of the residual must divide some 1 - t^s with
    s <= _ABSORB_BOUND (its roots must be roots of unity); Hilbert series
    of complete-intersection flows always satisfy this.
    """
    content, residual = _content_primitive(residual)
    extra = []
    while residual != {0: 1}:
        found = False
        for s in range(1, _ABSORB_BOUND + 1):
            g = _poly_gcd(residual, one_minus_t_pow(s))
            if g and max(g) - min(g) >= 1:
                cofactor = lp_divexact(one_minus_t_pow(s), g)
                rest = lp_divexact(residual, g)
                if cofactor is None or rest is None:
                    continue
                num = lp_mul(num, {e: int(c) for e, c in cofactor.items()})
                residual = {e: int(c) for e, c in rest.items()}
                extra.append(s)
                found = True
                break
        if not found:
            raise ArithmeticError(
                "quotient is not representable with a (1-t^s) denominator"
            )
    if residual == {0: 1} and content != 1:
        out = {}
        for e, c in num.items():
            q, r = divmod(c, content)
            if r:
                raise ArithmeticError("quotient has non-integer coefficients")
            out[e] = q
        num = out
    return num, extra


def series_arith(a: HilbertSeries, b: Optional[HilbertSeries], op: str) -> HilbertSeries:
    """Exact rational-function arithmetic dispatch."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "invert-t":
        return a.invert_t()
    raise ValueError(f"unknown operation {op!r}")
