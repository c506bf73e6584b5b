"""Laurent expansions of rational functions around t = 1.

Writing u = 1 - t, a series expands as sum_m b_m u^m; the signed
coefficients g^n = b_{-n} and the order are the invariants used throughout.
Orders of engine series are computed exactly from the multiplicity of the
t = 1 root of the numerator, never from truncated data.  All coefficients
are exact rationals.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, inf

from .hilbert import HilbertSeries, lp_divexact, one_minus_t_pow

ORDER_INFINITY = inf


class InsufficientPrecision(ArithmeticError):
    """The requested quantity is not determined by the computed window."""

    def __init__(self, message: str, bound=None):
        super().__init__(message)
        self.bound = bound


class LaurentExpansion:
    """Window [order, order + precision] of u-coefficients, u = 1 - t.

    Three states: the exact zero function (order infinity); a known
    expansion whose leading coefficient is nonzero; and an undetermined
    sum whose coefficients all cancelled within the window, recorded as
    "order > bound".
    """

    __slots__ = ("_order", "coeffs", "precision", "_bound")

    def __init__(self, order, coeffs: dict, precision: int, bound=None):
        self._order = order
        self.coeffs = {m: Fraction(c) for m, c in coeffs.items() if c}
        self.precision = precision
        self._bound = bound

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def zero() -> "LaurentExpansion":
        return LaurentExpansion(ORDER_INFINITY, {}, 0)

    @staticmethod
    def undetermined(bound: int) -> "LaurentExpansion":
        return LaurentExpansion(None, {}, 0, bound=bound)

    # -- state ---------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self._order == ORDER_INFINITY

    @property
    def is_undetermined(self) -> bool:
        return self._order is None

    @property
    def order(self):
        """Exact order; raises when only a lower bound is known."""
        if self._order is None:
            raise InsufficientPrecision(
                f"order undetermined: all coefficients vanish up to u^{self._bound}",
                bound=self._bound,
            )
        return self._order

    @property
    def order_bound(self):
        """An integer B with order > B, for undetermined sums."""
        return self._bound

    def g(self, n: int) -> Fraction:
        """Signed coefficient g^n = (-1)^n a_{-n} = b_{-n}."""
        if self.is_zero:
            return Fraction(0)
        if self._order is None:
            if -n <= self._bound:
                return Fraction(0)
            raise InsufficientPrecision(f"g^{n} beyond the computed window")
        m = -n
        if m < self._order:
            return Fraction(0)
        if m > self._order + self.precision:
            raise InsufficientPrecision(f"g^{n} beyond the computed window")
        return self.coeffs.get(m, Fraction(0))

    def window(self) -> dict:
        """g^n values over the computed window, top coefficient first."""
        if self.is_zero or self.is_undetermined:
            return {}
        return {
            -m: self.coeffs.get(m, Fraction(0))
            for m in range(self._order, self._order + self.precision + 1)
        }

    # -- arithmetic --------------------------------------------------------------------

    def __add__(self, other: "LaurentExpansion") -> "LaurentExpansion":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.is_undetermined or other.is_undetermined:
            known, und = (self, other) if other.is_undetermined else (other, self)
            if known.is_undetermined:
                return LaurentExpansion.undetermined(
                    min(self._bound, other._bound)
                )
            if known._order <= und._bound:
                hi = min(known._order + known.precision, und._bound)
                return LaurentExpansion(
                    known._order,
                    {m: c for m, c in known.coeffs.items() if m <= hi},
                    hi - known._order,
                )
            return LaurentExpansion.undetermined(
                min(und._bound, known._order + known.precision)
            )
        lo = min(self._order, other._order)
        hi = min(self._order + self.precision, other._order + other.precision)
        coeffs = {}
        for m in range(lo, hi + 1):
            c = self.coeffs.get(m, Fraction(0)) + other.coeffs.get(m, Fraction(0))
            if c:
                coeffs[m] = c
        if not coeffs:
            return LaurentExpansion.undetermined(hi)
        o = min(coeffs)
        return LaurentExpansion(o, coeffs, hi - o)

    def __neg__(self) -> "LaurentExpansion":
        if self.is_zero or self.is_undetermined:
            return self
        return LaurentExpansion(
            self._order, {m: -c for m, c in self.coeffs.items()}, self.precision
        )

    def __sub__(self, other: "LaurentExpansion") -> "LaurentExpansion":
        return self + (-other)

    def __mul__(self, other: "LaurentExpansion") -> "LaurentExpansion":
        if self.is_zero or other.is_zero:
            return LaurentExpansion.zero()
        if self.is_undetermined or other.is_undetermined:
            raise InsufficientPrecision("product with an undetermined expansion")
        o = self._order + other._order
        prec = min(self.precision, other.precision)
        coeffs = {}
        for m in range(o, o + prec + 1):
            c = Fraction(0)
            for i in range(self._order, m - other._order + 1):
                c += self.coeffs.get(i, Fraction(0)) * other.coeffs.get(
                    m - i, Fraction(0)
                )
            if c:
                coeffs[m] = c
        return LaurentExpansion(o, coeffs, prec)

    def __truediv__(self, other: "LaurentExpansion") -> "LaurentExpansion":
        if other.is_zero:
            raise ZeroDivisionError("division by the zero expansion")
        if other.is_undetermined:
            raise InsufficientPrecision("division by an undetermined expansion")
        if self.is_zero:
            return LaurentExpansion.zero()
        if self.is_undetermined:
            raise InsufficientPrecision("division of an undetermined expansion")
        prec = min(self.precision, other.precision)
        o = self._order - other._order
        # invert the unit part of the divisor as a power series in u
        b = [other.coeffs.get(other._order + i, Fraction(0)) for i in range(prec + 1)]
        inv = [Fraction(0)] * (prec + 1)
        inv[0] = 1 / b[0]
        for k in range(1, prec + 1):
            s = Fraction(0)
            for i in range(1, k + 1):
                s += b[i] * inv[k - i]
            inv[k] = -s / b[0]
        a = [self.coeffs.get(self._order + i, Fraction(0)) for i in range(prec + 1)]
        coeffs = {}
        for k in range(prec + 1):
            c = sum((a[i] * inv[k - i] for i in range(k + 1)), Fraction(0))
            if c:
                coeffs[o + k] = c
        return LaurentExpansion(o, coeffs, prec)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentExpansion):
            return NotImplemented
        return (
            self._order == other._order
            and self._bound == other._bound
            and self.coeffs == other.coeffs
        )

    def to_json(self) -> dict:
        if self.is_zero:
            return {"order": "infinity", "coefficients": {}}
        if self.is_undetermined:
            return {"order": f"> {self._bound}", "coefficients": {}}
        return {
            "order": self._order,
            "coefficients": {str(n): str(c) for n, c in self.window().items()},
        }

    def __repr__(self) -> str:
        if self.is_zero:
            return "LaurentExpansion(0)"
        if self.is_undetermined:
            return f"LaurentExpansion(order > {self._bound})"
        terms = ", ".join(
            f"g^{n}={c}" for n, c in sorted(self.window().items(), reverse=True)
        )
        return f"LaurentExpansion(order={self._order}, {terms})"


def series_order(series: HilbertSeries):
    """Exact Laurent order of a Hilbert series at t = 1."""
    if series.is_zero():
        return ORDER_INFINITY
    num = series.numerator
    mult = 0
    while True:
        q = lp_divexact(num, one_minus_t_pow(1))
        if q is None:
            break
        num = {e: int(c) if isinstance(c, Fraction) else c for e, c in q.items()}
        mult += 1
    return mult - len(series.den)


def expand_at_one(series: HilbertSeries, precision: int) -> LaurentExpansion:
    """Exact expansion around t = 1 to the given coefficient window."""
    if precision < 0:
        raise ValueError("precision must be nonnegative")
    if series.is_zero():
        return LaurentExpansion.zero()
    num = dict(series.numerator)
    mult = 0
    while True:
        q = lp_divexact(num, one_minus_t_pow(1))
        if q is None:
            break
        num = q
        mult += 1
    order = mult - len(series.den)

    K = precision
    # numerator evaluated at t = 1-u, truncated to u^K
    npoly = [Fraction(0)] * (K + 1)
    for e, c in num.items():
        c = Fraction(c)
        if e >= 0:
            for k in range(min(e, K) + 1):
                npoly[k] += c * comb(e, k) * (-1) ** k
        else:
            for k in range(K + 1):
                npoly[k] += c * comb(-e + k - 1, k)
    # denominator unit parts: (1-(1-u)^s)/u = s - C(s,2)u + ...
    unit = [Fraction(1)] + [Fraction(0)] * K
    for s in series.den:
        us = [
            Fraction(comb(s, k + 1) * (-1) ** k) for k in range(K + 1)
        ]
        merged = [Fraction(0)] * (K + 1)
        for i, a in enumerate(unit):
            if a:
                for j in range(K + 1 - i):
                    merged[i + j] += a * us[j]
        unit = merged
    inv = [Fraction(0)] * (K + 1)
    inv[0] = 1 / unit[0]
    for k in range(1, K + 1):
        s = Fraction(0)
        for i in range(1, k + 1):
            s += unit[i] * inv[k - i]
        inv[k] = -s / unit[0]
    coeffs = {}
    for k in range(K + 1):
        c = sum((npoly[i] * inv[k - i] for i in range(k + 1)), Fraction(0))
        if c:
            coeffs[order + k] = c
    return LaurentExpansion(order, coeffs, K)


def laurent_arith(a: LaurentExpansion, b: LaurentExpansion, op: str) -> LaurentExpansion:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def series_g(series: HilbertSeries, n: int, extra_precision: int = 2) -> Fraction:
    """g^n of a Hilbert series, exactly."""
    o = series_order(series)
    if o == ORDER_INFINITY or -n < o:
        return Fraction(0)
    return expand_at_one(series, max(-n - o, 0) + extra_precision).g(n)
