"""Sparse multivariate polynomials over weighted-degree graded rings.

Monomials are dense exponent tuples; polynomials are immutable dicts
mapping exponent tuple -> nonzero coefficient.  The monomial order is
weighted-degree reverse lexicographic, which is degree-compatible with
the weighted grading.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .fields import QQ, PrimeField, RationalField


# ---------------------------------------------------------------------------
# monomial helpers (exponent tuples)

def mon_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))

def mon_divides(a: tuple, b: tuple) -> bool:
    """True when the monomial a divides b."""
    return all(x <= y for x, y in zip(a, b))

def mon_div(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))

def mon_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


class PolyRing:
    """A polynomial ring with named variables of positive weighted degree.

    The ring owns the monomial order and the weighted degree function; all
    polynomial values are tied to one ring instance and operations across
    distinct rings raise.
    """

    is_quotient = False

    def __init__(self, names, degrees=None, field=QQ, order: str = "grevlex"):
        names = list(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        if not names:
            raise ValueError("a polynomial ring needs at least one variable")
        if degrees is None:
            degrees = [1] * len(names)
        degrees = list(degrees)
        if len(degrees) != len(names):
            raise ValueError("one degree per variable required")
        if any((not isinstance(d, int)) or d < 1 for d in degrees):
            raise ValueError("variable degrees must be positive integers")
        if not isinstance(field, (RationalField, PrimeField)):
            raise TypeError("field must be the rationals or a prime field")
        if order != "grevlex":
            raise ValueError(f"unsupported monomial order {order!r}")
        self.names = tuple(names)
        self.degrees = tuple(degrees)
        self.field = field
        self.order = order
        self.nvars = len(names)
        self._zero_mon = (0,) * self.nvars

    # -- grading and order --------------------------------------------------

    def wdeg(self, mon: tuple) -> int:
        return sum(e * d for e, d in zip(mon, self.degrees))

    def order_key(self, mon: tuple):
        # weighted degree first, ties by reverse lexicographic: the last
        # differing exponent smaller => the monomial is larger.
        return (self.wdeg(mon), tuple(-e for e in reversed(mon)))

    # -- element constructors ------------------------------------------------

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return Polynomial(self, {self._zero_mon: self.field.one})

    def variable(self, i: int) -> "Polynomial":
        mon = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {mon: self.field.one})

    def variables(self) -> list["Polynomial"]:
        return [self.variable(i) for i in range(self.nvars)]

    def monomial(self, exponents: Iterable[int], coeff=1) -> "Polynomial":
        mon = tuple(exponents)
        if len(mon) != self.nvars:
            raise ValueError("exponent vector has wrong width")
        if any(e < 0 for e in mon):
            raise ValueError("negative exponent")
        c = self.field(coeff)
        if not c:
            return self.zero
        return Polynomial(self, {mon: c})

    def from_terms(self, terms) -> "Polynomial":
        out = {}
        for mon, coeff in dict(terms).items():
            c = self.field(coeff)
            if c:
                out[tuple(mon)] = c
        return Polynomial(self, out)

    def constant(self, value) -> "Polynomial":
        return self.from_terms({self._zero_mon: value})

    def poly(self, text: str) -> "Polynomial":
        from .dsl import parse_poly_text

        return parse_poly_text(self, text)

    # -- structural helpers --------------------------------------------------

    def quotient(self, generators, check_regular: bool = False):
        from .quotient import QuotientRing

        return QuotientRing(self, generators, check_regular=check_regular)

    @property
    def base(self) -> "PolyRing":
        return self

    def nf(self, p: "Polynomial") -> "Polynomial":
        """Normal form; the identity on a free polynomial ring."""
        return p

    def mul(self, a: "Polynomial", b: "Polynomial") -> "Polynomial":
        return a * b

    def denominator_exponents(self) -> tuple:
        """Weights s_i with H(ring ambient, t) = 1/prod(1 - t^{s_i})."""
        return self.degrees

    def __repr__(self) -> str:
        vs = ", ".join(
            n if d == 1 else f"{n}^{d}" for n, d in zip(self.names, self.degrees)
        )
        return f"{self.field!r}[{vs}]"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyRing)
            and not other.is_quotient
            and self.names == other.names
            and self.degrees == other.degrees
            and self.field == other.field
        )

    def __hash__(self) -> int:
        return hash((self.names, self.degrees, self.field))


def make_ring(names, degrees=None, field=QQ, order: str = "grevlex") -> PolyRing:
    """Build a graded polynomial ring (raises on invalid ring data)."""
    return PolyRing(names, degrees=degrees, field=field, order=order)


class Polynomial:
    """An immutable sparse polynomial attached to a ring."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_homogeneous(self) -> Optional[int]:
        """Weighted degree if homogeneous, else None.

        The zero polynomial counts as homogeneous of degree 0.
        """
        if not self.terms:
            return 0
        degs = {self.ring.wdeg(m) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def degree(self) -> Optional[int]:
        """Maximum weighted degree of the support; None for zero."""
        if not self.terms:
            return None
        return max(self.ring.wdeg(m) for m in self.terms)

    def is_unit_scalar(self) -> bool:
        """True for a nonzero constant (degree-0 unit)."""
        return len(self.terms) == 1 and self.ring._zero_mon in self.terms

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.ring is not other.ring and self.ring != other.ring:
            raise ValueError("ring mismatch")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(self.ring, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        if not self.terms or not other.terms:
            return self.ring.zero
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mon_mul(m1, m2)
                c = c1 * c2
                s = out.get(m)
                if s is None:
                    out[m] = c
                else:
                    s = s + c
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return Polynomial(self.ring, out)

    def scale(self, coeff) -> "Polynomial":
        c = self.ring.field(coeff)
        if not c:
            return self.ring.zero
        return Polynomial(self.ring, {m: v * c for m, v in self.terms.items()})

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_monomial(self, mon: tuple, coeff) -> "Polynomial":
        c = self.ring.field(coeff)
        if not c or not self.terms:
            return self.ring.zero
        return Polynomial(
            self.ring, {mon_mul(m, mon): v * c for m, v in self.terms.items()}
        )

    # -- order-dependent views -------------------------------------------------

    def sorted_terms(self) -> list:
        """Terms in strictly decreasing monomial order."""
        key = self.ring.order_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading(self):
        """(monomial, coefficient) of the leading term; None for zero."""
        if not self.terms:
            return None
        key = self.ring.order_key
        m = max(self.terms, key=key)
        return m, self.terms[m]

    # -- comparisons / hashing ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            if other == 0:
                return not self.terms
            return self.terms == {self.ring._zero_mon: self.ring.field(other)}
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for mon, coeff in self.sorted_terms():
            factors = []
            for name, e in zip(self.ring.names, mon):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if not body:
                bits.append(str(coeff))
            elif coeff == 1:
                bits.append(body)
            elif coeff == -1:
                bits.append(f"-{body}")
            else:
                bits.append(f"{coeff}*{body}")
        s = " + ".join(bits)
        return s.replace("+ -", "- ")


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    """Ring arithmetic dispatch by operation name."""
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale":
        lead = g.leading()
        if g.terms and not g.is_unit_scalar():
            raise ValueError("scale expects a constant second argument")
        return f.scale(lead[1]) if lead else f.ring.zero
    raise ValueError(f"unknown operation {op!r}")


def is_homogeneous(f: Polynomial) -> Optional[int]:
    return f.is_homogeneous()


def random_homogeneous(ring: PolyRing, degree: int, rng, density: Fraction = None):
    """Random homogeneous polynomial of the given weighted degree (tests)."""
    from .degreewise import monomials_of_degree

    mons = monomials_of_degree(ring, degree)
    terms = {}
    for m in mons:
        c = rng.randint(-4, 4)
        if c:
            terms[m] = c
    return ring.from_terms(terms)
