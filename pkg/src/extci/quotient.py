"""Graded quotient rings R = Q/I with canonical normal-form arithmetic.

Elements of R are represented by their normal forms modulo a reduced
Groebner basis of I, computed once per ring.  Generators must be
homogeneous and lie in the square of the irrelevant maximal ideal.
"""

from __future__ import annotations

from .groebner import buchberger
from .poly import PolyRing, Polynomial


class QuotientRing:
    is_quotient = True

    def __init__(self, base: PolyRing, generators, check_regular: bool = False):
        if not isinstance(base, PolyRing):
            raise TypeError("quotients are taken of free polynomial rings")
        gens = []
        for g in generators:
            if not isinstance(g, Polynomial):
                g = base.poly(g)
            if g.ring != base:
                raise ValueError("ring mismatch in ideal generators")
            if g.is_zero():
                raise ValueError("zero ideal generator")
            if g.is_homogeneous() is None:
                raise ValueError(f"ideal generator {g!r} is not homogeneous")
            if any(sum(mon) < 2 for mon in g.terms):
                raise ValueError(
                    f"ideal generator {g!r} is not inside the square of the "
                    "irrelevant maximal ideal"
                )
            gens.append(g)
        self.base = base
        self.generators = tuple(gens)
        self.generator_degrees = tuple(g.is_homogeneous() for g in gens)
        self.field = base.field
        self.names = base.names
        self.degrees = base.degrees
        self.nvars = base.nvars
        self.order = base.order
        self._zero_mon = base._zero_mon
        self.ideal_groebner = buchberger(list(gens), ring=base)
        self.ci_verified = False
        if check_regular:
            self.verify_regular_sequence()

    # -- complete-intersection data -------------------------------------------

    @property
    def codimension(self) -> int:
        return len(self.generators)

    def verify_regular_sequence(self) -> bool:
        """Certify the generators form a regular sequence (Hilbert criterion).

        The quotient's Hilbert series must equal
        prod(1 - t^{e_i}) / prod(1 - t^{deg x_l}) exactly.
        """
        from .hilbert import HilbertSeries
        from .modules import free_module_presentation, hilbert_series

        actual = hilbert_series(free_module_presentation(self, (0,)))
        num = HilbertSeries.one()
        for e in self.generator_degrees:
            num = num * HilbertSeries({0: 1, e: -1}, ())
        expected = num * HilbertSeries.one_over(self.base.degrees)
        if actual != expected:
            raise ValueError("ideal generators are not a regular sequence")
        self.ci_verified = True
        return True

    # -- element arithmetic -----------------------------------------------------

    def nf(self, p: Polynomial) -> Polynomial:
        return self.ideal_groebner.normal_form(p)

    def mul(self, a: Polynomial, b: Polynomial) -> Polynomial:
        return self.nf(a * b)

    @property
    def zero(self) -> Polynomial:
        return self.base.zero

    @property
    def one(self) -> Polynomial:
        return self.base.one

    def variable(self, i: int) -> Polynomial:
        return self.nf(self.base.variable(i))

    def variables(self):
        return [self.variable(i) for i in range(self.nvars)]

    def poly(self, text: str) -> Polynomial:
        return self.nf(self.base.poly(text))

    def wdeg(self, mon) -> int:
        return self.base.wdeg(mon)

    def order_key(self, mon):
        return self.base.order_key(mon)

    def denominator_exponents(self) -> tuple:
        return self.base.degrees

    def is_standard_monomial(self, mon) -> bool:
        from .poly import mon_divides

        for g in self.ideal_groebner.generators:
            lead = g.leading()
            if lead and mon_divides(lead[0], mon):
                return False
        return True

    def __repr__(self) -> str:
        gs = ", ".join(repr(g) for g in self.generators)
        return f"{self.base!r}/({gs})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QuotientRing)
            and self.base == other.base
            and self.generators == other.generators
        )

    def __hash__(self) -> int:
        return hash((self.base, self.generators))
