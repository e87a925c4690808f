"""Univariate rational polynomials and sigma-forms.

A sigma-form is ``sigma(u)**k * N(u) / u**d`` with
``sigma(u) = 1/(1 + 2u^2 - 2u^4)`` and ``N`` a rational polynomial.  All
operator-stage remainders of the reduction live in this shape.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce as _fold
from typing import Iterable, Sequence


def _F(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RationalPoly:
    """Polynomial with Fraction coefficients in ascending degree.

    ``var`` is a descriptive tag (``"h"`` or ``"u"``); arithmetic between
    polynomials with different tags is refused so that an ``h``-polynomial is
    never mixed up with its ``u``-image.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "h"):
        c = [_F(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)
        self.var = var

    @classmethod
    def monomial(cls, k: int, coeff=1, var: str = "h") -> "RationalPoly":
        return cls([0] * k + [coeff], var)

    @classmethod
    def const(cls, c, var: str = "h") -> "RationalPoly":
        return cls([c], var)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def _check(self, other: "RationalPoly"):
        if other.var != self.var and other.coeffs and self.coeffs:
            raise ValueError(f"mixing polynomials in {self.var} and {other.var}")

    def _lift(self, other) -> "RationalPoly":
        if isinstance(other, RationalPoly):
            self._check(other)
            return other
        return RationalPoly([other], self.var)

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly([self[k] + other[k] for k in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, RationalPoly):
            other = _F(other)
            return RationalPoly([c * other for c in self.coeffs], self.var)
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return RationalPoly((), self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return RationalPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = RationalPoly([1], self.var)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, RationalPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RationalPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def derivative(self) -> "RationalPoly":
        return RationalPoly([k * c for k, c in enumerate(self.coeffs)][1:], self.var)

    def compose(self, inner: "RationalPoly") -> "RationalPoly":
        """``self(inner)``; the result carries ``inner``'s variable tag."""
        out = RationalPoly((), inner.var)
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def divmod(self, other: "RationalPoly"):
        self._check(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return RationalPoly((), self.var), self
        lead = other.coeffs[-1]
        quo = [Fraction(0)] * (dq + 1)
        for k in range(dq, -1, -1):
            t = rem[k + len(other.coeffs) - 1] / lead
            quo[k] = t
            if t:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= t * b
        return RationalPoly(quo, self.var), RationalPoly(rem, self.var)

    def exact_div(self, other: "RationalPoly") -> "RationalPoly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("polynomial division leaves a remainder")
        return q

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + (float(c) if isinstance(x, float) else c)
        return acc

    def evaluate(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def evaluate_mp(self, x, mp):
        acc = mp.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + mp.mpf(c.numerator) / c.denominator
        return acc

    def is_odd(self) -> bool:
        return all(c == 0 for k, c in enumerate(self.coeffs) if k % 2 == 0)

    def is_even(self) -> bool:
        return all(c == 0 for k, c in enumerate(self.coeffs) if k % 2 == 1)

    def low_order(self) -> int:
        """Index of the lowest nonzero coefficient (0 for the zero polynomial)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return 0

    def primitive(self) -> "RationalPoly":
        """Scale to coprime integer coefficients (sign preserved)."""
        if not self.coeffs:
            return self
        lcm = _fold(lambda a, b: a * b // math.gcd(a, b),
                    (c.denominator for c in self.coeffs), 1)
        ints = [int(c * lcm) for c in self.coeffs]
        g = _fold(math.gcd, ints)
        return RationalPoly([Fraction(i, g) for i in ints], self.var)

    def to_json(self) -> list:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str], var: str = "h") -> "RationalPoly":
        return cls([Fraction(s) for s in data], var)

    def __repr__(self):
        return f"RationalPoly({[str(c) for c in self.coeffs]}, var={self.var!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*{self.var}")
            else:
                terms.append(f"{c}*{self.var}^{k}")
        return " + ".join(terms)


U = RationalPoly([0, 1], "u")
H = RationalPoly([0, 1], "h")
#: h as a polynomial in u on the switching curve x = y^2
H_OF_U = RationalPoly([0, 0, Fraction(1, 2), 0, Fraction(1, 2), 0, Fraction(-1, 3)], "u")
#: 1/sigma(u) = 1 + 2u^2 - 2u^4
SIGMA_INV = RationalPoly([1, 0, 2, 0, -2], "u")
D_H = RationalPoly([0, -1, 6], "h")


def to_u(p: RationalPoly) -> RationalPoly:
    """Substitute ``h = u^2/2 + u^4/2 - u^6/3`` into an h-polynomial."""
    if p.var == "u":
        return p
    return p.compose(H_OF_U)


class SigmaForm:
    """``sigma(u)**k * numerator(u) / u**d`` with exact rational data.

    Construction reduces the u-denominator as far as the numerator allows;
    the sigma power is never reduced (it only grows under the operations).
    """

    __slots__ = ("k", "num", "d")

    def __init__(self, k: int, num: RationalPoly, d: int = 0):
        if num.var != "u":
            num = to_u(num)
        if k < 0 or d < 0:
            raise ValueError("sigma power and u-denominator must be >= 0")
        if not num:
            d = 0
        else:
            low = min(num.low_order(), d)
            if low:
                num = RationalPoly(num.coeffs[low:], "u")
                d -= low
        self.k = k
        self.num = num
        self.d = d

    @classmethod
    def zero(cls) -> "SigmaForm":
        return cls(0, RationalPoly((), "u"), 0)

    @classmethod
    def poly(cls, p: RationalPoly) -> "SigmaForm":
        return cls(0, to_u(p), 0)

    def is_zero(self) -> bool:
        return not self.num

    def lifted(self, k: int, d: int) -> RationalPoly:
        """Numerator of the same value written as ``sigma**k * N / u**d``."""
        if k < self.k or d < self.d:
            raise ValueError("can only lift to larger sigma power / u-denominator")
        return self.num * SIGMA_INV ** (k - self.k) * RationalPoly.monomial(d - self.d, 1, "u")

    def __add__(self, other):
        if not isinstance(other, SigmaForm):
            other = SigmaForm.poly(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        k, d = max(self.k, other.k), max(self.d, other.d)
        return SigmaForm(k, self.lifted(k, d) + other.lifted(k, d), d)

    __radd__ = __add__

    def __neg__(self):
        return SigmaForm(self.k, -self.num, self.d)

    def __sub__(self, other):
        if not isinstance(other, SigmaForm):
            other = SigmaForm.poly(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SigmaForm):
            return SigmaForm(self.k + other.k, self.num * other.num, self.d + other.d)
        if isinstance(other, RationalPoly):
            return SigmaForm(self.k, self.num * to_u(other), self.d)
        return SigmaForm(self.k, self.num * _F(other), self.d)

    __rmul__ = __mul__

    def du(self) -> "SigmaForm":
        """Derivative with respect to u."""
        n, k, d = self.num, self.k, self.d
        if k == 0:
            return SigmaForm(0, U * n.derivative() - d * n, d + 1)
        # (sigma^k)' = -k sigma^(k+1) (4u - 8u^3)
        dsig = RationalPoly([0, 4, 0, -8], "u")
        new = (-k) * dsig * U * n + SIGMA_INV * (U * n.derivative() - d * n)
        return SigmaForm(k + 1, new, d + 1)

    def times_dudh(self) -> "SigmaForm":
        """Multiply by du/dh = sigma(u)/u (valid on x = y^2)."""
        return SigmaForm(self.k + 1, self.num, self.d + 1)

    def dh(self) -> "SigmaForm":
        """Derivative with respect to h along u = u(h)."""
        return self.du().times_dudh()

    def divide_poly(self, p: RationalPoly) -> "SigmaForm":
        """Exact division by a polynomial in u (u-power factors go to d)."""
        p = to_u(p)
        low = p.low_order()
        core = RationalPoly(p.coeffs[low:], "u")
        return SigmaForm(self.k, self.num.exact_div(core), self.d + low)

    def numerator_as(self, k: int, d: int) -> RationalPoly:
        return self.lifted(k, d)

    def __call__(self, u: float) -> float:
        return (self.num.evaluate(u) / (1.0 + 2 * u * u - 2 * u ** 4) ** self.k) / u ** self.d

    def evaluate_mp(self, u, mp):
        s = 1 / (1 + 2 * u * u - 2 * u ** 4)
        return s ** self.k * self.num.evaluate_mp(u, mp) / u ** self.d

    def __eq__(self, other):
        if not isinstance(other, SigmaForm):
            return NotImplemented
        k, d = max(self.k, other.k), max(self.d, other.d)
        return self.lifted(k, d) == other.lifted(k, d)

    def __hash__(self):
        return hash((self.k, self.d, self.num.coeffs))

    def to_json(self) -> dict:
        return {"sigma_power": self.k, "u_denominator_power": self.d,
                "numerator": self.num.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "SigmaForm":
        return cls(data["sigma_power"], RationalPoly.from_json(data["numerator"], "u"),
                   data["u_denominator_power"])

    def __repr__(self):
        return f"SigmaForm(k={self.k}, d={self.d}, deg={self.num.degree})"


def poly_from_sequence(coeffs: Sequence, var: str) -> RationalPoly:
    return RationalPoly([Fraction(c) for c in coeffs], var)
