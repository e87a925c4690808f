"""Exact arithmetic in the ring Q(sqrt2)[pi].

An :class:`ExactScalar` is a polynomial in the transcendental symbol ``pi``
whose coefficients live in the quadratic field Q(sqrt2).  Each coefficient is
stored as a pair ``(a, b)`` of :class:`fractions.Fraction` meaning
``a + b*sqrt2``.

The module also provides truncated power series with ExactScalar
coefficients (:class:`Series`) and fraction-free linear algebra
(:func:`bareiss_det`, :func:`cramer_solve`) over the ring.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]

SQRT2 = math.sqrt(2.0)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class QSqrt2:
    """Element ``a + b*sqrt2`` of the field Q(sqrt2)."""

    __slots__ = ("a", "b")

    def __init__(self, a: Rational = 0, b: Rational = 0):
        self.a = _frac(a)
        self.b = _frac(b)

    def __add__(self, other):
        other = _as_q(other)
        return QSqrt2(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_q(other)
        return QSqrt2(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return _as_q(other) - self

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __mul__(self, other):
        other = _as_q(other)
        return QSqrt2(self.a * other.a + 2 * self.b * other.b,
                      self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def inverse(self) -> "QSqrt2":
        norm = self.a * self.a - 2 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt2)")
        return QSqrt2(self.a / norm, -self.b / norm)

    def __truediv__(self, other):
        return self * _as_q(other).inverse()

    def __eq__(self, other):
        try:
            other = _as_q(other)
        except TypeError:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * SQRT2

    def conjugate(self) -> "QSqrt2":
        return QSqrt2(self.a, -self.b)

    def abs_equal(self, other) -> bool:
        """True when ``self == other`` or ``self == -other``."""
        other = _as_q(other)
        return self == other or self == -other

    def __repr__(self):
        return f"QSqrt2({self.a}, {self.b})"

    def __str__(self):
        return _fmt_q(self)


def _as_q(x) -> QSqrt2:
    if isinstance(x, QSqrt2):
        return x
    return QSqrt2(_frac(x), 0)


def _fmt_q(q: QSqrt2) -> str:
    if q.b == 0:
        return str(q.a)
    if q.a == 0:
        return f"{q.b}*sqrt2"
    sign = "-" if q.b < 0 else "+"
    return f"({q.a} {sign} {abs(q.b)}*sqrt2)"


class ExactScalar:
    """Polynomial in ``pi`` with Q(sqrt2) coefficients, ascending powers.

    Values are immutable; equality is exact coefficient-wise comparison.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_as_q(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self._c = tuple(c)

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, x: Rational) -> "ExactScalar":
        return cls([QSqrt2(x)])

    @classmethod
    def sqrt2(cls, x: Rational = 1) -> "ExactScalar":
        return cls([QSqrt2(0, x)])

    @classmethod
    def pi(cls, x: Rational = 1, power: int = 1) -> "ExactScalar":
        return cls([QSqrt2()] * power + [QSqrt2(x)])

    @classmethod
    def coerce(cls, x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        return cls([_as_q(x)])

    # -- structure --------------------------------------------------------
    @property
    def coeffs(self) -> tuple:
        return self._c

    def pi_degree(self) -> int:
        """Degree in pi; -1 for zero."""
        return len(self._c) - 1

    def coeff(self, k: int) -> QSqrt2:
        return self._c[k] if 0 <= k < len(self._c) else QSqrt2()

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = ExactScalar.coerce(other)
        n = max(len(self._c), len(other._c))
        return ExactScalar(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-c for c in self._c)

    def __sub__(self, other):
        return self + (-ExactScalar.coerce(other))

    def __rsub__(self, other):
        return ExactScalar.coerce(other) - self

    def __mul__(self, other):
        other = ExactScalar.coerce(other)
        if not self._c or not other._c:
            return ExactScalar()
        out = [QSqrt2() for _ in range(len(self._c) + len(other._c) - 1)]
        for i, a in enumerate(self._c):
            if not a:
                continue
            for j, b in enumerate(other._c):
                if b:
                    out[i + j] = out[i + j] + a * b
        return ExactScalar(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = ExactScalar.rational(1)
        for _ in range(k):
            out = out * self
        return out

    def exact_div(self, other: "ExactScalar") -> "ExactScalar":
        """Exact polynomial division; raises ArithmeticError on a remainder."""
        other = ExactScalar.coerce(other)
        if not other._c:
            raise ZeroDivisionError("division by zero ExactScalar")
        rem = list(self._c)
        lead_inv = other._c[-1].inverse()
        dq = len(rem) - len(other._c)
        if dq < 0:
            if rem:
                raise ArithmeticError("inexact division in Q(sqrt2)[pi]")
            return ExactScalar()
        quo = [QSqrt2() for _ in range(dq + 1)]
        for k in range(dq, -1, -1):
            t = rem[k + len(other._c) - 1] * lead_inv
            quo[k] = t
            if t:
                for j, b in enumerate(other._c):
                    rem[k + j] = rem[k + j] - t * b
        if any(rem):
            raise ArithmeticError("inexact division in Q(sqrt2)[pi]")
        return ExactScalar(quo)

    def __eq__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __float__(self):
        return float(sum(float(c) * math.pi ** k for k, c in enumerate(self._c)))

    def to_mpf(self, mp):
        """Evaluate with an mpmath context ``mp`` at its working precision."""
        s2 = mp.sqrt(2)
        out = mp.mpf(0)
        for k, c in enumerate(self._c):
            out += (mp.mpf(c.a.numerator) / c.a.denominator
                    + mp.mpf(c.b.numerator) / c.b.denominator * s2) * mp.pi ** k
        return out

    def abs_equal(self, other) -> bool:
        other = ExactScalar.coerce(other)
        return self == other or self == -other

    def __repr__(self):
        return f"ExactScalar({str(self)!r})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k, c in enumerate(self._c):
            if not c:
                continue
            body = _fmt_q(c)
            if k == 0:
                parts.append(body)
            elif k == 1:
                parts.append(f"{body} * pi")
            else:
                parts.append(f"{body} * pi^{k}")
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "ExactScalar":
        """Inverse of ``str``; accepts the canonical output format only."""
        text = text.strip()
        if text == "0":
            return cls()
        out = cls()
        for term in _top_level_terms(text):
            m = re.fullmatch(r"(.+?)(?: \* pi(?:\^(\d+))?)?", term.strip())
            if m is None:
                raise ValueError(f"cannot parse term {term!r}")
            body, power = m.group(1), m.group(2)
            k = 0 if " * pi" not in term else int(power or 1)
            out = out + cls([QSqrt2()] * k + [_parse_q(body)])
        return out


def _top_level_terms(text: str) -> list:
    """Split on ``" + "`` outside parentheses."""
    terms, depth, start = [], 0, 0
    for k, ch in enumerate(text):
        depth += (ch == "(") - (ch == ")")
        if depth == 0 and text.startswith(" + ", k):
            terms.append(text[start:k])
            start = k + 3
    terms.append(text[start:])
    return terms


def _parse_q(body: str) -> QSqrt2:
    body = body.strip()
    if body.startswith("(") and body.endswith(")"):
        m = re.fullmatch(r"\((\S+) ([+-]) (\S+)\*sqrt2\)", body)
        if m is None:
            raise ValueError(f"cannot parse {body!r}")
        b = Fraction(m.group(3))
        return QSqrt2(Fraction(m.group(1)), b if m.group(2) == "+" else -b)
    if body.endswith("*sqrt2"):
        return QSqrt2(0, Fraction(body[:-6]))
    return QSqrt2(Fraction(body))


ZERO = ExactScalar()
ONE = ExactScalar.rational(1)


# ---------------------------------------------------------------------------
# truncated power series
# ---------------------------------------------------------------------------

class Series:
    """Truncated power series ``sum c[k] t^k`` for ``k <= order``.

    Coefficients are ExactScalar.  Arithmetic truncates to the smaller order
    of the operands.
    """

    __slots__ = ("c", "order")

    def __init__(self, coeffs: Sequence, order: int):
        c = [ExactScalar.coerce(x) for x in list(coeffs)[: order + 1]]
        c += [ZERO] * (order + 1 - len(c))
        self.c = c
        self.order = order

    @classmethod
    def variable(cls, order: int, scale=1) -> "Series":
        return cls([ZERO, ExactScalar.coerce(scale)], order)

    @classmethod
    def constant(cls, value, order: int) -> "Series":
        return cls([ExactScalar.coerce(value)], order)

    def __getitem__(self, k: int) -> ExactScalar:
        return self.c[k] if 0 <= k <= self.order else ZERO

    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.constant(other, self.order)
        n = min(self.order, other.order)
        return Series([self.c[k] + other.c[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return Series([-x for x in self.c], self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            other = ExactScalar.coerce(other)
            return Series([x * other for x in self.c], self.order)
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = ZERO
            for i in range(k + 1):
                if self.c[i] and other.c[k - i]:
                    acc = acc + self.c[i] * other.c[k - i]
            out.append(acc)
        return Series(out, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Series.constant(1, self.order)
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "Series":
        return Series([self.c[k] * k for k in range(1, self.order + 1)],
                      self.order - 1)

    def compose(self, inner: "Series") -> "Series":
        """``self(inner(t))``; ``inner`` must have zero constant term."""
        if inner[0]:
            raise ValueError("inner series must vanish at 0")
        n = min(self.order, inner.order)
        out = Series.constant(self.c[n], n)
        for k in range(n - 1, -1, -1):
            out = out * inner + self.c[k]
        return out

    def substitute_scale(self, factor) -> "Series":
        """Series of ``self(factor * t)``."""
        factor = ExactScalar.coerce(factor)
        out, p = [], ONE
        for x in self.c:
            out.append(x * p)
            p = p * factor
        return Series(out, self.order)

    def is_zero(self) -> bool:
        return not any(self.c)

    def evaluate(self, t: float) -> float:
        return sum(float(x) * t ** k for k, x in enumerate(self.c))

    def evaluate_mp(self, t, mp):
        out = mp.mpf(0)
        for k, x in enumerate(self.c):
            if x:
                out += x.to_mpf(mp) * t ** k
        return out

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and self.c == other.c

    def __repr__(self):
        return f"Series(order={self.order}, {[str(x) for x in self.c]})"


def revert(f: Series) -> Series:
    """Compositional inverse ``g`` with ``f(g(t)) = t`` through ``f.order``.

    ``f`` must have zero constant term and a unit-like linear coefficient in
    Q(sqrt2) (pi-free).
    """
    if f[0]:
        raise ValueError("series to revert must vanish at 0")
    lead = f[1]
    if lead.pi_degree() != 0:
        raise ValueError("linear coefficient must be a nonzero Q(sqrt2) constant")
    inv = ExactScalar([lead.coeff(0).inverse()])
    n = f.order
    g = Series([ZERO, inv], n)
    for k in range(2, n + 1):
        err = f.compose(g)[k]
        g.c[k] = -(err * inv)
    return g


# ---------------------------------------------------------------------------
# fraction-free linear algebra
# ---------------------------------------------------------------------------

def bareiss_det(matrix: Sequence[Sequence]) -> ExactScalar:
    """Determinant by Bareiss fraction-free elimination with exact division."""
    m = [[ExactScalar.coerce(x) for x in row] for row in matrix]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return ZERO
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev)
            m[i][k] = ZERO
        prev = m[k][k]
    det = m[n - 1][n - 1] if n else ONE
    return det if sign > 0 else -det


def cramer_solve(matrix: Sequence[Sequence], rhs: Sequence):
    """Solve ``A x = b`` exactly; returns ``(numerators, det)`` with x_i = N_i/det.

    Every quantity stays in Q(sqrt2)[pi], so the residual ``A N - det b`` can be
    checked for exact vanishing.
    """
    a = [[ExactScalar.coerce(x) for x in row] for row in matrix]
    b = [ExactScalar.coerce(x) for x in rhs]
    det = bareiss_det(a)
    if not det:
        raise ZeroDivisionError("singular system")
    nums = []
    for col in range(len(a)):
        ai = [row[:col] + [b[i]] + row[col + 1:] for i, row in enumerate(a)]
        nums.append(bareiss_det(ai))
    return nums, det
