"""Exact arithmetic in a real quadratic field Q(sqrt(d))."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from sympy import factorint


def squarefree_split(n: int) -> tuple[int, int]:
    """Write ``n > 0`` as ``s*s*d`` with ``d`` squarefree; returns ``(s, d)``."""
    if n <= 0:
        raise ValueError("need a positive integer")
    s, d = 1, 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return s, d


@dataclass(frozen=True)
class QuadraticNumber:
    """``a + b*sqrt(d)`` with rational ``a``, ``b`` and squarefree ``d > 1``."""

    a: Fraction
    b: Fraction
    d: int

    @classmethod
    def sqrt(cls, n: int) -> QuadraticNumber | Fraction:
        s, d = squarefree_split(n)
        if d == 1:
            return Fraction(s)
        return cls(Fraction(0), Fraction(s), d)

    def _coerce(self, other) -> QuadraticNumber:
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise ValueError(f"mixing Q(sqrt({self.d})) and Q(sqrt({other.d}))")
            return other
        if isinstance(other, (int, Rational)):
            return QuadraticNumber(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadraticNumber:
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        c = self * o.conjugate()
        return QuadraticNumber(c.a / n, c.b / n, self.d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return 1 / (self ** -e)
        result = QuadraticNumber(Fraction(1), Fraction(0), self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            base = base * base
        return result

    def sign(self) -> int:
        # sign of a + b*sqrt(d) without floating point
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = self.a * self.a - self.b * self.b * self.d
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, float) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        b = "" if abs(self.b) == 1 else f"{abs(self.b)}*"
        surd = f"{b}sqrt({self.d})"
        if self.a == 0:
            return surd if self.b > 0 else f"-{surd}"
        op = "+" if self.b > 0 else "-"
        return f"{self.a} {op} {surd}"
