"""Polynomials in one variable q with exact integer coefficients."""
from __future__ import annotations

import json
from fractions import Fraction
from itertools import accumulate
from typing import Iterable, Sequence

from .core import BppError

__all__ = ["QPolynomial", "NonzeroRemainder", "DomainError", "frac_str", "parse_frac"]


class NonzeroRemainder(BppError, ArithmeticError):
    """A division that must be exact left a remainder."""


class DomainError(BppError, ValueError):
    pass


def frac_str(x) -> str:
    """Serialize a rational as ``"num/den"``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text: str) -> Fraction:
    return Fraction(text)


class QPolynomial:
    """Immutable integer polynomial, constant term first.

    Trailing zeros are stripped on construction, so the zero polynomial has
    an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("QPolynomial is immutable")

    @classmethod
    def q_integer(cls, n: int) -> "QPolynomial":
        """``1 + q + ... + q^(n-1)``."""
        if n <= 0:
            raise DomainError(f"q-integer needs n >= 1, got {n}")
        return cls([1] * n)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k: int) -> int:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def __eq__(self, other):
        if isinstance(other, QPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == QPolynomial([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"QPolynomial({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                body = str(c)
            else:
                mono = "q" if k == 1 else f"q^{k}"
                body = mono if c == 1 else f"{c}*{mono}"
            terms.append(body)
        return " + ".join(terms).replace("+ -", "- ")

    def __call__(self, q):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        n = max(len(self), len(other))
        return QPolynomial(self[k] + other[k] for k in range(n))

    def __sub__(self, other: "QPolynomial") -> "QPolynomial":
        n = max(len(self), len(other))
        return QPolynomial(self[k] - other[k] for k in range(n))

    def __mul__(self, other: "QPolynomial") -> "QPolynomial":
        if not isinstance(other, QPolynomial):
            other = QPolynomial([other])
        f, g = self.coeffs, other.coeffs
        if not f or not g:
            return QPolynomial()
        if all(c == 1 for c in g):
            return self.times_q_integer(len(g))
        if all(c == 1 for c in f):
            return other.times_q_integer(len(f))
        out = [0] * (len(f) + len(g) - 1)
        for i, fi in enumerate(f):
            if fi:
                for j, gj in enumerate(g):
                    out[i + j] += fi * gj
        return QPolynomial(out)

    __rmul__ = __mul__

    def times_q_integer(self, n: int) -> "QPolynomial":
        """Multiply by ``n_q`` using window sums (same result as schoolbook)."""
        if n <= 0:
            raise DomainError(f"q-integer needs n >= 1, got {n}")
        f = self.coeffs
        pre = [0, *accumulate(f)]
        m = len(f)
        return QPolynomial(pre[min(k + 1, m)] - pre[max(0, k - n + 1)] for k in range(m + n - 1))

    def shift(self, k: int) -> "QPolynomial":
        """Multiply by ``q^k``."""
        if not self.coeffs:
            return self
        return QPolynomial((0,) * k + self.coeffs)

    def divmod(self, divisor: "QPolynomial") -> tuple["QPolynomial", "QPolynomial"]:
        """Long division by a polynomial with leading coefficient +-1."""
        d = divisor.coeffs
        if not d:
            raise ZeroDivisionError("division by the zero polynomial")
        lead = d[-1]
        if lead not in (1, -1):
            raise DomainError("divisor must have leading coefficient 1 or -1")
        rem = list(self.coeffs)
        dd = len(d) - 1
        if len(rem) - 1 < dd:
            return QPolynomial(), QPolynomial(rem)
        quot = [0] * (len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            t = rem[k] * lead
            if t:
                quot[k - dd] = t
                for m, dm in enumerate(d):
                    rem[k - dd + m] -= t * dm
        return QPolynomial(quot), QPolynomial(rem[:dd])

    def exact_div(self, divisor: "QPolynomial") -> "QPolynomial":
        quot, rem = self.divmod(divisor)
        if rem.coeffs:
            raise NonzeroRemainder(f"division by {divisor} leaves remainder {rem}")
        return quot

    def __floordiv__(self, divisor: "QPolynomial") -> "QPolynomial":
        return self.divmod(divisor)[0]

    def __mod__(self, divisor: "QPolynomial") -> "QPolynomial":
        return self.divmod(divisor)[1]

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "QPolynomial":
        return cls(int(c) for c in data)

    def dumps(self) -> str:
        return json.dumps(self.to_json())
