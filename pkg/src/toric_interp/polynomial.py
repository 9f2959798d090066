"""Bivariate polynomials with integer coefficients, stored sparsely."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Monomial = tuple[int, int]


class IntPolynomial:
    """Immutable sparse polynomial in x, y over the integers.

    ``terms`` maps exponent pairs ``(a, b)`` to nonzero coefficients of
    ``x**a * y**b``.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, int] = {}
        for mono, c in items:
            if c:
                acc[mono] = acc.get(mono, 0) + c
        self.terms = {m: c for m, c in acc.items() if c}
        self._hash = None

    @classmethod
    def monomial(cls, a: int, b: int, coeff: int = 1) -> "IntPolynomial":
        return cls({(a, b): coeff})

    @classmethod
    def constant(cls, c: int) -> "IntPolynomial":
        return cls({(0, 0): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPolynomial.constant(other)
        return isinstance(other, IntPolynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return IntPolynomial(out)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial({m: c * other for m, c in self.terms.items()})
        out: dict[Monomial, int] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        return IntPolynomial(out)

    __rmul__ = __mul__

    def total_degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def leading(self) -> tuple[Monomial, int]:
        m = max(self.terms)
        return m, self.terms[m]

    def diff(self, i: int, j: int) -> "IntPolynomial":
        """The mixed partial d^(i+j) / dx^i dy^j."""
        out = {}
        for (a, b), c in self.terms.items():
            if a < i or b < j:
                continue
            k = c
            for t in range(i):
                k *= a - t
            for t in range(j):
                k *= b - t
            out[(a - i, b - j)] = k
        return IntPolynomial(out)

    def evaluate(self, x, y):
        return sum((c * x**a * y**b for (a, b), c in self.terms.items()), Fraction(0))

    def exact_div(self, other: "IntPolynomial") -> "IntPolynomial":
        """Quotient of an exact division; raises ArithmeticError otherwise."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = dict(self.terms)
        (la, lb), lc = other.leading()
        quot: dict[Monomial, int] = {}
        while rem:
            (a, b) = max(rem)
            c = rem[(a, b)]
            if a < la or b < lb or c % lc:
                raise ArithmeticError("division is not exact")
            qm, qc = (a - la, b - lb), c // lc
            quot[qm] = qc
            for (oa, ob), oc in other.terms.items():
                key = (oa + qm[0], ob + qm[1])
                v = rem.get(key, 0) - qc * oc
                if v:
                    rem[key] = v
                else:
                    rem.pop(key, None)
        return IntPolynomial(quot)

    def __repr__(self) -> str:
        return f"IntPolynomial({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), key=lambda t: (-(t[0][0] + t[0][1]), t[0])):
            mono = "*".join(s for s in (_pow("x", a), _pow("y", b)) if s)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _pow(v: str, e: int) -> str:
    if e == 0:
        return ""
    return v if e == 1 else f"{v}^{e}"


ZERO = IntPolynomial()
ONE = IntPolynomial.constant(1)
