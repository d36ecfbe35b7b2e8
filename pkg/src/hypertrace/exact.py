"""
Exact arithmetic: integers and rationals (Python ``int`` / ``Fraction``),
the quadratic field Q(sqrt 5), Bareiss determinants and exact linear solves.

Nothing in here touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from .errors import SingularMatrixError

__all__ = [
    "Quad5",
    "PHI_PLUS",
    "PHI_MINUS",
    "factorial",
    "binomial",
    "multinomial",
    "det_exact",
    "det_cofactor",
    "solve_linear_exact",
    "mat_vec",
    "quad_mul",
    "quad_pow",
    "quad_conj",
    "rat_to_str",
    "rat_from_str",
]


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    return math.factorial(n)


def binomial(n: int, r: int) -> int:
    if n < 0 or r < 0:
        raise ValueError(f"binomial({n}, {r}) needs nonnegative arguments")
    if r > n:
        raise ValueError(f"binomial({n}, {r}): r exceeds n")
    return math.comb(n, r)


def multinomial(parts: Sequence[int]) -> int:
    """(sum parts)! / prod(p!), built up from binomials."""
    total = 0
    out = 1
    for p in parts:
        total += p
        out *= math.comb(total, p)
    return out


# ---------------------------------------------------------------------------
# rationals on the wire

def rat_to_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rat_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


# ---------------------------------------------------------------------------
# Q(sqrt 5)

def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


@dataclass(frozen=True)
class Quad5:
    """The number a + b*sqrt(5) with rational a, b."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", _as_fraction(self.a))
        object.__setattr__(self, "b", _as_fraction(self.b))

    @classmethod
    def coerce(cls, x) -> "Quad5":
        if isinstance(x, Quad5):
            return x
        return cls(_as_fraction(x), Fraction(0))

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "Quad5":
        return Quad5(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm x * conj(x), a rational."""
        return self.a * self.a - 5 * self.b * self.b

    def __add__(self, other):
        try:
            o = Quad5.coerce(other)
        except TypeError:
            return NotImplemented
        return Quad5(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Quad5(-self.a, -self.b)

    def __sub__(self, other):
        try:
            o = Quad5.coerce(other)
        except TypeError:
            return NotImplemented
        return Quad5(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        try:
            o = Quad5.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = Quad5.coerce(other)
        except TypeError:
            return NotImplemented
        return Quad5(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = Quad5.coerce(other)
        except TypeError:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 5)")
        num = self * o.conjugate()
        return Quad5(num.a / n, num.b / n)

    def __rtruediv__(self, other):
        try:
            o = Quad5.coerce(other)
        except TypeError:
            return NotImplemented
        return o / self

    def __pow__(self, d: int):
        if not isinstance(d, int):
            return NotImplemented
        if d < 0:
            return Quad5(1) / (self ** -d)
        result = Quad5(1)
        base = self
        while d:
            if d & 1:
                result = result * base
            base = base * base
            d >>= 1
        return result

    def __eq__(self, other):
        try:
            o = Quad5.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def sort_key(self):
        """Key ordering by real value; exact, no floats."""
        return _RealKey(self)

    def __repr__(self):
        return f"Quad5({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        mag = abs(self.b)
        tail = "√5" if mag == 1 else f"{mag}·√5"
        if self.a == 0:
            return ("-" if self.b < 0 else "") + tail
        return f"{self.a} {sign} {tail}"

    def to_json(self) -> dict:
        return {"a": rat_to_str(self.a), "b": rat_to_str(self.b)}

    @classmethod
    def from_json(cls, obj: dict) -> "Quad5":
        return cls(rat_from_str(obj["a"]), rat_from_str(obj["b"]))


def _sign_quad(x: Quad5) -> int:
    """Sign of a + b*sqrt5 computed exactly."""
    a, b = x.a, x.b
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb or sa
    # opposite signs: compare a^2 with 5 b^2
    diff = a * a - 5 * b * b
    return sa if diff > 0 else (sb if diff < 0 else 0)


class _RealKey:
    __slots__ = ("x",)

    def __init__(self, x: Quad5):
        self.x = x

    def __lt__(self, other):
        return _sign_quad(self.x - other.x) < 0

    def __eq__(self, other):
        return self.x == other.x


PHI_PLUS = Quad5(Fraction(3, 2), Fraction(1, 2))
PHI_MINUS = Quad5(Fraction(3, 2), Fraction(-1, 2))


def quad_mul(x: Quad5, y: Quad5) -> Quad5:
    return Quad5.coerce(x) * Quad5.coerce(y)


def quad_pow(x: Quad5, d: int) -> Quad5:
    if d < 0:
        raise ValueError("quad_pow needs a nonnegative exponent")
    return Quad5.coerce(x) ** d


def quad_conj(x: Quad5) -> Quad5:
    return Quad5.coerce(x).conjugate()


# ---------------------------------------------------------------------------
# linear algebra

def det_exact(M: Sequence[Sequence[int]]) -> int:
    """
    Determinant of an integer matrix by Bareiss fraction-free elimination.
    Every intermediate division is exact.
    """
    n = len(M)
    if n == 0:
        return 1
    A = [list(map(int, row)) for row in M]
    if any(len(row) != n for row in A):
        raise ValueError("det_exact needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i = A[i]
            row_k = A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * A[n - 1][n - 1]


def det_cofactor(M: Sequence[Sequence]):
    """Laplace expansion along the first row. Exponential; for cross-checks only."""
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        if M[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * det_cofactor(minor)
        total += term if j % 2 == 0 else -term
    return total


def solve_linear_exact(A: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve A x = rhs over the rationals by Gauss-Jordan elimination."""
    n = len(A)
    if len(rhs) != n or any(len(row) != n for row in A):
        raise ValueError("solve_linear_exact needs a square system")
    aug = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [vr - f * vc for vr, vc in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def mat_vec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in A]
