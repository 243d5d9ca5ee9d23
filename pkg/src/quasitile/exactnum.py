"""Exact arithmetic in the real quadratic fields Q(sqrt 2) and Q(tau).

A :class:`QuadValue` is ``a + b*w`` with rational ``a``, ``b`` and
``w = sqrt(2)`` (``d == 2``) or ``w = tau = (1 + sqrt 5)/2`` (``d == 5``).
Plain ``int`` and :class:`fractions.Fraction` operands are promoted
automatically, so geometry code can mix rationals and quadratic values.

The vectorised helpers at the bottom decide signs of ``alpha + beta*w`` for
integer arrays; they are what makes window membership both exact and fast.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Union

import numpy as np

__all__ = [
    "QuadValue",
    "Scalar",
    "SQRT2",
    "TAU",
    "quad_add",
    "quad_mul",
    "quad_neg",
    "quad_sign",
    "quad_conjugate",
    "sign",
    "to_float",
    "as_scalar",
    "sign_array",
]

Rational = Union[int, Fraction]


def _norm(x: Rational) -> Rational:
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _rat(x) -> Rational:
    if isinstance(x, (int, Fraction)):
        return _norm(x)
    if isinstance(x, str):
        return _norm(Fraction(x))
    raise TypeError(f"not a rational: {x!r}")


class QuadValue:
    """Exact real number ``a + b*w`` in Q(sqrt 2) or Q(tau)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Rational = 0, b: Rational = 0, d: int = 2) -> None:
        if d not in (2, 5):
            raise ValueError(f"unsupported discriminant {d}; only 2 and 5")
        self.a = _rat(a)
        self.b = _rat(b)
        self.d = d

    @classmethod
    def _new(cls, a, b, d: int) -> QuadValue:
        # trusted constructor for arithmetic results
        obj = object.__new__(cls)
        if type(a) is Fraction and a.denominator == 1:
            a = a.numerator
        if type(b) is Fraction and b.denominator == 1:
            b = b.numerator
        obj.a = a
        obj.b = b
        obj.d = d
        return obj

    # --- coercion -------------------------------------------------------
    def _coerce(self, other) -> QuadValue | None:
        if isinstance(other, QuadValue):
            if other.d != self.d:
                raise ValueError(
                    f"mixed discriminants d={self.d} and d={other.d}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadValue._new(other, 0, self.d)
        return None

    # --- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadValue._new(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadValue._new(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadValue._new(o.a - self.a, o.b - self.b, self.d)

    def __neg__(self) -> QuadValue:
        return QuadValue._new(-self.a, -self.b, self.d)

    def __pos__(self) -> QuadValue:
        return self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadValue._new(self.a * other, self.b * other, self.d)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, e = self.a, self.b, o.a, o.b
        if self.d == 2:
            # w^2 = 2
            return QuadValue._new(a * c + 2 * b * e, a * e + b * c, 2)
        # w^2 = w + 1
        be = b * e
        return QuadValue._new(a * c + be, a * e + b * c + be, 5)

    __rmul__ = __mul__

    def norm(self) -> Rational:
        """Field norm ``x * conjugate(x)`` (a rational number)."""
        a, b = self.a, self.b
        if self.d == 2:
            return _norm(a * a - 2 * b * b)
        return _norm(a * a + a * b - b * b)

    def conjugate(self) -> QuadValue:
        if self.d == 2:
            return QuadValue(self.a, -self.b, 2)
        # tau -> 1 - tau
        return QuadValue(self.a + self.b, -self.b, 5)

    def inverse(self) -> QuadValue:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero QuadValue")
        c = self.conjugate()
        return QuadValue(Fraction(c.a) / n, Fraction(c.b) / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadValue(Fraction(self.a) / other, Fraction(self.b) / other, self.d)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> QuadValue:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadValue(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # --- order ----------------------------------------------------------
    def sign(self) -> int:
        return _sign_pq(*self._pq(), 2 if self.d == 2 else 5)

    def _pq(self) -> tuple[Rational, Rational]:
        """Return (p, q) with value == p + q*sqrt(D), D = 2 or 5."""
        if self.d == 2:
            return self.a, self.b
        half = Fraction(self.b, 2)
        return self.a + half, half

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadValue):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare QuadValue with {type(other).__name__}")
        return (self - o).sign()

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __abs__(self) -> QuadValue:
        return -self if self.sign() < 0 else self

    # --- conversion -----------------------------------------------------
    def __float__(self) -> float:
        return to_float(self)

    def __repr__(self) -> str:
        return f"QuadValue({self.a!s}, {self.b!s}, d={self.d})"

    def __str__(self) -> str:
        w = "√2" if self.d == 2 else "τ"
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}{w}"

    def to_json(self) -> list[str]:
        return [str(self.a), str(self.b)]

    @classmethod
    def from_json(cls, pair: Iterable, d: int) -> QuadValue:
        a, b = pair
        return cls(Fraction(a), Fraction(b), d)


Scalar = Union[int, Fraction, QuadValue]

SQRT2 = QuadValue(0, 1, 2)
TAU = QuadValue(0, 1, 5)


def _sign_pq(p: Rational, q: Rational, D: int | None = None) -> int:
    # sign of p + q*sqrt(D) without floating point
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    if D is None:
        raise AssertionError  # pragma: no cover
    lhs = p * p
    rhs = D * q * q
    if lhs > rhs:
        return sp
    if lhs < rhs:
        return sq
    return 0  # pragma: no cover - impossible for irrational sqrt(D)


def quad_sign(x: Scalar) -> int:
    """Exact sign of ``x`` (-1, 0 or +1)."""
    return sign(x)


def sign(x: Scalar) -> int:
    if isinstance(x, QuadValue):
        p, q = x._pq()
        return _sign_pq(p, q, 2 if x.d == 2 else 5)
    return (x > 0) - (x < 0)


def quad_add(x: QuadValue, y: QuadValue) -> QuadValue:
    _check_same(x, y)
    return x + y


def quad_mul(x: QuadValue, y: QuadValue) -> QuadValue:
    _check_same(x, y)
    return x * y


def quad_neg(x: QuadValue) -> QuadValue:
    return -x


def quad_conjugate(x: Scalar) -> Scalar:
    """Galois conjugation: sqrt 2 -> -sqrt 2, tau -> 1 - tau; rationals are fixed."""
    if isinstance(x, QuadValue):
        return x.conjugate()
    return x


def _check_same(x: QuadValue, y: QuadValue) -> None:
    if not (isinstance(x, QuadValue) and isinstance(y, QuadValue)):
        raise TypeError("QuadValue operands expected")
    if x.d != y.d:
        raise ValueError(f"mixed discriminants d={x.d} and d={y.d}")


def as_scalar(x, d: int | None) -> Scalar:
    """Lift ints/Fractions to QuadValue of discriminant ``d`` (``None`` keeps rationals)."""
    if isinstance(x, QuadValue):
        if d is not None and x.d != d:
            raise ValueError("discriminant mismatch")
        return x
    x = _rat(x)
    return x if d is None else QuadValue(x, 0, d)


def to_float(x: Scalar) -> float:
    """Float value of ``x`` with relative error below 2**-50.

    The irrational part is evaluated with integer square roots at a precision
    large enough to survive cancellation, then rounded once.
    """
    if not isinstance(x, QuadValue):
        return float(x)
    p, q = x._pq()
    if q == 0:
        return float(p)
    D = 2 if x.d == 2 else 5
    p, q = Fraction(p), Fraction(q)
    # enough bits for the magnitude of the terms plus 64 bits of headroom
    scale_bits = 64 + max(
        abs(p.numerator).bit_length() + q.denominator.bit_length(),
        abs(q.numerator).bit_length() + p.denominator.bit_length(),
        64,
    ) * 2
    scale = 1 << scale_bits
    p_scaled = (p.numerator * scale) // p.denominator
    qn, qd = q.numerator, q.denominator
    root = isqrt((D * qn * qn * scale * scale) // (qd * qd))
    q_scaled = root if qn > 0 else -root
    return float(Fraction(p_scaled + q_scaled, scale))


# ---------------------------------------------------------------------------
# vectorised exact signs for integer forms alpha + beta*w
# ---------------------------------------------------------------------------

_INT64_SAFE = 1 << 30


def sign_array(alpha, beta, d: int) -> np.ndarray:
    """Exact elementwise sign of ``alpha + beta*w`` for integer arrays.

    ``alpha`` and ``beta`` are integer numpy arrays (or object arrays of
    Python ints). For ``d == 5`` the value is rewritten as
    ``((2 alpha + beta) + beta*sqrt 5) / 2`` before the case analysis.
    """
    alpha = np.asarray(alpha)
    beta = np.asarray(beta)
    if d == 5:
        p = 2 * alpha + beta
        q = beta
        D = 5
    elif d == 2:
        p, q, D = alpha, beta, 2
    else:
        raise ValueError(f"unsupported discriminant {d}")
    if p.dtype != object and (
        p.size and (np.abs(p).max() >= _INT64_SAFE or np.abs(q).max() >= _INT64_SAFE)
    ):
        p = p.astype(object)
        q = q.astype(object)
    sp = np.sign(p).astype(np.int64)
    sq = np.sign(q).astype(np.int64)
    lhs = p * p
    rhs = D * q * q
    cmp = np.where(lhs > rhs, 1, np.where(lhs < rhs, -1, 0)).astype(np.int64)
    mixed = np.where(cmp > 0, sp, sq)
    out = np.where(sq == 0, sp, np.where((sp == 0) | (sp == sq), sq, mixed))
    return out.astype(np.int64)
