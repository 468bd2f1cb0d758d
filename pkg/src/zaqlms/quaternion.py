"""Scalar quaternion arithmetic.

A quaternion ``q = a + b*i + c*j + d*k`` has four real components and three
imaginary units satisfying ``i**2 = j**2 = k**2 = ijk = -1`` with
``ij = k``, ``jk = i``, ``ki = j``.  Multiplication is associative but not
commutative (``ji = -ij``).

Values are immutable; every operation returns a new ``Quaternion``.  The
constructor rejects NaN/Inf so arithmetic that overflows fails loudly
instead of propagating silently.
"""

from __future__ import annotations

import math
import re

__all__ = [
    "Quaternion", "ZERO", "ONE", "I", "J", "K",
    "mul", "add", "sub", "scale", "conj", "norm", "sgn",
]

_Real = (int, float)


class Quaternion:
    """Immutable quaternion with float64 components ``a + b*i + c*j + d*k``."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: float = 0.0, b: float = 0.0, c: float = 0.0, d: float = 0.0):
        a, b, c, d = float(a), float(b), float(c), float(d)
        if not (math.isfinite(a) and math.isfinite(b)
                and math.isfinite(c) and math.isfinite(d)):
            raise ValueError(f"non-finite quaternion components ({a}, {b}, {c}, {d})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Quaternion is immutable")

    # -- algebra ---------------------------------------------------------

    def __add__(self, other: Quaternion) -> Quaternion:
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.a + other.a, self.b + other.b,
                          self.c + other.c, self.d + other.d)

    def __sub__(self, other: Quaternion) -> Quaternion:
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.a - other.a, self.b - other.b,
                          self.c - other.c, self.d - other.d)

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        """Hamilton product, or scaling when ``other`` is a real number."""
        if isinstance(other, Quaternion):
            pa, pb, pc, pd = self.a, self.b, self.c, self.d
            qa, qb, qc, qd = other.a, other.b, other.c, other.d
            return Quaternion(
                pa * qa - pb * qb - pc * qc - pd * qd,
                pa * qb + pb * qa + pc * qd - pd * qc,
                pa * qc - pb * qd + pc * qa + pd * qb,
                pa * qd + pb * qc - pc * qb + pd * qa,
            )
        if isinstance(other, _Real):
            r = float(other)
            return Quaternion(self.a * r, self.b * r, self.c * r, self.d * r)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, _Real):
            r = float(other)
            return Quaternion(r * self.a, r * self.b, r * self.c, r * self.d)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, _Real):
            r = float(other)
            return Quaternion(self.a / r, self.b / r, self.c / r, self.d / r)
        return NotImplemented

    def conj(self) -> Quaternion:
        """Conjugate ``q* = a - b*i - c*j - d*k``."""
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm(self) -> float:
        """Modulus ``sqrt(a^2 + b^2 + c^2 + d^2)``, safe against underflow."""
        return math.hypot(self.a, self.b, self.c, self.d)

    def norm_squared(self) -> float:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def sgn(self) -> Quaternion:
        """``q / |q|`` for nonzero q, the zero quaternion for q == 0.

        Computed with pre-scaling by the largest component magnitude so the
        result has unit modulus across the whole double range (down to
        subnormal inputs and up to components near the overflow limit).
        """
        m = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        if m == 0.0:
            return ZERO
        ua, ub, uc, ud = self.a / m, self.b / m, self.c / m, self.d / m
        n = math.hypot(ua, ub, uc, ud)
        return Quaternion(ua / n, ub / n, uc / n, ud / n)

    def __abs__(self) -> float:
        return self.norm()

    # -- identity --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Quaternion):
            return NotImplemented
        return (self.a == other.a and self.b == other.b
                and self.c == other.c and self.d == other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def is_zero(self) -> bool:
        return self.a == 0.0 and self.b == 0.0 and self.c == 0.0 and self.d == 0.0

    # -- text form ---------------------------------------------------------

    def __str__(self) -> str:
        """Render as ``a + bi + cj + dk`` with full (round-trip) precision."""
        parts = [repr(self.a)]
        for coef, unit in ((self.b, "i"), (self.c, "j"), (self.d, "k")):
            sign = "-" if (coef < 0 or (coef == 0 and math.copysign(1, coef) < 0)) else "+"
            parts.append(f"{sign} {repr(abs(coef))}{unit}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Quaternion({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"

    @classmethod
    def parse(cls, text: str) -> Quaternion:
        """Parse the ``a + bi + cj + dk`` form (compact ``a+bi+cj+dk`` too).

        Terms may appear in any order and any may be omitted; a bare unit
        means a coefficient of one (``-k`` is ``0 - 1k``).  Raises
        ``ValueError`` on malformed input.
        """
        compact = text.replace(" ", "").replace("\t", "")
        if not compact:
            raise ValueError("empty quaternion literal")
        comps = {"": 0.0, "i": 0.0, "j": 0.0, "k": 0.0}
        pos = 0
        for match in _TERM_RE.finditer(compact):
            if match.start() != pos:
                raise ValueError(f"malformed quaternion literal {text!r} "
                                 f"near offset {pos}")
            sign, number, unit_a, unit_b = match.groups()
            if pos > 0 and not sign:
                raise ValueError(f"malformed quaternion literal {text!r}: "
                                 f"missing sign before offset {pos}")
            coef = float(number) if number else 1.0
            if sign == "-":
                coef = -coef
            comps[unit_a or unit_b or ""] += coef
            pos = match.end()
        if pos != len(compact):
            raise ValueError(f"malformed quaternion literal {text!r} near offset {pos}")
        return cls(comps[""], comps["i"], comps["j"], comps["k"])


# One term: optional sign, then a number with optional unit, or a bare unit.
_TERM_RE = re.compile(
    r"([+-]?)(?:((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([ijk])?|([ijk]))"
)


ZERO = Quaternion(0.0, 0.0, 0.0, 0.0)
ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


# Functional aliases mirroring the operator API.

def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p * q`` (noncommutative)."""
    return p * q


def add(p: Quaternion, q: Quaternion) -> Quaternion:
    return p + q


def sub(p: Quaternion, q: Quaternion) -> Quaternion:
    return p - q


def scale(r: float, q: Quaternion) -> Quaternion:
    """Scale by a real number."""
    return float(r) * q


def conj(q: Quaternion) -> Quaternion:
    return q.conj()


def norm(q: Quaternion) -> float:
    return q.norm()


def sgn(q: Quaternion) -> Quaternion:
    return q.sgn()
