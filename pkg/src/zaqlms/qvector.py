"""Fixed-length quaternion vectors and the elementwise algebra the filter uses.

A :class:`QVector` stores its elements as a read-only ``(L, 4)`` float64
component array, which keeps long signal sequences and the simulation inner
loop on fast numpy paths while the element API still speaks
:class:`~zaqlms.quaternion.Quaternion`.

The component-array helpers :func:`hamilton` and :func:`sgn_components`
are shared with the batched simulation kernel so both code paths perform
bit-identical floating-point operations.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .quaternion import Quaternion

__all__ = [
    "QVector", "hamilton", "sgn_components",
    "dot_t", "error", "conj_elems", "l1_norm", "sgn_vec", "axpy",
]


def hamilton(p: np.ndarray, q: np.ndarray, conj_q: bool = False) -> np.ndarray:
    """Elementwise Hamilton product of ``(..., 4)`` component arrays.

    Broadcasts like any numpy binary op.  With ``conj_q=True`` the right
    operand is conjugated on the fly (sign folding is exact in IEEE754, so
    the result is bit-identical to conjugating first).
    """
    pa, pb, pc, pd = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    if conj_q:
        qa, qb, qc, qd = q[..., 0], -q[..., 1], -q[..., 2], -q[..., 3]
    else:
        qa, qb, qc, qd = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    out = np.empty(np.broadcast_shapes(p.shape, q.shape))
    out[..., 0] = pa * qa - pb * qb - pc * qc - pd * qd
    out[..., 1] = pa * qb + pb * qa + pc * qd - pd * qc
    out[..., 2] = pa * qc - pb * qd + pc * qa + pd * qb
    out[..., 3] = pa * qd + pb * qc - pc * qb + pd * qa
    return out


def sgn_components(w: np.ndarray) -> np.ndarray:
    """Elementwise quaternion sign of an ``(..., 4)`` component array.

    Zero elements map to exactly zero (the piecewise definition, not an
    epsilon threshold).  Components are pre-scaled by the element's largest
    magnitude so nonzero elements keep unit modulus over the whole double
    range, even where squaring would under- or overflow.
    """
    m = np.abs(w).max(axis=-1)
    safe_m = np.where(m == 0.0, 1.0, m)
    u = w / safe_m[..., None]
    nrm = np.sqrt(u[..., 0] ** 2 + u[..., 1] ** 2 + u[..., 2] ** 2 + u[..., 3] ** 2)
    safe_n = np.where(nrm == 0.0, 1.0, nrm)
    return np.where(m[..., None] == 0.0, 0.0, u / safe_n[..., None])


class QVector:
    """Immutable fixed-length sequence of quaternions (length >= 1)."""

    __slots__ = ("_c",)

    def __init__(self, elems: Iterable[Quaternion]):
        rows = [(q.a, q.b, q.c, q.d) for q in elems]
        if not rows:
            raise ValueError("QVector must have length >= 1")
        arr = np.array(rows, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "_c", arr)

    def __setattr__(self, name, value):
        raise AttributeError("QVector is immutable")

    @classmethod
    def from_components(cls, components: np.ndarray) -> QVector:
        """Build from an ``(L, 4)`` array of components (copied, frozen)."""
        arr = np.array(components, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 4 or arr.shape[0] < 1:
            raise ValueError(f"expected an (L, 4) component array, got shape {arr.shape}")
        arr.flags.writeable = False
        obj = object.__new__(cls)
        object.__setattr__(obj, "_c", arr)
        return obj

    @classmethod
    def zeros(cls, length: int) -> QVector:
        if length < 1:
            raise ValueError("QVector must have length >= 1")
        return cls.from_components(np.zeros((length, 4)))

    @property
    def components(self) -> np.ndarray:
        """Read-only ``(L, 4)`` component array."""
        return self._c

    def __len__(self) -> int:
        return self._c.shape[0]

    def __getitem__(self, m: int) -> Quaternion:
        row = self._c[m]
        return Quaternion(row[0], row[1], row[2], row[3])

    def __iter__(self):
        for row in self._c:
            yield Quaternion(row[0], row[1], row[2], row[3])

    def __eq__(self, other) -> bool:
        if not isinstance(other, QVector):
            return NotImplemented
        return self._c.shape == other._c.shape and bool(np.all(self._c == other._c))

    def __hash__(self):
        return hash(self._c.tobytes())

    def __add__(self, other: QVector) -> QVector:
        _check_lengths(self, other)
        return QVector.from_components(self._c + other._c)

    def __sub__(self, other: QVector) -> QVector:
        _check_lengths(self, other)
        return QVector.from_components(self._c - other._c)

    def __neg__(self) -> QVector:
        return QVector.from_components(-self._c)

    def __rmul__(self, r) -> QVector:
        if isinstance(r, (int, float)):
            return QVector.from_components(float(r) * self._c)
        return NotImplemented

    def __repr__(self) -> str:
        return f"QVector([{', '.join(str(q) for q in self)}])"


def _check_lengths(u: QVector, v: QVector) -> None:
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")


def dot_t(w: QVector, x: QVector) -> Quaternion:
    """Transpose product ``sum_m w_m * x_m`` with products in ``w_m * x_m`` order.

    Accumulation runs in element order from a zero start; the batched
    simulation kernel reduces the same way, so the two agree bitwise.
    """
    _check_lengths(w, x)
    prod = hamilton(w._c, x._c)
    acc = np.zeros(4)
    for m in range(prod.shape[0]):
        acc = acc + prod[m]
    return Quaternion(acc[0], acc[1], acc[2], acc[3])


def error(d: Quaternion, w: QVector, x: QVector) -> Quaternion:
    """A-priori error ``d - w^T x``."""
    return d - dot_t(w, x)


def conj_elems(x: QVector) -> QVector:
    """Elementwise conjugate."""
    return QVector.from_components(x._c * np.array([1.0, -1.0, -1.0, -1.0]))


def l1_norm(w: QVector) -> float:
    """Sum of the elements' quaternion moduli (not per-real-component)."""
    c = w._c
    return float(np.sqrt(c[:, 0] ** 2 + c[:, 1] ** 2 + c[:, 2] ** 2 + c[:, 3] ** 2).sum())


def sgn_vec(w: QVector) -> QVector:
    """Elementwise quaternion sign; zero elements stay exactly zero."""
    return QVector.from_components(sgn_components(w._c))


def axpy(alpha: float, u: QVector, v: QVector) -> QVector:
    """``alpha * u + v`` elementwise."""
    _check_lengths(u, v)
    return QVector.from_components(float(alpha) * u._c + v._c)
