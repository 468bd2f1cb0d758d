"""QLMS and zero-attracting QLMS weight updates.

Both algorithms share one update form.  With a-priori error
``e = d - w^T x`` (old weights) the new weights are

    w <- w + mu * (e * x_m^*)  -  rho * sgn(w_m)        elementwise,

where the quaternion product keeps the error on the left and ``rho = 0``
recovers plain QLMS.  The trailing term is the zero attractor: it pulls
every nonzero weight toward zero by exactly ``rho`` along its own
direction and leaves exact zeros untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .quaternion import Quaternion
from .qvector import QVector, hamilton, sgn_components

__all__ = ["FilterState", "StepRecord", "DivergenceError",
           "step", "step_qlms", "cost_gradient_conj"]


class DivergenceError(RuntimeError):
    """Adaptation produced non-finite weights or runaway error."""


@dataclass(frozen=True)
class FilterState:
    """Adaptive-filter weights plus hyperparameters; rho == 0 means plain QLMS."""

    w: QVector
    mu: float
    rho: float = 0.0
    iteration: int = 0

    def __post_init__(self):
        if not self.mu > 0.0:
            raise ValueError(f"mu: must be > 0, got {self.mu}")
        if not self.rho >= 0.0:
            raise ValueError(f"rho: must be >= 0, got {self.rho}")
        if self.iteration < 0:
            raise ValueError(f"iteration: must be >= 0, got {self.iteration}")

    @classmethod
    def initial(cls, length: int, mu: float, rho: float = 0.0) -> FilterState:
        """Zero-initialized weights of the given length."""
        return cls(w=QVector.zeros(length), mu=mu, rho=rho)


@dataclass(frozen=True)
class StepRecord:
    """Output and a-priori error of one adaptation step."""

    y: Quaternion
    e: Quaternion
    iteration: int


def step(state: FilterState, x: QVector, d: Quaternion) -> tuple[FilterState, StepRecord]:
    """One adaptation step; the error uses the pre-update weights.

    Raises ``ValueError`` on a length mismatch and ``DivergenceError``
    when the update produces non-finite weights.
    """
    w = state.w.components
    xc = x.components
    if xc.shape[0] != w.shape[0]:
        raise ValueError(f"length mismatch: state has {w.shape[0]} taps, "
                         f"input has {xc.shape[0]}")

    # Overflow is detected explicitly below; keep numpy quiet about it.
    with np.errstate(over="ignore", invalid="ignore"):
        prod = hamilton(w, xc)
        acc = np.zeros(4)
        for m in range(prod.shape[0]):
            acc = acc + prod[m]
        d4 = np.array([d.a, d.b, d.c, d.d])
        e4 = d4 - acc

        upd = hamilton(e4, xc, conj_q=True)
        if state.rho != 0.0:
            new_w = (w + state.mu * upd) - state.rho * sgn_components(w)
        else:
            new_w = w + state.mu * upd
    if not np.isfinite(new_w).all():
        raise DivergenceError(
            f"non-finite weights after update at iteration {state.iteration}")
    if not (np.isfinite(acc).all() and np.isfinite(e4).all()):
        raise DivergenceError(
            f"non-finite filter output at iteration {state.iteration}")

    record = StepRecord(y=Quaternion(*acc), e=Quaternion(*e4), iteration=state.iteration)
    new_state = replace(state, w=QVector.from_components(new_w),
                        iteration=state.iteration + 1)
    return new_state, record


def step_qlms(state: FilterState, x: QVector, d: Quaternion) -> tuple[FilterState, StepRecord]:
    """Plain QLMS step: identical to :func:`step` with rho forced to 0."""
    return step(replace(state, rho=0.0), x, d)


def cost_gradient_conj(w: QVector, x: QVector, d: Quaternion, gamma: float) -> QVector:
    """Closed-form conjugate gradient of ``|d - w^T x|^2 + gamma * ||w||_1``.

    Per element: ``-(1/2) e x_m^* + (1/4) gamma sgn(w_m)``.  The update
    rule absorbs these constants into mu and rho; they appear here so the
    closed form can be checked against the finite-difference gradient.
    """
    wc = w.components
    xc = x.components
    if xc.shape[0] != wc.shape[0]:
        raise ValueError(f"length mismatch: {wc.shape[0]} vs {xc.shape[0]}")
    prod = hamilton(wc, xc)
    acc = np.zeros(4)
    for m in range(prod.shape[0]):
        acc = acc + prod[m]
    e4 = np.array([d.a, d.b, d.c, d.d]) - acc
    grad = -0.5 * hamilton(e4, xc, conj_q=True) + (0.25 * gamma) * sgn_components(wc)
    return QVector.from_components(grad)
