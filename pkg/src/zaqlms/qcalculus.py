"""Numerical quaternion-gradient estimation by central finite differences.

For a field ``f`` of a quaternion vector ``w`` (elements
``w_m = a_m + b_m i + c_m j + d_m k``) the two gradients are defined
componentwise from the four real partials of each element:

    grad:      (1/4) * (df/da_m - (df/db_m) i - (df/dc_m) j - (df/dd_m) k)
    conj grad: (1/4) * (df/da_m + (df/db_m) i + (df/dc_m) j + (df/dd_m) k)

with the units multiplying the (generally quaternion-valued) partials on
the right.  The partials are estimated by central differences, giving an
independent check of closed-form gradients such as the filter update's.

Fields are callables ``QVector -> Quaternion`` (or ``-> float`` for
real-valued costs, lifted automatically).  Non-finite field evaluations
raise ``ValueError``.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .quaternion import Quaternion, I, J, K
from .qvector import QVector

__all__ = ["num_grad", "num_grad_conj", "check_product_rule", "COMPONENTS"]

COMPONENTS = "abcd"

Field = Callable[[QVector], "Quaternion | float"]


def _eval(f: Field, w: QVector) -> Quaternion:
    value = f(w)
    if isinstance(value, Quaternion):
        return value
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"field evaluated to non-finite value {value}")
    return Quaternion(value, 0.0, 0.0, 0.0)


def _perturbed(w: QVector, m: int, comp: int, delta: float) -> QVector:
    arr = np.array(w.components)
    arr[m, comp] += delta
    return QVector.from_components(arr)


def _central_partials(f: Field, w: QVector, m: int, h: float) -> list[Quaternion]:
    """Four central-difference partials of f at w, element m, one per component.

    The step is scaled by max(1, |component|) to keep the relative
    perturbation sane for large weights.
    """
    if h <= 0.0:
        raise ValueError("finite-difference step h must be > 0")
    partials = []
    for comp in range(4):
        hh = h * max(1.0, abs(float(w.components[m, comp])))
        fp = _eval(f, _perturbed(w, m, comp, +hh))
        fm = _eval(f, _perturbed(w, m, comp, -hh))
        partials.append((fp - fm) / (2.0 * hh))
    return partials


def num_grad_conj(f: Field, w: QVector, h: float = 1e-5) -> QVector:
    """Estimate the gradient of ``f`` with respect to the conjugate vector."""
    out = []
    for m in range(len(w)):
        pa, pb, pc, pd = _central_partials(f, w, m, h)
        out.append(0.25 * (pa + pb * I + pc * J + pd * K))
    return QVector(out)


def num_grad(f: Field, w: QVector, h: float = 1e-5) -> QVector:
    """Estimate the gradient of ``f`` with respect to the vector itself."""
    out = []
    for m in range(len(w)):
        pa, pb, pc, pd = _central_partials(f, w, m, h)
        out.append(0.25 * (pa - pb * I - pc * J - pd * K))
    return QVector(out)


def check_product_rule(f: Field, g: Field, w: QVector, m: int,
                       component: str, h: float = 1e-5) -> float:
    """Residual of the real-partial product rule for ``f * g``.

    Evaluates ``d(fg)/dc = f * dg/dc + df/dc * g`` at element ``m``,
    component ``component`` (one of "abcd"), both sides by central
    differences, and returns the largest absolute component difference.
    """
    if component not in COMPONENTS:
        raise ValueError(f"component must be one of {COMPONENTS!r}, got {component!r}")
    if h <= 0.0:
        raise ValueError("finite-difference step h must be > 0")
    comp = COMPONENTS.index(component)
    hh = h * max(1.0, abs(float(w.components[m, comp])))
    wp = _perturbed(w, m, comp, +hh)
    wm = _perturbed(w, m, comp, -hh)

    fp, fm = _eval(f, wp), _eval(f, wm)
    gp, gm = _eval(g, wp), _eval(g, wm)
    f0, g0 = _eval(f, w), _eval(g, w)

    lhs = (fp * gp - fm * gm) / (2.0 * hh)
    df = (fp - fm) / (2.0 * hh)
    dg = (gp - gm) / (2.0 * hh)
    rhs = f0 * dg + df * g0

    diff = lhs - rhs
    return max(abs(diff.a), abs(diff.b), abs(diff.c), abs(diff.d))
