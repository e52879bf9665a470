"""Exact orientation sign for floating-point input.

``orient_sign(q, a, b)`` returns the exact sign of the cross product
``(a - q) x (b - q)``.  Evaluation is staged, after Shewchuk's adaptive
predicates:

1. plain floating point with a forward error bound;
2. when the coordinate differences are exact, an error-free expansion of
   the determinant (TwoProduct / Two_Two_Diff), whose leading nonzero
   component carries the sign;
3. rational arithmetic for whatever is left.

Stage 2 is what keeps collinear and duplicated integer data fast.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

_EPS = 2.0**-53
_CCW_ERRBOUND_A = (3.0 + 16.0 * _EPS) * _EPS
_SPLITTER = 2.0**27 + 1.0
# products outside this band may underflow/overflow inside the expansions
_TINY = 2.0**-900
_HUGE = 2.0**990


def _two_diff(a, b):
    x = a - b
    bv = a - x
    av = x + bv
    return x, (a - av) + (bv - b)


def _two_sum(a, b):
    x = a + b
    bv = x - a
    av = x - bv
    return x, (a - av) + (b - bv)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_product(a, b):
    x = a * b
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    y = alo * blo - (((x - ahi * bhi) - alo * bhi) - ahi * blo)
    return x, y


def _two_two_diff(a1, a0, b1, b0):
    # (a1 + a0) - (b1 + b0) as a nonoverlapping expansion, largest first
    i, x0 = _two_diff(a0, b0)
    j, r0 = _two_sum(a1, i)
    i, x1 = _two_diff(r0, b1)
    x3, x2 = _two_sum(j, i)
    return x3, x2, x1, x0


def _exact_sign(qx: float, qy: float, ax: float, ay: float, bx: float, by: float) -> int:
    qx, qy = Fraction(qx), Fraction(qy)
    det = (Fraction(ax) - qx) * (Fraction(by) - qy) - (Fraction(ay) - qy) * (Fraction(bx) - qx)
    return (det > 0) - (det < 0)


def _leading_sign(parts) -> np.ndarray:
    out = np.zeros(parts[0].shape, dtype=np.int8)
    undecided = np.ones(parts[0].shape, dtype=bool)
    for comp in parts:
        s = np.sign(comp).astype(np.int8)
        take = undecided & (s != 0)
        out[take] = s[take]
        undecided &= ~take
    return out


def orient_sign(q, a, b) -> np.ndarray:
    """Vectorized exact sign of ``(a - q) x (b - q)``.

    ``q``, ``a`` and ``b`` broadcast against each other; the last axis holds
    the two coordinates.  Returns an int8 array of -1, 0, +1.
    """
    q = np.asarray(q, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    q, a, b = np.broadcast_arrays(q, a, b)
    shape = q.shape[:-1]
    q, a, b = (c.reshape(-1, 2) for c in (q, a, b))
    qx, qy = q[:, 0], q[:, 1]
    ax, ay = a[:, 0], a[:, 1]
    bx, by = b[:, 0], b[:, 1]

    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        adx, adx_err = _two_diff(ax, qx)
        ady, ady_err = _two_diff(ay, qy)
        bdx, bdx_err = _two_diff(bx, qx)
        bdy, bdy_err = _two_diff(by, qy)
        detleft = adx * bdy
        detright = ady * bdx
        det = detleft - detright
        bound = _CCW_ERRBOUND_A * (np.abs(detleft) + np.abs(detright))
        sure = (np.abs(det) > bound) & (np.abs(det) > _TINY) & np.isfinite(det)
        out = np.sign(np.where(sure, det, 0.0)).astype(np.int8)

        todo = ~sure
        if todo.any():
            exact_diffs = (adx_err == 0) & (ady_err == 0) & (bdx_err == 0) & (bdy_err == 0)
            left_zero = (adx == 0) | (bdy == 0)
            right_zero = (ady == 0) | (bdx == 0)
            in_range = (left_zero | ((np.abs(detleft) > _TINY) & (np.abs(detleft) < _HUGE))) & (
                right_zero | ((np.abs(detright) > _TINY) & (np.abs(detright) < _HUGE))
            )
            stage2 = np.flatnonzero(todo & exact_diffs & in_range)
            if stage2.size:
                l1, l0 = _two_product(adx[stage2], bdy[stage2])
                r1, r0 = _two_product(ady[stage2], bdx[stage2])
                out[stage2] = _leading_sign(_two_two_diff(l1, l0, r1, r0))
                todo[stage2] = False

    rest = np.flatnonzero(todo)
    if rest.size:
        args = [c[rest].tolist() for c in (qx, qy, ax, ay, bx, by)]
        out[rest] = [_exact_sign(*vals) for vals in zip(*args)]
    return out.reshape(shape)
