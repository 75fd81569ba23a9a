"""Deterministic adaptive Simpson quadrature with Richardson extrapolation."""

from __future__ import annotations

from typing import Callable


class QuadratureResult:
    __slots__ = ("value", "error_estimate", "evaluations", "depth_exhausted")

    def __init__(self, value: float, error_estimate: float, evaluations: int, depth_exhausted: bool):
        self.value = value
        self.error_estimate = error_estimate
        self.evaluations = evaluations
        self.depth_exhausted = depth_exhausted


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 40,
) -> QuadratureResult:
    if a == b:
        return QuadratureResult(0.0, 0.0, 0, False)
    if a > b:
        out = adaptive_simpson(f, b, a, tol, max_depth)
        return QuadratureResult(-out.value, out.error_estimate, out.evaluations, out.depth_exhausted)

    state = {"evals": 0, "exhausted": False}

    def call(x: float) -> float:
        state["evals"] += 1
        return f(x)

    def simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 3.0 * (fa + 4.0 * fm + fb)

    def recurse(lo, hi, flo, fhi, fmid, whole, depth, budget):
        m = (lo + hi) / 2.0
        lm, rm = (lo + m) / 2.0, (m + hi) / 2.0
        flm, frm = call(lm), call(rm)
        h = (hi - lo) / 2.0
        left = simpson(flo, flm, fmid, h / 2.0)
        right = simpson(fmid, frm, fhi, h / 2.0)
        err = (left + right - whole) / 15.0
        if depth >= max_depth:
            state["exhausted"] = True
            return left + right + err, abs(err)
        if abs(err) <= budget:
            return left + right + err, abs(err)
        lv, le = recurse(lo, m, flo, fmid, flm, left, depth + 1, budget / 2.0)
        rv, re_ = recurse(m, hi, fmid, fhi, frm, right, depth + 1, budget / 2.0)
        return lv + rv, le + re_

    fa, fb = call(a), call(b)
    mid = (a + b) / 2.0
    fmid = call(mid)
    whole = simpson(fa, fmid, fb, (b - a) / 2.0)
    value, err = recurse(a, b, fa, fb, fmid, whole, 0, tol)
    return QuadratureResult(value, err, state["evals"], state["exhausted"])
