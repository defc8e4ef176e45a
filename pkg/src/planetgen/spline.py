"""Spline curves for remapping noise values.

A curve maps [0, 1] -> [0, 1] through a list of control points. Control
points are interpolated exactly; between points the curve is either
piecewise linear or a monotone cubic (shape preserving, no overshoot).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ConfigError, DomainError

MODES = ("linear", "monotone_cubic")


@dataclass(frozen=True)
class SplineCurve:
    points: tuple[tuple[float, float], ...]
    mode: str = "linear"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "points", tuple((float(x), float(y)) for x, y in self.points)
        )


def validate(curve: SplineCurve) -> Optional[str]:
    """Return None if the curve is well formed, else the first violation."""
    if curve.mode not in MODES:
        return f"unknown interpolation mode {curve.mode!r}"
    if len(curve.points) < 2:
        return "fewer than 2 points"
    xs = [p[0] for p in curve.points]
    ys = [p[1] for p in curve.points]
    if any(not np.isfinite(v) for v in xs + ys):
        return "non-finite control point"
    if any(b <= a for a, b in zip(xs, xs[1:])):
        return "inputs not strictly increasing"
    if xs[0] != 0.0:
        return "first input must be 0"
    if xs[-1] != 1.0:
        return "last input must be 1"
    if any(y < 0.0 or y > 1.0 for y in ys):
        return "outputs outside [0, 1]"
    return None


def _checked_arrays(curve: SplineCurve) -> tuple[np.ndarray, np.ndarray]:
    try:
        return curve._cache["xs"], curve._cache["ys"]
    except KeyError:
        pass
    problem = validate(curve)
    if problem is not None:
        raise ConfigError(problem)
    xs = np.array([p[0] for p in curve.points], dtype=np.float64)
    ys = np.array([p[1] for p in curve.points], dtype=np.float64)
    curve._cache["xs"] = xs
    curve._cache["ys"] = ys
    return xs, ys


def _pchip(curve: SplineCurve, xs: np.ndarray, ys: np.ndarray) -> PchipInterpolator:
    interp = curve._cache.get("pchip")
    if interp is None:
        interp = PchipInterpolator(xs, ys, extrapolate=False)
        curve._cache["pchip"] = interp
    return interp


def evaluate(curve: SplineCurve, t):
    """Evaluate the curve at t in [0, 1] (scalar or array).

    Control points are hit exactly. Output is clamped to the bracketing
    segment's [min(y_i, y_i+1), max(y_i, y_i+1)] so rounding can never
    push a value outside the segment range.
    """
    xs, ys = _checked_arrays(curve)
    arr = np.asarray(t, dtype=np.float64)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr)
    if not np.all(np.isfinite(flat)):
        raise DomainError("non-finite input")
    if np.any(flat < 0.0) or np.any(flat > 1.0):
        raise DomainError("input outside [0, 1]")

    # segment index for each sample; t == xs[k] resolves to segment k-1 or
    # k, both of which interpolate the knot exactly
    idx = np.clip(np.searchsorted(xs, flat, side="right") - 1, 0, len(xs) - 2)
    x0 = xs[idx]
    x1 = xs[idx + 1]
    y0 = ys[idx]
    y1 = ys[idx + 1]

    if curve.mode == "linear":
        u = (flat - x0) / (x1 - x0)
        out = (1.0 - u) * y0 + u * y1
    else:
        out = _pchip(curve, xs, ys)(flat)
        # pchip evaluation is not guaranteed bit-exact at the knots
        hit = np.searchsorted(xs, flat)
        knot = (hit < len(xs)) & (xs[np.minimum(hit, len(xs) - 1)] == flat)
        out = np.where(knot, ys[np.minimum(hit, len(xs) - 1)], out)

    np.clip(out, np.minimum(y0, y1), np.maximum(y0, y1), out=out)
    if scalar:
        return float(out[0])
    return out.reshape(arr.shape)
