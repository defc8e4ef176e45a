"""Geometry helpers for seam and normal verification."""
import numpy as np


def point_polyline_distance(p, polyline):
    """Min distance from p to the segments of polyline ((k,3) array)."""
    best = np.inf
    for s in range(len(polyline) - 1):
        a = polyline[s]
        b = polyline[s + 1]
        ab = b - a
        denom = float(np.dot(ab, ab))
        t = 0.0 if denom == 0.0 else float(np.dot(p - a, ab)) / denom
        t = min(1.0, max(0.0, t))
        best = min(best, float(np.linalg.norm(p - (a + t * ab))))
    return best


def chord_angle(a, b):
    """Angle between unit vectors via the chord, stable near zero."""
    c = np.linalg.norm(np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64), axis=-1)
    return 2.0 * np.arcsin(np.clip(c / 2.0, 0.0, 1.0))
