"""Seeded gradient noise and fractal Brownian motion.

Lattice gradients are hashed directly from integer coordinates and the
seed with a splitmix64-style mixer, so there is no permutation table and
the full 64-bit seed space is honoured. All sampling functions accept
single points or arrays of points and are deterministic across runs and
platforms for a given seed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
# per-axis multipliers decorrelate lattice coordinates before mixing
_KX = 0x9E3779B97F4A7C15
_KY = 0xC2B2AE3D27D4EB4F
_KZ = 0x165667B19E3779F9


def _mix64(x: int) -> int:
    """splitmix64 finalizer on python ints (wrapping at 64 bits)."""
    x = (x + _GOLDEN) & _M64
    x = ((x ^ (x >> 30)) * _MIX1) & _M64
    x = ((x ^ (x >> 27)) * _MIX2) & _M64
    return x ^ (x >> 31)


def derive_seed(seed: int, *salts: int) -> int:
    """Derive a decorrelated child seed from a parent seed and integer salts.

    Chaining is order sensitive: derive_seed(s, a, b) != derive_seed(s, b, a).
    """
    h = int(seed) & _M64
    for s in salts:
        h = _mix64(h ^ ((int(s) & _M64) * _GOLDEN & _M64))
    return h


@dataclass(frozen=True)
class NoiseSeed:
    """A 64-bit seed. Negative or oversized ints are wrapped."""

    value: int = 0

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) & _M64)


def _seed_value(seed) -> int:
    if isinstance(seed, NoiseSeed):
        return seed.value
    return int(seed) & _M64


@dataclass(frozen=True)
class FbmParams:
    """Octave stack controls for fractal Brownian motion."""

    octaves: int = 4
    persistence: float = 0.5
    lacunarity: float = 2.0
    exponentiation: float = 1.0
    base_frequency: float = 1.0

    def validate(self) -> None:
        if not (isinstance(self.octaves, int) and self.octaves >= 1):
            raise ConfigError("octaves >= 1")
        if not (np.isfinite(self.persistence) and self.persistence > 0.0):
            raise ConfigError("persistence > 0")
        if not (np.isfinite(self.lacunarity) and self.lacunarity > 1.0):
            raise ConfigError("lacunarity > 1")
        if not (np.isfinite(self.exponentiation) and self.exponentiation > 0.0):
            raise ConfigError("exponentiation > 0")
        if not (np.isfinite(self.base_frequency) and self.base_frequency > 0.0):
            raise ConfigError("base_frequency > 0")


# 12 cube-edge gradient directions, unit length. Dot products with cell
# offsets stay within [-sqrt(3)/2, sqrt(3)/2], so outputs fit [-1, 1]
# without rescaling.
_GRADS = np.array(
    [
        [1, 1, 0], [-1, 1, 0], [1, -1, 0], [-1, -1, 0],
        [1, 0, 1], [-1, 0, 1], [1, 0, -1], [-1, 0, -1],
        [0, 1, 1], [0, -1, 1], [0, 1, -1], [0, -1, -1],
    ],
    dtype=np.float64,
) * np.sqrt(0.5)

_U = np.uint64


def _hash_lattice(ux: np.ndarray, uy: np.ndarray, uz: np.ndarray, seed: np.uint64) -> np.ndarray:
    h = (ux * _U(_KX)) ^ (uy * _U(_KY)) ^ (uz * _U(_KZ)) ^ seed
    h = h + _U(_GOLDEN)
    h = (h ^ (h >> _U(30))) * _U(_MIX1)
    h = (h ^ (h >> _U(27))) * _U(_MIX2)
    return h ^ (h >> _U(31))


def _fade(t: np.ndarray) -> np.ndarray:
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def _corner_dot(ip: np.ndarray, f: np.ndarray, dx: int, dy: int, dz: int, seed: np.uint64) -> np.ndarray:
    ux = (ip[:, 0] + dx).astype(np.uint64)
    uy = (ip[:, 1] + dy).astype(np.uint64)
    uz = (ip[:, 2] + dz).astype(np.uint64)
    g = _GRADS[(_hash_lattice(ux, uy, uz, seed) % _U(12)).astype(np.intp)]
    return (
        g[:, 0] * (f[:, 0] - dx)
        + g[:, 1] * (f[:, 1] - dy)
        + g[:, 2] * (f[:, 2] - dz)
    )


def _lerp(a, b, t):
    return a + t * (b - a)


def _perlin3_flat(p: np.ndarray, seed_value: int) -> np.ndarray:
    """Gradient noise for an (N, 3) float64 array. Zero at lattice points."""
    pf = np.floor(p)
    ip = pf.astype(np.int64)
    f = p - pf
    u = _fade(f[:, 0])
    v = _fade(f[:, 1])
    w = _fade(f[:, 2])
    s = _U(seed_value)

    c000 = _corner_dot(ip, f, 0, 0, 0, s)
    c100 = _corner_dot(ip, f, 1, 0, 0, s)
    c010 = _corner_dot(ip, f, 0, 1, 0, s)
    c110 = _corner_dot(ip, f, 1, 1, 0, s)
    c001 = _corner_dot(ip, f, 0, 0, 1, s)
    c101 = _corner_dot(ip, f, 1, 0, 1, s)
    c011 = _corner_dot(ip, f, 0, 1, 1, s)
    c111 = _corner_dot(ip, f, 1, 1, 1, s)

    x00 = _lerp(c000, c100, u)
    x10 = _lerp(c010, c110, u)
    x01 = _lerp(c001, c101, u)
    x11 = _lerp(c011, c111, u)
    y0 = _lerp(x00, x10, v)
    y1 = _lerp(x01, x11, v)
    return _lerp(y0, y1, w)


def _as_points(p) -> tuple[np.ndarray, tuple]:
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim == 0 or arr.shape[-1] != 3:
        raise DomainError("points must have 3 components")
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite input point")
    return arr.reshape(-1, 3), arr.shape[:-1]


def perlin3(p, seed=0):
    """Single-octave gradient noise in [-1, 1].

    p may be a length-3 sequence (returns float) or an (..., 3) array
    (returns an array of the leading shape).
    """
    flat, lead = _as_points(p)
    out = _perlin3_flat(flat, _seed_value(seed))
    if lead == ():
        return float(out[0])
    return out.reshape(lead)


def fbm(p, params: FbmParams, seed=0):
    """Fractal sum of perlin3 octaves, normalised to [0, 1].

    Octave i samples at base_frequency * lacunarity**i with weight
    persistence**i and its own derived seed. The normalised sum is raised
    to params.exponentiation.
    """
    params.validate()
    flat, lead = _as_points(p)
    sv = _seed_value(seed)

    total = np.zeros(flat.shape[0], dtype=np.float64)
    amp = 1.0
    freq = params.base_frequency
    a_max = 0.0
    for i in range(params.octaves):
        total = total + amp * _perlin3_flat(flat * freq, derive_seed(sv, i))
        a_max += amp
        amp *= params.persistence
        freq *= params.lacunarity

    n = (total / a_max + 1.0) / 2.0
    out = np.power(n, params.exponentiation)
    if lead == ():
        return float(out[0])
    return out.reshape(lead)
