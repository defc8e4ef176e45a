"""Straight-line scalar reference for the noise scheme.

Implements the same hash/gradient/interpolation scheme as planetgen.noise
in plain python, one point at a time, with no numpy. Used as the oracle
that the vectorised implementation must match bit-for-bit.
"""
import math

M64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
KX = 0x9E3779B97F4A7C15
KY = 0xC2B2AE3D27D4EB4F
KZ = 0x165667B19E3779F9

S = math.sqrt(0.5)
GRADS = [
    (S, S, 0.0), (-S, S, 0.0), (S, -S, 0.0), (-S, -S, 0.0),
    (S, 0.0, S), (-S, 0.0, S), (S, 0.0, -S), (-S, 0.0, -S),
    (0.0, S, S), (0.0, -S, S), (0.0, S, -S), (0.0, -S, -S),
]


def mix64(x):
    x = (x + GOLDEN) & M64
    x = ((x ^ (x >> 30)) * MIX1) & M64
    x = ((x ^ (x >> 27)) * MIX2) & M64
    return x ^ (x >> 31)


def derive_seed_ref(seed, *salts):
    h = seed & M64
    for s in salts:
        h = mix64(h ^ ((s & M64) * GOLDEN & M64))
    return h


def hash_lattice_ref(ix, iy, iz, seed):
    ux = ix & M64
    uy = iy & M64
    uz = iz & M64
    h = ((ux * KX) & M64) ^ ((uy * KY) & M64) ^ ((uz * KZ) & M64) ^ (seed & M64)
    return mix64(h)


def fade(t):
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def lerp(a, b, t):
    return a + t * (b - a)


def corner_dot(ix, iy, iz, fx, fy, fz, dx, dy, dz, seed):
    g = GRADS[hash_lattice_ref(ix + dx, iy + dy, iz + dz, seed) % 12]
    return g[0] * (fx - dx) + g[1] * (fy - dy) + g[2] * (fz - dz)


def perlin3_ref(x, y, z, seed):
    ix = math.floor(x)
    iy = math.floor(y)
    iz = math.floor(z)
    fx = x - ix
    fy = y - iy
    fz = z - iz
    u = fade(fx)
    v = fade(fy)
    w = fade(fz)

    c000 = corner_dot(ix, iy, iz, fx, fy, fz, 0, 0, 0, seed)
    c100 = corner_dot(ix, iy, iz, fx, fy, fz, 1, 0, 0, seed)
    c010 = corner_dot(ix, iy, iz, fx, fy, fz, 0, 1, 0, seed)
    c110 = corner_dot(ix, iy, iz, fx, fy, fz, 1, 1, 0, seed)
    c001 = corner_dot(ix, iy, iz, fx, fy, fz, 0, 0, 1, seed)
    c101 = corner_dot(ix, iy, iz, fx, fy, fz, 1, 0, 1, seed)
    c011 = corner_dot(ix, iy, iz, fx, fy, fz, 0, 1, 1, seed)
    c111 = corner_dot(ix, iy, iz, fx, fy, fz, 1, 1, 1, seed)

    x00 = lerp(c000, c100, u)
    x10 = lerp(c010, c110, u)
    x01 = lerp(c001, c101, u)
    x11 = lerp(c011, c111, u)
    y0 = lerp(x00, x10, v)
    y1 = lerp(x01, x11, v)
    return lerp(y0, y1, w)


def fbm_ref(x, y, z, octaves, persistence, lacunarity, exponentiation, base_frequency, seed):
    total = 0.0
    amp = 1.0
    freq = base_frequency
    a_max = 0.0
    for i in range(octaves):
        total = total + amp * perlin3_ref(x * freq, y * freq, z * freq, derive_seed_ref(seed, i))
        a_max += amp
        amp *= persistence
        freq *= lacunarity
    n = (total / a_max + 1.0) / 2.0
    return n ** exponentiation
