"""Cube-sphere parameterization and quadtree node addressing.

Face convention (face id: normal, u axis, v axis), right-handed so that
e_u x e_v = normal:

    0: +X  u->+Y  v->+Z        3: -Y  u->+X  v->+Z
    1: -X  u->+Z  v->+Y        4: +Z  u->+X  v->+Y
    2: +Y  u->+Z  v->+X        5: -Z  u->+Y  v->+X

A point (u, v) in [0,1]^2 maps to the cube point
normal + (2u-1) e_u + (2v-1) e_v, then normalizes onto the unit sphere.

Node addresses are (face, depth, x, y) with x along u and y along v.
Cell (x, y) at depth d covers u in [x/2^d, (x+1)/2^d] and likewise for v.
Edges are numbered N=0 (v+), E=1 (u+), S=2 (v-), W=3 (u-); stitch masks
use bit (1 << edge).
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import DomainError

EDGE_N, EDGE_E, EDGE_S, EDGE_W = 0, 1, 2, 3
EDGES = (EDGE_N, EDGE_E, EDGE_S, EDGE_W)
_EDGE_STEP = {EDGE_N: (0, 1), EDGE_E: (1, 0), EDGE_S: (0, -1), EDGE_W: (-1, 0)}

# (normal, e_u, e_v) per face, integer axis vectors
_FACE_AXES_I = (
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((-1, 0, 0), (0, 0, 1), (0, 1, 0)),
    ((0, 1, 0), (0, 0, 1), (1, 0, 0)),
    ((0, -1, 0), (1, 0, 0), (0, 0, 1)),
    ((0, 0, 1), (1, 0, 0), (0, 1, 0)),
    ((0, 0, -1), (0, 1, 0), (1, 0, 0)),
)
_FACE_AXES = tuple(
    tuple(np.array(a, dtype=np.float64) for a in axes) for axes in _FACE_AXES_I
)


class QuadNode(NamedTuple):
    """Address of one quadtree cell on the cube-sphere."""

    face: int
    depth: int
    x: int
    y: int

    def children(self) -> tuple["QuadNode", ...]:
        f, d, x, y = self
        return (
            QuadNode(f, d + 1, 2 * x, 2 * y),
            QuadNode(f, d + 1, 2 * x + 1, 2 * y),
            QuadNode(f, d + 1, 2 * x, 2 * y + 1),
            QuadNode(f, d + 1, 2 * x + 1, 2 * y + 1),
        )

    def parent(self) -> "QuadNode":
        f, d, x, y = self
        if d == 0:
            raise DomainError("root node has no parent")
        return QuadNode(f, d - 1, x // 2, y // 2)

    def angular_size(self) -> float:
        # quarter-circle of cube-face arc halved per split
        return (math.pi / 2.0) / (1 << self.depth)

    def center_dir(self) -> np.ndarray:
        n = 1 << self.depth
        return _uv_dir(self.face, (self.x + 0.5) / n, (self.y + 0.5) / n)

    def corner_dirs(self) -> np.ndarray:
        f, d, x, y = self
        n = 1 << d
        us = np.array([x, x + 1, x, x + 1], dtype=np.float64) / n
        vs = np.array([y, y, y + 1, y + 1], dtype=np.float64) / n
        return _uv_dir(f, us, vs)

    def address(self) -> str:
        return f"f{self.face}/d{self.depth}/{self.x}/{self.y}"


ROOT_NODES = tuple(QuadNode(f, 0, 0, 0) for f in range(6))


def parse_address(addr: str) -> QuadNode:
    try:
        face_s, depth_s, x_s, y_s = addr.split("/")
        if face_s[0] != "f" or depth_s[0] != "d":
            raise ValueError(addr)
        node = QuadNode(int(face_s[1:]), int(depth_s[1:]), int(x_s), int(y_s))
    except (ValueError, IndexError):
        raise DomainError(f"malformed node address {addr!r}") from None
    validate_node(node)
    return node


def validate_node(node: QuadNode) -> None:
    f, d, x, y = node
    n = 1 << d
    if not (0 <= f <= 5 and d >= 0 and 0 <= x < n and 0 <= y < n):
        raise DomainError(f"invalid node address {node}")


def _uv_dir(face: int, u, v):
    """Map face uv to unit sphere without range checks (u, v may exceed
    [0,1] for finite-difference probes past a face edge)."""
    n, eu, ev = _FACE_AXES[face]
    s = np.asarray(u, dtype=np.float64) * 2.0 - 1.0
    t = np.asarray(v, dtype=np.float64) * 2.0 - 1.0
    cx = n[0] + s * eu[0] + t * ev[0]
    cy = n[1] + s * eu[1] + t * ev[1]
    cz = n[2] + s * eu[2] + t * ev[2]
    inv = 1.0 / np.sqrt(cx * cx + cy * cy + cz * cz)
    return np.stack([cx * inv, cy * inv, cz * inv], axis=-1)


def face_uv_to_sphere(face: int, u, v) -> np.ndarray:
    """Unit sphere direction for (u, v) on a cube face.

    u and v may be scalars or same-shape arrays; the result has one more
    trailing axis of size 3.
    """
    if not (isinstance(face, (int, np.integer)) and 0 <= face <= 5):
        raise DomainError("face must be in 0..5")
    ua = np.asarray(u, dtype=np.float64)
    va = np.asarray(v, dtype=np.float64)
    if not (np.all(np.isfinite(ua)) and np.all(np.isfinite(va))):
        raise DomainError("non-finite uv")
    if np.any(ua < 0.0) or np.any(ua > 1.0) or np.any(va < 0.0) or np.any(va > 1.0):
        raise DomainError("uv outside [0, 1]")
    return _uv_dir(face, ua, va)


def sphere_to_face_uv(p) -> tuple[int, float, float]:
    """Inverse of face_uv_to_sphere for a single direction.

    The face of the dominant |component| wins; ties resolve to the lowest
    face id. p must be unit length within 1e-9.
    """
    v = np.asarray(p, dtype=np.float64)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise DomainError("expected a finite 3-vector")
    norm = math.sqrt(float(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]))
    if norm == 0.0:
        raise DomainError("zero vector")
    if abs(norm - 1.0) > 1e-9:
        raise DomainError("direction must be unit length within 1e-9")
    x, y, z = float(v[0]), float(v[1]), float(v[2])
    ax, ay, az = abs(x), abs(y), abs(z)
    if ax >= ay and ax >= az:
        face = 0 if x > 0 else 1
    elif ay >= az:
        face = 2 if y > 0 else 3
    else:
        face = 4 if z > 0 else 5
    n, eu, ev = _FACE_AXES_I[face]
    w = x * n[0] + y * n[1] + z * n[2]
    s = (x * eu[0] + y * eu[1] + z * eu[2]) / w
    t = (x * ev[0] + y * ev[1] + z * ev[2]) / w
    return face, (s + 1.0) / 2.0, (t + 1.0) / 2.0


def _fold_cell(face: int, depth: int, tx: int, ty: int) -> tuple[int, int, int]:
    """Fold a one-step out-of-range cell (tx, ty) onto the adjacent face.

    Pure dyadic-rational arithmetic, exact in doubles; used only to derive
    the edge adjacency table below.
    """
    n = 1 << depth
    s = 2.0 * (tx + 0.5) / n - 1.0
    t = 2.0 * (ty + 0.5) / n - 1.0
    if s > 1.0:
        a, b, d = "u", t, s - 1.0
    elif s < -1.0:
        a, b, d = "-u", t, -s - 1.0
    elif t > 1.0:
        a, b, d = "v", s, t - 1.0
    else:
        a, b, d = "-v", s, -t - 1.0

    nrm, eu, ev = _FACE_AXES_I[face]
    sign = -1 if a.startswith("-") else 1
    exit_axis = eu if a.endswith("u") else ev
    tangent = ev if a.endswith("u") else eu
    # rotate the overhanging flap onto the neighbor face: the exit axis
    # becomes the new normal, the old normal folds inward
    q = tuple(
        sign * exit_axis[i] + (1.0 - d) * nrm[i] + b * tangent[i] for i in range(3)
    )
    new_normal = tuple(sign * exit_axis[i] for i in range(3))
    nface = _FACE_AXES_I.index(
        next(ax for ax in _FACE_AXES_I if ax[0] == new_normal)
    )
    n2, eu2, ev2 = _FACE_AXES_I[nface]
    s2 = q[0] * eu2[0] + q[1] * eu2[1] + q[2] * eu2[2]
    t2 = q[0] * ev2[0] + q[1] * ev2[1] + q[2] * ev2[2]
    nx = int((s2 + 1.0) / 2.0 * n)
    ny = int((t2 + 1.0) / 2.0 * n)
    return nface, nx, ny


def _build_edge_table():
    """Derive (neighbor_face, entry_edge, reversed) for every (face, edge)."""
    table = []
    depth, n = 8, 256
    probes = (3, 11)
    for face in range(6):
        row = []
        for edge in EDGES:
            results = []
            for j in probes:
                if edge == EDGE_E:
                    tx, ty = n, j
                elif edge == EDGE_W:
                    tx, ty = -1, j
                elif edge == EDGE_N:
                    tx, ty = j, n
                else:
                    tx, ty = j, -1
                results.append(_fold_cell(face, depth, tx, ty))
            (f1, x1, y1), (f2, x2, y2) = results
            assert f1 == f2
            if x1 == x2 == n - 1:
                entry, j1 = EDGE_E, (y1, y2)
            elif x1 == x2 == 0:
                entry, j1 = EDGE_W, (y1, y2)
            elif y1 == y2 == n - 1:
                entry, j1 = EDGE_N, (x1, x2)
            else:
                assert y1 == y2 == 0
                entry, j1 = EDGE_S, (x1, x2)
            assert j1 in ((probes[0], probes[1]), (n - 1 - probes[0], n - 1 - probes[1]))
            row.append((f1, entry, j1[0] != probes[0]))
        table.append(tuple(row))
    return tuple(table)


_EDGE_TABLE = _build_edge_table()


@lru_cache(maxsize=1 << 18)
def neighbor(node: QuadNode, edge: int) -> QuadNode:
    """Same-depth address across an edge, crossing faces where needed."""
    f, d, x, y = node
    n = 1 << d
    dx, dy = _EDGE_STEP[edge]
    tx, ty = x + dx, y + dy
    if 0 <= tx < n and 0 <= ty < n:
        return QuadNode(f, d, tx, ty)
    nface, nedge, rev = _EDGE_TABLE[f][edge]
    j = y if edge in (EDGE_E, EDGE_W) else x
    if rev:
        j = n - 1 - j
    if nedge == EDGE_E:
        return QuadNode(nface, d, n - 1, j)
    if nedge == EDGE_W:
        return QuadNode(nface, d, 0, j)
    if nedge == EDGE_N:
        return QuadNode(nface, d, j, n - 1)
    return QuadNode(nface, d, j, 0)


def edge_vertex_uv(node: QuadNode, edge: int, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """uv coordinates of the resolution+1 grid vertices along one edge.

    Numerators are exact integers over resolution * 2^depth, so vertices
    shared between adjacent tiles get bit-identical uv (and therefore
    bit-identical sphere directions).
    """
    f, d, x, y = node
    denom = float(resolution * (1 << d))
    k = np.arange(resolution + 1, dtype=np.float64)
    if edge == EDGE_N:
        return (x * resolution + k) / denom, np.full(resolution + 1, (y + 1) * resolution / denom)
    if edge == EDGE_S:
        return (x * resolution + k) / denom, np.full(resolution + 1, y * resolution / denom)
    if edge == EDGE_E:
        return np.full(resolution + 1, (x + 1) * resolution / denom), (y * resolution + k) / denom
    return np.full(resolution + 1, x * resolution / denom), (y * resolution + k) / denom
