"""Tile meshing, stitching, OBJ export and the binary tile codec.

A tile is a displaced (resolution+1)^2 vertex grid over one quad node.
Vertex uv coordinates are computed as integer numerators over
resolution * 2^depth, so tiles sharing an edge (same depth, either side
of any cube edge) produce bit-identical sphere directions and therefore
bit-identical absolute positions along the seam.

Positions are stored in single precision relative to a double-precision
center (relative-to-center encoding); absolute = center + relative.

Stitching against a one-level-coarser neighbor moves every odd edge
vertex to the midpoint of its even neighbors, which places it exactly on
the coarse edge polyline (T-junction collapse). Index topology is
unchanged; the collapsed slivers are degenerate and invisible.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadMagicError,
    ConfigError,
    DomainError,
    IndexRangeError,
    TileCodecError,
    TruncatedError,
    VersionError,
)
from .quadsphere import (
    EDGE_E,
    EDGE_N,
    EDGE_S,
    EDGE_W,
    QuadNode,
    _uv_dir,
    validate_node,
)

MAGIC = b"PTIL"
VERSION = 1
_HEADER = struct.Struct("<4sIBBHIIIII")  # 32 bytes
_CENTER = struct.Struct("<3d")


@dataclass(eq=False)
class TileMesh:
    node: QuadNode
    center: np.ndarray                      # (3,) float64, meters
    positions: np.ndarray                   # (V, 3) float32, relative to center
    normals: np.ndarray                     # (V, 3) float32, unit
    biomes: np.ndarray                      # (V,) uint8
    indices: np.ndarray                     # (I,) uint32
    resolution: int
    positions_f64: np.ndarray | None = field(default=None, repr=False)
    normal_fallbacks: int = field(default=0, repr=False)

    @property
    def vertex_count(self) -> int:
        return self.positions.shape[0]

    def absolute_positions(self) -> np.ndarray:
        """center + relative, recombined in double precision."""
        return self.center[None, :] + self.positions.astype(np.float64)


def edge_vertex_indices(resolution: int, edge: int) -> np.ndarray:
    """Grid indices of the resolution+1 vertices along one edge,
    in increasing transverse coordinate order."""
    r = resolution
    k = np.arange(r + 1)
    if edge == EDGE_N:
        return r * (r + 1) + k
    if edge == EDGE_S:
        return k.copy()
    if edge == EDGE_E:
        return k * (r + 1) + r
    if edge == EDGE_W:
        return k * (r + 1)
    raise DomainError("edge must be in 0..3")


def stitch_positions(positions: np.ndarray, resolution: int, mask: int) -> np.ndarray:
    """Collapse odd edge vertices to the midpoint of their even neighbors
    for every edge set in mask. Works on relative or absolute positions
    (the collapse is affine). Returns a copy when mask is nonzero."""
    if mask == 0:
        return positions
    if resolution % 2 != 0:
        raise ConfigError("stitching requires an even resolution")
    out = positions.copy()
    for edge in (EDGE_N, EDGE_E, EDGE_S, EDGE_W):
        if not mask & (1 << edge):
            continue
        idx = edge_vertex_indices(resolution, edge)
        odd = idx[1::2]
        out[odd] = 0.5 * (out[idx[0:-1:2]] + out[idx[2::2]])
    return out


def _grid_uv(node: QuadNode, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    # integer numerators over resolution * 2^depth keep shared-edge uv
    # bit-identical between neighboring tiles
    f, d, x, y = node
    denom = float(resolution * (1 << d))
    us = (x * resolution + np.arange(resolution + 1, dtype=np.float64)) / denom
    vs = (y * resolution + np.arange(resolution + 1, dtype=np.float64)) / denom
    U = np.tile(us, (resolution + 1, 1))           # row j, col i -> us[i]
    V = np.repeat(vs, resolution + 1).reshape(resolution + 1, resolution + 1)
    return U, V


def compute_normals(
    face: int,
    U: np.ndarray,
    V: np.ndarray,
    generator,
    base_radius: float,
    step: float,
    displacement: np.ndarray | None = None,
) -> tuple[np.ndarray, int]:
    """Per-vertex normals from central differences of the displacement
    field at uv +/- step along the two face axes.

    Chord directions between the probe points, re-orthogonalized against
    the radial direction, give exact surface tangents of the undisplaced
    sphere; displacement slopes (meters per radian) tilt them. A constant
    field therefore yields exactly radial normals, independent of step.

    step is in radians (nominal, near the face center); probes may reach
    slightly past the face edge, which the unchecked uv mapping handles.
    Degenerate tangents fall back to the radial direction; the count of
    fallbacks is returned alongside the normals.

    displacement, when given, must be the field sampled at (U, V) and
    saves one generator call.
    """
    if not step > 0:
        raise ConfigError("normal step > 0")
    h = step / (np.pi / 2.0)  # parameter units per radian along a face axis

    u = U.ravel()
    v = V.ravel()
    r_hat = _uv_dir(face, u, v).reshape(-1, 3)
    if displacement is None:
        displacement = generator.sample(r_hat).displacement
    disp0 = np.asarray(displacement, dtype=np.float64).ravel()

    def probe(uu, vv):
        dirs = _uv_dir(face, uu, vv).reshape(-1, 3)
        return dirs, generator.sample(dirs).displacement

    def tangent(dp, dm, wp, wm):
        chord = dp - dm
        chord -= np.sum(chord * r_hat, axis=1)[:, None] * r_hat
        tlen = np.linalg.norm(chord, axis=1)
        angle = np.arccos(np.clip(np.sum(dp * dm, axis=1), -1.0, 1.0))
        ok = (tlen > 0) & (angle > 0)
        t_hat = np.where(ok[:, None], chord / np.where(tlen == 0, 1.0, tlen)[:, None], 0.0)
        slope = np.where(ok, (wp - wm) / np.where(angle == 0, 1.0, angle), 0.0)
        # d/dtheta of (R + w) r_hat = (R + w) t_hat + (dw/dtheta) r_hat
        return (base_radius + disp0)[:, None] * t_hat + slope[:, None] * r_hat, ok

    dpu, wpu = probe(u + h, v)
    dmu, wmu = probe(u - h, v)
    dpv, wpv = probe(u, v + h)
    dmv, wmv = probe(u, v - h)
    t_u, ok_u = tangent(dpu, dmu, wpu, wmu)
    t_v, ok_v = tangent(dpv, dmv, wpv, wmv)

    n = np.cross(t_u, t_v)
    norms = np.linalg.norm(n, axis=1)
    bad = (norms < 1e-12) | ~ok_u | ~ok_v
    fallbacks = int(np.count_nonzero(bad))
    if fallbacks:
        n[bad] = r_hat[bad]
        norms[bad] = 1.0
    return n / norms[:, None], fallbacks


def grid_indices(resolution: int) -> np.ndarray:
    """Two CCW (outward-facing) triangles per grid cell, uint32."""
    r = resolution
    i, j = np.meshgrid(np.arange(r), np.arange(r), indexing="xy")
    v00 = (j * (r + 1) + i).ravel()
    v10 = v00 + 1
    v01 = v00 + (r + 1)
    v11 = v01 + 1
    tris = np.empty((r * r, 6), dtype=np.uint32)
    tris[:, 0] = v00
    tris[:, 1] = v10
    tris[:, 2] = v11
    tris[:, 3] = v00
    tris[:, 4] = v11
    tris[:, 5] = v01
    return tris.ravel()


def build_tile(
    node: QuadNode,
    stitch_mask: int,
    generator,
    resolution: int,
    base_radius: float,
    normal_step: float | None = None,
) -> TileMesh:
    """Sample, displace and stitch one tile.

    positions_f64 carries the exact double-precision absolute vertex grid
    (post-stitch) for seam verification and OBJ export; it never goes on
    the wire.
    """
    validate_node(node)
    if not (isinstance(resolution, int) and resolution >= 2):
        raise ConfigError("resolution >= 2")
    if not 0 <= stitch_mask <= 15:
        raise ConfigError("stitch_mask in 0..15")
    if stitch_mask != 0 and resolution % 2 != 0:
        raise ConfigError("stitching requires an even resolution")
    if not base_radius > 0:
        raise ConfigError("base_radius > 0")

    U, V = _grid_uv(node, resolution)
    dirs = _uv_dir(node.face, U, V).reshape(-1, 3)
    fieldv = generator.sample(dirs)
    absolute = dirs * (base_radius + fieldv.displacement)[:, None]

    if normal_step is None:
        normal_step = node.angular_size() / resolution / 2.0
    normals, fallbacks = compute_normals(
        node.face, U, V, generator, base_radius, normal_step,
        displacement=fieldv.displacement,
    )

    absolute = stitch_positions(absolute, resolution, stitch_mask)

    center_dir = node.center_dir()
    center_disp = generator.sample(center_dir[None, :]).displacement[0]
    center = center_dir * (base_radius + center_disp)

    return TileMesh(
        node=node,
        center=center,
        positions=(absolute - center[None, :]).astype(np.float32),
        normals=normals.astype(np.float32),
        biomes=fieldv.biome.astype(np.uint8),
        indices=grid_indices(resolution),
        resolution=resolution,
        positions_f64=absolute,
        normal_fallbacks=fallbacks,
    )


def export_obj(tiles, path) -> None:
    """Single deterministic OBJ: one group per tile, absolute positions,
    per-vertex normals. Freshly built tiles export their exact double
    precision vertices; decoded tiles recombine center + relative."""
    tiles = list(tiles)
    if not tiles:
        raise ValueError("no tiles to export")
    tiles.sort(key=lambda t: tuple(t.node))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("# planet tile export\n")
        offset = 1  # OBJ indices are 1-based
        for tile in tiles:
            f, d, x, y = tile.node
            fh.write(f"g f{f}_d{d}_x{x}_y{y}\n")
            absolute = tile.positions_f64
            if absolute is None:
                absolute = tile.absolute_positions()
            for px, py, pz in absolute:
                fh.write(f"v {px:.6f} {py:.6f} {pz:.6f}\n")
            for nx, ny, nz in tile.normals.astype(np.float64):
                fh.write(f"vn {nx:.6f} {ny:.6f} {nz:.6f}\n")
            idx = tile.indices.reshape(-1, 3) + offset
            for a, b, c in idx:
                fh.write(f"f {a}//{a} {b}//{b} {c}//{c}\n")
            offset += absolute.shape[0]


def encoded_size(vertex_count: int, index_count: int) -> int:
    pad = (-vertex_count) % 4
    return 32 + 24 + 12 * vertex_count + 12 * vertex_count + vertex_count + pad + 4 * index_count


def encode_tile(tile: TileMesh) -> bytes:
    v = tile.vertex_count
    i = int(tile.indices.shape[0])
    f, d, x, y = tile.node
    parts = [
        _HEADER.pack(MAGIC, VERSION, f, d, 0, x, y, tile.resolution, v, i),
        _CENTER.pack(*tile.center),
        np.ascontiguousarray(tile.positions, dtype="<f4").tobytes(),
        np.ascontiguousarray(tile.normals, dtype="<f4").tobytes(),
        np.ascontiguousarray(tile.biomes, dtype=np.uint8).tobytes(),
        b"\x00" * ((-v) % 4),
        np.ascontiguousarray(tile.indices, dtype="<u4").tobytes(),
    ]
    blob = b"".join(parts)
    assert len(blob) == encoded_size(v, i)
    return blob


def decode_tile(data: bytes) -> TileMesh:
    if len(data) >= 4 and data[:4] != MAGIC:
        raise BadMagicError(f"bad magic {data[:4]!r}")
    if len(data) < _HEADER.size:
        raise TruncatedError(f"{len(data)} bytes is shorter than the header")
    magic, version, f, d, pad, x, y, resolution, v, i = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}")
    if version != VERSION:
        raise VersionError(f"unsupported version {version}")
    want = encoded_size(v, i)
    if len(data) < want:
        raise TruncatedError(f"expected {want} bytes, got {len(data)}")
    if len(data) > want:
        raise TileCodecError(f"{len(data) - want} trailing bytes")
    if v != (resolution + 1) ** 2:
        raise TileCodecError("vertex count does not match resolution")
    node = QuadNode(f, d, x, y)
    try:
        validate_node(node)
    except DomainError as exc:
        raise TileCodecError(str(exc)) from None

    off = _HEADER.size
    center = np.array(_CENTER.unpack_from(data, off), dtype=np.float64)
    off += _CENTER.size
    positions = np.frombuffer(data, dtype="<f4", count=3 * v, offset=off).reshape(v, 3).copy()
    off += 12 * v
    normals = np.frombuffer(data, dtype="<f4", count=3 * v, offset=off).reshape(v, 3).copy()
    off += 12 * v
    biomes = np.frombuffer(data, dtype=np.uint8, count=v, offset=off).copy()
    off += v + ((-v) % 4)
    indices = np.frombuffer(data, dtype="<u4", count=i, offset=off).copy()
    if i and int(indices.max()) >= v:
        raise IndexRangeError(f"index {int(indices.max())} out of range for {v} vertices")
    return TileMesh(
        node=node,
        center=center,
        positions=positions,
        normals=normals,
        biomes=biomes,
        indices=indices,
        resolution=resolution,
    )
