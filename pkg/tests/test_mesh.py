import numpy as np
import pytest

from planetgen.errors import (
    BadMagicError,
    ConfigError,
    IndexRangeError,
    TileCodecError,
    TruncatedError,
    VersionError,
)
from planetgen.mesh import (
    TileMesh,
    build_tile,
    compute_normals,
    decode_tile,
    edge_vertex_indices,
    encode_tile,
    encoded_size,
    export_obj,
    grid_indices,
    stitch_positions,
)
from planetgen.mesh import _grid_uv
from planetgen.noise import FbmParams
from planetgen.quadsphere import (
    EDGE_E,
    EDGE_N,
    EDGE_S,
    EDGE_W,
    EDGES,
    QuadNode,
    neighbor,
)
from planetgen.quadsphere import _uv_dir
from planetgen.terrain import (
    SimpleGenerator,
    SimplePlanetParams,
    SurfaceField,
)

from reference_mesh import chord_angle, point_polyline_distance

R = 6.371e6


def _gen(seed=42):
    return SimpleGenerator(
        SimplePlanetParams(
            fbm=FbmParams(octaves=4, base_frequency=1.3),
            base_factor=8000.0,
            ocean_level=1000.0,
        ),
        seed,
    )


class ConstantField:
    def __init__(self, value=1000.0):
        self.value = value

    def sample(self, dirs):
        d = np.asarray(dirs)
        return SurfaceField(
            displacement=np.full(d.shape[0], self.value),
            biome=np.zeros(d.shape[0], dtype=np.uint8),
        )


class RampField:
    """Displacement linear in the z component of the direction."""

    def sample(self, dirs):
        d = np.asarray(dirs)
        return SurfaceField(
            displacement=2000.0 * (1.0 + d[:, 2]),
            biome=np.zeros(d.shape[0], dtype=np.uint8),
        )


def test_grid_arithmetic():
    tile = build_tile(QuadNode(0, 3, 4, 2), 0, _gen(), 16, R)
    assert tile.vertex_count == 289
    assert len(tile.indices) == 3 * 512
    assert tile.indices.max() < tile.vertex_count
    assert tile.normals.shape == (289, 3)
    assert tile.biomes.shape == (289,)
    assert tile.positions.dtype == np.float32
    assert tile.center.dtype == np.float64


def test_same_depth_seam_bit_identical():
    gen = _gen()
    a = build_tile(QuadNode(0, 3, 4, 2), 0, gen, 16, R)
    b = build_tile(QuadNode(0, 3, 5, 2), 0, gen, 16, R)
    ia = edge_vertex_indices(16, EDGE_E)
    ib = edge_vertex_indices(16, EDGE_W)
    assert np.array_equal(a.positions_f64[ia], b.positions_f64[ib])


def test_seams_across_all_twelve_cube_edges():
    gen = _gen(7)
    seen = set()
    for face in range(6):
        for edge in EDGES:
            node = QuadNode(face, 1, *{EDGE_N: (0, 1), EDGE_E: (1, 0), EDGE_S: (0, 0), EDGE_W: (0, 0)}[edge])
            m = neighbor(node, edge)
            if m.face == face:
                continue
            key = frozenset([(face, edge), (m.face,)])
            seen.add((min(face, m.face), max(face, m.face)))
            back = next(e for e in EDGES if neighbor(m, e) == node)
            a = build_tile(node, 0, gen, 8, R)
            b = build_tile(m, 0, gen, 8, R)
            pa = a.positions_f64[edge_vertex_indices(8, edge)]
            pb = b.positions_f64[edge_vertex_indices(8, back)]
            assert np.array_equal(pa, pb) or np.array_equal(pa, pb[::-1])
    assert len(seen) == 12  # every cube edge covered


def test_stitched_fine_edge_lies_on_coarse_polyline():
    gen = _gen()
    coarse_node, fine_node = QuadNode(0, 2, 2, 1), QuadNode(0, 3, 3, 2)
    coarse_edge, fine_edge = EDGE_W, EDGE_E
    fine = build_tile(fine_node, 1 << fine_edge, gen, 16, R)
    coarse = build_tile(coarse_node, 0, gen, 16, R)
    fe = fine.positions_f64[edge_vertex_indices(16, fine_edge)]
    ce = coarse.positions_f64[edge_vertex_indices(16, coarse_edge)]
    for p in fe:
        assert point_polyline_distance(p, ce) / np.linalg.norm(p) < 1e-9
    # even fine vertices coincide bit-exactly with coarse vertices
    for p in fe[::2]:
        assert any(np.array_equal(p, q) for q in ce)


def test_stitched_cross_face_edge():
    gen = _gen(3)
    coarse = QuadNode(0, 1, 0, 1)
    m = neighbor(coarse, EDGE_N)
    assert m.face != coarse.face
    # fine children of m adjacent to the shared edge
    ct = build_tile(coarse, 0, gen, 8, R)
    ce = ct.positions_f64[edge_vertex_indices(8, EDGE_N)]
    hit = 0
    for fine in m.children():
        touching = [e for e in EDGES if neighbor(fine, e).parent() == coarse]
        if not touching:
            continue
        hit += 1
        ft = build_tile(fine, 1 << touching[0], gen, 8, R)
        for p in ft.positions_f64[edge_vertex_indices(8, touching[0])]:
            assert point_polyline_distance(p, ce) / np.linalg.norm(p) < 1e-9
    assert hit == 2


def test_stitch_zero_mask_is_identity():
    gen = _gen()
    a = build_tile(QuadNode(1, 2, 1, 1), 0, gen, 8, R)
    p = a.positions_f64
    assert stitch_positions(p, 8, 0) is p


def test_stitch_only_moves_odd_edge_vertices():
    gen = _gen()
    plain = build_tile(QuadNode(1, 2, 1, 1), 0, gen, 8, R)
    stitched = build_tile(QuadNode(1, 2, 1, 1), 0b1111, gen, 8, R)
    moved = np.any(plain.positions_f64 != stitched.positions_f64, axis=1)
    odd_edge = set()
    for e in EDGES:
        odd_edge.update(edge_vertex_indices(8, e)[1::2].tolist())
    assert set(np.nonzero(moved)[0].tolist()) <= odd_edge
    assert moved.any()


def test_odd_resolution_with_mask_rejected():
    with pytest.raises(ConfigError, match="even"):
        build_tile(QuadNode(0, 1, 0, 0), 1, _gen(), 5, R)
    # odd resolution without stitching is allowed
    t = build_tile(QuadNode(0, 1, 0, 0), 0, _gen(), 5, R)
    assert t.vertex_count == 36
    with pytest.raises(ConfigError, match="resolution"):
        build_tile(QuadNode(0, 1, 0, 0), 0, _gen(), 1, R)


def test_flat_field_normals_radial():
    node = QuadNode(2, 1, 0, 1)
    tile = build_tile(node, 0, ConstantField(), 8, R)
    dirs = _uv_dir(2, *_grid_uv(node, 8)).reshape(-1, 3)
    err = np.linalg.norm(tile.normals.astype(np.float64) - dirs, axis=1)
    assert err.max() < 1e-6
    assert tile.normal_fallbacks == 0


def test_ramp_normals_tilt_against_gradient_and_match_finer_oracle():
    node = QuadNode(0, 3, 4, 2)
    U, V = _grid_uv(node, 8)
    step = node.angular_size() / 8 / 2
    n1, _ = compute_normals(0, U, V, RampField(), R, step)
    n2, _ = compute_normals(0, U, V, RampField(), R, step / 10.0)
    assert chord_angle(n1, n2).max() < 1e-4
    # displacement grows toward +z: normals lean away from +z relative
    # to the radial direction
    dirs = _uv_dir(0, U, V).reshape(-1, 3)
    tangential_z = np.array([0.0, 0.0, 1.0])[None, :] - dirs[:, 2:3] * dirs
    lean = np.sum((n1 - dirs) * tangential_z, axis=1)
    assert np.all(lean < 0)


def test_normals_unit_and_close_to_finer_oracle_on_terrain():
    gen = _gen(11)
    rng = np.random.default_rng(4)
    for _ in range(12):
        node = QuadNode(int(rng.integers(0, 6)), 3, int(rng.integers(0, 8)), int(rng.integers(0, 8)))
        U, V = _grid_uv(node, 8)
        step = node.angular_size() / 8 / 2
        n1, _ = compute_normals(node.face, U, V, gen, R, step)
        n2, _ = compute_normals(node.face, U, V, gen, R, step / 10.0)
        assert np.allclose(np.linalg.norm(n1, axis=1), 1.0, atol=1e-12)
        assert np.degrees(chord_angle(n1, n2).max()) < 0.5


def test_tile_biomes_match_generator():
    gen = _gen()
    node = QuadNode(4, 2, 1, 3)
    tile = build_tile(node, 0, gen, 8, R)
    dirs = _uv_dir(node.face, *_grid_uv(node, 8)).reshape(-1, 3)
    assert np.array_equal(tile.biomes, gen.sample(dirs).biome)


def test_absolute_positions_recombination():
    tile = build_tile(QuadNode(0, 2, 1, 1), 0, _gen(), 8, R)
    recon = tile.absolute_positions()
    assert np.array_equal(recon, tile.center[None, :] + tile.positions.astype(np.float64))


def test_rtc_reconstruction_under_1mm_at_1e7():
    gen = _gen(7)
    node = QuadNode(0, 10, 512, 300)
    tile = build_tile(node, 0, gen, 16, 1e7)
    err = np.linalg.norm(tile.absolute_positions() - tile.positions_f64, axis=1)
    assert err.max() < 1e-3


def test_codec_round_trip_random_tiles():
    rng = np.random.default_rng(0)
    for _ in range(100):
        res = int(rng.choice([2, 4, 8]))
        v = (res + 1) ** 2
        i = 3 * 2 * res * res
        depth = int(rng.integers(0, 12))
        tile = TileMesh(
            node=QuadNode(int(rng.integers(0, 6)), depth,
                          int(rng.integers(0, 1 << depth)), int(rng.integers(0, 1 << depth))),
            center=rng.normal(size=3) * 1e7,
            positions=rng.normal(size=(v, 3)).astype(np.float32),
            normals=rng.normal(size=(v, 3)).astype(np.float32),
            biomes=rng.integers(0, 6, size=v).astype(np.uint8),
            indices=rng.integers(0, v, size=i).astype(np.uint32),
            resolution=res,
        )
        blob = encode_tile(tile)
        assert blob[:4] == b"PTIL"
        assert len(blob) == encoded_size(v, i)
        back = decode_tile(blob)
        assert back.node == tile.node
        assert back.resolution == tile.resolution
        assert np.array_equal(back.center, tile.center)
        assert np.array_equal(back.positions, tile.positions)
        assert np.array_equal(back.normals, tile.normals)
        assert np.array_equal(back.biomes, tile.biomes)
        assert np.array_equal(back.indices, tile.indices)
        assert back.positions_f64 is None


def test_codec_error_classes():
    tile = build_tile(QuadNode(0, 1, 0, 0), 0, _gen(), 4, R)
    blob = encode_tile(tile)

    with pytest.raises(BadMagicError):
        decode_tile(b"JUNK" + blob[4:])
    with pytest.raises(VersionError):
        bad = bytearray(blob)
        bad[4] = 99
        decode_tile(bytes(bad))
    with pytest.raises(TruncatedError):
        decode_tile(blob[:10])
    with pytest.raises(TruncatedError):
        decode_tile(blob[:-4])
    with pytest.raises(TileCodecError):
        decode_tile(blob + b"\x00")
    with pytest.raises(IndexRangeError):
        bad = bytearray(blob)
        v = tile.vertex_count
        off = len(blob) - 4  # last index
        bad[off:off + 4] = int(v).to_bytes(4, "little")
        decode_tile(bytes(bad))


def test_decode_rejects_inconsistent_header():
    tile = build_tile(QuadNode(0, 1, 0, 0), 0, _gen(), 4, R)
    blob = bytearray(encode_tile(tile))
    blob[16:20] = int(99).to_bytes(4, "little")  # resolution field
    with pytest.raises(TileCodecError):
        decode_tile(bytes(blob))


def test_export_obj_deterministic_and_counts(tmp_path):
    gen = _gen()
    tiles = [
        build_tile(QuadNode(0, 1, 0, 0), 0, gen, 2, R),
        build_tile(QuadNode(0, 1, 1, 0), 0, gen, 2, R),
    ]
    p1 = tmp_path / "a.obj"
    p2 = tmp_path / "b.obj"
    export_obj(tiles, p1)
    export_obj(list(reversed(tiles)), p2)  # order-insensitive (sorted)
    b1 = p1.read_bytes()
    assert b1 == p2.read_bytes()
    text = b1.decode()
    assert "g f0_d1_x0_y0\n" in text
    first_group = text.split("g f0_d1_x0_y0\n")[1].split("g ")[0]
    assert first_group.count("\nv ") + first_group.startswith("v ") == 9
    assert text.count("f ") == 2 * 2 * 2 * 2  # two tiles, 2x2 cells, 2 tris


def test_export_obj_empty_list_rejected(tmp_path):
    target = tmp_path / "never.obj"
    with pytest.raises(ValueError):
        export_obj([], target)
    assert not target.exists()


def test_grid_indices_cover_all_cells():
    idx = grid_indices(4).reshape(-1, 3)
    assert idx.shape == (32, 3)
    assert idx.max() == 24
    # every triangle references three distinct vertices
    assert np.all(idx[:, 0] != idx[:, 1])
    assert np.all(idx[:, 1] != idx[:, 2])
