import dataclasses

import numpy as np
import pytest

from planetgen.config import DecorationConfig, default_config, parse_config
from planetgen.errors import ConfigError
from planetgen.lod import CameraState
from planetgen.mesh import decode_tile
from planetgen.quadsphere import QuadNode, parse_address
from planetgen.scene import TreeConfig
from planetgen.service import MirrorClient, PlanetSession

R = 6.371e6


def _config(**overrides):
    cfg = default_config("simple", seed=7)
    cfg = dataclasses.replace(cfg, max_depth=6, resolution=8, **overrides)
    cfg.validate()
    return cfg


def _descent_path(target_dir, steps, top=10.0, bottom=1.002):
    radii = np.geomspace(top, bottom, steps) * R
    return [CameraState(position=tuple(target_dir * r)) for r in radii]


def test_open_delivers_six_roots_and_clouds():
    session = PlanetSession(_config())
    delta = session.open()
    assert [t.node for t in delta.added] == sorted(QuadNode(f, 0, 0, 0) for f in range(6))
    assert delta.removed == []
    assert set(delta.masks.values()) == {0}
    assert len(delta.scene) == 64  # cloud spawners ride along on open
    assert all(i.kind == "cloud" for i in delta.scene)
    with pytest.raises(ConfigError, match="already opened"):
        session.open()


def test_camera_before_open_rejected():
    session = PlanetSession(_config())
    with pytest.raises(ConfigError, match="not opened"):
        session.on_camera(CameraState(position=(R * 10, 0.0, 0.0)))


def test_same_seed_same_initial_bytes():
    a = PlanetSession(_config()).open()
    b = PlanetSession(_config()).open()
    assert [bytes(x) for x in a.tile_frames()] == [bytes(y) for y in b.tile_frames()]
    assert a.control_frame() == b.control_frame()


def test_static_camera_gives_empty_delta():
    session = PlanetSession(_config())
    session.open()
    cam = CameraState(position=(2.0 * R, 100.0, -50.0))
    session.on_camera(cam)
    again = session.on_camera(cam)
    assert again.empty


def test_control_frame_shape():
    session = PlanetSession(_config())
    delta = session.open()
    frame = delta.control_frame()
    assert frame["type"] == "delta"
    assert frame["tiles"] == 6
    assert frame["removed"] == []
    assert set(frame["masks"]) == {f"f{f}/d0/0/0" for f in range(6)}
    for addr in frame["masks"]:
        parse_address(addr)
    rec = frame["scene"][0]
    assert set(rec) == {"kind", "anchor", "rotation", "scale", "embed_depth"}
    tiles = [decode_tile(b) for b in delta.tile_frames()]
    assert [t.node for t in tiles] == [t.node for t in delta.added]


def test_replay_mirror_matches_server_leaves():
    session = PlanetSession(_config())
    mirror = MirrorClient()
    mirror.apply(session.open())
    dir0 = np.array([0.4, -0.7, 0.59])
    dir0 /= np.linalg.norm(dir0)
    for cam in _descent_path(dir0, 60):
        delta = session.on_camera(cam)
        mirror.apply(delta)  # raises on duplicate adds or unknown removes
        assert mirror.leaf_set() == set(session._tree.leaves)
        assert mirror.masks == session._tree.stitch_masks()
    stats = session.stats()
    assert stats.leaves == len(mirror.tiles)
    assert stats.vertices_resident == stats.leaves * (8 + 1) ** 2
    assert stats.max_depth_in_use == max(n.depth for n in mirror.tiles)
    assert stats.last_update_s > 0
    assert stats.max_depth_in_use == 6  # the descent actually refined


def test_payload_sent_once_per_leaf_tenure():
    session = PlanetSession(_config())
    session.open()
    held = {QuadNode(f, 0, 0, 0) for f in range(6)}
    dir0 = np.array([1.0, 0.2, 0.1])
    dir0 /= np.linalg.norm(dir0)
    path = _descent_path(dir0, 25) + _descent_path(dir0, 25)[::-1]
    for cam in path:
        delta = session.on_camera(cam)
        for t in delta.added:
            assert t.node not in held  # no re-send while resident
            held.add(t.node)
        for n in delta.removed:
            held.remove(n)


def test_trees_stream_with_deep_tiles():
    trees = TreeConfig(lod_threshold=4, reference_depth=4)
    cfg = _config(decoration=DecorationConfig(trees=trees))
    session = PlanetSession(cfg)
    gen = cfg.build_generator()
    session.open()
    # aim the descent at land so candidates are not all rejected as ocean
    rng = np.random.default_rng(1)
    dirs = rng.normal(size=(512, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    field = gen.sample(dirs)
    land = dirs[np.isin(field.biome, (2, 3))]  # grassland/forest
    assert len(land)
    target = land[0]
    seen = []
    for cam in _descent_path(target, 50):
        delta = session.on_camera(cam)
        seen.extend(delta.scene)
    assert seen
    assert all(i.kind in ("tree_palm", "tree_normal") for i in seen)
    for inst in seen:
        assert np.linalg.norm(inst.anchor) > cfg.base_radius


def test_mask_updates_resent_only_on_change():
    session = PlanetSession(_config())
    session.open()
    dir0 = np.array([0.0, 0.0, 1.0])
    sent: dict[QuadNode, int] = {n: 0 for n in session._tree.leaves}
    for cam in _descent_path(dir0, 40, top=8.0, bottom=1.01):
        delta = session.on_camera(cam)
        for node in delta.removed:
            sent.pop(node)
        for t in delta.added:
            assert t.node in delta.masks  # added tiles always carry a mask
        for node, mask in delta.masks.items():
            if node not in (t.node for t in delta.added):
                assert sent.get(node) != mask  # only changed masks re-sent
            sent[node] = mask
        assert sent == session._tree.stitch_masks()


def test_invalid_config_rejected_at_session():
    data = {"generator": "simple", "simple": {"fbm": {"octaves": 0}}}
    with pytest.raises(ConfigError, match="octaves >= 1"):
        PlanetSession(parse_config(data))
