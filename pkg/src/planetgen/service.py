"""Planet sessions: camera updates in, tile deltas out.

The session layer is IO-free. A delta carries built (unstitched) tiles for
newly added leaves plus the current stitch masks; clients collapse edge
vertices locally from the mask, so a tile's geometry is sent at most once
while it stays in the leaf set and mask changes cost one small JSON entry.

Wire form (used by the websocket server and any headless client): one JSON
control frame {type, removed, masks, scene, tiles:n} followed by n binary
tile frames.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .config import PlanetConfig
from .errors import ConfigError
from .lod import CameraState, QuadTree
from .mesh import TileMesh, build_tile, encode_tile
from .quadsphere import QuadNode
from .scene import SceneInstance, place_clouds, place_trees

_session_ids = itertools.count(1)


@dataclass
class SessionDelta:
    added: list[TileMesh] = field(default_factory=list)
    removed: list[QuadNode] = field(default_factory=list)
    masks: dict[QuadNode, int] = field(default_factory=dict)
    scene: list[SceneInstance] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not (self.added or self.removed or self.masks or self.scene)

    def control_frame(self) -> dict:
        return {
            "type": "delta",
            "removed": [n.address() for n in self.removed],
            "masks": {n.address(): m for n, m in sorted(self.masks.items())},
            "scene": [inst.to_record() for inst in self.scene],
            "tiles": len(self.added),
        }

    def tile_frames(self) -> list[bytes]:
        return [encode_tile(t) for t in self.added]


@dataclass(frozen=True)
class SessionStats:
    leaves: int
    max_depth_in_use: int
    vertices_resident: int
    last_update_s: float


class PlanetSession:
    """One deterministic planet plus its quadtree, driven by one client."""

    def __init__(self, config: PlanetConfig):
        config.validate()
        self.config = config
        self.session_id = f"s{next(_session_ids)}"
        self.generator = config.build_generator()
        self._tree = QuadTree(
            base_radius=config.base_radius,
            max_depth=config.max_depth,
            split_factor=config.split_factor,
            hysteresis=config.hysteresis,
            relief_margin=self.generator.relief_bound,
        )
        self._client_masks: dict[QuadNode, int] = {}
        self._opened = False
        self._last_update_s = 0.0

    def open(self) -> SessionDelta:
        """Initial delta: the six root tiles plus the planet's clouds."""
        if self._opened:
            raise ConfigError("session already opened")
        self._opened = True
        roots = sorted(self._tree.leaves)
        self._client_masks = {n: 0 for n in roots}
        return SessionDelta(
            added=[self._build(n) for n in roots],
            masks={n: 0 for n in roots},
            scene=place_clouds(self.config.seed, self.config.decoration.clouds,
                               self.config.base_radius),
        )

    def on_camera(self, camera: CameraState) -> SessionDelta:
        if not self._opened:
            raise ConfigError("session not opened")
        t0 = time.perf_counter()
        update = self._tree.update(camera)
        added_set = set(update.added)

        delta = SessionDelta(removed=update.removed)
        for node in update.added:
            delta.added.append(self._build(node))
            delta.masks[node] = update.stitch_masks[node]
            if node.depth >= self.config.decoration.trees.lod_threshold:
                delta.scene.extend(
                    place_trees(delta.added[-1], self.generator,
                                self.config.base_radius, self.config.seed,
                                self.config.decoration.trees)
                )
        for node, mask in update.stitch_masks.items():
            if node in added_set:
                continue
            if self._client_masks.get(node) != mask:
                delta.masks[node] = mask
        self._client_masks = dict(update.stitch_masks)
        self._last_update_s = time.perf_counter() - t0
        return delta

    def stats(self) -> SessionStats:
        leaves = self._tree.leaves
        per_tile = (self.config.resolution + 1) ** 2
        return SessionStats(
            leaves=len(leaves),
            max_depth_in_use=max(n.depth for n in leaves),
            vertices_resident=len(leaves) * per_tile,
            last_update_s=self._last_update_s,
        )

    def _build(self, node: QuadNode) -> TileMesh:
        # unstitched payload; the client applies the mask itself
        return build_tile(node, 0, self.generator, self.config.resolution,
                          self.config.base_radius)


class MirrorClient:
    """Headless client mirror: applies deltas the way a viewer would.

    Keeps decoded tiles keyed by address and the masks the server last
    announced; used by tests to check client/server agreement.
    """

    def __init__(self):
        self.tiles: dict[QuadNode, TileMesh] = {}
        self.masks: dict[QuadNode, int] = {}

    def apply(self, delta: SessionDelta):
        for node in delta.removed:
            if node not in self.tiles:
                raise ConfigError(f"remove for unknown tile {node.address()}")
            del self.tiles[node]
            self.masks.pop(node, None)
        for tile in delta.added:
            if tile.node in self.tiles:
                raise ConfigError(f"duplicate tile {tile.node.address()}")
            self.tiles[tile.node] = tile
        for node, mask in delta.masks.items():
            if node not in self.tiles:
                raise ConfigError(f"mask for unknown tile {node.address()}")
            self.masks[node] = mask

    def leaf_set(self) -> set:
        return set(self.tiles)
