"""Deterministic decoration: trees per tile, cloud spawners, sun/moon state.

Everything here is a pure function of (seed, address, config), so a tile
rebuilt at the same depth reproduces its instances exactly and nothing has
to be stored between LOD changes. Trees stay grounded across LOD swaps by
extending the trunk below the anchor (embed_depth) instead of re-anchoring.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError
from .noise import derive_seed
from .quadsphere import face_uv_to_sphere
from .terrain import Biome

# domain salts, same two-letter scheme as the terrain layer salts
_TREE_SALT = 0x5452
_CLOUD_SALT = 0x434C

KIND_TREE_PALM = "tree_palm"
KIND_TREE_NORMAL = "tree_normal"
KIND_CLOUD = "cloud"

# biomes that never host trees
_TREELESS = frozenset({int(Biome.OCEAN), int(Biome.MOUNTAIN), int(Biome.LAVA)})


@dataclass(frozen=True)
class SceneInstance:
    kind: str
    anchor: np.ndarray  # meters, f64
    rotation: float  # radians about local up
    scale: float
    embed_depth: float  # trunk extension below the anchor, meters

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "anchor": [float(c) for c in self.anchor],
            "rotation": float(self.rotation),
            "scale": float(self.scale),
            "embed_depth": float(self.embed_depth),
        }


@dataclass(frozen=True)
class TreeConfig:
    """Tree placement knobs.

    Densities are instance counts per tile at reference_depth; shallower or
    deeper tiles scale by tile area (factor 4 per level) so areal density
    stays constant. Tiles below lod_threshold get no trees at all.
    """

    density_forest: float = 24.0
    density_grassland: float = 8.0
    density_beach: float = 6.0
    lod_threshold: int = 6
    reference_depth: int = 6
    embed_depth: float = 2.0
    scale_min: float = 0.8
    scale_max: float = 1.3

    def validate(self):
        for name in ("density_forest", "density_grassland", "density_beach"):
            if not getattr(self, name) >= 0:
                raise ConfigError(f"{name} >= 0")
        if self.lod_threshold < 0:
            raise ConfigError("lod_threshold >= 0")
        if self.reference_depth < 0:
            raise ConfigError("reference_depth >= 0")
        if not self.embed_depth > 0:
            raise ConfigError("embed_depth > 0")
        if not 0 < self.scale_min <= self.scale_max:
            raise ConfigError("0 < scale_min <= scale_max")

    def density_for(self, biome: int) -> float:
        if biome == Biome.FOREST:
            return self.density_forest
        if biome == Biome.GRASSLAND:
            return self.density_grassland
        if biome == Biome.BEACH:
            return self.density_beach
        return 0.0


@dataclass(frozen=True)
class CloudConfig:
    count: int = 64
    altitude_m: float = 6000.0  # above base radius
    scale_min: float = 0.5
    scale_max: float = 2.0

    def validate(self):
        if self.count < 0:
            raise ConfigError("count >= 0")
        if not self.altitude_m > 0:
            raise ConfigError("altitude_m > 0")
        if not 0 < self.scale_min <= self.scale_max:
            raise ConfigError("0 < scale_min <= scale_max")


@dataclass(frozen=True)
class OrbitConfig:
    """Sun and moon motion. The moon orbits faster and closer than the
    (directional) sun; both move in the equatorial plane."""

    sun_period_s: float = 1200.0
    moon_period_s: float = 400.0
    moon_radius_m: float = 2.5e7

    def validate(self):
        if not self.sun_period_s > 0:
            raise ConfigError("sun_period_s > 0")
        if not self.moon_period_s > 0:
            raise ConfigError("moon_period_s > 0")
        if not self.moon_period_s < self.sun_period_s:
            raise ConfigError("moon_period_s < sun_period_s")
        if not self.moon_radius_m > 0:
            raise ConfigError("moon_radius_m > 0")


@dataclass(frozen=True)
class Ephemeris:
    sun_direction: np.ndarray  # unit vector
    moon_position: np.ndarray  # meters
    moon_phase: float  # 0 = new, 1 = full
    time: float


def place_trees(tile, generator, base_radius, seed, config: Optional[TreeConfig] = None):
    """Tree instances for one tile, seeded by the tile address.

    The candidate count comes from the tile's dominant biome; each candidate
    lands on a uniform random spot of the quad, is re-sampled against the
    generator there, and is dropped when the spot turns out to be ocean,
    mountain or lava. Beach spots grow palms, everything else normal trees.
    Returns an empty list below the LOD threshold.
    """
    cfg = config or TreeConfig()
    node = tile.node
    if node.depth < cfg.lod_threshold:
        return []

    counts = np.bincount(tile.biomes, minlength=6)
    dominant = int(counts.argmax())
    area_factor = 4.0 ** (cfg.reference_depth - node.depth)
    n = int(round(cfg.density_for(dominant) * area_factor))
    if n <= 0:
        return []

    rng = np.random.default_rng(
        derive_seed(seed, _TREE_SALT, node.face, node.depth, node.x, node.y)
    )
    # one batch per stream so rejection cannot shift later draws
    spots = rng.random((n, 2))
    rotations = rng.uniform(0.0, 2.0 * np.pi, n)
    scales = rng.uniform(cfg.scale_min, cfg.scale_max, n)

    side = 1 << node.depth
    dirs = face_uv_to_sphere(
        node.face, (node.x + spots[:, 0]) / side, (node.y + spots[:, 1]) / side
    )
    ground = generator.sample(dirs)

    out = []
    for i in range(n):
        b = int(ground.biome[i])
        if b in _TREELESS:
            continue
        kind = KIND_TREE_PALM if b == Biome.BEACH else KIND_TREE_NORMAL
        anchor = dirs[i] * (base_radius + ground.displacement[i])
        out.append(
            SceneInstance(kind, anchor, float(rotations[i]), float(scales[i]),
                          cfg.embed_depth)
        )
    return out


def place_clouds(seed, config: Optional[CloudConfig] = None, base_radius: float = 0.0):
    """Cloud spawners at uniform random directions around the sphere."""
    cfg = config or CloudConfig()
    if cfg.count == 0:
        return []
    rng = np.random.default_rng(derive_seed(seed, _CLOUD_SALT))
    z = rng.uniform(-1.0, 1.0, cfg.count)
    phi = rng.uniform(0.0, 2.0 * np.pi, cfg.count)
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    dirs = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)
    rotations = rng.uniform(0.0, 2.0 * np.pi, cfg.count)
    scales = rng.uniform(cfg.scale_min, cfg.scale_max, cfg.count)
    radius = base_radius + cfg.altitude_m
    return [
        SceneInstance(KIND_CLOUD, dirs[i] * radius, float(rotations[i]),
                      float(scales[i]), 0.0)
        for i in range(cfg.count)
    ]


def ephemeris_at(time: float, config: Optional[OrbitConfig] = None) -> Ephemeris:
    """Sun direction, moon position and lunar phase at a given time.

    Both bodies start at +X and sweep the equatorial plane. The phase is
    (1 - cos theta) / 2 for theta the sun/moon angular separation, so the
    moon in front of the sun is new (0) and opposite it is full (1).
    """
    cfg = config or OrbitConfig()
    if not np.isfinite(time):
        raise ConfigError("time must be finite")
    sun_a = 2.0 * np.pi * time / cfg.sun_period_s
    moon_a = 2.0 * np.pi * time / cfg.moon_period_s
    sun = np.array([np.cos(sun_a), np.sin(sun_a), 0.0])
    moon_dir = np.array([np.cos(moon_a), np.sin(moon_a), 0.0])
    phase = (1.0 - float(np.dot(sun, moon_dir))) / 2.0
    return Ephemeris(
        sun_direction=sun,
        moon_position=moon_dir * cfg.moon_radius_m,
        moon_phase=min(1.0, max(0.0, phase)),
        time=float(time),
    )
