"""Planet configuration: JSON files on disk, dataclasses in memory.

Meter-valued JSON fields carry an explicit _m suffix (base_radius_m,
ocean_level_m, ...); dimensionless fields do not. Parsing is strict:
unknown keys are rejected so typos fail loudly instead of silently
falling back to defaults. parse -> serialize -> parse is an identity.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError
from .noise import FbmParams
from .scene import CloudConfig, OrbitConfig, TreeConfig
from .spline import SplineCurve
from .terrain import (
    BiomeThresholds,
    LayeredPlanetParams,
    NoiseLayer,
    SimplePlanetParams,
    make_generator,
)

_GENERATOR_KINDS = ("simple", "layered")
_LAYER_NAMES = ("continentalness", "erosion", "peaks_valleys", "temperature")


@dataclass(frozen=True)
class DecorationConfig:
    trees: TreeConfig = TreeConfig()
    clouds: CloudConfig = CloudConfig()
    orbit: OrbitConfig = OrbitConfig()

    def validate(self):
        self.trees.validate()
        self.clouds.validate()
        self.orbit.validate()


@dataclass(frozen=True)
class PlanetConfig:
    seed: int = 0
    base_radius: float = 6.371e6
    generator: str = "simple"
    simple: Optional[SimplePlanetParams] = None
    layered: Optional[LayeredPlanetParams] = None
    resolution: int = 16
    max_depth: int = 8
    split_factor: float = 1.5
    hysteresis: float = 1.2
    decoration: DecorationConfig = DecorationConfig()

    def validate(self):
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")
        if not (np.isfinite(self.base_radius) and self.base_radius > 0):
            raise ConfigError("base_radius_m > 0")
        if self.generator not in _GENERATOR_KINDS:
            raise ConfigError(f"generator one of {_GENERATOR_KINDS}")
        blocks = [k for k in _GENERATOR_KINDS if getattr(self, k) is not None]
        if blocks != [self.generator]:
            raise ConfigError("exactly one generator block, matching 'generator'")
        if not (isinstance(self.resolution, int) and self.resolution >= 2):
            raise ConfigError("resolution >= 2")
        if self.resolution % 2:
            raise ConfigError("resolution must be even for stitching")
        if not (isinstance(self.max_depth, int) and self.max_depth >= 0):
            raise ConfigError("max_depth >= 0")
        if not self.split_factor > 0:
            raise ConfigError("split_factor > 0")
        if not self.hysteresis > 1:
            raise ConfigError("hysteresis > 1")
        params = self.simple if self.generator == "simple" else self.layered
        params.validate()
        self.decoration.validate()
        # relief must stay below the planet radius or displaced geometry
        # can cross the origin
        gen = make_generator(self.generator, params, self.seed)
        if gen.relief_bound >= self.base_radius:
            raise ConfigError("relief bound must be below base_radius_m")

    def params(self):
        return self.simple if self.generator == "simple" else self.layered

    def build_generator(self):
        return make_generator(self.generator, self.params(), self.seed)


# ---------------------------------------------------------------- parsing

def _fail(path, problem):
    raise ConfigError(f"{path}: {problem}" if path else problem)


def _need_dict(v, path):
    if not isinstance(v, dict):
        _fail(path, "expected an object")
    return v


def _check_keys(d, path, allowed):
    extra = sorted(set(d) - set(allowed))
    if extra:
        _fail(path, f"unknown key '{extra[0]}'")


def _as_float(d, key, path, default=None):
    if key not in d:
        if default is None:
            _fail(path, f"missing '{key}'")
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(f"{path}.{key}" if path else key, "expected a number")
    return float(v)


def _as_int(d, key, path, default=None):
    if key not in d:
        if default is None:
            _fail(path, f"missing '{key}'")
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(f"{path}.{key}" if path else key, "expected an integer")
    return v


def _as_str(d, key, path, default=None):
    if key not in d:
        if default is None:
            _fail(path, f"missing '{key}'")
        return default
    v = d[key]
    if not isinstance(v, str):
        _fail(f"{path}.{key}" if path else key, "expected a string")
    return v


def _parse_fbm(d, path):
    d = _need_dict(d, path)
    _check_keys(d, path, ("octaves", "persistence", "lacunarity",
                          "exponentiation", "base_frequency"))
    ref = FbmParams()
    return FbmParams(
        octaves=_as_int(d, "octaves", path, ref.octaves),
        persistence=_as_float(d, "persistence", path, ref.persistence),
        lacunarity=_as_float(d, "lacunarity", path, ref.lacunarity),
        exponentiation=_as_float(d, "exponentiation", path, ref.exponentiation),
        base_frequency=_as_float(d, "base_frequency", path, ref.base_frequency),
    )


def _parse_spline(d, path):
    d = _need_dict(d, path)
    _check_keys(d, path, ("mode", "points"))
    pts = d.get("points")
    if not isinstance(pts, list) or any(
        not isinstance(p, list) or len(p) != 2 for p in pts
    ):
        _fail(path, "'points' must be a list of [x, y] pairs")
    points = tuple((float(p[0]), float(p[1])) for p in pts)
    return SplineCurve(points=points, mode=_as_str(d, "mode", path, "monotone_cubic"))


def _parse_thresholds(d, path):
    if d is None:
        return BiomeThresholds()
    d = _need_dict(d, path)
    _check_keys(d, path, ("beach_band_fraction", "mountain_fraction",
                          "lava_threshold", "forest_temperature"))
    ref = BiomeThresholds()
    ft = d.get("forest_temperature")
    if ft is None:
        forest = ref.forest_temperature
    elif isinstance(ft, list) and len(ft) == 2:
        forest = (float(ft[0]), float(ft[1]))
    else:
        _fail(path, "'forest_temperature' must be [lo, hi]")
    return BiomeThresholds(
        beach_band_fraction=_as_float(d, "beach_band_fraction", path,
                                      ref.beach_band_fraction),
        mountain_fraction=_as_float(d, "mountain_fraction", path,
                                    ref.mountain_fraction),
        lava_threshold=_as_float(d, "lava_threshold", path, ref.lava_threshold),
        forest_temperature=forest,
    )


def _parse_simple(d, path):
    d = _need_dict(d, path)
    _check_keys(d, path, ("fbm", "base_factor_m", "ocean_level_m",
                          "sample_mode", "thresholds"))
    ref = SimplePlanetParams()
    return SimplePlanetParams(
        fbm=_parse_fbm(d.get("fbm", {}), f"{path}.fbm"),
        base_factor=_as_float(d, "base_factor_m", path, ref.base_factor),
        ocean_level=_as_float(d, "ocean_level_m", path, ref.ocean_level),
        sample_mode=_as_str(d, "sample_mode", path, ref.sample_mode),
        thresholds=_parse_thresholds(d.get("thresholds"), f"{path}.thresholds"),
    )


def _parse_layer(d, path):
    d = _need_dict(d, path)
    _check_keys(d, path, ("fbm", "spline"))
    if "spline" not in d:
        _fail(path, "missing 'spline'")
    return NoiseLayer(
        fbm=_parse_fbm(d.get("fbm", {}), f"{path}.fbm"),
        spline=_parse_spline(d["spline"], f"{path}.spline"),
    )


def _parse_layered(d, path):
    d = _need_dict(d, path)
    _check_keys(d, path, _LAYER_NAMES + ("amplitude_m", "ocean_level_m",
                                         "sample_mode", "thresholds"))
    layers = {}
    for name in _LAYER_NAMES:
        if name not in d:
            _fail(path, f"missing '{name}'")
        layers[name] = _parse_layer(d[name], f"{path}.{name}")
    return LayeredPlanetParams(
        amplitude=_as_float(d, "amplitude_m", path, 8000.0),
        ocean_level=_as_float(d, "ocean_level_m", path, 2000.0),
        sample_mode=_as_str(d, "sample_mode", path, "sphere3d"),
        thresholds=_parse_thresholds(d.get("thresholds"), f"{path}.thresholds"),
        **layers,
    )


def _parse_trees(d, path):
    if d is None:
        return TreeConfig()
    d = _need_dict(d, path)
    _check_keys(d, path, ("density_forest", "density_grassland", "density_beach",
                          "lod_threshold", "reference_depth", "embed_depth_m",
                          "scale_min", "scale_max"))
    ref = TreeConfig()
    return TreeConfig(
        density_forest=_as_float(d, "density_forest", path, ref.density_forest),
        density_grassland=_as_float(d, "density_grassland", path,
                                    ref.density_grassland),
        density_beach=_as_float(d, "density_beach", path, ref.density_beach),
        lod_threshold=_as_int(d, "lod_threshold", path, ref.lod_threshold),
        reference_depth=_as_int(d, "reference_depth", path, ref.reference_depth),
        embed_depth=_as_float(d, "embed_depth_m", path, ref.embed_depth),
        scale_min=_as_float(d, "scale_min", path, ref.scale_min),
        scale_max=_as_float(d, "scale_max", path, ref.scale_max),
    )


def _parse_clouds(d, path):
    if d is None:
        return CloudConfig()
    d = _need_dict(d, path)
    _check_keys(d, path, ("count", "altitude_m", "scale_min", "scale_max"))
    ref = CloudConfig()
    return CloudConfig(
        count=_as_int(d, "count", path, ref.count),
        altitude_m=_as_float(d, "altitude_m", path, ref.altitude_m),
        scale_min=_as_float(d, "scale_min", path, ref.scale_min),
        scale_max=_as_float(d, "scale_max", path, ref.scale_max),
    )


def _parse_orbit(d, path):
    if d is None:
        return OrbitConfig()
    d = _need_dict(d, path)
    _check_keys(d, path, ("sun_period_s", "moon_period_s", "moon_radius_m"))
    ref = OrbitConfig()
    return OrbitConfig(
        sun_period_s=_as_float(d, "sun_period_s", path, ref.sun_period_s),
        moon_period_s=_as_float(d, "moon_period_s", path, ref.moon_period_s),
        moon_radius_m=_as_float(d, "moon_radius_m", path, ref.moon_radius_m),
    )


def _parse_decoration(d, path):
    if d is None:
        return DecorationConfig()
    d = _need_dict(d, path)
    _check_keys(d, path, ("trees", "clouds", "orbit"))
    return DecorationConfig(
        trees=_parse_trees(d.get("trees"), f"{path}.trees"),
        clouds=_parse_clouds(d.get("clouds"), f"{path}.clouds"),
        orbit=_parse_orbit(d.get("orbit"), f"{path}.orbit"),
    )


def parse_config(data: dict) -> PlanetConfig:
    """Dict (decoded JSON) to a validated PlanetConfig."""
    data = _need_dict(data, "")
    _check_keys(data, "", ("seed", "base_radius_m", "generator", "simple",
                           "layered", "resolution", "max_depth", "split_factor",
                           "hysteresis", "decoration"))
    generator = _as_str(data, "generator", "", "simple")
    cfg = PlanetConfig(
        seed=_as_int(data, "seed", "", 0),
        base_radius=_as_float(data, "base_radius_m", "", 6.371e6),
        generator=generator,
        simple=(_parse_simple(data["simple"], "simple")
                if "simple" in data else None),
        layered=(_parse_layered(data["layered"], "layered")
                 if "layered" in data else None),
        resolution=_as_int(data, "resolution", "", 16),
        max_depth=_as_int(data, "max_depth", "", 8),
        split_factor=_as_float(data, "split_factor", "", 1.5),
        hysteresis=_as_float(data, "hysteresis", "", 1.2),
        decoration=_parse_decoration(data.get("decoration"), "decoration"),
    )
    if cfg.generator == "simple" and cfg.simple is None and "layered" not in data:
        # minimal configs may omit the block; it is fully defaultable
        cfg = dataclasses.replace(cfg, simple=SimplePlanetParams())
    cfg.validate()
    return cfg


def load_config(path) -> PlanetConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ConfigError(f"invalid JSON: {e}") from e
    return parse_config(data)


# ------------------------------------------------------------ serialization

def _fbm_dict(p: FbmParams):
    return {
        "octaves": p.octaves,
        "persistence": p.persistence,
        "lacunarity": p.lacunarity,
        "exponentiation": p.exponentiation,
        "base_frequency": p.base_frequency,
    }


def _spline_dict(s: SplineCurve):
    return {"mode": s.mode, "points": [[x, y] for x, y in s.points]}


def _thresholds_dict(t: BiomeThresholds):
    return {
        "beach_band_fraction": t.beach_band_fraction,
        "mountain_fraction": t.mountain_fraction,
        "lava_threshold": t.lava_threshold,
        "forest_temperature": list(t.forest_temperature),
    }


def config_to_dict(cfg: PlanetConfig) -> dict:
    out = {
        "seed": cfg.seed,
        "base_radius_m": cfg.base_radius,
        "generator": cfg.generator,
        "resolution": cfg.resolution,
        "max_depth": cfg.max_depth,
        "split_factor": cfg.split_factor,
        "hysteresis": cfg.hysteresis,
    }
    if cfg.simple is not None:
        p = cfg.simple
        out["simple"] = {
            "fbm": _fbm_dict(p.fbm),
            "base_factor_m": p.base_factor,
            "ocean_level_m": p.ocean_level,
            "sample_mode": p.sample_mode,
            "thresholds": _thresholds_dict(p.thresholds),
        }
    if cfg.layered is not None:
        p = cfg.layered
        block = {
            "amplitude_m": p.amplitude,
            "ocean_level_m": p.ocean_level,
            "sample_mode": p.sample_mode,
            "thresholds": _thresholds_dict(p.thresholds),
        }
        for name in _LAYER_NAMES:
            layer: NoiseLayer = getattr(p, name)
            block[name] = {
                "fbm": _fbm_dict(layer.fbm),
                "spline": _spline_dict(layer.spline),
            }
        out["layered"] = block
    deco = cfg.decoration
    out["decoration"] = {
        "trees": {
            "density_forest": deco.trees.density_forest,
            "density_grassland": deco.trees.density_grassland,
            "density_beach": deco.trees.density_beach,
            "lod_threshold": deco.trees.lod_threshold,
            "reference_depth": deco.trees.reference_depth,
            "embed_depth_m": deco.trees.embed_depth,
            "scale_min": deco.trees.scale_min,
            "scale_max": deco.trees.scale_max,
        },
        "clouds": {
            "count": deco.clouds.count,
            "altitude_m": deco.clouds.altitude_m,
            "scale_min": deco.clouds.scale_min,
            "scale_max": deco.clouds.scale_max,
        },
        "orbit": {
            "sun_period_s": deco.orbit.sun_period_s,
            "moon_period_s": deco.orbit.moon_period_s,
            "moon_radius_m": deco.orbit.moon_radius_m,
        },
    }
    return out


def dumps_config(cfg: PlanetConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n"


def save_config(cfg: PlanetConfig, path):
    with open(path, "w") as fh:
        fh.write(dumps_config(cfg))


def default_layered_params() -> LayeredPlanetParams:
    """A layered parameter set with hand-shaped remap curves: a continental
    shelf, erosion that flattens most of the world, sharp ridges, and an
    even temperature spread."""
    return LayeredPlanetParams(
        continentalness=NoiseLayer(
            fbm=FbmParams(octaves=5, persistence=0.5, lacunarity=2.0,
                          exponentiation=1.0, base_frequency=0.7),
            spline=SplineCurve(points=((0.0, 0.0), (0.35, 0.12), (0.5, 0.3),
                                       (0.65, 0.75), (1.0, 1.0)),
                               mode="monotone_cubic"),
        ),
        erosion=NoiseLayer(
            fbm=FbmParams(octaves=4, persistence=0.5, lacunarity=2.2,
                          exponentiation=1.0, base_frequency=1.1),
            spline=SplineCurve(points=((0.0, 0.85), (0.35, 0.6), (0.7, 0.25),
                                       (1.0, 0.05)),
                               mode="monotone_cubic"),
        ),
        peaks_valleys=NoiseLayer(
            fbm=FbmParams(octaves=6, persistence=0.5, lacunarity=2.0,
                          exponentiation=1.0, base_frequency=2.3),
            spline=SplineCurve(points=((0.0, 0.0), (0.4, 0.15), (0.75, 0.55),
                                       (1.0, 1.0)),
                               mode="monotone_cubic"),
        ),
        temperature=NoiseLayer(
            fbm=FbmParams(octaves=3, persistence=0.5, lacunarity=2.0,
                          exponentiation=1.0, base_frequency=0.5),
            spline=SplineCurve(points=((0.0, 0.0), (1.0, 1.0)), mode="linear"),
        ),
    )


def default_config(generator: str = "simple", seed: int = 0) -> PlanetConfig:
    if generator == "simple":
        cfg = PlanetConfig(seed=seed, simple=SimplePlanetParams())
    elif generator == "layered":
        cfg = PlanetConfig(seed=seed, generator="layered",
                           layered=default_layered_params())
    else:
        raise ConfigError(f"generator one of {_GENERATOR_KINDS}")
    cfg.validate()
    return cfg
