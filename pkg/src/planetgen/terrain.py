"""Height and biome generators.

Two generators share one interface: sample(dirs) takes unit directions
and returns displacement above the base radius plus a biome id per
direction.

The simple generator scales one FBM field by a base factor and clamps to
the ocean level. The layered generator combines four spline-remapped FBM
layers: displacement = max((C + PV) * (1 - E) * amplitude, ocean_level),
with temperature only ever affecting biome selection.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import spline as spline_mod
from .errors import ConfigError, DomainError
from .noise import FbmParams, derive_seed, fbm, _seed_value
from .spline import SplineCurve

SAMPLE_MODES = ("sphere3d", "lonlat2d")

# namespace salts so layer/decoration streams never collide
_LAYER_SALTS = {
    "continentalness": 0x434E,
    "erosion": 0x4552,
    "peaks_valleys": 0x5056,
    "temperature": 0x5445,
}


class Biome(enum.IntEnum):
    OCEAN = 0
    BEACH = 1
    GRASSLAND = 2
    FOREST = 3
    MOUNTAIN = 4
    LAVA = 5


@dataclass(frozen=True)
class BiomeThresholds:
    beach_band_fraction: float = 0.02  # of amplitude scale
    mountain_fraction: float = 0.6
    lava_threshold: float = 0.85
    forest_temperature: tuple[float, float] = (0.3, 0.7)

    def validate(self) -> None:
        if not 0.0 <= self.beach_band_fraction < 1.0:
            raise ConfigError("beach_band_fraction in [0, 1)")
        if not 0.0 < self.mountain_fraction <= 1.0:
            raise ConfigError("mountain_fraction in (0, 1]")
        if not 0.0 <= self.lava_threshold <= 1.0:
            raise ConfigError("lava_threshold in [0, 1]")
        lo, hi = self.forest_temperature
        if not 0.0 <= lo <= hi <= 1.0:
            raise ConfigError("forest_temperature bounds ordered in [0, 1]")


def classify_biome(
    displacement,
    ocean_level: float,
    amplitude_scale: float,
    temperature=None,
    thresholds: BiomeThresholds = BiomeThresholds(),
):
    """Biome id(s) for displacement(s) above base radius.

    Precedence: ocean (exactly at ocean level), then beach, then mountain,
    then forest/grassland by temperature. Would-be ocean at extreme
    temperature becomes lava. Scalar in, Biome out; array in, uint8 out.
    """
    if not amplitude_scale > 0:
        raise ConfigError("amplitude scale > 0")
    thresholds.validate()
    d = np.asarray(displacement, dtype=np.float64)
    scalar = d.ndim == 0
    d = np.atleast_1d(d)
    if np.any(d < ocean_level):
        raise DomainError("displacement < ocean_level")
    t = None
    if temperature is not None:
        t = np.atleast_1d(np.asarray(temperature, dtype=np.float64))
        if t.shape != d.shape:
            raise DomainError("temperature shape mismatch")

    out = np.full(d.shape, int(Biome.GRASSLAND), dtype=np.uint8)
    if t is not None:
        lo, hi = thresholds.forest_temperature
        out[(t >= lo) & (t <= hi)] = int(Biome.FOREST)
    out[d >= thresholds.mountain_fraction * amplitude_scale] = int(Biome.MOUNTAIN)
    band = thresholds.beach_band_fraction * amplitude_scale
    out[(d > ocean_level) & (d <= ocean_level + band)] = int(Biome.BEACH)
    ocean = d == ocean_level
    out[ocean] = int(Biome.OCEAN)
    if t is not None:
        out[ocean & (t >= thresholds.lava_threshold)] = int(Biome.LAVA)
    if scalar:
        return Biome(int(out[0]))
    return out


@dataclass
class LayerField:
    continentalness: np.ndarray
    erosion: np.ndarray
    peaks_valleys: np.ndarray
    temperature: np.ndarray


@dataclass(frozen=True)
class LayerSample:
    continentalness: float
    erosion: float
    peaks_valleys: float
    temperature: float


@dataclass
class SurfaceField:
    displacement: np.ndarray
    biome: np.ndarray
    layers: Optional[LayerField] = None


@dataclass(frozen=True)
class SurfaceSample:
    displacement: float
    biome: Biome
    layers: Optional[LayerSample] = None


@dataclass(frozen=True)
class SimplePlanetParams:
    fbm: FbmParams = FbmParams()
    base_factor: float = 8000.0
    # normalized fbm concentrates around 0.5, so the sea has to sit well
    # inside the distribution or the planet comes out dry
    ocean_level: float = 3800.0
    sample_mode: str = "sphere3d"
    thresholds: BiomeThresholds = BiomeThresholds()

    def validate(self) -> None:
        self.fbm.validate()
        if not (np.isfinite(self.base_factor) and self.base_factor > 0):
            raise ConfigError("base_factor > 0")
        if not (np.isfinite(self.ocean_level) and 0 <= self.ocean_level < self.base_factor):
            raise ConfigError("0 <= ocean_level < base_factor")
        if self.sample_mode not in SAMPLE_MODES:
            raise ConfigError(f"sample_mode one of {SAMPLE_MODES}")
        self.thresholds.validate()


@dataclass(frozen=True)
class NoiseLayer:
    fbm: FbmParams
    spline: SplineCurve


def _default_layer():
    return NoiseLayer(FbmParams(), SplineCurve(points=((0.0, 0.0), (1.0, 1.0))))


@dataclass(frozen=True)
class LayeredPlanetParams:
    continentalness: NoiseLayer
    erosion: NoiseLayer
    peaks_valleys: NoiseLayer
    temperature: NoiseLayer
    amplitude: float = 8000.0
    ocean_level: float = 2000.0
    sample_mode: str = "sphere3d"
    thresholds: BiomeThresholds = BiomeThresholds()

    def validate(self) -> None:
        for name in _LAYER_SALTS:
            layer: NoiseLayer = getattr(self, name)
            layer.fbm.validate()
            problem = spline_mod.validate(layer.spline)
            if problem is not None:
                raise ConfigError(f"{name} spline: {problem}")
        if not (np.isfinite(self.amplitude) and self.amplitude > 0):
            raise ConfigError("amplitude > 0")
        if not (np.isfinite(self.ocean_level) and 0 <= self.ocean_level < 2 * self.amplitude):
            raise ConfigError("0 <= ocean_level < 2 * amplitude")
        if self.sample_mode not in SAMPLE_MODES:
            raise ConfigError(f"sample_mode one of {SAMPLE_MODES}")
        self.thresholds.validate()


def _check_unit_dirs(dirs) -> np.ndarray:
    arr = np.asarray(dirs, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise DomainError("directions must be (n, 3)")
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite direction")
    n2 = arr[:, 0] ** 2 + arr[:, 1] ** 2 + arr[:, 2] ** 2
    if np.any(np.abs(n2 - 1.0) > 2.5e-12):  # |n^2 - 1| ~ 2 |n - 1|
        raise DomainError("directions must be unit length within 1e-12")
    return arr


def _noise_points(dirs: np.ndarray, sample_mode: str) -> np.ndarray:
    if sample_mode == "sphere3d":
        return dirs
    # longitude/latitude plane; has a date-line seam, kept for parity with
    # flat 2D heightmap generators
    lon = np.arctan2(dirs[:, 1], dirs[:, 0])
    lat = np.arcsin(np.clip(dirs[:, 2], -1.0, 1.0))
    return np.stack([lon, lat, np.zeros_like(lon)], axis=-1)


class SimpleGenerator:
    """FBM height times base factor, clamped at the ocean level."""

    def __init__(self, params: SimplePlanetParams, seed):
        params.validate()
        self.params = params
        self.seed = _seed_value(seed)

    @property
    def relief_bound(self) -> float:
        return self.params.base_factor

    def sample(self, dirs) -> SurfaceField:
        arr = _check_unit_dirs(dirs)
        p = _noise_points(arr, self.params.sample_mode)
        raw = fbm(p, self.params.fbm, self.seed)
        disp = np.maximum(raw * self.params.base_factor, self.params.ocean_level)
        biome = classify_biome(
            disp,
            self.params.ocean_level,
            self.params.base_factor,
            None,
            self.params.thresholds,
        )
        return SurfaceField(displacement=disp, biome=biome)

    def sample_one(self, direction) -> SurfaceSample:
        f = self.sample(np.asarray(direction, dtype=np.float64)[None, :])
        return SurfaceSample(float(f.displacement[0]), Biome(int(f.biome[0])))


class LayeredGenerator:
    """Four spline-remapped FBM layers combined into height and biome."""

    def __init__(self, params: LayeredPlanetParams, seed):
        params.validate()
        self.params = params
        self.seed = _seed_value(seed)
        self.layer_seeds = {
            name: derive_seed(self.seed, salt) for name, salt in _LAYER_SALTS.items()
        }

    @property
    def relief_bound(self) -> float:
        return 2.0 * self.params.amplitude  # C + PV <= 2

    def layer_samples(self, dirs) -> LayerField:
        """Post-spline layer values; exposed so the height formula can be
        recomposed externally."""
        arr = _check_unit_dirs(dirs)
        p = _noise_points(arr, self.params.sample_mode)
        values = {}
        for name in _LAYER_SALTS:
            layer: NoiseLayer = getattr(self.params, name)
            raw = fbm(p, layer.fbm, self.layer_seeds[name])
            values[name] = spline_mod.evaluate(layer.spline, raw)
        return LayerField(**values)

    def sample(self, dirs) -> SurfaceField:
        layers = self.layer_samples(dirs)
        hf = (layers.continentalness + layers.peaks_valleys) * (1.0 - layers.erosion)
        disp = np.maximum(hf * self.params.amplitude, self.params.ocean_level)
        biome = classify_biome(
            disp,
            self.params.ocean_level,
            self.params.amplitude,
            layers.temperature,
            self.params.thresholds,
        )
        return SurfaceField(displacement=disp, biome=biome, layers=layers)

    def sample_one(self, direction) -> SurfaceSample:
        f = self.sample(np.asarray(direction, dtype=np.float64)[None, :])
        ls = LayerSample(
            float(f.layers.continentalness[0]),
            float(f.layers.erosion[0]),
            float(f.layers.peaks_valleys[0]),
            float(f.layers.temperature[0]),
        )
        return SurfaceSample(float(f.displacement[0]), Biome(int(f.biome[0])), ls)


def make_generator(kind: str, params, seed):
    if kind == "simple":
        return SimpleGenerator(params, seed)
    if kind == "layered":
        return LayeredGenerator(params, seed)
    raise ConfigError("generator one of ('simple', 'layered')")
