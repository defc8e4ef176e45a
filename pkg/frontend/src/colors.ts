/**
 * Biome vertex colors.
 *
 * Deep tiles get a subtle time animation on water (specular shimmer)
 * and lava (emissive pulse); shallow tiles use the flat base palette so
 * distant terrain stays calm and cheap.
 */

import type { Tile } from "./codec.js";
import type { Rgb } from "./atmosphere.js";

export const BIOME_COLORS: Rgb[] = [
  [0.09, 0.28, 0.55], // ocean
  [0.78, 0.7, 0.46], // beach
  [0.32, 0.52, 0.22], // grassland
  [0.13, 0.33, 0.12], // forest
  [0.45, 0.42, 0.4], // mountain
  [0.55, 0.1, 0.03], // lava
];

export const OCEAN = 0;
export const LAVA = 5;

/** Tiles at this depth and deeper animate water and lava. */
export const ANIMATED_DEPTH = 6;

export function biomeColor(biome: number, depth: number, timeS: number): Rgb {
  const base = BIOME_COLORS[biome] ?? BIOME_COLORS[0];
  if (depth < ANIMATED_DEPTH) return [base[0], base[1], base[2]];
  if (biome === OCEAN) {
    const shimmer = 0.06 * Math.sin(timeS * 1.7);
    return [base[0], base[1] + 0.5 * shimmer, Math.min(1, base[2] + shimmer)];
  }
  if (biome === LAVA) {
    const pulse = 0.5 + 0.5 * Math.sin(timeS * 2.3);
    return [Math.min(1, base[0] + 0.35 * pulse), base[1] + 0.12 * pulse, base[2]];
  }
  return [base[0], base[1], base[2]];
}

/** Per-vertex RGB attribute for a decoded tile. */
export function vertexColors(tile: Tile, timeS: number): Float32Array {
  const out = new Float32Array(tile.biomes.length * 3);
  for (let k = 0; k < tile.biomes.length; k++) {
    const c = biomeColor(tile.biomes[k], tile.node.depth, timeS);
    out[3 * k] = c[0];
    out[3 * k + 1] = c[1];
    out[3 * k + 2] = c[2];
  }
  return out;
}

/** Depth-keyed debug palette (LOD visualization overlay). */
export function depthColor(depth: number): Rgb {
  const hue = (depth * 0.13) % 1;
  const s = 0.85;
  const v = 0.95;
  const i = Math.floor(hue * 6);
  const f = hue * 6 - i;
  const p = v * (1 - s);
  const q = v * (1 - f * s);
  const t = v * (1 - (1 - f) * s);
  switch (i % 6) {
    case 0: return [v, t, p];
    case 1: return [q, v, p];
    case 2: return [p, v, t];
    case 3: return [p, q, v];
    case 4: return [t, p, v];
    default: return [v, p, q];
  }
}
