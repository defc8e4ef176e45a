/**
 * Qualitative sky and limb halo.
 *
 * Not physical scattering; just view-angle functions tuned to read
 * right: blue overhead on the day side, near-black on the night side,
 * a reddish band around the terminator, and a rim halo that is
 * strongest right at the planet's silhouette and more prominent on the
 * shadowed side.
 */

export type Rgb = [number, number, number];

const DAY: Rgb = [0.35, 0.62, 0.95];
const DUSK: Rgb = [0.82, 0.38, 0.2];
const NIGHT: Rgb = [0.015, 0.02, 0.06];

function lerp(a: Rgb, b: Rgb, t: number): Rgb {
  return [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t];
}

export function clamp01(x: number): number {
  return Math.min(1, Math.max(0, x));
}

/**
 * Sky tint for a camera standing on the surface.
 * sunDot = dot(surface up, sun direction): 1 noon, 0 terminator, -1 midnight.
 */
export function skyColor(sunDot: number): Rgb {
  const s = Math.min(1, Math.max(-1, sunDot));
  const duskBand = Math.exp(-((s / 0.3) ** 2)); // peaks at the terminator
  const base = s >= 0 ? lerp(DUSK, DAY, clamp01(s / 0.45)) : lerp(DUSK, NIGHT, clamp01(-s / 0.35));
  return lerp(base, DUSK, 0.35 * duskBand);
}

export function luminance(c: Rgb): number {
  return 0.2126 * c[0] + 0.7152 * c[1] + 0.0722 * c[2];
}

/**
 * Rim halo strength for a view ray.
 *
 * limbCloseness: 0 at the planet disc center, 1 exactly at the
 * silhouette edge (renderer computes it from the view ray / planet
 * geometry). sunDot: dot(sun direction, direction planet->camera);
 * negative means we are looking at the shadowed side, where the halo
 * carries most of the visual information, so it gets boosted.
 */
export function haloIntensity(limbCloseness: number, sunDot: number): number {
  const rim = clamp01(limbCloseness) ** 6;
  const shadowBoost = 0.35 + 0.65 * clamp01((1 - sunDot) / 2);
  return rim * shadowBoost;
}

export function haloColor(limbCloseness: number, sunDot: number): Rgb {
  const w = haloIntensity(limbCloseness, sunDot);
  // cooler, bluer rim on the day side, warmer on the shadow side
  const tint = lerp([0.5, 0.75, 1.0], [0.95, 0.55, 0.45], clamp01((1 - sunDot) / 2) * 0.5);
  return [tint[0] * w, tint[1] * w, tint[2] * w];
}
