/**
 * Client-side T-junction collapse.
 *
 * Tiles arrive unstitched; where an edge borders a one-level-coarser
 * neighbor (mask bits: N=1, E=2, S=4, W=8) every odd edge vertex is
 * moved to the midpoint of its even neighbors, landing it on the coarse
 * edge polyline. Pure function so a mask change re-derives geometry
 * from the stored original without a server round trip.
 */

export const EDGE_N = 0;
export const EDGE_E = 1;
export const EDGE_S = 2;
export const EDGE_W = 3;

export function edgeVertexIndices(resolution: number, edge: number): Uint32Array {
  const r = resolution;
  const out = new Uint32Array(r + 1);
  for (let k = 0; k <= r; k++) {
    if (edge === EDGE_N) out[k] = r * (r + 1) + k;
    else if (edge === EDGE_S) out[k] = k;
    else if (edge === EDGE_E) out[k] = k * (r + 1) + r;
    else if (edge === EDGE_W) out[k] = k * (r + 1);
    else throw new Error("edge must be in 0..3");
  }
  return out;
}

export function stitchPositions(
  positions: Float32Array,
  resolution: number,
  mask: number,
): Float32Array {
  if (mask === 0) return positions;
  if (resolution % 2 !== 0) throw new Error("stitching requires an even resolution");
  const out = positions.slice();
  for (const edge of [EDGE_N, EDGE_E, EDGE_S, EDGE_W]) {
    if (!(mask & (1 << edge))) continue;
    const idx = edgeVertexIndices(resolution, edge);
    for (let k = 1; k < idx.length; k += 2) {
      const a = 3 * idx[k - 1];
      const b = 3 * idx[k + 1];
      const o = 3 * idx[k];
      out[o] = 0.5 * (out[a] + out[b]);
      out[o + 1] = 0.5 * (out[a + 1] + out[b + 1]);
      out[o + 2] = 0.5 * (out[a + 2] + out[b + 2]);
    }
  }
  return out;
}
