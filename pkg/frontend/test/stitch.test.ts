import { describe, expect, it } from "vitest";

import { absolutePositions, decodeTile } from "../src/codec.js";
import { EDGE_E, EDGE_N, EDGE_S, EDGE_W, edgeVertexIndices, stitchPositions } from "../src/stitch.js";
import { goldenBytes, goldenJson, slice, type PairManifestEntry } from "./golden.js";

const pairs = goldenJson<PairManifestEntry[]>("pairs.json");
const bin = goldenBytes("pairs.bin");

function pointToPolyline(p: number[], line: Float64Array): number {
  let best = Infinity;
  for (let s = 0; s + 5 < line.length; s += 3) {
    const ax = line[s], ay = line[s + 1], az = line[s + 2];
    const bx = line[s + 3] - ax, by = line[s + 4] - ay, bz = line[s + 5] - az;
    const len2 = bx * bx + by * by + bz * bz;
    let t = ((p[0] - ax) * bx + (p[1] - ay) * by + (p[2] - az) * bz) / len2;
    t = Math.min(1, Math.max(0, t));
    const dx = p[0] - (ax + t * bx), dy = p[1] - (ay + t * by), dz = p[2] - (az + t * bz);
    best = Math.min(best, Math.hypot(dx, dy, dz));
  }
  return best;
}

/** Max distance from the fine tile's edge vertices to the coarse edge polyline. */
function crackGap(pair: PairManifestEntry, stitch: boolean): number {
  const fine = decodeTile(slice(bin, pair.fine));
  const coarse = decodeTile(slice(bin, pair.coarse));
  const rel = stitch
    ? stitchPositions(fine.positions, fine.resolution, 1 << pair.fine_edge)
    : fine.positions;
  const fineAbs = absolutePositions(fine, rel);
  const coarseAbs = absolutePositions(coarse);

  const polyIdx = edgeVertexIndices(coarse.resolution, pair.coarse_edge);
  const poly = new Float64Array(polyIdx.length * 3);
  polyIdx.forEach((vi, k) => {
    poly[3 * k] = coarseAbs[3 * vi];
    poly[3 * k + 1] = coarseAbs[3 * vi + 1];
    poly[3 * k + 2] = coarseAbs[3 * vi + 2];
  });

  let worst = 0;
  for (const vi of edgeVertexIndices(fine.resolution, pair.fine_edge)) {
    const p = [fineAbs[3 * vi], fineAbs[3 * vi + 1], fineAbs[3 * vi + 2]];
    worst = Math.max(worst, pointToPolyline(p, poly));
  }
  return worst;
}

describe("crack detector on adjacent-depth golden pairs", () => {
  for (const pair of pairs) {
    const label = `${pair.fine.address} vs ${pair.coarse.address}` +
      (pair.cross_face ? " (cross-face)" : "");
    it(`stitching closes the boundary: ${label}`, () => {
      const open = crackGap(pair, false);
      const closed = crackGap(pair, true);
      // unstitched T-junctions gape at terrain scale; stitched edges sit on
      // the coarse polyline up to f32 quantization of the RTC offsets
      expect(open).toBeGreaterThan(100 * closed);
      expect(closed).toBeLessThan(1e-7 * pair.edge_length_m);
      // cross-check against the gap the server-side simulation measured
      expect(closed).toBeLessThan(Math.max(1.5 * pair.gap_stitched_m, 1e-9));
      expect(open).toBeGreaterThan(0.5 * pair.gap_unstitched_m);
    });
  }

  it("covers every edge direction and a cross-face pair", () => {
    const edges = new Set(pairs.map((p) => p.fine_edge));
    expect(edges).toEqual(new Set([EDGE_N, EDGE_E, EDGE_S, EDGE_W]));
    expect(pairs.some((p) => p.cross_face)).toBe(true);
  });
});

describe("stitchPositions", () => {
  it("is the identity for mask 0", () => {
    const pos = new Float32Array([1, 2, 3, 4, 5, 6]);
    expect(stitchPositions(pos, 2, 0)).toBe(pos);
  });

  it("moves exactly the odd edge vertices", () => {
    const fine = decodeTile(slice(bin, pairs[0].fine));
    const out = stitchPositions(fine.positions, fine.resolution, 1 << pairs[0].fine_edge);
    expect(out).not.toBe(fine.positions);
    const edgeIdx = [...edgeVertexIndices(fine.resolution, pairs[0].fine_edge)];
    const odd = new Set(edgeIdx.filter((_, i) => i % 2 === 1));
    for (let v = 0; v < fine.positions.length / 3; v++) {
      const same =
        out[3 * v] === fine.positions[3 * v] &&
        out[3 * v + 1] === fine.positions[3 * v + 1] &&
        out[3 * v + 2] === fine.positions[3 * v + 2];
      expect(same).toBe(!odd.has(v));
    }
  });

  it("rejects odd resolutions", () => {
    expect(() => stitchPositions(new Float32Array(12), 1, 1)).toThrow(/even/);
  });
});

describe("edgeVertexIndices", () => {
  it("matches the grid layout for resolution 4", () => {
    expect([...edgeVertexIndices(4, EDGE_S)]).toEqual([0, 1, 2, 3, 4]);
    expect([...edgeVertexIndices(4, EDGE_N)]).toEqual([20, 21, 22, 23, 24]);
    expect([...edgeVertexIndices(4, EDGE_W)]).toEqual([0, 5, 10, 15, 20]);
    expect([...edgeVertexIndices(4, EDGE_E)]).toEqual([4, 9, 14, 19, 24]);
  });

  it("rejects unknown edges", () => {
    expect(() => edgeVertexIndices(4, 4)).toThrow(/edge/);
  });
});
