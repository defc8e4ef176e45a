import { describe, expect, it } from "vitest";

import { cloudPlacement, isCloud, isTree, treePlacement, TRUNK_HEIGHT_M } from "../src/scene.js";
import type { SceneRecord } from "../src/store.js";
import { biomeColor, depthColor, vertexColors, ANIMATED_DEPTH, BIOME_COLORS } from "../src/colors.js";
import { decodeTile } from "../src/codec.js";
import { goldenBytes, goldenJson, slice, type TileManifestEntry } from "./golden.js";

const rec = (over: Partial<SceneRecord>): SceneRecord => ({
  kind: "tree_normal",
  anchor: [0, 0, 6_371_000],
  rotation: 1.25,
  scale: 1.0,
  embed_depth: 2.0,
  ...over,
});

describe("tree placement", () => {
  it("buries the trunk by embed_depth below the anchor", () => {
    const p = treePlacement(rec({}));
    expect(p.trunkBottom.z).toBeCloseTo(6_371_000 - 2.0, 9);
    expect(p.trunkTop.z).toBeCloseTo(6_371_000 + TRUNK_HEIGHT_M, 9);
    expect(p.trunkLength).toBeCloseTo(TRUNK_HEIGHT_M + 2.0, 12);
    expect(p.up).toEqual({ x: 0, y: 0, z: 1 });
  });

  it("scales the visible trunk but not the buried part", () => {
    const p = treePlacement(rec({ scale: 1.3 }));
    expect(p.trunkTop.z).toBeCloseTo(6_371_000 + 1.3 * TRUNK_HEIGHT_M, 9);
    expect(p.trunkBottom.z).toBeCloseTo(6_371_000 - 2.0, 9);
  });

  it("marks palms", () => {
    expect(treePlacement(rec({ kind: "tree_palm" })).palm).toBe(true);
    expect(treePlacement(rec({})).palm).toBe(false);
  });

  it("classifies record kinds", () => {
    expect(isTree(rec({}))).toBe(true);
    expect(isTree(rec({ kind: "tree_palm" }))).toBe(true);
    expect(isTree(rec({ kind: "cloud" }))).toBe(false);
    expect(isCloud(rec({ kind: "cloud" }))).toBe(true);
  });

  it("keeps cloud anchors verbatim", () => {
    const c = cloudPlacement(rec({ kind: "cloud", anchor: [1, 2, 3], scale: 2 }));
    expect(c.center).toEqual({ x: 1, y: 2, z: 3 });
    expect(c.radius).toBeGreaterThan(0);
  });
});

describe("biome colors", () => {
  it("uses the flat palette on shallow tiles at any time", () => {
    for (let b = 0; b < 6; b++) {
      expect(biomeColor(b, 2, 0)).toEqual(biomeColor(b, 2, 1234.5));
      expect(biomeColor(b, 2, 0)).toEqual([...BIOME_COLORS[b]]);
    }
  });

  it("animates water and lava on deep tiles only", () => {
    expect(biomeColor(0, ANIMATED_DEPTH, 0)).not.toEqual(biomeColor(0, ANIMATED_DEPTH, 0.9));
    expect(biomeColor(5, ANIMATED_DEPTH, 0)).not.toEqual(biomeColor(5, ANIMATED_DEPTH, 0.9));
    for (const b of [1, 2, 3, 4]) {
      expect(biomeColor(b, ANIMATED_DEPTH, 0)).toEqual(biomeColor(b, ANIMATED_DEPTH, 0.9));
    }
  });

  it("stays inside [0,1]", () => {
    for (let b = 0; b < 6; b++) {
      for (let t = 0; t < 10; t += 0.37) {
        for (const ch of biomeColor(b, 10, t)) {
          expect(ch).toBeGreaterThanOrEqual(0);
          expect(ch).toBeLessThanOrEqual(1);
        }
      }
    }
  });

  it("builds a per-vertex attribute from a decoded tile", () => {
    const manifest = goldenJson<TileManifestEntry[]>("tiles.json");
    const entry = manifest.find((e) => e.label === "root")!;
    const tile = decodeTile(slice(goldenBytes("tiles.bin"), entry));
    const colors = vertexColors(tile, 0);
    expect(colors.length).toBe(tile.biomes.length * 3);
    const c0 = biomeColor(tile.biomes[0], tile.node.depth, 0);
    expect([colors[0], colors[1], colors[2]]).toEqual([
      Math.fround(c0[0]),
      Math.fround(c0[1]),
      Math.fround(c0[2]),
    ]);
  });

  it("gives distinct debug colors to neighboring depths", () => {
    for (let d = 0; d < 8; d++) {
      expect(depthColor(d)).not.toEqual(depthColor(d + 1));
    }
  });
});
