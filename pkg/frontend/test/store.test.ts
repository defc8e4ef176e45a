import { beforeEach, describe, expect, it } from "vitest";

import { ClientTileStore, StoreError, type DeltaFrame } from "../src/store.js";
import { goldenBytes, goldenJson, slice, type TranscriptStep } from "./golden.js";

const steps = goldenJson<TranscriptStep[]>("transcript.json");
const bin = goldenBytes("transcript.bin");

function payloadsOf(step: TranscriptStep): Uint8Array[] {
  return step.payloads.map((loc) => slice(bin, loc));
}

describe("recorded-session replay", () => {
  it("mirrors the server leaf set, masks and stats after every delta", () => {
    const store = new ClientTileStore();
    const everResident = new Set<string>();
    for (const step of steps) {
      const applied = store.applyDelta(
        step.control as DeltaFrame,
        payloadsOf(step),
      );
      // payload-once rule: an address is only resent after it left the set
      for (const addr of applied.added) {
        expect(everResident.has(addr)).toBe(false);
        everResident.add(addr);
      }
      for (const addr of applied.removed) everResident.delete(addr);

      expect([...store.leafSet()].sort()).toEqual(step.expected_leaves);
      const masks: Record<string, number> = {};
      for (const [addr, entry] of store.tiles) {
        if (entry.mask !== 0) masks[addr] = entry.mask;
      }
      const expectedNonzero = Object.fromEntries(
        Object.entries(step.expected_masks).filter(([, m]) => m !== 0),
      );
      expect(masks).toEqual(expectedNonzero);
      expect(store.mirrors(step.expected_stats)).toBe(true);
    }
    expect(store.deltasApplied).toBe(steps.length);
    expect(store.maxDepthInUse()).toBe(6);
  });

  it("reaches the surface with hundreds of live tiles", () => {
    const store = new ClientTileStore();
    for (const step of steps) store.applyDelta(step.control as DeltaFrame, payloadsOf(step));
    expect(store.leafCount).toBeGreaterThan(100);
    expect(store.scene.length).toBeGreaterThan(0); // clouds from open, maybe trees
  });
});

describe("delta validation", () => {
  let store: ClientTileStore;
  const emptyFrame = (over: Partial<DeltaFrame>): DeltaFrame => ({
    type: "delta",
    removed: [],
    masks: {},
    scene: [],
    tiles: 0,
    ...over,
  });

  beforeEach(() => {
    store = new ClientTileStore();
    store.applyDelta(steps[0].control as DeltaFrame, payloadsOf(steps[0]));
  });

  it("rejects a payload count mismatch", () => {
    expect(() => store.applyDelta(emptyFrame({ tiles: 2 }), [])).toThrow(StoreError);
  });

  it("rejects adding a resident tile again", () => {
    expect(() =>
      store.applyDelta(emptyFrame({ tiles: 1 }), [payloadsOf(steps[0])[0]]),
    ).toThrow(/duplicate tile/);
  });

  it("rejects removing an unknown tile", () => {
    expect(() =>
      store.applyDelta(emptyFrame({ removed: ["f0/d4/0/0"] }), []),
    ).toThrow(/remove of unknown/);
  });

  it("rejects a mask for an unknown tile", () => {
    expect(() =>
      store.applyDelta(emptyFrame({ masks: { "f0/d4/0/0": 3 } }), []),
    ).toThrow(/mask for unknown/);
  });

  it("re-stitches survivors without a new payload", () => {
    const addr = [...store.leafSet()][0];
    const before = store.tiles.get(addr)!.stitched;
    const applied = store.applyDelta(emptyFrame({ masks: { [addr]: 5 } }), []);
    expect(applied.restitched).toEqual([addr]);
    const after = store.tiles.get(addr)!;
    expect(after.mask).toBe(5);
    expect(after.stitched).not.toBe(before);
    expect(after.tile.positions).toBe(before); // original payload untouched

    // mask back to zero restores the verbatim payload geometry
    store.applyDelta(emptyFrame({ masks: { [addr]: 0 } }), []);
    expect(store.tiles.get(addr)!.stitched).toBe(before);
  });

  it("reset empties the mirror for a fresh session", () => {
    store.reset();
    expect(store.leafCount).toBe(0);
    expect(store.scene.length).toBe(0);
  });
});
