/**
 * Client tile store: the viewer-side mirror of the server leaf set.
 *
 * applyDelta() is the only mutation path, so after every applied delta
 * the address set here must equal the server's leaves; the debug
 * overlay asserts exactly that against a stats frame. Stitched
 * geometry is derived lazily from the stored unstitched positions and
 * the current mask; the original payload is kept verbatim.
 */

import { decodeTile, address, type Tile } from "./codec.js";
import { stitchPositions } from "./stitch.js";

export interface DeltaFrame {
  type: "delta";
  removed: string[];
  masks: Record<string, number>;
  scene: SceneRecord[];
  tiles: number;
}

export interface SceneRecord {
  kind: string;
  anchor: [number, number, number];
  rotation: number;
  scale: number;
  embed_depth: number;
}

export interface StoredTile {
  tile: Tile;
  mask: number;
  /** positions with the current mask applied (== tile.positions when mask 0) */
  stitched: Float32Array;
}

export interface AppliedDelta {
  added: string[];
  removed: string[];
  /** survivors whose mask changed (added tiles are not repeated here) */
  restitched: string[];
  scene: SceneRecord[];
}

export class StoreError extends Error {}

export class ClientTileStore {
  readonly tiles = new Map<string, StoredTile>();
  readonly scene: SceneRecord[] = [];
  deltasApplied = 0;

  /** Control frame plus its announced binary payloads, in arrival order. */
  applyDelta(frame: DeltaFrame, payloads: Uint8Array[]): AppliedDelta {
    if (payloads.length !== frame.tiles) {
      throw new StoreError(`delta announced ${frame.tiles} tiles, got ${payloads.length}`);
    }
    const out: AppliedDelta = { added: [], removed: [], restitched: [], scene: frame.scene };

    for (const addr of frame.removed) {
      if (!this.tiles.delete(addr)) throw new StoreError(`remove of unknown tile ${addr}`);
      out.removed.push(addr);
    }
    const fresh = new Set<string>();
    for (const payload of payloads) {
      const tile = decodeTile(payload);
      const addr = address(tile.node);
      if (this.tiles.has(addr)) throw new StoreError(`duplicate tile ${addr}`);
      this.tiles.set(addr, { tile, mask: 0, stitched: tile.positions });
      out.added.push(addr);
      fresh.add(addr);
    }
    for (const [addr, mask] of Object.entries(frame.masks)) {
      const entry = this.tiles.get(addr);
      if (!entry) throw new StoreError(`mask for unknown tile ${addr}`);
      if (entry.mask === mask) continue;
      entry.mask = mask;
      entry.stitched = stitchPositions(entry.tile.positions, entry.tile.resolution, mask);
      if (!fresh.has(addr)) out.restitched.push(addr);
    }
    this.scene.push(...frame.scene);
    this.deltasApplied += 1;
    return out;
  }

  /** Drop everything; a reconnect starts a fresh server session. */
  reset(): void {
    this.tiles.clear();
    this.scene.length = 0;
    this.deltasApplied = 0;
  }

  leafSet(): Set<string> {
    return new Set(this.tiles.keys());
  }

  get leafCount(): number {
    return this.tiles.size;
  }

  maxDepthInUse(): number {
    let d = 0;
    for (const { tile } of this.tiles.values()) d = Math.max(d, tile.node.depth);
    return d;
  }

  verticesResident(): number {
    let n = 0;
    for (const { tile } of this.tiles.values()) n += tile.positions.length / 3;
    return n;
  }

  /** Debug overlay check: do we mirror the server's stats frame? */
  mirrors(stats: { leaves: number; max_depth_in_use: number; vertices_resident: number }): boolean {
    return (
      this.leafCount === stats.leaves &&
      this.maxDepthInUse() === stats.max_depth_in_use &&
      this.verticesResident() === stats.vertices_resident
    );
  }
}
