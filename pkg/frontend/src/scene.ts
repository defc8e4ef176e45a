/**
 * Placement math for scene records (trees, clouds).
 *
 * Records carry a world anchor on the displaced surface plus rotation,
 * scale and embed depth. The trunk is extended by embed_depth below the
 * anchor so steep terrain cannot leave a floating tree: the visible
 * trunk runs from anchor - up*embed to anchor + up*height*scale.
 */

import type { SceneRecord } from "./store.js";

export interface Vec3 {
  x: number;
  y: number;
  z: number;
}

export const TRUNK_HEIGHT_M = 7.0;
export const CANOPY_RADIUS_M = 3.2;
export const CLOUD_RADIUS_M = 900.0;

export interface TreePlacement {
  up: Vec3;
  trunkBottom: Vec3;
  trunkTop: Vec3;
  /** full visible+buried trunk length, meters */
  trunkLength: number;
  canopyRadius: number;
  rotation: number;
  palm: boolean;
}

function normalize(v: readonly number[]): Vec3 {
  const n = Math.hypot(v[0], v[1], v[2]);
  if (n === 0) throw new Error("zero anchor");
  return { x: v[0] / n, y: v[1] / n, z: v[2] / n };
}

export function treePlacement(rec: SceneRecord): TreePlacement {
  const up = normalize(rec.anchor);
  const h = TRUNK_HEIGHT_M * rec.scale;
  const e = rec.embed_depth;
  return {
    up,
    trunkBottom: {
      x: rec.anchor[0] - up.x * e,
      y: rec.anchor[1] - up.y * e,
      z: rec.anchor[2] - up.z * e,
    },
    trunkTop: {
      x: rec.anchor[0] + up.x * h,
      y: rec.anchor[1] + up.y * h,
      z: rec.anchor[2] + up.z * h,
    },
    trunkLength: h + e,
    canopyRadius: CANOPY_RADIUS_M * rec.scale,
    rotation: rec.rotation,
    palm: rec.kind === "tree_palm",
  };
}

export interface CloudPlacement {
  center: Vec3;
  radius: number;
  rotation: number;
}

export function cloudPlacement(rec: SceneRecord): CloudPlacement {
  return {
    center: { x: rec.anchor[0], y: rec.anchor[1], z: rec.anchor[2] },
    radius: CLOUD_RADIUS_M * rec.scale,
    rotation: rec.rotation,
  };
}

export function isTree(rec: SceneRecord): boolean {
  return rec.kind === "tree_normal" || rec.kind === "tree_palm";
}

export function isCloud(rec: SceneRecord): boolean {
  return rec.kind === "cloud";
}
