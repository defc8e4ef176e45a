/**
 * First-person fly camera over a sphere.
 *
 * Speed scales with altitude (log throttle), so the same keys work in
 * orbit and skimming the surface. Pure state + step function; input
 * binding lives in main.ts.
 */

export interface FlyState {
  pos: [number, number, number];
  /** yaw/pitch are relative to the local horizon frame */
  yaw: number;
  pitch: number;
}

export interface FlyInput {
  forward: number; // -1..1
  strafe: number;
  lift: number;
  yawRate: number; // rad/s
  pitchRate: number;
  boost: boolean;
}

function norm(v: [number, number, number]): number {
  return Math.hypot(v[0], v[1], v[2]);
}

/** Orthonormal local frame: up (radial), north-ish tangent, east tangent. */
export function horizonFrame(pos: [number, number, number]) {
  const r = norm(pos);
  const up: [number, number, number] = [pos[0] / r, pos[1] / r, pos[2] / r];
  // reference axis far from parallel with up
  const ref: [number, number, number] =
    Math.abs(up[2]) < 0.9 ? [0, 0, 1] : [1, 0, 0];
  const east: [number, number, number] = [
    ref[1] * up[2] - ref[2] * up[1],
    ref[2] * up[0] - ref[0] * up[2],
    ref[0] * up[1] - ref[1] * up[0],
  ];
  const en = norm(east);
  east[0] /= en; east[1] /= en; east[2] /= en;
  const north: [number, number, number] = [
    up[1] * east[2] - up[2] * east[1],
    up[2] * east[0] - up[0] * east[2],
    up[0] * east[1] - up[1] * east[0],
  ];
  return { up, north, east };
}

export function lookDirection(state: FlyState): [number, number, number] {
  const { up, north, east } = horizonFrame(state.pos);
  const ch = Math.cos(state.pitch);
  const f: [number, number, number] = [
    ch * (Math.cos(state.yaw) * north[0] + Math.sin(state.yaw) * east[0]) + Math.sin(state.pitch) * up[0],
    ch * (Math.cos(state.yaw) * north[1] + Math.sin(state.yaw) * east[1]) + Math.sin(state.pitch) * up[1],
    ch * (Math.cos(state.yaw) * north[2] + Math.sin(state.yaw) * east[2]) + Math.sin(state.pitch) * up[2],
  ];
  return f;
}

/** Altitude-scaled speed: ~40 m/s near the ground, orbital far out. */
export function flySpeed(altitudeM: number, boost: boolean): number {
  const v = 40 + 0.35 * Math.max(0, altitudeM);
  return boost ? 8 * v : v;
}

export function stepFly(
  state: FlyState,
  input: FlyInput,
  dtS: number,
  baseRadiusM: number,
  minAltitudeM = 10,
): FlyState {
  const yaw = state.yaw + input.yawRate * dtS;
  const pitch = Math.min(1.45, Math.max(-1.45, state.pitch + input.pitchRate * dtS));
  const next: FlyState = { pos: [...state.pos], yaw, pitch };

  const { up, north, east } = horizonFrame(state.pos);
  const look = lookDirection(next);
  const right: [number, number, number] = [
    Math.cos(yaw) * east[0] - Math.sin(yaw) * north[0],
    Math.cos(yaw) * east[1] - Math.sin(yaw) * north[1],
    Math.cos(yaw) * east[2] - Math.sin(yaw) * north[2],
  ];
  const alt = norm(state.pos) - baseRadiusM;
  const v = flySpeed(alt, input.boost) * dtS;
  for (let k = 0; k < 3; k++) {
    next.pos[k] +=
      v * (input.forward * look[k] + input.strafe * right[k] + input.lift * up[k]);
  }
  // keep the camera outside the terrain shell
  const r = norm(next.pos);
  const floor = baseRadiusM + minAltitudeM;
  if (r < floor) {
    for (let k = 0; k < 3; k++) next.pos[k] *= floor / r;
  }
  return next;
}
