/**
 * Browser entry point: wires the session client, tile store, renderer
 * and fly camera together. Query params:
 *   ?server=ws://host:port   (default ws://127.0.0.1:8765)
 *   ?radius=6371000          base radius used before the first tile arrives
 *
 * Keys: WASD move, R/F up/down, shift boost, drag to look,
 * 1 normal / 2 wireframe / 3 depth colors, M mirror check.
 */

import { SessionClient } from "./protocol.js";
import { ClientTileStore } from "./store.js";
import { PlanetRenderer } from "./renderer.js";
import { stepFly, lookDirection, type FlyState, type FlyInput } from "./camera.js";
import { ephemerisAt, DEFAULT_ORBIT, type OrbitParams } from "./ephemeris.js";

const params = new URLSearchParams(location.search);
const url = params.get("server") ?? "ws://127.0.0.1:8765";
const baseRadius = Number(params.get("radius") ?? 6.371e6);

const canvas = document.getElementById("view") as HTMLCanvasElement;
const statusEl = document.getElementById("status")!;
const overlayEl = document.getElementById("overlay")!;

const store = new ClientTileStore();
const renderer = new PlanetRenderer(canvas, baseRadius);
let orbit: OrbitParams = DEFAULT_ORBIT;
let mirrorText = "";

const client = new SessionClient({
  url,
  onStatus: (status, detail) => {
    statusEl.textContent = detail ? `${status} (${detail})` : status;
    statusEl.className = status;
    if (status === "open") {
      // fresh server session: the old mirror is void
      store.reset();
      renderer.clearTiles();
      mirrorText = "";
    }
  },
  onDelta: (frame, payloads) => {
    const t = performance.now() / 1000;
    const applied = store.applyDelta(frame, payloads);
    for (const addr of applied.removed) renderer.removeTile(addr);
    for (const addr of applied.added) renderer.addTile(addr, store.tiles.get(addr)!, t);
    for (const addr of applied.restitched) renderer.restitchTile(addr, store.tiles.get(addr)!);
    if (applied.scene.length) renderer.setSceneRecords(store.scene);
  },
  onStats: (stats) => {
    mirrorText = store.mirrors(stats)
      ? "mirror: OK"
      : `mirror: MISMATCH client ${store.leafCount} / server ${stats.leaves}`;
  },
  onServerError: (err) => {
    mirrorText = `server error ${err.code}: ${err.message}`;
  },
});
client.connect();

let fly: FlyState = { pos: [baseRadius * 4, baseRadius, baseRadius * 0.5], yaw: 0, pitch: -0.4 };
const input: FlyInput = { forward: 0, strafe: 0, lift: 0, yawRate: 0, pitchRate: 0, boost: false };
const held = new Set<string>();

addEventListener("keydown", (e) => {
  held.add(e.code);
  if (e.code === "Digit1") renderer.setDebugMode("off");
  if (e.code === "Digit2") renderer.setDebugMode("wireframe");
  if (e.code === "Digit3") renderer.setDebugMode("depth");
  if (e.code === "KeyM") client.requestStats();
});
addEventListener("keyup", (e) => held.delete(e.code));
canvas.addEventListener("mousedown", () => canvas.requestPointerLock());
addEventListener("mousemove", (e) => {
  if (document.pointerLockElement === canvas) {
    fly = { ...fly, yaw: fly.yaw + e.movementX * 0.0022, pitch: Math.min(1.45, Math.max(-1.45, fly.pitch - e.movementY * 0.0022)) };
  }
});

function readInput(): void {
  input.forward = (held.has("KeyW") ? 1 : 0) - (held.has("KeyS") ? 1 : 0);
  input.strafe = (held.has("KeyD") ? 1 : 0) - (held.has("KeyA") ? 1 : 0);
  input.lift = (held.has("KeyR") ? 1 : 0) - (held.has("KeyF") ? 1 : 0);
  input.boost = held.has("ShiftLeft") || held.has("ShiftRight");
  input.yawRate = 0;
  input.pitchRate = 0;
}

function resize(): void {
  renderer.resize(innerWidth, innerHeight);
}
addEventListener("resize", resize);
resize();

let last = performance.now();
function frame(nowMs: number): void {
  const dt = Math.min(0.1, (nowMs - last) / 1000);
  last = nowMs;
  readInput();
  fly = stepFly(fly, input, dt, baseRadius);
  const look = lookDirection(fly);

  if (client.status === "open") client.sendCamera(fly.pos, look);

  const t = nowMs / 1000;
  const eph = ephemerisAt(t, orbit);
  renderer.render(fly.pos, look, t, eph);

  const alt = Math.hypot(...fly.pos) - baseRadius;
  overlayEl.textContent =
    `tiles ${store.leafCount}  depth<=${store.maxDepthInUse()}  ` +
    `verts ${store.verticesResident()}  alt ${(alt / 1000).toFixed(1)} km  ${mirrorText}`;
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
