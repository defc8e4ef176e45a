/**
 * Websocket session client.
 *
 * Framing rule: every "delta" control frame announces how many binary
 * tile payloads follow; nothing else may arrive in between. Camera
 * updates are coalesced to at most maxCameraHz sends per second, the
 * newest state winning, so dragging the mouse never floods the server.
 * A dropped connection reopens a fresh session (server state is per
 * session) and the status callback drives a visible indicator.
 */

import type { DeltaFrame } from "./store.js";

export type Status = "connecting" | "open" | "closed" | "error";

export interface StatsFrame {
  type: "stats";
  leaves: number;
  max_depth_in_use: number;
  vertices_resident: number;
  last_update_s: number;
}

export interface ErrorFrame {
  type: "error";
  code: number;
  message: string;
}

/** Minimal surface of a browser WebSocket, injectable for tests. */
export interface SocketLike {
  binaryType: string;
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  send(data: string): void;
  close(): void;
}

export interface SessionOptions {
  url: string;
  /** Parsed config JSON to send in the open message; server default when absent. */
  config?: unknown;
  makeSocket?: (url: string) => SocketLike;
  now?: () => number;
  setTimer?: (fn: () => void, ms: number) => unknown;
  clearTimer?: (handle: unknown) => void;
  maxCameraHz?: number;
  reconnectDelayMs?: number;
  onDelta?: (frame: DeltaFrame, payloads: Uint8Array[]) => void;
  onStats?: (frame: StatsFrame) => void;
  onServerError?: (frame: ErrorFrame) => void;
  onStatus?: (status: Status, detail?: string) => void;
}

export interface CameraMessage {
  type: "camera";
  pos: [number, number, number];
  look: [number, number, number];
}

export function cameraMessage(
  pos: readonly number[],
  look: readonly number[],
): CameraMessage {
  const vec3 = (v: readonly number[], name: string): [number, number, number] => {
    if (v.length !== 3 || !v.every((c) => typeof c === "number" && Number.isFinite(c))) {
      throw new Error(`${name} must be a finite 3-vector`);
    }
    return [v[0], v[1], v[2]];
  };
  const p = vec3(pos, "pos");
  if (p[0] === 0 && p[1] === 0 && p[2] === 0) {
    throw new Error("pos must be nonzero");
  }
  return { type: "camera", pos: p, look: vec3(look, "look") };
}

export class SessionClient {
  private opts: Required<Pick<SessionOptions, "maxCameraHz" | "reconnectDelayMs">> &
    SessionOptions;
  private socket: SocketLike | null = null;
  private pendingControl: DeltaFrame | null = null;
  private payloads: Uint8Array[] = [];
  private lastCameraSent = -Infinity;
  private queuedCamera: CameraMessage | null = null;
  private cameraTimer: unknown = null;
  private closedByUser = false;
  status: Status = "closed";
  sessionsOpened = 0;

  constructor(options: SessionOptions) {
    this.opts = { maxCameraHz: 20, reconnectDelayMs: 1000, ...options };
  }

  connect(): void {
    this.closedByUser = false;
    this.openSocket();
  }

  private openSocket(): void {
    const make =
      this.opts.makeSocket ??
      ((url: string) => new WebSocket(url) as unknown as SocketLike);
    this.setStatus("connecting");
    const sock = make(this.opts.url);
    sock.binaryType = "arraybuffer";
    this.socket = sock;
    this.pendingControl = null;
    this.payloads = [];
    sock.onopen = () => {
      this.sessionsOpened += 1;
      this.setStatus("open");
      const open: Record<string, unknown> = { type: "open" };
      if (this.opts.config !== undefined) open.config = this.opts.config;
      sock.send(JSON.stringify(open));
    };
    sock.onmessage = (ev) => this.onMessage(ev.data);
    sock.onerror = () => this.setStatus("error");
    sock.onclose = () => {
      this.socket = null;
      this.setStatus("closed");
      if (!this.closedByUser) {
        const timer = this.opts.setTimer ?? setTimeout;
        timer(() => {
          if (!this.closedByUser) this.openSocket();
        }, this.opts.reconnectDelayMs);
      }
    };
  }

  close(): void {
    this.closedByUser = true;
    this.socket?.close();
    this.socket = null;
  }

  /**
   * Record the latest camera state; sends immediately when the rate
   * allows, otherwise arms one trailing send with the newest state.
   */
  sendCamera(pos: readonly number[], look: readonly number[]): void {
    const msg = cameraMessage(pos, look);
    const now = this.opts.now ?? (() => Date.now());
    const interval = 1000 / this.opts.maxCameraHz;
    const dt = now() - this.lastCameraSent;
    if (dt >= interval) {
      this.transmitCamera(msg, now());
    } else {
      this.queuedCamera = msg;
      if (this.cameraTimer === null) {
        const timer = this.opts.setTimer ?? setTimeout;
        this.cameraTimer = timer(() => {
          this.cameraTimer = null;
          if (this.queuedCamera) {
            const m = this.queuedCamera;
            this.queuedCamera = null;
            this.transmitCamera(m, now());
          }
        }, interval - dt);
      }
    }
  }

  requestStats(): void {
    this.socket?.send(JSON.stringify({ type: "stats" }));
  }

  private transmitCamera(msg: CameraMessage, at: number): void {
    if (!this.socket || this.status !== "open") return;
    this.lastCameraSent = at;
    this.socket.send(JSON.stringify(msg));
  }

  private onMessage(data: unknown): void {
    if (typeof data === "string") {
      if (this.pendingControl) {
        this.abortSession("text frame while tile payloads were pending");
        return;
      }
      const frame = JSON.parse(data);
      if (frame.type === "delta") {
        if (frame.tiles > 0) {
          this.pendingControl = frame;
          this.payloads = [];
        } else {
          this.deliver(frame, []);
        }
      } else if (frame.type === "stats") {
        this.opts.onStats?.(frame);
      } else if (frame.type === "error") {
        this.opts.onServerError?.(frame);
        this.setStatus("open", `server error ${frame.code}: ${frame.message}`);
      } else {
        this.abortSession(`unexpected frame type ${frame.type}`);
      }
      return;
    }
    // binary tile payload
    const bytes =
      data instanceof ArrayBuffer ? new Uint8Array(data) : (data as Uint8Array);
    if (!this.pendingControl) {
      this.abortSession("tile payload without an announcing delta");
      return;
    }
    this.payloads.push(bytes);
    if (this.payloads.length === this.pendingControl.tiles) {
      const frame = this.pendingControl;
      const payloads = this.payloads;
      this.pendingControl = null;
      this.payloads = [];
      this.deliver(frame, payloads);
    }
  }

  /**
   * Hand a complete delta to the application. A decode or store failure
   * means this session's stream can no longer be trusted; surface the
   * error and drop the socket, which re-opens a fresh session.
   */
  private deliver(frame: DeltaFrame, payloads: Uint8Array[]): void {
    try {
      this.opts.onDelta?.(frame, payloads);
    } catch (exc) {
      this.abortSession(exc instanceof Error ? exc.message : String(exc));
    }
  }

  private abortSession(reason: string): void {
    this.setStatus("error", reason);
    this.socket?.close();
  }

  private setStatus(status: Status, detail?: string): void {
    this.status = status;
    this.opts.onStatus?.(status, detail);
  }
}
