/**
 * Binary tile decoder.
 *
 * Layout (little-endian): 32-byte header, f64x3 center, then f32
 * positions (relative to center), f32 normals, u8 biomes padded to 4,
 * u32 triangle indices. The decoder is strict: anything that is not an
 * exact, well-formed frame throws a typed error so a corrupted stream
 * can never half-load.
 */

export const MAGIC = 0x4c495450; // "PTIL" read as LE u32
export const VERSION = 1;
export const HEADER_BYTES = 32;
export const CENTER_BYTES = 24;

export class TileCodecError extends Error {}
export class BadMagicError extends TileCodecError {}
export class VersionError extends TileCodecError {}
export class TruncatedError extends TileCodecError {}
export class IndexRangeError extends TileCodecError {}

export interface QuadNode {
  face: number;
  depth: number;
  x: number;
  y: number;
}

export function address(node: QuadNode): string {
  return `f${node.face}/d${node.depth}/${node.x}/${node.y}`;
}

export function parseAddress(addr: string): QuadNode {
  const m = /^f(\d+)\/d(\d+)\/(\d+)\/(\d+)$/.exec(addr);
  if (!m) throw new Error(`malformed node address ${addr}`);
  const node = {
    face: Number(m[1]),
    depth: Number(m[2]),
    x: Number(m[3]),
    y: Number(m[4]),
  };
  validateNode(node);
  return node;
}

export function validateNode(node: QuadNode): void {
  const n = 2 ** node.depth;
  const ok =
    node.face >= 0 && node.face <= 5 && node.depth >= 0 &&
    node.x >= 0 && node.x < n && node.y >= 0 && node.y < n;
  if (!ok) throw new Error(`invalid node address ${JSON.stringify(node)}`);
}

export interface Tile {
  node: QuadNode;
  /** f64 world-space tile center; positions are f32 offsets from it. */
  center: Float64Array;
  positions: Float32Array;
  normals: Float32Array;
  biomes: Uint8Array;
  indices: Uint32Array;
  resolution: number;
}

export function encodedSize(vertexCount: number, indexCount: number): number {
  const pad = (4 - (vertexCount % 4)) % 4;
  return (
    HEADER_BYTES + CENTER_BYTES +
    12 * vertexCount + 12 * vertexCount + vertexCount + pad +
    4 * indexCount
  );
}

export function decodeTile(data: Uint8Array): Tile {
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  if (data.byteLength >= 4 && view.getUint32(0, true) !== MAGIC) {
    throw new BadMagicError(`bad magic 0x${view.getUint32(0, true).toString(16)}`);
  }
  if (data.byteLength < HEADER_BYTES) {
    throw new TruncatedError(`${data.byteLength} bytes is shorter than the header`);
  }
  const version = view.getUint32(4, true);
  if (version !== VERSION) throw new VersionError(`unsupported version ${version}`);
  const node: QuadNode = {
    face: view.getUint8(8),
    depth: view.getUint8(9),
    x: view.getUint32(12, true),
    y: view.getUint32(16, true),
  };
  const resolution = view.getUint32(20, true);
  const v = view.getUint32(24, true);
  const i = view.getUint32(28, true);

  const want = encodedSize(v, i);
  if (data.byteLength < want) {
    throw new TruncatedError(`expected ${want} bytes, got ${data.byteLength}`);
  }
  if (data.byteLength > want) {
    throw new TileCodecError(`${data.byteLength - want} trailing bytes`);
  }
  if (v !== (resolution + 1) ** 2) {
    throw new TileCodecError("vertex count does not match resolution");
  }
  try {
    validateNode(node);
  } catch (exc) {
    throw new TileCodecError(String(exc instanceof Error ? exc.message : exc));
  }

  // copy out of the frame so the socket buffer can be reused
  let off = HEADER_BYTES;
  const center = new Float64Array(3);
  for (let k = 0; k < 3; k++) center[k] = view.getFloat64(off + 8 * k, true);
  off += CENTER_BYTES;
  const positions = readF32(data, off, 3 * v);
  off += 12 * v;
  const normals = readF32(data, off, 3 * v);
  off += 12 * v;
  const biomes = data.slice(off, off + v);
  off += v + ((4 - (v % 4)) % 4);
  const indices = readU32(data, off, i);
  for (let k = 0; k < indices.length; k++) {
    if (indices[k] >= v) {
      throw new IndexRangeError(`index ${indices[k]} out of range for ${v} vertices`);
    }
  }
  return { node, center, positions, normals, biomes, indices, resolution };
}

function readF32(data: Uint8Array, offset: number, count: number): Float32Array {
  // byteOffset may not be 4-aligned relative to the underlying buffer
  const bytes = data.slice(offset, offset + 4 * count);
  return new Float32Array(bytes.buffer, 0, count);
}

function readU32(data: Uint8Array, offset: number, count: number): Uint32Array {
  const bytes = data.slice(offset, offset + 4 * count);
  return new Uint32Array(bytes.buffer, 0, count);
}

/** center + relative recombined in double precision. */
export function absolutePositions(tile: Tile, positions?: Float32Array): Float64Array {
  const rel = positions ?? tile.positions;
  const out = new Float64Array(rel.length);
  for (let k = 0; k < rel.length; k += 3) {
    out[k] = tile.center[0] + rel[k];
    out[k + 1] = tile.center[1] + rel[k + 1];
    out[k + 2] = tile.center[2] + rel[k + 2];
  }
  return out;
}
