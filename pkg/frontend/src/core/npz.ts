/**
 * Minimal reader for .npz bundles (ZIP of stored .npy entries plus a JSON
 * config entry), enough to load the interchange model format in a browser
 * with no dependencies. Only uncompressed entries and little-endian float32
 * / unicode scalar arrays are supported; that is exactly what the exporter
 * writes.
 */

export class NpzError extends Error {}

interface ZipEntry {
  name: string;
  offset: number; // local header offset
  size: number;
  method: number;
}

function readEntries(view: DataView): ZipEntry[] {
  // End-of-central-directory signature scan from the tail.
  let eocd = -1;
  for (let i = view.byteLength - 22; i >= 0; i -= 1) {
    if (view.getUint32(i, true) === 0x06054b50) {
      eocd = i;
      break;
    }
  }
  if (eocd < 0) {
    throw new NpzError("not a zip archive (no end-of-central-directory)");
  }
  const count = view.getUint16(eocd + 10, true);
  let cursor = view.getUint32(eocd + 16, true);
  const entries: ZipEntry[] = [];
  const decoder = new TextDecoder("utf-8");
  for (let i = 0; i < count; i += 1) {
    if (view.getUint32(cursor, true) !== 0x02014b50) {
      throw new NpzError("corrupt central directory");
    }
    const method = view.getUint16(cursor + 10, true);
    const size = view.getUint32(cursor + 24, true);
    const nameLength = view.getUint16(cursor + 28, true);
    const extraLength = view.getUint16(cursor + 30, true);
    const commentLength = view.getUint16(cursor + 32, true);
    const offset = view.getUint32(cursor + 42, true);
    const name = decoder.decode(
      new Uint8Array(view.buffer, view.byteOffset + cursor + 46, nameLength),
    );
    entries.push({ name, offset, size, method });
    cursor += 46 + nameLength + extraLength + commentLength;
  }
  return entries;
}

function entryBytes(view: DataView, entry: ZipEntry): Uint8Array {
  if (entry.method !== 0) {
    throw new NpzError(`compressed entry not supported: ${entry.name}`);
  }
  const header = entry.offset;
  if (view.getUint32(header, true) !== 0x04034b50) {
    throw new NpzError(`corrupt local header for ${entry.name}`);
  }
  const nameLength = view.getUint16(header + 26, true);
  const extraLength = view.getUint16(header + 28, true);
  const start = header + 30 + nameLength + extraLength;
  return new Uint8Array(view.buffer, view.byteOffset + start, entry.size);
}

export interface NpyArray {
  shape: number[];
  /** float data for '<f4'; for unicode scalars see ``text``. */
  data: Float32Array | null;
  text: string | null;
}

function parseNpy(bytes: Uint8Array, name: string): NpyArray {
  const magic = String.fromCharCode(...bytes.subarray(1, 6));
  if (bytes[0] !== 0x93 || magic !== "NUMPY") {
    throw new NpzError(`${name}: not an npy payload`);
  }
  const major = bytes[6];
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  let headerLength: number;
  let dataStart: number;
  if (major === 1) {
    headerLength = view.getUint16(8, true);
    dataStart = 10 + headerLength;
  } else {
    headerLength = view.getUint32(8, true);
    dataStart = 12 + headerLength;
  }
  const header = new TextDecoder("latin1").decode(
    bytes.subarray(major === 1 ? 10 : 12, dataStart),
  );
  const descr = /'descr':\s*'([^']+)'/.exec(header)?.[1];
  const fortran = /'fortran_order':\s*(True|False)/.exec(header)?.[1];
  const shapeText = /'shape':\s*\(([^)]*)\)/.exec(header)?.[1] ?? "";
  if (fortran === "True") {
    throw new NpzError(`${name}: fortran order not supported`);
  }
  const shape = shapeText
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0)
    .map((part) => parseInt(part, 10));
  const payload = bytes.subarray(dataStart);
  if (descr === "<f4") {
    // Copy to guarantee 4-byte alignment for the typed-array view.
    const copy = new Uint8Array(payload.length);
    copy.set(payload);
    return { shape, data: new Float32Array(copy.buffer), text: null };
  }
  if (descr && descr.startsWith("<U")) {
    const codes = new Uint8Array(payload.length);
    codes.set(payload);
    const u32 = new Uint32Array(codes.buffer);
    let text = "";
    for (const code of u32) {
      if (code === 0) break;
      text += String.fromCodePoint(code);
    }
    return { shape, data: null, text };
  }
  throw new NpzError(`${name}: unsupported dtype ${descr}`);
}

export function parseNpz(buffer: ArrayBuffer): Map<string, NpyArray> {
  const view = new DataView(buffer);
  const arrays = new Map<string, NpyArray>();
  for (const entry of readEntries(view)) {
    const name = entry.name.endsWith(".npy") ? entry.name.slice(0, -4) : entry.name;
    arrays.set(name, parseNpy(entryBytes(view, entry), entry.name));
  }
  return arrays;
}
