/**
 * In-browser decoding of the exported interchange bundle. The fixture
 * records the training checkpoint's greedy decodes; the browser decoder
 * recomputes them from the .npz bytes alone.
 */

import { readFileSync } from "node:fs";
import { join as joinPath } from "node:path";

import { describe, expect, it } from "vitest";

import { SlmTranslator, join, scan } from "../src/core/slm.js";
import { NpzError, parseNpz } from "../src/core/npz.js";

const FIXTURES = joinPath(__dirname, "fixtures");

function loadBundle(): ArrayBuffer {
  const bytes = readFileSync(joinPath(FIXTURES, "slm.npz"));
  return bytes.buffer.slice(bytes.byteOffset, bytes.byteOffset + bytes.byteLength);
}

describe("interchange bundle parsing", () => {
  it("reads every exported array with the right shapes", () => {
    const arrays = parseNpz(loadBundle());
    expect(arrays.has("embedding")).toBe(true);
    expect(arrays.has("dec_w_ih")).toBe(true);
    const config = arrays.get("config");
    expect(config?.text).toBeTruthy();
    const parsed = JSON.parse(config!.text!);
    expect(parsed.format).toBe("geoslm-interchange");
    const embedding = arrays.get("embedding")!;
    expect(embedding.shape.length).toBe(2);
    expect(embedding.data!.length).toBe(embedding.shape[0] * embedding.shape[1]);
  });

  it("rejects non-bundles", () => {
    expect(() => parseNpz(new ArrayBuffer(64))).toThrow(NpzError);
  });
});

describe("tokenizer port", () => {
  it("round-trips call strings", () => {
    for (const text of [
      "AddMarker('University', [-73.1888, 122.889])",
      "MoveToExtent(62.2585, -120.3652, 63.8833, -3.3906)",
      "Zoom in by 7 levels to focus on the details.",
    ]) {
      expect(join(scan(text))).toBe(text);
    }
  });
});

describe("in-browser greedy decoding", () => {
  const translator = SlmTranslator.fromBuffer(loadBundle());
  const parity = JSON.parse(readFileSync(joinPath(FIXTURES, "slm_parity.json"), "utf-8")) as {
    cases: Array<{ query: string; prediction: string }>;
  };

  it("reproduces the checkpoint's greedy decodes", () => {
    for (const aCase of parity.cases) {
      expect(translator.translate(aCase.query), aCase.query).toBe(aCase.prediction);
    }
  });

  it("is deterministic", () => {
    const query = parity.cases[0].query;
    expect(translator.translate(query)).toBe(translator.translate(query));
  });
});
