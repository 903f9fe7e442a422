/**
 * Cross-runtime parity: the browser core must reproduce the native
 * translator outputs on the fixture's 50 sampled queries, byte for byte.
 * Fixtures are produced by scripts/make_fixtures.py from the same shipped
 * rules file and the same trained model files.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { serializeCall } from "../src/core/calls.js";
import { classify, parseModel } from "../src/core/models.js";
import { RuleSet } from "../src/core/rules.js";

const FIXTURES = join(__dirname, "fixtures");

const read = (name: string) => readFileSync(join(FIXTURES, name), "utf-8");

interface ParityCase {
  query: string;
  rules: string | null;
  svm?: string;
  rf?: string;
}

const parity = JSON.parse(read("parity.json")) as { cases: ParityCase[] };
const ruleset = RuleSet.fromJson(read("rules.json"));
const svm = parseModel(read("svm.model.json"));
const rf = parseModel(read("rf.model.json"));

describe("cross-runtime parity", () => {
  it("covers at least 50 sampled queries", () => {
    expect(parity.cases.filter((c) => c.svm !== undefined).length).toBeGreaterThanOrEqual(50);
  });

  it("rules outputs match the native translator on every case", () => {
    for (const aCase of parity.cases) {
      const call = ruleset.translate(aCase.query);
      const got = call === null ? null : serializeCall(call);
      expect(got, aCase.query).toBe(aCase.rules);
    }
  });

  it("svm labels match the native classifier on every case", () => {
    for (const aCase of parity.cases) {
      if (aCase.svm === undefined) continue;
      expect(classify(svm, aCase.query), aCase.query).toBe(aCase.svm);
    }
  });

  it("rf labels match the native classifier on every case", () => {
    for (const aCase of parity.cases) {
      if (aCase.rf === undefined) continue;
      expect(classify(rf, aCase.query), aCase.query).toBe(aCase.rf);
    }
  });

  it("model files carry the expected header", () => {
    expect(svm.kind).toBe("svm");
    expect(rf.kind).toBe("rf");
    expect(svm.classes).toEqual(rf.classes);
  });
});
