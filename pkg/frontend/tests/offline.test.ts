/**
 * Offline guarantees: the rules, classifier, and imported-model modes never
 * touch the network; only remote mode uses the injected fetch, and its
 * failures surface as notices rather than crashes.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { FetchLike } from "../src/core/llm.js";
import { parseModel } from "../src/core/models.js";
import { RuleSet } from "../src/core/rules.js";
import { AppServices, handleQuery } from "../src/app/flows.js";
import { initialState } from "../src/app/map.js";

const FIXTURES = join(__dirname, "fixtures");
const read = (name: string) => readFileSync(join(FIXTURES, name), "utf-8");

function countingFetch(): { fetchFn: FetchLike; calls: () => number } {
  let count = 0;
  const fetchFn: FetchLike = async () => {
    count += 1;
    return new Response(JSON.stringify({ text: "ZoomOut(2)" }), { status: 200 });
  };
  return { fetchFn, calls: () => count };
}

function services(fetchFn: FetchLike): AppServices {
  return {
    ruleset: RuleSet.fromJson(read("rules.json")),
    classifier: parseModel(read("svm.model.json")),
    remote: { endpointUrl: "https://example.test/chat", modelName: "m", apiKey: "k" },
    slmTranslate: null,
    fetchFn,
  };
}

describe("offline modes", () => {
  it("rules mode executes with zero network requests", async () => {
    const net = countingFetch();
    const app = services(net.fetchFn);
    const outcome = await handleQuery(initialState(), "rules", "zoom out by 2 levels", app);
    expect(outcome.kind).toBe("executed");
    expect(net.calls()).toBe(0);
  });

  it("classifier mode produces a form with zero network requests", async () => {
    const net = countingFetch();
    const app = services(net.fetchFn);
    const outcome = await handleQuery(
      initialState(),
      "classifier",
      "Add marker 'University' at location -73.1888, 122.889!",
      app,
    );
    expect(outcome.kind).toBe("form");
    expect(net.calls()).toBe(0);
  });

  it("imported-model mode is absent-but-nonblocking with zero requests", async () => {
    const net = countingFetch();
    const app = services(net.fetchFn);
    const outcome = await handleQuery(initialState(), "slm", "zoom in 3", app);
    expect(outcome.kind).toBe("notice");
    expect(outcome.state.notices.at(-1)).toContain("interchange");
    expect(net.calls()).toBe(0);
  });

  it("offline modes keep working when the network is down entirely", async () => {
    const downFetch: FetchLike = async () => {
      throw new Error("network disabled");
    };
    const app = services(downFetch);
    const executed = await handleQuery(initialState(), "rules", "zoom out by 2 levels", app);
    expect(executed.kind).toBe("executed");
    const classified = await handleQuery(initialState(), "classifier", "zoom in 4", app);
    expect(classified.kind).toBe("form");
  });
});

describe("remote mode", () => {
  it("uses exactly one request and executes the translation", async () => {
    const net = countingFetch();
    const app = services(net.fetchFn);
    const outcome = await handleQuery(initialState(), "remote", "zoom out please", app);
    expect(outcome.kind).toBe("executed");
    expect(net.calls()).toBe(1);
    if (outcome.kind === "executed") {
      expect(outcome.state.log.at(-1)).toBe("ZoomOut(2)");
    }
  });

  it("shows a visible auth notice without a key and stays usable", async () => {
    const net = countingFetch();
    const app = services(net.fetchFn);
    app.remote = { endpointUrl: "https://example.test/chat", modelName: "m", apiKey: "" };
    const outcome = await handleQuery(initialState(), "remote", "zoom out", app);
    expect(outcome.kind).toBe("notice");
    expect(outcome.state.notices.at(-1)).toContain("API key");
    // The app remains usable: a follow-up offline command still executes.
    const next = await handleQuery(outcome.state, "rules", "zoom in 3 levels", app);
    expect(next.kind).toBe("executed");
  });

  it("turns network failures into notices, never crashes", async () => {
    const app = services(async () => {
      throw new Error("boom");
    });
    const outcome = await handleQuery(initialState(), "remote", "zoom out", app);
    expect(outcome.kind).toBe("notice");
    expect(outcome.state.notices.at(-1)).toContain("Remote translation failed");
  });

  it("flags invalid model output instead of executing it", async () => {
    const app = services(async () =>
      new Response(JSON.stringify({ text: "Zoom(2)" }), { status: 200 }),
    );
    const outcome = await handleQuery(initialState(), "remote", "zoom out", app);
    expect(outcome.kind).toBe("notice");
    expect(outcome.state.notices.at(-1)).toContain("invalid call");
  });
});
