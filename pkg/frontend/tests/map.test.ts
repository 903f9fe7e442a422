import { describe, expect, it } from "vitest";

import { parseCall } from "../src/core/calls.js";
import { MAX_ZOOM, MIN_ZOOM, executeCall, initialState } from "../src/app/map.js";

const run = (state = initialState(), ...calls: string[]) =>
  calls.reduce((s, text) => executeCall(s, parseCall(text)), state);

describe("map state machine", () => {
  it("adds a labeled marker at the requested coordinates", () => {
    const state = run(undefined, "AddMarker('Madrid', [-4.5, 40])");
    expect(state.markers).toEqual([{ label: "Madrid", x: -4.5, y: 40 }]);
  });

  it("zoom in then out by the same amount restores the level", () => {
    const start = initialState();
    const state = run(start, "ZoomIn(7)", "ZoomOut(7)");
    expect(state.zoom).toBe(start.zoom);
  });

  it("clamps zoom to the widget's range", () => {
    expect(run(undefined, "ZoomOut(9)").zoom).toBe(MIN_ZOOM);
    expect(run(undefined, "ZoomIn(99)").zoom).toBe(MAX_ZOOM);
  });

  it("switches the base layer", () => {
    expect(run(undefined, "AddLayer('Satellite')").baseLayer).toBe("Satellite");
  });

  it("loads vector overlays", () => {
    const state = run(undefined, "AddVector('point', 'point_zones_NY_kpn.kml')");
    expect(state.vectors).toEqual([{ geometry: "point", filename: "point_zones_NY_kpn.kml" }]);
  });

  it("adds WMS layers from valid URLs", () => {
    const state = run(undefined, "AddWMS('https://example.activity/wms')");
    expect(state.wmsLayers).toEqual(["https://example.activity/wms"]);
  });

  it("reports an unusable WMS URL as a notice, not a crash", () => {
    const state = run(undefined, "AddWMS('not a url')");
    expect(state.wmsLayers).toEqual([]);
    expect(state.notices.at(-1)).toContain("invalid URL");
  });

  it("changes cartographic properties", () => {
    const state = run(
      undefined,
      "Cartography('background', 'ivory', null)",
      "Cartography('fill', 'teal', null)",
      "Cartography('stroke', 'crimson', null)",
    );
    expect([state.background, state.fill, state.stroke]).toEqual(["ivory", "teal", "crimson"]);
  });

  it("enters draw mode", () => {
    expect(run(undefined, "Draw('Line')").drawMode).toBe("Line");
  });

  it("centers the view on move", () => {
    const state = run(undefined, "Move(40.5267, -79.4892)");
    expect(state.centerX).toBeCloseTo(40.5267);
    expect(state.centerY).toBeCloseTo(-79.4892);
  });

  it("fits the view to an extent", () => {
    const state = run(undefined, "MoveToExtent(0, 0, 10, 10)");
    expect(state.centerX).toBeCloseTo(5);
    expect(state.centerY).toBeCloseTo(5);
    expect(state.zoom).toBeGreaterThan(initialState().zoom);
  });

  it("echoes every executed call in canonical form in the log", () => {
    const state = run(undefined, "ZoomOut(2)", "Draw('line')");
    expect(state.log).toEqual(["ZoomOut(2)", "Draw('Line')"]);
  });

  it("never mutates the previous state", () => {
    const start = initialState();
    run(start, "ZoomIn(3)", "AddLayer('Terrain')");
    expect(start.zoom).toBe(initialState().zoom);
    expect(start.log).toEqual([]);
  });
});
