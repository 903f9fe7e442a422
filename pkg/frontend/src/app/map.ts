/**
 * Map state machine: executing a call produces a new state.
 *
 * The state is plain data and the transition function is pure, so every
 * behavior is testable without a DOM; rendering to a canvas is a separate
 * concern (see render.ts).
 */

import { GisCall, serializeCall } from "../core/calls.js";

export interface Marker {
  label: string;
  x: number;
  y: number;
}

export interface VectorOverlay {
  geometry: string;
  filename: string;
}

export interface MapState {
  centerX: number;
  centerY: number;
  zoom: number;
  baseLayer: string;
  markers: Marker[];
  vectors: VectorOverlay[];
  wmsLayers: string[];
  background: string;
  fill: string;
  stroke: string;
  drawMode: string | null;
  log: string[];
  notices: string[];
}

export const MIN_ZOOM = 0;
export const MAX_ZOOM = 22;

export function initialState(): MapState {
  return {
    centerX: 0,
    centerY: 0,
    zoom: 2,
    baseLayer: "Plain",
    markers: [],
    vectors: [],
    wmsLayers: [],
    background: "white",
    fill: "silver",
    stroke: "black",
    drawMode: null,
    log: [],
    notices: [],
  };
}

const clampZoom = (zoom: number): number => Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, zoom));

/** Apply one call; the canonical call string is echoed into the log. */
export function executeCall(state: MapState, call: GisCall): MapState {
  const next: MapState = {
    ...state,
    markers: [...state.markers],
    vectors: [...state.vectors],
    wmsLayers: [...state.wmsLayers],
    log: [...state.log, serializeCall(call)],
    notices: [...state.notices],
  };
  switch (call.name) {
    case "AddMarker":
      next.markers.push({
        label: call.label,
        x: parseFloat(call.coords[0].text),
        y: parseFloat(call.coords[1].text),
      });
      break;
    case "AddLayer":
      next.baseLayer = call.layer;
      break;
    case "AddVector":
      next.vectors.push({ geometry: call.geometry, filename: call.filename });
      break;
    case "AddWMS":
      try {
        new URL(call.url);
        next.wmsLayers.push(call.url);
      } catch {
        next.notices.push(`Cannot add WMS layer: invalid URL ${call.url}`);
      }
      break;
    case "Cartography":
      if (call.property === "background") {
        next.background = call.color;
      } else if (call.property === "fill") {
        next.fill = call.color;
      } else {
        next.stroke = call.color;
      }
      break;
    case "Draw":
      next.drawMode = call.shape;
      break;
    case "Move":
      next.centerX = parseFloat(call.a.text);
      next.centerY = parseFloat(call.b.text);
      break;
    case "MoveToExtent": {
      const [x1, y1, x2, y2] = [call.a, call.b, call.c, call.d].map((n) => parseFloat(n.text));
      next.centerX = (x1 + x2) / 2;
      next.centerY = (y1 + y2) / 2;
      // Fit: pick the zoom whose world window covers the requested span.
      const spanX = Math.max(Math.abs(x2 - x1), 1e-9);
      const spanY = Math.max(Math.abs(y2 - y1), 1e-9);
      const span = Math.max(spanX, spanY);
      next.zoom = clampZoom(Math.floor(Math.log2(360 / span)));
      break;
    }
    case "ZoomIn":
      next.zoom = clampZoom(state.zoom + call.levels);
      break;
    case "ZoomOut":
      next.zoom = clampZoom(state.zoom - call.levels);
      break;
  }
  return next;
}

export function pushNotice(state: MapState, notice: string): MapState {
  return { ...state, notices: [...state.notices, notice] };
}
