/**
 * Canvas renderer for the map state: an offline-friendly equirectangular
 * view with a graticule, markers, overlay listings, and the draw-mode hint.
 * Rendering is read-only over the state; all behavior lives in map.ts.
 */

import { MapState } from "./map.js";

export function worldToScreen(
  state: MapState,
  width: number,
  height: number,
  x: number,
  y: number,
): [number, number] {
  const scale = (width / 360) * Math.pow(2, state.zoom);
  return [
    width / 2 + (x - state.centerX) * scale,
    height / 2 - (y - state.centerY) * scale,
  ];
}

export function render(state: MapState, canvas: HTMLCanvasElement): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return;
  }
  const { width, height } = canvas;
  ctx.fillStyle = state.background;
  ctx.fillRect(0, 0, width, height);

  // Graticule spacing halves as zoom grows; keep 4..10 lines on screen.
  const scale = (width / 360) * Math.pow(2, state.zoom);
  let step = 90;
  while (step * scale > width / 3 && step > 0.005) {
    step /= 2;
  }
  ctx.strokeStyle = state.stroke;
  ctx.globalAlpha = 0.25;
  ctx.lineWidth = 1;
  const startX = Math.floor((state.centerX - width / 2 / scale) / step) * step;
  const endX = state.centerX + width / 2 / scale;
  for (let gx = startX; gx <= endX; gx += step) {
    const [sx] = worldToScreen(state, width, height, gx, 0);
    ctx.beginPath();
    ctx.moveTo(sx, 0);
    ctx.lineTo(sx, height);
    ctx.stroke();
  }
  const startY = Math.floor((state.centerY - height / 2 / scale) / step) * step;
  const endY = state.centerY + height / 2 / scale;
  for (let gy = startY; gy <= endY; gy += step) {
    const [, sy] = worldToScreen(state, width, height, 0, gy);
    ctx.beginPath();
    ctx.moveTo(0, sy);
    ctx.lineTo(width, sy);
    ctx.stroke();
  }
  ctx.globalAlpha = 1;

  // Center crosshair.
  ctx.strokeStyle = state.stroke;
  ctx.beginPath();
  ctx.moveTo(width / 2 - 8, height / 2);
  ctx.lineTo(width / 2 + 8, height / 2);
  ctx.moveTo(width / 2, height / 2 - 8);
  ctx.lineTo(width / 2, height / 2 + 8);
  ctx.stroke();

  // Markers.
  for (const marker of state.markers) {
    const [sx, sy] = worldToScreen(state, width, height, marker.x, marker.y);
    if (sx < -40 || sx > width + 40 || sy < -40 || sy > height + 40) {
      continue;
    }
    ctx.fillStyle = state.fill;
    ctx.strokeStyle = state.stroke;
    ctx.beginPath();
    ctx.arc(sx, sy, 6, 0, 2 * Math.PI);
    ctx.fill();
    ctx.stroke();
    ctx.fillStyle = state.stroke;
    ctx.font = "12px system-ui, sans-serif";
    ctx.fillText(marker.label, sx + 9, sy - 9);
  }

  // Status line: layer, zoom, center, overlays, draw mode.
  ctx.fillStyle = state.stroke;
  ctx.font = "12px system-ui, sans-serif";
  const overlays = [
    ...state.vectors.map((v) => `${v.geometry}:${v.filename}`),
    ...state.wmsLayers.map((url) => `wms:${url}`),
  ];
  const line = [
    `layer ${state.baseLayer}`,
    `zoom ${state.zoom}`,
    `center ${state.centerX.toFixed(4)}, ${state.centerY.toFixed(4)}`,
    state.drawMode ? `drawing ${state.drawMode}` : "",
    overlays.length ? `overlays: ${overlays.join(" | ")}` : "",
  ]
    .filter(Boolean)
    .join("   ");
  ctx.fillText(line, 8, height - 8);
}
