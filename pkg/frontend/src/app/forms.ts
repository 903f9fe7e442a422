/**
 * Parameter forms for the semi-automated flow: the classifier names the
 * function, the user supplies its arguments, and the form builds the call.
 */

import {
  FunctionName,
  GisCall,
  geometryFromText,
  numberLiteral,
  propertyFromText,
  shapeFromText,
} from "../core/calls.js";

export interface FormField {
  name: string;
  label: string;
  kind: "text" | "number" | "integer" | "choice" | "optional-text";
  choices?: string[];
}

export class FormValidationError extends Error {
  constructor(public readonly field: string, message: string) {
    super(message);
  }
}

export function formSpecFor(fn: FunctionName): FormField[] {
  switch (fn) {
    case "AddMarker":
      return [
        { name: "label", label: "Marker label", kind: "text" },
        { name: "x", label: "First coordinate", kind: "number" },
        { name: "y", label: "Second coordinate", kind: "number" },
      ];
    case "AddLayer":
      return [{ name: "layer", label: "Layer name", kind: "text" }];
    case "AddVector":
      return [
        {
          name: "geometry",
          label: "Geometry kind",
          kind: "choice",
          choices: ["point", "line", "polyline", "polygon"],
        },
        { name: "filename", label: "Vector file", kind: "text" },
      ];
    case "AddWMS":
      return [{ name: "url", label: "WMS URL", kind: "text" }];
    case "Cartography":
      return [
        {
          name: "property",
          label: "Property",
          kind: "choice",
          choices: ["background", "fill", "stroke"],
        },
        { name: "color", label: "Color", kind: "text" },
        { name: "extra", label: "Extra (optional)", kind: "optional-text" },
      ];
    case "Draw":
      return [
        { name: "shape", label: "Shape", kind: "choice", choices: ["Point", "Line", "Polygon"] },
      ];
    case "Move":
      return [
        { name: "a", label: "First coordinate", kind: "number" },
        { name: "b", label: "Second coordinate", kind: "number" },
      ];
    case "MoveToExtent":
      return [
        { name: "a", label: "From: first coordinate", kind: "number" },
        { name: "b", label: "From: second coordinate", kind: "number" },
        { name: "c", label: "To: first coordinate", kind: "number" },
        { name: "d", label: "To: second coordinate", kind: "number" },
      ];
    case "ZoomIn":
    case "ZoomOut":
      return [{ name: "levels", label: "Levels", kind: "integer" }];
  }
}

const NUMBER_RE = /^-?[0-9]+(\.[0-9]+)?$/;
const INTEGER_RE = /^[0-9]+$/;

function required(values: Record<string, string>, field: FormField): string {
  const raw = (values[field.name] ?? "").trim();
  if (!raw && field.kind !== "optional-text") {
    throw new FormValidationError(field.name, `${field.label} is required`);
  }
  return raw;
}

function number(values: Record<string, string>, field: FormField) {
  const raw = required(values, field);
  if (!NUMBER_RE.test(raw)) {
    throw new FormValidationError(field.name, `${field.label} must be a decimal number`);
  }
  return numberLiteral(raw);
}

function positiveInteger(values: Record<string, string>, field: FormField): number {
  const raw = required(values, field);
  if (!INTEGER_RE.test(raw) || parseInt(raw, 10) < 1) {
    throw new FormValidationError(field.name, `${field.label} must be a positive integer`);
  }
  return parseInt(raw, 10);
}

/** Build the call from form values, enforcing every argument invariant. */
export function buildCallFromForm(fn: FunctionName, values: Record<string, string>): GisCall {
  const fields = Object.fromEntries(formSpecFor(fn).map((f) => [f.name, f]));
  switch (fn) {
    case "AddMarker":
      return {
        name: fn,
        label: required(values, fields.label),
        coords: [number(values, fields.x), number(values, fields.y)],
      };
    case "AddLayer":
      return { name: fn, layer: required(values, fields.layer) };
    case "AddVector":
      return {
        name: fn,
        geometry: geometryFromText(required(values, fields.geometry)),
        filename: required(values, fields.filename),
      };
    case "AddWMS":
      return { name: fn, url: required(values, fields.url) };
    case "Cartography": {
      const extra = (values.extra ?? "").trim();
      return {
        name: fn,
        property: propertyFromText(required(values, fields.property)),
        color: required(values, fields.color),
        extra: extra ? extra : null,
      };
    }
    case "Draw":
      return { name: fn, shape: shapeFromText(required(values, fields.shape)) };
    case "Move":
      return { name: fn, a: number(values, fields.a), b: number(values, fields.b) };
    case "MoveToExtent":
      return {
        name: fn,
        a: number(values, fields.a),
        b: number(values, fields.b),
        c: number(values, fields.c),
        d: number(values, fields.d),
      };
    case "ZoomIn":
      return { name: fn, levels: positiveInteger(values, fields.levels) };
    case "ZoomOut":
      return { name: fn, levels: positiveInteger(values, fields.levels) };
  }
}
