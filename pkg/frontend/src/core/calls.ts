/**
 * Canonical GIS call grammar: AST, parser, serializer.
 *
 * Mirrors the native implementation exactly: number literals keep their
 * source text verbatim, string literals are single-quoted with no escape
 * mechanism, enums parse case-insensitively and serialize canonically.
 */

export const GIS_FUNCTIONS = [
  "AddMarker",
  "AddLayer",
  "AddVector",
  "AddWMS",
  "Cartography",
  "Draw",
  "Move",
  "MoveToExtent",
  "ZoomIn",
  "ZoomOut",
] as const;

export type FunctionName = (typeof GIS_FUNCTIONS)[number];

const NUMBER_RE = /^-?[0-9]+(\.[0-9]+)?$/;

export class ParseError extends Error {}
export class UnknownFunctionError extends ParseError {}
export class ArityMismatchError extends ParseError {}
export class TypeMismatchError extends ParseError {}
export class CallSyntaxError extends ParseError {}

export type GeometryKind = "point" | "line" | "polyline" | "polygon";
export type DrawShape = "Point" | "Line" | "Polygon";
export type CartoProperty = "background" | "fill" | "stroke";

export function geometryFromText(text: string): GeometryKind {
  const lowered = text.toLowerCase();
  if (lowered === "point" || lowered === "line" || lowered === "polyline" || lowered === "polygon") {
    return lowered;
  }
  throw new TypeMismatchError(`not a geometry kind: ${text}`);
}

export function shapeFromText(text: string): DrawShape {
  const canonical = text.charAt(0).toUpperCase() + text.slice(1).toLowerCase();
  if (canonical === "Point" || canonical === "Line" || canonical === "Polygon") {
    return canonical;
  }
  throw new TypeMismatchError(`not a drawable shape: ${text}`);
}

export function propertyFromText(text: string): CartoProperty {
  const lowered = text.toLowerCase();
  if (lowered === "background" || lowered === "fill" || lowered === "stroke") {
    return lowered;
  }
  throw new TypeMismatchError(`not a cartographic property: ${text}`);
}

/** A decimal number kept as written; equality and output are textual. */
export interface NumberLiteral {
  readonly text: string;
}

export function numberLiteral(text: string): NumberLiteral {
  if (!NUMBER_RE.test(text)) {
    throw new TypeMismatchError(`not a decimal literal: ${text}`);
  }
  return { text };
}

export type GisCall =
  | { name: "AddMarker"; label: string; coords: [NumberLiteral, NumberLiteral] }
  | { name: "AddLayer"; layer: string }
  | { name: "AddVector"; geometry: GeometryKind; filename: string }
  | { name: "AddWMS"; url: string }
  | { name: "Cartography"; property: CartoProperty; color: string; extra: string | null }
  | { name: "Draw"; shape: DrawShape }
  | { name: "Move"; a: NumberLiteral; b: NumberLiteral }
  | { name: "MoveToExtent"; a: NumberLiteral; b: NumberLiteral; c: NumberLiteral; d: NumberLiteral }
  | { name: "ZoomIn"; levels: number }
  | { name: "ZoomOut"; levels: number };

const ARITY: Record<FunctionName, number> = {
  AddMarker: 2,
  AddLayer: 1,
  AddVector: 2,
  AddWMS: 1,
  Cartography: 3,
  Draw: 1,
  Move: 2,
  MoveToExtent: 4,
  ZoomIn: 1,
  ZoomOut: 1,
};

type Arg =
  | { kind: "string"; value: string }
  | { kind: "number"; literal: NumberLiteral }
  | { kind: "null" }
  | { kind: "pair"; first: NumberLiteral; second: NumberLiteral };

class Scanner {
  pos = 0;

  constructor(private readonly text: string) {}

  skipWs(): void {
    while (this.pos < this.text.length && /\s/.test(this.text[this.pos])) {
      this.pos += 1;
    }
  }

  peek(): string {
    return this.pos < this.text.length ? this.text[this.pos] : "";
  }

  expect(char: string): void {
    this.skipWs();
    if (this.peek() !== char) {
      const found = this.peek() || "end of input";
      throw new CallSyntaxError(`expected '${char}', found '${found}' at offset ${this.pos}`);
    }
    this.pos += 1;
  }

  name(): string {
    this.skipWs();
    const match = /^[A-Za-z_][A-Za-z0-9_]*/.exec(this.text.slice(this.pos));
    if (!match) {
      throw new CallSyntaxError(`expected a function name at offset ${this.pos}`);
    }
    this.pos += match[0].length;
    return match[0];
  }

  number(): NumberLiteral {
    this.skipWs();
    const match = /^-?[0-9]+(\.[0-9]+)?/.exec(this.text.slice(this.pos));
    if (!match) {
      throw new CallSyntaxError(`expected a number at offset ${this.pos}`);
    }
    this.pos += match[0].length;
    return { text: match[0] };
  }

  string(): string {
    const end = this.text.indexOf("'", this.pos);
    if (end < 0) {
      throw new CallSyntaxError("unterminated string literal");
    }
    const value = this.text.slice(this.pos, end);
    this.pos = end + 1;
    return value;
  }

  argument(): Arg {
    this.skipWs();
    const ch = this.peek();
    if (ch === "'") {
      this.pos += 1;
      return { kind: "string", value: this.string() };
    }
    if (ch === "[") {
      this.pos += 1;
      const first = this.number();
      this.expect(",");
      const second = this.number();
      this.expect("]");
      return { kind: "pair", first, second };
    }
    if (ch === "-" || (ch >= "0" && ch <= "9")) {
      return { kind: "number", literal: this.number() };
    }
    const word = /^[A-Za-z_][A-Za-z0-9_]*/.exec(this.text.slice(this.pos));
    if (word && word[0] === "null") {
      this.pos += word[0].length;
      return { kind: "null" };
    }
    const found = ch || "end of input";
    throw new CallSyntaxError(`expected an argument, found '${found}' at offset ${this.pos}`);
  }
}

function wantString(name: string, pos: number, arg: Arg): string {
  if (arg.kind !== "string") {
    throw new TypeMismatchError(`${name}: argument ${pos} must be a quoted string`);
  }
  return arg.value;
}

function wantNumber(name: string, pos: number, arg: Arg): NumberLiteral {
  if (arg.kind !== "number") {
    throw new TypeMismatchError(`${name}: argument ${pos} must be a number`);
  }
  return arg.literal;
}

function zoomLevels(name: string, arg: Arg): number {
  const literal = wantNumber(name, 1, arg);
  if (literal.text.includes(".") || literal.text.startsWith("-") || parseInt(literal.text, 10) < 1) {
    throw new TypeMismatchError(`${name}: levels must be a positive integer, got ${literal.text}`);
  }
  return parseInt(literal.text, 10);
}

export function parseCall(text: string): GisCall {
  const scanner = new Scanner(text);
  const name = scanner.name();
  if (!(GIS_FUNCTIONS as readonly string[]).includes(name)) {
    throw new UnknownFunctionError(`unknown function ${name}`);
  }
  const fn = name as FunctionName;
  scanner.expect("(");
  const args: Arg[] = [];
  scanner.skipWs();
  if (scanner.peek() !== ")") {
    args.push(scanner.argument());
    scanner.skipWs();
    while (scanner.peek() === ",") {
      scanner.pos += 1;
      args.push(scanner.argument());
      scanner.skipWs();
    }
  }
  scanner.expect(")");
  scanner.skipWs();
  if (scanner.pos !== text.length) {
    throw new CallSyntaxError(`trailing input after ')' at offset ${scanner.pos}`);
  }
  if (args.length !== ARITY[fn]) {
    throw new ArityMismatchError(`${fn} takes ${ARITY[fn]} argument(s), got ${args.length}`);
  }
  switch (fn) {
    case "AddMarker": {
      const label = wantString(fn, 1, args[0]);
      if (args[1].kind !== "pair") {
        throw new TypeMismatchError("AddMarker: argument 2 must be a coordinate pair [n1, n2]");
      }
      return { name: fn, label, coords: [args[1].first, args[1].second] };
    }
    case "AddLayer":
      return { name: fn, layer: wantString(fn, 1, args[0]) };
    case "AddVector":
      return {
        name: fn,
        geometry: geometryFromText(wantString(fn, 1, args[0])),
        filename: wantString(fn, 2, args[1]),
      };
    case "AddWMS":
      return { name: fn, url: wantString(fn, 1, args[0]) };
    case "Cartography": {
      const property = propertyFromText(wantString(fn, 1, args[0]));
      const color = wantString(fn, 2, args[1]);
      let extra: string | null;
      if (args[2].kind === "null") {
        extra = null;
      } else if (args[2].kind === "string") {
        extra = args[2].value;
      } else {
        throw new TypeMismatchError("Cartography: argument 3 must be a string or null");
      }
      return { name: fn, property, color, extra };
    }
    case "Draw":
      return { name: fn, shape: shapeFromText(wantString(fn, 1, args[0])) };
    case "Move":
      return { name: fn, a: wantNumber(fn, 1, args[0]), b: wantNumber(fn, 2, args[1]) };
    case "MoveToExtent":
      return {
        name: fn,
        a: wantNumber(fn, 1, args[0]),
        b: wantNumber(fn, 2, args[1]),
        c: wantNumber(fn, 3, args[2]),
        d: wantNumber(fn, 4, args[3]),
      };
    case "ZoomIn":
      return { name: fn, levels: zoomLevels(fn, args[0]) };
    case "ZoomOut":
      return { name: fn, levels: zoomLevels(fn, args[0]) };
  }
}

const quote = (value: string): string => `'${value}'`;

export function serializeCall(call: GisCall): string {
  switch (call.name) {
    case "AddMarker":
      return `AddMarker(${quote(call.label)}, [${call.coords[0].text}, ${call.coords[1].text}])`;
    case "AddLayer":
      return `AddLayer(${quote(call.layer)})`;
    case "AddVector":
      return `AddVector(${quote(call.geometry)}, ${quote(call.filename)})`;
    case "AddWMS":
      return `AddWMS(${quote(call.url)})`;
    case "Cartography": {
      const extra = call.extra === null ? "null" : quote(call.extra);
      return `Cartography(${quote(call.property)}, ${quote(call.color)}, ${extra})`;
    }
    case "Draw":
      return `Draw(${quote(call.shape)})`;
    case "Move":
      return `Move(${call.a.text}, ${call.b.text})`;
    case "MoveToExtent":
      return `MoveToExtent(${call.a.text}, ${call.b.text}, ${call.c.text}, ${call.d.text})`;
    case "ZoomIn":
      return `ZoomIn(${call.levels})`;
    case "ZoomOut":
      return `ZoomOut(${call.levels})`;
  }
}

export function functionName(call: GisCall): FunctionName {
  return call.name;
}
