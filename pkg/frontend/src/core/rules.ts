/**
 * Interpreter for the shipped rules file: the same bytes the native
 * translator uses, evaluated with the same first-match-wins semantics.
 */

import {
  GisCall,
  geometryFromText,
  numberLiteral,
  propertyFromText,
  shapeFromText,
} from "./calls.js";

export const RULES_FORMAT_VERSION = 1;

export class RulesFileError extends Error {}

interface SlotSpec {
  pattern: string;
  group?: number;
}

interface RuleSpec {
  function: string;
  trigger: string;
  slots: Record<string, SlotSpec>;
  args: Array<Record<string, string>>;
}

interface CompiledRule {
  fn: string;
  trigger: RegExp;
  slots: Array<{ name: string; pattern: RegExp; group: number }>;
  args: Array<Record<string, string>>;
}

export class RuleSet {
  private constructor(private readonly rules: CompiledRule[]) {}

  static fromJson(text: string): RuleSet {
    const payload = JSON.parse(text);
    if (payload.format_version !== RULES_FORMAT_VERSION) {
      throw new RulesFileError(`unsupported rules format_version: ${payload.format_version}`);
    }
    const rules: CompiledRule[] = (payload.rules as RuleSpec[]).map((rule) => ({
      fn: rule.function,
      trigger: new RegExp(rule.trigger, "i"),
      slots: Object.entries(rule.slots ?? {}).map(([name, spec]) => ({
        name,
        pattern: new RegExp(spec.pattern, "i"),
        group: spec.group ?? 1,
      })),
      args: rule.args,
    }));
    if (rules.length === 0) {
      throw new RulesFileError("rules file contains no rules");
    }
    return new RuleSet(rules);
  }

  translate(query: string): GisCall | null {
    for (const rule of this.rules) {
      if (!rule.trigger.test(query)) {
        continue;
      }
      const values: Record<string, string> = {};
      let complete = true;
      for (const slot of rule.slots) {
        const found = slot.pattern.exec(query);
        if (!found || found[slot.group] === undefined) {
          complete = false;
          break;
        }
        values[slot.name] = found[slot.group];
      }
      if (!complete) {
        continue;
      }
      try {
        return buildCall(rule.fn, rule.args, values);
      } catch {
        continue; // extracted values cannot form a valid call
      }
    }
    return null;
  }
}

function buildCall(
  fn: string,
  args: Array<Record<string, string>>,
  values: Record<string, string>,
): GisCall {
  const built: unknown[] = args.map((arg) => {
    switch (arg.kind) {
      case "string":
        return values[arg.slot];
      case "number":
        return numberLiteral(values[arg.slot]);
      case "int": {
        const parsed = parseInt(values[arg.slot], 10);
        if (!Number.isInteger(parsed) || parsed < 1) {
          throw new RulesFileError(`not a positive integer: ${values[arg.slot]}`);
        }
        return parsed;
      }
      case "pair":
        return [numberLiteral(values[arg.x_slot]), numberLiteral(values[arg.y_slot])];
      case "geometry":
        return geometryFromText(values[arg.slot]);
      case "shape":
        return shapeFromText(values[arg.slot]);
      case "property":
        return propertyFromText(values[arg.slot]);
      case "null":
        return null;
      default:
        throw new RulesFileError(`unknown argument kind: ${arg.kind}`);
    }
  });
  switch (fn) {
    case "AddMarker":
      return { name: "AddMarker", label: built[0] as string, coords: built[1] as any };
    case "AddLayer":
      return { name: "AddLayer", layer: built[0] as string };
    case "AddVector":
      return { name: "AddVector", geometry: built[0] as any, filename: built[1] as string };
    case "AddWMS":
      return { name: "AddWMS", url: built[0] as string };
    case "Cartography":
      return {
        name: "Cartography",
        property: built[0] as any,
        color: built[1] as string,
        extra: built[2] as string | null,
      };
    case "Draw":
      return { name: "Draw", shape: built[0] as any };
    case "Move":
      return { name: "Move", a: built[0] as any, b: built[1] as any };
    case "MoveToExtent":
      return {
        name: "MoveToExtent",
        a: built[0] as any,
        b: built[1] as any,
        c: built[2] as any,
        d: built[3] as any,
      };
    case "ZoomIn":
      return { name: "ZoomIn", levels: built[0] as number };
    case "ZoomOut":
      return { name: "ZoomOut", levels: built[0] as number };
    default:
      throw new RulesFileError(`rule targets unknown function: ${fn}`);
  }
}
