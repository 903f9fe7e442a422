/**
 * Mode dispatch: how a typed request becomes an executed call.
 *
 * Fully automated modes (rules, remote, imported model) translate and
 * execute directly; the semi-automated classifier mode predicts the
 * function and hands back a parameter form for the user to complete.
 * Every network byte flows through the injected fetch so the offline
 * modes can be proven silent.
 */

import { FunctionName, GisCall, ParseError, parseCall } from "../core/calls.js";
import { FetchLike, RemoteConfig, translateRemote } from "../core/llm.js";
import { ClassifierModel, classify } from "../core/models.js";
import { RuleSet } from "../core/rules.js";
import { FormField, formSpecFor } from "./forms.js";
import { MapState, executeCall, pushNotice } from "./map.js";

export type Mode = "rules" | "classifier" | "remote" | "slm";

export interface AppServices {
  ruleset: RuleSet | null;
  classifier: ClassifierModel | null;
  remote: RemoteConfig | null;
  slmTranslate: ((query: string) => string) | null;
  fetchFn: FetchLike;
}

export type FlowOutcome =
  | { kind: "executed"; state: MapState; call: GisCall }
  | { kind: "form"; state: MapState; fn: FunctionName; fields: FormField[] }
  | { kind: "notice"; state: MapState };

export async function handleQuery(
  state: MapState,
  mode: Mode,
  query: string,
  services: AppServices,
): Promise<FlowOutcome> {
  if (mode === "rules") {
    if (!services.ruleset) {
      return { kind: "notice", state: pushNotice(state, "No rules file loaded.") };
    }
    const call = services.ruleset.translate(query);
    if (call === null) {
      return { kind: "notice", state: pushNotice(state, `Not understood: "${query}"`) };
    }
    return { kind: "executed", state: executeCall(state, call), call };
  }

  if (mode === "classifier") {
    if (!services.classifier) {
      return { kind: "notice", state: pushNotice(state, "No classifier model loaded.") };
    }
    const label = classify(services.classifier, query) as FunctionName;
    return { kind: "form", state, fn: label, fields: formSpecFor(label) };
  }

  if (mode === "slm") {
    if (!services.slmTranslate) {
      return {
        kind: "notice",
        state: pushNotice(
          state,
          "No imported model: load an interchange file to enable this mode.",
        ),
      };
    }
    const text = services.slmTranslate(query);
    return executeTranslated(state, text);
  }

  // Remote mode: failures surface as notices, never crash the app.
  if (!services.remote || !services.remote.apiKey) {
    return {
      kind: "notice",
      state: pushNotice(state, "Remote mode needs an endpoint and an API key."),
    };
  }
  try {
    const text = await translateRemote(services.remote, query, services.fetchFn);
    return executeTranslated(state, text);
  } catch (error) {
    return {
      kind: "notice",
      state: pushNotice(state, `Remote translation failed: ${(error as Error).message}`),
    };
  }
}

function executeTranslated(state: MapState, text: string): FlowOutcome {
  try {
    const call = parseCall(text);
    return { kind: "executed", state: executeCall(state, call), call };
  } catch (error) {
    if (error instanceof ParseError) {
      return {
        kind: "notice",
        state: pushNotice(state, `Model produced an invalid call: ${text}`),
      };
    }
    throw error;
  }
}
