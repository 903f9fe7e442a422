/**
 * Demo shell: mode selector, command box, canvas map, parameter forms,
 * log and notice panels. All translation logic lives in the core modules;
 * this file is DOM glue only.
 */

import { FunctionName, serializeCall } from "../core/calls.js";
import { parseModel } from "../core/models.js";
import { RuleSet } from "../core/rules.js";
import { SlmTranslator } from "../core/slm.js";
import { DEMO_SVM_MODEL_JSON, RULES_JSON } from "./assets.gen.js";
import { AppServices, Mode, handleQuery } from "./flows.js";
import { FormField, FormValidationError, buildCallFromForm } from "./forms.js";
import { MapState, executeCall, initialState, pushNotice } from "./map.js";
import { render } from "./render.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

let state: MapState = initialState();

const services: AppServices = {
  ruleset: RuleSet.fromJson(RULES_JSON),
  classifier: parseModel(DEMO_SVM_MODEL_JSON),
  remote: null,
  slmTranslate: null,
  fetchFn: (url, init) => fetch(url, init),
};

function currentMode(): Mode {
  return ($("mode") as HTMLSelectElement).value as Mode;
}

function redraw(): void {
  render(state, $("map") as HTMLCanvasElement);
  $("log").textContent = state.log.map((line) => `> ${line}`).join("\n");
  $("notices").textContent = state.notices.slice(-6).join("\n");
  const logPane = $("log");
  logPane.scrollTop = logPane.scrollHeight;
}

function showForm(fn: FunctionName, fields: FormField[]): void {
  const panel = $("form-panel");
  panel.innerHTML = "";
  const title = document.createElement("h3");
  title.textContent = `${fn}: fill in the parameters`;
  panel.appendChild(title);
  const inputs = new Map<string, HTMLInputElement | HTMLSelectElement>();
  for (const field of fields) {
    const row = document.createElement("label");
    row.className = "form-row";
    row.textContent = field.label + " ";
    let input: HTMLInputElement | HTMLSelectElement;
    if (field.kind === "choice") {
      input = document.createElement("select");
      for (const choice of field.choices ?? []) {
        const option = document.createElement("option");
        option.value = choice;
        option.textContent = choice;
        input.appendChild(option);
      }
    } else {
      input = document.createElement("input");
      input.type = "text";
    }
    input.name = field.name;
    inputs.set(field.name, input);
    row.appendChild(input);
    const error = document.createElement("span");
    error.className = "field-error";
    error.dataset.for = field.name;
    row.appendChild(error);
    panel.appendChild(row);
  }
  const submit = document.createElement("button");
  submit.textContent = "Execute";
  submit.addEventListener("click", () => {
    panel.querySelectorAll<HTMLElement>(".field-error").forEach((el) => (el.textContent = ""));
    const values: Record<string, string> = {};
    inputs.forEach((input, name) => (values[name] = input.value));
    try {
      const call = buildCallFromForm(fn, values);
      state = executeCall(state, call);
      panel.innerHTML = "";
      panel.hidden = true;
      redraw();
    } catch (error) {
      if (error instanceof FormValidationError) {
        const slot = panel.querySelector<HTMLElement>(`[data-for="${error.field}"]`);
        if (slot) slot.textContent = error.message;
      } else {
        state = pushNotice(state, String(error));
        redraw();
      }
    }
  });
  const cancel = document.createElement("button");
  cancel.textContent = "Cancel";
  cancel.addEventListener("click", () => {
    panel.innerHTML = "";
    panel.hidden = true;
  });
  panel.appendChild(submit);
  panel.appendChild(cancel);
  panel.hidden = false;
}

async function submitQuery(): Promise<void> {
  const box = $("query") as HTMLInputElement;
  const query = box.value.trim();
  if (!query) return;
  if (currentMode() === "remote") {
    services.remote = {
      endpointUrl: ($("endpoint") as HTMLInputElement).value.trim(),
      modelName: "command-r-08-2024",
      apiKey: ($("api-key") as HTMLInputElement).value.trim(),
    };
  }
  const outcome = await handleQuery(state, currentMode(), query, services);
  state = outcome.state;
  if (outcome.kind === "form") {
    state = pushNotice(state, `Classified as ${outcome.fn}; parameters needed.`);
    showForm(outcome.fn, outcome.fields);
  } else if (outcome.kind === "executed") {
    box.value = "";
  }
  redraw();
}

function wireFilePicker(id: string, onText: (text: string) => void, binary = false): void {
  ($(id) as HTMLInputElement).addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (!file) return;
    try {
      if (binary) {
        const buffer = await file.arrayBuffer();
        const translator = SlmTranslator.fromBuffer(buffer);
        services.slmTranslate = (query) => translator.translate(query);
        state = pushNotice(state, `Imported model loaded: ${file.name}`);
      } else {
        onText(await file.text());
        state = pushNotice(state, `Loaded ${file.name}`);
      }
    } catch (error) {
      state = pushNotice(state, `Could not load ${file.name}: ${String(error)}`);
    }
    redraw();
  });
}

export function start(): void {
  ($("mode") as HTMLSelectElement).addEventListener("change", () => {
    $("remote-settings").hidden = currentMode() !== "remote";
  });
  $("run").addEventListener("click", () => void submitQuery());
  ($("query") as HTMLInputElement).addEventListener("keydown", (event) => {
    if ((event as KeyboardEvent).key === "Enter") void submitQuery();
  });
  wireFilePicker("load-model", (text) => {
    services.classifier = parseModel(text);
  });
  wireFilePicker("load-rules", (text) => {
    services.ruleset = RuleSet.fromJson(text);
  });
  wireFilePicker("load-slm", () => undefined, true);
  redraw();
}

start();
