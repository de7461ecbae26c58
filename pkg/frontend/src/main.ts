/** DOM wiring. Everything with rules lives in the imported modules. */

import { Api, apiBaseFromQuery } from "./api.js";
import { AnimationDriver, browserFrames, scrubPlan } from "./animation.js";
import { Controller } from "./controller.js";
import {
  COLOR_NAMES,
  LINE_KINDS,
  STENCIL_CHOICES,
  snippetFor,
  type PaletteSelection,
  type TransformerChoice,
} from "./palette.js";
import { diagnosticsHtml, logHtml } from "./render.js";
import { initialState, Store } from "./state.js";

const STARTER = `-- Tap the square to push its red channel up.

type Msg = MoreRed

model = { red = 100 }

view m = collage 200 200
  [ square 50 |> filled (rgb m.red 0 0) |> notifyTap MoreRed ]

update msg m = case msg of
  MoreRed -> { m | red = m.red + 40 }

main = notificationsApp { model = model, view = view, update = update }
`;

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

const api = new Api(apiBaseFromQuery(window.location.search));
const store = new Store(initialState(STARTER));
const controller = new Controller(store, api);

const editor = element<HTMLTextAreaElement>("editor");
const canvas = element<HTMLDivElement>("canvas");
const diagnosticsPane = element<HTMLDivElement>("diagnostics");
const banner = element<HTMLDivElement>("banner");
const log = element<HTMLUListElement>("event-log");
const playButton = element<HTMLButtonElement>("play");
const scrubber = element<HTMLInputElement>("scrubber");

editor.value = STARTER;
editor.addEventListener("input", () => controller.onEdit(editor.value));

canvas.addEventListener("click", (event) => {
  const rect = canvas.getBoundingClientRect();
  void controller.clickAt(event.clientX, event.clientY, {
    left: rect.left,
    top: rect.top,
    width: rect.width,
    height: rect.height,
  });
});

window.addEventListener("keydown", (event) => {
  if (document.activeElement === editor) return;
  void controller.key("keydown", event.key);
});
window.addEventListener("keyup", (event) => {
  if (document.activeElement === editor) return;
  void controller.key("keyup", event.key);
});

const driver = new AnimationDriver((dt) => void controller.tick(dt), browserFrames());

playButton.addEventListener("click", () => {
  store.dispatch({ kind: "playingSet", playing: !store.state.animationPlaying });
});

scrubber.addEventListener("change", () => {
  const target = Number(scrubber.value);
  void controller.scrubTo(target, scrubPlan([...controller.ticks], target));
});

store.subscribe((state) => {
  if (state.svg !== null) canvas.innerHTML = state.svg;
  diagnosticsPane.innerHTML = diagnosticsHtml(state.diagnostics);
  banner.textContent = state.banner ?? "";
  banner.style.display = state.banner ? "block" : "none";
  log.innerHTML = logHtml(state.eventLog.slice(-40));
  log.scrollTop = log.scrollHeight;
  playButton.textContent = state.animationPlaying ? "pause" : "play";
  playButton.disabled = state.ticksRejected;
  scrubber.disabled = state.ticksRejected;
  const shouldRun = state.animationPlaying && !state.ticksRejected && state.sessionId !== null;
  if (shouldRun && !driver.running) driver.start();
  if (!shouldRun && driver.running) driver.stop();
});

// --- palette ------------------------------------------------------------------

const stencilSelect = element<HTMLSelectElement>("palette-stencil");
const styleSelect = element<HTMLSelectElement>("palette-style");
const colorSelect = element<HTMLSelectElement>("palette-color");
const lineSelect = element<HTMLSelectElement>("palette-line");
const widthInput = element<HTMLInputElement>("palette-width");
const transformerSelects = [
  element<HTMLSelectElement>("palette-t1"),
  element<HTMLSelectElement>("palette-t2"),
  element<HTMLSelectElement>("palette-t3"),
];
const preview = element<HTMLElement>("palette-preview");
const insertButton = element<HTMLButtonElement>("palette-insert");

for (const [index, choice] of STENCIL_CHOICES.entries()) {
  stencilSelect.add(new Option(choice.kind, String(index)));
}
for (const name of COLOR_NAMES) colorSelect.add(new Option(name, name));
for (const kind of LINE_KINDS) lineSelect.add(new Option(kind, kind));
for (const select of transformerSelects) {
  for (const kind of ["none", "move", "scale", "rotate"]) {
    select.add(new Option(kind, kind));
  }
}

function transformerFor(kind: string): TransformerChoice | null {
  switch (kind) {
    case "move":
      return { kind: "move", dx: 10, dy: -20 };
    case "scale":
      return { kind: "scale", factor: 1.5 };
    case "rotate":
      return { kind: "rotate", radians: 0.5 };
    default:
      return null;
  }
}

function currentSelection(): PaletteSelection {
  const stencil = STENCIL_CHOICES[Number(stencilSelect.value)] ?? STENCIL_CHOICES[0]!;
  const transformers = transformerSelects
    .map((select) => transformerFor(select.value))
    .filter((t): t is TransformerChoice => t !== null);
  return {
    stencil,
    styleKind: styleSelect.value === "outlined" ? "outlined" : "filled",
    color: colorSelect.value || "red",
    line: {
      kind: (lineSelect.value as "solid" | "dotted" | "dashed") || "solid",
      width: Number(widthInput.value) || 1,
    },
    transformers,
  };
}

function refreshPreview(): void {
  preview.textContent = snippetFor(currentSelection());
  const outlined = styleSelect.value === "outlined";
  colorSelect.disabled = outlined;
  lineSelect.disabled = !outlined;
  widthInput.disabled = !outlined;
}

for (const control of [stencilSelect, styleSelect, colorSelect, lineSelect, widthInput, ...transformerSelects]) {
  control.addEventListener("input", refreshPreview);
}
refreshPreview();

insertButton.addEventListener("click", () => {
  const snippet = snippetFor(currentSelection());
  controller.insertSnippet(snippet, editor.selectionStart ?? editor.value.length);
  editor.value = store.state.sourceText;
});

// --- boot ----------------------------------------------------------------------

void controller.compileNow();
