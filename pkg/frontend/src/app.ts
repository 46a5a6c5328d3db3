/** Browser wiring: file loading, selection, toggles, dragging, exports.
 * All logic lives in the pure modules; this file only touches the DOM. */

import { Bundle, BundleFormatError, parseBundle } from "./bundle.js";
import {
  ViewState, computeHighlight, highlightToModelDoc, newViewState,
  resolveSelectable,
} from "./core.js";
import { layeredLayout } from "./layout.js";
import { renderSvg } from "./render.js";

let view: ViewState | null = null;

const graphHost = document.getElementById("graph")!;
const banner = document.getElementById("banner")!;
const hint = document.getElementById("hint")!;
const naturalToggle = document.getElementById("natural") as HTMLInputElement;
const closureToggle = document.getElementById("local-closure") as HTMLInputElement;
const combinedToggle = document.getElementById("combined-view") as HTMLInputElement;
const selectionLabel = document.getElementById("selection")!;

function showError(message: string) {
  banner.textContent = message;
  banner.classList.remove("hidden");
}

function clearError() {
  banner.textContent = "";
  banner.classList.add("hidden");
}

function describeSelection(): string {
  if (!view || !view.selectedNode) return "nothing selected";
  const node = view.bundle.nodes[view.selectedNode];
  const state = view.combinedView ? "all states" : view.selectedState ?? "?";
  return `${node.text} at ${state}`;
}

function redraw() {
  if (!view) return;
  const highlight = computeHighlight(view);
  graphHost.innerHTML = renderSvg(view, highlight);
  selectionLabel.textContent = describeSelection();
}

function loadText(text: string) {
  let bundle: Bundle;
  try {
    bundle = parseBundle(text);
  } catch (e) {
    if (e instanceof BundleFormatError) {
      showError(`could not load bundle: ${e.message}`);
      return; // keep the previous render; never show a partial one
    }
    throw e;
  }
  clearError();
  view = newViewState(bundle);
  view.positions = layeredLayout(bundle.model);
  naturalToggle.checked = false;
  closureToggle.checked = false;
  combinedToggle.checked = false;
  hint.textContent = "";
  redraw();
}

function wireFileInputs() {
  const input = document.getElementById("file") as HTMLInputElement;
  input.addEventListener("change", () => {
    const file = input.files?.[0];
    if (file) file.text().then(loadText);
  });
  document.body.addEventListener("dragover", (event) => event.preventDefault());
  document.body.addEventListener("drop", (event) => {
    event.preventDefault();
    const file = event.dataTransfer?.files?.[0];
    if (file) file.text().then(loadText);
  });
}

function wireSelection() {
  graphHost.addEventListener("click", (event) => {
    if (!view) return;
    const target = event.target as Element;
    const row = target.closest(".ast-row");
    if (row) {
      const nodeId = row.getAttribute("data-node")!;
      const stateId = row.getAttribute("data-state")!;
      if (!resolveSelectable(view.bundle, nodeId)) {
        hint.textContent =
          "propositions are axiomatic and have no evidence; "
          + "pick a compound formula node";
        return;
      }
      hint.textContent = "";
      view.selectedNode = nodeId;
      view.selectedState = stateId;
      redraw();
      return;
    }
    const state = target.closest(".state");
    if (state) {
      view.selectedState = state.getAttribute("data-state");
      redraw();
    }
  });
}

function wireToggles() {
  naturalToggle.addEventListener("change", () => {
    if (view) { view.natural = naturalToggle.checked; redraw(); }
  });
  closureToggle.addEventListener("change", () => {
    if (view) { view.locallyClosed = closureToggle.checked; redraw(); }
  });
  combinedToggle.addEventListener("change", () => {
    if (view) { view.combinedView = combinedToggle.checked; redraw(); }
  });
}

function wireDragging() {
  let dragging: string | null = null;
  let last = { x: 0, y: 0 };
  graphHost.addEventListener("mousedown", (event) => {
    const state = (event.target as Element).closest(".state");
    if (state && view) {
      dragging = state.getAttribute("data-state");
      last = { x: event.clientX, y: event.clientY };
      event.preventDefault();
    }
  });
  window.addEventListener("mousemove", (event) => {
    if (!dragging || !view) return;
    const pos = view.positions.get(dragging)!;
    view.positions.set(dragging, {
      x: pos.x + event.clientX - last.x,
      y: pos.y + event.clientY - last.y,
    });
    last = { x: event.clientX, y: event.clientY };
    redraw();
  });
  window.addEventListener("mouseup", () => { dragging = null; });
}

function download(name: string, mime: string, content: string) {
  const blob = new Blob([content], { type: mime });
  const url = URL.createObjectURL(blob);
  const a = document.createElement("a");
  a.href = url;
  a.download = name;
  a.click();
  URL.revokeObjectURL(url);
}

function wireExports() {
  document.getElementById("export-svg")!.addEventListener("click", () => {
    if (!view) return;
    download("view.svg", "image/svg+xml",
             renderSvg(view, computeHighlight(view)));
  });
  document.getElementById("export-json")!.addEventListener("click", () => {
    if (!view) return;
    const highlight = computeHighlight(view);
    if (!highlight) {
      hint.textContent = "select a state and a temporal operator first";
      return;
    }
    download("evidence.json", "application/json",
             JSON.stringify(highlightToModelDoc(highlight), null, 2) + "\n");
  });
}

wireFileInputs();
wireSelection();
wireToggles();
wireDragging();
wireExports();
