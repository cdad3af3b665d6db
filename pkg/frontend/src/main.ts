/** App entry: scene loading (file picker or ?scene= URL), event wiring,
 * detail panel and timeline DOM. */

import { parseScene, SceneFormatError } from "./scene";
import { rgbToCss, scoreToColor } from "./palette";
import {
  describeNode,
  entityHighlight,
  initialState,
  selectEntity,
  selectSentence,
  stepSentence,
  type ViewState,
} from "./state";
import { SceneRenderer } from "./render";
import type { SceneDocument } from "./types";

const canvas = document.getElementById("viewport") as HTMLCanvasElement;
const banner = document.getElementById("banner") as HTMLDivElement;
const panel = document.getElementById("panel") as HTMLDivElement;
const timeline = document.getElementById("timeline") as HTMLDivElement;
const filePicker = document.getElementById("file-picker") as HTMLInputElement;

const renderer = new SceneRenderer(canvas);
let doc: SceneDocument | null = null;
let state: ViewState | null = null;

function showError(message: string): void {
  banner.textContent = message;
  banner.classList.add("visible", "error");
}

function clearError(): void {
  banner.classList.remove("visible", "error");
  banner.textContent = "";
}

function setState(next: ViewState): void {
  state = next;
  renderer.update(next);
  renderPanel();
  renderTimeline();
}

function loadSceneText(text: string, label: string): void {
  try {
    const parsed = parseScene(text);
    doc = parsed;
    clearError();
    renderer.load(parsed);
    setState(initialState(parsed));
    banner.textContent = `${label}: ${parsed.semantic_layer.length} sentences, ${parsed.entity_layer.nodes.length} entities`;
    banner.classList.add("visible");
    setTimeout(clearError, 4000);
  } catch (exc) {
    doc = null;
    state = null;
    showError(
      exc instanceof SceneFormatError
        ? `Cannot load scene - ${exc.message}`
        : `Cannot load scene - ${(exc as Error).message}`,
    );
  }
}

function renderPanel(): void {
  if (!doc || !state) {
    panel.classList.remove("visible");
    return;
  }
  if (state.selectedSentence !== null) {
    const info = describeNode(doc, state.selectedSentence);
    const color = rgbToCss(scoreToColor(doc.palette, info.sentimentScore));
    panel.innerHTML = `
      <h2>Sentence ${info.sentenceIndex}</h2>
      <p class="sentence-text">${escapeHtml(info.text)}</p>
      <dl>
        <dt>Cluster</dt><dd>${info.cluster} (${info.clusterMates.length} mates)</dd>
        <dt>Sentiment</dt>
        <dd><span class="swatch" style="background:${color}"></span>
            ${info.sentimentLabel === 1 ? "positive" : "negative"}
            (${info.sentimentScore.toFixed(2)})</dd>
      </dl>
      <p class="hint">n / p walks sentence order; double-click frames the cluster</p>`;
    panel.classList.add("visible");
  } else if (state.selectedEntity !== null) {
    const highlight = entityHighlight(doc, state.selectedEntity);
    const node = doc.entity_layer.nodes.find(
      (n) => n.entity === state!.selectedEntity,
    );
    panel.innerHTML = `
      <h2>${escapeHtml(highlight.entity)}</h2>
      <dl>
        <dt>Saliency</dt><dd>${node?.saliency.toFixed(4) ?? "-"}</dd>
        <dt>Mentions</dt><dd>${node?.mention_count ?? "-"}</dd>
        <dt>Edges</dt><dd>${highlight.edges.length}</dd>
        <dt>Linked sentences</dt><dd>${highlight.nodes.join(", ") || "none"}</dd>
      </dl>`;
    panel.classList.add("visible");
  } else {
    panel.classList.remove("visible");
  }
}

function renderTimeline(): void {
  if (!doc || !state || state.selectedEntity === null) {
    timeline.classList.remove("visible");
    timeline.innerHTML = "";
    return;
  }
  const highlight = entityHighlight(doc, state.selectedEntity);
  const maxIndex = Math.max(
    1,
    ...doc.semantic_layer.map((n) => n.sentence_index),
  );
  timeline.innerHTML = highlight.timestamps
    .map((t) => {
      const left = (t / maxIndex) * 100;
      return `<span class="tick" style="left:${left}%" title="sentence ${t}"></span>`;
    })
    .join("");
  timeline.classList.add("visible");
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;");
}

canvas.addEventListener("click", (event) => {
  if (!doc || !state) return;
  const rect = canvas.getBoundingClientRect();
  const x = ((event.clientX - rect.left) / rect.width) * 2 - 1;
  const y = -((event.clientY - rect.top) / rect.height) * 2 + 1;
  const hit = renderer.pick(x, y);
  if (!hit) {
    setState(selectSentence(state, null));
  } else if (hit.kind === "semantic" && hit.sentenceIndex !== undefined) {
    setState(selectSentence(state, hit.sentenceIndex));
  } else if (hit.kind === "entity" && hit.entity) {
    setState(selectEntity(state, hit.entity));
  }
});

canvas.addEventListener("dblclick", (event) => {
  if (!doc || !state) return;
  const rect = canvas.getBoundingClientRect();
  const x = ((event.clientX - rect.left) / rect.width) * 2 - 1;
  const y = -((event.clientY - rect.top) / rect.height) * 2 + 1;
  const hit = renderer.pick(x, y);
  if (hit?.kind === "semantic" && hit.sentenceIndex !== undefined) {
    renderer.frameClusterOf(hit.sentenceIndex);
  }
});

window.addEventListener("keydown", (event) => {
  if (!doc || !state) return;
  if (event.key === "n") setState(stepSentence(doc, state, 1));
  if (event.key === "p") setState(stepSentence(doc, state, -1));
  if (event.key === "Escape") setState(selectSentence(state, null));
});

window.addEventListener("resize", () => renderer.resize());

filePicker.addEventListener("change", async () => {
  const file = filePicker.files?.[0];
  if (file) loadSceneText(await file.text(), file.name);
});

const sceneParam = new URLSearchParams(window.location.search).get("scene");
if (sceneParam) {
  fetch(sceneParam)
    .then((response) => {
      if (!response.ok) throw new Error(`HTTP ${response.status}`);
      return response.text();
    })
    .then((text) => loadSceneText(text, sceneParam))
    .catch((exc) => showError(`Cannot fetch scene - ${exc.message}`));
}

renderer.start();
