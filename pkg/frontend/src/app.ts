/** Page wiring: search panel (sketch, threshold slider, invariant toggle,
 * ranked grid, click-to-requery, back, browse) and insert panel (trace
 * over a blank canvas or an uploaded image, submit, confirmation). */

import { ApiError, browseSample, insertImage, queryByImage, querySketch } from "./api.js";
import { SketchPad } from "./canvas.js";
import { toObjectDocument } from "./mapping.js";
import {
  QuerySession,
  SketchDraft,
  buildSketchQuery,
  closePending,
  emptyDraft,
  removeObject,
  submitBlockers,
} from "./state.js";
import { AnnotationDocument, SearchResult } from "./types.js";

const API_BASE = "";
const RESULT_LIMIT = 24;

function el<T extends HTMLElement>(id: string): T {
  return document.getElementById(id) as T;
}

// --- search panel -----------------------------------------------------------

const searchDraft: SketchDraft = emptyDraft();
const session = new QuerySession();

const searchCanvas = el<HTMLCanvasElement>("search-canvas");
const searchLabel = el<HTMLInputElement>("search-label");
const searchStatus = el<HTMLElement>("search-status");
const searchButton = el<HTMLButtonElement>("search-button");
const backButton = el<HTMLButtonElement>("back-button");
const browseButton = el<HTMLButtonElement>("browse-button");
const clearButton = el<HTMLButtonElement>("clear-button");
const thresholdSlider = el<HTMLInputElement>("threshold");
const thresholdValue = el<HTMLElement>("threshold-value");
const invariantToggle = el<HTMLInputElement>("invariant");
const objectList = el<HTMLElement>("object-list");
const grid = el<HTMLElement>("results");

function setStatus(target: HTMLElement, message: string, isError = false): void {
  target.textContent = message;
  target.className = isError ? "status error" : "status";
}

function refreshSearchControls(): void {
  const blockers = submitBlockers(searchDraft);
  searchButton.disabled = blockers.length > 0;
  searchButton.title = blockers.join("; ");
  backButton.disabled = !session.canGoBack();
  objectList.replaceChildren(
    ...searchDraft.objects.map((o) => {
      const chip = document.createElement("span");
      chip.className = "chip";
      chip.style.background = o.fill;
      chip.textContent = o.name + " ✕";
      chip.title = "remove";
      chip.addEventListener("click", () => {
        removeObject(searchDraft, o.name);
        searchPad.render();
        refreshSearchControls();
      });
      return chip;
    }),
  );
}

function closeSearchOutline(): void {
  const error = closePending(searchDraft, searchLabel.value);
  if (error) {
    setStatus(searchStatus, error, true);
    return;
  }
  searchLabel.value = "";
  setStatus(searchStatus, "");
  searchPad.render();
  refreshSearchControls();
}

const searchPad = new SketchPad(searchCanvas, searchDraft, closeSearchOutline, () =>
  refreshSearchControls(),
);

function caption(result: SearchResult): string {
  return `${result.similarity.toFixed(1)}%`;
}

/** Render results exactly in the order the server returned them. */
function renderGrid(results: SearchResult[], note: string): void {
  grid.replaceChildren(
    ...results.map((result) => {
      const cell = document.createElement("figure");
      cell.className = "cell";
      const img = document.createElement("img");
      img.src = result.thumbnail_url;
      img.alt = result.id;
      img.addEventListener("click", () => requeryFrom(result));
      const label = document.createElement("figcaption");
      label.textContent = `${caption(result)} ${result.id}`;
      cell.append(img, label);
      return cell;
    }),
  );
  setStatus(searchStatus, note);
}

async function runSketchSearch(): Promise<void> {
  const payload = buildSketchQuery(
    searchDraft,
    searchPad.height,
    Number(thresholdSlider.value),
    invariantToggle.checked,
    RESULT_LIMIT,
  );
  const token = session.begin();
  setStatus(searchStatus, "searching…");
  try {
    const results = await querySketch(API_BASE, payload);
    if (!session.accept(token, { kind: "sketch", payload, results })) return;
    renderGrid(results, `${results.length} result(s)`);
    refreshSearchControls();
  } catch (err) {
    if (!session.isCurrent(token)) return;
    setStatus(searchStatus, describe(err), true);
  }
}

async function requeryFrom(result: SearchResult): Promise<void> {
  const threshold = Number(thresholdSlider.value);
  const invariant = invariantToggle.checked;
  const token = session.begin();
  setStatus(searchStatus, `querying by ${result.id}…`);
  try {
    const results = await queryByImage(API_BASE, result.id, threshold, invariant, RESULT_LIMIT);
    if (!session.accept(token, { kind: "by-image", payload: result.id, results })) return;
    renderGrid(results, `similar to ${result.id}`);
    refreshSearchControls();
  } catch (err) {
    if (!session.isCurrent(token)) return;
    setStatus(searchStatus, describe(err), true);
  }
}

async function seedFromBrowse(): Promise<void> {
  const token = session.begin();
  setStatus(searchStatus, "sampling the catalog…");
  try {
    const entries = await browseSample(API_BASE, RESULT_LIMIT);
    if (!session.isCurrent(token)) return;
    grid.replaceChildren(
      ...entries.map((entry) => {
        const cell = document.createElement("figure");
        cell.className = "cell";
        const img = document.createElement("img");
        img.src = entry.thumbnail_url;
        img.alt = entry.id;
        img.addEventListener("click", () =>
          requeryFrom({ id: entry.id, similarity: 0, matched: [], thumbnail_url: entry.thumbnail_url }),
        );
        const label = document.createElement("figcaption");
        label.textContent = entry.id;
        cell.append(img, label);
        return cell;
      }),
    );
    setStatus(searchStatus, `random sample of ${entries.length}`);
  } catch (err) {
    if (!session.isCurrent(token)) return;
    setStatus(searchStatus, describe(err), true);
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return String(err);
}

searchButton.addEventListener("click", () => void runSketchSearch());
browseButton.addEventListener("click", () => void seedFromBrowse());
backButton.addEventListener("click", () => {
  const previous = session.back();
  if (previous) {
    renderGrid(previous.results, "restored previous query");
    refreshSearchControls();
  }
});
clearButton.addEventListener("click", () => {
  searchDraft.objects = [];
  searchDraft.pending = [];
  searchPad.render();
  refreshSearchControls();
});
thresholdSlider.addEventListener("input", () => {
  thresholdValue.textContent = thresholdSlider.value;
  // Re-query live when results are already on screen; raising the slider
  // can only ever shrink the grid.
  if (session.current?.kind === "sketch" && submitBlockers(searchDraft).length === 0) {
    void runSketchSearch();
  }
});

// --- insert panel ------------------------------------------------------------

const insertDraft: SketchDraft = emptyDraft();
const insertCanvas = el<HTMLCanvasElement>("insert-canvas");
const insertLabel = el<HTMLInputElement>("insert-label");
const insertStatus = el<HTMLElement>("insert-status");
const insertButton = el<HTMLButtonElement>("insert-button");
const insertClear = el<HTMLButtonElement>("insert-clear");
const insertUrl = el<HTMLInputElement>("insert-url");
const insertFile = el<HTMLInputElement>("insert-file");
const insertConfirmation = el<HTMLElement>("insert-confirmation");

function closeInsertOutline(): void {
  const error = closePending(insertDraft, insertLabel.value);
  if (error) {
    setStatus(insertStatus, error, true);
    return;
  }
  insertLabel.value = "";
  setStatus(insertStatus, "");
  insertPad.render();
  refreshInsertControls();
}

const insertPad = new SketchPad(insertCanvas, insertDraft, closeInsertOutline, () =>
  refreshInsertControls(),
);

function refreshInsertControls(): void {
  const blockers = submitBlockers(insertDraft);
  insertButton.disabled = blockers.length > 0;
  insertButton.title = blockers.join("; ");
}

insertFile.addEventListener("change", () => {
  const file = insertFile.files?.[0];
  if (!file) return;
  const image = new Image();
  image.onload = () => insertPad.setBackdrop(image);
  image.src = URL.createObjectURL(file);
});

insertClear.addEventListener("click", () => {
  insertDraft.objects = [];
  insertDraft.pending = [];
  insertPad.setBackdrop(null);
  insertFile.value = "";
  insertPad.render();
  refreshInsertControls();
});

insertButton.addEventListener("click", async () => {
  const annotation: AnnotationDocument = {
    original_url: insertUrl.value.trim(),
    objects: insertDraft.objects.map((o) => toObjectDocument(o, insertPad.height, true)),
  };
  setStatus(insertStatus, "inserting…");
  try {
    const created = await insertImage(API_BASE, annotation);
    setStatus(insertStatus, `stored as ${created.id}`);
    insertConfirmation.replaceChildren();
    const img = document.createElement("img");
    img.src = `/api/thumbnails/${created.id}.png`;
    img.alt = created.id;
    insertConfirmation.append(img);
    insertDraft.objects = [];
    insertDraft.pending = [];
    insertPad.render();
    refreshInsertControls();
  } catch (err) {
    setStatus(insertStatus, describe(err), true);
  }
});

// --- tabs ---------------------------------------------------------------------

for (const tab of Array.from(document.querySelectorAll<HTMLButtonElement>(".tab"))) {
  tab.addEventListener("click", () => {
    document.querySelectorAll(".tab").forEach((t) => t.classList.remove("active"));
    document.querySelectorAll(".panel").forEach((p) => p.classList.remove("active"));
    tab.classList.add("active");
    el(tab.dataset.panel!).classList.add("active");
  });
}

refreshSearchControls();
refreshInsertControls();
thresholdValue.textContent = thresholdSlider.value;
