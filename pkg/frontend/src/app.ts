// DOM wiring: owns the singleton session and re-renders the relevant panel
// after every interaction. All markup comes from render.ts.

import { ApiClient, ApiError } from "./api";
import {
  renderDiff,
  renderHistory,
  renderPriorityEditor,
  renderProvenance,
  renderResultTable,
} from "./render";
import { UiSession, type SortKey } from "./state";
import type { Level } from "./types";

const api = new ApiClient(
  (window as { GOALVALUE_API?: string }).GOALVALUE_API ?? "/api",
);

let session: UiSession | null = null;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function setStatus(message: string, isError = false): void {
  const status = el("status");
  status.textContent = message;
  status.className = isError ? "error" : "";
}

function renderEditor(): void {
  if (!session) return;
  el("editor").innerHTML = renderPriorityEditor(session.model, session.draft);
  const missing = session.missing().length;
  (el("propagate") as HTMLButtonElement).disabled = missing > 0;
  setStatus(
    missing > 0
      ? `${missing} element(s) still need importance and confidence`
      : "ready to propagate",
  );
}

function renderResult(): void {
  if (!session) return;
  const current = session.current();
  el("result").innerHTML = current
    ? renderResultTable(current, session.sort)
    : "";
}

async function renderHistoryPanel(): Promise<void> {
  if (!session) return;
  const response = await api.history(session.modelId);
  el("history").innerHTML = renderHistory(
    response.history,
    session.currentVersion,
  );
}

async function onImport(): Promise<void> {
  const text = (el("model-input") as HTMLTextAreaElement).value;
  try {
    const imported = await api.importModel(text);
    const detail = await api.getModel(imported.modelId);
    session = new UiSession(imported.modelId, detail.model, detail.draft);
    const issues = imported.validation.issues.length;
    setStatus(
      `imported ${imported.modelId}` + (issues ? ` (${issues} issue(s))` : ""),
    );
    renderEditor();
    renderResult();
    void renderHistoryPanel();
  } catch (error) {
    setStatus(error instanceof ApiError ? error.detail : String(error), true);
  }
}

async function onPropagate(): Promise<void> {
  if (!session) return;
  try {
    await api.setPriorities(session.modelId, {
      elementPriorities: session.draft.elementPriorities,
      stakeholderWeights: session.draft.stakeholderWeights,
    });
    const result = await api.analyze(session.modelId);
    session.recordResult(result);
    renderResult();
    await renderHistoryPanel();
    setStatus(`analysis recorded as v${result.version}`);
  } catch (error) {
    if (error instanceof ApiError && error.status === 409) {
      setStatus(`incomplete: ${JSON.stringify(error.extra["missing"])}`, true);
    } else {
      setStatus(String(error), true);
    }
  }
}

async function onDiff(): Promise<void> {
  if (!session) return;
  const from = Number((el("diff-from") as HTMLInputElement).value);
  const to = Number((el("diff-to") as HTMLInputElement).value);
  try {
    const diff = await api.diff(session.modelId, from, to);
    el("diff").innerHTML = renderDiff(diff);
  } catch (error) {
    setStatus(error instanceof ApiError ? error.detail : String(error), true);
  }
}

async function onRowClick(elementId: string): Promise<void> {
  if (!session || session.currentVersion === null) return;
  const response = await api.provenance(
    session.modelId,
    elementId,
    session.currentVersion,
  );
  const name =
    session.current()?.table.find((row) => row.id === elementId)?.name ??
    elementId;
  el("provenance").innerHTML = renderProvenance(name, response.provenance);
}

export function wire(): void {
  el("import").addEventListener("click", () => void onImport());
  el("propagate").addEventListener("click", () => void onPropagate());
  el("show-diff").addEventListener("click", () => void onDiff());

  el("editor").addEventListener("change", (event) => {
    const select = event.target as HTMLSelectElement;
    const { kind, subject } = select.dataset;
    if (!session || !kind || !subject || !select.value) return;
    if (kind === "stakeholder") {
      session.setStakeholderWeight(subject, select.value as Level);
    } else {
      const row = select.closest("tr");
      const selects = row?.querySelectorAll("select") ?? [];
      const values: Record<string, string> = {};
      for (const s of selects) {
        if (s.dataset.kind && s.value) values[s.dataset.kind] = s.value;
      }
      if (values["importance"] && values["confidence"]) {
        session.setPriority(subject, {
          importance: values["importance"] as Level,
          confidence: values["confidence"] as Level,
        });
      }
    }
    renderEditor();
  });

  el("result").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const sortKey = target.closest("th")?.dataset["sort"];
    if (sortKey && session) {
      session.toggleSort(sortKey as SortKey);
      renderResult();
      return;
    }
    const elementId = target.closest("tr")?.dataset["element"];
    if (elementId) void onRowClick(elementId);
  });
}

if (typeof document !== "undefined" && document.getElementById("import")) {
  wire();
}
