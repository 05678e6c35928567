// Pure HTML-string renderers. No DOM access here: everything in this module
// is a function from data to markup, which is what the unit tests cover.
// Event wiring happens in app.ts via data-* attributes.

import type {
  AnalysisResponse,
  DiffResponse,
  DraftJson,
  HistoryEntry,
  Level,
  ModelJson,
  ProvenanceEntry,
} from "./types";
import { LEVELS } from "./types";
import type { SortState } from "./state";
import { prioritizableElements, sortRows } from "./state";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Numbers are shown exactly as the service reported them. */
export function formatValue(value: number): string {
  return String(value);
}

function levelSelect(
  kind: string,
  subjectId: string,
  selected: Level | null,
): string {
  const options = LEVELS.map(
    (level) =>
      `<option value="${level}"${level === selected ? " selected" : ""}>${level}</option>`,
  ).join("");
  const placeholder = `<option value=""${selected === null ? " selected" : ""} disabled>—</option>`;
  return (
    `<select data-kind="${kind}" data-subject="${escapeHtml(subjectId)}">` +
    placeholder +
    options +
    `</select>`
  );
}

export function renderPriorityEditor(model: ModelJson, draft: DraftJson): string {
  const rows: string[] = [];
  let lastActor: string | null = null;
  for (const element of prioritizableElements(model)) {
    if (element.actorId !== lastActor) {
      lastActor = element.actorId;
      const weight = draft.stakeholderWeights[element.actorId] ?? null;
      rows.push(
        `<tr class="actor-row"><th colspan="2">${escapeHtml(element.actorName)}</th>` +
          `<th>weight ${levelSelect("stakeholder", element.actorId, weight)}</th></tr>`,
      );
    }
    const entry = draft.elementPriorities[element.id];
    rows.push(
      `<tr data-element="${escapeHtml(element.id)}">` +
        `<td>${escapeHtml(element.name)}</td>` +
        `<td>${levelSelect("importance", element.id, entry?.importance ?? null)}</td>` +
        `<td>${levelSelect("confidence", element.id, entry?.confidence ?? null)}</td>` +
        `</tr>`,
    );
  }
  return (
    `<table class="editor"><thead><tr>` +
    `<th>Element</th><th>Importance</th><th>Confidence</th>` +
    `</tr></thead><tbody>${rows.join("")}</tbody></table>`
  );
}

const TABLE_COLUMNS: { key: string; label: string }[] = [
  { key: "name", label: "Name" },
  { key: "importance", label: "Importance" },
  { key: "confidence", label: "Confidence" },
  { key: "globalValue", label: "Global" },
  { key: "localValue", label: "Local" },
  { key: "sameActorValue", label: "Same actor" },
  { key: "otherActorValue", label: "Other actors" },
];

export function renderResultTable(
  result: AnalysisResponse,
  sort: SortState,
): string {
  const headers = TABLE_COLUMNS.map((column) => {
    const marker =
      column.key === sort.key ? (sort.descending ? " ▾" : " ▴") : "";
    return `<th data-sort="${column.key}">${column.label}${marker}</th>`;
  }).join("");
  const body = sortRows(result.table, sort)
    .map(
      (row) =>
        `<tr data-element="${escapeHtml(row.id)}">` +
        `<td class="name">${escapeHtml(row.name)}</td>` +
        `<td>${row.importance}</td>` +
        `<td>${row.confidence}</td>` +
        `<td class="num">${formatValue(row.globalValue)}</td>` +
        `<td class="num">${formatValue(row.localValue)}</td>` +
        `<td class="num">${formatValue(row.sameActorValue)}</td>` +
        `<td class="num">${formatValue(row.otherActorValue)}</td>` +
        `</tr>`,
    )
    .join("");
  const warnings = result.warnings.length
    ? `<p class="warnings">${result.warnings.map(escapeHtml).join("; ")}</p>`
    : "";
  return (
    `<div class="result">` +
    `<h2>Values <span class="badge" data-version="${result.version}">v${result.version}</span></h2>` +
    warnings +
    `<table class="values"><thead><tr>${headers}</tr></thead>` +
    `<tbody>${body}</tbody></table></div>`
  );
}

export function renderProvenance(
  elementName: string,
  entries: ProvenanceEntry[],
): string {
  const group = (same: boolean) =>
    entries
      .filter((entry) => entry.sameActor === same)
      .map((entry) => {
        const sign = entry.impact >= 0 ? "+" : "";
        return (
          `<li data-source="${escapeHtml(entry.sourceId)}">` +
          `${escapeHtml(entry.sourceId)} (${escapeHtml(entry.sourceActor)}): ` +
          `<span class="num">${sign}${formatValue(entry.impact)}</span></li>`
        );
      })
      .join("");
  return (
    `<div class="provenance"><h3>Sources of ${escapeHtml(elementName)}</h3>` +
    `<h4>Same actor</h4><ul>${group(true) || "<li>none</li>"}</ul>` +
    `<h4>Other actors</h4><ul>${group(false) || "<li>none</li>"}</ul></div>`
  );
}

export function renderHistory(
  entries: HistoryEntry[],
  currentVersion: number | null,
): string {
  const items = entries
    .map((entry) => {
      const current = entry.version === currentVersion ? " class=\"current\"" : "";
      return (
        `<li${current} data-version="${entry.version}">` +
        `v${entry.version} — ${escapeHtml(entry.createdAt)}</li>`
      );
    })
    .join("");
  return `<ol class="history">${items}</ol>`;
}

export function renderDiff(diff: DiffResponse): string {
  const rows = Object.entries(diff.elements)
    .map(([elementId, entry]) => {
      const changed =
        entry.delta !== 0 ||
        entry.importanceBefore !== entry.importanceAfter ||
        entry.confidenceBefore !== entry.confidenceAfter;
      const cell = (before: string | number, after: string | number) =>
        before === after
          ? `<td>${before}</td>`
          : `<td class="changed">${before} → ${after}</td>`;
      return (
        `<tr data-element="${escapeHtml(elementId)}"${changed ? ' class="changed"' : ""}>` +
        `<td>${escapeHtml(elementId)}</td>` +
        cell(entry.importanceBefore, entry.importanceAfter) +
        cell(entry.confidenceBefore, entry.confidenceAfter) +
        cell(formatValue(entry.globalValueBefore), formatValue(entry.globalValueAfter)) +
        `<td class="num">${entry.delta > 0 ? "+" : ""}${formatValue(entry.delta)}</td>` +
        cell(entry.rankBefore, entry.rankAfter) +
        `</tr>`
      );
    })
    .join("");
  const extras =
    diff.added.length || diff.removed.length
      ? `<p>added: ${diff.added.map(escapeHtml).join(", ") || "—"}; ` +
        `removed: ${diff.removed.map(escapeHtml).join(", ") || "—"}</p>`
      : "";
  return (
    `<div class="diff"><h3>v${diff.fromVersion} → v${diff.toVersion}</h3>` +
    extras +
    `<table><thead><tr><th>Element</th><th>Importance</th><th>Confidence</th>` +
    `<th>Global</th><th>Δ</th><th>Rank</th></tr></thead>` +
    `<tbody>${rows}</tbody></table></div>`
  );
}
