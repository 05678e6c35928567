// End-to-end: drives the real analysis service over HTTP through the same
// client and renderers the app uses. Requires the Python package to be
// installed in the active environment (see repository README).

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { formatValue, renderDiff, renderResultTable } from "../src/render";
import { UiSession } from "../src/state";
import type { Level, PriorityEntry } from "../src/types";

const FIXTURE = join(
  __dirname,
  "..",
  "..",
  "tests",
  "fixtures",
  "pistar_scheduler.json",
);

const PRIORITIES: Record<string, PriorityEntry> = {
  "g-schedule": { importance: "High", confidence: "High" },
  "t-collect": { importance: "Medium", confidence: "Low" },
  "q-fast": { importance: "Low", confidence: "VeryHigh" },
  "g-attend": { importance: "VeryHigh", confidence: "Medium" },
  "t-timetable": { importance: "Medium", confidence: "High" },
};

let service: ChildProcess;
let storeDir: string;
let api: ApiClient;

beforeAll(async () => {
  const port = 18000 + Math.floor(Math.random() * 2000);
  storeDir = mkdtempSync(join(tmpdir(), "goalvalue-e2e-"));
  service = spawn(
    "python3",
    [
      "-m",
      "goalvalue.cli",
      "serve",
      "--host",
      "127.0.0.1",
      "--port",
      String(port),
      "--store",
      storeDir,
    ],
    { stdio: "ignore" },
  );
  api = new ApiClient(`http://127.0.0.1:${port}`);

  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      await fetch(`http://127.0.0.1:${port}/models/probe`);
      break;
    } catch {
      if (Date.now() > deadline) throw new Error("service did not start");
      await new Promise((resolve) => setTimeout(resolve, 200));
    }
  }
});

afterAll(() => {
  service?.kill();
  if (storeDir) rmSync(storeDir, { recursive: true, force: true });
});

describe("full prioritization round trip against the service", () => {
  let session: UiSession;

  it("imports the fixture and starts with every element unprioritized", async () => {
    const imported = await api.importModel(readFileSync(FIXTURE, "utf-8"));
    const detail = await api.getModel(imported.modelId);
    session = new UiSession(imported.modelId, detail.model, detail.draft);
    expect(session.missing().sort()).toEqual(Object.keys(PRIORITIES).sort());
    expect(detail.latestVersion).toBe(0);
  });

  it("completes the prioritization and propagates to version 1", async () => {
    for (const [id, entry] of Object.entries(PRIORITIES)) {
      session.setPriority(id, entry);
    }
    expect(session.isComplete()).toBe(true);
    await api.setPriorities(session.modelId, {
      elementPriorities: session.draft.elementPriorities,
      stakeholderWeights: { "actor-init": "High" },
    });
    const result = await api.analyze(session.modelId, { deterministic: true });
    session.recordResult(result);
    expect(result.version).toBe(1);
  });

  it("renders the seven-column table with badge v1 and verbatim numbers", () => {
    const result = session.current();
    expect(result).not.toBeNull();
    const html = renderResultTable(result!, session.sort);
    expect(html).toContain(">v1</span>");
    for (const label of [
      "Name",
      "Importance",
      "Confidence",
      "Global",
      "Local",
      "Same actor",
      "Other actors",
    ]) {
      expect(html).toContain(label);
    }
    expect(result!.table).toHaveLength(5);
    for (const row of result!.table) {
      for (const value of [
        row.globalValue,
        row.localValue,
        row.sameActorValue,
        row.otherActorValue,
      ]) {
        expect(html).toContain(`<td class="num">${formatValue(value)}</td>`);
      }
    }
  });

  it("re-propagates after one importance edit, producing version 2", async () => {
    session.setPriority("g-attend", {
      importance: "Low",
      confidence: "Medium",
    });
    await api.setPriorities(session.modelId, {
      elementPriorities: session.draft.elementPriorities,
    });
    const result = await api.analyze(session.modelId, { deterministic: true });
    session.recordResult(result);
    expect(result.version).toBe(2);
    expect(session.results.size).toBe(2);
  });

  it("diff v1→v2 shows exactly the edited importance", async () => {
    const diff = await api.diff(session.modelId, 1, 2);
    expect(diff.fromVersion).toBe(1);
    expect(diff.toVersion).toBe(2);
    expect(diff.added).toEqual([]);
    expect(diff.removed).toEqual([]);

    const levelChanges: string[] = [];
    for (const [id, entry] of Object.entries(diff.elements)) {
      if (
        entry.importanceBefore !== entry.importanceAfter ||
        entry.confidenceBefore !== entry.confidenceAfter
      ) {
        levelChanges.push(id);
      }
    }
    expect(levelChanges).toEqual(["g-attend"]);
    const edited = diff.elements["g-attend"]!;
    expect(edited.importanceBefore).toBe("VeryHigh");
    expect(edited.importanceAfter).toBe("Low");
    expect(edited.confidenceBefore).toBe("Medium");
    expect(edited.confidenceAfter).toBe("Medium");

    const html = renderDiff(diff);
    expect(html).toContain("v1 → v2");
    expect(html).toContain('<td class="changed">VeryHigh → Low</td>');
  });

  it("diff values match the recorded snapshots verbatim", async () => {
    const diff = await api.diff(session.modelId, 1, 2);
    const v1 = await api.getResult(session.modelId, 1);
    const v2 = await api.getResult(session.modelId, 2);
    for (const [id, entry] of Object.entries(diff.elements)) {
      expect(entry.globalValueBefore).toBe(v1.result.values[id]!.globalValue);
      expect(entry.globalValueAfter).toBe(v2.result.values[id]!.globalValue);
      expect(entry.delta).toBeCloseTo(
        entry.globalValueAfter - entry.globalValueBefore,
        9,
      );
    }
  });

  it("provenance for the top-ranked element comes back signed and grouped", async () => {
    const result = session.current()!;
    const top = result.globalRanking[0]!;
    const response = await api.provenance(session.modelId, top, 2);
    expect(response.version).toBe(2);
    expect(response.provenance.length).toBeGreaterThan(0);
    for (const entry of response.provenance) {
      expect(typeof entry.sameActor).toBe("boolean");
      expect(Number.isFinite(entry.impact)).toBe(true);
    }
  });
});
