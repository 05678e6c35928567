import type {
  AnalysisResponse,
  DraftJson,
  Level,
  ModelJson,
  PriorityEntry,
  TableRow,
} from "./types";

export type SortKey =
  | "name"
  | "importance"
  | "confidence"
  | "globalValue"
  | "localValue"
  | "sameActorValue"
  | "otherActorValue";

export interface SortState {
  key: SortKey;
  descending: boolean;
}

const LEVEL_ORDER: Record<Level, number> = {
  VeryLow: 0,
  Low: 1,
  Medium: 2,
  High: 3,
  VeryHigh: 4,
};

/** Elements eligible for prioritization: actor-owned plus orphans, never
 * dependums. */
export function prioritizableElements(
  model: ModelJson,
): { id: string; name: string; actorId: string; actorName: string }[] {
  const out = [];
  for (const actor of model.actors) {
    for (const element of actor.elements) {
      out.push({
        id: element.id,
        name: element.name,
        actorId: actor.id,
        actorName: actor.name,
      });
    }
  }
  for (const orphan of model.orphans) {
    out.push({
      id: orphan.id,
      name: orphan.name,
      actorId: "__unowned__",
      actorName: "(unowned)",
    });
  }
  return out;
}

export function missingPriorities(model: ModelJson, draft: DraftJson): string[] {
  return prioritizableElements(model)
    .map((e) => e.id)
    .filter((id) => !(id in draft.elementPriorities))
    .sort();
}

export function sortRows(rows: TableRow[], sort: SortState): TableRow[] {
  const direction = sort.descending ? -1 : 1;
  return [...rows].sort((a, b) => {
    let cmp: number;
    if (sort.key === "name") {
      cmp = a.name.localeCompare(b.name);
    } else if (sort.key === "importance" || sort.key === "confidence") {
      cmp = LEVEL_ORDER[a[sort.key]] - LEVEL_ORDER[b[sort.key]];
    } else {
      cmp = a[sort.key] - b[sort.key];
    }
    if (cmp === 0) return a.name.localeCompare(b.name);
    return cmp * direction;
  });
}

/** Client-side session: the draft being edited plus every analysis version
 * seen so far. All mutations go through methods so the app can re-render
 * after each one. */
export class UiSession {
  results = new Map<number, AnalysisResponse>();
  currentVersion: number | null = null;
  sort: SortState = { key: "globalValue", descending: true };

  constructor(
    readonly modelId: string,
    readonly model: ModelJson,
    readonly draft: DraftJson,
  ) {}

  setPriority(elementId: string, entry: PriorityEntry): void {
    this.draft.elementPriorities[elementId] = entry;
  }

  setStakeholderWeight(actorId: string, level: Level): void {
    this.draft.stakeholderWeights[actorId] = level;
  }

  missing(): string[] {
    return missingPriorities(this.model, this.draft);
  }

  isComplete(): boolean {
    return this.missing().length === 0;
  }

  recordResult(result: AnalysisResponse): void {
    this.results.set(result.version, result);
    this.currentVersion = result.version;
  }

  current(): AnalysisResponse | null {
    return this.currentVersion === null
      ? null
      : (this.results.get(this.currentVersion) ?? null);
  }

  toggleSort(key: SortKey): void {
    if (this.sort.key === key) {
      this.sort = { key, descending: !this.sort.descending };
    } else {
      this.sort = { key, descending: key !== "name" };
    }
  }
}
