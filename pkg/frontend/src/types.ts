// Wire types for the analysis service. Field names mirror the JSON payloads
// exactly; nothing here is renamed or reshaped.

export type Level = "VeryLow" | "Low" | "Medium" | "High" | "VeryHigh";

export const LEVELS: readonly Level[] = [
  "VeryLow",
  "Low",
  "Medium",
  "High",
  "VeryHigh",
];

export interface ElementJson {
  id: string;
  name: string;
  kind: string;
}

export interface ActorJson {
  id: string;
  name: string;
  elements: ElementJson[];
}

export interface LinkJson {
  id: string;
  linkType: string;
  sourceId: string;
  targetId: string;
  label?: string;
  dependumId?: string;
}

export interface ModelJson {
  id: string;
  name: string;
  actors: ActorJson[];
  orphans: ElementJson[];
  dependums: ElementJson[];
  links: LinkJson[];
  image?: string;
}

export interface PriorityEntry {
  importance: Level;
  confidence: Level;
}

export interface DraftJson {
  elementPriorities: Record<string, PriorityEntry>;
  stakeholderWeights: Record<string, Level>;
}

export interface IssueJson {
  severity: string;
  code: string;
  subjectId: string;
  message: string;
}

export interface ValidationJson {
  valid: boolean;
  issues: IssueJson[];
}

export interface ImportResponse {
  modelId: string;
  validation: ValidationJson;
}

export interface ModelResponse {
  modelId: string;
  model: ModelJson;
  draft: DraftJson;
  latestVersion: number;
  image: string | null;
}

export interface TableRow {
  id: string;
  name: string;
  importance: Level;
  confidence: Level;
  globalValue: number;
  localValue: number;
  sameActorValue: number;
  otherActorValue: number;
}

export interface ConfigJson {
  lambda: number;
  epsilon: number;
  maxIterations: number;
}

export interface ElementValues {
  globalValue: number;
  localValue: number;
  sameActorValue: number;
  otherActorValue: number;
}

export interface AnalysisResponse {
  version: number;
  createdAt: string;
  config: ConfigJson;
  table: TableRow[];
  values: Record<string, ElementValues>;
  globalRanking: string[];
  localRankings: Record<string, string[]>;
  elementOwners: Record<string, string>;
  warnings: string[];
}

export interface SnapshotResponse {
  version: number;
  createdAt: string;
  prioritization: DraftJson;
  result: Omit<AnalysisResponse, "version">;
  configEcho: ConfigJson;
}

export interface ProvenanceEntry {
  sourceId: string;
  sourceActor: string;
  sameActor: boolean;
  impact: number;
  impactTfn: [number, number, number];
}

export interface ProvenanceResponse {
  modelId: string;
  elementId: string;
  version: number;
  provenance: ProvenanceEntry[];
}

export interface HistoryEntry {
  version: number;
  createdAt: string;
  summary: Record<string, unknown>;
}

export interface HistoryResponse {
  modelId: string;
  history: HistoryEntry[];
}

export interface DiffEntry {
  importanceBefore: Level;
  importanceAfter: Level;
  confidenceBefore: Level;
  confidenceAfter: Level;
  globalValueBefore: number;
  globalValueAfter: number;
  delta: number;
  rankBefore: number;
  rankAfter: number;
}

export interface DiffResponse {
  fromVersion: number;
  toVersion: number;
  elements: Record<string, DiffEntry>;
  added: string[];
  removed: string[];
}
