/** Wire types mirrored from the HTTP service's JSON formats. */

export type Predicate =
  | { and: Predicate[] }
  | { field: string; equal: unknown }
  | { field: string; range: [number | string, number | string]; inclusive?: boolean }
  | { field: string; oneOf: unknown[] };

/** The empty conjunction selects everything. */
export const TRUE: Predicate = { and: [] };

export interface TreeNode {
  id: string;
  role: string;
  groupby: string | null;
  predicate: Predicate;
  description: string;
  children: TreeNode[];
}

export interface Tone {
  time: number;
  duration: number;
  frequency: number;
  value: unknown;
  predicate: Predicate;
}

export interface Cue {
  time: number;
  text: string;
}

export interface Schedule {
  unit: string;
  pitchField: string | null;
  duration: number;
  scale: { domain: [number, number]; range: [number, number] } | null;
  tones: Tone[];
  cues: Cue[];
}

export interface TransformJson {
  aggregate?: string;
  bin?: boolean;
  binCount?: number;
}

export interface EncodingJson extends TransformJson {
  modality: "visual" | "audio";
  unit: string;
  channel: string;
}

export interface FieldJson {
  name: string;
  type: string;
  transform?: TransformJson;
  encodings?: EncodingJson[];
}

export interface TraversalStepJson {
  field: string;
  bin?: boolean;
  binCount?: number;
}

export interface SpecJson {
  fields: FieldJson[];
  visual: { units: { unit: string; mark: string }[]; composition: string };
  audio: { units: { unit: string; traversal: TraversalStepJson[] }[]; composition: string };
  key: string[];
}

export interface ColumnInfo {
  name: string;
  type: string | null;
}

export interface SessionState {
  activeTab: string;
  dirtyDefaults: boolean;
  selectedFields: string[];
  spec: SpecJson;
  dataset: { columns: ColumnInfo[]; rowCount: number } | null;
}

export type EditAction =
  | { type: "LoadDataset"; data: string; format?: string }
  | { type: "ToggleField"; field: string }
  | { type: "SetMeasureType"; field: string; measure: string }
  | { type: "SetTransform"; field: string; transform: TransformJson }
  | { type: "AddEncoding"; field: string; modality: string; unit: string; channel: string; override?: TransformJson }
  | { type: "RemoveEncoding"; field: string; modality: string; unit: string; channel: string }
  | {
      type: "MoveEncoding";
      field: string;
      from: { modality: string; unit: string; channel: string };
      to: { modality: string; unit: string; channel: string };
    }
  | { type: "SetMark"; unit: string; mark: string }
  | { type: "AddUnit"; modality: string; unit?: string }
  | { type: "RemoveUnit"; modality: string; unit: string }
  | { type: "SetTraversal"; unit: string; steps: TraversalStepJson[] }
  | { type: "SetComposition"; modality: string; operator: string }
  | { type: "SwitchTab"; tab: string };

export interface SessionResponse {
  session: string;
  version: number;
  state: SessionState;
}

export interface StateResponse {
  version: number;
  state: SessionState;
  selection?: Predicate;
}

export interface ArtifactResponse<T> {
  version: number;
  artifact: T;
}

export type VisualDoc = Record<string, unknown>;

export interface SelectionEffects {
  visual?: { kind: "highlight"; payload: VisualDoc };
  audio?: { kind: "filter"; payload: Schedule[] };
  text?: { kind: "rescope"; payload: TreeNode };
}

export interface SelectionResponse {
  version: number;
  predicate: Predicate;
  effects: SelectionEffects;
}
