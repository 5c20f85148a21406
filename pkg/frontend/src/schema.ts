/** Wire types shared with the screening service. */

export const TASKS = ["SENTENCE", "PENTAGON", "TMT_A", "TMT_B", "CDT"] as const;
export type TaskName = (typeof TASKS)[number];

export interface PenSample {
  t: number; // ms from task start
  x: number; // mm
  y: number; // mm
  p: number; // pressure 0..1 (0 while pen up)
  tx: number; // tilt degrees
  ty: number;
  d: boolean; // pen contact
}

export interface TaskEntry {
  task: TaskName;
  samples: PenSample[];
}

export interface SessionBody {
  session_id: string;
  subject: null;
  tasks: TaskEntry[];
  capture?: {
    pressure_synthetic: boolean;
    tilt_supported: boolean;
    mm_per_px: number;
  };
}

export interface TargetCircle {
  label: string;
  x: number;
  y: number;
}

export interface TaskDefinition {
  name: TaskName;
  instruction: string;
  targets?: TargetCircle[];
  target_radius_mm?: number;
}

export interface TasksPayload {
  schema_version: number;
  canvas_mm: [number, number];
  tasks: TaskDefinition[];
}

export interface FeaturesPayload {
  schema_version: number;
  columns: string[];
  values: (number | null)[];
  missing_mask: boolean[];
}

export interface TaskHighlights {
  speed_median: number | null;
  pause_mean: number | null;
  pressure_median: number | null;
}

export interface ScreeningReport {
  schema_version: number;
  session_id: string;
  probabilities: Record<string, number> | null;
  mmse: number | null;
  mtl_atrophy_z: number | null;
  task_highlights: Record<string, TaskHighlights | null>;
  disclaimer: string;
}
