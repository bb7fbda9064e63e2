// Wire types of the /api/v1 endpoints.

export type FlatParams = Record<string, unknown>;

export interface FieldError {
  field: string;
  code: string;
  message: string;
}

export interface Defaults {
  params: FlatParams;
  datasets: string[];
}

export type RunStatus = 'pending' | 'running' | 'done' | 'failed';

export interface RunDescriptor {
  run_id: string;
  params: FlatParams;
  inputs: Record<string, string>;
  status: RunStatus;
  created_at: string;
  datasets: string[];
  digests: Record<string, string>;
  error: string | null;
}

export interface GraduationRow {
  cohort: string;
  group_id: number;
  outcome: string;
  count: number;
}

export interface DurationRow {
  cohort: string;
  group_id: number;
  mean_semesters: number;
  n: number;
}

export interface OccupancyRow {
  course_id: string;
  semester: string;
  enrolled: number;
}

export type TabName = 'graduation_rate' | 'study_duration' | 'occupancy';

export const TABS: readonly TabName[] = ['graduation_rate', 'study_duration', 'occupancy'];

export interface TabData {
  graduation_rate: GraduationRow[];
  study_duration: DurationRow[];
  occupancy: OccupancyRow[];
}
