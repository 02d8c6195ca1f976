/** Wire types for the session service (JSON over HTTP). */

export type GridRows = number[][];

export interface TaskSummary {
  id: string;
  split: string;
  n_test: number;
}

export interface TrainPair {
  input: GridRows;
  output: GridRows;
}

/** Test entries carry inputs only; outputs are never transmitted. */
export interface TestEntry {
  input: GridRows;
}

export interface TaskView {
  id: string;
  train: TrainPair[];
  test: TestEntry[];
}

export interface AttemptResult {
  correct: boolean;
  trials_used: number;
  trials_remaining: number;
}

export interface ExampleSummary {
  test_index: number;
  trials_used: number;
  solved: boolean;
}

export interface SessionSummary {
  session_id: string;
  tasks: Record<string, { solved: boolean; examples: ExampleSummary[] }>;
  solved_count: number;
  task_count: number;
  fraction_solved: number;
}

export const MAX_TRIALS = 3;
export const MIN_DIM = 1;
export const MAX_DIM = 30;
export const N_SYMBOLS = 10;
