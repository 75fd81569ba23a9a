/** Wire types mirroring the context-server JSON payloads. */

export interface Diagnostics {
  status?: "warning" | "failed"; // "ok" is implied and omitted on the wire
  type?: string;
  simplified?: boolean;
  condition_number?: number;
  residual_norm?: number;
  convergence?: { iterations: number; achieved_tolerance: number };
  r_squared?: number;
  notes?: string[];
  detail?: string;
}

export interface CallBody {
  problem_id: string;
  step_id: string;
  tool_id: string;
  input: unknown;
  persist: boolean;
  run_id?: string;
}

export interface CallResponse {
  ok: boolean;
  result_id?: string;
  output: Record<string, unknown>;
  diagnostics: Diagnostics;
}

export interface QueryMatch {
  result_id: string;
  [projected: string]: unknown;
}

export interface QueryResponse {
  ok: boolean;
  matches: QueryMatch[];
}

export interface Artifact {
  result_id: string;
  run_id: string;
  problem_id: string;
  step_id: string;
  tool_id: string;
  version: string;
  input: unknown;
  output: Record<string, unknown>;
  diagnostics: Diagnostics;
  created_seq: number;
}

export interface ErrorBody {
  ok: false;
  error: { code: string; message: string };
}

/** The slice of a generated problem instance the example agent consumes. */
export interface InstanceFile {
  instance_id: string;
  statement: string;
  min_steps: number;
  trace: Array<{ step_id: string; tool_id: string; input: unknown }>;
  reference: Record<string, { value: number; tolerance: number }>;
}
