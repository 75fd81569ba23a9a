/**
 * Thin wire-protocol client for the context server.
 *
 * The SDK carries no math and no scoring: every request/response conforms to
 * the server wire format, so all semantics stay server-side.
 */

import type { Artifact, CallResponse, ErrorBody, QueryResponse } from "./types.js";

export const DEFAULT_BASE_URL = "http://127.0.0.1:8765";

export class McpHttpError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "McpHttpError";
  }
}

export class DuplicateStepError extends McpHttpError {
  constructor(status: number, message: string) {
    super(status, "duplicate_step", message);
    this.name = "DuplicateStepError";
  }
}

export class UnknownToolError extends McpHttpError {
  constructor(status: number, message: string) {
    super(status, "unknown_tool", message);
    this.name = "UnknownToolError";
  }
}

function raiseTyped(status: number, body: ErrorBody): never {
  const code = body.error?.code ?? "unknown";
  const message = body.error?.message ?? `HTTP ${status}`;
  if (code === "duplicate_step") throw new DuplicateStepError(status, message);
  if (code === "unknown_tool") throw new UnknownToolError(status, message);
  throw new McpHttpError(status, code, message);
}

export interface SessionOptions {
  problemId: string;
  baseUrl?: string;
  runId?: string;
}

export class ClientSession {
  readonly baseUrl: string;
  readonly problemId: string;
  readonly runId: string | undefined;
  lastResultId: string | null = null;

  constructor(opts: SessionOptions) {
    this.baseUrl = (opts.baseUrl ?? process.env.MCP_BASE_URL ?? DEFAULT_BASE_URL).replace(/\/$/, "");
    this.problemId = opts.problemId;
    this.runId = opts.runId;
  }

  private async post<T>(path: string, body: Record<string, unknown>): Promise<T> {
    if (this.runId !== undefined) body = { ...body, run_id: this.runId };
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const payload = (await response.json()) as T | ErrorBody;
    if (!response.ok) raiseTyped(response.status, payload as ErrorBody);
    return payload as T;
  }

  /** Execute a tool; with persist=true the artifact is stored under stepId. */
  async call(stepId: string, toolId: string, input: unknown, persist: boolean): Promise<CallResponse> {
    const response = await this.post<CallResponse>("/mcp/call", {
      problem_id: this.problemId,
      step_id: stepId,
      tool_id: toolId,
      input,
      persist,
    });
    if (response.result_id) this.lastResultId = response.result_id;
    return response;
  }

  /** Projection query over a persisted step's artifact. */
  async query(fromStep: string, fields: string[]): Promise<QueryResponse> {
    return this.post<QueryResponse>("/mcp-server/mcp", {
      problem_id: this.problemId,
      query: { from_step: fromStep, fields },
    });
  }

  /** Export this problem's artifacts in creation order. */
  async trace(): Promise<Artifact[]> {
    const response = await this.post<{ ok: boolean; trace: Artifact[] }>("/mcp/trace", {
      problem_id: this.problemId,
    });
    return response.trace;
  }

  /** Drop this problem's namespace. */
  async reset(): Promise<void> {
    await this.post<{ ok: boolean }>("/mcp/reset", { problem_id: this.problemId });
  }

  /** Registry listing, also usable as a liveness probe. */
  async tools(): Promise<Array<{ tool_id: string; version: string }>> {
    const response = await fetch(this.baseUrl + "/mcp/tools");
    const payload = (await response.json()) as { tools: Array<{ tool_id: string; version: string }> };
    return payload.tools;
  }
}
