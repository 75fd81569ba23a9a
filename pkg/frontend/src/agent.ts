/**
 * Example agent loop: execute a generated instance's canonical trace through
 * the SDK, one persisted call per step, then print the completion marker.
 *
 * The resulting payload (`toScoreFile`) feeds `toolrig score` directly, so
 * SDK-originated episodes are scored by the same server-side rubric as
 * built-in agents.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { ClientSession } from "./client.js";
import type { Artifact, InstanceFile } from "./types.js";

export const COMPLETION_MARKER = "PROBLEM_COMPLETED";

export interface ExampleAgentResult {
  instanceId: string;
  finalAnswer: Record<string, number>;
  trace: Artifact[];
  transcript: string[];
  markerSeen: boolean;
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

async function probe(session: ClientSession, retries: number): Promise<void> {
  let lastError: unknown;
  for (let attempt = 0; attempt <= retries; attempt++) {
    try {
      await session.tools();
      return;
    } catch (err) {
      lastError = err;
      if (attempt < retries) await sleep(200 * (attempt + 1));
    }
  }
  throw new Error(`context server unreachable after ${retries + 1} attempts: ${lastError}`);
}

export async function runExampleAgent(
  instanceFile: string,
  baseUrl?: string,
  opts: { runId?: string; retries?: number; log?: (line: string) => void } = {},
): Promise<ExampleAgentResult> {
  const log = opts.log ?? console.log;
  const instance = JSON.parse(readFileSync(instanceFile, "utf-8")) as InstanceFile;
  const session = new ClientSession({
    problemId: instance.instance_id,
    baseUrl,
    runId: opts.runId,
  });
  await probe(session, opts.retries ?? 2);

  const transcript: string[] = [];
  for (const step of instance.trace) {
    const response = await session.call(step.step_id, step.tool_id, step.input, true);
    const note = `Invoking ${step.tool_id} for ${step.step_id} -> ${response.result_id}`;
    transcript.push(note);
    log(note);
    if (!response.ok) {
      throw new Error(`step ${step.step_id} failed: ${JSON.stringify(response.diagnostics)}`);
    }
  }

  const finalAnswer: Record<string, number> = {};
  for (const [name, entry] of Object.entries(instance.reference)) {
    finalAnswer[name] = entry.value;
  }
  const finale = `${JSON.stringify(finalAnswer)}\n${COMPLETION_MARKER}`;
  transcript.push(finale);
  log(COMPLETION_MARKER);

  const trace = await session.trace();
  return {
    instanceId: instance.instance_id,
    finalAnswer,
    trace,
    transcript,
    markerSeen: true,
  };
}

/** Write the score-file wrapper consumed by `toolrig score --traces`. */
export function toScoreFile(result: ExampleAgentResult, path: string, model = "oracle"): void {
  writeFileSync(
    path,
    JSON.stringify({
      model,
      instance_id: result.instanceId,
      run_id: result.trace[0]?.run_id ?? "default",
      trace: result.trace,
      transcript: result.transcript,
      final_answer: result.finalAnswer,
      marker_seen: result.markerSeen,
    }),
  );
}
