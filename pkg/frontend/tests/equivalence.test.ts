/**
 * Cross-language wire equivalence: an episode driven through the SDK must
 * produce a server trace and rubric breakdown identical to the built-in
 * oracle agent on the same instance.
 */

import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, test } from "vitest";

import { runExampleAgent, toScoreFile } from "../src/agent.js";
import { cli, generateInstances, startServer, tempDir, type ServerHandle } from "./harness.js";

describe("cross-language equivalence", () => {
  let server: ServerHandle;
  let workDir: string;
  let instancesDir: string;
  let instanceFile: string;

  beforeAll(async () => {
    workDir = tempDir("toolrig-xlang-");
    instancesDir = join(workDir, "instances");
    await generateInstances(instancesDir, "MAVEN-0001", "0");
    const file = readdirSync(instancesDir).find((f) => f.endsWith(".json"))!;
    instanceFile = join(instancesDir, file);
    server = await startServer();
  }, 60000);

  afterAll(async () => {
    await server.stop();
  });

  test("SDK episode scores identically to the built-in oracle", async () => {
    // drive the canonical trace through the SDK against the live server
    const result = await runExampleAgent(instanceFile, server.baseUrl, {
      runId: "sdk",
      log: () => {},
    });
    const scorePayload = join(workDir, "sdk-episode.json");
    toScoreFile(result, scorePayload, "oracle");

    // score the exported trace offline
    const sdkCsv = join(workDir, "sdk.csv");
    await cli("score", "--traces", scorePayload, "--instances", instancesDir, "--out", sdkCsv);

    // reference: the primary-component oracle agent on the same instance
    const results = join(workDir, "oracle-run");
    await cli("eval", "--instances", instancesDir, "--models", "oracle", "--out", results);

    const sdkReport = readFileSync(sdkCsv, "utf-8");
    const oracleReport = readFileSync(join(results, "report.csv"), "utf-8");
    expect(sdkReport).toBe(oracleReport);

    // and the trace itself matches the oracle's persisted artifacts
    const sdkSteps = result.trace.map((a) => [a.step_id, a.tool_id]);
    expect(sdkSteps).toEqual([
      ["step-01", "symbolic_diff"],
      ["step-02", "symbolic_diff"],
      ["step-03", "algebra_solver"],
      ["step-04", "symbolic_diff"],
      ["step-05", "numeric_evaluator"],
      ["step-06", "numeric_evaluator"],
    ]);
  }, 120000);
});
