export { ClientSession, DuplicateStepError, McpHttpError, UnknownToolError, DEFAULT_BASE_URL } from "./client.js";
export { COMPLETION_MARKER, runExampleAgent, toScoreFile } from "./agent.js";
export type { ExampleAgentResult } from "./agent.js";
export type {
  Artifact,
  CallBody,
  CallResponse,
  Diagnostics,
  ErrorBody,
  InstanceFile,
  QueryMatch,
  QueryResponse,
} from "./types.js";
