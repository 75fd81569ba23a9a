/** CLI wrapper: node dist/run-agent.js <instance.json> [baseUrl] [scoreFileOut] */

import { runExampleAgent, toScoreFile } from "./agent.js";

async function main(): Promise<number> {
  const [instanceFile, baseUrl, scoreOut] = process.argv.slice(2);
  if (!instanceFile) {
    console.error("usage: run-agent <instance.json> [baseUrl] [scoreFileOut]");
    return 1;
  }
  const result = await runExampleAgent(instanceFile, baseUrl);
  console.log(`final answer: ${JSON.stringify(result.finalAnswer)}`);
  console.log(`server trace length: ${result.trace.length}`);
  if (scoreOut) {
    toScoreFile(result, scoreOut);
    console.log(`score payload written to ${scoreOut}`);
  }
  return 0;
}

main().then(
  (code) => process.exit(code),
  (err) => {
    console.error(String(err));
    process.exit(2);
  },
);
