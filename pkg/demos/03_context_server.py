#!/usr/bin/env python3
# The persistence protocol end-to-end over real HTTP: call a tool with
# persist=true, query the stored artifact by step id, export the trace.

import json
import urllib.request

from toolrig.server import ContextServer, ContextService

server = ContextServer(ContextService())
server.start()
base = server.base_url
print("server at", base)


def post(path, body):
    request = urllib.request.Request(
        base + path,
        data=json.dumps(body).encode(),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    with urllib.request.urlopen(request) as response:
        return json.loads(response.read())


# Step 1: call a tool and persist its output under an explicit step id.
call = post(
    "/mcp/call",
    {
        "problem_id": "MAVEN-0001",
        "step_id": "step-01",
        "tool_id": "symbolic_diff",
        "input": {"expr": "A*t^3 - B*t^2 + C*t", "wrt": "t"},
        "persist": True,
    },
)
print("call response  :", json.dumps(call, sort_keys=True))

# Step 2: query the persisted step and project just the expression field.
query = post(
    "/mcp-server/mcp",
    {"problem_id": "MAVEN-0001", "query": {"from_step": "step-01", "fields": ["output.expr"]}},
)
print("query response :", json.dumps(query, sort_keys=True))

# Re-persisting the same step is a conflict; the artifact is immutable.
try:
    post("/mcp/call", {
        "problem_id": "MAVEN-0001", "step_id": "step-01", "tool_id": "symbolic_diff",
        "input": {"expr": "t", "wrt": "t"}, "persist": True,
    })
except urllib.error.HTTPError as err:
    print("duplicate step :", err.code, json.loads(err.read())["error"]["code"])

trace = post("/mcp/trace", {"problem_id": "MAVEN-0001"})
print("trace steps    :", [a["step_id"] for a in trace["trace"]])

server.stop()
