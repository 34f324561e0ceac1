#!/usr/bin/env python3
"""The HTTP facade end to end: insert, sketch query, query by example.

Starts the threaded server on an ephemeral port, drives it with plain
urllib, and shuts it down. The same API serves the browser frontend.
"""

import json
import urllib.request

from pirsearch import Engine
from pirsearch.service import make_server, start_background


def call(base, path, payload=None):
    if payload is None:
        with urllib.request.urlopen(base + path) as resp:
            return json.loads(resp.read())
    req = urllib.request.Request(
        base + path,
        data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"},
    )
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


engine = Engine()
server = make_server(engine, host="127.0.0.1", port=0)
start_background(server)
base = f"http://127.0.0.1:{server.server_address[1]}"
print(f"serving on {base}")

box = lambda x0, y0, x1, y1: [[x0, y0], [x1, y0], [x1, y1], [x0, y1]]

for name, arrangement in [
    ("kite high", [("kite", box(4, 7, 6, 9)), ("field", box(0, 0, 10, 3))]),
    ("kite low", [("kite", box(4, 3.5, 6, 5)), ("field", box(0, 0, 10, 3))]),
    ("field only", [("field", box(0, 0, 10, 3))]),
]:
    body = {
        "original_url": f"demo://{name.replace(' ', '-')}",
        "objects": [{"name": n, "polygon": p} for n, p in arrangement],
    }
    created = call(base, "/api/images", body)
    print(f"inserted {created['id']}: {name}")

print("\nsketch query: kite above the field, threshold 60")
results = call(
    base,
    "/api/query/sketch",
    {
        "objects": [
            {"name": "kite", "polygon": box(4, 7, 6, 9)},
            {"name": "field", "polygon": box(0, 0, 10, 3)},
        ],
        "threshold": 60,
    },
)
for r in results:
    print(f"  {r['id']}  {r['similarity']:.1f}%  thumbnail {r['thumbnail_url']}")

print("\nquery by example from the top hit")
follow = call(base, "/api/query/by-image", {"id": results[0]["id"], "threshold": 0})
for r in follow:
    print(f"  {r['id']}  {r['similarity']:.1f}%")

server.shutdown()
server.server_close()
print("\nserver stopped")
