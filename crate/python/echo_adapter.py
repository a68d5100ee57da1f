#!/usr/bin/env python3
"""Translator plugin speaking the cnlasp line protocol.

Reads one JSON request per line on stdin and writes one response per line.
Out of the box it echoes its input, which is enough to exercise the
protocol end to end. Swap `respond` for a model call to make it useful.

    cnlasp translate nl.txt --plugin "python3 python/echo_adapter.py"
"""

import json
import sys

HANDSHAKE = {"protocol": "cnlasp-plugin", "version": 1}
MALFORMED = "malformed request"


def dumps(obj):
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _uint(x):
    return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < 2**64


def parse_request(line):
    """Returns the request dict, or None when the line is not a request."""
    try:
        req = json.loads(line)
    except ValueError:
        return None
    if not isinstance(req, dict) or not _uint(req.get("id")) or not isinstance(req.get("nl"), str):
        return None
    if req.get("task") is not None and not isinstance(req["task"], str):
        return None
    if req.get("variant") is not None and not (_uint(req["variant"]) and req["variant"] < 2**32):
        return None
    return req


def respond(req):
    if req.get("task") == "paraphrase":
        return {"id": req["id"], "nl": req["nl"]}
    return {"id": req["id"], "cnl": req["nl"]}


def error_id(line):
    try:
        v = json.loads(line)
    except ValueError:
        return 0
    if isinstance(v, dict) and _uint(v.get("id")):
        return v["id"]
    return 0


def serve(inp, out):
    out.write(dumps(HANDSHAKE) + "\n")
    out.flush()
    for line in inp:
        line = line.rstrip("\n").rstrip("\r")
        if not line.strip():
            continue
        req = parse_request(line)
        if req is None:
            resp = {"id": error_id(line), "error": MALFORMED}
        else:
            try:
                resp = respond(req)
            except Exception as e:  # one bad sentence must not kill the session
                resp = {"id": req["id"], "error": str(e)}
        out.write(dumps(resp) + "\n")
        out.flush()


if __name__ == "__main__":
    sys.stdin.reconfigure(encoding="utf-8")
    sys.stdout.reconfigure(encoding="utf-8")
    serve(sys.stdin, sys.stdout)
