"""
A scripted translator session over the HTTP API
===============================================

The same workflow the web UI drives: paste a document, walk its sentences,
pick an option (or type a replacement for a gray segment), accept, and pull
the assembled target document plus its TMX.
"""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from segcat.resources import default_pack_path
from segcat.server import create_app

workdir = Path(tempfile.mkdtemp(prefix="segcat-demo-"))
app = create_app(
    default_pack_path(),
    memory_path=workdir / "memory.tmj",
    session_journal=workdir / "sessions.jsonl",
)

with TestClient(app) as client:
    sid = client.post(
        "/api/session", json={"text": "Se burla del presidente. Xyzzy plugh."}
    ).json()["sessionId"]

    for n in range(2):
        sentence = client.get("/api/session/%s/sentence/%d" % (sid, n)).json()
        print(sentence["source"])
        for i, seg in enumerate(sentence["segments"]):
            if seg["kind"] == "translated":
                print("   segment %d options: %s" % (i, seg["options"]))
                choice = 0
            else:
                # a gray segment: the translator types their own text
                choice = seg["text"]
                print("   segment %d gray, typing %r" % (i, choice))
            client.post(
                "/api/session/%s/sentence/%d/choice" % (sid, n),
                json={"segmentIndex": i, "option": choice},
            )
        accepted = client.post("/api/session/%s/sentence/%d/accept" % (sid, n)).json()
        print("   accepted:", accepted["targetSentence"])

    print()
    print("document:")
    print(client.get("/api/session/%s/document" % sid).text)
    tmx = client.get("/api/session/%s/export.tmx" % sid)
    print("tmx bytes:", len(tmx.content))
