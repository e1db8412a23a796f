"""HTTP service for the web UI and other clients.

Sessions live in memory and are serialized per session; accepted sentences
are journaled so a restarted server can restore them (choices still in
progress are lost, by design).  Accepted translations are recorded into the
active translation memory, whose own journal provides durability.

Routes (JSON bodies unless noted):

    POST /api/session {text}                          create a session
    GET  /api/session/{id}/sentence/{n}               translation + TM matches
    POST /api/session/{id}/sentence/{n}/choice        pick an option / custom text
    POST /api/session/{id}/sentence/{n}/accept        freeze and record a sentence
    GET  /api/session/{id}/document                   assembled target (text/plain)
    GET  /api/session/{id}/export.tmx                 TMX of this session's units
    GET  /                                            static UI bundle, if present
"""

from __future__ import annotations

import json
import os
import secrets
import tempfile
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import engine, memory as memory_mod
from .resources import ResourcePack, load_pack

DEFAULT_MAX_TEXT = 100 * 1024  # bytes of UTF-8

FUZZY_THRESHOLD = 0.7
FUZZY_K = 3


@dataclass
class Session:
    id: str
    text: str
    sentences: list
    created: str
    translations: dict = field(default_factory=dict)  # n -> SentenceTranslation
    choices: dict = field(default_factory=dict)  # n -> {segment index -> choice}
    accepted: dict = field(default_factory=dict)  # n -> target sentence
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class SessionStore:
    """In-memory sessions with an append-only event journal."""

    def __init__(self, journal_path=None):
        self.journal_path = journal_path
        self.sessions = {}
        self._lock = threading.Lock()
        if journal_path and os.path.exists(journal_path):
            self._replay()

    def _replay(self):
        with open(self.journal_path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                try:
                    event = json.loads(line)
                except json.JSONDecodeError:
                    break  # torn tail
                if event.get("event") == "create":
                    session = Session(
                        id=event["sid"],
                        text=event["text"],
                        sentences=engine.split_sentences(event["text"]),
                        created=event.get("created", ""),
                    )
                    self.sessions[session.id] = session
                elif event.get("event") == "accept":
                    session = self.sessions.get(event["sid"])
                    if session is not None:
                        session.accepted[event["n"]] = event["target"]
                        session.choices[event["n"]] = {
                            int(k): v for k, v in event.get("choices", {}).items()
                        }

    def _journal(self, event):
        if not self.journal_path:
            return
        with open(self.journal_path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(event, ensure_ascii=False) + "\n")
            handle.flush()
            os.fsync(handle.fileno())

    def create(self, text):
        session = Session(
            id=secrets.token_urlsafe(9),
            text=text,
            sentences=engine.split_sentences(text),
            created=memory_mod._now(),
        )
        with self._lock:
            self.sessions[session.id] = session
        self._journal(
            {"event": "create", "sid": session.id, "text": text, "created": session.created}
        )
        return session

    def get(self, session_id):
        session = self.sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    def record_accept(self, session, n, target):
        self._journal(
            {
                "event": "accept",
                "sid": session.id,
                "n": n,
                "target": target,
                "choices": session.choices.get(n, {}),
            }
        )


class CreateSessionBody(BaseModel):
    text: str


class ChoiceBody(BaseModel):
    segmentIndex: int
    option: Union[int, str]


def _segment_payload(seg: engine.DisplaySegment):
    return {
        "kind": seg.kind,
        "tokenSpan": list(seg.token_span),
        "charSpan": list(seg.char_span),
        "text": seg.text,
        "options": list(seg.options),
        "segmentId": seg.segment_id,
    }


def create_app(
    pack: Union[ResourcePack, str, Path],
    memory_path: Optional[Union[str, Path]] = None,
    session_journal: Optional[Union[str, Path]] = None,
    max_text: int = DEFAULT_MAX_TEXT,
    ui_dir: Optional[Union[str, Path]] = None,
) -> FastAPI:
    """Build the application around one resource pack and one memory."""
    if not isinstance(pack, ResourcePack):
        pack = load_pack(pack)
    if memory_path is None:
        memory_path = os.path.join(tempfile.gettempdir(), "segcat-memory.tmj")
    tm = memory_mod.TranslationMemory.load_journal(
        memory_path, source_lang=pack.source_lang, target_lang=pack.target_lang
    )
    store = SessionStore(session_journal)
    app = FastAPI(title="segcat", version=memory_mod.CREATION_TOOL_VERSION)
    app.state.pack = pack
    app.state.memory = tm
    app.state.sessions = store

    def translated(session, n):
        if not 0 <= n < len(session.sentences):
            raise HTTPException(status_code=404, detail="sentence index out of range")
        if n not in session.translations:
            session.translations[n] = engine.translate_sentence(
                session.sentences[n], pack
            )
        return session.translations[n]

    @app.post("/api/session")
    def create_session(body: CreateSessionBody):
        text = body.text
        if not text.strip():
            raise HTTPException(status_code=400, detail="empty text")
        if len(text.encode("utf-8")) > max_text:
            raise HTTPException(status_code=400, detail="text too large")
        session = store.create(text)
        return {"sessionId": session.id, "sentences": len(session.sentences)}

    @app.get("/api/session/{session_id}")
    def session_info(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return {
                "sessionId": session.id,
                "sentences": len(session.sentences),
                "accepted": sorted(session.accepted),
            }

    @app.get("/api/session/{session_id}/sentence/{n}")
    def get_sentence(session_id: str, n: int):
        session = store.get(session_id)
        with session.lock:
            translation = translated(session, n)
            matches = memory_mod.fuzzy_match(
                tm, session.sentences[n], threshold=FUZZY_THRESHOLD, k=FUZZY_K
            )
            return {
                "index": n,
                "source": translation.source,
                "segments": [_segment_payload(s) for s in translation.segments],
                "fuzzyMatches": [
                    {
                        "source": m.unit.source_seg,
                        "target": m.unit.target_seg,
                        "score": round(m.score, 4),
                    }
                    for m in matches
                ],
                "choices": session.choices.get(n, {}),
                "accepted": n in session.accepted,
                "target": session.accepted.get(n),
            }

    @app.post("/api/session/{session_id}/sentence/{n}/choice")
    def post_choice(session_id: str, n: int, body: ChoiceBody):
        session = store.get(session_id)
        with session.lock:
            translation = translated(session, n)
            if n in session.accepted:
                raise HTTPException(status_code=409, detail="sentence already accepted")
            if not 0 <= body.segmentIndex < len(translation.segments):
                raise HTTPException(status_code=400, detail="segment index out of range")
            segment = translation.segments[body.segmentIndex]
            if isinstance(body.option, int):
                if not 0 <= body.option < len(segment.options):
                    raise HTTPException(status_code=400, detail="option index out of range")
                choice = {"option": body.option}
            else:
                if not body.option.strip():
                    raise HTTPException(status_code=400, detail="empty custom text")
                choice = {"custom": body.option}
            session.choices.setdefault(n, {})[body.segmentIndex] = choice
            return {
                "index": n,
                "choices": session.choices[n],
                "complete": len(session.choices[n]) == len(translation.segments),
            }

    def _chosen_text(segment, choice):
        if "custom" in choice:
            return choice["custom"]
        return segment.options[choice["option"]]

    @app.post("/api/session/{session_id}/sentence/{n}/accept")
    def accept_sentence(session_id: str, n: int):
        session = store.get(session_id)
        with session.lock:
            translation = translated(session, n)
            if n in session.accepted:
                raise HTTPException(status_code=409, detail="sentence already accepted")
            choices = session.choices.get(n, {})
            missing = [
                i for i in range(len(translation.segments)) if i not in choices
            ]
            if missing:
                raise HTTPException(
                    status_code=400,
                    detail="segments without a choice: %s" % missing,
                )
            target = " ".join(
                _chosen_text(seg, choices[i])
                for i, seg in enumerate(translation.segments)
            )
            target = memory_mod.capitalize_sentence(target)
            tm.record(session.sentences[n], target, origin=session.id)
            session.accepted[n] = target
            store.record_accept(session, n, target)
            return {"index": n, "targetSentence": target}

    @app.get("/api/session/{session_id}/document")
    def get_document(session_id: str):
        session = store.get(session_id)
        with session.lock:
            doc = memory_mod.assemble_document(
                [session.accepted[n] for n in sorted(session.accepted)]
            )
            return PlainTextResponse(doc + "\n" if doc else "")

    @app.get("/api/session/{session_id}/export.tmx")
    def export_session_tmx(session_id: str):
        session = store.get(session_id)
        with session.lock:
            units = [u for u in tm.units if u.origin == session.id]
            session_tm = memory_mod.TranslationMemory(
                name=session.id,
                units=units,
                source_lang=tm.source_lang,
                target_lang=tm.target_lang,
            )
            with tempfile.NamedTemporaryFile(suffix=".tmx", delete=False) as handle:
                path = handle.name
            try:
                memory_mod.export_tmx(session_tm, path)
                data = Path(path).read_bytes()
            finally:
                os.unlink(path)
            return Response(
                content=data,
                media_type="application/xml",
                headers={
                    "Content-Disposition": 'attachment; filename="%s.tmx"' % session.id
                },
            )

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app
