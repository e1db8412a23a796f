import pytest
from fastapi.testclient import TestClient

from segcat.server import create_app


@pytest.fixture()
def client(pack, tmp_path):
    app = create_app(
        pack,
        memory_path=tmp_path / "memory.tmj",
        session_journal=tmp_path / "sessions.jsonl",
    )
    with TestClient(app) as c:
        yield c


def make_session(client, text):
    response = client.post("/api/session", json={"text": text})
    assert response.status_code == 200
    return response.json()


def choose_all(client, sid, n):
    """Option 0 on translated segments, source text on gray ones."""
    sentence = client.get("/api/session/%s/sentence/%d" % (sid, n)).json()
    for i, seg in enumerate(sentence["segments"]):
        option = 0 if seg["kind"] == "translated" else seg["text"]
        response = client.post(
            "/api/session/%s/sentence/%d/choice" % (sid, n),
            json={"segmentIndex": i, "option": option},
        )
        assert response.status_code == 200
    return sentence


class TestCreateSession:
    def test_fig6_sentence(self, client):
        body = make_session(client, "se burla del presidente")
        assert body["sentences"] == 1
        assert body["sessionId"]

    def test_empty_text_rejected(self, client):
        assert client.post("/api/session", json={"text": ""}).status_code == 400

    def test_two_sentences(self, client):
        body = make_session(client, "Se burla del presidente. No te llamo.")
        assert body["sentences"] == 2

    def test_oversize_rejected(self, pack, tmp_path):
        app = create_app(pack, memory_path=tmp_path / "m.tmj", max_text=64)
        with TestClient(app) as client:
            assert (
                client.post("/api/session", json={"text": "x" * 100}).status_code == 400
            )


class TestGetSentence:
    def test_fig6_payload(self, client):
        sid = make_session(client, "se burla del presidente")["sessionId"]
        body = client.get("/api/session/%s/sentence/0" % sid).json()
        assert body["source"] == "se burla del presidente"
        (segment,) = body["segments"]
        assert segment["kind"] == "translated"
        assert segment["options"][0] == "oñembohory mburuvicha rehe"

    def test_out_of_range(self, client):
        sid = make_session(client, "hola")["sessionId"]
        assert client.get("/api/session/%s/sentence/5" % sid).status_code == 404

    def test_unknown_session(self, client):
        assert client.get("/api/session/nope/sentence/0").status_code == 404

    def test_unknown_words_all_gray(self, client):
        sid = make_session(client, "xyzzy plugh")["sessionId"]
        body = client.get("/api/session/%s/sentence/0" % sid).json()
        assert all(s["kind"] == "gray" and not s["options"] for s in body["segments"])

    def test_repeated_gets_identical(self, client):
        sid = make_session(client, "se burla del presidente")["sessionId"]
        first = client.get("/api/session/%s/sentence/0" % sid).json()
        second = client.get("/api/session/%s/sentence/0" % sid).json()
        assert first == second

    def test_fuzzy_matches_attached(self, client):
        sid = make_session(client, "se burla del presidente")["sessionId"]
        choose_all(client, sid, 0)
        client.post("/api/session/%s/sentence/0/accept" % sid)
        sid2 = make_session(client, "se burla del presidente")["sessionId"]
        body = client.get("/api/session/%s/sentence/0" % sid2).json()
        assert body["fuzzyMatches"]
        assert body["fuzzyMatches"][0]["score"] == 1.0


class TestChoice:
    def test_choose_option(self, client):
        sid = make_session(client, "se burla del presidente")["sessionId"]
        response = client.post(
            "/api/session/%s/sentence/0/choice" % sid,
            json={"segmentIndex": 0, "option": 0},
        )
        assert response.status_code == 200
        assert response.json()["choices"]["0"] == {"option": 0}

    def test_custom_text(self, client):
        sid = make_session(client, "se burla del presidente")["sessionId"]
        response = client.post(
            "/api/session/%s/sentence/0/choice" % sid,
            json={"segmentIndex": 0, "option": "oñembohory hína mburuvicha rehe"},
        )
        assert response.status_code == 200

    def test_invalid_indices(self, client):
        sid = make_session(client, "se burla del presidente")["sessionId"]
        url = "/api/session/%s/sentence/0/choice" % sid
        assert client.post(url, json={"segmentIndex": 9, "option": 0}).status_code == 400
        assert client.post(url, json={"segmentIndex": 0, "option": 9}).status_code == 400
        assert client.post(url, json={"segmentIndex": 0, "option": ""}).status_code == 400

    def test_choice_after_accept_conflicts(self, client):
        sid = make_session(client, "se burla del presidente")["sessionId"]
        choose_all(client, sid, 0)
        client.post("/api/session/%s/sentence/0/accept" % sid)
        response = client.post(
            "/api/session/%s/sentence/0/choice" % sid,
            json={"segmentIndex": 0, "option": 0},
        )
        assert response.status_code == 409


class TestAccept:
    def test_accept_records_and_capitalizes(self, client):
        sid = make_session(client, "se burla del presidente")["sessionId"]
        choose_all(client, sid, 0)
        response = client.post("/api/session/%s/sentence/0/accept" % sid)
        assert response.status_code == 200
        assert response.json()["targetSentence"] == "Oñembohory mburuvicha rehe"

    def test_incomplete_choices_rejected(self, client):
        sid = make_session(client, "se burla del presidente hoy")["sessionId"]
        client.get("/api/session/%s/sentence/0" % sid)
        client.post(
            "/api/session/%s/sentence/0/choice" % sid,
            json={"segmentIndex": 0, "option": 0},
        )
        assert client.post("/api/session/%s/sentence/0/accept" % sid).status_code == 400

    def test_double_accept_conflicts(self, client):
        sid = make_session(client, "por eso")["sessionId"]
        choose_all(client, sid, 0)
        assert client.post("/api/session/%s/sentence/0/accept" % sid).status_code == 200
        assert client.post("/api/session/%s/sentence/0/accept" % sid).status_code == 409


class TestDocumentAndExport:
    def test_document_assembles_accepts(self, client):
        text = "Se burla del presidente. Por eso."
        sid = make_session(client, text)["sessionId"]
        targets = []
        for n in range(2):
            choose_all(client, sid, n)
            targets.append(
                client.post("/api/session/%s/sentence/%d/accept" % (sid, n)).json()[
                    "targetSentence"
                ]
            )
        doc = client.get("/api/session/%s/document" % sid)
        assert doc.text == "\n".join(targets) + "\n"

    def test_export_tmx_one_unit(self, client, tmp_path):
        sid = make_session(client, "se burla del presidente")["sessionId"]
        choose_all(client, sid, 0)
        client.post("/api/session/%s/sentence/0/accept" % sid)
        response = client.get("/api/session/%s/export.tmx" % sid)
        assert response.status_code == 200
        path = tmp_path / "session.tmx"
        path.write_bytes(response.content)
        from segcat.memory import import_tmx

        tm = import_tmx(path)
        assert len(tm) == 1
        assert tm.units[0].target_seg == "Oñembohory mburuvicha rehe"

    def test_unknown_session_404(self, client):
        assert client.get("/api/session/nope/document").status_code == 404
        assert client.get("/api/session/nope/export.tmx").status_code == 404


class TestIsolationAndRestore:
    def test_sessions_isolated(self, client):
        sid_a = make_session(client, "se burla del presidente")["sessionId"]
        sid_b = make_session(client, "por eso")["sessionId"]
        choose_all(client, sid_a, 0)
        client.post("/api/session/%s/sentence/0/accept" % sid_a)
        body_b = client.get("/api/session/%s/sentence/0" % sid_b).json()
        assert body_b["accepted"] is False
        assert client.get("/api/session/%s/document" % sid_b).text == ""

    def test_restart_restores_accepted(self, pack, tmp_path):
        paths = dict(
            memory_path=tmp_path / "memory.tmj",
            session_journal=tmp_path / "sessions.jsonl",
        )
        with TestClient(create_app(pack, **paths)) as client:
            sid = make_session(client, "se burla del presidente")["sessionId"]
            choose_all(client, sid, 0)
            client.post("/api/session/%s/sentence/0/accept" % sid)
        with TestClient(create_app(pack, **paths)) as client:
            doc = client.get("/api/session/%s/document" % sid)
            assert doc.text == "Oñembohory mburuvicha rehe\n"
