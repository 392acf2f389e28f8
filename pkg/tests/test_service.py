import json

import pytest
from fastapi.testclient import TestClient

from conftest import CORPUS_CSV, workflow_lines
from vita.server import create_app


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "sessions")
    with TestClient(app) as c:
        yield c


def make_session(client, **options) -> str:
    body = {"path": str(CORPUS_CSV), "text_columns": ["Review"], **options}
    r = client.post("/sessions", json=body)
    assert r.status_code == 200, r.text
    return r.json()["session_id"]


def apply_cmd(client, sid: str, command: str):
    return client.post(
        f"/sessions/{sid}/apply", json={"source": "command", "payload": command}
    )


class TestSessions:
    def test_create_from_path(self, client):
        r = client.post("/sessions", json={"path": str(CORPUS_CSV), "text_columns": ["Review"]})
        body = r.json()
        assert r.status_code == 200
        assert body["table"]["total"] == 20
        assert body["version_id"] == 0

    def test_create_from_multipart_upload(self, client):
        with open(CORPUS_CSV, "rb") as f:
            r = client.post(
                "/sessions",
                files={"file": ("reviews.csv", f, "text/csv")},
                data={"text_columns": "Review"},
            )
        assert r.status_code == 200
        assert r.json()["table"]["total"] == 20

    def test_header_only_csv_gives_zero_rows(self, client, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("Review,Rating\n")
        r = client.post("/sessions", json={"path": str(p)})
        assert r.status_code == 200 and r.json()["table"]["total"] == 0

    def test_malformed_csv_reports_line(self, client, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("a,b\n1,2\n3\n")
        r = client.post("/sessions", json={"path": str(p)})
        assert r.status_code == 422
        assert r.json()["error"]["type"] == "Load"
        assert r.json()["error"]["line"] == 3

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope/table").status_code == 404


class TestApplyEndpoint:
    def test_clean_pipeline_returns_table_delta(self, client):
        sid = make_session(client)
        r = apply_cmd(client, sid, "combine Review update [lowercase; remove_stopwords]")
        body = r.json()
        assert body["version_id"] == 1
        assert body["table"]["rows"][1]["Review"] == "comfy shoes!"

    def test_select_returns_filter_effects(self, client):
        sid = make_session(client)
        for line in workflow_lines():
            assert apply_cmd(client, sid, line).status_code == 200
        r = apply_cmd(client, sid, 'select v1 single where token == "comfy"')
        effects = r.json()["effects"]
        assert {"view": "table", "effect": "filter", "row_ids": [1, 8], "marks": []} in effects

    def test_unknown_operator_is_422_envelope(self, client):
        sid = make_session(client)
        r = apply_cmd(client, sid, "frobnicate Review update")
        assert r.status_code == 422
        assert r.json()["error"]["type"] == "UnknownOperator"

    def test_syntax_error_carries_position(self, client):
        sid = make_session(client)
        r = apply_cmd(client, sid, "select v1 single token")
        assert r.status_code == 422
        err = r.json()["error"]
        assert err["type"] == "OperatorSyntax" and err["position"] == 17

    def test_json_payload(self, client):
        sid = make_session(client)
        r = client.post(
            f"/sessions/{sid}/apply",
            json={
                "source": "json",
                "payload": {"operator": "project", "udf": "lowercase", "column": "Review"},
            },
        )
        assert r.status_code == 200 and r.json()["version_id"] == 1

    def test_failed_op_does_not_advance_head(self, client):
        sid = make_session(client)
        apply_cmd(client, sid, "frobnicate Review update")
        assert apply_cmd(client, sid, "lowercase Review update").json()["version_id"] == 1


class TestReads:
    def test_table_pagination(self, client):
        sid = make_session(client)
        page = client.get(f"/sessions/{sid}/table", params={"offset": 18, "limit": 10}).json()
        assert [r["row_id"] for r in page["rows"]] == [18, 19]
        empty = client.get(f"/sessions/{sid}/table", params={"offset": 50, "limit": 10}).json()
        assert empty["rows"] == []

    def test_table_bytes_deterministic(self, client):
        sid = make_session(client)
        a = client.get(f"/sessions/{sid}/table").content
        b = client.get(f"/sessions/{sid}/table").content
        assert a == b

    def test_viz_lists_emitted_documents(self, client):
        sid = make_session(client)
        for line in workflow_lines():
            apply_cmd(client, sid, line)
        viz = client.get(f"/sessions/{sid}/viz").json()
        assert [v["view_id"] for v in viz] == ["v1", "v2"]
        marks = {v["vegalite"]["mark"] for v in viz}
        assert marks == {"bar", "point"}

    def test_history_endpoint(self, client):
        sid = make_session(client)
        apply_cmd(client, sid, "lowercase Review update")
        nodes = client.get(f"/sessions/{sid}/history").json()["nodes"]
        assert len(nodes) == 2 and nodes[1]["parent_id"] == 0

    def test_operators_endpoint_includes_synthesized(self, client):
        sid = make_session(client)
        apply_cmd(client, sid, "synthesize clean [lowercase]")
        ops = client.get(f"/sessions/{sid}/operators").json()["operators"]
        assert "clean" in ops and "tfidf" in ops


class TestCheckout:
    def test_checkout_then_table_matches_history_bytes(self, client):
        sid = make_session(client)
        before = client.get(f"/sessions/{sid}/table").content
        apply_cmd(client, sid, "lowercase Review update")
        after = client.get(f"/sessions/{sid}/table").content
        assert after != before

        r = client.post(f"/sessions/{sid}/checkout", json={"version_id": 0})
        assert r.status_code == 200
        restored = client.get(f"/sessions/{sid}/table").content
        assert restored == before

    def test_checkout_unknown_version_404(self, client):
        sid = make_session(client)
        r = client.post(f"/sessions/{sid}/checkout", json={"version_id": 99})
        assert r.status_code == 404


class TestWebSocket:
    def test_effects_stream_in_commit_order(self, client):
        sid = make_session(client)
        for line in workflow_lines():
            apply_cmd(client, sid, line)
        with client.websocket_connect(f"/sessions/{sid}/events") as ws:
            apply_cmd(client, sid, 'select v1 single where token == "comfy"')
            first = ws.receive_json()
            second = ws.receive_json()
            assert first == {
                "view": "v1",
                "effect": "highlight",
                "row_ids": [1, 8],
                "marks": ["comfy"],
            }
            assert second["view"] == "table" and second["effect"] == "filter"

            apply_cmd(client, sid, 'select v1 single where token == "red"')
            third = ws.receive_json()
            assert third["marks"] == ["red"]

    def test_clear_broadcasts_resets(self, client):
        sid = make_session(client)
        for line in workflow_lines():
            apply_cmd(client, sid, line)
        apply_cmd(client, sid, 'select v1 single where token == "comfy"')
        with client.websocket_connect(f"/sessions/{sid}/events") as ws:
            client.post(f"/sessions/{sid}/clear", json={})
            msg = ws.receive_json()
            assert msg["effect"] == "reset"
