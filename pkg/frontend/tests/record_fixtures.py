"""Regenerate service_recording.json from the live Python service.

Run from the repository root with the package installed:

    python frontend/tests/record_fixtures.py
"""

import json
import tempfile
import warnings
from pathlib import Path

warnings.filterwarnings("ignore")

from fastapi.testclient import TestClient  # noqa: E402

from vita.server import create_app  # noqa: E402

ROOT = Path(__file__).resolve().parents[2]
CORPUS = ROOT / "src" / "vita" / "data" / "reviews.csv"
WORKFLOW = ROOT / "src" / "vita" / "data" / "topic_exploration.vta"
OUT = Path(__file__).parent / "fixtures" / "service_recording.json"


def main() -> None:
    exchanges = []

    def record(method: str, path: str, body, response) -> None:
        exchanges.append(
            {
                "method": method,
                "path": path,
                "body": body,
                "status": response.status_code,
                "response": response.json(),
            }
        )

    with tempfile.TemporaryDirectory() as tmp:
        client = TestClient(create_app(tmp))
        body = {"path": str(CORPUS), "text_columns": ["Review"]}
        # the replayed session path must match what the tests send
        body["path"] = "src/vita/data/reviews.csv"
        r = client.post("/sessions", json=body)
        record("POST", "/sessions", body, r)
        sid = r.json()["session_id"]
        ws_messages = {"select": [], "clear": []}
        with client.websocket_connect(f"/sessions/{sid}/events") as ws:
            lines = [
                line.strip()
                for line in WORKFLOW.read_text().splitlines()
                if line.strip() and not line.startswith("#")
            ]
            for line in lines:
                payload = {"source": "command", "payload": line}
                r = client.post(f"/sessions/{sid}/apply", json=payload)
                record("POST", f"/sessions/{sid}/apply", payload, r)
            payload = {"source": "command", "payload": 'select v1 single where token == "comfy"'}
            r = client.post(f"/sessions/{sid}/apply", json=payload)
            record("POST", f"/sessions/{sid}/apply", payload, r)
            ws_messages["select"] = [ws.receive_json(), ws.receive_json()]
            r = client.get(f"/sessions/{sid}/table?offset=0&limit=50")
            record("GET", f"/sessions/{sid}/table?offset=0&limit=50", None, r)
            r = client.post(f"/sessions/{sid}/clear", json={})
            record("POST", f"/sessions/{sid}/clear", {}, r)
            ws_messages["clear"] = [ws.receive_json(), ws.receive_json()]
            r = client.get(f"/sessions/{sid}/table?offset=0&limit=50")
            record("GET", f"/sessions/{sid}/table?offset=0&limit=50", None, r)
        r = client.get(f"/sessions/{sid}/viz")
        record("GET", f"/sessions/{sid}/viz", None, r)
        r = client.get(f"/sessions/{sid}/history")
        record("GET", f"/sessions/{sid}/history", None, r)
        r = client.get(f"/sessions/{sid}/operators")
        record("GET", f"/sessions/{sid}/operators", None, r)
        payload = {"source": "command", "payload": "select v1 single token"}
        r = client.post(f"/sessions/{sid}/apply", json=payload)
        record("POST", f"/sessions/{sid}/apply", payload, r)

    OUT.write_text(json.dumps({"exchanges": exchanges, "ws_messages": ws_messages}, indent=1))
    print(f"wrote {OUT} ({len(exchanges)} exchanges)")


if __name__ == "__main__":
    main()
