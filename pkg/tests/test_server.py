from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from fmit.model import RelKind, model_from_tree
from fmit.server import MAX_MODEL_BYTES, create_app
from fmit.xmlio import parse_xml, serialize_xml

M = RelKind.MANDATORY
O = RelKind.OPTIONAL


def xml_of(model) -> str:
    return serialize_xml(model).decode("utf-8")


BASE_XML = xml_of(model_from_tree("b", "Root", [("A", M, []), ("Search", O, [])]))
OTHER_XML = xml_of(model_from_tree("o", "Root", [("A", O, []), ("Serch", O, [])]))


@pytest.fixture
def client():
    return TestClient(create_app())


def create(client, base_xml=BASE_XML, other_xml=OTHER_XML, **extra):
    return client.post(
        "/api/sessions", json={"base_xml": base_xml, "other_xml": other_xml, **extra}
    )


class TestCreateSession:
    def test_created_with_report_and_conflicts(self, client):
        r = create(client)
        assert r.status_code == 201
        body = r.json()
        assert body["state"] == "awaiting_resolutions"
        assert 0.0 <= body["report"]["cee"] <= 1.0
        assert len(body["conflicts"]) == 2
        assert body["base_tree"]["name"] == "Root"
        assert body["session_id"]

    def test_unguessable_distinct_tokens(self, client):
        a = create(client).json()["session_id"]
        b = create(client).json()["session_id"]
        assert a != b
        assert len(a) >= 32

    def test_invalid_xml_gives_400_with_diagnostics(self, client):
        r = create(client, base_xml="<featureModel><struct>")
        assert r.status_code == 400
        assert r.json()["diagnostics"]["base"]

    def test_oversized_payload_gives_413(self, client):
        huge = "x" * (MAX_MODEL_BYTES + 1)
        r = create(client, base_xml=huge)
        assert r.status_code == 413

    def test_bad_threshold_rejected(self, client):
        r = create(client, theta=1.5)
        assert r.status_code == 422


class TestGetSession:
    def test_round_trip(self, client):
        sid = create(client).json()["session_id"]
        r = client.get(f"/api/sessions/{sid}")
        assert r.status_code == 200
        assert r.json()["session_id"] == sid

    def test_unknown_session_404(self, client):
        assert client.get("/api/sessions/nope").status_code == 404


class TestResolution:
    def test_resolve_marks_conflict(self, client):
        sid = create(client).json()["session_id"]
        r = client.post(
            f"/api/sessions/{sid}/conflicts/1/resolution", json={"choice": "keep_other"}
        )
        assert r.status_code == 200
        assert r.json()["status"] == "resolved"
        assert r.json()["resolution"] == "keep_other"

    def test_duplicate_resolution_409(self, client):
        sid = create(client).json()["session_id"]
        url = f"/api/sessions/{sid}/conflicts/1/resolution"
        assert client.post(url, json={"choice": "keep_base"}).status_code == 200
        assert client.post(url, json={"choice": "keep_base"}).status_code == 409

    def test_unknown_conflict_404(self, client):
        sid = create(client).json()["session_id"]
        r = client.post(
            f"/api/sessions/{sid}/conflicts/99/resolution", json={"choice": "keep_base"}
        )
        assert r.status_code == 404

    def test_bad_choice_400(self, client):
        sid = create(client).json()["session_id"]
        r = client.post(
            f"/api/sessions/{sid}/conflicts/1/resolution", json={"choice": "maybe"}
        )
        assert r.status_code == 400

    def test_structural_conflict_409(self, client):
        base = xml_of(model_from_tree("b", "Root", [("A", O, [("X", O, [])])]))
        other = xml_of(model_from_tree("o", "Root", [("A", O, []), ("X", O, [])]))
        body = create(client, base_xml=base, other_xml=other).json()
        structural = next(c for c in body["conflicts"] if c["kind"] == "structural")
        r = client.post(
            f"/api/sessions/{body['session_id']}/conflicts/{structural['id']}/resolution",
            json={"choice": "keep_base"},
        )
        assert r.status_code == 409


class TestFinalize:
    def finish(self, client):
        sid = create(client).json()["session_id"]
        for cid in (1, 2):
            client.post(
                f"/api/sessions/{sid}/conflicts/{cid}/resolution",
                json={"choice": "keep_other"},
            )
        return sid

    def test_finalize_before_resolutions_409(self, client):
        sid = create(client).json()["session_id"]
        r = client.post(f"/api/sessions/{sid}/finalize")
        assert r.status_code == 409
        assert r.json()["unresolved"] == [1, 2]

    def test_finalize_returns_model_and_post_report(self, client):
        sid = self.finish(client)
        r = client.post(f"/api/sessions/{sid}/finalize")
        assert r.status_code == 200
        body = r.json()
        assert body["state"] == "finalized"
        assert 0.0 <= body["post_report"]["cee"] <= 1.0
        assert parse_xml(body["merged_xml"].encode("utf-8")).ok

    def test_double_finalize_409(self, client):
        sid = self.finish(client)
        assert client.post(f"/api/sessions/{sid}/finalize").status_code == 200
        assert client.post(f"/api/sessions/{sid}/finalize").status_code == 409

    def test_merged_xml_download(self, client):
        sid = self.finish(client)
        assert client.get(f"/api/sessions/{sid}/merged.xml").status_code == 409
        client.post(f"/api/sessions/{sid}/finalize")
        r = client.get(f"/api/sessions/{sid}/merged.xml")
        assert r.status_code == 200
        assert r.headers["content-type"].startswith("application/xml")
        assert parse_xml(r.content).ok


class TestStoreLimits:
    def test_lru_eviction(self):
        client = TestClient(create_app(capacity=2))
        first = create(client).json()["session_id"]
        create(client)
        create(client)
        assert client.get(f"/api/sessions/{first}").status_code == 404

    def test_identical_models_have_no_conflicts(self, client):
        r = create(client, other_xml=BASE_XML)
        body = r.json()
        assert body["conflicts"] == []
        assert body["report"]["cee"] == 1.0


class TestStatic:
    def test_index_fallback_without_ui(self, tmp_path):
        client = TestClient(create_app(ui_dir=str(tmp_path / "missing")))
        r = client.get("/")
        assert r.status_code == 200
        assert r.json()["ui"] == "not built"

    def test_asset_traversal_rejected(self, tmp_path):
        client = TestClient(create_app(ui_dir=str(tmp_path)))
        assert client.get("/assets/..%2Fsecret").status_code == 404

    def test_ui_served_when_built(self, tmp_path):
        (tmp_path / "assets").mkdir(parents=True)
        (tmp_path / "index.html").write_text("<html>ui</html>")
        (tmp_path / "assets" / "app.js").write_text("console.log(1)")
        client = TestClient(create_app(ui_dir=str(tmp_path)))
        assert client.get("/").text == "<html>ui</html>"
        assert client.get("/assets/app.js").status_code == 200
