"""HTTP API behaviour and its byte-parity with the CLI JSON output."""

import gzip
import json

import pytest
from fastapi.testclient import TestClient

from fixtures import CREDIT_LOG_CSV, TREE_QUERY

from poq.parser import parse as parse_query_text, ParseError
from poq.service import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


def upload_credit(client, **params):
    return client.post(
        "/logs",
        params={"format": "csv", "name": "credit.csv", **params},
        content=CREDIT_LOG_CSV.encode(),
    )


class TestUpload:
    def test_csv_upload(self, client):
        resp = upload_credit(client)
        assert resp.status_code == 200
        body = resp.json()
        assert body["trace_count"] == 2
        assert body["variant_count"] == 2
        assert {l["label"]: l["count"] for l in body["labels"]}["CRR"] == 2

    def test_empty_body(self, client):
        resp = client.post("/logs", params={"format": "csv"}, content=b"")
        assert resp.status_code == 422

    def test_unknown_format(self, client):
        resp = client.post("/logs", params={"format": "xlsx"}, content=b"data")
        assert resp.status_code == 400

    def test_missing_format_guessed_from_name(self, client):
        resp = client.post(
            "/logs", params={"name": "mylog.csv"}, content=CREDIT_LOG_CSV.encode()
        )
        assert resp.status_code == 200

    def test_body_cap(self):
        small = TestClient(create_app(max_body_bytes=10))
        resp = upload_credit(small)
        assert resp.status_code == 413

    def test_ingestion_error_carries_detail(self, client):
        bad = "case,activity,start,complete\n1,A,,not-a-time\n"
        resp = client.post("/logs", params={"format": "csv"}, content=bad.encode())
        assert resp.status_code == 422
        assert "row 1" in resp.json()["error"]["message"]

    def test_multipart_upload(self, client):
        resp = client.post(
            "/logs",
            files={"file": ("credit.csv", CREDIT_LOG_CSV.encode(), "text/csv")},
        )
        assert resp.status_code == 200
        assert resp.json()["name"] == "credit.csv"

    def test_gzipped_xes(self, client):
        xes = (
            b'<log><trace><string key="concept:name" value="c"/>'
            b'<event><string key="concept:name" value="A"/>'
            b'<date key="time:timestamp" value="2021-01-01T00:00:00Z"/>'
            b"</event></trace></log>"
        )
        resp = client.post(
            "/logs",
            params={"format": "xes", "name": "a.xes.gz"},
            content=gzip.compress(xes),
        )
        assert resp.status_code == 200
        assert resp.json()["trace_count"] == 1


class TestParseEndpoint:
    def test_tree_query_ok(self, client):
        resp = client.post("/query/parse", json={"text": TREE_QUERY})
        assert resp.status_code == 200
        body = resp.json()
        assert body["ok"] is True
        assert body["leaves"] == 4
        label_spans = [t for t in body["tokens"] if t["class"] == "label"]
        assert len(label_spans) == 6

    def test_unknown_operator_position(self, client):
        text = "'A' isQ 'B'"
        resp = client.post("/query/parse", json={"text": text})
        body = resp.json()
        assert body["ok"] is False
        with pytest.raises(ParseError) as direct:
            parse_query_text(text)
        assert body["error"]["offset"] == direct.value.offset == 4
        assert body["error"]["line"] == 1
        assert body["error"]["column"] == 5

    def test_empty_string(self, client):
        resp = client.post("/query/parse", json={"text": ""})
        body = resp.json()
        assert body["ok"] is False
        assert "empty query" in body["error"]["message"]


class TestQueryEndpoint:
    def test_tree_query_matches_case1(self, client):
        log_id = upload_credit(client).json()["log_id"]
        resp = client.post(f"/logs/{log_id}/query", json={"text": TREE_QUERY})
        assert resp.status_code == 200
        body = resp.json()
        assert body["matched_trace_ids"] == ["1"]
        assert body["matched_trace_count"] == 1
        assert body["trace_count"] == 2
        assert body["matched_variant_count"] == 1
        assert body["metrics"]["total_leaves"] == 4

    def test_tautology_matches_all(self, client):
        log_id = upload_credit(client).json()["log_id"]
        resp = client.post(f"/logs/{log_id}/query", json={"text": "'X' isC >=0"})
        assert resp.json()["matched_trace_ids"] == ["1", "2"]

    def test_unknown_log(self, client):
        resp = client.post("/logs/nope/query", json={"text": "'A' isC"})
        assert resp.status_code == 404

    def test_parse_error_is_422_with_position(self, client):
        log_id = upload_credit(client).json()["log_id"]
        resp = client.post(f"/logs/{log_id}/query", json={"text": "'A' isQ 'B'"})
        assert resp.status_code == 422
        assert resp.json()["error"]["position"]["offset"] == 4

    def test_repeat_requests_identical_modulo_timing(self, client):
        log_id = upload_credit(client).json()["log_id"]

        def normalized():
            body = client.post(
                f"/logs/{log_id}/query", json={"text": TREE_QUERY}
            ).json()
            body["metrics"]["wall_time_ms"] = 0
            return json.dumps(body, sort_keys=True)

        assert normalized() == normalized()

    def test_full_mode_same_matches(self, client):
        log_id = upload_credit(client).json()["log_id"]
        short = client.post(
            f"/logs/{log_id}/query", json={"text": TREE_QUERY, "mode": "short"}
        ).json()
        full = client.post(
            f"/logs/{log_id}/query", json={"text": TREE_QUERY, "mode": "full"}
        ).json()
        assert short["matched_trace_ids"] == full["matched_trace_ids"]
        assert full["metrics"]["median_leaves_evaluated"] == 4


class TestVariantsEndpoint:
    def test_credit_variants(self, client):
        log_id = upload_credit(client).json()["log_id"]
        resp = client.get(f"/logs/{log_id}/variants")
        assert resp.status_code == 200
        body = resp.json()
        assert body["variant_count"] == 2
        assert [v["count"] for v in body["variants"]] == [1, 1]
        big = max(body["variants"], key=lambda v: len(v["nodes"]))
        assert len(big["nodes"]) == 10
        assert len(big["edges"]) == 12

    def test_unknown_log(self, client):
        assert client.get("/logs/ghost/variants").status_code == 404

    def test_uploads_are_isolated(self, client):
        first = upload_credit(client).json()["log_id"]
        before = client.get(f"/logs/{first}/variants").json()
        other_csv = "case,activity,start,complete\nz,Q,,2021-01-01T00:00:00Z\n"
        client.post("/logs", params={"format": "csv"}, content=other_csv.encode())
        after = client.get(f"/logs/{first}/variants").json()
        assert before == after


class TestCliParity:
    def test_query_json_byte_identical_modulo_timing(self, client, tmp_path):
        from click.testing import CliRunner

        from poq.cli import main

        log_id = upload_credit(client).json()["log_id"]
        service_body = client.post(
            f"/logs/{log_id}/query", json={"text": TREE_QUERY}
        ).text

        log_path = tmp_path / "credit.csv"
        log_path.write_text(CREDIT_LOG_CSV)
        result = CliRunner().invoke(
            main, ["query", "--log", str(log_path), TREE_QUERY, "--json"]
        )
        assert result.exit_code == 0, result.output
        cli_body = result.output.strip()

        def normalize(raw: str) -> str:
            data = json.loads(raw)
            data["metrics"]["wall_time_ms"] = 0
            data["log_id"] = "normalized"
            return json.dumps(data, separators=(",", ":"), ensure_ascii=False)

        assert normalize(service_body) == normalize(cli_body)
        # Field order and formatting are produced by the same serializer.
        assert sorted(json.loads(service_body)) == sorted(json.loads(cli_body))
