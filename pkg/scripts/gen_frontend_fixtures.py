"""Capture real service and CLI payloads as console test fixtures.

The console's tests compare displayed values field-for-field against these
bodies, so they must come from the actual backends, not hand-written JSON.
"""

import pathlib
import sys

from click.testing import CliRunner
from fastapi.testclient import TestClient

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from fixtures import CREDIT_LOG_CSV, TREE_QUERY  # noqa: E402

from poq.cli import main  # noqa: E402
from poq.service import create_app  # noqa: E402

OUT = ROOT / "frontend" / "test" / "fixtures"
BROKEN_QUERY = "'A' isQ 'B'"


def write(name: str, content: str) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / name
    path.write_text(content if content.endswith("\n") else content + "\n")
    print(f"wrote {path}")


def main_() -> None:
    client = TestClient(create_app())
    upload = client.post(
        "/logs",
        params={"format": "csv", "name": "credit.csv"},
        content=CREDIT_LOG_CSV.encode(),
    )
    upload.raise_for_status()
    log_id = upload.json()["log_id"]
    write("session_log.json", upload.text)

    parse_ok = client.post("/query/parse", json={"text": TREE_QUERY})
    write("parse_ok.json", parse_ok.text)

    parse_err = client.post("/query/parse", json={"text": BROKEN_QUERY})
    write("parse_error.json", parse_err.text)

    query = client.post(f"/logs/{log_id}/query", json={"text": TREE_QUERY})
    write("query_response.json", query.text)

    variants = client.get(f"/logs/{log_id}/variants")
    write("variants.json", variants.text)

    with CliRunner().isolated_filesystem():
        pathlib.Path("credit.csv").write_text(CREDIT_LOG_CSV)
        result = CliRunner().invoke(
            main, ["query", "--log", "credit.csv", TREE_QUERY, "--json"]
        )
        assert result.exit_code == 0, result.output
    write("cli_query_response.json", result.output.strip())

    write(
        "inputs.json",
        '{"query": %s, "broken_query": %s}'
        % (__import__("json").dumps(TREE_QUERY), __import__("json").dumps(BROKEN_QUERY)),
    )


if __name__ == "__main__":
    main_()
