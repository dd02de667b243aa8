"""Regenerate docs/openapi.json from the live service definition."""

import json
import pathlib

from poq.service import create_app


def main() -> None:
    spec = create_app().openapi()
    out = pathlib.Path(__file__).resolve().parent.parent / "docs" / "openapi.json"
    out.write_text(json.dumps(spec, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
