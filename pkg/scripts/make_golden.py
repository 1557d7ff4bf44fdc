"""Regenerate the golden files under golden/.

    python3 scripts/make_golden.py

Writes the exported built-in theories and the `gns` JSON reports with the
timings block removed.
"""

import io
import json
from contextlib import redirect_stdout
from pathlib import Path

from optheory.cli import main

ROOT = Path(__file__).resolve().parent.parent / "golden"
MODELS = ("classical2", "qubit")


def capture(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def strip_timings(text):
    report = json.loads(text)
    report.pop("timings", None)
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def main_():
    ROOT.mkdir(exist_ok=True)
    for name in MODELS:
        _, text = capture(["export-theory", name])
        (ROOT / f"{name}.json").write_text(text)
        code, text = capture(["gns", "--model", name, "--format", "json"])
        (ROOT / f"gns_{name}.json").write_text(strip_timings(text))
        print(f"{name}: gns exit {code}")


if __name__ == "__main__":
    main_()
