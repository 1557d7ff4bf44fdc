"""Run every subcommand on the built-in models and print a one-line summary each.

    python3 scripts/run_pipeline.py [--model qubit] [--model classical2]
"""

import argparse
import io
import json
from contextlib import redirect_stdout

from optheory.cli import main

COMMANDS = [
    ["validate"],
    ["faithful"],
    ["transpose"],
    ["gns"],
    ["cstar"],
    ["born"],
]


def run(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main([*argv, "--format", "json"])
    return code, json.loads(buf.getvalue())


def cli():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--model", action="append", help="built-in model (repeatable)")
    args = p.parse_args()
    failed = 0
    for model in args.model or ["classical2", "qubit"]:
        extra = [["calibrate", "--transformation", "rx" if model == "qubit" else "cycle"]]
        for cmd in COMMANDS + extra:
            code, rep = run([*cmd, "--model", model])
            s = rep["summary"]
            bad = s["axiom_violations"] + s["claim_failures"]
            print(f"{model:<11} {cmd[0]:<10} exit {code}  checks {len(rep['checks']):>2}"
                  f"  informational {len(s['informational'])}  {'failed: ' + ', '.join(bad) if bad else ''}"
                  f"  {rep['timings']['wall_seconds']:.2f}s")
            failed += code != 0
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    cli()
