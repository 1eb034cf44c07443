"""Runs the CLI and validates every JSON output against the shipped schemas.

usage: check_schemas.py BCSLAB_EXE SCHEMA_DIR DATA_DIR
"""
import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema
from referencing import Registry, Resource
from referencing.jsonschema import DRAFT202012


def load_registry(schema_dir):
    resources = []
    for path in sorted(Path(schema_dir).glob("*.schema.json")):
        contents = json.loads(path.read_text())
        jsonschema.Draft202012Validator.check_schema(contents)
        resources.append((path.name, Resource.from_contents(contents, default_specification=DRAFT202012)))
    return Registry().with_resources(resources)


def main():
    exe, schema_dir, data_dir = sys.argv[1:4]
    registry = load_registry(schema_dir)
    data = Path(data_dir)
    failures = []
    checked = 0

    def validate(name, instance, label):
        schema = registry.contents(name + ".schema.json")
        validator = jsonschema.Draft202012Validator(schema, registry=registry)
        errors = sorted(validator.iter_errors(instance), key=str)
        if errors:
            failures.append(f"{label}: {errors[0].message}")

    def run(args, schema, codes=(0,), stdin=None):
        nonlocal checked
        proc = subprocess.run([exe, *args], input=stdin, capture_output=True, text=True)
        label = " ".join(args)
        if proc.returncode not in codes:
            failures.append(f"{label}: exit {proc.returncode}: {proc.stderr.strip()}")
            return None
        try:
            instance = json.loads(proc.stdout)
        except json.JSONDecodeError as e:
            failures.append(f"{label}: output is not JSON ({e})")
            return None
        validate(schema, instance, label)
        checked += 1
        return proc.stdout

    bundle = run(["gen", "magic-square", "--with-assignment"], "bundle")
    run(["gen", "clifford", "--rank", "3"], "bundle")
    run(["gen", "chsh"], "game")
    run(["gen", "chsh", "--strategy"], "strategy")
    for name, flag, code in [
        ("magic_square", "--classical", 1),
        ("magic_square", "--parity", 1),
        ("sat3_small", "--classical", 0),
        ("twosat_sat", "--2sat", 0),
        ("twosat_unsat", "--2sat", 1),
        ("horn_sat", "--horn", 0),
        ("parity_sat", "--parity", 0),
    ]:
        run(["solve", str(data / "bcs" / f"{name}.bcs"), flag], "solve", codes=(code,))
    run(["verify", "--assignment", str(data / "magic_square_bundle.json")], "report")
    run(["verify", "--assignment", "-"], "report", stdin=bundle)
    dense = json.dumps({"rep": "dense", "dim": 1, "ops": {f"x{k}": [[1]] for k in range(1, 10)}})
    run(["verify", "--assignment", "-", "--bcs", str(data / "bcs" / "magic_square.bcs")], "report", codes=(1,), stdin=dense)
    cert = run(["certify", "--gadget", "onein3", "--pair", "x,y", "--degree", "6"], "certificate")
    run(["certify", "--gadget", "magic-square", "--pair", "x2,x4", "--anticommute", "--degree", "6"], "certificate")
    run(["certify", "--gadget", "prism", "--pair", "a,e", "--degree", "2"], "inconclusive", codes=(1,))
    if cert:
        run(["check-certificate", "-"], "check", stdin=cert)
    run(["derive-game", str(data / "bcs" / "magic_square.bcs")], "game")
    run(["strategy", "--assignment", str(data / "magic_square_bundle.json")], "strategy")

    for path in sorted((data / "games").glob("*.json")):
        kind = "strategy" if "strategy" in path.name else "game"
        validate(kind, json.loads(path.read_text()), path.name)
        checked += 1
    validate("bundle", json.loads((data / "magic_square_bundle.json").read_text()), "magic_square_bundle.json")

    with tempfile.TemporaryDirectory() as tmp:
        for args in (["--to", "3coloring"], ["--to", "1in3"], ["--to", "3sat"], ["--harden"], ["--occ-limit", "3"]):
            trace = os.path.join(tmp, "trace.json")
            src = data / "bcs" / ("ksat5.bcs" if args[-1] == "3sat" else "sat3_small.bcs")
            proc = subprocess.run([exe, "reduce", str(src), *args, "--trace", trace], capture_output=True, text=True)
            if proc.returncode != 0:
                failures.append(f"reduce {args}: exit {proc.returncode}")
                continue
            validate("trace", json.loads(Path(trace).read_text()), f"trace {' '.join(args)}")
            checked += 1

    for f in failures:
        print("FAIL", f)
    print(f"{checked} JSON documents checked, {len(failures)} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
