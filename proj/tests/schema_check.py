#!/usr/bin/env python3
"""Cross-check the shipped schema with an independent validator."""
import json
import pathlib
import sys

import jsonschema

root = pathlib.Path(sys.argv[1])
schema = json.loads((root / "schema/experiment.schema.json").read_text())
jsonschema.Draft7Validator.check_schema(schema)
v = jsonschema.Draft7Validator(schema)

bad = 0
for p in sorted((root / "configs").glob("*.json")):
    errs = list(v.iter_errors(json.loads(p.read_text())))
    if errs:
        bad += 1
        print(f"FAIL {p.name}: {errs[0].message}")
for p in sorted((root / "tests/data/bad_schema").glob("*.json")):
    if v.is_valid(json.loads(p.read_text())):
        bad += 1
        print(f"FAIL {p.name}: accepted")
print("schema cross-check:", "ok" if bad == 0 else f"{bad} mismatches")
sys.exit(1 if bad else 0)
