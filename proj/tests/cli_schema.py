"""Validates every --json output of the CLI against the shipped schema."""
import json
import subprocess
import sys

import jsonschema

cli, schema_path, examples = sys.argv[1:4]
with open(schema_path) as f:
    schema = json.load(f)
jsonschema.Draft202012Validator.check_schema(schema)

commands = [
    ["iso", "ex1_L.lie", "ex1_Lp.lie", "--field", "R"],
    ["iso", "g4_8.lie", "g4_9.lie"],
    ["iso", "g4_8.lie", "g4_9.lie", "--field", "R"],
    ["iso", "g4_8.lie", "g4_9.lie", "--max-steps", "1"],
    ["iso-param", "g5_9_bg.lie", "g5_9_ds.lie"],
    ["iso-param", "l6_8.lie", "l6_10.lie", "--field", "R"],
    ["iso-param", "g4_8.lie", "g4_9.lie", "--field", "R"],
    ["solve", "sphere_ellipse.sys"],
    ["solve", "with_inequation.sys"],
    ["solve", "sqrt2.sys", "--real"],
    ["solve", "no_real_root.sys", "--real"],
    ["check", "l6_10.lie"],
    ["check", "g4_8.lie"],
    ["batch", "pairs.txt", "--jobs", "2"],
]
failed = 0
for args in commands:
    out = subprocess.run([cli, *args, "--json"], cwd=examples, capture_output=True, text=True)
    try:
        jsonschema.validate(json.loads(out.stdout), schema)
        print("ok  ", " ".join(args))
    except (ValueError, jsonschema.ValidationError) as e:
        failed += 1
        print("FAIL", " ".join(args), "exit", out.returncode, str(e).splitlines()[0])
sys.exit(1 if failed else 0)
