"""Runs CLI commands in JSON mode, validates each document against the
output schema and checks that repeated runs are byte-identical."""

import json
import os
import subprocess
import sys

import jsonschema


def main() -> int:
    binary, schema_path, fixtures = sys.argv[1:4]
    with open(schema_path, encoding="utf-8") as fh:
        schema = json.load(fh)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)

    a2 = ["--workspace", os.path.join(fixtures, "a2_quiver.json")]
    dual = ["--workspace", os.path.join(fixtures, "dual_numbers.json")]
    three = ["--workspace", os.path.join(fixtures, "three_cycle.json")]
    cases = [
        (["validate"] + a2, 0),
        (["validate"] + dual + three, 0),
        (["cartan", "--algebra", "a2_quiver"], 0),
        (["cartan", "--algebra", "trunc_poly_4"], 0),
        (["class", "--module", "H"] + dual, 0),
        (["class", "--module", "H", "--basis", "projective", "--precision", "12"] + dual, 0),
        (["resolve", "--algebra", "dual_numbers", "--module", "L", "--precision", "10"], 0),
        (["resolve", "--module", "L1", "--differentials"] + a2, 0),
        (["ext", "--algebra", "a2_quiver", "--module", "L_e1", "--simple", "e2"], 0),
        (["euler", "--module", "uniserial_12", "--precision", "15"] + three, 0),
        (["euler", "--complex", "cancelling_pair", "--precision", "10"] + a2, 0),
        (["euler", "--complex", "radical_inclusion"] + a2, 0),
        (["invert", "--algebra", "dual_numbers"], 0),
        (["invert", "--algebra", "three_cycle", "--precision", "9"], 0),
        (["beta", "--module", "H", "--m", "0"] + dual, 0),
        (["realize", "--algebra", "a2_quiver", "--module", "P_e1", "--n", "0"], 0),
        (["quotient", "--algebra", "a2_quiver", "--kill", "e2"], 0),
        (["quotient", "--algebra", "three_cycle", "--kill", "e3", "--precision", "12"], 0),
        (["sl2", "--n", "3", "--convention", "balanced"], 0),
        (["sl2", "--n", "2", "--convention", "printed", "--realization"], 0),
        (["qbinom", "4", "2", "2"], 0),
        (["qbinom", "4", "3", "2"], 1),
        (["cartan", "--algebra", "no_such_algebra"], 2),
        (["realize", "--algebra", "dual_numbers", "--module", "L<-1>", "--n", "0"], 1),
    ]
    failures = 0
    for args, expected_code in cases:
        cmd = [binary] + args + ["--format", "json"]
        first = subprocess.run(cmd, capture_output=True, text=True, check=False)
        second = subprocess.run(cmd, capture_output=True, text=True, check=False)
        label = " ".join(args)
        if first.returncode != expected_code:
            print(f"FAIL {label}: exit {first.returncode}, expected {expected_code}\n{first.stderr}")
            failures += 1
            continue
        if first.stdout != second.stdout:
            print(f"FAIL {label}: output differs between runs")
            failures += 1
            continue
        try:
            doc = json.loads(first.stdout)
        except json.JSONDecodeError as err:
            print(f"FAIL {label}: not JSON ({err})")
            failures += 1
            continue
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        if errors:
            print(f"FAIL {label}: {errors[0].message}")
            failures += 1
            continue
        if next(iter(doc)) != "command" or doc["command"] != args[0]:
            print(f"FAIL {label}: command field")
            failures += 1
            continue
        print(f"ok   {label}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
