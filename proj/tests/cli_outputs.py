"""End-to-end checks for the mbhd CLI.

Runs each subcommand, validates every JSON it writes against schemas/, and
checks that rerunning with the same config reproduces every file byte for byte.

usage: cli_outputs.py <mbhd executable> <repo root>
"""

import json
import random
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

MBHD = Path(sys.argv[1]).resolve()
ROOT = Path(sys.argv[2]).resolve()
SCHEMAS = ROOT / "schemas"

registry = Registry()
schemas = {}
for path in SCHEMAS.glob("*.schema.json"):
    doc = json.loads(path.read_text())
    registry = registry.with_resource(doc["$id"], Resource.from_contents(doc))
    schemas[doc["$id"]] = doc

failures = []


def validate(doc, schema_id, what):
    validator = jsonschema.Draft202012Validator(schemas[schema_id], registry=registry)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
    for e in errors:
        failures.append(f"{what}: {'/'.join(map(str, e.path))}: {e.message}")


def run(args, cwd, expect=0):
    proc = subprocess.run([str(MBHD), *args], cwd=cwd, capture_output=True, text=True)
    if proc.returncode != expect:
        failures.append(f"{' '.join(args)}: exit {proc.returncode}, stdout {proc.stdout!r}, stderr {proc.stderr!r}")
        return None
    return json.loads(proc.stdout)


def synthetic_mushroom(path):
    """Rows in the UCI column layout with independent attribute draws."""
    rng = random.Random(5)
    header = json.loads((ROOT / "data" / "mushroom_rules.json").read_text())["header"]
    choices = {
        "class": "pe", "odor": "nafly", "stalk-root": "bcer", "gill-spacing": "cw",
        "bruises": "tf", "spore-print-color": "knhr",
    }
    lines = []
    for _ in range(3000):
        lines.append(",".join(rng.choice(choices.get(col, "x")) for col in header))
    path.write_text("\n".join(lines) + "\n")


SCHEMA_FOR = {
    "decomposition.json": "decomposition.schema.json",
    "report.json": "report.schema.json",
    "estimate.json": "estimate.schema.json",
    "perceptron.json": "perceptron.schema.json",
    "fgm.json": "fgm.schema.json",
    "mushroom.json": "mushroom.schema.json",
}


def scenario(work):
    """Runs every command under `work` with relative output directories."""
    data = ROOT / "data"
    pmf = str(data / "fgm_0.3_pmf.json")
    model = str(data / "product_model.json")
    synthetic_mushroom(work / "mushroom.csv")
    (work / "degenerate_pmf.json").write_text(json.dumps({"d": 2, "probs": [0.0, 0.4, 0.3, 0.3]}))
    (work / "sum_model.json").write_text(json.dumps({"kind": "bool_expr", "expr": "x1 + 2*x2", "d": 2}))
    commands = [
        ["decompose", "--pmf", pmf, "--model", model, "-o", "dec"],
        ["indices", "--pmf", pmf, "--model", model, "--export-gram", "-o", "ind"],
        ["indices", "--pmf", "degenerate_pmf.json", "--model", "sum_model.json", "-o", "deg"],
        ["sample", "--pmf", pmf, "--model", model, "-n", "2000", "--seed", "17", "-o", "smp"],
        ["estimate", "--samples", "smp/samples.csv", "--pmf", pmf, "--x", "11", "--x", "01", "-o", "est"],
        ["estimate", "--samples", "smp/samples.csv", "--cap", "1", "-o", "est_emp"],
        ["reproduce", "fgm", "-o", "fgm"],
        ["reproduce", "perceptron", "--nodes", "64", "-o", "perc"],
        ["reproduce", "mushroom", "--data", "mushroom.csv", "--rules", str(data / "mushroom_rules.json"),
         "-o", "mush"],
    ]
    for args in commands:
        status = run(args, work)
        if status is None:
            continue
        validate(status, "status.schema.json", f"status of {args[0]}")
        out = work / status["out"]
        for name in status["files"]:
            if not (out / name).exists():
                failures.append(f"{args[0]}: listed file {name} missing")
            elif name in SCHEMA_FOR:
                validate(json.loads((out / name).read_text()), SCHEMA_FOR[name], f"{args[0]} {name}")

    # Errors go to stdout as a structured object with exit status 2.
    for args in (
        ["reproduce", "mushroom", "-o", "err1"],
        ["decompose", "--pmf", pmf, "--model", str(data / "mushroom_rules.json"), "-o", "err2"],
        ["estimate", "--samples", "smp/samples.csv", "--pmf", pmf, "--x", "111", "-o", "err3"],
    ):
        err = run(args, work, expect=2)
        if err is not None:
            validate(err, "error.schema.json", f"error from {args[0]}")


def tree(root):
    return {p.relative_to(root): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
    scenario(Path(a))
    scenario(Path(b))
    ta, tb = tree(Path(a)), tree(Path(b))
    if ta.keys() != tb.keys():
        failures.append(f"reruns wrote different file sets: {sorted(set(ta) ^ set(tb))}")
    differing = [str(k) for k in ta if k in tb and ta[k] != tb[k]]
    if differing:
        failures.append(f"reruns differ byte-wise in: {differing}")
    print(f"checked {len(ta)} files per run")

for f in failures:
    print("FAIL", f)
print("OK" if not failures else f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
