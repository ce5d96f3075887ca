#!/usr/bin/env python3
"""Runs the hup CLI on a handful of inputs, checks exit codes and validates reports."""
import json
import math
import os
import subprocess
import sys
import tempfile

exe, schema_path, mode = sys.argv[1], sys.argv[2], sys.argv[3]

CIRCLE = '{"type":"circle"}'
PC = '{"type":"perturbed_circle"}'
SQUARE = '{"type":"polygon","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]]}'
PARABOLA = '{"type":"graph","psi":{"kind":"power","alpha":2},"window":[-50,50]}'
HALF = repr(math.pi / 2)

RUNS = [
    (["split", "--curve", SQUARE, "--theta", "0.3"], 0),
    (["hup-one-line", "--curve", PARABOLA, "--theta", "0"], 0),
    (["orbit", "--curve", CIRCLE, "--theta1", "0", "--theta2", "1", "--n", "50"], 0),
    (["rotation", "--curve", PC, "--theta1", "0", "--theta2", HALF, "--n", "2000"], 0),
    (["periodic", "--curve", PC, "--theta1", "0", "--theta2", HALF], 0),
    (["attract", "--curve", PC, "--theta1", "0", "--theta2", HALF, "--interval", "0.26", "0.49", "--k", "2"], 0),
    (["wandering", "--curve", CIRCLE, "--theta1", "0", "--theta2", HALF, "--interval", "0.1", "0.2"], 2),
    (["sigma", "--curve", PARABOLA, "--theta1", repr(-math.pi / 2), "--theta2", "1.9", "--n", "20"], 0),
    (["ellipse-reduce", "--a", "2", "--b", "1", "--theta1", "0.3", "--theta2", "1.2"], 0),
    (["annihilate", "--curve", CIRCLE, "--theta1", "0", "--theta2", "1", "--iterations", "200"], 0),
    (["counterexample", "--kind", "circle-rational", "--q", "2", "--verify", "--t-count", "101"], 0),
    (["split", "--curve", '{"type":"nope"}', "--theta", "0"], 1),
]


def run(args, out=None):
    cmd = [exe] + args + (["--out", out] if out else [])
    return subprocess.run(cmd, capture_output=True, text=True)


def main():
    failures = []
    reports = []
    with tempfile.TemporaryDirectory() as tmp:
        for i, (args, want) in enumerate(RUNS):
            p = run(args)
            if p.returncode != want:
                failures.append(f"{args[0]}: exit {p.returncode}, wanted {want}: {p.stderr.strip()}")
                continue
            if want != 1:
                reports.append((args[0], json.loads(p.stdout)))

        # determinism and --out
        args = RUNS[3][0]
        out = os.path.join(tmp, "nested", "rot.json")
        if run(args, out).returncode != 0:
            failures.append("rotation --out failed")
        elif open(out).read() != run(args).stdout:
            failures.append("report written with --out differs from stdout")

        # density hand-off between commands
        ce = os.path.join(tmp, "ce.json")
        run(["counterexample", "--kind", "circle-rational", "--q", "2"], ce)
        p = run(["verify", "--curve", CIRCLE, "--density", ce, "--lines", "0", repr(math.pi / 4), "--t-count", "51"])
        if p.returncode != 2:
            failures.append(f"verify on the diagonal should fail, exit {p.returncode}")
        p = run(["radon", "--curve", CIRCLE, "--density", ce, "--theta", "0.4", "--zeta-count", "101"], os.path.join(tmp, "r.json"))
        if p.returncode != 0 or not os.path.exists(os.path.join(tmp, "r.radon.csv")):
            failures.append("radon did not write its csv")
        p = run(["slice-check", "--curve", CIRCLE, "--density", ce, "--theta", "0.4", "--xi-count", "9"])
        if p.returncode != 0:
            failures.append("slice-check failed")
        else:
            reports.append(("slice-check", json.loads(p.stdout)))

        env = dict(os.environ, HUP_DEFAULT_TOL="1e-9")
        p = subprocess.run([exe, "periodic", "--curve", PC, "--theta1", "0", "--theta2", HALF], capture_output=True, text=True, env=env)
        if p.returncode != 0 or json.loads(p.stdout)["inputs"]["tol"] != 1e-9:
            failures.append("HUP_DEFAULT_TOL not honoured")

    if mode == "schema":
        try:
            import jsonschema
        except ImportError:
            print("jsonschema not installed, skipping")
            return 77
        schema = json.load(open(schema_path))
        for name, rep in reports:
            try:
                jsonschema.validate(rep, schema)
            except jsonschema.ValidationError as e:
                failures.append(f"{name}: {e.message}")
        print(f"validated {len(reports)} reports")

    for f in failures:
        print("FAIL", f)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
