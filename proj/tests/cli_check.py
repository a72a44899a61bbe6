#!/usr/bin/env python3
"""Integration checks for the command-line driver: exit codes, report
determinism, and the documented classification outputs."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = sys.argv[1]
SCEN = Path(sys.argv[2])


def run(*args, env=None):
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=env)


failures = []


def check(cond, label):
    if not cond:
        failures.append(label)
        print(f"FAIL: {label}")
    else:
        print(f"ok: {label}")


r = run("verify", str(SCEN / "borel_gl3.fps"))
check(r.returncode == 0, "verify borel_gl3 exits 0")
check("dim 6" in r.stdout, "borel stabilizer reported with dimension 6")

r = run("verify", str(SCEN / "not_semiclosed.fps"))
check(r.returncode == 1, "failing check exits 1")

r = run("verify", str(SCEN / "bad_flag.fps"))
check(r.returncode == 2, "non-strict flag chain exits 2")
check("line" in r.stderr and "column" in r.stderr, "parse error carries position")

r = run("verify", str(SCEN / "missing.fps"))
check(r.returncode == 2, "missing file exits 2")

r = run("bogus-subcommand")
check(r.returncode == 2, "usage error exits 2")

r = run("character", "psib", "--prefix", "1,1,0", "--tail", "const:0", "--classify")
check(r.returncode == 0 and r.stdout.splitlines()[0] == "typeI-factor",
      "projection descriptor classifies as typeI-factor")

r = run("character", "psib", "--tail", "const:1/2", "--classify")
check(r.stdout.splitlines()[0] == "II1", "constant-half tail classifies as II1")

r = run("character", "psib", "--tail", "const:1/4", "--tail", "const:3/4",
        "--classify")
check(r.stdout.splitlines()[0] == "III", "interleaved quarters classify as III")

r = run("character", "voiculescu", "--coeffs", "2,-1")
check(r.returncode == 1, "negative minor exits 1")

with tempfile.TemporaryDirectory() as td:
    j1, j2 = Path(td) / "a.json", Path(td) / "b.json"
    run("report", str(SCEN / "borel_gl3.fps"), "--json", str(j1))
    run("report", str(SCEN / "borel_gl3.fps"), "--json", str(j2))
    check(j1.read_bytes() == j2.read_bytes(), "JSON reports are byte-identical")
    doc = json.loads(j1.read_text())
    check([c["kind"] for c in doc["checks"]] == ["semiclosed", "levi", "chevalley"],
          "JSON check order matches the scenario")

if failures:
    sys.exit(1)
print("all CLI checks passed")
