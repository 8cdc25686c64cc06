"""Cross-checks emitted LP files with HiGHS.

usage: external_lp_check.py <fstsp binary> <work dir>

The relaxation of every formulation must match the built-in simplex, and
the MCbar file (which has no lazy families) must have the same integer
optimum as the built-in branch-and-cut. DMN and DMN2 files leave the lazy
rows out, so their integer optimum can only be lower. Exits 77 when
highspy is missing.
"""

import json
import os
import subprocess
import sys

try:
    import highspy
except ImportError:
    print("highspy not installed, skipping")
    sys.exit(77)

TOL = 1e-6


def run(args):
    res = subprocess.run(args, capture_output=True, text=True)
    if res.returncode != 0:
        sys.exit(f"{' '.join(args)} failed ({res.returncode}): {res.stderr}")
    return res.stdout


def highs_value(path, relax):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    if h.readModel(path) != highspy.HighsStatus.kOk:
        sys.exit(f"HiGHS could not read {path}")
    if relax:
        lp = h.getLp()
        n = lp.num_col_
        h.changeColsIntegrality(n, list(range(n)), [highspy.HighsVarType.kContinuous] * n)
    h.run()
    if h.getModelStatus() != highspy.HighsModelStatus.kOptimal:
        sys.exit(f"HiGHS status {h.modelStatusToString(h.getModelStatus())} on {path}")
    return h.getInfo().objective_function_value


def close(a, b):
    return abs(a - b) <= TOL * max(1.0, abs(b))


def main():
    tool, work = sys.argv[1], sys.argv[2]
    os.makedirs(work, exist_ok=True)
    failures = 0
    for variant in ("mcbar", "dmn", "dmn2"):
        for mode in ("wait", "nowait"):
            path = os.path.join(work, f"fixture-{variant}-{mode}.lp")
            out = run([tool, "emit-lp", "--c", "4", "--seed", "3", "--variant", variant, "--mode", mode,
                       "--out", path, "--print-relaxation"])
            ours = float(out.split()[-1])
            theirs = highs_value(path, relax=True)
            ok = close(theirs, ours)
            failures += not ok
            print(f"{variant} {mode} relaxation: built-in {ours:.6f} highs {theirs:.6f} {'ok' if ok else 'MISMATCH'}")
            rep = json.loads(run([tool, "solve", "--c", "4", "--seed", "3", "--variant", variant, "--mode", mode]))
            theirs = highs_value(path, relax=False)
            if variant == "mcbar":
                ok = rep["status"] == "Optimal" and close(theirs, rep["value"])
            else:
                ok = rep["status"] == "Optimal" and theirs <= rep["value"] + TOL * max(1.0, rep["value"])
            failures += not ok
            print(f"{variant} {mode} integer: built-in {rep['value']:.6f} highs {theirs:.6f} "
                  f"{'ok' if ok else 'MISMATCH'}")
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
