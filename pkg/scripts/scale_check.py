"""Generate the large synthetic corpus and time `grantimpact impact` on it.

    python scripts/scale_check.py /tmp/scale --budget 60

Runs the CLI in a fresh interpreter so import and load time are counted.
Exits non-zero when the run fails or exceeds the budget.
"""

import argparse
import subprocess
import sys
import time
from pathlib import Path

from grantimpact.synthetic import scale_dataset, write_dataset


def generate(out_dir, n_pubs, n_researchers, seed):
    t0 = time.perf_counter()
    paths = write_dataset(out_dir, *scale_dataset(n_pubs=n_pubs, n_researchers=n_researchers, seed=seed))
    return paths, time.perf_counter() - t0


def time_impact(paths, report_dir):
    cmd = [sys.executable, "-m", "grantimpact", "impact", "--pubs", str(paths["pubs"]),
           "--projects", str(paths["projects"]), "--orgs", str(paths["orgs"]), "--out", str(report_dir)]
    t0 = time.perf_counter()
    proc = subprocess.run(cmd, capture_output=True, text=True)
    return proc, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("out_dir", type=Path)
    ap.add_argument("--pubs", type=int, default=60_000)
    ap.add_argument("--researchers", type=int, default=40_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--budget", type=float, default=60.0, help="seconds allowed for impact")
    args = ap.parse_args()

    paths, gen_s = generate(args.out_dir / "data", args.pubs, args.researchers, args.seed)
    print(f"generated {args.pubs} publications / {args.researchers} researchers in {gen_s:.1f}s")
    proc, run_s = time_impact(paths, args.out_dir / "reports")
    if proc.returncode != 0:
        print(proc.stderr, file=sys.stderr)
        sys.exit(proc.returncode)
    verdict = "PASS" if run_s < args.budget else "FAIL"
    print(f"{verdict} impact finished in {run_s:.1f}s (budget {args.budget:.0f}s)")
    sys.exit(0 if verdict == "PASS" else 1)


if __name__ == "__main__":
    main()
