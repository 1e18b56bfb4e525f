#!/usr/bin/env python3
"""Reproducible comparison reports: the full exact-vs-estimate harness.

Each report pairs exact sieve counts with estimates and their error
envelopes over a fixed grid and records the fitted constant (the largest
observed |exact - estimate| / envelope).  Reports carry seeds and the
package version but no timestamps: rerunning this script reproduces every
byte.  Pass a directory argument to also write the report JSON files.
"""

import sys
from pathlib import Path

from smoothdiv import build_sieve
from smoothdiv.harness import run_eta_desk, run_lemma_grids, run_theorem1_grid

out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else None
sieve = build_sieve(10**7)
print("sieve built to 1e7\n")

report = run_theorem1_grid(sieve=sieve)
print(report.summary_table())
if out_dir:
    report.save(out_dir / f"{report.experiment_id}.json")

for report in run_lemma_grids(sieve=sieve):
    print()
    print(report.summary_table())
    if out_dir:
        report.save(out_dir / f"{report.experiment_id}.json")

print()
report = run_eta_desk(sieve=sieve, samples=10**5, seed=7)
print(report.summary_table())
if out_dir:
    report.save(out_dir / f"{report.experiment_id}.json")
    print(f"\nreports written to {out_dir}")
