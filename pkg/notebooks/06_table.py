# Sufficiency of code classes, cell by cell
#
# For each non-isomorphic instance: compute the outer bound and each inner
# bound, count the instances where they agree.  (3,3) with the N+2 and N+3
# vector bounds takes several minutes; pass a store directory to reuse
# results between runs.

import sys

from mdcs.cli import ResultStore, run_pipeline, summary_line

kinds = ("scalar:2", "scalar:3", "vector:2:N+1", "vector:2:N+2",
         "vector:2:N+3", "superposition")
store = ResultStore(sys.argv[1]) if len(sys.argv) > 1 else None

for K, E in [(1, 2), (1, 3), (2, 2), (3, 2), (2, 3)]:
    print(summary_line(run_pipeline(K, E, kinds, store)))

s = run_pipeline(2, 3, ("scalar:2",), store)
for r in s["records"]:
    if not r["sufficient"]["scalar:2"]:
        print(r["instance"], "witness", r["witness"]["scalar:2"])
