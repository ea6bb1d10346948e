"""
Comparison tables for the line
==============================

Sizes of the covers and WSPDs on the deterministic families, as Markdown
tables.  Every number in a table comes from a decomposition that passed
validation.
"""

from pairdecomp import DatasetSpec, run_experiment

ALGOS = ["greedy", "ck-wspd", "aprx3", "aprx3c", "exact", "partition"]

##############################################################################
# Uniform points ``1..n`` at eps = 1, then the other closed-form families.

for family in ("uniform", "squares", "cubes", "log", "logsq"):
    specs = [DatasetSpec(family, n) for n in (10, 20, 30)]
    table = run_experiment(specs, "1", ALGOS)
    print(f"### {family}\n")
    print(table.to_markdown())

##############################################################################
# Random families are seeded with splitmix64, so the table is reproducible.

table = run_experiment([DatasetSpec("normal", n, seed=7) for n in (10, 20)], "1", ALGOS)
print("### normal, seed 7\n")
print(table.to_markdown())
