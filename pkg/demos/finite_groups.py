"""Conjugation-invariant norms of small finite groups by breadth-first search.

Run with ``python demos/finite_groups.py``.
"""
from binorm.builtin import builtin_group, projective_extension
from binorm.metrics import biinvariant_norm_table, extension_norm_bound

for spec in ("dihedral:7", "dihedral:15", "sl:2:5", "sl:3:2"):
    bg = builtin_group(spec)
    table = biinvariant_norm_table(bg.generators, bg.group)
    print(f"{spec:>12}: order {bg.group.order:5d}, bi-invariant diameter {table.diameter}")

rep = extension_norm_bound(projective_extension("sl:2:3"))
print(f"SL(2,3) over its centre: diameter {rep.diameter} <= {rep.m} + {rep.kappa}")
