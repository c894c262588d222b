"""Upper and lower bounds on the conjugation-invariant norm in the free group F(x, y).

Run with ``python demos/free_group_bounds.py``.
"""
from binorm.groups import FreeWord
from binorm.metrics import free_binorm_upper
from binorm.quasimorphisms import BrooksQM, binorm_lower_bound, homogenize, power

S = [FreeWord.parse(c) for c in "xyXY"]

# y^n x y^-n is a single conjugate of a generator, however long the word.
for n in (1, 4, 8):
    g = power(FreeWord.parse("y"), n) * FreeWord.parse("x") * power(FreeWord.parse("Y"), n)
    print(f"{g.to_string():>18}: word length {len(g):2d}, bi-invariant norm <= {free_binorm_upper(g, S, n, 1)}")

# Counting quasimorphisms push the norm of commutator powers up linearly.
q = BrooksQM.parse("xy", defect_bound=3)
for n in (1, 10, 100):
    g = power(FreeWord.parse("xyXY"), n)
    rep = binorm_lower_bound(q, g, S)
    print(f"[x,y]^{n:<3}: norm >= {rep.bound}  (uses defect {rep.D_used})")

value, err = homogenize(q, FreeWord.parse("xyXY"), N=256)
print(f"homogenized count of xy on [x,y]: {value} +/- {err}")
