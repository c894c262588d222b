"""Write a matrix of SL(3, Z) as a product of conjugates of root elements and check it.

Run with ``python demos/certify_matrix.py``.
"""
import random

from binorm.certificates import binorm_certificate, modular_certificate, reduce_certificate
from binorm.builtin import builtin_group
from binorm.chevalley import elementary
from binorm.groups import Matrix
from binorm.rings import ZZ
from binorm.verify import verify_certificate

A = Matrix([[7, 3, 2], [2, 1, 1], [3, 1, 1]], ZZ)
cert = binorm_certificate(A)
report = verify_certificate(cert)
print("matrix:", [[str(x) for x in row] for row in A.rows])
print(f"certificate length {cert.length}, verified: {report.ok}")
print("factorization:", cert.note)

# Random products of elementary matrices: the Euclidean part of the word grows with the entries.
rng = random.Random(0)
positions = [(i, j) for i in range(1, 4) for j in range(1, 4) if i != j]
for scale in (10**2, 10**6, 10**12):
    B = Matrix.identity_matrix(3)
    for _ in range(30):
        B = B * elementary("A", 3, rng.choice(positions), rng.randint(-scale, scale))
    c = binorm_certificate(B)
    print(f"factor parameters up to {scale:>14}: length {c.length:4d}, verified {verify_certificate(c).ok}")

# In a finite quotient the length stays small.
G = builtin_group("sl:3:5").group
g = G.element(rng.randrange(G.order))
short = reduce_certificate(modular_certificate(g), 5)
print(f"SL(3, Z/5) element: certificate length {short.length}, verified {verify_certificate(short).ok}")
