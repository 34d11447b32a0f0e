"""Reduce a positive unimodular Hermitian form to the identity, step by step."""

import random

from weilbounds.hermitian import HermMat2, example_matrix, random_unimodular, reduce

A = example_matrix()
r = reduce(A)
print("start:", A)
for step in r.steps:
    print("  ", step)
print("result:", r.result)
print("transform:", r.U)

rng = random.Random(1)
C = random_unimodular(rng, length=6, size=3)
B = HermMat2.from_matrix(C.star() * C)
print("\nrandom C*C:", B, "->", reduce(B).result)
