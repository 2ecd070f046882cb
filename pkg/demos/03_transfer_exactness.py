"""Exact rational structure of the transfer family on the triangle quotient.

Matrices are integer counts over a common denominator, so the semigroup
law, commutation, and the seminorm inequality can be checked with no
floating point at all.
"""

from fractions import Fraction

import numpy as np

from weylflow import fixtures, transfer
from weylflow.rootdata import Coweight
from weylflow.sectors import SectorSpace

space = SectorSpace(fixtures.load_fixture("a2q2"))

t1 = transfer.transfer_matrix(space, Coweight((1, 0)), 1)
t2 = transfer.transfer_matrix(space, Coweight((0, 1)), 1)
t12 = transfer.transfer_matrix(space, Coweight((1, 1)), 1)

print(f"dim F_1 = {t1.dim};  M_(1,0) = {t1.m_mu}, M_(0,1) = {t2.m_mu}, M_(1,1) = {t12.m_mu}")
print("semigroup law as integer matrices:",
      np.array_equal(t1.counts @ t2.counts, t12.counts))
print("generators commute exactly:",
      np.array_equal(t1.counts @ t2.counts, t2.counts @ t1.counts))

ones = [Fraction(1)] * t1.dim
print("the constant function is fixed:", transfer.apply(t1, ones) == ones)

theta = Fraction(1, 2)
rep = transfer.check_lasota_yorke(space, Coweight((1, 1)), 2, theta)
print(f"\nseminorm contraction on all {rep.checked} indicators of F_2 at theta = {theta}:")
print("  passed:", rep.passed, "  smallest slack:", rep.max_slack)

inv = transfer.check_fn_invariance(space, Coweight((1, 1)), 2)
print("matrices consistent across radii:", inv.compression_exact)
print("strongly dominant shift maps F_2 into F_1:", inv.maps_into_smaller)

# projection to a coarser resolution never increases the seminorm
import random

rng = random.Random(0)
phi = [Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in range(len(space.table(2)))]
proj = transfer.lift_to(space, transfer.pi_projection(space, phi, 2, 1), 1, 2)
a = transfer.lipschitz_seminorm(space, proj, 2, theta)
b = transfer.lipschitz_seminorm(space, phi, 2, theta)
print(f"\n|projection|_theta = {a}  <=  |phi|_theta = {b}")
