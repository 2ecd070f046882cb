"""The ultrametric on sectors of the 21-chamber triangle quotient.

Germs of sectors are enumerated on truncations of the dominant cone; the
distance theta^k between two germs records the smallest coweight norm at
which the connected agreement region around the base vertex stops.  The
demo shows the ball structure, the direction formula, and how the shift
expands distances.
"""

from fractions import Fraction

from weylflow import fixtures
from weylflow.rootdata import Coweight
from weylflow.sectors import SectorSpace

system = fixtures.load_fixture("a2q2")
space = SectorSpace(system)

for n in (1, 2, 3):
    print(f"radius-{n} germs: {len(space.table(n))}")

table = space.table(2)
g0 = table.germs[0]
print("\na germ is a rotation plus chamber images per truncation alcove:")
print(f"  sigma #{g0.sigma_index}, chambers {g0.chambers}")

theta = Fraction(1, 2)
res, val = space.distance(table.germs[0], table.germs[1])
print(f"\ndistance(germ0, germ1): k = {res.k}, d = {val}")
print(f"  directional values  k_1 = {res.k_directional[0]}, k_2 = {res.k_directional[1]}")
print(f"  agreement region: {len(res.agreeing_region)} faces of the truncation")

# balls of radius theta^k are the fibers of restriction to smaller truncations
k = table.k_matrix()
import numpy as np

for m in (0, 1, 2):
    classes = len(set(table.restriction_map(m).tolist()))
    pairs = int(np.sum(k > m))
    print(f"germ pairs with k > {m}: {pairs}  (= pairs inside the {classes} radius-{m} classes)")

# the strong-dominance inequality: shifting by w1 + w2 divides distances by theta
mu = Coweight((1, 1))
gate = table.region_classes(mu)
smap = space.shift_map(2, mu)
shifted_k = space.table(0).k_matrix()[np.ix_(smap, smap)]
same = gate[:, None] == gate[None, :]
holds = np.all(k[same] >= shifted_k[same] + 1)
print("\nkey inequality d <= theta * d(shifted pair) on every gated pair:", bool(holds))
