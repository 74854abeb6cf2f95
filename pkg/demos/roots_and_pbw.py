"""Root systems from the Weyl groupoid, and PBW dimensions from the pairing."""
from gqg.algebra import get_algebra
from gqg.cli import PRESETS, parse_job
from gqg.groupoid import enumerate_roots, explore_groupoid, root_multisets
from gqg.lattice import Bicharacter
from gqg.scalars import Field

for name in sorted(PRESETS):
    chi = parse_job({"command": "roots", "preset": name}).chi
    rsd = enumerate_roots(chi)
    print(f"{name:11s} theta={rsd.theta} roots={rsd.positive_roots} word={[i + 1 for i in rsd.longest_word]}")

# A super-type object: q_11 = -1, so reflecting at 1 moves to a different object.
f = Field.rational()
tt = f.gen
chi = Bicharacter([[f(-1), tt ** -1], [tt ** -1, tt ** 2]], f)
atlas = explore_groupoid(chi)
print("super A(1|0): objects", len(atlas.objects), "cartan", atlas.cartan)

# dim U+_beta read off the Gram rank agrees with counting root multisets.
chi = parse_job({"command": "roots", "preset": "A2-zeta3"}).chi
alg, rsd = get_algebra(chi), enumerate_roots(chi)
for beta in [(1, 1), (2, 1), (2, 2), (3, 3)]:
    print(beta, "dim", alg.dim(beta), "multisets", len(root_multisets(rsd, chi, beta)))
