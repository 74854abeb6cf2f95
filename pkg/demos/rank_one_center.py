"""Rank one: the basic central element, the family C(lam, mu; k), and the full
skew center on a finite window compared against the spanning sets."""
from gqg.rank1 import RankOneCtx, central_candidate, classify_center, is_skew_central, solve_center, spanning_dimension
from gqg.scalars import Field

t = Field.rational().gen
z = Field.cyclotomic(3).gen

ctx = RankOneCtx(t, t.field.one)
c, central = central_candidate(ctx, 0, 1, 1)
print("C(0, a; 1) =", c.to_uelement(ctx))
print("central:", central and is_skew_central(ctx, c))

# Not every member of the family is central; the flag predicts which.
for lam, mu, k in [(0, 2, 2), (0, 1, 2), (1, 1, 1)]:
    c, flag = central_candidate(ctx, lam, mu, k)
    print(f"C({lam}, {mu}; {k}) predicted {flag}, commutes {is_skew_central(ctx, c)}")

# At a cube root of unity the Z'' family shows up, even for eta off the q-powers.
for eta in (z.field.one, z, z.field(2)):
    ctx = RankOneCtx(z, eta)
    cl = classify_center(ctx, 4, 4)
    n1, n2 = len(cl["Z'"]), len(cl["Z''"])
    print(f"q = z, eta = {eta}: |Z'| = {n1}, |Z''| = {n2},",
          f"solver dim {len(solve_center(ctx, 4, 4))}, spanning dim {spanning_dimension(ctx, 4, 4)}")
