"""Shapovalov determinants factor over root hyperplanes; on a hyperplane the
Verma module picks up a singular vector and the rank drops by r(alpha, t)."""
import random

from gqg.cli import parse_job
from gqg.groupoid import enumerate_roots
from gqg.verma import hyperplane_character, rank_bound_check, shapovalov_det_verify, singular_vector

chi = parse_job({"command": "roots", "preset": "A2-generic"}).chi
rep = shapovalov_det_verify(chi, (1, 1))
print("A2 generic, degree (1,1):")
print("  det      =", rep["det"])
print("  factors  =", rep["factors"])
print("  holds    =", rep["holds"])

chi = parse_job({"command": "roots", "preset": "A2-zeta3"}).chi
rsd = enumerate_roots(chi)
rng = random.Random(1)
beta = rsd.positive_roots[1]
lam = hyperplane_character(chi, beta, 1, rng)
v = singular_vector(chi, rsd, 2, 1, lam)
print("A2 at z: singular vector for root", beta, "->", v.to_json())

r = rank_bound_check(chi, (2, 1), (1, 0), 1, samples=10)
print("rank bound on degree (2,1):", {k: r[k] for k in ("m", "r", "ranks", "radical_generated")})
