"""Solve the Harish-Chandra equations on a window, then lift each solution P
to an eta-skew-central V with Sh(V) = P, degree by degree."""
from gqg import lattice as lat
from gqg.algebra import lusztig_map
from gqg.cli import parse_job
from gqg.groupoid import enumerate_roots
from gqg.hc import HCWindow, reconstruct_center, shift_conjugation_check, solve_B_eta
from gqg.lattice import EtaHom

chi = parse_job({"command": "roots", "preset": "A1-generic"}).chi
rsd = enumerate_roots(chi)
eta = EtaHom.trivial(chi.field, 1)
w = HCWindow.build(rsd, [((1,), (0,))], 1)
for s in solve_B_eta(chi, rsd, eta, w):
    sc = reconstruct_center(chi, rsd, eta, s.to_u0(chi.field, 1))
    print("P =", sc.source, "\nV =", sc.element)

chi = parse_job({"command": "roots", "preset": "A2-zeta3"}).chi
rsd = enumerate_roots(chi)
z = chi.field.gen
eta = EtaHom((z, chi.field.one))
w = HCWindow.build(rsd, [(lat.zero(2), lat.zero(2))], 1)
sols = solve_B_eta(chi, rsd, eta, w)
print(f"\nA2 at z, eta = (z, 1): window of {len(w.pairs)} pairs, {len(sols)} solutions")
for s in sols:
    sc = reconstruct_center(chi, rsd, eta, s.to_u0(chi.field, 2))
    print(f"  P with {len(sc.source.terms)} terms -> V with {len(sc.element.terms)} terms; "
          f"height bound {sc.transcript[0]['height_bound']}")

# Pushing a skew-central element through T_1 shifts its image by gamma.
T = lusztig_map(chi, 0)
src_eta = eta.pullback(T.basis_map)
src_rsd = enumerate_roots(T.source.chi)
w = HCWindow.build(src_rsd, [(lat.zero(2), lat.zero(2))], 1)
for s in solve_B_eta(T.source.chi, src_rsd, src_eta, w):
    sc = reconstruct_center(T.source.chi, src_rsd, src_eta, s.to_u0(chi.field, 2))
    print("  shift identity:", shift_conjugation_check(chi, 0, eta, sc.element))
