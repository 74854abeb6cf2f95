import itertools

import pytest
from hypothesis import given, strategies as st

from gqg import lattice as lat
from gqg.groupoid import reflect
from gqg.lattice import Bicharacter, CharacterU0, EtaHom, RankMismatch, eta_shift, opposite, rho_hat
from gqg.scalars import kappa

from conftest import QT, Z3, preset_chi

A2 = preset_chi("A2-generic")
weights2 = st.tuples(st.integers(-4, 4), st.integers(-4, 4))


def test_bicharacter_values():
    t = QT.gen
    assert A2((1, 0), (0, 1)) == t ** -1
    assert A2.qq((1, 1)) == t ** 2
    assert rho_hat(A2, (2, -1)) == t ** 2
    assert opposite(A2) == A2
    b2 = preset_chi("B2-preset")
    assert b2.qq((1, 1)) == t
    assert b2.qq((1, 2)) == t ** 2


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        A2((1,), (1, 0))
    with pytest.raises(RankMismatch):
        Bicharacter([[1, 2]], QT)


def test_json_round_trip(preset):
    _, chi = preset
    assert Bicharacter.from_json(chi.to_json()) == chi


@given(weights2, weights2, weights2)
def test_bimultiplicative(a, b, c):
    assert A2(lat.add(a, b), c) == A2(a, c) * A2(b, c)
    assert A2(a, lat.add(b, c)) == A2(a, b) * A2(a, c)
    assert A2(lat.neg(a), b) * A2(a, b) == QT.one


@given(weights2, weights2)
def test_character_and_eta(a, b):
    chi = preset_chi("A2-zeta3")
    lam = CharacterU0((Z3(2), Z3.gen), (Z3(3), Z3(-1)))
    assert lam(lat.add(a, b), lat.zero(2)) == lam(a, lat.zero(2)) * lam(b, lat.zero(2))
    eta = EtaHom((Z3.gen, Z3(1)))
    assert eta(lat.add(a, b)) == eta(a) * eta(b)
    # eta_{lam mu}(beta) = eta(beta) chi(beta, mu) / chi(lam, beta)
    assert eta_shift(eta, chi, a, b, (1, 0)) == eta((1, 0)) * chi((1, 0), b) / chi(a, (1, 0))


def rho_identity(chi, i, beta):
    """chi(a_i, b)^(k-1) chi(b, a_i)^(k-1) = rho-hat^{tau_i chi}(s_i b) / rho-hat(b)."""
    step = reflect(chi, i)
    ai = lat.unit(chi.n, i)
    k = kappa(chi.qq(ai))
    e = k - 1 if k >= 2 else -1
    lhs = (chi(ai, beta) * chi(beta, ai)) ** e
    # coordinates of beta in the reflected basis
    c = list(beta)
    c[i] = -beta[i] + sum(step.cartan_row[j] * beta[j] for j in range(chi.n) if j != i)
    return lhs == rho_hat(step.target, tuple(c)) / rho_hat(chi, beta)


def test_rho_hat_identity_box(preset):
    _, chi = preset
    for i in range(chi.n):
        for beta in itertools.product(range(-5, 6), repeat=chi.n):
            assert rho_identity(chi, i, beta)
