import random

import pytest
from hypothesis import given, strategies as st

from gqg import lattice as lat
from gqg.algebra import U0Elem, get_algebra
from gqg.groupoid import enumerate_roots
from gqg.lattice import CharacterU0
from gqg.scalars import kappa
from gqg.verma import (HypothesisViolated, VermaVector, act, hyperplane_character, hyperplane_value,
                       irreducible_dim, lusztig_verma, rank_bound_check, shapovalov_det_verify,
                       shapovalov_matrix, shapovalov_product, singular_vector, verma_radical)

from conftest import QT, Z3, preset_chi


def ones(field, n):
    return CharacterU0(tuple(field.one for _ in range(n)), tuple(field.one for _ in range(n)))


def test_degree_one_matrix():
    chi = preset_chi("A1-generic")
    sm = shapovalov_matrix(chi, (1,))
    one = QT.one
    assert sm.entries == [[U0Elem.monomial(QT, 1, (0,), (1,), one) - U0Elem.monomial(QT, 1, (1,), (0,), one)]]


def test_rank_one_determinant_closed_form():
    # det S_{m alpha} = z * prod_{t=1}^{m} (-q^{1-t} K + L)  for q = t
    chi = preset_chi("A1-generic")
    rsd = enumerate_roots(chi)
    z, prod, mult = shapovalov_product(chi, rsd, (3,))
    t = QT.gen
    expect = U0Elem.one(QT, 1)
    for s in range(1, 4):
        expect = expect * (U0Elem.monomial(QT, 1, (1,), (0,), -t ** (1 - s)) + U0Elem.monomial(QT, 1, (0,), (1,)))
    assert prod == expect
    assert shapovalov_det_verify(chi, (3,), rsd)["holds"]


@pytest.mark.parametrize("name,h", [("A1-generic", 4), ("A1-zeta3", 4), ("A2-generic", 3), ("A2-zeta3", 3),
                                    ("B2-preset", 3)])
def test_determinant_formula(name, h):
    chi = preset_chi(name)
    rsd = enumerate_roots(chi)
    for tot in range(1, h + 1):
        for a in range(tot + 1):
            beta = (tot,) if chi.n == 1 else (a, tot - a)
            if chi.n == 1 and a:
                continue
            if get_algebra(chi).dim(beta):
                assert shapovalov_det_verify(chi, beta, rsd)["holds"]


def test_radical_rank_one_root_of_unity():
    chi = preset_chi("A1-zeta3")
    lam = CharacterU0((Z3.gen,), (Z3.one,))
    # Lambda(-K + q L) = 0 puts the singular vector in degree 2
    assert len(verma_radical(chi, lam, (1,))) == 0
    assert len(verma_radical(chi, lam, (2,))) == 1
    assert irreducible_dim(chi, lam, (2,)) == 0
    generic = CharacterU0((Z3(2),), (Z3(5),))
    assert verma_radical(chi, generic, (2,)) == []


@pytest.mark.parametrize("name", ["A1-zeta3", "A2-zeta3"])
def test_singular_vectors_all_admissible(name):
    chi = preset_chi(name)
    rsd = enumerate_roots(chi)
    rng = random.Random(3)
    done = 0
    for m, beta in enumerate(rsd.positive_roots, 1):
        for t in range(1, kappa(chi.qq(beta))):
            lam = hyperplane_character(chi, beta, t, rng)
            v = singular_vector(chi, rsd, m, t, lam)
            assert not v.is_zero()
            # the F and E prefixes cancel in degree
            assert v.degrees() == {lat.scale(t, beta)}
            done += 1
    assert done == 2 * rsd.theta


def test_singular_vector_hypotheses():
    chi = preset_chi("A2-zeta3")
    rsd = enumerate_roots(chi)
    lam = ones(Z3, 2)
    assert rsd.positive_roots[:2] == [(1, 0), (1, 1)]
    # on the (a1, 1) and (a1 + a2, 2) hyperplanes at once, so the earlier one blocks the construction
    assert hyperplane_value(chi, lam, (1, 1), 2).is_zero()
    with pytest.raises(HypothesisViolated):
        singular_vector(chi, rsd, 2, 2, lam)
    with pytest.raises(HypothesisViolated):
        singular_vector(chi, rsd, 1, 2, lam)
    g = preset_chi("A2-generic")
    with pytest.raises(HypothesisViolated):
        singular_vector(g, enumerate_roots(g), 1, 1, ones(QT, 2))


@pytest.mark.parametrize("name", ["A1-zeta3", "A2-zeta3"])
def test_lusztig_verma_map(name):
    chi = preset_chi(name)
    lam = CharacterU0(tuple(Z3(x) for x in (2, 3)[:chi.n]), tuple(Z3(x) for x in (5, 7)[:chi.n]))
    for i in range(chi.n):
        lv = lusztig_verma(chi, i, lam)
        for gamma in ([(1,), (2,)] if chi.n == 1 else [(1, 0), (0, 1), (1, 1)]):
            assert lv.check(gamma)


@pytest.mark.parametrize("beta,alpha", [((2,), (1,)), ((2, 1), (1, 0)), ((1, 1), (1, 0)), ((2, 2), (1, 1))])
def test_rank_bound(beta, alpha):
    chi = preset_chi("A1-zeta3" if len(beta) == 1 else "A2-zeta3")
    rep = rank_bound_check(chi, beta, alpha, 1, samples=6)
    assert rep["r"] >= 1
    assert max(rep["ranks"]) == rep["m"] - rep["r"]


words = st.lists(st.tuples(st.sampled_from("EF"), st.integers(0, 1)), max_size=3)


@given(words, words)
def test_action_is_a_module_action(w1, w2):
    chi = preset_chi("A2-zeta3")
    alg = get_algebra(chi)
    lam = CharacterU0((Z3(2), Z3.gen), (Z3(3), Z3(-1)))

    def build(w):
        x = alg.one()
        for kind, i in w:
            x = x * (alg.E(i) if kind == "E" else alg.F(i))
        return x

    u1, u2 = build(w1), build(w2)
    v = VermaVector.highest(alg, lam)
    v = act(alg, alg.F(0) * alg.F(1), v)
    lhs = act(alg, u1 * u2, v)
    rhs = act(alg, u1, act(alg, u2, v))
    assert (lhs + rhs.scale(-Z3.one)).is_zero()
