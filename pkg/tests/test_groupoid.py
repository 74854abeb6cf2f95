import pytest

from gqg import lattice as lat
from gqg.groupoid import (CapExceeded, cartan_entry, cartan_matrix, enumerate_roots, explore_groupoid, length,
                          rank2_mij, reflect, root_multisets)
from gqg.lattice import Bicharacter

from conftest import QT, preset_chi

THETA = {"A1-generic": 1, "A1-zeta3": 1, "A2-generic": 3, "A2-zeta3": 3, "B2-preset": 4}


def test_cartan_entries():
    assert cartan_matrix(preset_chi("A2-generic")) == [[2, -1], [-1, 2]]
    assert cartan_matrix(preset_chi("B2-preset")) == [[2, -1], [-2, 2]]
    # super type: q_ii = -1 gives N_ij = 1 whenever q_ij q_ji != 1
    t = QT.gen
    chi = Bicharacter([[QT(-1), t ** -1], [t ** -1, t ** 2]], QT)
    assert cartan_entry(chi, 0, 1) == 1
    assert cartan_entry(chi, 1, 0) == 1


def test_positive_roots(preset):
    name, chi = preset
    rsd = enumerate_roots(chi)
    assert rsd.theta == THETA[name]
    assert len(set(rsd.positive_roots)) == rsd.theta
    if name.startswith("B2"):
        assert sorted(rsd.positive_roots) == [(0, 1), (1, 0), (1, 1), (1, 2)]
    assert rsd.to_json()["longest_word"][0] == 1


def test_reflect_is_involution(preset):
    _, chi = preset
    atlas = explore_groupoid(chi)
    for obj in atlas.objects:
        for i in range(chi.n):
            step = reflect(obj, i)
            back = reflect(step.target, i)
            assert back.target == obj
            composed = [lat.apply_matrix(step.basis_map, c) for c in back.basis_map]
            assert composed == [lat.unit(chi.n, j) for j in range(chi.n)]


def test_super_a2_groupoid_has_several_objects():
    # one odd simple root: the reflection changes the object
    t = QT.gen
    chi = Bicharacter([[QT(-1), t ** -1], [t ** -1, t ** 2]], QT)
    atlas = explore_groupoid(chi)
    assert len(atlas.objects) > 1
    assert enumerate_roots(chi).theta == 3


def test_rank2_mij():
    assert rank2_mij(preset_chi("A2-generic"), 0, 1) == 3
    assert rank2_mij(preset_chi("B2-preset"), 0, 1) == 4


def test_length_of_longest_word(preset):
    _, chi = preset
    rsd = enumerate_roots(chi)
    assert length(chi, rsd.longest_word) == rsd.theta
    assert length(chi, []) == 0


def test_infinite_root_system_hits_cap():
    t = QT.gen
    affine = Bicharacter([[t ** 2, t ** -2], [t ** -2, t ** 2]], QT)
    with pytest.raises(CapExceeded):
        enumerate_roots(affine, cap=40)


def test_root_multisets_small():
    chi = preset_chi("A2-generic")
    rsd = enumerate_roots(chi)
    assert len(root_multisets(rsd, chi, (1, 1))) == 2
    assert len(root_multisets(rsd, chi, (2, 2))) == 3
    chi3 = preset_chi("A2-zeta3")
    rsd3 = enumerate_roots(chi3)
    # each root vector is nilpotent of order 3
    assert len(root_multisets(rsd3, chi3, (3, 0))) == 0
    assert len(root_multisets(rsd3, chi3, (2, 2))) == 3
    assert root_multisets(rsd, chi, (1, -1)) == []
