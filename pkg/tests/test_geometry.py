from fractions import Fraction

import numpy as np
import pytest

from dyadicspin.geometry import (
    OPEN,
    CouplingModel,
    SiteDistance,
    archimedean_distance,
    coupling,
    coupling_table,
    graph_diameter_bound,
    graph_distance,
    graph_distances_from,
    interaction_matrix,
    monna_map,
    monna_permutation,
    site_distance,
    tree_distance,
    two_adic_norm,
    two_adic_valuation,
)


def test_model_validation():
    with pytest.raises(ValueError):
        CouplingModel(n_sites=12)  # periodic needs a power of 2
    with pytest.raises(ValueError):
        CouplingModel(n_sites=2)
    with pytest.raises(ValueError):
        CouplingModel(n_sites=8, j0=0.0)
    with pytest.raises(ValueError):
        CouplingModel(n_sites=8, boundary="moebius")
    CouplingModel(n_sites=12, boundary=OPEN)  # fine when open


def test_coupling_examples():
    m = CouplingModel(n_sites=8, s=0.0)
    assert coupling(m, 0, 1) == 1.0
    assert coupling(m, 0, 2) == 1.0
    assert coupling(m, 0, 3) == 0.0  # 3 is not a power of two
    assert coupling(m, 0, 0) == 0.0
    # s = 2 rescales so the longest bond is the unit one
    m2 = CouplingModel(n_sites=8, s=2.0)
    assert coupling(m2, 0, 4) == 1.0
    assert coupling(m2, 0, 1) == pytest.approx(1.0 / 16.0)
    assert coupling(m2, 0, 6) == pytest.approx(0.25)  # minimal image distance 2


def test_max_coupling_is_j0_exactly():
    for n in (8, 16, 64, 1024):
        for s in np.linspace(-3.0, 3.0, 25):
            m = CouplingModel(n_sites=n, s=float(s), j0=0.7)
            assert max(coupling_table(m).values()) == 0.7


def test_max_coupling_open_boundary():
    # largest realizable power-of-two separation sets the scale, also when
    # n_sites is not a power of two
    for n in (12, 14, 16):
        m = CouplingModel(n_sites=n, s=1.5, boundary=OPEN)
        assert max(coupling_table(m).values()) == 1.0


def test_coupling_symmetric_translation_invariant():
    m = CouplingModel(n_sites=32, s=-1.0)
    rng = np.random.default_rng(7)
    for _ in range(200):
        i, j, t = rng.integers(0, 32, size=3)
        assert coupling(m, int(i), int(j)) == coupling(m, int(j), int(i))
        assert coupling(m, int(i), int(j)) == pytest.approx(
            coupling(m, int((i + t) % 32), int((j + t) % 32))
        )


def test_interaction_matrix_matches_coupling_off_antipode():
    m = CouplingModel(n_sites=16, s=0.5)
    w = interaction_matrix(m)
    assert np.array_equal(w, w.T)
    assert np.all(np.diag(w) == 0)
    for i in range(16):
        for j in range(16):
            d = archimedean_distance(m, i, j)
            expect = coupling(m, i, j)
            if d == 8:
                expect *= 2.0  # both displacement images land on this bond
            assert w[i, j] == pytest.approx(expect)


def test_interaction_matrix_open_has_no_image_doubling():
    m = CouplingModel(n_sites=12, s=0.5, boundary=OPEN)
    w = interaction_matrix(m)
    assert np.array_equal(w, w.T)
    for i in range(12):
        for j in range(12):
            assert w[i, j] == pytest.approx(coupling(m, i, j))


def test_monna_map_values():
    assert monna_map(8, 0) == 0
    assert monna_map(8, 1) == 4
    assert monna_map(8, 3) == 6
    assert monna_map(8, 7) == 7


def test_monna_map_involution_and_bijection():
    for n in (4, 8, 64, 256):
        perm = monna_permutation(n)
        assert sorted(perm) == list(range(n))
        assert all(perm[perm[i]] == i for i in range(n))


def test_two_adic_norm_values():
    assert two_adic_norm(8, 0, 1) == Fraction(1)
    assert two_adic_norm(8, 0, 4) == Fraction(1, 4)
    assert two_adic_norm(8, 0, 6) == Fraction(1, 2)
    assert two_adic_norm(16, 3, 11) == Fraction(1, 8)
    with pytest.raises(ValueError):
        two_adic_norm(8, 5, 5)


def test_two_adic_valuation():
    assert two_adic_valuation(1) == 0
    assert two_adic_valuation(12) == 2
    assert two_adic_valuation(-8) == 3


def test_ultrametric_inequality():
    # |x+y|_2 <= max(|x|_2, |y|_2), checked on random site triples
    n = 64
    rng = np.random.default_rng(21)
    for _ in range(1000):
        i, j, k = rng.integers(0, n, size=3)
        if i == j or j == k or i == k:
            continue
        dij = two_adic_norm(n, int(i), int(j))
        djk = two_adic_norm(n, int(j), int(k))
        dik = two_adic_norm(n, int(i), int(k))
        assert dik <= max(dij, djk)


def test_tree_distance():
    # adjacent sites sit in different deepest subtrees: 2 * depth apart
    assert tree_distance(8, 0, 1) == 6
    assert tree_distance(8, 0, 4) == 2
    assert tree_distance(8, 0, 0) == 0
    assert tree_distance(8, 2, 6) == 2
    # monotone decreasing with the 2-adic valuation of the separation
    n = 128
    for v in range(1, 7):
        assert tree_distance(n, 0, 2 ** v) < tree_distance(n, 0, 2 ** (v - 1))


def test_tree_distance_norm_relation():
    n = 64
    for j in range(1, n):
        norm = two_adic_norm(n, 0, j)
        assert norm == Fraction(2 ** (tree_distance(n, 0, j) // 2), n)


def test_graph_distance_small():
    m = CouplingModel(n_sites=8)
    assert graph_distance(m, 0, 0) == 0
    assert graph_distance(m, 0, 1) == 1
    assert graph_distance(m, 0, 4) == 1
    assert graph_distance(m, 0, 7) == 1  # minimal image 1
    assert graph_distance(m, 0, 3) == 2


def test_graph_distances_bounded():
    # any pair is reachable within ceil(log2(N)/2) hops
    for n in (8, 16, 32, 64, 128):
        m = CouplingModel(n_sites=n)
        dist = graph_distances_from(m, 0)
        assert dist.min() == 0
        assert dist.max() <= graph_diameter_bound(n)


def test_graph_distance_translation_invariant():
    m = CouplingModel(n_sites=32)
    d0 = graph_distances_from(m, 0)
    d5 = graph_distances_from(m, 5)
    assert np.array_equal(d0, np.roll(d5, -5))


def test_graph_distance_open_chain():
    m = CouplingModel(n_sites=12, boundary=OPEN)
    dist = graph_distances_from(m, 0)
    assert dist[8] == 1
    assert dist[11] == 3  # 0 -> 8 -> 10 -> 11; no two-hop route stays in range
    assert np.all(dist >= 0)  # connected


def test_site_distance_bundle():
    m = CouplingModel(n_sites=8)
    sd = site_distance(m, 0, 6)
    assert sd == SiteDistance(
        archimedean=2, two_adic=Fraction(1, 2), tree=4, graph=1
    )
