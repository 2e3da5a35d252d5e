import pytest

from omfiber.homology import homology, interval_is_sphere, os_betti
from omfiber.salvetti import antipodal_map, maximal_cell_ideal_iso, salvetti_poset
from omfiber.signs import sign_leq, zero_set


def f_vector_oracle(om):
    """f_d = sum over covectors of corank d of the number of topes above them."""
    out = [0] * (om.rank + 1)
    for cov in om.covectors:
        n_above = sum(1 for t in om.topes if sign_leq(cov, t))
        # corank of a covector equals the rank of its zero flat
        out[om.flat_rank(zero_set(cov))] += n_above
    return out


def test_f_vectors(pipe, suite_name):
    expected = {
        "one_line": [2, 2],
        "xy(x-y)": [6, 12, 6],
        "B2": [4, 8, 4],
        "B3": [8, 24, 24, 8],
        "xyz(x+y)(y+z)": [18, 56, 56, 18],
    }[suite_name]
    assert pipe.salvetti.f_vector() == expected
    assert f_vector_oracle(pipe.om) == expected


def test_grading_is_height(pipe):
    sal = pipe.salvetti
    assert all(sal.poset.height(i) == sal.dimension(i) for i in range(len(sal.cells)))


def test_maximal_cell_ideals(pipe):
    for t in range(len(pipe.om.topes)):
        fmap = maximal_cell_ideal_iso(pipe.salvetti, t)
        assert fmap.is_order_preserving()


def test_antipodal_map_is_an_automorphism(pipe):
    sal = pipe.salvetti
    perm = antipodal_map(sal)
    assert sorted(perm) == list(range(len(perm)))
    assert all(perm[perm[i]] == i for i in range(len(perm)))
    assert all(sal.poset.leq(perm[a], perm[b]) for a, b in sal.poset.cover_pairs())


def test_cw_intervals(pipe):
    p = pipe.salvetti.poset
    assert all(interval_is_sphere(p, i) for i in range(len(p)))


@pytest.mark.parametrize("name", ["one_line", "xy(x-y)", "B2"])
def test_homology_matches_complement(name):
    from conftest import suite_pipeline

    pipe = suite_pipeline(name)
    h = homology(pipe.salvetti.poset)
    assert h.betti == os_betti(pipe.om.geometric_lattice).betti
    assert h.torsion == []


def test_hexagon_labels(hexagon):
    sal = hexagon.salvetti
    assert sal.label(sal.maximal_cell(0)) == "(000,+++)"
    vertices = [sal.label(i) for i in range(len(sal.cells)) if sal.dimension(i) == 0]
    assert vertices == ["(+++,+++)", "(++-,++-)", "(+-+,+-+)", "(-+-,-+-)", "(--+,--+)", "(---,---)"]
