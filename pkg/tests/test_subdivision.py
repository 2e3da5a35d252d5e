from omfiber.homology import homology
from omfiber.signs import compose, negate, separating_set, sign_leq, tope_sign
from omfiber.subdivision import (
    BAND,
    SLICE,
    CoveringMap,
    rank_subdivide_dual,
    verify_subdivision,
)


def comprehension_oracle(om, base):
    """rk_B sd L^∨ as a set of frozensets of tope sign vectors, built from the definition."""
    B = om.topes[base]
    rk = lambda t: len(separating_set(B, t))
    cells = set()
    for sigma in om.covectors:
        T = [t for t in om.topes if sign_leq(sigma, t)]
        ranks = {rk(t) for t in T}
        top = rk(compose(sigma, negate(B)))
        for k in ranks:
            cells.add(frozenset(t for t in T if rk(t) == k))
            if k != top:
                cells.add(frozenset(t for t in T if rk(t) in (k, k + 1)))
    return cells


def test_hexagon_counts(hexagon):
    for b in range(6):
        rd = rank_subdivide_dual(hexagon.om, b)
        assert rd.f_vector() == [6, 8, 3]
        assert rd.euler() == 1


def test_rank_one_is_unchanged():
    from conftest import suite_pipeline

    om = suite_pipeline("one_line").om
    rd = rank_subdivide_dual(om, 0)
    assert len(rd.cells) == 3 and rd.f_vector() == [2, 1]
    assert len(suite_pipeline("one_line").rksd.cells) == 4


def test_cells_match_definition(pipe):
    om = pipe.om
    for b in range(len(om.topes)):
        rd = rank_subdivide_dual(om, b)
        got = {frozenset(om.topes[t] for t in c.topes) for c in rd.cells}
        assert got == comprehension_oracle(om, b)


def test_slices_have_constant_sign(pipe):
    om = pipe.om
    for c in pipe.rksd.cells:
        R = om.topes[c.tope]
        lower = [om.topes[t] for t in c.cell.topes if len(separating_set(R, om.topes[t])) == c.cell.k]
        assert {tope_sign(t) for t in lower} == {tope_sign(R) * (-1) ** c.cell.k}
        if c.cell.kind == SLICE:
            assert len(lower) == len(c.cell.topes)


def test_covering_map_is_minimal(pipe):
    om = pipe.om
    cover = CoveringMap(om)
    rd = rank_subdivide_dual(om, 0, cover)
    for i, c in enumerate(rd.cells):
        p = rd.p(i)
        for s, ts in enumerate(om.tope_sets):
            if c.bits & ~ts == 0:
                assert om.tope_sets[p] & ~ts == 0
                assert om.dual_poset.leq(p, s)


def test_every_base_passes_checks(pipe):
    om = pipe.om
    for b in range(len(om.topes)):
        rep = verify_subdivision(om, b)
        assert rep.ok, rep.checks


def test_base_accepts_sign_string(hexagon):
    rd = rank_subdivide_dual(hexagon.om, (1, -1, 1))
    assert hexagon.om.topes[rd.base] == (1, -1, 1)


def test_rksd_counts(pipe, suite_name):
    expected = {
        "one_line": [2, 2],
        "xy(x-y)": [6, 24, 18],
        "B2": [4, 12, 8],
        "B3": [8, 48, 64, 24],
        "xyz(x+y)(y+z)": [18, 136, 208, 90],
    }[suite_name]
    assert pipe.rksd.f_vector() == expected
    assert pipe.rksd.euler() == 0


def test_rksd_projection(pipe):
    rs = pipe.rksd
    assert rs.p.is_order_preserving() and rs.p.is_surjective()
    for i, c in enumerate(rs.cells):
        s = rs.salvetti.cells[rs.p(i)]
        assert s.tope == c.tope
        assert c.cell.bits & ~pipe.om.tope_sets[s.covector] == 0


def test_rksd_below_maximal_cells_is_rank_subdivision(pipe):
    """The cells under the bands of (0, T) form a copy of rk_T sd L^∨."""
    rs, om = pipe.rksd, pipe.om
    for t in range(len(om.topes)):
        tops = rs.maximal_cells(t)
        ideal = sorted({j for i in tops for j in rs.poset.principal_ideal(i)})
        sub = rs.poset.induced(ideal)
        rd = rank_subdivide_dual(om, t)
        bits = [rs.cells[j].cell.bits for j in ideal]
        assert sorted(bits) == sorted(c.bits for c in rd.cells)
        pos = {c.bits: k for k, c in enumerate(rd.cells)}
        for a, b in sub.cover_pairs():
            assert rd.poset.leq(pos[bits[a]], pos[bits[b]])
        assert len(sub.cover_pairs()) == len(rd.poset.cover_pairs())


def test_b2_rksd_is_a_torus():
    from conftest import suite_pipeline

    h = homology(suite_pipeline("B2").rksd.poset)
    assert h.betti == [1, 2, 1] and h.torsion == []


def test_band_and_slice_kinds(hexagon):
    kinds = {c.cell.kind for c in hexagon.rksd.cells}
    assert kinds == {SLICE, BAND}


def test_dropped_pairs_reappear_at_the_composed_tope(pipe):
    """A raw pair (𝔞, T) with p(𝔞)∘T != T is not reflexive; its tope set shows up at p(𝔞)∘T."""
    from omfiber.subdivision import subdivide_covector, tope_ranks

    om, rs = pipe.om, pipe.rksd
    present = {(c.cell.bits, c.tope) for c in rs.cells}
    ranks = [tope_ranks(om, t) for t in range(len(om.topes))]
    dropped = 0
    for s in rs.salvetti.cells:
        for rc in subdivide_covector(om, s.covector, s.tope, ranks[s.tope]):
            p = rs.covering(rc.bits)
            home = om.tope_index[compose(om.covectors[p], om.topes[s.tope])]
            assert (rc.bits, home) in present
            dropped += home != s.tope
    if om.rank >= 2:
        assert dropped > 0
