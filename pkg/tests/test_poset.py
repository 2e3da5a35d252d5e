import pytest
from hypothesis import given, settings, strategies as st

from omfiber.poset import OrderComplex, Poset, PosetError, PosetMap


def boolean_lattice(n):
    labels = list(range(1 << n))
    return Poset.from_relation(labels, lambda a, b: a & ~b == 0)


def chain(n):
    return Poset.from_covers(list(range(n)), [(i, i + 1) for i in range(n - 1)])


def test_from_covers_and_queries():
    # the face poset of a segment: two vertices below an edge
    p = Poset.from_covers(["a", "b", "ab"], [(0, 2), (1, 2)])
    assert p.leq(0, 2) and not p.leq(0, 1)
    assert p.minimal_elements() == [0, 1]
    assert p.maximal_elements() == [2]
    assert p.heights == (0, 0, 1)
    assert p.index("ab") == 2
    assert p.principal_ideal(2) == [0, 1, 2]
    assert p.is_graded()


def test_cycle_rejected():
    with pytest.raises(PosetError):
        Poset.from_covers([0, 1], [(0, 1), (1, 0)])


def test_non_cover_rejected():
    with pytest.raises(PosetError):
        Poset.from_covers([0, 1, 2], [(0, 1), (1, 2), (0, 2)])


def test_from_relation_checks_antisymmetry():
    with pytest.raises(PosetError):
        Poset.from_relation([0, 1], lambda a, b: True)


def test_boolean_lattice_chains():
    p = boolean_lattice(3)
    assert len(p.cover_pairs()) == 12
    assert p.count_maximal_chains() == 6
    assert len(p.maximal_chains()) == 6
    oc = OrderComplex(p)
    # the order complex of a bounded poset is a cone
    assert oc.euler_characteristic() == 1


def test_order_complex_of_chain_is_simplex():
    oc = OrderComplex(chain(4))
    assert oc.f_vector() == [4, 6, 4, 1]
    assert oc.facets == [(0, 1, 2, 3)]


def test_dual_and_induced():
    p = boolean_lattice(2)
    d = p.dual()
    assert all(p.leq(i, j) == d.leq(j, i) for i in range(4) for j in range(4))
    sub = p.induced([1, 2, 3])
    assert sub.labels == (1, 2, 3)
    assert sub.cover_pairs() == [(0, 2), (1, 2)]
    assert p.is_order_ideal([0, 1])
    assert not p.is_order_ideal([1, 3])
    assert p.order_ideal([3]) == [0, 1, 2, 3]


def test_interval_below():
    p = boolean_lattice(2)
    assert p.interval_below(3).labels == (0, 1, 2)


def test_poset_map_fibers():
    p = boolean_lattice(2)
    q = chain(3)
    f = PosetMap(p, q, [0, 1, 1, 2])
    assert f.is_order_preserving() and f.is_surjective()
    assert f.fiber_elements(1) == [0, 1, 2]
    assert f.preimage([1]) == [1, 2]
    g = PosetMap(p, q, [2, 1, 1, 0])
    assert not g.is_order_preserving()
    assert g.order_violations()


@st.composite
def random_posets(draw):
    n = draw(st.integers(1, 8))
    # random DAG on 0..n-1 with edges i -> j only for i < j
    edges = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] < e[1])))
    reach = [{i} for i in range(n)]
    for j in range(n):
        for i, jj in edges:
            if jj == j:
                reach[j] |= reach[i]
    return Poset.from_relation(list(range(n)), lambda a, b: a in reach[b])


@settings(max_examples=80, deadline=None)
@given(random_posets())
def test_covers_rebuild_the_order(p):
    q = Poset.from_covers(p.labels, p.cover_pairs())
    assert all(p.leq(i, j) == q.leq(i, j) for i in range(len(p)) for j in range(len(p)))


@settings(max_examples=80, deadline=None)
@given(random_posets())
def test_chains_are_chains_and_linear_extension(p):
    for c in p.chains():
        assert all(p.leq(a, b) and a != b for a, b in zip(c, c[1:]))
    order = p.linear_extension()
    pos = {x: k for k, x in enumerate(order)}
    assert all(pos[a] < pos[b] for a, b in p.cover_pairs())
    assert p.count_maximal_chains() == len(p.maximal_chains())
