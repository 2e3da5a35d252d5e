from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from omfiber.arrangement import SUITE, from_arrangement
from omfiber.formats import (
    FormatError,
    format_arrangement,
    format_covectors,
    format_facets,
    format_matching,
    format_poset,
    parse_arrangement,
    parse_covectors,
    parse_facets,
    parse_matching,
    parse_poset,
    sniff,
)
from omfiber.homology import Matching
from omfiber.poset import OrderComplex


def test_arrangement_with_fractions_and_comments():
    text = "# three lines\narr 2 3\n1 0\n0 1/2  # half\n1 -1\n"
    arr = parse_arrangement(text)
    assert arr.normals[1] == (Fraction(0), Fraction(1, 2))
    assert parse_arrangement(format_arrangement(arr)) == arr


@pytest.mark.parametrize(
    "text, line",
    [
        ("arr 2 2\n1 0\n1\n", 3),
        ("arr 2 1\n1 x\n", 2),
        ("arr 2 1\n1 1/0\n", 2),
        ("arrr 2 1\n1 0\n", 1),
    ],
)
def test_arrangement_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError) as info:
        parse_arrangement(text)
    assert info.value.line == line


def test_arrangement_count_mismatch():
    with pytest.raises(FormatError, match="announces"):
        parse_arrangement("arr 2 3\n1 0\n0 1\n")


def test_covector_round_trip():
    om = from_arrangement(SUITE["B2"]())
    text = format_covectors(om.covectors, om.ground_size)
    assert parse_covectors(text) == list(om.covectors)
    with pytest.raises(FormatError) as info:
        parse_covectors("om 2\n00\n+\n")
    assert info.value.line == 3
    with pytest.raises(FormatError):
        parse_covectors("om 2\n0a\n")


def test_sniff():
    assert sniff("# c\narr 1 1\n1\n") == "arr"
    assert sniff("om 1\n0\n") == "om"
    assert sniff("poset 0\n") == "poset"
    assert sniff("0 1\n") == "facets"


@pytest.mark.parametrize("name", sorted(SUITE))
def test_poset_round_trip(name):
    from conftest import suite_pipeline

    pipe = suite_pipeline(name)
    rs = pipe.rksd
    labels = [rs.label(i) for i in range(len(rs.poset))]
    text = format_poset(rs.poset, labels)
    back = parse_poset(text)
    assert list(back.labels) == labels
    assert back.cover_pairs() == rs.poset.cover_pairs()
    assert format_poset(back, labels) == text


def test_poset_errors():
    with pytest.raises(FormatError) as info:
        parse_poset("poset 2\ncover 0 5\n")
    assert info.value.line == 2
    with pytest.raises(FormatError):
        parse_poset("poset 2\ncover 0 1\ncover 1 0\n")
    with pytest.raises(FormatError):
        parse_poset("poset 1\nedge 0 0\n")


def test_facet_round_trip(hexagon):
    oc = OrderComplex(hexagon.salvetti.poset)
    text = format_facets(oc.facets)
    assert parse_facets(text) == oc.facets
    with pytest.raises(FormatError):
        parse_facets("0 0\n")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 30), st.integers(31, 60)), max_size=8, unique_by=(lambda p: p[0], lambda p: p[1])), st.sets(st.integers(61, 90)))
def test_matching_round_trip(pairs, crit):
    m = Matching(pairs)
    back, crit_back = parse_matching(format_matching(m, crit))
    assert back.pairs == m.pairs and crit_back == sorted(crit)
