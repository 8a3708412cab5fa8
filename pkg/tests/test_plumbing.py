import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from hfsurgery.brieskorn import BrieskornParams, delta_sequence
from hfsurgery.delta import reduce, tau
from hfsurgery.errors import NotNegativeDefiniteError, SearchOverflowError
from hfsurgery.plumbing import (
    CharVector,
    PlumbingGraph,
    box_search,
    box_size,
    canonical_square,
    continued_fraction,
    d_invariant,
    descent_search,
    graph_to_dot,
    max_char_square,
    plumbing_graph,
    tree_search,
    wide_box_search,
)

from oracles import cf_value, max_char_square_brute

SMALL = [(2, 3, 5), (2, 3, 7), (2, 3, 11), (2, 3, 13), (2, 5, 7), (3, 4, 5), (2, 5, 9), (3, 5, 7)]


def test_family_graph_shape():
    for p in range(3, 15):
        g = plumbing_graph(BrieskornParams.family(p))
        assert len(g) == 4 * p
        assert g.weights[0] == -2
        assert sorted(g.weights[1:]) == [-p] + [-2] * (4 * p - 2)
        assert g.is_negative_definite()
        assert abs(g.determinant()) == 1


def test_e8():
    g = plumbing_graph(BrieskornParams(2, 3, 5))
    assert len(g) == 8
    assert all(w == -2 for w in g.weights)
    assert g.determinant() == 1
    assert d_invariant(g) == 2
    assert CharVector((0,) * 8).is_characteristic(g)


def test_continued_fraction_examples():
    assert continued_fraction(7, 1) == [7]
    for p in range(3, 12):
        assert continued_fraction(2 * p - 1, 2 * p - 2) == [2] * (2 * p - 2)
        assert continued_fraction(2 * p + 1, 2 * p) == [2] * (2 * p)
    assert continued_fraction(7, 5) == [2, 2, 3]
    with pytest.raises(ValueError):
        continued_fraction(6, 4)
    with pytest.raises(ValueError):
        continued_fraction(3, 5)


@given(st.integers(2, 400), st.integers(1, 399))
def test_continued_fraction_back_substitution(m, n):
    if not (m > n and gcd(m, n) == 1):
        return
    cf = continued_fraction(m, n)
    assert all(a >= 2 for a in cf)
    assert cf_value(cf) == Fraction(m, n)


@pytest.mark.parametrize("t", [t for t in SMALL if box_size(plumbing_graph(BrieskornParams(*t))) <= 1000])
def test_box_search_matches_exact_brute_force(t):
    g = plumbing_graph(BrieskornParams(*t))
    best, k = box_search(g)
    assert best == max_char_square_brute(g.weights, [list(e) for e in g.edges])
    assert k.is_characteristic(g) and k.square(g) == best


@pytest.mark.parametrize("t", [(2, 3, 5), (2, 3, 7), (2, 3, 13), (3, 4, 5)])
def test_box_agrees_with_widened_brute_force(t):
    g = plumbing_graph(BrieskornParams(*t))
    assert box_search(g)[0] == max_char_square_brute(g.weights, [list(e) for e in g.edges], margin=2)


@pytest.mark.parametrize("t", [(2, 3, 5), (2, 3, 7), (2, 5, 7), (3, 4, 5), (2, 3, 11), (2, 3, 13)])
def test_box_agrees_with_wide_box(t):
    g = plumbing_graph(BrieskornParams(*t))
    assert len(g) <= 10
    assert box_search(g)[0] == wide_box_search(g, margin=6)[0]


@pytest.mark.parametrize("t", SMALL)
def test_searches_agree(t):
    g = plumbing_graph(BrieskornParams(*t))
    exact = box_search(g)[0]
    assert tree_search(g)[0] == exact
    assert descent_search(g)[0] <= exact


def test_known_values():
    # the Poincare sphere and Sigma(2,3,7) bound these plumbings
    assert d_invariant(plumbing_graph(BrieskornParams(2, 3, 5))) == 2
    assert d_invariant(plumbing_graph(BrieskornParams(2, 3, 7))) == 0
    for n in range(1, 6):
        assert d_invariant(plumbing_graph(BrieskornParams(2, 3, 6 * n - 1))) == 2
        assert d_invariant(plumbing_graph(BrieskornParams(2, 3, 6 * n + 1))) == 0


@pytest.mark.parametrize("p", range(3, 16))
def test_family_d(p):
    g = plumbing_graph(BrieskornParams.family(p))
    assert d_invariant(g) == (p if p % 2 == 0 else p - 1)


def _triples(n):
    rng = random.Random(11)
    out = []
    while len(out) < n:
        p = rng.randint(2, 7)
        q = rng.randint(p + 1, 15)
        r = rng.randint(q + 1, 31)
        if gcd(p, q) == gcd(p, r) == gcd(q, r) == 1 and (p, q, r) not in out:
            out.append((p, q, r))
    return out


@pytest.mark.parametrize("t", _triples(40))
def test_tree_search_matches_canonical_class_formula(t):
    params = BrieskornParams(*t)
    g = plumbing_graph(params)
    low = tau(reduce(delta_sequence(params)).sequence).minimum
    expect = (canonical_square(g) + len(g)) // 4 - 2 * low
    assert d_invariant(g) == expect


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(SMALL), st.randoms(use_true_random=False))
def test_relabeling_invariance(t, rnd):
    g = plumbing_graph(BrieskornParams(*t))
    perm = list(range(len(g)))
    rnd.shuffle(perm)
    h = g.relabeled(perm)
    assert d_invariant(h) == d_invariant(g)
    assert h.determinant() == g.determinant()


def test_zero_is_characteristic_iff_even():
    for t in SMALL:
        g = plumbing_graph(BrieskornParams(*t))
        assert CharVector((0,) * len(g)).is_characteristic(g) == all(w % 2 == 0 for w in g.weights)


def test_errors():
    with pytest.raises(NotNegativeDefiniteError):
        d_invariant(PlumbingGraph((-1, -1), ((0, 1),)))
    with pytest.raises(ValueError):
        PlumbingGraph((-2, -2, -2), ((0, 1),))
    with pytest.raises(ValueError):
        PlumbingGraph((-2, -2, -2), ((0, 1), (0, 1)))
    with pytest.raises(SearchOverflowError) as info:
        box_search(plumbing_graph(BrieskornParams.family(12)), max_points=10**6)
    assert info.value.size > 10**6
    with pytest.raises(ValueError):
        max_char_square(plumbing_graph(BrieskornParams(2, 3, 5)), method="guess")


def test_json_and_dot():
    g = plumbing_graph(BrieskornParams(3, 5, 7))
    assert PlumbingGraph.from_json(g.to_json()) == g
    text = graph_to_dot(g)
    assert text.startswith("graph plumbing {") and text.count("--") == len(g) - 1
