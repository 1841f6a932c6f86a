from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from mwkit import (
    Graph,
    MergeSequence,
    exact_merge_width,
    generate,
    normalize_binary,
    restrict,
    trivial_sequence,
    validate,
    width,
)
from mwkit.errors import PreconditionError
from mwkit.mergeseq import random_sequence


def is_binary(s):
    return all(len(a.blocks) == len(b.blocks) + 1 for a, b in zip(s.steps, s.steps[1:]))


@st.composite
def graph_and_sequence(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    g = Graph(n, chosen)
    return g, random_sequence(g, draw(st.integers(0, 2**32)), draw(st.sampled_from([0.0, 0.2])))


# -- normalize_binary --------------------------------------------------------


def test_normalize_binary_examples():
    k4 = generate("complete", [4])
    b = normalize_binary(trivial_sequence(k4), k4)
    assert b.m == 4 and is_binary(b)
    assert all(stp.delta == () for stp in b.steps)
    assert width(b, 1) == 1

    c5 = generate("cycle", [5])
    t = trivial_sequence(c5)
    b = normalize_binary(t, c5)
    assert b.m == 5 and is_binary(b)
    assert width(b, 1) <= 3

    assert normalize_binary(b, c5) == b


@settings(max_examples=150)
@given(graph_and_sequence())
def test_normalize_binary_properties(gs):
    g, s = gs
    b = normalize_binary(s, g)
    assert validate(g, b) is None
    assert is_binary(b)
    assert b.resolved_pairs(b.m - 1) == s.resolved_pairs(s.m - 1)
    for r in range(4):
        assert width(b, r) <= width(s, r)


def test_normalize_binary_rejects_invalid():
    p3 = generate("path", [3])
    with pytest.raises(PreconditionError):
        normalize_binary(MergeSequence.build(3, [([[0], [1], [2]], []), ([[0, 1, 2]], [])]), p3)


# -- exact search ------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 5, 7])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_cliques_and_empty_have_width_one(n, r):
    for g in (generate("complete", [n]), generate("empty", [n])):
        res = exact_merge_width(g, r)
        assert res.optimum == 1 and res.optimal


def test_p3_radius_one():
    p3 = generate("path", [3])
    res = exact_merge_width(p3, 1)
    assert res.optimum == 1
    assert validate(p3, res.witness) is None and width(res.witness, 1) == 1


def test_single_vertex_and_errors():
    assert exact_merge_width(Graph(1), 1).optimum == 0
    with pytest.raises(PreconditionError):
        exact_merge_width(Graph(0), 1)
    with pytest.raises(PreconditionError):
        exact_merge_width(Graph(2), 0)


def test_p4_is_first_non_cograph():
    # width 1 forces every block to be a module, so mw_r = 1 exactly for cographs
    p4 = generate("path", [4])
    assert exact_merge_width(p4, 1).optimum == 2
    assert exact_merge_width(p4, 2).optimum == 2


def test_budget_exhaustion_is_flagged():
    g = generate("cycle", [7])
    res = exact_merge_width(g, 2, budget=5)
    assert not res.optimal
    assert validate(g, res.witness) is None
    assert width(res.witness, 2) == res.optimum
    assert res.lower_bound <= exact_merge_width(g, 2).optimum <= res.optimum


@pytest.mark.parametrize("n", [2, 3, 4])
def test_all_labelled_graphs_match_oracle(n):
    pairs = list(combinations(range(n), 2))
    for mask in range(2 ** len(pairs)):
        edges = [p for j, p in enumerate(pairs) if (mask >> j) & 1]
        g = Graph(n, edges)
        for r in (1, 2):
            assert exact_merge_width(g, r).optimum == oracles.naive_merge_width(n, edges, r)


def test_atlas_five_vertices_match_oracle():
    for G in nx.graph_atlas_g():
        if G.number_of_nodes() != 5:
            continue
        g = Graph(5, G.edges())
        for r in (1, 2):
            assert exact_merge_width(g, r).optimum == oracles.naive_merge_width(5, list(G.edges()), r)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.data())
def test_solver_invariants(n, data):
    pairs = list(combinations(range(n), 2))
    g = Graph(n, data.draw(st.lists(st.sampled_from(pairs), unique=True)))
    r1, r2 = exact_merge_width(g, 1), exact_merge_width(g, 2)
    for res, r in ((r1, 1), (r2, 2)):
        assert validate(g, res.witness) is None
        assert width(res.witness, r) == res.optimum
        assert res.optimum <= width(trivial_sequence(g), r)
    assert r1.optimum <= r2.optimum
    S = data.draw(st.sets(st.integers(0, n - 1), min_size=1))
    sub, _ = g.induced(S)
    assert exact_merge_width(sub, 2).optimum <= r2.optimum
    restricted, _ = restrict(g, r2.witness, S)
    assert width(restricted, 2) <= r2.optimum
