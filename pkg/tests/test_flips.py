from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from mwkit import Graph, generate, gf2_rank
from mwkit.errors import PreconditionError
from mwkit.extraction import NcWitness, nc_witness_minimize, trace_instance
from mwkit.flips import (
    HideoutCertificate,
    KFlip,
    all_flips,
    apply_flip,
    count_flips,
    few_neighbour_set,
    flip_matrix,
    hideout_check,
    hideout_from_witness,
    restricted_growth_strings,
    stirling2,
    verify_hideout,
)


@st.composite
def graph_and_flip(draw, max_n=8, max_k=3):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(n), 2))
    g = Graph(n, draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else [])
    k = draw(st.integers(1, max_k))
    labels = draw(st.lists(st.integers(0, k - 1), min_size=n, max_size=n))
    used = sorted(set(labels))
    blocks = [[v for v in range(n) if labels[v] == b] for b in used]
    slots = [(p, q) for p in range(len(blocks)) for q in range(p, len(blocks))]
    flipped = draw(st.lists(st.sampled_from(slots), unique=True))
    return g, KFlip.from_pairs(blocks, flipped)


def test_identity_flip():
    g = generate("cycle", [5])
    assert apply_flip(g, KFlip.from_pairs([range(5)], [])) == g


def test_single_block_flip_is_complement():
    k5 = generate("complete", [5])
    assert apply_flip(k5, KFlip.from_pairs([range(5)], [(0, 0)])).is_edgeless
    c5 = generate("cycle", [5])
    assert apply_flip(c5, KFlip.from_pairs([range(5)], [(0, 0)])) == c5.complement()


def test_biclique_cross_flip():
    k33 = generate("biclique", [3, 3])
    assert apply_flip(k33, KFlip.from_pairs([[0, 1, 2], [3, 4, 5]], [(0, 1)])).is_edgeless


def test_flip_validation():
    with pytest.raises(PreconditionError):
        apply_flip(Graph(3), KFlip.from_pairs([[0, 1]], []))
    with pytest.raises(PreconditionError):
        apply_flip(Graph(3), KFlip.from_pairs([[0, 1], [1, 2]], []))
    with pytest.raises(PreconditionError):
        KFlip(((0,), (1,)), ((False, True), (False, False)))
    with pytest.raises(PreconditionError):
        KFlip.from_pairs([[0], [1]], [(0, 2)])


@settings(max_examples=200)
@given(graph_and_flip())
def test_flip_involution_and_rank(gf):
    g, f = gf
    h = apply_flip(g, f)
    assert apply_flip(h, f) == g
    m = flip_matrix(g.n, f)
    assert gf2_rank(m) <= f.size
    for u in range(g.n):
        for v in range(g.n):
            if u != v:
                assert m.entry(u, v) == int(g.adj(u, v) != h.adj(u, v))


def test_flip_rank_exhaustive_small():
    for n in range(1, 6):
        g = generate("path", [n])
        for f in all_flips(n, 3):
            assert gf2_rank(flip_matrix(n, f)) <= f.size


# -- enumeration -------------------------------------------------------------


def test_stirling_and_counts():
    assert [stirling2(5, k) for k in range(6)] == [0, 1, 15, 25, 10, 1]
    assert count_flips(6, 1) == 2
    assert count_flips(4, 2) == 2 + 7 * 8


@pytest.mark.parametrize("n, k", [(1, 1), (4, 2), (5, 3), (6, 2), (3, 3)])
def test_rgs_and_flip_enumeration(n, k):
    rgs = list(restricted_growth_strings(n, k))
    assert len(rgs) == sum(stirling2(n, b) for b in range(1, k + 1))
    assert len({tuple(r) for r in rgs}) == len(rgs)
    flips = list(all_flips(n, k))
    assert len(flips) == count_flips(n, k)
    assert len(set(flips)) == len(flips)


# -- hideouts ----------------------------------------------------------------


def test_hideout_size_guard():
    with pytest.raises(PreconditionError):
        hideout_check(generate("cycle", [5]), [0], 1, 1, 1)


def test_hideout_k6_complement_violates():
    k6 = generate("complete", [6])
    bad = hideout_check(k6, range(6), 1, 1, 1)
    assert bad is not None
    assert bad.blocks == (tuple(range(6)),) and bad.flipped_pairs() == [(0, 0)]


def test_hideout_enumeration_guard():
    with pytest.raises(PreconditionError):
        hideout_check(generate("cycle", [12]), range(12), 2, 3, 1, limit=1000)


def test_hideout_from_witness_and_verify():
    g, X, Y = trace_instance(6)
    w = nc_witness_minimize(g, X, Y, 8)
    cert = hideout_from_witness(g, 1, w)
    assert (cert.r, cert.k, cert.d, cert.verified) == (2, 1, 1, False)
    assert cert.fw_lower_bound == 1
    verified, bad = verify_hideout(g, cert)
    assert bad is None and verified.verified


def test_hideout_from_witness_guards():
    g, X, Y = trace_instance(6)
    w = nc_witness_minimize(g, X, Y, 8)
    with pytest.raises(PreconditionError, match="alpha"):
        hideout_from_witness(g, 2, w)
    small = NcWitness(w.X[:1], w.Y, 8)
    with pytest.raises(PreconditionError):
        hideout_from_witness(g, 1, small)


def test_hideout_identity_flip_constraint():
    # whenever the full check passes, the identity flip alone passes too
    g, X, _ = trace_instance(3)
    assert hideout_check(g, X, 2, 1, 1) is None
    ident = KFlip.from_pairs([range(g.n)], [])
    assert len(few_neighbour_set(apply_flip(g, ident).masks, X, 2, 1)) <= 1


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.data())
def test_hideout_check_matches_naive(n, data):
    pairs = list(combinations(range(n), 2))
    g = Graph(n, data.draw(st.lists(st.sampled_from(pairs), unique=True)))
    d = data.draw(st.integers(0, min(2, n - 1)))
    U = data.draw(st.sets(st.integers(0, n - 1), min_size=d + 1))
    r = data.draw(st.integers(1, 2))
    k = data.draw(st.integers(1, 2))
    got = hideout_check(g, U, r, k, d)
    naive_ok = True
    for f in all_flips(n, k):
        h = apply_flip(g, f)
        few = [v for v in U if len(oracles.ball(n, h.edges(), v, r) & set(U)) <= d]
        if len(few) > d:
            naive_ok = False
            break
    assert (got is None) == naive_ok
    if got is not None:
        h = apply_flip(g, got)
        assert len([v for v in U if len(oracles.ball(n, h.edges(), v, r) & set(U)) <= d]) > d


def test_certificate_dataclass():
    c = HideoutCertificate((0, 1), 2, 1, 1)
    assert not c.verified and c.fw_lower_bound == 1
