"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary prints
one ``criterion N: PASS/FAIL`` line per criterion.
"""

import random
import time
from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest

import oracles
from corpus import corpus_graphs, corpus_sequences, random_witness_seed, structural_sequences
from mwkit import (
    Graph,
    MergeSequence,
    check_sync,
    exact_merge_width,
    generate,
    minimize,
    normalize_binary,
    parse_graph,
    parse_mseq,
    restrict,
    serialize_graph,
    serialize_mseq,
    validate,
    width,
)
from mwkit.certificates import emit_certificate, parse_certificate
from mwkit.coloring import chromatic_bound, color_bounded_mw, color_structural
from mwkit.extraction import (
    NcWitness,
    check_nc_witness,
    eh_pair,
    mw2_alpha,
    mw2_lower_bound_from_nc,
    nc_exact,
    nc_profiles,
    nc_witness_minimize,
    trace_instance,
    verify_eh,
)
from mwkit.flips import hideout_check, hideout_from_witness, verify_hideout
from mwkit.mergeseq import Step, is_structurally_bounded, random_sequence

criterion = pytest.mark.criterion


def atlas(max_n):
    for G in nx.graph_atlas_g():
        if 1 <= G.number_of_nodes() <= max_n:
            yield Graph(G.number_of_nodes(), G.edges())


def labelled(n):
    pairs = list(combinations(range(n), 2))
    for mask in range(2 ** len(pairs)):
        yield Graph(n, [p for j, p in enumerate(pairs) if (mask >> j) & 1])


def seeded_random_cases(count, max_n):
    """(graph, valid sequence) pairs from seeds 0..count-1, n <= max_n."""
    for seed in range(count):
        rng = random.Random(seed)
        n = rng.randint(2, max_n)
        p = Fraction(rng.randint(1, 9), 10)
        g = generate("random", [n, p], seed=seed)
        yield seed, g, random_sequence(g, seed, extra=rng.choice([0.0, 0.1, 0.3]))


def brute_force_witness_ok(g, X, Y, alpha):
    if set(X) & set(Y):
        return False
    traces = [tuple(g.adj(y, x) for x in X) for y in Y]
    if len(set(traces)) != len(traces):
        return False
    return all(sum(1 for y in Y if g.adj(y, a) != g.adj(y, b)) > alpha for a, b in combinations(X, 2))


@criterion("1", "exact_merge_width equals the naive chain enumerator, n <= 5 atlas and labelled n <= 4, r in {1,2}")
def test_criterion_1_oracle_equivalence():
    start = time.monotonic()
    graphs = list(atlas(5)) + [g for n in range(1, 5) for g in labelled(n)]
    checked = 0
    for g in graphs:
        for r in (1, 2):
            res = exact_merge_width(g, r)
            assert res.optimal
            assert res.optimum == oracles.naive_merge_width(g.n, g.edges(), r), (g, r)
            checked += 1
    assert checked == 2 * (52 + 1 + 2 + 8 + 64)
    assert time.monotonic() - start < 600


@criterion("2", "mw_r(K_n) = mw_r(empty_n) = 1 for n in 2..8, r in 1..3")
def test_criterion_2_trivial_families():
    for n in range(2, 9):
        for family in ("complete", "empty"):
            g = generate(family, [n])
            for r in (1, 2, 3):
                res = exact_merge_width(g, r)
                assert res.optimal and res.optimum == 1, (family, n, r)


@criterion("3", "minimize: sync holds and every single-pair removal breaks validity, 200 seeded sequences n <= 10")
def test_criterion_3_minimal_sequences():
    removals = 0
    for seed, g, s in seeded_random_cases(200, 10):
        assert validate(g, s) is None
        m = minimize(g, s)
        assert validate(g, m) is None
        assert check_sync(g, m) is None, seed
        for i, stp in enumerate(m.steps):
            for j in range(len(stp.delta)):
                steps = list(m.steps)
                steps[i] = Step(stp.blocks, stp.delta[:j] + stp.delta[j + 1:])
                assert validate(g, MergeSequence(m.n, tuple(steps))) is not None, (seed, i, j)
                removals += 1
    assert removals > 0


@criterion("4", "eh_pair certificates verified exhaustively with sides >= n/(2(k+1)(k+2)) on the corpus")
def test_criterion_4_erdos_hajnal():
    for name, g in corpus_graphs():
        for label, s in corpus_sequences(g):
            k = width(s, 1)
            cert = eh_pair(g, s)
            floor = Fraction(g.n, 2 * (k + 1) * (k + 2))
            assert cert.floor == floor
            assert not set(cert.A) & set(cert.B)
            want = cert.kind == "complete"
            assert all(g.adj(a, b) == want for a in cert.A for b in cert.B), (name, label)
            assert len(cert.A) >= floor and len(cert.B) >= floor, (name, label)
            assert verify_eh(g, cert, s) is None


@criterion("5", "color_structural: proper with <= max(width(s,2),1) colours on structurally bounded corpus inputs")
def test_criterion_5_structural_colouring():
    runs = 0
    for name, g in corpus_graphs():
        candidates = structural_sequences(g) + [
            (label, s) for label, s in corpus_sequences(g) if is_structurally_bounded(g, s) is None
        ]
        for label, s in candidates:
            assert is_structurally_bounded(g, s) is None
            col = color_structural(g, s)
            assert all(col.colours[u] != col.colours[v] for u, v in g.edges()), (name, label)
            assert len(set(col.colours)) <= max(width(s, 2), 1), (name, label)
            runs += 1
    assert runs > 100


@criterion("6", "color_bounded_mw: proper with <= (t+1)! k^(2t-2) colours on the corpus, < 1 minute per graph")
def test_criterion_6_bounded_colouring():
    for name, g in corpus_graphs():
        start = time.monotonic()
        t = max((len(c) for c in nx.find_cliques(nx.Graph(g.edges()))), default=1 if g.n else 0)
        for label, s in corpus_sequences(g) + structural_sequences(g):
            col = color_bounded_mw(g, s)
            k = max(width(s, 2), 1)
            assert col.bound == chromatic_bound(t, k)
            assert all(col.colours[u] != col.colours[v] for u, v in g.edges()), (name, label)
            assert len(set(col.colours)) <= chromatic_bound(t, k), (name, label)
        assert time.monotonic() - start < 60, name


@criterion("7", "nc_exact(g,p) <= k 2^(k+2) p with k = mw_2(g), every graph with n <= 6")
def test_criterion_7_neighbourhood_complexity():
    graphs = 0
    for g in atlas(6):
        k = exact_merge_width(g, 2)
        assert k.optimal
        for p in range(1, g.n + 1):
            assert nc_exact(g, p).value <= k.optimum * 2 ** (k.optimum + 2) * p
        graphs += 1
    assert graphs == 1 + 2 + 4 + 11 + 34 + 156


@criterion("8", "nc_witness_minimize output satisfies both witness conditions by brute force, 100 seeded inputs")
def test_criterion_8_witness_postconditions():
    for seed in range(100):
        g, X0, Y0, alpha = random_witness_seed(seed)
        assert brute_force_witness_ok(g, X0, Y0, -1) and len(Y0) > alpha * len(X0)
        w = nc_witness_minimize(g, X0, Y0, alpha)
        assert brute_force_witness_ok(g, w.X, w.Y, alpha), seed
        assert set(w.X) <= set(X0) and set(w.Y) <= set(Y0)


@criterion("9", "hideout_from_witness certificate passes full 1-flip enumeration (k=1, all 2^6 traces, n=70)")
def test_criterion_9_hideout_scaled():
    g, X, Y = trace_instance(6)
    w = nc_witness_minimize(g, X, Y, 2 ** 3)
    cert = hideout_from_witness(g, 1, w)
    assert hideout_check(g, cert.U, cert.r, cert.k, cert.d) is None
    verified, bad = verify_hideout(g, cert)
    assert bad is None and verified.verified
    # mw_2 > 1 is asserted too; an induced P_4 already needs width 2
    ref = mw2_lower_bound_from_nc(g, 1, X, Y)
    assert ref is not None and ref.k == 1
    c0, c1 = X[0], X[1]
    row = {tuple(x for x in X if g.adj(y, x)): y for y in Y}
    path = [row[(c0,)], c0, row[(c0, c1)], c1]
    sub, _ = g.induced(path)
    assert nx.is_isomorphic(nx.Graph(sub.edges()), nx.path_graph(4))
    assert exact_merge_width(sub, 2).optimum > ref.k


@criterion("9", "lower-bound certificates never contradict exact_merge_width where both run (all n <= 6)")
def test_criterion_9_no_contradiction():
    for g in atlas(6):
        mw2 = exact_merge_width(g, 2).optimum
        for size in range(2, g.n):
            for X in combinations(range(g.n), size):
                reps = {}
                for y in range(g.n):
                    if y not in X:
                        reps.setdefault(tuple(g.adj(y, x) for x in X), y)
                for k in (1, 2):
                    ref = mw2_lower_bound_from_nc(g, k, X, sorted(reps.values()))
                    if ref is not None:
                        assert mw2 > k


@pytest.mark.xfail(strict=True, reason="no alpha = 8 witness fits in n <= 10; see docstring")
@criterion("9", "literal scale: all 2^q traces on q <= 4 columns embedded in n <= 10, k = 1")
def test_criterion_9_hideout_literal_scale():
    """At k = 1 the witness needs alpha = 2^(2k+1) = 8, i.e. |Y ∩ Δ(x, x')| > 8
    for two vertices of X, so |Y| >= 9 and n >= 11.  The largest all-trace
    instance fitting in n <= 10 is q = 2 (n = 6); q = 3 needs n = 11 and q = 4
    needs n = 20.  hideout_from_witness therefore has no valid input at this
    scale and rejects the instance; the scaled q = 6 test above exercises the
    same path."""
    best = None
    for q in (1, 2, 3, 4):
        g, X, Y = trace_instance(q)
        if g.n <= 10:
            best = (g, X, Y)
    g, X, Y = best
    cert = hideout_from_witness(g, 1, NcWitness(X, Y, 8))
    assert hideout_check(g, cert.U, cert.r, cert.k, cert.d) is None


@criterion("10", "normalize_binary and restrict never increase width (r in {1,2}), 200 seeded sequences")
def test_criterion_10_normalization_safety():
    for seed, g, s in seeded_random_cases(200, 10):
        rng = random.Random(1000 + seed)
        b = normalize_binary(s, g)
        assert validate(g, b) is None
        S = rng.sample(range(g.n), rng.randint(1, g.n))
        t, _ = restrict(g, s, S)
        assert validate(g.induced(S)[0], t) is None
        for r in (1, 2):
            assert width(b, r) <= width(s, r), (seed, r)
            assert width(t, r) <= width(s, r), (seed, r)


@criterion("11", "graph/.mseq round-trip byte-exactly; every emitted certificate re-parses and re-verifies")
def test_criterion_11_round_trips():
    for name, g in corpus_graphs():
        text = serialize_graph(g)
        assert serialize_graph(parse_graph(text)) == text and parse_graph(text) == g
        for label, s in corpus_sequences(g) + structural_sequences(g):
            mtext = serialize_mseq(s)
            back = parse_mseq(mtext)
            assert serialize_mseq(back) == mtext and back == s
            assert validate(g, back) is None

            eh = parse_certificate(emit_certificate(eh_pair(g, s)))
            assert verify_eh(g, eh) is None
            col = parse_certificate(emit_certificate(color_bounded_mw(g, s)))
            assert col.is_proper(g) and col.count <= col.bound
            if is_structurally_bounded(g, s) is None:
                col = parse_certificate(emit_certificate(color_structural(g, s)))
                assert col.is_proper(g) and col.count <= col.bound
        if g.n <= 12:
            nc = parse_certificate(emit_certificate(nc_exact(g, min(3, g.n))))
            assert nc_profiles(g, nc.X) == nc.value

    g, X, Y = trace_instance(6)
    w = parse_certificate(emit_certificate(nc_witness_minimize(g, X, Y, 8)))
    assert check_nc_witness(g, w) is None and brute_force_witness_ok(g, w.X, w.Y, w.alpha)
    ref = parse_certificate(emit_certificate(mw2_lower_bound_from_nc(g, 1, X, Y)))
    assert ref.witness.alpha == mw2_alpha(ref.k) and check_nc_witness(g, ref.witness) is None
    cert, _ = verify_hideout(g, hideout_from_witness(g, 1, w))
    hide = parse_certificate(emit_certificate(cert))
    assert hide == cert and hide.verified
    assert hideout_check(g, hide.U, hide.r, hide.k, hide.d) is None


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
