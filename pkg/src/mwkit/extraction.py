"""Certificates extracted from merge sequences and neighbourhood traces.

* :func:`eh_pair` finds linear-size complete or anti-complete pairs from a
  sequence of small radius-1 width.
* :func:`nc_exact`, :func:`nc_sample` measure neighbourhood complexity.
* :func:`nc_witness_minimize` shrinks a trace-rich pair (X, Y) until every
  two vertices of X differ on many vertices of Y;
  :func:`mw2_lower_bound_from_nc` turns such a pair into a radius-2
  merge-width lower bound.

Thresholds are compared as exact rationals throughout.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from mwkit.errors import InvariantViolation, PreconditionError
from mwkit.graph import Graph, iter_bits, mask_of, to_tuple
from mwkit.mergeseq import MergeSequence, _require_valid, width

NC_EXACT_LIMIT = 2_000_000


# -- anti-complete pairs against few blocks ---------------------------------


@dataclass(frozen=True)
class AnticompletePair:
    A: tuple[int, ...]
    B: tuple[int, ...]
    # (|U|, |V|, k) at each recursion level, outermost first
    levels: tuple[tuple[int, int, int], ...] = ()


def few_block_anticomplete(
    U: Iterable[int],
    V: Iterable[int],
    adjacency: Mapping[int, Iterable[int]],
    parts: Sequence[Iterable[int]],
    k: int,
) -> AnticompletePair:
    """Anti-complete ``A ⊆ U``, ``B ⊆ V`` with ``|A| >= |U|/k`` and ``|B| >= |V|/(2k)``.

    ``adjacency[u]`` lists the neighbours of ``u`` in ``V``; ``parts`` is a
    partition of ``V`` whose blocks have at most ``|V|/(2k)`` vertices and
    every ``u`` must touch fewer than ``k`` of them.
    """
    if k < 1:
        raise PreconditionError("k must be positive")
    U = sorted(set(U))
    V = sorted(set(V))
    vset = set(V)
    nbrs = {u: set(adjacency.get(u, ())) & vset for u in U}
    blocks = sorted((sorted(set(b)) for b in parts), key=lambda b: b[0] if b else -1)
    if sorted(v for b in blocks for v in b) != V or any(not b for b in blocks):
        raise PreconditionError("parts do not partition V")
    stray = [u for u in U if not set(adjacency.get(u, ())) <= vset]
    if stray:
        raise PreconditionError(f"vertex {stray[0]} has neighbours outside V")
    for b in blocks:
        if 2 * k * len(b) > len(V):
            raise PreconditionError(f"block starting at {b[0]} has {len(b)} > |V|/(2k) vertices")
    block_of = {v: i for i, b in enumerate(blocks) for v in b}
    for u in U:
        touched = {block_of[v] for v in nbrs[u]}
        if len(touched) >= k:
            raise PreconditionError(f"vertex {u} touches {len(touched)} >= k blocks")

    levels = []
    while True:
        levels.append((len(U), len(V), k))
        if k == 1:
            if any(nbrs[u] for u in U):
                raise InvariantViolation("edges left at k = 1")
            return AnticompletePair(tuple(U), tuple(V), tuple(levels))
        B: list[int] = []
        taken = 0
        while 2 * k * len(B) < len(V):
            B.extend(blocks[taken])
            taken += 1
        bset = set(B)
        A = [u for u in U if not nbrs[u] & bset]
        if k * len(A) >= len(U):
            return AnticompletePair(tuple(A), tuple(sorted(B)), tuple(levels))
        aset = set(A)
        U2 = [u for u in U if u not in aset]
        V2 = [v for v in V if v not in bset]
        # both sides keep enough mass for the induction to continue
        if k * len(U2) < (k - 1) * len(U) or k * len(V2) < (k - 1) * len(V):
            raise InvariantViolation("size recursion inequalities failed")
        U, V, blocks, k = U2, V2, blocks[taken:], k - 1
        nbrs = {u: nbrs[u] - bset for u in U}


# -- strong Erdős–Hajnal pairs -----------------------------------------------


@dataclass(frozen=True)
class EhCertificate:
    A: tuple[int, ...]
    B: tuple[int, ...]
    kind: str  # "complete" or "anticomplete"
    floor: Fraction
    step: int | None = field(default=None, compare=False)  # 1-based step i, None for the fallback
    k: int | None = field(default=None, compare=False)


def verify_eh(g: Graph, cert: EhCertificate, s: MergeSequence | None = None) -> str | None:
    """Exhaustive check; returns a reason on failure, ``None`` when sound."""
    if set(cert.A) & set(cert.B):
        return "A and B intersect"
    if cert.kind not in ("complete", "anticomplete"):
        return f"unknown kind {cert.kind!r}"
    want = cert.kind == "complete"
    for a in cert.A:
        for b in cert.B:
            if g.adj(a, b) != want:
                return f"pair {a},{b} breaks {cert.kind}"
    if len(cert.A) < cert.floor or len(cert.B) < cert.floor:
        return "a side is below the size floor"
    if s is not None and cert.step is not None:
        res = s.resolved[cert.step - 1]
        for a in cert.A:
            if res[a] & mask_of(cert.B):
                return f"vertex {a} has a resolved pair into B"
    return None


def eh_pair(g: Graph, s: MergeSequence) -> EhCertificate:
    """Complete or anti-complete pair with both sides at least ``n/(2(k+1)(k+2))``,
    where ``k`` is the radius-1 width of ``s``."""
    _require_valid(g, s)
    n = g.n
    if n < 2:
        raise PreconditionError("need at least two vertices")
    k = width(s, 1)
    floor = Fraction(n, 2 * (k + 1) * (k + 2))
    scale = 2 * k + 4  # blocks are small when scale * |block| <= n

    chosen = None
    for i in range(1, s.m):
        if all(scale * len(b) <= n for b in s.steps[i - 1].blocks):
            chosen = i
        else:
            break
    if chosen is None:
        kind = "complete" if g.adj(0, 1) else "anticomplete"
        return EhCertificate((0,), (1,), kind, floor, None, k)

    big = next(b for b in s.steps[chosen].blocks if scale * len(b) > n)
    U = big[: -(-n // scale)]
    uset = set(U)
    rest = [v for v in range(n) if v not in uset]
    res = s.resolved[chosen]
    rest_mask = mask_of(rest)
    adjacency = {u: to_tuple(res[u] & rest_mask) for u in U}
    parts = [[v for v in b if v not in uset] for b in s.steps[chosen - 1].blocks]
    parts = [p for p in parts if p]
    pair = few_block_anticomplete(U, rest, adjacency, parts, k + 1)

    A, B = pair.A, pair.B
    a_mask = mask_of(A)
    full, none = [], []
    for b in B:
        hits = g.neighbours(b) & a_mask
        if hits == a_mask:
            full.append(b)
        elif hits == 0:
            none.append(b)
        else:
            raise InvariantViolation(f"vertex {b} is mixed towards A")
    if len(full) >= len(none):
        cert = EhCertificate(A, tuple(full), "complete", floor, chosen + 1, k)
    else:
        cert = EhCertificate(A, tuple(none), "anticomplete", floor, chosen + 1, k)
    problem = verify_eh(g, cert, s)
    if problem is not None:
        raise InvariantViolation(problem)
    return cert


# -- neighbourhood complexity ------------------------------------------------


@dataclass(frozen=True)
class NcBound:
    value: int
    X: tuple[int, ...]


def _profiles(adj: Sequence[int], n: int, x_mask: int) -> int:
    return len({adj[v] & x_mask for v in range(n) if not (x_mask >> v) & 1})


def nc_profiles(g: Graph, X: Iterable[int]) -> int:
    """Number of distinct traces ``N(v) ∩ X`` over vertices ``v`` outside ``X``."""
    xm = mask_of(X)
    if xm & ~g.vertex_mask:
        raise PreconditionError("X is not a vertex subset")
    return _profiles(g.masks, g.n, xm)


def nc_exact(g: Graph, p: int, limit: int = NC_EXACT_LIMIT) -> NcBound:
    """Maximum of :func:`nc_profiles` over all ``p``-subsets (first maximiser kept)."""
    if not 1 <= p <= g.n:
        raise PreconditionError("need 1 <= p <= n")
    if math.comb(g.n, p) > limit:
        raise PreconditionError(f"C({g.n},{p}) subsets exceed the enumeration limit {limit}")
    best = NcBound(-1, ())
    for X in itertools.combinations(range(g.n), p):
        c = _profiles(g.masks, g.n, mask_of(X))
        if c > best.value:
            best = NcBound(c, X)
    return best


def nc_sample(g: Graph, p: int, trials: int, seed: int) -> NcBound:
    """Lower bound on the neighbourhood complexity from random ``p``-subsets."""
    if not 1 <= p <= g.n:
        raise PreconditionError("need 1 <= p <= n")
    rng = random.Random(seed)
    best = NcBound(-1, ())
    for _ in range(max(trials, 1)):
        X = tuple(sorted(rng.sample(range(g.n), p)))
        c = _profiles(g.masks, g.n, mask_of(X))
        if c > best.value:
            best = NcBound(c, X)
    return best


# -- dense trace witnesses ---------------------------------------------------


@dataclass(frozen=True)
class NcWitness:
    X: tuple[int, ...]
    Y: tuple[int, ...]
    alpha: int


def check_nc_witness(g: Graph, w: NcWitness) -> str | None:
    """Reason the witness fails, or ``None``.  Brute force over all pairs."""
    if set(w.X) & set(w.Y):
        return "X and Y intersect"
    traces = [frozenset(x for x in w.X if g.adj(y, x)) for y in w.Y]
    if len(set(traces)) != len(traces):
        return "two vertices of Y share a trace on X"
    yset = set(w.Y)
    for x1, x2 in itertools.combinations(w.X, 2):
        diff = sum(1 for y in yset if g.adj(y, x1) != g.adj(y, x2))
        if diff <= w.alpha:
            return f"vertices {x1},{x2} differ on only {diff} <= {w.alpha} vertices of Y"
    return None


def _check_seed(g: Graph, X: Sequence[int], Y: Sequence[int], alpha: int) -> str | None:
    if alpha < 1:
        return "alpha must be positive"
    xm, ym = mask_of(X), mask_of(Y)
    if (xm | ym) & ~g.vertex_mask:
        return "vertex out of range"
    if xm & ym:
        return "X and Y intersect"
    if len(Y) <= alpha * len(X):
        return f"|Y| = {len(Y)} is not larger than alpha * |X| = {alpha * len(X)}"
    traces = {g.neighbours(y) & xm for y in Y}
    if len(traces) != len(Y):
        return "traces of Y on X are not pairwise distinct"
    return None


def nc_witness_minimize(g: Graph, X0: Iterable[int], Y0: Iterable[int], alpha: int) -> NcWitness:
    """Drop vertices of X that are close to another one, as long as any are."""
    X = sorted(set(X0))
    Y = sorted(set(Y0))
    problem = _check_seed(g, X, Y, alpha)
    if problem is not None:
        raise PreconditionError(problem)
    adj = g.masks
    y_mask = mask_of(Y)
    while True:
        for x1, x2 in itertools.combinations(X, 2):
            delta = adj[x1] ^ adj[x2]
            if (delta & y_mask).bit_count() <= alpha:
                X.remove(x1)
                y_mask &= ~delta
                break
        else:
            break
    w = NcWitness(tuple(X), to_tuple(y_mask), alpha)
    problem = check_nc_witness(g, w)
    if problem is not None or len(w.Y) <= alpha * len(w.X):
        raise InvariantViolation(problem or "size condition lost")
    return w


@dataclass(frozen=True)
class MwRefutation:
    """Asserts radius-2 merge-width above ``k``, backed by the witness (X, Y)."""

    k: int
    witness: NcWitness

    @property
    def radius(self) -> int:
        return 2


def mw2_alpha(k: int) -> int:
    return k * 2 ** (k + 2)


def mw2_lower_bound_from_nc(g: Graph, k: int, X0: Iterable[int], Y0: Iterable[int]) -> MwRefutation | None:
    """Certificate that radius-2 merge-width exceeds ``k``; ``None`` if inconclusive."""
    if k < 1:
        raise PreconditionError("k must be positive")
    alpha = mw2_alpha(k)
    X0, Y0 = sorted(set(X0)), sorted(set(Y0))
    if _check_seed(g, X0, Y0, alpha) is not None:
        return None
    w = nc_witness_minimize(g, X0, Y0, alpha)
    if len(w.X) < 2:
        return None
    return MwRefutation(k, w)


def trace_instance(q: int, traces: Iterable[int] | None = None) -> tuple[Graph, tuple[int, ...], tuple[int, ...]]:
    """Bipartite graph with columns ``0..q-1`` and one row vertex per trace.

    Row ``q + j`` is adjacent to column ``c`` iff bit ``c`` of ``traces[j]``
    is set; all ``2**q`` traces by default.
    """
    traces = list(range(2**q) if traces is None else traces)
    if len(set(traces)) != len(traces) or any(not 0 <= t < 2**q for t in traces):
        raise PreconditionError("traces must be distinct q-bit masks")
    edges = [(c, q + j) for j, t in enumerate(traces) for c in iter_bits(t)]
    g = Graph(q + len(traces), edges)
    return g, tuple(range(q)), tuple(range(q, q + len(traces)))
