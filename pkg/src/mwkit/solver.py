"""Exact radius-r merge-width for tiny graphs.

Search space: chains of binary merges from singletons to one block, where a
block pair is resolved only when the merge makes it mixed, branching on which
class (unresolved edges or unresolved non-edges) gets resolved.  Every merge
sequence can be brought into this form without increasing its width:
split multi-merges with :func:`normalize_binary`, then apply
:func:`mwkit.mergeseq.minimize`.

The search is iterative deepening on the target width with a table of states
``(partition, resolved set)`` already refuted at a given target.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from mwkit.errors import InvariantViolation, PreconditionError
from mwkit.graph import Graph, ball_mask, iter_bits
from mwkit.mergeseq import (
    MergeSequence,
    Step,
    _require_valid,
    _structure_violation,
    singletons,
    trivial_sequence,
    validate,
    width,
)

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class SolveResult:
    radius: int
    optimum: int
    witness: MergeSequence
    optimal: bool = True
    lower_bound: int = 0
    nodes: int = 0


def normalize_binary(s: MergeSequence, g: Graph | None = None) -> MergeSequence:
    """Split every step into single two-block merges.

    A step's delta goes to its first sub-step.  Steps that merge nothing are
    dropped and their delta moves to the next step.
    """
    if g is not None:
        _require_valid(g, s)
    else:
        bad = _structure_violation(s)
        if bad is not None:
            raise PreconditionError(f"malformed sequence: {bad.kind} at step {bad.step}")
    out: list[Step] = [s.steps[0]]
    pending: list[tuple[int, int]] = []
    for i in range(1, s.m):
        prev = [list(b) for b in s.steps[i - 1].blocks]
        delta = pending + list(s.steps[i].delta)
        if s.steps[i].blocks == s.steps[i - 1].blocks:
            pending = delta
            continue
        pending = []
        blocks = prev
        for target in s.steps[i].blocks:
            tset = set(target)
            parts = [b for b in blocks if b[0] in tset]
            acc = parts[0]
            for nxt in parts[1:]:
                merged = sorted(acc + nxt)
                blocks = [b for b in blocks if b is not acc and b is not nxt] + [merged]
                blocks.sort()
                acc = merged
                out.append(Step(tuple(tuple(b) for b in blocks), tuple(delta)))
                delta = []
    return MergeSequence(s.n, tuple(out))


class _BudgetExhausted(Exception):
    pass


class _Search:
    def __init__(self, g: Graph, r: int, budget: int):
        self.adj = g.masks
        self.n = g.n
        self.r = r
        self.budget = budget
        self.nodes = 0
        self.refuted: dict[tuple, int] = {}

    def step_cost(self, old_blocks: tuple[int, ...], res: tuple[int, ...], limit: int) -> int:
        best = 0
        for v in range(self.n):
            reach = ball_mask(res, v, self.r)
            c = 0
            for b in old_blocks:
                if b & reach:
                    c += 1
            if c > best:
                best = c
                if best > limit:
                    return best
        return best

    def classes(self, res: tuple[int, ...], z: int, c: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
        # Unresolved (edge, non-edge) pairs between block z and block c (c == z: inside z).
        adj = self.adj
        e, ne = [], []
        for a in iter_bits(z):
            other = c & ~res[a] & ~(1 << a)
            if c == z:
                other &= ~((1 << (a + 1)) - 1)
            for b in iter_bits(other & adj[a]):
                e.append((a, b))
            for b in iter_bits(other & ~adj[a]):
                ne.append((a, b))
        return e, ne

    def children(self, blocks: tuple[int, ...], res: tuple[int, ...], limit: int):
        seen = set()
        nb = len(blocks)
        for i in range(nb):
            for j in range(i + 1, nb):
                z = blocks[i] | blocks[j]
                rest = [b for k, b in enumerate(blocks) if k != i and k != j]
                new_blocks = tuple(sorted(rest + [z], key=lambda b: b & -b))
                mixed = []
                for c in new_blocks:
                    e, ne = self.classes(res, z, c)
                    if e and ne:
                        mixed.append((e, ne))
                for choice in itertools.product((0, 1), repeat=len(mixed)):
                    new_res = list(res)
                    for (e, ne), pick in zip(mixed, choice):
                        for a, b in (ne if pick else e):
                            new_res[a] |= 1 << b
                            new_res[b] |= 1 << a
                    new_res = tuple(new_res)
                    key = (new_blocks, new_res)
                    if key in seen:
                        continue
                    seen.add(key)
                    if self.step_cost(blocks, new_res, limit) <= limit:
                        yield new_blocks, new_res

    def feasible(self, blocks: tuple[int, ...], res: tuple[int, ...], w: int):
        if len(blocks) == 1:
            return []
        key = (blocks, res)
        if self.refuted.get(key, 0) >= w:
            return None
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetExhausted
        for nb, nr in self.children(blocks, res, w):
            tail = self.feasible(nb, nr, w)
            if tail is not None:
                return [(nb, nr)] + tail
        self.refuted[key] = w
        return None


def _witness(n: int, path) -> MergeSequence:
    steps = [Step(singletons(n))]
    prev = (0,) * n
    for blocks, res in path:
        delta = [(u, v) for u in range(n) for v in iter_bits(res[u] & ~prev[u]) if u < v]
        steps.append(Step(tuple(tuple(iter_bits(b)) for b in blocks), tuple(delta)))
        prev = res
    return MergeSequence(n, tuple(steps))


def exact_merge_width(g: Graph, r: int, budget: int | None = DEFAULT_BUDGET) -> SolveResult:
    """Minimum radius-``r`` width over all merge sequences of ``g``.

    ``budget`` caps expanded search nodes; when it runs out the result holds
    the trivial sequence's width as an upper bound and ``optimal=False``.
    """
    if g.n == 0:
        raise PreconditionError("graph has no vertices")
    if r < 1:
        raise PreconditionError("radius must be positive")
    upper_seq = trivial_sequence(g)
    upper = width(upper_seq, r)
    if g.n == 1:
        return SolveResult(r, 0, upper_seq)
    search = _Search(g, r, DEFAULT_BUDGET if budget is None else budget)
    start = (tuple(1 << v for v in range(g.n)), (0,) * g.n)
    for w in range(1, upper):
        try:
            path = search.feasible(*start, w)
        except _BudgetExhausted:
            return SolveResult(r, upper, upper_seq, optimal=False, lower_bound=w, nodes=search.nodes)
        if path is not None:
            witness = _witness(g.n, path)
            if validate(g, witness) is not None or width(witness, r) != w:
                raise InvariantViolation("search produced an inconsistent witness")
            return SolveResult(r, w, witness, lower_bound=w, nodes=search.nodes)
    return SolveResult(r, upper, upper_seq, lower_bound=upper, nodes=search.nodes)
