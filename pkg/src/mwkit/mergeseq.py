"""Merge sequences: data model, validation, width, minimisation, restriction.

A sequence is stored as steps ``(partition, delta)`` where ``delta`` holds the
pairs newly resolved at that step; the cumulative resolved set of step ``i``
is the union of the deltas up to ``i``.  Step numbers in reports are 1-based,
matching the ``.mseq`` file format.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from mwkit.errors import ParseError, PreconditionError
from mwkit.graph import Graph, ball_mask, iter_bits, mask_of, to_tuple

Pair = tuple[int, int]
Block = tuple[int, ...]


def _pair(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Step:
    blocks: tuple[Block, ...]
    delta: tuple[Pair, ...] = ()

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: (b[0] if b else -1, b)))
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "delta", tuple(sorted(_pair(u, v) for u, v in self.delta)))


@dataclass(frozen=True)
class MergeSequence:
    """Chain of partitions with per-step resolved-pair deltas."""

    n: int
    steps: tuple[Step, ...]

    def __post_init__(self):
        steps = tuple(s if isinstance(s, Step) else Step(*s) for s in self.steps)
        object.__setattr__(self, "steps", steps)

    @classmethod
    def build(cls, n: int, steps: Iterable[tuple[Iterable[Iterable[int]], Iterable[Pair]]]) -> MergeSequence:
        return cls(n, tuple(Step(tuple(tuple(b) for b in blocks), tuple(delta)) for blocks, delta in steps))

    @property
    def m(self) -> int:
        return len(self.steps)

    @cached_property
    def block_masks(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(mask_of(b) for b in st.blocks) for st in self.steps)

    @cached_property
    def resolved(self) -> tuple[tuple[int, ...], ...]:
        """Cumulative resolved sets per step, as per-vertex neighbour masks."""
        out = []
        cur = [0] * self.n
        for st in self.steps:
            for u, v in st.delta:
                if 0 <= u < self.n and 0 <= v < self.n:
                    cur[u] |= 1 << v
                    cur[v] |= 1 << u
            out.append(tuple(cur))
        return tuple(out)

    def resolved_pairs(self, i: int) -> set[Pair]:
        """Cumulative resolved set of 0-based step ``i`` as a set of pairs."""
        return {(u, v) for u, row in enumerate(self.resolved[i]) for v in iter_bits(row >> (u + 1) << (u + 1))}

    def partitions(self) -> list[tuple[Block, ...]]:
        return [st.blocks for st in self.steps]


@dataclass(frozen=True)
class Violation:
    """First failed condition found by a checker; ``step`` is 1-based."""

    kind: str
    step: int | None
    message: str
    blocks: tuple[Block, ...] = ()
    edge: Pair | None = None
    non_edge: Pair | None = None

    def lines(self) -> list[str]:
        out = [f"violation {self.kind}" + (f" step {self.step}" if self.step is not None else "")]
        for b in self.blocks:
            out.append("block " + " ".join(str(v + 1) for v in b))
        if self.edge is not None:
            out.append(f"edge {self.edge[0] + 1} {self.edge[1] + 1}")
        if self.non_edge is not None:
            out.append(f"non-edge {self.non_edge[0] + 1} {self.non_edge[1] + 1}")
        out.append(f"c {self.message}")
        return out


@dataclass(frozen=True)
class SyncViolation:
    """Two pairs unresolved together at ``step`` that split apart at ``later``."""

    step: int
    later: int
    blocks: tuple[Block, Block]
    resolved_pair: Pair
    unresolved_pair: Pair

    def lines(self) -> list[str]:
        r, u = self.resolved_pair, self.unresolved_pair
        return [
            f"violation sync step {self.step} later {self.later}",
            *("block " + " ".join(str(v + 1) for v in b) for b in self.blocks),
            f"resolved {r[0] + 1} {r[1] + 1}",
            f"unresolved {u[0] + 1} {u[1] + 1}",
        ]


# -- structure ---------------------------------------------------------------


def singletons(n: int) -> tuple[Block, ...]:
    return tuple((v,) for v in range(n))


def _structure_violation(s: MergeSequence) -> Violation | None:
    n, full = s.n, (1 << s.n) - 1
    if s.m == 0:
        return Violation("empty", None, "sequence has no steps")
    for i, (st, masks) in enumerate(zip(s.steps, s.block_masks), start=1):
        seen = 0
        for b, bm in zip(st.blocks, masks):
            if not b:
                return Violation("partition", i, "empty block")
            if b[0] < 0 or b[-1] >= n or len(set(b)) != len(b):
                return Violation("partition", i, "block has out-of-range or repeated vertex", blocks=(b,))
            if seen & bm:
                return Violation("partition", i, "blocks overlap", blocks=(b,))
            seen |= bm
        if seen != full:
            missing = to_tuple(full & ~seen)
            return Violation("partition", i, f"vertices not covered: {[v + 1 for v in missing]}")
    if s.steps[0].blocks != singletons(n):
        return Violation("first-partition", 1, "first partition must be all singletons")
    if s.block_masks[-1] != (full,):
        return Violation("last-partition", s.m, "last partition must be the whole vertex set")
    for i in range(1, s.m):
        for b, bm in zip(s.steps[i - 1].blocks, s.block_masks[i - 1]):
            if not any(bm & ~cm == 0 for cm in s.block_masks[i]):
                return Violation("coarsening", i + 1, "previous block is split", blocks=(b,))
    seen_pairs: set[Pair] = set()
    for i, st in enumerate(s.steps, start=1):
        for u, v in st.delta:
            if u == v or u < 0 or v >= n:
                return Violation("resolved-pairs", i, f"invalid pair {u + 1} {v + 1}")
            if (u, v) in seen_pairs:
                return Violation("resolved-pairs", i, f"pair {u + 1} {v + 1} resolved twice")
            seen_pairs.add((u, v))
    return None


def _unresolved_classes(adj, resolved, a_mask: int, b_mask: int, same: bool) -> tuple[list[Pair], list[Pair]]:
    edges, non_edges = [], []
    for a in iter_bits(a_mask):
        other = b_mask & ~resolved[a]
        if same:
            other &= ~((1 << (a + 1)) - 1)
        for b in iter_bits(other & adj[a]):
            edges.append(_pair(a, b))
        for b in iter_bits(other & ~adj[a]):
            non_edges.append(_pair(a, b))
    return sorted(edges), sorted(non_edges)


def _mixed(adj, resolved, a_mask: int, b_mask: int) -> bool:
    has_e = has_ne = False
    for a in iter_bits(a_mask):
        other = b_mask & ~resolved[a] & ~(1 << a)
        if other & adj[a]:
            has_e = True
        if other & ~adj[a]:
            has_ne = True
        if has_e and has_ne:
            return True
    return False


def _check_n(g: Graph, s: MergeSequence) -> None:
    if g.n != s.n:
        raise PreconditionError(f"graph has {g.n} vertices, sequence has {s.n}")


def validate(g: Graph, s: MergeSequence) -> Violation | None:
    """``None`` if ``s`` is a merge sequence for ``g``, else the first violation."""
    _check_n(g, s)
    bad = _structure_violation(s)
    if bad is not None:
        return bad
    adj = g.masks
    for i, (st, masks, res) in enumerate(zip(s.steps, s.block_masks, s.resolved), start=1):
        for p, pm in enumerate(masks):
            for q in range(p, len(masks)):
                if _mixed(adj, res, pm, masks[q]):
                    e, ne = _unresolved_classes(adj, res, pm, masks[q], p == q)
                    blocks = (st.blocks[p],) if p == q else (st.blocks[p], st.blocks[q])
                    return Violation(
                        "homogeneity", i, "unresolved pairs are neither all edges nor all non-edges",
                        blocks=blocks, edge=e[0], non_edge=ne[0],
                    )
    return None


def _require_valid(g: Graph, s: MergeSequence) -> None:
    bad = validate(g, s)
    if bad is not None:
        raise PreconditionError(f"invalid merge sequence: {bad.kind} at step {bad.step}: {bad.message}")


# -- width -------------------------------------------------------------------


def step_widths(s: MergeSequence, r: int) -> list[int]:
    """Width contribution of steps 2..m (list index 0 is step 2)."""
    out = []
    for i in range(1, s.m):
        res = s.resolved[i]
        prev = s.block_masks[i - 1]
        best = 0
        for v in range(s.n):
            reach = ball_mask(res, v, r)
            c = sum(1 for bm in prev if bm & reach)
            if c > best:
                best = c
        out.append(best)
    return out


def width(s: MergeSequence, r: int) -> int:
    """Radius-``r`` width; 0 for one-step sequences."""
    if r < 0:
        raise PreconditionError("radius must be non-negative")
    return max(step_widths(s, r), default=0)


# -- constructions -----------------------------------------------------------


def trivial_sequence(g: Graph) -> MergeSequence:
    """Singletons, then everything merged with the smaller pair class resolved."""
    if g.n < 1:
        raise PreconditionError("need at least one vertex")
    if g.n == 1:
        return MergeSequence.build(1, [([(0,)], [])])
    if g.is_complete() or g.is_edgeless():
        delta: list[Pair] = []
    else:
        edges, non_edges = g.edges(), g.non_edges()
        delta = edges if len(edges) <= len(non_edges) else non_edges
    return MergeSequence.build(g.n, [(singletons(g.n), []), ([tuple(range(g.n))], delta)])


Chooser = Callable[[int, list[Pair], list[Pair]], bool]


def forced_sequence(g: Graph, partitions: Sequence[Sequence[Sequence[int]]], choose_edges: Chooser) -> MergeSequence:
    """Sequence over ``partitions`` resolving only what homogeneity forces.

    For each mixed block pair at step ``i`` (1-based), ``choose_edges(i, edges,
    non_edges)`` picks which class of unresolved pairs becomes resolved.
    """
    n, adj = g.n, g.masks
    cur = [0] * n
    steps = []
    for i, blocks in enumerate(partitions, start=1):
        masks = [mask_of(b) for b in blocks]
        delta: list[Pair] = []
        if i > 1:
            for p, pm in enumerate(masks):
                for q in range(p, len(masks)):
                    e, ne = _unresolved_classes(adj, cur, pm, masks[q], p == q)
                    if e and ne:
                        delta.extend(e if choose_edges(i, e, ne) else ne)
            for u, v in delta:
                cur[u] |= 1 << v
                cur[v] |= 1 << u
        steps.append((blocks, delta))
    return MergeSequence.build(n, steps)


def minimize(g: Graph, s: MergeSequence) -> MergeSequence:
    """Inclusion-minimal resolved sets below those of ``s``, same partitions.

    Each mixed block pair resolves a class already resolved in ``s`` at that
    step; if both are, the smaller class, edges on ties.
    """
    _require_valid(g, s)
    original = s.resolved

    def choose(i: int, e: list[Pair], ne: list[Pair]) -> bool:
        res = original[i - 1]
        e_ok = all((res[u] >> v) & 1 for u, v in e)
        ne_ok = all((res[u] >> v) & 1 for u, v in ne)
        if e_ok and ne_ok:
            return len(e) <= len(ne)
        return e_ok

    return forced_sequence(g, s.partitions(), choose)


def resolve_structurally(g: Graph, partitions: Sequence[Sequence[Sequence[int]]], prefer_edges: bool = True) -> MergeSequence:
    """Valid, structurally bounded sequence over ``partitions``.

    At each step every edge incident to a non-independent block is resolved;
    remaining mixed block pairs resolve the preferred class.
    """
    n, adj = g.n, g.masks
    cur = [0] * n
    steps = []
    for i, blocks in enumerate(partitions, start=1):
        delta: set[Pair] = set()
        if i > 1:
            masks = [mask_of(b) for b in blocks]
            for bm in masks:
                if not g.is_independent(bm):
                    for v in iter_bits(bm):
                        for u in iter_bits(adj[v] & ~cur[v]):
                            delta.add(_pair(u, v))
            for u, v in delta:
                cur[u] |= 1 << v
                cur[v] |= 1 << u
            extra: list[Pair] = []
            for p, pm in enumerate(masks):
                for q in range(p, len(masks)):
                    e, ne = _unresolved_classes(adj, cur, pm, masks[q], p == q)
                    if e and ne:
                        extra.extend(e if prefer_edges else ne)
            for u, v in extra:
                cur[u] |= 1 << v
                cur[v] |= 1 << u
            delta.update(extra)
        steps.append((blocks, sorted(delta)))
    return MergeSequence.build(n, steps)


def random_chain(n: int, rng: random.Random, binary: bool = False) -> list[list[list[int]]]:
    """Random chain of strictly coarsening partitions from singletons to one block."""
    blocks = [[v] for v in range(n)]
    chain = [[list(b) for b in blocks]]
    while len(blocks) > 1:
        k = 2 if binary else rng.randint(2, min(len(blocks), 3))
        chosen = sorted(rng.sample(range(len(blocks)), k))
        merged = sorted(v for idx in chosen for v in blocks[idx])
        blocks = [b for idx, b in enumerate(blocks) if idx not in chosen] + [merged]
        blocks.sort()
        chain.append([list(b) for b in blocks])
    return chain


def random_sequence(g: Graph, seed: int, extra: float = 0.1, binary: bool = False) -> MergeSequence:
    """Seeded random valid sequence, deliberately not minimal.

    Forced classes are chosen at random and each step additionally resolves
    a random fraction ``extra`` of its still-unresolved pairs.
    """
    rng = random.Random(seed)
    if g.n == 1:
        return trivial_sequence(g)
    chain = random_chain(g.n, rng, binary)
    base = forced_sequence(g, chain, lambda i, e, ne: rng.random() < 0.5)
    steps = []
    resolved: set[Pair] = set()
    for i, st in enumerate(base.steps):
        delta = [p for p in st.delta if p not in resolved]
        resolved.update(delta)
        if i > 0:
            for u in range(g.n):
                for v in range(u + 1, g.n):
                    if (u, v) not in resolved and rng.random() < extra:
                        resolved.add((u, v))
                        delta.append((u, v))
        steps.append((st.blocks, delta))
    return MergeSequence.build(g.n, steps)


# -- minimality consequences --------------------------------------------------


def resolve_times(s: MergeSequence) -> dict[Pair, int]:
    """0-based step at which each resolved pair first appears."""
    return {p: i for i, st in enumerate(s.steps) for p in st.delta}


def check_sync(g: Graph, s: MergeSequence) -> SyncViolation | None:
    """Pairs unresolved together between two blocks must get resolved together."""
    _require_valid(g, s)
    times = resolve_times(s)
    never = s.m
    for i, (st, masks, res) in enumerate(zip(s.steps, s.block_masks, s.resolved)):
        for p, pm in enumerate(masks):
            for q in range(p, len(masks)):
                pairs = []
                for a in iter_bits(pm):
                    other = masks[q] & ~res[a] & ~(1 << a)
                    if p == q:
                        other &= ~((1 << (a + 1)) - 1)
                    pairs.extend(_pair(a, b) for b in iter_bits(other))
                if len(pairs) < 2:
                    continue
                pairs.sort()
                t0 = times.get(pairs[0], never)
                for other_pair in pairs[1:]:
                    t1 = times.get(other_pair, never)
                    if t1 != t0:
                        first, second = (pairs[0], other_pair) if t0 < t1 else (other_pair, pairs[0])
                        blocks = (st.blocks[p], st.blocks[q])
                        return SyncViolation(i + 1, min(t0, t1) + 1, blocks, first, second)
    return None


def is_structurally_bounded(g: Graph, s: MergeSequence) -> Violation | None:
    """Every non-independent block must have all its incident edges resolved."""
    _require_valid(g, s)
    adj = g.masks
    for i, (st, masks, res) in enumerate(zip(s.steps, s.block_masks, s.resolved), start=1):
        for b, bm in zip(st.blocks, masks):
            if g.is_independent(bm):
                continue
            for v in iter_bits(bm):
                loose = adj[v] & ~res[v]
                if loose:
                    u = (loose & -loose).bit_length() - 1
                    return Violation(
                        "structural", i, "non-independent block has an unresolved incident edge",
                        blocks=(b,), edge=_pair(u, v),
                    )
    return None


# -- restriction -------------------------------------------------------------


def restrict(g: Graph, s: MergeSequence, subset: Iterable[int]) -> tuple[MergeSequence, dict[int, int]]:
    """Sequence for the subgraph induced by ``subset``, plus the old->new vertex map.

    Runs of steps whose restricted partitions coincide keep only their first
    step; deltas of the dropped steps move to the next kept step (or vanish
    after the last one).  This keeps every width term bounded by one of the
    original ones.
    """
    _require_valid(g, s)
    order = sorted(set(subset))
    if not order:
        raise PreconditionError("cannot restrict to an empty set")
    if order[0] < 0 or order[-1] >= g.n:
        raise PreconditionError("restriction set out of range")
    index = {v: i for i, v in enumerate(order)}
    steps: list[tuple[tuple[Block, ...], list[Pair]]] = []
    pending: list[Pair] = []
    for st in s.steps:
        blocks = tuple(sorted(tuple(index[v] for v in b if v in index) for b in st.blocks))
        blocks = tuple(b for b in blocks if b)
        delta = [(index[u], index[v]) for u, v in st.delta if u in index and v in index]
        if steps and Step(blocks).blocks == Step(steps[-1][0]).blocks:
            pending.extend(delta)
            continue
        steps.append((blocks, pending + delta))
        pending = []
    return MergeSequence.build(len(order), steps), index


# -- .mseq text --------------------------------------------------------------


def serialize_mseq(s: MergeSequence, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p mseq {s.n} {s.m}")
    for i, st in enumerate(s.steps, start=1):
        lines.append(f"s {i}")
        lines.extend("b " + " ".join(str(v + 1) for v in b) for b in st.blocks)
        lines.extend(f"r {u + 1} {v + 1}" for u, v in st.delta)
    return "\n".join(lines) + "\n"


def parse_mseq(text: str) -> MergeSequence:
    """Parse ``.mseq`` text; structural validity is left to :func:`validate`."""
    n = m = None
    steps: list[tuple[list[list[int]], list[Pair]]] = []

    def ints(parts: list[str], lineno: int) -> list[int]:
        try:
            vals = [int(x) for x in parts]
        except ValueError:
            raise ParseError("non-integer vertex", lineno) from None
        for v in vals:
            if not 1 <= v <= n:
                raise ParseError(f"vertex {v} out of range 1..{n}", lineno)
        return [v - 1 for v in vals]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise ParseError("second header", lineno)
            if len(parts) != 4 or parts[1] != "mseq":
                raise ParseError("expected 'p mseq <n> <m>'", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("non-integer in header", lineno) from None
            if n < 1 or m < 1:
                raise ParseError("header counts must be positive", lineno)
            continue
        if n is None:
            raise ParseError(f"{tag!r} line before header", lineno)
        if tag == "s":
            if len(parts) != 2 or parts[1] != str(len(steps) + 1):
                raise ParseError(f"expected 's {len(steps) + 1}'", lineno)
            steps.append(([], []))
        elif tag in ("b", "r"):
            if not steps:
                raise ParseError(f"{tag!r} line before first step", lineno)
            vals = ints(parts[1:], lineno)
            if tag == "b":
                if not vals:
                    raise ParseError("empty block", lineno)
                steps[-1][0].append(vals)
            else:
                if len(vals) != 2 or vals[0] == vals[1]:
                    raise ParseError("expected 'r <u> <v>' with u != v", lineno)
                steps[-1][1].append(_pair(*vals))
        else:
            raise ParseError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise ParseError("missing 'p mseq' header")
    if len(steps) != m:
        raise ParseError(f"header declares {m} steps, found {len(steps)}")
    return MergeSequence.build(n, steps)
