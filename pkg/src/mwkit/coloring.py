"""Colourings driven by merge sequences.

:func:`color_structural` handles sequences in which every non-independent
part has all its incident edges resolved; :func:`color_bounded_mw` reduces
the general case to it by splitting the edges in three and recursing on the
clique number.  Each step re-checks the degeneracy and product bounds it
relies on and raises :class:`~mwkit.errors.InvariantViolation` if one fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from mwkit.errors import InvariantViolation, PreconditionError
from mwkit.graph import Graph, clique_number, contains_clique, iter_bits, mask_of
from mwkit.mergeseq import (
    MergeSequence,
    Step,
    _require_valid,
    is_structurally_bounded,
    minimize,
    restrict,
    validate,
    width,
)


@dataclass(frozen=True)
class Colouring:
    colours: tuple[int, ...]  # colour of vertex v, from 1
    bound: int

    @property
    def count(self) -> int:
        return len(set(self.colours))

    def is_proper(self, g: Graph) -> bool:
        return all(self.colours[u] != self.colours[v] for u, v in g.edges())


def chromatic_bound(t: int, k: int) -> int:
    """``(t+1)! * k**(2t-2)`` with ``k`` floored at 1."""
    k = max(k, 1)
    if t <= 0:
        return 1
    return factorial(t + 1) * k ** (2 * t - 2)


def _reset_first(s: MergeSequence) -> MergeSequence:
    # Pairs resolved at step 1 only matter from step 2 on.
    if not s.steps[0].delta:
        return s
    if s.m == 1:
        return MergeSequence(s.n, (Step(s.steps[0].blocks),))
    first, second = s.steps[0], s.steps[1]
    return MergeSequence(
        s.n,
        (Step(first.blocks), Step(second.blocks, first.delta + second.delta)) + s.steps[2:],
    )


def _greedy_parts(order: list[int], part_adj: list[set[int]], limit: int | None, what: str) -> list[int]:
    colour = [0] * len(part_adj)
    for p in order:
        used = {colour[q] for q in part_adj[p] if colour[q]}
        coloured = sum(1 for q in part_adj[p] if colour[q])
        if limit is not None and coloured > limit:
            raise InvariantViolation(f"{what}: part sees {coloured} > {limit} coloured neighbours")
        c = 1
        while c in used:
            c += 1
        colour[p] = c
    return colour


def _quotient(n: int, part_of: list[int], nparts: int, edges) -> list[set[int]]:
    adj = [set() for _ in range(nparts)]
    for u, v in edges:
        p, q = part_of[u], part_of[v]
        if p == q:
            raise InvariantViolation(f"edge {u},{v} inside a part that should be independent")
        adj[p].add(q)
        adj[q].add(p)
    return adj


def color_structural(g: Graph, s: MergeSequence) -> Colouring:
    """Proper colouring with at most ``max(width(s, 2), 1)`` colours."""
    _require_valid(g, s)
    bad = is_structurally_bounded(g, s)
    if bad is not None:
        raise PreconditionError(
            f"sequence is not structurally bounded: step {bad.step}, block "
            f"{[v + 1 for v in bad.blocks[0]]}, edge {bad.edge[0] + 1} {bad.edge[1] + 1}"
        )
    s = _reset_first(s)
    k = max(width(s, 2), 1)
    n, adj = g.n, g.masks

    # index[v]: last 1-based step at which v's block has an unresolved incident edge
    index = [0] * n
    for i, (masks, res) in enumerate(zip(s.block_masks, s.resolved), start=1):
        for bm in masks:
            if any(adj[v] & ~res[v] for v in iter_bits(bm)):
                for v in iter_bits(bm):
                    index[v] = i

    part_masks: list[int] = []
    part_index: list[int] = []
    part_of = [-1] * n
    for v in range(n):
        if part_of[v] >= 0:
            continue
        i = index[v]
        if i == 0:
            pm = 1 << v
        else:
            pm = next(bm for bm in s.block_masks[i - 1] if (bm >> v) & 1)
        for u in iter_bits(pm):
            if part_of[u] >= 0 or index[u] != i:
                raise InvariantViolation("maximally unresolved parts do not partition V")
            part_of[u] = len(part_masks)
        part_masks.append(pm)
        part_index.append(i)

    for pm, i in zip(part_masks, part_index):
        if i == 0:
            continue
        if i == s.m:
            raise InvariantViolation("the final block is unresolved")
        res, nxt = s.resolved[i - 1], s.resolved[i]
        y = next(v for v in iter_bits(pm) if adj[v] & ~res[v])
        x = ((adj[y] & ~res[y]) & -(adj[y] & ~res[y])).bit_length() - 1
        if pm & ~nxt[x]:
            raise InvariantViolation(f"no hub vertex resolves the whole part at step {i + 1}")

    order = sorted(range(len(part_masks)), key=lambda p: (-part_index[p], part_masks[p] & -part_masks[p]))
    part_adj = _quotient(n, part_of, len(part_masks), g.edges())
    colour = _greedy_parts(order, part_adj, k - 1, "structural greedy")
    out = Colouring(tuple(colour[part_of[v]] for v in range(n)), k)
    if not out.is_proper(g) or out.count > k:
        raise InvariantViolation("structural colouring broke its bound")
    return out


@dataclass(frozen=True)
class EdgePartition:
    inner: tuple[tuple[int, int], ...]  # edges inside a part
    resolved: tuple[tuple[int, int], ...]  # resolved edges between parts
    unresolved: tuple[tuple[int, int], ...]  # unresolved edges between parts
    parts: tuple[tuple[int, ...], ...]
    index: tuple[int, ...]  # 1-based step at which each part is maximally K_t-free
    pairs: frozenset  # the derived resolved-pair set


def edge_partition(g: Graph, s: MergeSequence, t: int) -> EdgePartition:
    """Split the edges of ``g`` (clique number ``t``) along a minimal sequence."""
    _require_valid(g, s)
    if t < 2:
        raise PreconditionError("t must be at least 2")
    omega = clique_number(g)
    if omega != t:
        raise PreconditionError(f"clique number is {omega}, not {t}")
    if minimize(g, s) != s:
        raise PreconditionError("sequence is not minimal; run minimize first")
    n, adj = g.n, g.masks

    has_clique: dict[int, bool] = {}
    index = [0] * n
    for i, masks in enumerate(s.block_masks, start=1):
        for bm in masks:
            if bm not in has_clique:
                has_clique[bm] = contains_clique(g, t, bm)
            if not has_clique[bm]:
                for v in iter_bits(bm):
                    index[v] = i

    parts: list[int] = []
    part_index: list[int] = []
    part_of = [-1] * n
    for v in range(n):
        if part_of[v] >= 0:
            continue
        i = index[v]
        if not 1 <= i < s.m:
            raise InvariantViolation(f"vertex {v} has no maximally K_t-free part")
        pm = next(bm for bm in s.block_masks[i - 1] if (bm >> v) & 1)
        for u in iter_bits(pm):
            if part_of[u] >= 0:
                raise InvariantViolation("maximally K_t-free parts overlap")
            part_of[u] = len(parts)
        parts.append(pm)
        part_index.append(i)

    pairs = set()
    for u in range(n):
        for v in range(u + 1, n):
            i = min(index[u], index[v])
            if (s.resolved[i][u] >> v) & 1:  # R_{i+1}, 0-based position i
                pairs.add((u, v))

    inner, res_edges, unres = [], [], []
    for u, v in g.edges():
        if part_of[u] == part_of[v]:
            inner.append((u, v))
        elif (u, v) in pairs:
            res_edges.append((u, v))
        else:
            unres.append((u, v))

    ep = EdgePartition(
        tuple(inner), tuple(res_edges), tuple(unres),
        tuple(tuple(iter_bits(pm)) for pm in parts), tuple(part_index), frozenset(pairs),
    )

    g_r = Graph(n, res_edges)
    if validate(g_r, s) is not None:
        raise InvariantViolation("sequence is not valid for the resolved-edge graph")
    if is_structurally_bounded(g_r, s) is not None:
        raise InvariantViolation("sequence is not structurally bounded for the resolved-edge graph")

    k1 = max(width(s, 1), 1)
    quotient = _quotient(n, part_of, len(parts), unres)
    for p, nbrs in enumerate(quotient):
        later = sum(1 for q in nbrs if part_index[q] >= part_index[p])
        if later > k1 * t:
            raise InvariantViolation(f"part {p} has {later} > kt later unresolved neighbours")
    return ep


def color_bounded_mw(g: Graph, s: MergeSequence) -> Colouring:
    """Proper colouring with at most ``(t+1)! k^(2t-2)`` colours,
    ``k = max(width(s, 2), 1)`` and ``t`` the clique number."""
    _require_valid(g, s)
    n = g.n
    k = max(width(s, 2), 1)
    t = clique_number(g)
    bound = chromatic_bound(t, k)
    if t <= 1:
        return Colouring((1,) * n, bound)

    s = minimize(g, s)
    ep = edge_partition(g, s, t)
    part_of = [0] * n
    for p, part in enumerate(ep.parts):
        for v in part:
            part_of[v] = p

    k1 = max(width(s, 1), 1)
    order = sorted(range(len(ep.parts)), key=lambda p: (-ep.index[p], ep.parts[p][0]))
    quotient = _quotient(n, part_of, len(ep.parts), ep.unresolved)
    unres_colour = _greedy_parts(order, quotient, k1 * t, "unresolved-edge greedy")
    c_u = [unres_colour[part_of[v]] for v in range(n)]

    c_r = color_structural(Graph(n, ep.resolved), s).colours

    c_i = [0] * n
    for part in ep.parts:
        sub, mapping = g.induced(part)
        sub_seq, _ = restrict(g, s, part)
        sub_col = color_bounded_mw(sub, sub_seq)
        for v in part:
            c_i[v] = sub_col.colours[mapping[v]]

    n_i, n_r, n_u = len(set(c_i)), len(set(c_r)), len(set(c_u))
    if n_i > chromatic_bound(t - 1, k) or n_r > k or n_u > k * t + 1:
        raise InvariantViolation("a component colouring exceeded its bound")
    triples = list(zip(c_i, c_r, c_u))
    distinct = len(set(triples))
    if distinct > n_i * n_r * n_u or distinct > bound:
        raise InvariantViolation("product bound violated")
    palette: dict[tuple[int, int, int], int] = {}
    for tr in triples:
        palette.setdefault(tr, len(palette) + 1)
    out = Colouring(tuple(palette[tr] for tr in triples), bound)
    if not out.is_proper(g):
        raise InvariantViolation("combined colouring is not proper")
    return out
