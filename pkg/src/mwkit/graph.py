"""Simple undirected graphs on vertices 0..n-1, stored as adjacency bitsets.

Vertex ``v`` of a graph is bit ``v`` of an ``int``; a set of vertices is an
``int`` mask inside the hot loops and a sorted tuple at the API boundary.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from mwkit.errors import ParseError, PreconditionError


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def to_tuple(mask: int) -> tuple[int, ...]:
    return tuple(iter_bits(mask))


class Graph:
    """Immutable simple graph with bitset adjacency.

    >>> g = Graph(3, [(0, 1), (1, 2)])
    >>> g.adj(0, 1), g.adj(0, 2)
    (True, False)
    """

    __slots__ = ("n", "_adj", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise PreconditionError("vertex count must be non-negative")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge {{{u},{v}}} out of range for n={n}")
            if u == v:
                raise PreconditionError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self._adj = tuple(adj)
        self._hash = None

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> Graph:
        """Build from per-vertex neighbour masks; symmetry is checked."""
        n = len(masks)
        full = (1 << n) - 1
        for v, m in enumerate(masks):
            if m & ~full or (m >> v) & 1:
                raise PreconditionError(f"bad neighbour mask for vertex {v}")
            for u in iter_bits(m):
                if not (masks[u] >> v) & 1:
                    raise PreconditionError(f"asymmetric adjacency between {u} and {v}")
        g = cls.__new__(cls)
        g.n = n
        g._adj = tuple(masks)
        g._hash = None
        return g

    @property
    def masks(self) -> tuple[int, ...]:
        return self._adj

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def adj(self, u: int, v: int) -> bool:
        return bool((self._adj[u] >> v) & 1)

    def neighbours(self, v: int) -> int:
        """Open neighbourhood of ``v`` as a mask."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    @property
    def m(self) -> int:
        return sum(a.bit_count() for a in self._adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges as (u, v) with u < v, lexicographically sorted."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self._adj[u] >> (u + 1) << (u + 1))]

    def non_edges(self) -> list[tuple[int, int]]:
        full = self.vertex_mask
        return [
            (u, v)
            for u in range(self.n)
            for v in iter_bits(~self._adj[u] & full & ~((1 << (u + 1)) - 1))
        ]

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def is_edgeless(self) -> bool:
        return not any(self._adj)

    def is_independent(self, mask: int) -> bool:
        return all(not (self._adj[v] & mask) for v in iter_bits(mask))

    def complement(self) -> Graph:
        full = self.vertex_mask
        return Graph.from_masks([~a & full & ~(1 << v) for v, a in enumerate(self._adj)])

    def induced(self, vertices: Iterable[int]) -> tuple[Graph, dict[int, int]]:
        """Induced subgraph renumbered by ascending original id, plus old->new map."""
        order = sorted(set(vertices))
        index = {v: i for i, v in enumerate(order)}
        edges = [(index[u], index[v]) for u, v in self.edges() if u in index and v in index]
        return Graph(len(order), edges), index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._adj == other._adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self._adj))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def ball_mask(adj: Sequence[int], x: int, r: int) -> int:
    """Radius-``r`` ball around ``x`` (``x`` included) in the graph given by ``adj``."""
    seen = frontier = 1 << x
    for _ in range(r):
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= adj[v]
        frontier = nxt & ~seen
        if not frontier:
            break
        seen |= frontier
    return seen


def _check_vertex(g: Graph, *vs: int) -> None:
    for v in vs:
        if not 0 <= v < g.n:
            raise PreconditionError(f"vertex {v} out of range for n={g.n}")


def ball(g: Graph, x: int, r: int) -> tuple[int, ...]:
    _check_vertex(g, x)
    if r < 0:
        raise PreconditionError("radius must be non-negative")
    return to_tuple(ball_mask(g.masks, x, r))


def neighbourhood_delta(g: Graph, x: int, y: int) -> tuple[int, ...]:
    """Symmetric difference of the open neighbourhoods of ``x`` and ``y``."""
    _check_vertex(g, x, y)
    return to_tuple(g.neighbours(x) ^ g.neighbours(y))


def min_symmetric_difference(g: Graph) -> tuple[tuple[int, int], int]:
    """The lexicographically first pair minimising ``|N(x) Δ N(y) - {x, y}|``.

    ``x`` and ``y`` themselves are left out so that true twins (adjacent,
    same closed neighbourhood) score 0 like false twins do."""
    if g.n < 2:
        raise PreconditionError("need at least two vertices")
    best = None
    for x, y in itertools.combinations(range(g.n), 2):
        d = ((g.neighbours(x) ^ g.neighbours(y)) & ~((1 << x) | (1 << y))).bit_count()
        if best is None or d < best[1]:
            best = ((x, y), d)
            if d == 0:
                break
    return best


# -- cliques -----------------------------------------------------------------


def _colour_classes(adj: Sequence[int], cand: int) -> tuple[list[int], list[int]]:
    # Greedy colouring of cand; returns vertices sorted by colour and their colour.
    order, bounds = [], []
    uncoloured = cand
    colour = 0
    while uncoloured:
        colour += 1
        avail = uncoloured
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~adj[v] & ~low
            uncoloured &= ~low
            order.append(v)
            bounds.append(colour)
    return order, bounds


def max_clique_mask(adj: Sequence[int], cand: int, cap: int | None = None) -> int:
    """Mask of a maximum clique inside ``cand``; stops early once ``cap`` is reached."""
    best = [0, 0]  # size, mask

    def expand(size: int, clique: int, p: int) -> bool:
        order, bounds = _colour_classes(adj, p)
        for idx in range(len(order) - 1, -1, -1):
            if size + bounds[idx] <= best[0]:
                return False
            v = order[idx]
            bit = 1 << v
            newp = p & adj[v]
            if newp:
                if expand(size + 1, clique | bit, newp):
                    return True
            elif size + 1 > best[0]:
                best[0], best[1] = size + 1, clique | bit
                if cap is not None and best[0] >= cap:
                    return True
            p &= ~bit
        return False

    if cand:
        expand(0, 0, cand)
    return best[1]


def clique_number(g: Graph, within: int | None = None) -> int:
    """Exact clique number, optionally of the subgraph induced by mask ``within``."""
    cand = g.vertex_mask if within is None else within
    return max_clique_mask(g.masks, cand).bit_count()


def contains_clique(g: Graph, t: int, within: int) -> bool:
    if t <= 0:
        return True
    return max_clique_mask(g.masks, within, cap=t).bit_count() >= t


# -- GF(2) -------------------------------------------------------------------


@dataclass(frozen=True)
class GF2Matrix:
    """Bit matrix; entry (i, j) is bit ``j`` of ``data[i]``."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise PreconditionError("row count does not match data")
        limit = 1 << self.cols
        if any(r < 0 or r >= limit for r in self.data):
            raise PreconditionError("entry outside the column range")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int] | str]) -> GF2Matrix:
        data, cols = [], None
        for row in rows:
            bits = [int(c) for c in row]
            if cols is None:
                cols = len(bits)
            elif len(bits) != cols:
                raise PreconditionError("ragged rows")
            data.append(sum(b << j for j, b in enumerate(bits) if b))
        return cls(len(data), cols or 0, tuple(data))

    def entry(self, i: int, j: int) -> int:
        return (self.data[i] >> j) & 1


def gf2_rank(m: GF2Matrix | Sequence[int]) -> int:
    """Rank over GF(2) by elimination; accepts a matrix or a list of row masks."""
    rows = list(m.data if isinstance(m, GF2Matrix) else m)
    rank = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank


# -- DIMACS-style text -------------------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse ``c``/``p edge n m``/``e u v`` text with 1-indexed vertices."""
    n = expected_m = None
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise ParseError("second header", lineno)
            if len(parts) != 4 or parts[1] != "edge":
                raise ParseError("expected 'p edge <n> <m>'", lineno)
            try:
                n, expected_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("non-integer in header", lineno) from None
            if n < 0 or expected_m < 0:
                raise ParseError("negative count in header", lineno)
        elif tag == "e":
            if n is None:
                raise ParseError("edge before header", lineno)
            if len(parts) != 3:
                raise ParseError("expected 'e <u> <v>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("non-integer vertex", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"vertex out of range 1..{n}", lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno)
            pair = (min(u, v) - 1, max(u, v) - 1)
            if pair in edges:
                raise ParseError(f"duplicate edge {u} {v}", lineno)
            edges.add(pair)
        else:
            raise ParseError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise ParseError("missing 'p edge' header")
    if len(edges) != expected_m:
        raise ParseError(f"header declares {expected_m} edges, found {len(edges)}")
    return Graph(n, edges)


def serialize_graph(g: Graph, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


# -- generators --------------------------------------------------------------

_MASK64 = (1 << 64) - 1


def splitmix64(seed: int) -> Iterator[int]:
    """SplitMix64 stream; chosen because it is trivial to reproduce in any language."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def random_graph(n: int, p: float | Fraction | str, seed: int) -> Graph:
    """G(n, p): pair (u, v), u < v in lexicographic order, is an edge iff the
    next SplitMix64 output shifted right by 11 is below ``p * 2**53``."""
    prob = Fraction(p)
    if not 0 <= prob <= 1:
        raise PreconditionError("edge probability must lie in [0, 1]")
    stream = splitmix64(seed)
    threshold = prob * (1 << 53)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if (next(stream) >> 11) < threshold
    ]
    return Graph(n, edges)


def shift_vertices(n: int) -> list[tuple[int, int]]:
    """Vertex labels of ``shift(n)``: pairs (i, j), 1 <= i < j <= n, lexicographic."""
    return list(itertools.combinations(range(1, n + 1), 2))


def _shift(n: int) -> Graph:
    pairs = shift_vertices(n)
    index = {p: i for i, p in enumerate(pairs)}
    edges = [(index[(i, j)], index[(j, k)]) for (i, j) in pairs for k in range(j + 1, n + 1)]
    return Graph(len(pairs), edges)


def _grid(rows: int, cols: int) -> Graph:
    # vertex (i, j) -> i * cols + j
    edges = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            if j + 1 < cols:
                edges.append((v, v + 1))
            if i + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


FAMILIES = ("complete", "empty", "path", "cycle", "biclique", "grid", "random", "shift")


def generate(family: str, params: Sequence, seed: int | None = None) -> Graph:
    """Deterministic graph families.

    Numbering: ``biclique(a, b)`` puts the a-side first; ``grid(r, c)`` is
    row-major; ``shift(n)`` orders pairs lexicographically; ``random(n, p)``
    takes the seed from ``seed`` or a third parameter.
    """
    params = list(params)

    def need(count: int) -> None:
        if len(params) != count:
            raise PreconditionError(f"{family} takes {count} parameter(s), got {len(params)}")

    def positive(*vals) -> None:
        for x in vals:
            if int(x) != x or x < 1:
                raise PreconditionError(f"{family}: parameters must be positive integers")

    if family in ("complete", "empty", "path", "cycle", "shift"):
        need(1)
        n = params[0]
        positive(n)
        n = int(n)
        if family == "complete":
            return Graph(n, itertools.combinations(range(n), 2))
        if family == "empty":
            return Graph(n)
        if family == "path":
            return Graph(n, [(i, i + 1) for i in range(n - 1)])
        if family == "cycle":
            if n < 3:
                raise PreconditionError("cycle needs n >= 3")
            return Graph(n, [(i, (i + 1) % n) for i in range(n)])
        if n < 2:
            raise PreconditionError("shift needs n >= 2")
        return _shift(n)
    if family == "biclique":
        need(2)
        a, b = params
        positive(a, b)
        a, b = int(a), int(b)
        return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    if family == "grid":
        need(2)
        positive(*params)
        return _grid(int(params[0]), int(params[1]))
    if family == "random":
        if len(params) == 3:
            if seed is not None and seed != int(params[2]):
                raise PreconditionError("random: conflicting seeds")
            seed = int(params[2])
        else:
            need(2)
        if seed is None:
            raise PreconditionError("random needs a seed")
        positive(params[0])
        return random_graph(int(params[0]), params[1], seed)
    raise PreconditionError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
