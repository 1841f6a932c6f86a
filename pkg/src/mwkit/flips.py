"""k-flips and hideout certificates for radius-r flip-width lower bounds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from mwkit.errors import PreconditionError
from mwkit.extraction import NcWitness, check_nc_witness
from mwkit.graph import GF2Matrix, Graph, ball_mask, iter_bits, mask_of

FLIP_LIMIT = 2_000_000


@dataclass(frozen=True)
class KFlip:
    """Partition plus a symmetric table saying which block pairs get flipped."""

    blocks: tuple[tuple[int, ...], ...]
    table: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        b = len(self.blocks)
        if len(self.table) != b or any(len(row) != b for row in self.table):
            raise PreconditionError("flip table must be square with one row per block")
        if any(self.table[p][q] != self.table[q][p] for p in range(b) for q in range(b)):
            raise PreconditionError("flip table must be symmetric")

    @classmethod
    def from_pairs(cls, blocks: Sequence[Iterable[int]], flipped: Iterable[tuple[int, int]]) -> KFlip:
        blocks = tuple(tuple(sorted(b)) for b in blocks)
        table = [[False] * len(blocks) for _ in blocks]
        for p, q in flipped:
            if not (0 <= p < len(blocks) and 0 <= q < len(blocks)):
                raise PreconditionError(f"flipped pair ({p + 1}, {q + 1}) names a missing block")
            table[p][q] = table[q][p] = True
        return cls(blocks, tuple(tuple(row) for row in table))

    @property
    def size(self) -> int:
        return len(self.blocks)

    def flipped_pairs(self) -> list[tuple[int, int]]:
        return [(p, q) for p in range(self.size) for q in range(p, self.size) if self.table[p][q]]


def _toggles(n: int, f: KFlip) -> list[int]:
    masks = [mask_of(b) for b in f.blocks]
    union = 0
    for m in masks:
        union |= m
    if not all(masks) or sum(m.bit_count() for m in masks) != n or union != (1 << n) - 1:
        raise PreconditionError("flip partition does not cover the vertex set exactly")
    per_block = [0] * f.size
    for p in range(f.size):
        for q in range(f.size):
            if f.table[p][q]:
                per_block[p] |= masks[q]
    toggle = [0] * n
    for p, m in enumerate(masks):
        for v in iter_bits(m):
            toggle[v] = per_block[p]
    return toggle


def _flip_masks(adj: Sequence[int], toggle: Sequence[int]) -> list[int]:
    return [(a ^ t) & ~(1 << v) for v, (a, t) in enumerate(zip(adj, toggle))]


def apply_flip(g: Graph, f: KFlip) -> Graph:
    toggle = _toggles(g.n, f)
    return Graph.from_masks(_flip_masks(g.masks, toggle))


def flip_matrix(n: int, f: KFlip) -> GF2Matrix:
    """The matrix added by the flip, diagonal included (entry (v, v) is the
    flag of v's own block).  Off the diagonal it equals the adjacency change."""
    return GF2Matrix(n, n, tuple(_toggles(n, f)))


# -- enumeration -------------------------------------------------------------


def stirling2(n: int, k: int) -> int:
    row = [1] + [0] * k
    for i in range(1, n + 1):
        new = [0] * (k + 1)
        for j in range(1, min(i, k) + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k]


def count_flips(n: int, k: int) -> int:
    return sum(stirling2(n, b) * 2 ** (b * (b + 1) // 2) for b in range(1, min(k, n) + 1))


def restricted_growth_strings(n: int, k: int) -> Iterator[list[int]]:
    """Partitions of ``0..n-1`` into at most ``k`` blocks, lexicographic RGS order."""
    if n == 0:
        yield []
        return
    a = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield list(a)
            return
        for c in range(min(top + 2, k)):
            a[i] = c
            yield from rec(i + 1, max(top, c))

    yield from rec(1, 0)


def all_flips(n: int, k: int) -> Iterator[KFlip]:
    for rgs in restricted_growth_strings(n, k):
        b = max(rgs) + 1
        blocks = tuple(tuple(v for v in range(n) if rgs[v] == p) for p in range(b))
        slots = [(p, q) for p in range(b) for q in range(p, b)]
        for bits in range(2 ** len(slots)):
            yield KFlip.from_pairs(blocks, [slots[j] for j in range(len(slots)) if (bits >> j) & 1])


# -- hideouts ----------------------------------------------------------------


@dataclass(frozen=True)
class HideoutCertificate:
    U: tuple[int, ...]
    r: int
    k: int
    d: int
    verified: bool = False  # True once every k-flip has been checked

    @property
    def fw_lower_bound(self) -> int:
        """Radius-r flip-width is strictly larger than this."""
        return self.k


def few_neighbour_set(adj: Sequence[int], U: Sequence[int], r: int, d: int) -> list[int]:
    u_mask = mask_of(U)
    return [v for v in U if (ball_mask(adj, v, r) & u_mask).bit_count() <= d]


def hideout_check(g: Graph, U: Iterable[int], r: int, k: int, d: int, limit: int = FLIP_LIMIT) -> KFlip | None:
    """First k-flip under which more than ``d`` vertices of ``U`` see at most
    ``d`` vertices of ``U`` within distance ``r``; ``None`` if there is none."""
    U = sorted(set(U))
    if any(not 0 <= v < g.n for v in U):
        raise PreconditionError("U is not a vertex subset")
    if len(U) <= d:
        raise PreconditionError(f"|U| = {len(U)} <= d = {d}: the hideout condition would be vacuous")
    if k < 1 or r < 0 or d < 0:
        raise PreconditionError("need k >= 1, r >= 0, d >= 0")
    total = count_flips(g.n, k)
    if total > limit:
        raise PreconditionError(f"{total} flips exceed the enumeration limit {limit}")
    for f in all_flips(g.n, k):
        flipped = _flip_masks(g.masks, _toggles(g.n, f))
        if len(few_neighbour_set(flipped, U, r, d)) > d:
            return f
    return None


def hideout_from_witness(g: Graph, k: int, w: NcWitness) -> HideoutCertificate:
    """``w.X`` as a (2, k, k)-hideout, asserted by the witness conditions."""
    if k < 1:
        raise PreconditionError("k must be positive")
    want = 2 ** (2 * k + 1)
    if w.alpha != want:
        raise PreconditionError(f"witness alpha is {w.alpha}, expected 2^(2k+1) = {want}")
    problem = check_nc_witness(g, w)
    if problem is not None:
        raise PreconditionError(f"invalid witness: {problem}")
    if len(w.X) <= k:
        raise PreconditionError(f"|X| = {len(w.X)} must exceed k = {k}")
    return HideoutCertificate(tuple(sorted(w.X)), 2, k, k, verified=False)


def verify_hideout(g: Graph, cert: HideoutCertificate, limit: int = FLIP_LIMIT) -> tuple[HideoutCertificate, KFlip | None]:
    """Run the full flip enumeration; returns the upgraded certificate or the violator."""
    bad = hideout_check(g, cert.U, cert.r, cert.k, cert.d, limit)
    if bad is not None:
        return cert, bad
    return HideoutCertificate(cert.U, cert.r, cert.k, cert.d, verified=True), None
