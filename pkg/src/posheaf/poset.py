"""Finite posets as validated Hasse diagrams.

Elements are opaque names; the cover relation is the transitive
reduction of the order.  Posets are immutable after construction and
every derived poset (downsets, upsets, element removal) is rebuilt and
revalidated from scratch.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Optional, Sequence


class PosetError(Exception):
    pass


class UnknownElementError(PosetError):
    pass


class CycleError(PosetError):
    pass


class RedundantCoverError(PosetError):
    """A declared cover (u, v) is implied by a longer path u -> v."""


class IsomorphismSizeError(PosetError):
    """Isomorphism search is gated to small posets."""


# Backtracking isomorphism search is exponential; this is a desk-scale tool.
ISO_MAX_ELEMENTS = 24


class Poset:
    """Finite poset given by its Hasse diagram.

    Use :func:`build_poset` to construct one with validation.
    """

    __slots__ = ("elements", "covers", "_above", "_upper", "_lower", "_index")

    def __init__(self, elements, covers, _validated=False):
        if not _validated:
            p = build_poset(elements, covers)
            elements, covers = p.elements, p.covers
            self._above = p._above
            self._upper = p._upper
            self._lower = p._lower
        else:
            self._upper = {e: tuple(sorted(v for (u, v) in covers if u == e)) for e in elements}
            self._lower = {e: tuple(sorted(u for (u, v) in covers if v == e)) for e in elements}
            self._above = _strict_above(elements, self._upper)
        self.elements = tuple(elements)
        self.covers = frozenset(covers)
        self._index = {e: i for i, e in enumerate(self.elements)}

    # -- queries ------------------------------------------------------

    def __contains__(self, e) -> bool:
        return e in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, Poset)
            and set(self.elements) == set(other.elements)
            and self.covers == other.covers
        )

    def __hash__(self):
        return hash((frozenset(self.elements), self.covers))

    def __repr__(self):
        return f"Poset({len(self.elements)} elements, {len(self.covers)} covers)"

    def _check(self, *els):
        for e in els:
            if e not in self._index:
                raise UnknownElementError(f"unknown element: {e!r}")

    def upper_covers(self, e) -> tuple:
        self._check(e)
        return self._upper[e]

    def lower_covers(self, e) -> tuple:
        self._check(e)
        return self._lower[e]

    def strictly_above(self, e) -> frozenset:
        self._check(e)
        return self._above[e]

    def strictly_below(self, e) -> frozenset:
        self._check(e)
        return frozenset(u for u in self.elements if e in self._above[u])

    def maximal_elements(self) -> tuple:
        return tuple(e for e in self.elements if not self._upper[e])

    def minimal_elements(self) -> tuple:
        return tuple(e for e in self.elements if not self._lower[e])

    def linear_extension(self) -> tuple:
        """Elements sorted compatibly with the order (ties by name)."""
        indeg = {e: len(self._lower[e]) for e in self.elements}
        import heapq

        ready = [e for e in self.elements if indeg[e] == 0]
        heapq.heapify(ready)
        out = []
        while ready:
            e = heapq.heappop(ready)
            out.append(e)
            for v in self._upper[e]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(ready, v)
        return tuple(out)

    def height(self) -> int:
        """Length (edge count) of a longest chain; -1 for the empty poset."""
        if not self.elements:
            return -1
        depth = {}
        for e in self.linear_extension():
            depth[e] = 1 + max((depth[u] for u in self._lower[e]), default=0)
        return max(depth.values()) - 1


def _strict_above(elements, upper) -> dict:
    above = {}
    order = []
    indeg = {e: 0 for e in elements}
    for e in elements:
        for v in upper[e]:
            indeg[v] += 1
    stack = [e for e in elements if indeg[e] == 0]
    while stack:
        e = stack.pop()
        order.append(e)
        for v in upper[e]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    for e in reversed(order):
        acc = set()
        for v in upper[e]:
            acc.add(v)
            acc |= above[v]
        above[e] = frozenset(acc)
    return above


def build_poset(elements: Iterable[Hashable], covers: Iterable[tuple]) -> Poset:
    """Validate and build a poset from element names and cover pairs.

    Rejects duplicate names, unknown endpoints, cycles, and covers that
    are transitively implied by longer paths.
    """
    elements = tuple(elements)
    if len(set(elements)) != len(elements):
        dupes = sorted({e for e in elements if list(elements).count(e) > 1})
        raise PosetError(f"duplicate element names: {dupes}")
    known = set(elements)
    covers = {tuple(c) for c in covers}
    for (u, v) in covers:
        if u not in known:
            raise UnknownElementError(f"unknown element in cover: {u!r}")
        if v not in known:
            raise UnknownElementError(f"unknown element in cover: {v!r}")
    upper = {e: [] for e in elements}
    for (u, v) in covers:
        upper[u].append(v)
    # cycle check: Kahn's algorithm
    indeg = {e: 0 for e in elements}
    for (u, v) in covers:
        indeg[v] += 1
    stack = [e for e in elements if indeg[e] == 0]
    seen = 0
    while stack:
        e = stack.pop()
        seen += 1
        for v in upper[e]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    if seen != len(elements):
        cyc = sorted(e for e in elements if indeg[e] > 0)
        raise CycleError(f"cover relation contains a cycle through: {cyc}")
    # redundancy: (u, v) must not be reachable from u via a path avoiding
    # the direct edge
    up = {e: tuple(sorted(vs)) for e, vs in upper.items()}
    above = _strict_above(elements, up)
    for (u, v) in covers:
        for w in up[u]:
            if w != v and (v == w or v in above[w]):
                raise RedundantCoverError(
                    f"cover ({u!r}, {v!r}) is implied by a path through {w!r}"
                )
    return Poset(elements, covers, _validated=True)


def leq(p: Poset, u, v) -> bool:
    """u <= v in the poset order."""
    p._check(u, v)
    return u == v or v in p._above[u]


def induced_subposet(p: Poset, keep) -> Poset:
    """Subposet on `keep` with the induced order; covers recomputed."""
    keep = set(keep)
    for e in keep:
        p._check(e)
    sub = [e for e in p.elements if e in keep]
    above = {e: p._above[e] & keep for e in sub}
    below: dict = {e: set() for e in sub}
    for u in sub:
        for v in above[u]:
            below[v].add(u)
    # (u, v) is an induced cover iff no kept element lies strictly between
    covers = {
        (u, v) for u in sub for v in above[u] if not (above[u] & below[v])
    }
    return build_poset(sub, covers)


def downset(p: Poset, s) -> Poset:
    """The subposet of elements strictly below s."""
    p._check(s)
    return induced_subposet(p, p.strictly_below(s))


def upset(p: Poset, s) -> Poset:
    """The subposet of elements strictly above s."""
    p._check(s)
    return induced_subposet(p, p._above[s])


def remove_element(p: Poset, s) -> Poset:
    p._check(s)
    return induced_subposet(p, set(p.elements) - {s})


def is_downbeat(p: Poset, s) -> bool:
    """s has a unique lower cover (which then dominates everything below)."""
    return len(p.lower_covers(s)) == 1


def is_upbeat_poset(p: Poset, s) -> bool:
    """s has a unique upper cover (order-theoretic condition only)."""
    return len(p.upper_covers(s)) == 1


class OrderComplex:
    """All chains of a poset, grouped by dimension.

    `simplices[k]` lists the k-dimensional simplices (chains of k+1
    elements), each as a tuple increasing in the poset order.
    """

    __slots__ = ("simplices",)

    def __init__(self, simplices: Sequence[Sequence[tuple]]):
        self.simplices = tuple(tuple(level) for level in simplices)

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    @property
    def vertex_count(self) -> int:
        return len(self.simplices[0]) if self.simplices else 0

    def counts(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.simplices)

    def __eq__(self, other):
        return isinstance(other, OrderComplex) and \
            [set(l) for l in self.simplices] == [set(l) for l in other.simplices]

    def __repr__(self):
        return f"OrderComplex(counts={self.counts()})"


def order_complex(p: Poset) -> OrderComplex:
    """Every nonempty chain of p, as a simplicial complex."""
    levels: list[list[tuple]] = []
    ext = p.linear_extension()
    succ = {e: sorted(p._above[e]) for e in p.elements}

    def extend(chain: tuple, top):
        k = len(chain) - 1
        while len(levels) <= k:
            levels.append([])
        levels[k].append(chain)
        for v in succ[top]:
            extend(chain + (v,), v)

    for e in ext:
        extend((e,), e)
    for level in levels:
        level.sort()
    return OrderComplex(levels)


def _signature(p: Poset):
    """Refined per-element invariants for isomorphism pruning."""
    depth = {}
    for e in p.linear_extension():
        depth[e] = 1 + max((depth[u] for u in p.lower_covers(e)), default=0)
    height_up = {}
    for e in reversed(p.linear_extension()):
        height_up[e] = 1 + max((height_up[v] for v in p.upper_covers(e)), default=0)
    sig = {
        e: (
            len(p.lower_covers(e)),
            len(p.upper_covers(e)),
            depth[e],
            height_up[e],
            len(p.strictly_below(e)),
            len(p._above[e]),
        )
        for e in p.elements
    }
    # one round of neighborhood refinement
    refined = {
        e: (
            sig[e],
            tuple(sorted(sig[u] for u in p.lower_covers(e))),
            tuple(sorted(sig[v] for v in p.upper_covers(e))),
        )
        for e in p.elements
    }
    return refined


def posets_isomorphic(p: Poset, q: Poset) -> Optional[dict]:
    """A cover-preserving bijection p -> q, or None.

    Backtracking search pruned by degree/height signatures; inputs are
    gated to ISO_MAX_ELEMENTS elements.
    """
    if len(p) > ISO_MAX_ELEMENTS or len(q) > ISO_MAX_ELEMENTS:
        raise IsomorphismSizeError(
            f"isomorphism search limited to {ISO_MAX_ELEMENTS} elements"
        )
    if len(p) != len(q) or len(p.covers) != len(q.covers):
        return None
    sp, sq = _signature(p), _signature(q)
    if sorted(sp.values()) != sorted(sq.values()):
        return None
    # assign rarest-signature elements first
    from collections import Counter

    freq = Counter(sp.values())
    order = sorted(p.elements, key=lambda e: (freq[sp[e]], e))
    candidates = {e: [f for f in q.elements if sq[f] == sp[e]] for e in p.elements}
    mapping: dict = {}
    used: set = set()

    def ok(e, f) -> bool:
        for u in p.lower_covers(e):
            if u in mapping and (mapping[u], f) not in q.covers:
                return False
        for v in p.upper_covers(e):
            if v in mapping and (f, mapping[v]) not in q.covers:
                return False
        # non-covers must map to non-covers (cover counts are equal, so
        # preserving all covers in one direction suffices at the end; but
        # prune early on comparabilities)
        for u, fu in mapping.items():
            pu = leq(p, u, e)
            pv = leq(p, e, u)
            if pu != leq(q, fu, f) or pv != leq(q, f, fu):
                return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        e = order[i]
        for f in candidates[e]:
            if f in used or not ok(e, f):
                continue
            mapping[e] = f
            used.add(f)
            if search(i + 1):
                return True
            del mapping[e]
            used.discard(f)
        return False

    if search(0):
        return dict(mapping)
    return None
