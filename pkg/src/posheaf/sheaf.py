"""Sheaves on finite posets as commuting diagrams of linear maps.

A sheaf assigns a stalk dimension to every element and a matrix to every
Hasse cover edge, maps pointing upward; all composite maps between
comparable elements must agree along every cover path.  Stalks carry no
basis data beyond the matrix conventions: a cover map for (u, v) is a
dim(v) x dim(u) matrix acting on column vectors.
"""

from __future__ import annotations

from typing import Mapping, Optional

from .exact_linalg import GF, QQ, Matrix, PrimeField, Rationals, rank, kernel_basis, compose
from .poset import Poset, induced_subposet, leq


class SheafError(Exception):
    pass


class CommutativityError(SheafError):
    def __init__(self, lower, upper, left: Matrix, right: Matrix):
        self.lower = lower
        self.upper = upper
        self.left = left
        self.right = right
        super().__init__(
            f"composites from {lower!r} to {upper!r} disagree along different cover paths"
        )


class Sheaf:
    """Stalk dimensions plus one matrix per cover edge of the base poset.

    Construction validates shapes only; call :func:`check_commutativity`
    (or build through a constructor in this module) to verify that the
    diagram commutes.
    """

    __slots__ = ("base", "ring", "stalk_dim", "cover_maps", "_canon")

    def __init__(self, base: Poset, ring, stalk_dim: Mapping, cover_maps: Mapping):
        if not isinstance(ring, (Rationals, PrimeField)):
            raise SheafError(f"sheaf coefficients must be Q or GF(p), got {ring!r}")
        self.base = base
        self.ring = ring
        sd = {}
        for e in base.elements:
            if e not in stalk_dim:
                raise SheafError(f"missing stalk dimension for {e!r}")
            d = int(stalk_dim[e])
            if d < 0:
                raise SheafError(f"negative stalk dimension at {e!r}")
            sd[e] = d
        extra = set(stalk_dim) - set(base.elements)
        if extra:
            raise SheafError(f"stalks for unknown elements: {sorted(extra)}")
        self.stalk_dim = sd
        cm = {}
        for cov in base.covers:
            if cov not in cover_maps:
                raise SheafError(f"missing map for cover {cov!r}")
            m = cover_maps[cov]
            u, v = cov
            if m.ring != ring:
                raise SheafError(f"map for {cov!r} has ring {m.ring}, sheaf has {ring}")
            if (m.rows, m.cols) != (sd[v], sd[u]):
                raise SheafError(
                    f"map for {cov!r} has shape {m.rows}x{m.cols}, "
                    f"expected {sd[v]}x{sd[u]}"
                )
            cm[cov] = m
        extra = set(cover_maps) - set(base.covers)
        if extra:
            raise SheafError(f"maps for non-covers: {sorted(extra)}")
        self.cover_maps = cm
        self._canon = None

    def __eq__(self, other):
        return (
            isinstance(other, Sheaf)
            and self.base == other.base
            and self.ring == other.ring
            and self.stalk_dim == other.stalk_dim
            and self.cover_maps == other.cover_maps
        )

    def __repr__(self):
        return f"Sheaf({self.ring}, {len(self.base)} stalks)"

    def total_dim(self) -> int:
        return sum(self.stalk_dim.values())

    def restriction(self, u, v) -> Matrix:
        """The composite map u -> v for u <= v, along the canonical path.

        The canonical path recurses through the smallest-named lower
        cover; commutativity makes the choice immaterial.
        """
        if not leq(self.base, u, v):
            raise SheafError(f"{u!r} is not below {v!r}")
        return self._canonical()[(u, v)]

    def _canonical(self) -> dict:
        if self._canon is None:
            canon = {}
            for v in self.base.linear_extension():
                canon[(v, v)] = Matrix.identity(self.ring, self.stalk_dim[v])
                for u in self.base.strictly_below(v):
                    w = min(w for w in self.base.lower_covers(v) if leq(self.base, u, w))
                    canon[(u, v)] = compose(self.cover_maps[(w, v)], canon[(u, w)])
            self._canon = canon
        return self._canon


class SheavedSpace:
    """A poset together with a sheaf on it."""

    __slots__ = ("poset", "sheaf")

    def __init__(self, poset: Poset, sheaf: Sheaf):
        if sheaf.base != poset:
            raise SheafError("sheaf base differs from the given poset")
        self.poset = poset
        self.sheaf = sheaf

    def __eq__(self, other):
        return (
            isinstance(other, SheavedSpace)
            and self.poset == other.poset
            and self.sheaf == other.sheaf
        )

    def __repr__(self):
        return f"SheavedSpace({len(self.poset)} elements, {self.sheaf.ring})"


class SectionSpace:
    """Basis of compatible stalk tuples; coordinates ordered by element.

    `offsets` maps each element to its first coordinate in the ambient
    product of stalks.
    """

    __slots__ = ("ambient_dim", "basis", "offsets")

    def __init__(self, ambient_dim: int, basis, offsets):
        self.ambient_dim = ambient_dim
        self.basis = tuple(tuple(v) for v in basis)
        self.offsets = dict(offsets)

    @property
    def dimension(self) -> int:
        return len(self.basis)


def check_commutativity(f: Sheaf) -> tuple[bool, Optional[CommutativityError]]:
    """Verify path-independence of composite maps.

    A canonical composite is fixed per comparable pair by a topological
    sweep; every single-step alternative factoring is compared against
    it, which by induction covers all cover paths.  Returns (True, None)
    or (False, error) with the first violating pair.
    """
    canon = f._canonical()
    base = f.base
    for v in base.linear_extension():
        for u in sorted(base.strictly_below(v)):
            expected = canon[(u, v)]
            for w in base.lower_covers(v):
                if not leq(base, u, w):
                    continue
                got = compose(f.cover_maps[(w, v)], canon[(u, w)])
                if got != expected:
                    return False, CommutativityError(u, v, expected, got)
    return True, None


def require_commutative(f: Sheaf) -> None:
    ok, err = check_commutativity(f)
    if not ok:
        raise err


def constant_sheaf(p: Poset, ring, rank_: int = 1) -> Sheaf:
    """Stalk of dimension `rank_` everywhere, identity cover maps."""
    if rank_ < 0:
        raise SheafError("negative rank")
    eye = Matrix.identity(ring, rank_)
    return Sheaf(p, ring, {e: rank_ for e in p.elements},
                 {c: eye for c in p.covers})


def is_constant(f: Sheaf) -> bool:
    dims = set(f.stalk_dim.values())
    if len(dims) > 1:
        return False
    r = dims.pop() if dims else 0
    eye = Matrix.identity(f.ring, r)
    return all(m == eye for m in f.cover_maps.values())


def ceil_sheaf(p: Poset, s, ring, w: int = 1) -> Sheaf:
    """Stalk W on every element <= s, identities inside the support."""
    p._check(s)
    support = set(p.strictly_below(s)) | {s}
    return _supported_sheaf(p, support, ring, w)


def strict_down_sheaf(p: Poset, s, ring, w: int = 1) -> Sheaf:
    """Stalk W on every element strictly below s."""
    p._check(s)
    return _supported_sheaf(p, set(p.strictly_below(s)), ring, w)


def skyscraper_sheaf(p: Poset, s, ring, w: int = 1) -> Sheaf:
    """Stalk W at s only; every map touching s is zero."""
    p._check(s)
    return _supported_sheaf(p, {s}, ring, w, identity_inside=False)


def ideal_sheaf(p: Poset, ideal, ring, w: int = 1) -> Sheaf:
    """Stalk W on a lower order ideal, identities inside, zero outside."""
    ideal = set(ideal)
    for t in ideal:
        p._check(t)
        for s in p.strictly_below(t):
            if s not in ideal:
                raise SheafError(
                    f"{sorted(ideal)} is not a lower ideal: {s!r} < {t!r} is missing"
                )
    return _supported_sheaf(p, ideal, ring, w)


def _supported_sheaf(p: Poset, support: set, ring, w: int, identity_inside=True) -> Sheaf:
    if w < 0:
        raise SheafError("negative rank")
    dims = {e: (w if e in support else 0) for e in p.elements}
    maps = {}
    for (u, v) in p.covers:
        if identity_inside and u in support and v in support:
            maps[(u, v)] = Matrix.identity(ring, w)
        else:
            maps[(u, v)] = Matrix.zeros(ring, dims[v], dims[u])
    return Sheaf(p, ring, dims, maps)


def restrict(sp: SheavedSpace, keep) -> SheavedSpace:
    """Sheaved space induced on a subset of elements.

    Maps of induced covers are composites along cover paths of the
    original poset; commutativity makes them well defined.
    """
    keep = set(keep)
    sub = induced_subposet(sp.poset, keep)
    f = sp.sheaf
    dims = {e: f.stalk_dim[e] for e in sub.elements}
    maps = {(u, v): f.restriction(u, v) for (u, v) in sub.covers}
    return SheavedSpace(sub, Sheaf(sub, f.ring, dims, maps))


def pullback(f_map: Mapping, source: Poset, g: Sheaf) -> Sheaf:
    """Pullback of g along a monotone map given element-wise.

    Stalk at s is the stalk at f(s); a cover (u, v) of the source gets
    the composite map f(u) -> f(v) of g (the identity when f(u) = f(v)).
    """
    target = g.base
    for e in source.elements:
        if e not in f_map:
            raise SheafError(f"map not defined at {e!r}")
        target._check(f_map[e])
    for u in source.elements:
        for v in source.strictly_above(u):
            if not leq(target, f_map[u], f_map[v]):
                raise SheafError(
                    f"map is not monotone: {u!r} <= {v!r} but "
                    f"{f_map[u]!r} is not below {f_map[v]!r}"
                )
    dims = {e: g.stalk_dim[f_map[e]] for e in source.elements}
    maps = {(u, v): g.restriction(f_map[u], f_map[v]) for (u, v) in source.covers}
    return Sheaf(source, g.ring, dims, maps)


def global_sections(sp: SheavedSpace) -> SectionSpace:
    """The space of compatible stalk tuples, as a kernel computation.

    Stacks, for every cover (u, v), the equation res(x_u) - x_v = 0 and
    returns a kernel basis of the resulting block matrix.
    """
    f = sp.sheaf
    ring = f.ring
    p = sp.poset
    offsets = {}
    total = 0
    for e in p.elements:
        offsets[e] = total
        total += f.stalk_dim[e]
    rows = []
    for (u, v) in sorted(p.covers):
        m = f.cover_maps[(u, v)]
        for i in range(m.rows):
            row = [ring.coerce(0)] * total
            for j in range(m.cols):
                row[offsets[u] + j] = m.entries[i][j]
            row[offsets[v] + i] = row[offsets[v] + i] - ring.coerce(1)
            if isinstance(ring, PrimeField):
                row = [x % ring.p for x in row]
            rows.append(row)
    mat = Matrix(ring, len(rows), total, rows)
    basis = kernel_basis(mat)
    return SectionSpace(total, basis, offsets)
