"""Exact dense matrices over Q, GF(p) and Z.

Ranks, kernels and Smith normal forms are computed exactly; no floating
point anywhere.  Matrices are immutable.  For large sparse inputs (Roos
differentials, simplicial boundary matrices) rank and SNF switch to
sparse elimination internally; the dense row-major representation is the
contract, the sparse path is an implementation detail.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class LinalgError(Exception):
    pass


class KindMismatchError(LinalgError):
    """Operands carry different scalar kinds (e.g. Q vs GF(7))."""


class ShapeError(LinalgError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Rationals:
    """The field Q; elements are fractions.Fraction (always reduced)."""

    name = "Q"
    is_field = True

    def coerce(self, x):
        return Fraction(x)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


class Integers:
    """The ring Z; elements are Python ints (arbitrary precision)."""

    name = "Z"
    is_field = False

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise LinalgError(f"not an integer: {x}")
            return x.numerator
        return int(x)

    def __repr__(self):
        return "ZZ"

    def __eq__(self, other):
        return isinstance(other, Integers)

    def __hash__(self):
        return hash("Z")


class PrimeField:
    """GF(p) for prime p < 2^31; elements are ints in [0, p)."""

    is_field = True

    def __init__(self, p: int):
        if not (2 <= p < 2**31):
            raise LinalgError(f"modulus out of range: {p}")
        if not _is_prime(p):
            raise LinalgError(f"modulus is not prime: {p}")
        self.p = p
        self.name = f"GF({p})"

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise LinalgError(f"not a GF({self.p}) residue: {x}")
            x = x.numerator
        return int(x) % self.p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = Rationals()
ZZ = Integers()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


# Above this entry count rank/SNF use the sparse/vectorized paths.
_DENSE_LIMIT = 10_000


class Matrix:
    """Immutable dense matrix with a fixed scalar ring.

    Entries are a tuple of row tuples.  0xn and nx0 shapes are legal.
    A cover map for an edge (u, v) of a poset is stored here as a
    dim(v) x dim(u) matrix acting on column vectors.
    """

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, rows: int, cols: int, entries):
        if rows < 0 or cols < 0:
            raise ShapeError(f"negative shape {rows}x{cols}")
        ents = tuple(tuple(ring.coerce(x) for x in row) for row in entries)
        if len(ents) != rows or any(len(r) != cols for r in ents):
            raise ShapeError(f"entries do not fill a {rows}x{cols} matrix")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        self.entries = ents

    @classmethod
    def from_rows(cls, ring, rows: Sequence[Sequence]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        return cls(ring, r, c, rows)

    @classmethod
    def identity(cls, ring, n: int) -> "Matrix":
        return cls(ring, n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring, rows: int, cols: int) -> "Matrix":
        return cls(ring, rows, cols, [[0] * cols for _ in range(rows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ring, self.entries))

    def __repr__(self):
        return f"Matrix({self.ring}, {self.rows}x{self.cols})"

    def is_zero(self) -> bool:
        return all(not any(row) for row in self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, self.cols, self.rows,
                      [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return compose(self, other)

    def apply(self, vec: Sequence) -> tuple:
        """Matrix-vector product (column vector)."""
        if len(vec) != self.cols:
            raise ShapeError(f"vector length {len(vec)} != cols {self.cols}")
        v = [self.ring.coerce(x) for x in vec]
        out = []
        for row in self.entries:
            acc = self.ring.coerce(0)
            for a, x in zip(row, v):
                if a:
                    acc += a * x
            if isinstance(self.ring, PrimeField):
                acc %= self.ring.p
            out.append(acc)
        return tuple(out)


def compose(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product a . b (apply b first when acting on columns)."""
    if a.ring != b.ring:
        raise KindMismatchError(f"{a.ring} vs {b.ring}")
    if a.cols != b.rows:
        raise ShapeError(f"cannot compose {a.rows}x{a.cols} with {b.rows}x{b.cols}")
    p = a.ring.p if isinstance(a.ring, PrimeField) else None
    zero = a.ring.coerce(0)
    out = [[zero] * b.cols for _ in range(a.rows)]
    # Iterate only over nonzeros of a; Roos differentials are very sparse.
    for i, arow in enumerate(a.entries):
        orow = out[i]
        for k, aik in enumerate(arow):
            if not aik:
                continue
            brow = b.entries[k]
            for j, bkj in enumerate(brow):
                if bkj:
                    orow[j] = orow[j] + aik * bkj
        if p is not None:
            out[i] = [x % p for x in orow]
    return Matrix(a.ring, a.rows, b.cols, out)


def _require_field(m: Matrix, op: str):
    if not m.ring.is_field:
        raise KindMismatchError(f"{op} requires field entries, got {m.ring}")


def _sparse_rows(m: Matrix):
    zero = m.ring.coerce(0)
    rows = []
    for row in m.entries:
        d = {j: x for j, x in enumerate(row) if x != zero}
        rows.append(d)
    return rows


def _rank_sparse_field(m: Matrix) -> int:
    """Exact sparse Gaussian elimination; Markowitz-style pivoting.

    Prefers +-1 pivots so that integer-entried inputs (boundary and Roos
    matrices) eliminate without coefficient growth.
    """
    ring = m.ring
    p = ring.p if isinstance(ring, PrimeField) else None
    rows = [d for d in _sparse_rows(m) if d]
    col_rows: dict[int, set[int]] = {}
    for i, d in enumerate(rows):
        for j in d:
            col_rows.setdefault(j, set()).add(i)
    alive = set(range(len(rows)))
    rank = 0
    while alive:
        # cheapest pivot: unit value if possible, then sparsest row
        best = None
        for i in alive:
            d = rows[i]
            cost = len(d)
            unit = any(v == 1 or v == -1 for v in d.values())
            key = (0 if unit else 1, cost)
            if best is None or key < best[0]:
                best = (key, i)
                if key == (0, 1):
                    break
        i = best[1]
        d = rows[i]
        # pivot column: unit entry in the fewest-populated column
        pj, pv = None, None
        for j, v in d.items():
            u = v == 1 or v == -1
            k = (0 if u else 1, len(col_rows.get(j, ())))
            if pj is None or k < pk:
                pj, pv, pk = j, v, k
        alive.discard(i)
        rank += 1
        inv = pow(pv, p - 2, p) if p is not None else 1 / pv
        targets = [t for t in col_rows.get(pj, ()) if t in alive]
        for t in targets:
            dt = rows[t]
            f = dt[pj] * inv
            if p is not None:
                f %= p
            for j, v in d.items():
                nv = dt.get(j, 0) - f * v
                if p is not None:
                    nv %= p
                if nv:
                    dt[j] = nv
                    col_rows.setdefault(j, set()).add(t)
                else:
                    if j in dt:
                        del dt[j]
                        col_rows[j].discard(t)
            if not dt:
                alive.discard(t)
        for t in col_rows.get(pj, ()):
            rows[t].pop(pj, None)
        col_rows.pop(pj, None)
    return rank


def _rank_gf_numpy(m: Matrix) -> int:
    """Vectorized elimination over GF(p); exact since p < 2^31 fits int64."""
    p = m.ring.p
    a = np.array(m.entries, dtype=np.int64).reshape(m.rows, m.cols) % p
    rank = 0
    row = 0
    for col in range(m.cols):
        piv = None
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        inv = pow(int(a[row, col]), p - 2, p)
        a[row] = (a[row] * inv) % p
        below = np.nonzero(a[row + 1:, col])[0]
        if below.size:
            idx = below + row + 1
            a[idx] = (a[idx] - np.outer(a[idx, col], a[row])) % p
        rank += 1
        row += 1
        if row == m.rows:
            break
    return rank


def _rref_dense(m: Matrix):
    """Dense reduced row echelon form; returns (rows, pivot_cols)."""
    ring = m.ring
    p = ring.p if isinstance(ring, PrimeField) else None
    a = [list(row) for row in m.entries]
    pivots = []
    r = 0
    for c in range(m.cols):
        piv = None
        for i in range(r, m.rows):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p) if p is not None else 1 / Fraction(a[r][c])
        a[r] = [(x * inv) % p if p is not None else x * inv for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                if p is not None:
                    a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
                else:
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return a, pivots


def rank(m: Matrix) -> int:
    """Dimension of the column span, over Q or GF(p)."""
    _require_field(m, "rank")
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.rows * m.cols > _DENSE_LIMIT:
        if isinstance(m.ring, PrimeField):
            return _rank_gf_numpy(m)
        return _rank_sparse_field(m)
    _, pivots = _rref_dense(m)
    return len(pivots)


def kernel_basis(m: Matrix) -> list[tuple]:
    """Basis of {x : m.x = 0} as column vectors (tuples)."""
    _require_field(m, "kernel_basis")
    if m.cols == 0:
        return []
    if m.rows == 0:
        eye = Matrix.identity(m.ring, m.cols)
        return [eye.entries[i] for i in range(m.cols)]
    a, pivots = _rref_dense(m)
    pivset = set(pivots)
    free = [c for c in range(m.cols) if c not in pivset]
    ring = m.ring
    p = ring.p if isinstance(ring, PrimeField) else None
    basis = []
    for f in free:
        v = [ring.coerce(0)] * m.cols
        v[f] = ring.coerce(1)
        for r, c in enumerate(pivots):
            x = -a[r][f]
            v[c] = x % p if p is not None else x
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class SmithForm:
    """Invariant factors d_1 | d_2 | ... | d_r of an integer matrix."""

    diagonal: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.diagonal, self.diagonal[1:]):
            if b % a != 0:
                raise LinalgError(f"broken divisibility chain: {self.diagonal}")
        if any(d < 1 for d in self.diagonal):
            raise LinalgError(f"nonpositive invariant factor: {self.diagonal}")

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)


def _snf_dense(rows: list[dict[int, int]]) -> list[int]:
    """Textbook SNF by elementary operations, min-abs pivot; on dicts."""
    # densify
    cols = sorted({j for d in rows for j in d})
    cmap = {j: k for k, j in enumerate(cols)}
    a = [[0] * len(cols) for _ in rows]
    for i, d in enumerate(rows):
        for j, v in d.items():
            a[i][cmap[j]] = v
    nr, nc = len(a), len(cols)
    diag = []
    t = 0
    while True:
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (piv is None or abs(a[i][j]) < piv[0]):
                    piv = (abs(a[i][j]), i, j)
        if piv is None:
            break
        _, pi, pj = piv
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        dirty = True
            # clear row t
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
            if not dirty:
                break
        diag.append(abs(a[t][t]))
        t += 1
        if t == nr or t == nc:
            break
    return diag


def smith_normal_form(m: Matrix) -> SmithForm:
    """Smith normal form of an integer matrix.

    Unit pivots are eliminated sparsely first (boundary matrices are
    mostly +-1), then the small remaining block goes through the dense
    minimal-pivot reduction; the divisibility chain is fixed at the end.
    """
    if m.ring != ZZ:
        raise KindMismatchError(f"smith_normal_form requires Z entries, got {m.ring}")
    rows = [d for d in _sparse_rows(m) if d]
    col_rows: dict[int, set[int]] = {}
    for i, d in enumerate(rows):
        for j in d:
            col_rows.setdefault(j, set()).add(i)
    alive = set(range(len(rows)))
    ones = 0
    while True:
        # pick a unit pivot minimizing fill
        best = None
        for i in alive:
            for j, v in rows[i].items():
                if v == 1 or v == -1:
                    k = (len(rows[i]) - 1) * (len(col_rows[j]) - 1)
                    if best is None or k < best[0]:
                        best = (k, i, j, v)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pi, pj, pv = best
        d = rows[pi]
        alive.discard(pi)
        ones += 1
        for t in [t for t in col_rows.get(pj, ()) if t in alive]:
            dt = rows[t]
            f = dt[pj] * pv  # pv in {1,-1}: f = dt[pj] / pv
            for j, v in d.items():
                nv = dt.get(j, 0) - f * v
                if nv:
                    dt[j] = nv
                    col_rows.setdefault(j, set()).add(t)
                elif j in dt:
                    del dt[j]
                    col_rows[j].discard(t)
            if not dt:
                alive.discard(t)
        # column pj now has its only nonzero in the pivot row: clearing the
        # pivot row by column ops touches nothing else, so drop row and col.
        for j in d:
            col_rows.get(j, set()).discard(pi)
        col_rows.pop(pj, None)
    rest = [rows[i] for i in alive if rows[i]]
    diag = [1] * ones + _snf_dense(rest) if rest else [1] * ones
    diag = [d for d in diag if d != 0]
    # restore divisibility by pairwise gcd/lcm
    import math

    n = len(diag)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(i + 1, n):
                if diag[j] % diag[i] != 0:
                    g = math.gcd(diag[i], diag[j])
                    l = diag[i] * diag[j] // g
                    diag[i], diag[j] = g, l
                    changed = True
        diag.sort()
    return SmithForm(tuple(diag))
