"""Exact linear algebra over fields and Z.

Submodules of R^d are kept in a canonical basis (reduced row echelon form
over fields, row-style Hermite normal form over Z), so equal submodules
compare bit-identically.  Vectors are plain lists/tuples of ring scalars;
large sparse systems go through SparseEchelon which stores rows as
column->scalar dicts.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .rings import CapabilityError, Integers, Rationals, Ring


def _require_submodule_support(ring: Ring):
    if not ring.supports_submodules:
        raise CapabilityError(
            f"submodule computations are not supported over {ring.name}; "
            "use a field or Z"
        )


class SparseEchelon:
    """Incrementally maintained fully-reduced echelon form over a field.

    Rows are dicts mapping column index to a nonzero scalar.  Each accepted
    pivot row is normalized to pivot 1 and its pivot column is eliminated
    from every other stored row, so reading off kernels is immediate.
    """

    def __init__(self, ring: Ring):
        if not ring.is_field:
            raise CapabilityError("SparseEchelon requires a field")
        self.ring = ring
        self.pivots = {}  # pivot column -> row dict

    def reduce(self, row: dict) -> dict:
        """Return row reduced against the current pivots (row is consumed)."""
        ring = self.ring
        zero = ring.zero()
        for col in sorted(row):
            if col not in row:
                continue
            piv = self.pivots.get(col)
            if piv is None:
                continue
            coeff = row[col]
            if coeff == zero:
                del row[col]
                continue
            for c, v in piv.items():
                cur = row.get(c, zero)
                nv = ring.sub(cur, ring.mul(coeff, v))
                if nv == zero:
                    row.pop(c, None)
                else:
                    row[c] = nv
        return {c: v for c, v in row.items() if v != zero}

    def add_row(self, row: dict) -> bool:
        """Insert a row; returns True if it increased the rank."""
        ring = self.ring
        zero = ring.zero()
        row = self.reduce(dict(row))
        if not row:
            return False
        pcol = min(row)
        pinv = ring.inv(row[pcol])
        row = {c: ring.mul(pinv, v) for c, v in row.items()}
        # eliminate the new pivot column from existing rows
        for other in self.pivots.values():
            coeff = other.get(pcol)
            if coeff is None:
                continue
            for c, v in row.items():
                cur = other.get(c, zero)
                nv = ring.sub(cur, ring.mul(coeff, v))
                if nv == zero:
                    other.pop(c, None)
                else:
                    other[c] = nv
        self.pivots[pcol] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel_basis(self, width: int) -> list:
        """Basis of the null space of the row span, as dense vectors."""
        ring = self.ring
        zero, one = ring.zero(), ring.one()
        free = [c for c in range(width) if c not in self.pivots]
        basis = []
        for f in free:
            v = [zero] * width
            v[f] = one
            for pcol, row in self.pivots.items():
                coeff = row.get(f)
                if coeff is not None:
                    v[pcol] = ring.neg(coeff)
            basis.append(v)
        return basis


def rref(rows, ring: Ring):
    """Reduced row echelon form; returns (canonical nonzero rows, pivot cols)."""
    ech = SparseEchelon(ring)
    zero = ring.zero()
    for r in rows:
        ech.add_row({i: v for i, v in enumerate(r) if v != zero})
    width = max((len(r) for r in rows), default=0)
    out = []
    for pcol in sorted(ech.pivots):
        row = ech.pivots[pcol]
        out.append(tuple(row.get(i, zero) for i in range(width)))
    return out, sorted(ech.pivots)


def hnf(rows):
    """Row-style Hermite normal form of integer rows.

    Convention (fixed once for the whole package): pivots are positive,
    rows are sorted by pivot column, and entries above a pivot are reduced
    into [0, pivot).  Zero rows are dropped.
    """
    work = [list(r) for r in rows if any(r)]
    if not work:
        return []
    width = len(work[0])
    done = []  # list of (pivcol, row)
    col = 0
    while work and col < width:
        live = [r for r in work if r[col] != 0]
        if not live:
            col += 1
            continue
        # gcd-reduce the column until a single nonzero entry remains
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            for r in live[1:]:
                q = r[col] // piv[col]
                if q:
                    for i in range(col, width):
                        r[i] -= q * piv[i]
            live = [r for r in live if r[col] != 0]
        piv = live[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        work = [r for r in work if r[col] == 0 and any(r)]
        done.append((col, piv))
        col += 1
    # reduce entries above each pivot
    done.sort()
    for i, (pc, prow) in enumerate(done):
        for j in range(i):
            r = done[j][1]
            q = r[pc] // prow[pc]
            if q:
                for k in range(pc, len(prow)):
                    r[k] -= q * prow[k]
    return [tuple(r) for _, r in done]


def hnf_with_transform(rows):
    """Row HNF with a unimodular transform: returns (H, U) with U*A = H.

    H has the same number of rows as the input (zero rows included, at the
    bottom); U is square unimodular.
    """
    m = len(rows)
    width = len(rows[0]) if m else 0
    a = [list(r) for r in rows]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    row = 0
    for col in range(width):
        live = [i for i in range(row, m) if a[i][col] != 0]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda i: abs(a[i][col]))
            p = live[0]
            for i in live[1:]:
                q = a[i][col] // a[p][col]
                if q:
                    for k in range(width):
                        a[i][k] -= q * a[p][k]
                    for k in range(m):
                        u[i][k] -= q * u[p][k]
            live = [i for i in live if a[i][col] != 0]
        p = live[0]
        a[row], a[p] = a[p], a[row]
        u[row], u[p] = u[p], u[row]
        if a[row][col] < 0:
            a[row] = [-x for x in a[row]]
            u[row] = [-x for x in u[row]]
        for i in range(row):
            q = a[i][col] // a[row][col]
            if q:
                for k in range(width):
                    a[i][k] -= q * a[row][k]
                for k in range(m):
                    u[i][k] -= q * u[row][k]
        row += 1
        if row == m:
            break
    return [tuple(r) for r in a], [tuple(r) for r in u]


class Submodule:
    """An R-submodule of R^d in canonical basis form."""

    __slots__ = ("ring", "ambient", "basis", "_pivots")

    def __init__(self, ring: Ring, ambient: int, canonical_basis, pivots):
        self.ring = ring
        self.ambient = ambient
        self.basis = tuple(tuple(r) for r in canonical_basis)
        self._pivots = tuple(pivots)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Submodule)
            and self.ring == other.ring
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ring, self.ambient, self.basis))

    def __repr__(self):
        return f"Submodule(ring={self.ring.name}, ambient={self.ambient}, rank={self.rank})"

    def contains(self, vector) -> bool:
        if len(vector) != self.ambient:
            raise ValueError(
                f"dimension mismatch: vector of length {len(vector)} "
                f"in ambient dimension {self.ambient}"
            )
        return self.reduce(vector) is not None

    def reduce(self, vector):
        """Coefficients of vector on the canonical basis, or None if outside."""
        ring = self.ring
        zero = ring.zero()
        v = list(vector)
        coeffs = []
        if isinstance(ring, Integers):
            for (pc, row) in zip(self._pivots, self.basis):
                q, r = divmod(v[pc], row[pc])
                if r != 0:
                    return None
                if q:
                    for i in range(pc, self.ambient):
                        v[i] -= q * row[i]
                coeffs.append(q)
        else:
            for (pc, row) in zip(self._pivots, self.basis):
                c = v[pc]
                if c != zero:
                    for i in range(pc, self.ambient):
                        v[i] = ring.sub(v[i], ring.mul(c, row[i]))
                coeffs.append(c)
        if any(x != zero for x in v):
            return None
        return coeffs

    def is_subset_of(self, other: "Submodule") -> bool:
        return all(other.contains(row) for row in self.basis)


def span(vectors, ring: Ring, ambient: int | None = None) -> Submodule:
    """Canonical-form submodule generated by the given vectors."""
    _require_submodule_support(ring)
    vectors = [list(v) for v in vectors]
    if ambient is None:
        if not vectors:
            raise ValueError("ambient dimension required for an empty generating set")
        ambient = len(vectors[0])
    for v in vectors:
        if len(v) != ambient:
            raise ValueError("generators have mismatched ambient dimensions")
    if isinstance(ring, Integers):
        rows = hnf(vectors)
        pivots = [next(i for i, x in enumerate(r) if x) for r in rows]
        return Submodule(ring, ambient, rows, pivots)
    rows, pivots = rref(vectors, ring) if vectors else ([], [])
    rows = [tuple(list(r) + [ring.zero()] * (ambient - len(r))) for r in rows]
    return Submodule(ring, ambient, rows, pivots)


def contains(sub: Submodule, vector) -> bool:
    return sub.contains(vector)


def kernel(rows, width: int, ring: Ring) -> Submodule:
    """Canonical basis of {v : Mv = 0} for the matrix M with the given rows.

    Over a field this is the classical null space; over Z it is the full
    kernel lattice (automatically saturated).
    """
    _require_submodule_support(ring)
    if ring.is_field:
        ech = SparseEchelon(ring)
        zero = ring.zero()
        for r in rows:
            if isinstance(r, dict):
                ech.add_row(r)
            else:
                ech.add_row({i: v for i, v in enumerate(r) if v != zero})
        return span(ech.kernel_basis(width), ring, width)
    # Z: the integer kernel depends only on the Q-row-space, so first reduce
    # over Q to at most `width` independent rows, clear denominators, then
    # read the kernel lattice off the transform of the transposed HNF.
    ech = SparseEchelon(Rationals())
    for r in rows:
        if isinstance(r, dict):
            ech.add_row({c: Fraction(v) for c, v in r.items()})
        else:
            ech.add_row({i: Fraction(v) for i, v in enumerate(r) if v})
    if ech.rank == width:
        return span([], ring, width)
    reduced = []
    for pcol in sorted(ech.pivots):
        row = ech.pivots[pcol]
        denom = 1
        for v in row.values():
            denom = denom * v.denominator // gcd(denom, v.denominator)
        reduced.append([int(row.get(i, 0) * denom) for i in range(width)])
    if not reduced:
        # zero matrix: kernel is everything
        eye = [[1 if i == j else 0 for j in range(width)] for i in range(width)]
        return span(eye, ring, width)
    transposed = [[r[i] for r in reduced] for i in range(width)]
    h, u = hnf_with_transform(transposed)
    kernel_rows = [u[i] for i in range(width) if not any(h[i])]
    return span(kernel_rows, ring, width)


def solve(rows, rhs, ring: Ring):
    """One solution x of sum_i x_i * rows[i] = rhs over a field, or None."""
    if not ring.is_field:
        raise CapabilityError("solve requires a field")
    zero = ring.zero()
    n = len(rows)
    if n == 0:
        return [] if all(x == zero for x in rhs) else None
    width = len(rows[0])
    # eliminate on [rows^T | rhs] by tracking combinations
    ech = SparseEchelon(ring)
    tags = {}  # pivot col in extended space -> generator combination
    # augmented columns: width coords + n tag coords (tags never become pivots
    # before coordinate columns since coordinate columns come first)
    for i, r in enumerate(rows):
        row = {j: v for j, v in enumerate(r) if v != zero}
        row[width + i] = ring.one()
        ech.add_row(row)
    # Reduce the target; pivot rows carry their tag columns, so after full
    # reduction the surviving tag entries are the negated combination.
    combo = [zero] * n
    v = {j: val for j, val in enumerate(rhs) if val != zero}
    for col in sorted(ech.pivots):
        piv = ech.pivots[col]
        coeff = v.get(col)
        if coeff is None or coeff == zero:
            continue
        for c, val in piv.items():
            nv = ring.sub(v.get(c, zero), ring.mul(coeff, val))
            if nv == zero:
                v.pop(c, None)
            else:
                v[c] = nv
    if any(c < width and val != zero for c, val in v.items()):
        return None
    for c, val in v.items():
        if c >= width:
            combo[c - width] = ring.neg(val)
    return combo


def invert_matrix(matrix, ring: Ring):
    """Exact inverse of a square matrix over a field, or None if singular."""
    n = len(matrix)
    zero, one = ring.zero(), ring.one()
    a = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(matrix)]
    r = 0
    for c in range(n):
        p = next((i for i in range(r, n) if a[i][c] != zero), None)
        if p is None:
            return None
        a[r], a[p] = a[p], a[r]
        inv = ring.inv(a[r][c])
        a[r] = [ring.mul(inv, x) for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != zero:
                f = a[i][c]
                a[i] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(a[i], a[r])]
        r += 1
    return [row[n:] for row in a]


def mat_vec(matrix, vector, ring: Ring):
    zero = ring.zero()
    out = []
    for row in matrix:
        acc = zero
        for a, b in zip(row, vector):
            if a != zero and b != zero:
                acc = ring.add(acc, ring.mul(a, b))
        out.append(acc)
    return out


def mat_mul(a, b, ring: Ring):
    bt = list(zip(*b))
    return [[_dot(row, col, ring) for col in bt] for row in a]


def _dot(u, v, ring: Ring):
    zero = ring.zero()
    acc = zero
    for a, b in zip(u, v):
        if a != zero and b != zero:
            acc = ring.add(acc, ring.mul(a, b))
    return acc
