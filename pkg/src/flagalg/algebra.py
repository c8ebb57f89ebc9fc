"""The partial flag incidence algebra I^n(P,R).

Elements are sparse functions on the multichain basis; the product is the
interval convolution (for f, g and a multichain x = (x_1..x_n):
(fg)(x) = sum over y in the interval product of x of f(x_1,y) g(y,x_n)).
The closed-form basis product and the anonymous structure-constants table
are derived from it.
"""

from __future__ import annotations

import json

from .posets import Poset
from .rings import Ring, ring_from_spec


class ContextMismatchError(Exception):
    pass


class AlgebraContext:
    """Immutable bundle: poset, flag order n >= 2, ring, ordered basis.

    Caches, per basis tuple x, the interval product I(x) as a list of
    (left-index, right-index) pairs feeding the convolution, where
    left = (x_1, y) and right = (y, x_n) for y in I(x).
    """

    def __init__(self, poset: Poset, n: int, ring: Ring):
        if n < 2:
            raise ValueError("flag order n must be >= 2")
        self.poset = poset
        self.n = n
        self.ring = ring
        self.basis = tuple(poset.multichains(n))
        self.index = {t: i for i, t in enumerate(self.basis)}
        self.dim = len(self.basis)
        self._conv_pairs = self._build_conv_pairs()
        self._sc = None

    def _build_conv_pairs(self):
        p, n, index = self.poset, self.n, self.index
        pairs = []
        for t in self.basis:
            iv = [sorted(p.interval(t[i], t[i + 1])) for i in range(n - 1)]
            here = []

            def rec(k, mid):
                if k == n - 1:
                    here.append(
                        (index[(t[0],) + tuple(mid)], index[tuple(mid) + (t[n - 1],)])
                    )
                    return
                for z in iv[k]:
                    mid.append(z)
                    rec(k + 1, mid)
                    mid.pop()

            rec(0, [])
            pairs.append(tuple(here))
        return tuple(pairs)

    def interval_product(self, t):
        """I(x) for a basis tuple x, as a list of (n-1)-tuples."""
        return [
            self.basis[li][1:] for (li, _ri) in self._conv_pairs[self.index[tuple(t)]]
        ]

    def element(self, coeffs=None) -> "FlagElement":
        return FlagElement(self, coeffs or {})

    def basis_element(self, t) -> "FlagElement":
        """The indicator basis element e_x."""
        t = tuple(t)
        if t not in self.index:
            raise ValueError(f"{t} is not a weakly increasing tuple of this poset")
        return FlagElement(self, {self.index[t]: self.ring.one()})

    def from_vector(self, vec) -> "FlagElement":
        zero = self.ring.zero()
        return FlagElement(self, {i: v for i, v in enumerate(vec) if v != zero})

    def __repr__(self):
        return f"AlgebraContext(|P|={self.poset.size}, n={self.n}, ring={self.ring.name}, dim={self.dim})"


class FlagElement:
    """A sparse element of I^n(P,R): basis index -> nonzero scalar."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: AlgebraContext, coeffs: dict):
        zero = ctx.ring.zero()
        self.ctx = ctx
        self.coeffs = {i: v for i, v in coeffs.items() if v != zero}

    def _check(self, other):
        if self.ctx is not other.ctx:
            raise ContextMismatchError("elements belong to different contexts")

    def __add__(self, other):
        self._check(other)
        ring = self.ctx.ring
        out = dict(self.coeffs)
        for i, v in other.coeffs.items():
            out[i] = ring.add(out.get(i, ring.zero()), v)
        return FlagElement(self.ctx, out)

    def __sub__(self, other):
        self._check(other)
        ring = self.ctx.ring
        out = dict(self.coeffs)
        for i, v in other.coeffs.items():
            out[i] = ring.sub(out.get(i, ring.zero()), v)
        return FlagElement(self.ctx, out)

    def __neg__(self):
        ring = self.ctx.ring
        return FlagElement(self.ctx, {i: ring.neg(v) for i, v in self.coeffs.items()})

    def scale(self, scalar):
        ring = self.ctx.ring
        return FlagElement(self.ctx, {i: ring.mul(scalar, v) for i, v in self.coeffs.items()})

    def __mul__(self, other):
        return convolve(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, FlagElement)
            and self.ctx is other.ctx
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.ctx), tuple(sorted(self.coeffs.items()))))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t):
        """Evaluate at a multichain tuple."""
        return self.coeffs.get(self.ctx.index[tuple(t)], self.ctx.ring.zero())

    def to_vector(self):
        zero = self.ctx.ring.zero()
        return [self.coeffs.get(i, zero) for i in range(self.ctx.dim)]

    def __repr__(self):
        ctx = self.ctx
        terms = [
            f"{ctx.ring.format(v)}*e{ctx.basis[i]}"
            for i, v in sorted(self.coeffs.items())
        ]
        return " + ".join(terms) if terms else "0"


def convolve(f: FlagElement, g: FlagElement) -> FlagElement:
    """The defining pointwise convolution product."""
    f._check(g)
    ctx = f.ctx
    ring = ctx.ring
    zero = ring.zero()
    out = {}
    fc, gc = f.coeffs, g.coeffs
    for k, pairs in enumerate(ctx._conv_pairs):
        acc = zero
        for (li, ri) in pairs:
            a = fc.get(li)
            if a is None:
                continue
            b = gc.get(ri)
            if b is None:
                continue
            acc = ring.add(acc, ring.mul(a, b))
        if acc != zero:
            out[k] = acc
    return FlagElement(ctx, out)


def commutator(f: FlagElement, g: FlagElement) -> FlagElement:
    return convolve(f, g) - convolve(g, f)


def basis_product(ctx: AlgebraContext, x, y) -> FlagElement:
    """Closed-form product e_x e_y.

    For n >= 3: zero unless the trailing part of x equals the leading part
    of y, in which case it is the sum of e_(x_1, z, y_n) over z in the
    interval product of the shared middle.  For n = 2 this degenerates to
    the classical rule e_(a,b) e_(c,d) = [b = c] e_(a,d).
    """
    x, y = tuple(x), tuple(y)
    n = ctx.n
    if x not in ctx.index or y not in ctx.index:
        raise ValueError("tuples must be multichains of the context")
    u, v = x[1:], y[:-1]
    if u != v:
        return ctx.element()
    one = ctx.ring.one()
    ring = ctx.ring
    if n == 2:
        return ctx.basis_element((x[0], y[1]))
    p = ctx.poset
    out = {}
    mids = [[]]
    for i in range(n - 2):
        iv = sorted(p.interval(u[i], u[i + 1]))
        mids = [m + [z] for m in mids for z in iv]
    for mid in mids:
        idx = ctx.index[(x[0],) + tuple(mid) + (y[n - 1],)]
        out[idx] = ring.add(out.get(idx, ring.zero()), one)
    return FlagElement(ctx, out)


class StructureConstants:
    """Anonymous multiplication table of a finite free R-algebra.

    table[(i, j)] is a tuple of (k, c) with c the nonzero coefficient of
    basis vector k in b_i * b_j; absent pairs have zero product.
    """

    def __init__(self, dim: int, ring: Ring, table: dict):
        self.dim = dim
        self.ring = ring
        self.table = {
            key: tuple((k, c) for (k, c) in val if c != ring.zero())
            for key, val in table.items()
            if val
        }
        self.table = {key: val for key, val in self.table.items() if val}

    def product_coeffs(self, i: int, j: int):
        return self.table.get((i, j), ())

    def multiply(self, u, v):
        """Product of two dense coefficient vectors."""
        ring = self.ring
        zero = ring.zero()
        out = [zero] * self.dim
        nz_u = [(i, a) for i, a in enumerate(u) if a != zero]
        nz_v = [(j, b) for j, b in enumerate(v) if b != zero]
        for i, a in nz_u:
            for j, b in nz_v:
                entry = self.table.get((i, j))
                if not entry:
                    continue
                ab = ring.mul(a, b)
                for k, c in entry:
                    out[k] = ring.add(out[k], ring.mul(ab, c))
        return out

    def commutator_vec(self, u, v):
        ring = self.ring
        uv = self.multiply(u, v)
        vu = self.multiply(v, u)
        return [ring.sub(a, b) for a, b in zip(uv, vu)]

    def basis_commutators(self):
        """[b_i, b_j] vectors straight off the table (i < j suffices)."""
        ring = self.ring
        zero = ring.zero()
        out = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                vec = [zero] * self.dim
                for k, c in self.table.get((i, j), ()):
                    vec[k] = ring.add(vec[k], c)
                for k, c in self.table.get((j, i), ()):
                    vec[k] = ring.sub(vec[k], c)
                if any(x != zero for x in vec):
                    out.append(vec)
        return out

    def is_commutative(self) -> bool:
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if dict(self.table.get((i, j), ())) != dict(self.table.get((j, i), ())):
                    return False
        return True

    def to_json(self) -> str:
        fmt = self.ring.format
        entries = [
            [i, j, [[k, fmt(c)] for (k, c) in self.table[(i, j)]]]
            for (i, j) in sorted(self.table)
        ]
        return json.dumps(
            {"dim": self.dim, "ring": self.ring.name, "table": entries},
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "StructureConstants":
        data = json.loads(text)
        ring = ring_from_spec(data["ring"])
        table = {
            (i, j): [(k, ring.parse(s)) for (k, s) in entry]
            for (i, j, entry) in data["table"]
        }
        return cls(data["dim"], ring, table)


def structure_constants(ctx: AlgebraContext) -> StructureConstants:
    """The c_{ij}^k table of the context, built from the closed-form product."""
    if ctx._sc is None:
        table = {}
        for i, x in enumerate(ctx.basis):
            for j, y in enumerate(ctx.basis):
                prod = basis_product(ctx, x, y)
                if prod.coeffs:
                    table[(i, j)] = sorted(prod.coeffs.items())
        ctx._sc = StructureConstants(ctx.dim, ctx.ring, table)
    return ctx._sc


def power_assoc_witness(ctx: AlgebraContext):
    """Witness of third-power non-associativity, or None for an antichain.

    Uses the lexicographically least comparable pair x < y and the element
    f = e_(x..x) + e_(x..x,y) + e_(x..x,y,y); verifies f(ff) != (ff)f.
    """
    if ctx.n < 3:
        raise ValueError("power_assoc_witness requires n >= 3")
    p = ctx.poset
    pair = next(
        (
            (x, y)
            for x in range(p.size)
            for y in range(p.size)
            if x != y and p.leq[x][y]
        ),
        None,
    )
    if pair is None:
        return None
    x, y = pair
    n = ctx.n
    f = (
        ctx.basis_element((x,) * n)
        + ctx.basis_element((x,) * (n - 1) + (y,))
        + ctx.basis_element((x,) * (n - 2) + (y, y))
    )
    ff = convolve(f, f)
    left = convolve(f, ff)
    right = convolve(ff, f)
    if left == right:
        raise AssertionError("third-power associativity held unexpectedly")
    return f


def has_one_sided_identity(ctx: AlgebraContext, side: str) -> bool:
    """Whether a left or right identity exists, by exact feasibility check."""
    from .linalg import solve

    sc = structure_constants(ctx)
    ring = ctx.ring
    if not ring.is_field:
        raise ValueError("identity feasibility check implemented over fields")
    d = ctx.dim
    zero, one = ring.zero(), ring.one()
    # unknown e = sum_q a_q b_q; require e*b_j = b_j (left) or b_j*e = b_j
    rows = []  # rows[q] = flattened constraints contributed by a_q
    for q in range(d):
        row = [zero] * (d * d)
        for j in range(d):
            key = (q, j) if side == "left" else (j, q)
            for k, c in sc.product_coeffs(*key):
                row[j * d + k] = ring.add(row[j * d + k], c)
        rows.append(row)
    rhs = [zero] * (d * d)
    for j in range(d):
        rhs[j * d + j] = one
    return solve(rows, rhs, ring) is not None
