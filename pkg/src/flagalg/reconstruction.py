"""Recover a poset from anonymous structure constants of its third flag
algebra, decide flag-algebra isomorphism, and realize/verify the
isomorphisms induced by poset maps.
"""

from __future__ import annotations

import random

from .algebra import AlgebraContext, StructureConstants, structure_constants
from .lattice import SplittingError, algebra_identity, primitive_idempotents
from .linalg import SparseEchelon, invert_matrix, mat_vec, span
from .posets import Poset, find_isomorphism, is_order_isomorphism
from .rings import CapabilityError, Ring


class ReconstructionError(Exception):
    """The input does not behave like a third flag algebra."""


class AbstractAlgebra:
    """Structure constants with no poset attached, over an indecomposable ring."""

    def __init__(self, sc: StructureConstants):
        ring = sc.ring
        if not ring.is_indecomposable:
            raise CapabilityError(
                f"{ring.name} is decomposable; reconstruction theory requires an "
                "indecomposable coefficient ring"
            )
        for (i, j), entry in sc.table.items():
            if not (0 <= i < sc.dim and 0 <= j < sc.dim):
                raise ValueError("table indices out of range")
            for k, _c in entry:
                if not 0 <= k < sc.dim:
                    raise ValueError("table indices out of range")
        self.sc = sc
        self.ring = ring
        self.dim = sc.dim

    @classmethod
    def from_context(cls, ctx: AlgebraContext) -> "AbstractAlgebra":
        return cls(structure_constants(ctx))


class LinearMap:
    """A d x d matrix over the ring; columns are images of basis vectors."""

    __slots__ = ("ring", "matrix")

    def __init__(self, ring: Ring, matrix):
        self.ring = ring
        self.matrix = tuple(tuple(row) for row in matrix)

    @property
    def dim(self):
        return len(self.matrix)

    def apply(self, vector):
        return mat_vec(self.matrix, vector, self.ring)

    def column(self, j):
        return [row[j] for row in self.matrix]

    def compose(self, other: "LinearMap") -> "LinearMap":
        # (self . other)(v) = self(other(v))
        from .linalg import mat_mul

        return LinearMap(self.ring, mat_mul(self.matrix, other.matrix, self.ring))

    def inverse(self):
        inv = invert_matrix([list(r) for r in self.matrix], self.ring)
        return None if inv is None else LinearMap(self.ring, inv)

    def __eq__(self, other):
        return (
            isinstance(other, LinearMap)
            and self.ring == other.ring
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.ring, self.matrix))

    @classmethod
    def identity(cls, ring: Ring, dim: int) -> "LinearMap":
        one, zero = ring.one(), ring.zero()
        return cls(ring, [[one if i == j else zero for j in range(dim)] for i in range(dim)])


class _CosetSpace:
    """Quotient of the full coefficient space by a submodule, for abstract
    algebras (no flag context): transversal reps and induced products."""

    def __init__(self, sc: StructureConstants, denom_basis):
        ring = sc.ring
        zero = ring.zero()
        self.sc = sc
        self.ring = ring
        self.denom = span(list(denom_basis), ring, sc.dim) if denom_basis else span([], ring, sc.dim)
        ech = {}
        for row in self.denom.basis:
            piv = next(i for i, x in enumerate(row) if x != zero)
            ech[piv] = list(row)
        self._ech = ech
        self.free = [i for i in range(sc.dim) if i not in ech]
        self.dim = len(self.free)
        one = ring.one()
        self.transversal = []
        for f in self.free:
            v = [zero] * sc.dim
            v[f] = one
            self.transversal.append(v)
        table = {}
        for a, ta in enumerate(self.transversal):
            for b, tb in enumerate(self.transversal):
                prod = sc.multiply(ta, tb)
                coords = self.reduce(prod)
                entry = [(k, c) for k, c in enumerate(coords) if c != zero]
                if entry:
                    table[(a, b)] = entry
        self.quotient_sc = StructureConstants(self.dim, ring, table)

    def reduce(self, vector):
        ring = self.ring
        zero = ring.zero()
        v = list(vector)
        for piv in sorted(self._ech):
            c = v[piv]
            if c != zero:
                row = self._ech[piv]
                for i in range(piv, len(v)):
                    v[i] = ring.sub(v[i], ring.mul(c, row[i]))
        return [v[f] for f in self.free]

    def lift(self, coords):
        ring = self.ring
        zero = ring.zero()
        out = [zero] * self.sc.dim
        for c, f in zip(coords, self.free):
            out[f] = c
        return out

    def verify_ideal(self, space_basis):
        """Check u*v, v*u land in the denominator for u in space_basis, v in denom."""
        for u in space_basis:
            for v in self.denom.basis:
                if not self.denom.contains(self.sc.multiply(u, list(v))):
                    return False
                if not self.denom.contains(self.sc.multiply(list(v), u)):
                    return False
        return True


def _span_of_products(sc, left_basis, right_basis, bracket):
    ring = sc.ring
    vecs = []
    for u in left_basis:
        for v in right_basis:
            vecs.append(bracket(list(u), list(v)))
    return span(vecs, ring, sc.dim)


def reconstruct_poset(a: AbstractAlgebra, seed: int = 0):
    """Recover (Poset, element idempotent lifts, cover idempotent lifts).

    Pipeline: commutator submodule C1; primitive idempotents of A/C1 are the
    elements; C2 = [C1,C1] and C3 = [C2,C2]; primitive idempotents of C2/C3
    are the covers; endpoints attach via products landing outside C2; the
    order is the reflexive-transitive closure of the covers.
    """
    sc = a.sc
    ring = a.ring
    if not ring.is_field:
        raise CapabilityError(
            f"reconstruction requires a field (got {ring.name}); re-run over Q"
        )
    d = sc.dim
    c1 = span(sc.basis_commutators(), ring, d) if d else span([], ring, d)
    cs1 = _CosetSpace(sc, c1.basis)
    one, zero = ring.one(), ring.zero()
    std = [[one if i == j else zero for j in range(d)] for i in range(d)]
    if not cs1.verify_ideal(std):
        raise ReconstructionError("the commutator submodule is not an ideal")
    try:
        elem_idems = primitive_idempotents(cs1.quotient_sc, seed=seed)
    except SplittingError as exc:
        raise ReconstructionError(f"element quotient did not split: {exc}")
    elements = [cs1.lift(e) for e in elem_idems]
    # order by leading coordinate so canonical input labels elements by the
    # position of e_(x,...,x) in the basis
    elements.sort(key=lambda v: next(i for i, x in enumerate(v) if x != zero))
    m = len(elements)

    c2 = _span_of_products(sc, c1.basis, c1.basis, sc.commutator_vec)
    c3 = _span_of_products(sc, c2.basis, c2.basis, sc.commutator_vec)
    # pipeline self-checks: C1*C2 <= C2 and A*C3 <= C2 make the endpoint
    # attachment independent of the choice of lifts
    for u in c1.basis:
        for v in c2.basis:
            if not c2.contains(sc.multiply(list(u), list(v))):
                raise ReconstructionError("C1*C2 is not contained in C2")
    for u in std:
        for v in c3.basis:
            if not c2.contains(sc.multiply(u, list(v))):
                raise ReconstructionError("A*C3 is not contained in C2")
            if not c2.contains(sc.multiply(list(v), u)):
                raise ReconstructionError("C3*A is not contained in C2")

    covers = []
    cover_lifts = []
    if c2.rank > c3.rank:
        cover_lifts_q = _cover_idempotents(sc, c2, c3, seed)
        cover_lifts_q.sort(key=lambda v: next(i for i, x in enumerate(v) if x != zero))
        for f in cover_lifts_q:
            src = [
                x
                for x in range(m)
                if not c2.contains(sc.multiply(elements[x], f))
            ]
            tgt = [
                y
                for y in range(m)
                if not c2.contains(sc.multiply(f, elements[y]))
            ]
            if len(src) != 1 or len(tgt) != 1 or src == tgt:
                raise ReconstructionError(
                    "cover endpoint attachment is not unique; input is not a "
                    "third flag algebra"
                )
            covers.append((src[0], tgt[0]))
            cover_lifts.append(f)
    elif c2.rank != c3.rank:
        raise ReconstructionError("commutator chain ranks decreased unexpectedly")

    if len(set(covers)) != len(covers):
        raise ReconstructionError("duplicate cover recovered")
    try:
        poset = Poset.from_covers(m, covers)
    except Exception as exc:
        raise ReconstructionError(f"cover closure is not a partial order: {exc}")
    if set(poset.covers) != set(covers):
        raise ReconstructionError("recovered cover relation is not its own cover set")
    return poset, elements, cover_lifts


def _cover_idempotents(sc, c2, c3, seed):
    """Primitive idempotents of C2/C3, lifted to ambient coordinates."""
    ring = sc.ring
    zero = ring.zero()
    # transversal of C3 inside C2
    ech = {}
    for row in c3.basis:
        piv = next(i for i, x in enumerate(row) if x != zero)
        ech[piv] = list(row)
    reps = []
    rep_pivots = []
    for row in c2.basis:
        r = list(row)
        for piv in sorted(ech):
            c = r[piv]
            if c != zero:
                prow = ech[piv]
                for i in range(piv, len(r)):
                    r[i] = ring.sub(r[i], ring.mul(c, prow[i]))
        if any(x != zero for x in r):
            piv = next(i for i, x in enumerate(r) if x != zero)
            inv = ring.inv(r[piv])
            norm = [ring.mul(inv, x) for x in r]
            ech[piv] = norm
            rep_pivots.append(piv)
            reps.append(norm)

    def reduce_coords(vector):
        v = list(vector)
        coords = {p: zero for p in rep_pivots}
        for piv in sorted(ech):
            c = v[piv]
            if c != zero:
                prow = ech[piv]
                for i in range(piv, len(v)):
                    v[i] = ring.sub(v[i], ring.mul(c, prow[i]))
                if piv in coords:
                    coords[piv] = c
        if any(x != zero for x in v):
            raise ReconstructionError("product left the C2 subalgebra")
        return [coords[p] for p in rep_pivots]

    table = {}
    for i, u in enumerate(reps):
        for j, v in enumerate(reps):
            coords = reduce_coords(sc.multiply(u, v))
            entry = [(k, c) for k, c in enumerate(coords) if c != zero]
            if entry:
                table[(i, j)] = entry
    qsc = StructureConstants(len(reps), ring, table)
    try:
        idems = primitive_idempotents(qsc, seed=seed)
    except SplittingError as exc:
        raise ReconstructionError(f"cover quotient did not split: {exc}")
    lifted = []
    for e in idems:
        amb = [zero] * sc.dim
        for c, rep in zip(e, reps):
            if c != zero:
                for i, x in enumerate(rep):
                    if x != zero:
                        amb[i] = ring.add(amb[i], ring.mul(c, x))
        lifted.append(amb)
    return lifted


def scramble(ctx: AlgebraContext, seed: int) -> AbstractAlgebra:
    """Structure constants of the context conjugated by a seeded random
    invertible map.

    The map is a product of random shears, transpositions, sign flips and a
    few small diagonal scalings, so it is guaranteed invertible and keeps
    the table entries small.
    """
    ring = ctx.ring
    if not ring.is_field:
        raise CapabilityError("scramble requires field coefficients")
    d = ctx.dim
    rng = random.Random(seed)
    one, zero = ring.one(), ring.zero()
    t = [[one if i == j else zero for j in range(d)] for i in range(d)]

    def shear(i, j, c):
        # row_i += c * row_j
        t[i] = [ring.add(a, ring.mul(c, b)) for a, b in zip(t[i], t[j])]

    steps = max(2, 2 * d)
    for _ in range(steps):
        kind = rng.randrange(4)
        if d == 1:
            kind = 3
        if kind == 0:
            i, j = rng.sample(range(d), 2)
            shear(i, j, ring.coerce(rng.choice([-2, -1, 1, 2])))
        elif kind == 1:
            i, j = rng.sample(range(d), 2)
            t[i], t[j] = t[j], t[i]
        elif kind == 2:
            i = rng.randrange(d)
            t[i] = [ring.neg(x) for x in t[i]]
        else:
            i = rng.randrange(d)
            c = ring.coerce(rng.choice([2, 3]))
            if ring.name == "Q" and rng.random() < 0.5:
                c = ring.inv(c)
            if c != zero:
                t[i] = [ring.mul(c, x) for x in t[i]]
    return conjugate_table(ctx, LinearMap(ring, t))


def conjugate_table(ctx: AlgebraContext, t: LinearMap) -> AbstractAlgebra:
    """Express the algebra in the basis {T b_k}: c'_{ij} solves
    (T b_i)(T b_j) = sum_k c'_{ij}^k (T b_k)."""
    ring = ctx.ring
    sc = structure_constants(ctx)
    d = ctx.dim
    tinv = t.inverse()
    if tinv is None:
        raise ValueError("conjugating map is singular")
    zero = ring.zero()
    cols = [t.column(j) for j in range(d)]
    table = {}
    for i in range(d):
        for j in range(d):
            prod = sc.multiply(cols[i], cols[j])
            coords = tinv.apply(prod)
            entry = [(k, c) for k, c in enumerate(coords) if c != zero]
            if entry:
                table[(i, j)] = entry
    return AbstractAlgebra(StructureConstants(d, ring, table))


def induced_isomorphism(phi, ctx_p: AlgebraContext, ctx_q: AlgebraContext) -> LinearMap:
    """The basis permutation e_(x,y,z) -> e_(phi x, phi y, phi z)."""
    if ctx_p.ring != ctx_q.ring:
        raise ValueError("contexts use different rings")
    if ctx_p.n != ctx_q.n:
        raise ValueError("contexts have different flag orders")
    if not is_order_isomorphism(ctx_p.poset, ctx_q.poset, phi):
        raise ValueError("phi is not an order isomorphism")
    ring = ctx_p.ring
    d = ctx_p.dim
    zero, one = ring.zero(), ring.one()
    matrix = [[zero] * d for _ in range(d)]
    for j, tup in enumerate(ctx_p.basis):
        image = tuple(phi[x] for x in tup)
        matrix[ctx_q.index[image]][j] = one
    return LinearMap(ring, matrix)


def is_algebra_isomorphism(t: LinearMap, a, b) -> bool:
    """True iff T is invertible and multiplicative from A to B."""
    sa = a.sc if isinstance(a, AbstractAlgebra) else structure_constants(a)
    sb = b.sc if isinstance(b, AbstractAlgebra) else structure_constants(b)
    if sa.ring != sb.ring or sa.ring != t.ring:
        raise ValueError("ring mismatch")
    if sa.dim != sb.dim or t.dim != sa.dim:
        raise ValueError(
            f"dimension mismatch: {sa.dim} vs {sb.dim} (map is {t.dim})"
        )
    if t.inverse() is None:
        return False
    ring = sa.ring
    zero = ring.zero()
    d = sa.dim
    for i in range(d):
        ti = t.column(i)
        for j in range(d):
            lhs = [zero] * d
            for k, c in sa.product_coeffs(i, j):
                lhs[k] = c
            lhs = t.apply(lhs)
            rhs = sb.multiply(ti, t.column(j))
            if lhs != rhs:
                return False
    return True


def decide_isomorphism(a: AbstractAlgebra, b: AbstractAlgebra, seed: int = 0):
    """A poset isomorphism between the recovered posets, or None."""
    if a.dim != b.dim:
        return None
    pa, _, _ = reconstruct_poset(a, seed=seed)
    pb, _, _ = reconstruct_poset(b, seed=seed)
    return find_isomorphism(pa, pb)


MAX_EXHAUSTIVE_DIM = 4


def enumerate_isomorphisms_exhaustive(a, b):
    """All algebra isomorphisms A -> B over F_2 by brute force (dim <= 4).

    Scans all 2^(d^2) candidate matrices using bitmask arithmetic.
    """
    sa = a.sc if isinstance(a, AbstractAlgebra) else structure_constants(a)
    sb = b.sc if isinstance(b, AbstractAlgebra) else structure_constants(b)
    ring = sa.ring
    if ring != sb.ring or ring.name != "Fp:2":
        raise CapabilityError("exhaustive scan is supported over F_2 only")
    if sa.dim != sb.dim:
        return []
    d = sa.dim
    if d > MAX_EXHAUSTIVE_DIM:
        raise CapabilityError(
            f"exhaustive scan budget is dim <= {MAX_EXHAUSTIVE_DIM} (got {d})"
        )
    # bitmask tables: product of basis i, j as a d-bit mask
    amask = [[0] * d for _ in range(d)]
    bmask = [[0] * d for _ in range(d)]
    for (i, j), entry in sa.table.items():
        for k, c in entry:
            if c:
                amask[i][j] |= 1 << k
    for (i, j), entry in sb.table.items():
        for k, c in entry:
            if c:
                bmask[i][j] |= 1 << k

    def mul_b(u, v):
        w = 0
        for i in range(d):
            if u >> i & 1:
                row = bmask[i]
                for j in range(d):
                    if v >> j & 1:
                        w ^= row[j]
        return w

    def invertible(cols):
        rows = list(cols)
        rank = 0
        for bit in range(d):
            p = next((i for i in range(rank, d) if rows[i] >> bit & 1), None)
            if p is None:
                continue
            rows[rank], rows[p] = rows[p], rows[rank]
            for i in range(d):
                if i != rank and rows[i] >> bit & 1:
                    rows[i] ^= rows[rank]
            rank += 1
        return rank == d

    found = []
    for code in range(1 << (d * d)):
        cols = [(code >> (d * i)) & ((1 << d) - 1) for i in range(d)]
        if not invertible(cols):
            continue

        def apply_t(mask):
            w = 0
            for i in range(d):
                if mask >> i & 1:
                    w ^= cols[i]
            return w

        ok = True
        for i in range(d):
            for j in range(d):
                if apply_t(amask[i][j]) != mul_b(cols[i], cols[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            zero, one = ring.zero(), ring.one()
            matrix = [
                [one if cols[j] >> r & 1 else zero for j in range(d)]
                for r in range(d)
            ]
            found.append(LinearMap(ring, matrix))
    return found
