"""Ideal filtration J^n_k, the commutator chain on the third flag algebra,
quotient algebras and primitive idempotent decomposition.
"""

from __future__ import annotations

import random

from .algebra import AlgebraContext, FlagElement, StructureConstants, convolve, structure_constants
from .linalg import Submodule, span
from .rings import CapabilityError, Ring


class IdealError(Exception):
    pass


class SplittingError(Exception):
    """Primitive idempotent search failed; see message for a diagnostic."""


class AlgebraSubmodule:
    """A submodule of the coefficient space of an algebra context."""

    __slots__ = ("ctx", "submodule")

    def __init__(self, ctx: AlgebraContext, submodule: Submodule):
        if submodule.ambient != ctx.dim:
            raise ValueError("submodule ambient dimension does not match context")
        self.ctx = ctx
        self.submodule = submodule

    @classmethod
    def from_vectors(cls, ctx: AlgebraContext, vectors):
        return cls(ctx, span(vectors, ctx.ring, ctx.dim))

    @property
    def rank(self) -> int:
        return self.submodule.rank

    @property
    def basis(self):
        return self.submodule.basis

    def basis_elements(self):
        return [self.ctx.from_vector(row) for row in self.basis]

    def contains_vector(self, v) -> bool:
        return self.submodule.contains(v)

    def contains_element(self, f: FlagElement) -> bool:
        return self.submodule.contains(f.to_vector())

    def is_subset_of(self, other: "AlgebraSubmodule") -> bool:
        self._check(other)
        return self.submodule.is_subset_of(other.submodule)

    def _check(self, other):
        if self.ctx is not other.ctx:
            raise ValueError("submodules belong to different contexts")

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraSubmodule)
            and self.ctx is other.ctx
            and self.submodule == other.submodule
        )

    def __hash__(self):
        return hash(self.submodule)

    def __repr__(self):
        return f"AlgebraSubmodule(rank={self.rank}, dim={self.ctx.dim})"


def full_module(ctx: AlgebraContext) -> AlgebraSubmodule:
    one, zero = ctx.ring.one(), ctx.ring.zero()
    eye = [[one if i == j else zero for j in range(ctx.dim)] for i in range(ctx.dim)]
    return AlgebraSubmodule.from_vectors(ctx, eye)


def ideal_J(ctx: AlgebraContext, k: int) -> AlgebraSubmodule:
    """Span of basis elements whose endpoint interval has length >= k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    p = ctx.poset
    one, zero = ctx.ring.one(), ctx.ring.zero()
    vecs = []
    for i, t in enumerate(ctx.basis):
        if p.length(t[0], t[-1]) >= k:
            v = [zero] * ctx.dim
            v[i] = one
            vecs.append(v)
    return AlgebraSubmodule.from_vectors(ctx, vecs)


def mul_submodule(u: AlgebraSubmodule, v: AlgebraSubmodule) -> AlgebraSubmodule:
    """Span of pairwise products of basis vectors (equals UV by bilinearity)."""
    u._check(v)
    ctx = u.ctx
    ue = u.basis_elements()
    ve = v.basis_elements()
    prods = [convolve(a, b).to_vector() for a in ue for b in ve]
    return AlgebraSubmodule(ctx, span(prods, ctx.ring, ctx.dim))


def commutator_submodule(u: AlgebraSubmodule, v: AlgebraSubmodule) -> AlgebraSubmodule:
    u._check(v)
    ctx = u.ctx
    ue = u.basis_elements()
    ve = v.basis_elements()
    vecs = [(convolve(a, b) - convolve(b, a)).to_vector() for a in ue for b in ve]
    return AlgebraSubmodule(ctx, span(vecs, ctx.ring, ctx.dim))


def z_chain(ctx: AlgebraContext):
    """(C1, C2, C3): commutator submodule and its two iterates, n = 3 only."""
    if ctx.n != 3:
        raise ValueError("the commutator chain is only supported for n = 3")
    a = full_module(ctx)
    c1 = commutator_submodule(a, a)
    c2 = commutator_submodule(c1, c1)
    c3 = commutator_submodule(c2, c2)
    return c1, c2, c3


class QuotientAlgebra:
    """U/V for an ideal V of a subalgebra U, on a transversal basis.

    Transversal representatives are the residues of U's canonical basis
    after reduction modulo V, so lifting a quotient coordinate vector is a
    plain linear combination of stored representatives.
    """

    def __init__(self, numerator: AlgebraSubmodule, denominator: AlgebraSubmodule):
        numerator._check(denominator)
        ctx = numerator.ctx
        ring = ctx.ring
        if not (ring.is_field):
            raise CapabilityError("quotient algebras are implemented over fields")
        if not denominator.is_subset_of(numerator):
            raise IdealError("denominator is not contained in the numerator")
        self.ctx = ctx
        self.ring = ring
        self.numerator = numerator
        self.denominator = denominator
        self._verify_closure_and_ideal()
        self.transversal = self._build_transversal()
        self.dim = len(self.transversal)
        self.sc = self._induced_table()

    def _verify_closure_and_ideal(self):
        u_el = self.numerator.basis_elements()
        v_el = self.denominator.basis_elements()
        for a in u_el:
            for b in u_el:
                if not self.numerator.contains_element(convolve(a, b)):
                    raise IdealError("numerator is not closed under the product")
        for a in u_el:
            for b in v_el:
                if not self.denominator.contains_element(convolve(a, b)):
                    raise IdealError("denominator is not a left ideal of the numerator")
                if not self.denominator.contains_element(convolve(b, a)):
                    raise IdealError("denominator is not a right ideal of the numerator")

    def _build_transversal(self):
        # reduce each numerator basis row modulo the denominator + previously
        # accepted residues; nonzero residues form the transversal
        ring = self.ring
        zero = ring.zero()
        ech = {}  # pivot col -> (row, None-or-transversal marker)
        for row in self.denominator.basis:
            r = list(row)
            self._reduce_against(ech, r)
            if any(x != zero for x in r):
                piv = next(i for i, x in enumerate(r) if x != zero)
                inv = ring.inv(r[piv])
                ech[piv] = [ring.mul(inv, x) for x in r]
        transversal = []
        self._ech = ech
        self._transversal_pivots = []
        for row in self.numerator.basis:
            r = list(row)
            self._reduce_against(ech, r)
            if any(x != zero for x in r):
                piv = next(i for i, x in enumerate(r) if x != zero)
                inv = ring.inv(r[piv])
                norm = [ring.mul(inv, x) for x in r]
                ech[piv] = norm
                self._transversal_pivots.append(piv)
                transversal.append(tuple(norm))
        return tuple(transversal)

    def _reduce_against(self, ech, r):
        ring = self.ring
        zero = ring.zero()
        for piv in sorted(ech):
            c = r[piv]
            if c != zero:
                row = ech[piv]
                for i in range(piv, len(r)):
                    r[i] = ring.sub(r[i], ring.mul(c, row[i]))

    def reduce(self, vector):
        """Quotient coordinates of an ambient vector in U (else IdealError)."""
        ring = self.ring
        zero = ring.zero()
        r = list(vector)
        coords = {piv: zero for piv in self._transversal_pivots}
        for piv in sorted(self._ech):
            c = r[piv]
            if c != zero:
                row = self._ech[piv]
                for i in range(piv, len(r)):
                    r[i] = ring.sub(r[i], ring.mul(c, row[i]))
                if piv in coords:
                    coords[piv] = c
        if any(x != zero for x in r):
            raise IdealError("vector is not in the numerator submodule")
        return [coords[piv] for piv in self._transversal_pivots]

    def lift(self, coords):
        """Ambient representative of a quotient coordinate vector."""
        ring = self.ring
        zero = ring.zero()
        out = [zero] * self.ctx.dim
        for c, rep in zip(coords, self.transversal):
            if c != zero:
                for i, x in enumerate(rep):
                    if x != zero:
                        out[i] = ring.add(out[i], ring.mul(c, x))
        return out

    def _induced_table(self):
        table = {}
        reps = [self.ctx.from_vector(r) for r in self.transversal]
        zero = self.ring.zero()
        for i, a in enumerate(reps):
            for j, b in enumerate(reps):
                prod = convolve(a, b).to_vector()
                coords = self.reduce(prod)
                entry = [(k, c) for k, c in enumerate(coords) if c != zero]
                if entry:
                    table[(i, j)] = entry
        return StructureConstants(self.dim, self.ring, table)

    def multiply(self, u, v):
        return self.sc.multiply(u, v)

    def identity(self):
        """The identity of the quotient, solved for exactly (or None)."""
        return algebra_identity(self.sc)


def quotient(u: AlgebraSubmodule, v: AlgebraSubmodule) -> QuotientAlgebra:
    return QuotientAlgebra(u, v)


def algebra_identity(sc: StructureConstants):
    """Two-sided identity of an algebra given by structure constants, or None."""
    from .linalg import solve

    ring = sc.ring
    d = sc.dim
    if d == 0:
        return []
    zero, one = ring.zero(), ring.one()
    rows = []
    for q in range(d):
        row = [zero] * (2 * d * d)
        for j in range(d):
            for k, c in sc.product_coeffs(q, j):
                row[j * d + k] = ring.add(row[j * d + k], c)
            for k, c in sc.product_coeffs(j, q):
                off = d * d
                row[off + j * d + k] = ring.add(row[off + j * d + k], c)
        rows.append(row)
    rhs = [zero] * (2 * d * d)
    for j in range(d):
        rhs[j * d + j] = one
        rhs[d * d + j * d + j] = one
    return solve(rows, rhs, ring)


def _rational_roots(coeffs, ring):
    """Distinct roots in the ring of the monic polynomial x^k + sum c_i x^i."""
    from fractions import Fraction

    k = len(coeffs)
    if ring.is_field and hasattr(ring, "modulus"):
        return [ring.coerce(a) for a in range(ring.modulus) if _poly_val(coeffs, ring.coerce(a), ring) == ring.zero()]
    # rationals: clear denominators, apply the rational root theorem
    denom = 1
    for c in coeffs:
        denom = denom * Fraction(c).denominator // _gcd(denom, Fraction(c).denominator)
    ints = [int(Fraction(c) * denom) for c in coeffs] + [denom]  # degree-k coeff
    roots = []
    if _poly_val(coeffs, Fraction(0), ring) == 0:
        roots.append(Fraction(0))
    c0 = next((c for c in ints if c != 0), None)
    lead = ints[-1]
    # lowest nonzero coefficient bounds the numerators of nonzero roots
    if c0 is not None:
        for p in _divisors(abs(c0)):
            for q in _divisors(abs(lead)):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if cand not in roots and _poly_val(coeffs, cand, ring) == 0:
                        roots.append(cand)
    return roots


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _poly_val(coeffs, x, ring):
    # Horner on the monic polynomial [c_0, ..., c_{k-1}, 1]
    val = ring.one()
    for c in reversed(coeffs):
        val = ring.add(ring.mul(val, x), c)
    return val


def primitive_idempotents(q, seed: int = 0):
    """Complete orthogonal primitive idempotent decomposition over a field.

    Accepts a QuotientAlgebra or a StructureConstants of a commutative
    unital algebra.  Returns quotient/abstract coordinate vectors.  Splits
    recursively by the eigenvalues of a random element (seeded, 32-attempt
    budget); raises SplittingError if the algebra does not split, with a
    diagnostic recommending Q.
    """
    sc = q.sc if isinstance(q, QuotientAlgebra) else q
    ring = sc.ring
    if not ring.is_field:
        raise CapabilityError("primitive idempotent decomposition requires a field")
    if not sc.is_commutative():
        raise SplittingError("algebra is not commutative")
    if sc.dim == 0:
        return []
    identity = algebra_identity(sc)
    if identity is None:
        raise SplittingError("algebra has no identity; not a product of copies of R")
    rng = random.Random(seed)
    zero, one = ring.zero(), ring.one()
    std = [[one if i == j else zero for j in range(sc.dim)] for i in range(sc.dim)]
    return sorted(_split(sc, std, identity, rng, budget=[32]))


def _split(sc, basis, unit, rng, budget):
    """Split the unital commutative subalgebra spanned by `basis` * old data.

    basis: ambient-coordinate basis of the component subalgebra; unit: its
    identity.  Returns the list of primitive idempotents as ambient vectors.
    """
    ring = sc.ring
    zero = ring.zero()
    # component basis: span of unit * b over a spanning set; compute via span
    from .linalg import SparseEchelon

    ech = SparseEchelon(ring)
    comp = []
    for b in basis:
        vec = sc.multiply(unit, b)
        if ech.add_row({i: v for i, v in enumerate(vec) if v != zero}):
            comp.append(vec)
    dim = len(comp)
    if dim == 1:
        prod = sc.multiply(unit, unit)
        if prod != list(unit):
            raise SplittingError("component identity is not idempotent")
        return [tuple(unit)]
    while budget[0] > 0:
        budget[0] -= 1
        t = [zero] * sc.dim
        for b in comp:
            c = ring.coerce(rng.randrange(0, 4 * dim + 1))
            t = [ring.add(a, ring.mul(c, x)) for a, x in zip(t, b)]
        coeffs = _min_poly_component(sc, unit, t, ring)
        k = len(coeffs)
        if k < 2:
            continue
        roots = _rational_roots(coeffs, ring)
        if len(roots) < 2 or len(roots) != k:
            continue
        # min poly splits into distinct linear factors: Lagrange idempotents
        idems = []
        ok = True
        for lam in roots:
            u = list(unit)
            denom = ring.one()
            for mu in roots:
                if mu == lam:
                    continue
                # u *= (t - mu * unit)
                shifted = [ring.sub(a, ring.mul(mu, e)) for a, e in zip(t, unit)]
                u = sc.multiply(u, shifted)
                denom = ring.mul(denom, ring.sub(lam, mu))
            dinv = ring.inv(denom)
            u = [ring.mul(dinv, x) for x in u]
            if sc.multiply(u, u) != u:
                ok = False
                break
            idems.append(u)
        if not ok:
            continue
        total = [zero] * sc.dim
        for u in idems:
            total = [ring.add(a, b) for a, b in zip(total, u)]
        if total != list(unit):
            continue
        out = []
        for u in idems:
            out.extend(_split(sc, comp, u, rng, budget))
        return out
    raise SplittingError(
        "failed to split the algebra into primitive idempotents within the "
        "retry budget; if working over a small field, re-run over Q"
    )


def _min_poly_component(sc, unit, t, ring):
    """Monic minimal polynomial of t in the component with identity `unit`.

    Returns the lower coefficients [c_0, ..., c_{k-1}] of
    x^k + c_{k-1} x^{k-1} + ... + c_0.
    """
    zero = ring.zero()
    stored = []  # (pivot index, reduced vector, power combination)
    power = list(unit)
    k = 0
    while True:
        vec = list(power)
        combo = [zero] * k + [ring.one()]
        for piv, pvec, pcombo in stored:
            c = vec[piv]
            if c != zero:
                vec = [ring.sub(a, ring.mul(c, b)) for a, b in zip(vec, pvec)]
                combo = [
                    ring.sub(a, ring.mul(c, b))
                    for a, b in zip(combo, pcombo + [zero] * (len(combo) - len(pcombo)))
                ]
        if all(x == zero for x in vec):
            # sum combo[i] t^i = 0 with combo[k] = 1
            return combo[:k]
        piv = next(i for i, x in enumerate(vec) if x != zero)
        inv = ring.inv(vec[piv])
        stored.append(
            (piv, [ring.mul(inv, x) for x in vec], [ring.mul(inv, x) for x in combo])
        )
        power = sc.multiply(power, t)
        k += 1
        if k > sc.dim + 1:
            raise SplittingError("minimal polynomial search did not terminate")
