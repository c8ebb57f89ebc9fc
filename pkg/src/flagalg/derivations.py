"""R-linear derivations of I^n(P,R) as the kernel of the Leibniz system.

The unknowns are the d*d entries of the matrix of D in the canonical basis
(index p*d + q for entry D[p][q], i.e. D(b_q) = sum_p D[p][q] b_p).  One
vector equation per ordered basis pair expands into d scalar rows:

    sum_l c_{ij}^l D[k][l] - sum_q c_{qj}^k D[q][i] - sum_q c_{iq}^k D[q][j] = 0
"""

from __future__ import annotations

from .algebra import AlgebraContext, convolve, structure_constants
from .linalg import kernel
from .reconstruction import LinearMap
from .rings import CapabilityError


class LeibnizSystem:
    """Sparse rows of the Leibniz constraints over d^2 unknowns."""

    def __init__(self, ctx: AlgebraContext, rows):
        self.ctx = ctx
        self.width = ctx.dim * ctx.dim
        self.rows = rows


def leibniz_system(ctx: AlgebraContext) -> LeibnizSystem:
    """Assemble the exact linear system whose solution space is Der(I^n)."""
    sc = structure_constants(ctx)
    ring = ctx.ring
    zero = ring.zero()
    d = ctx.dim
    # right-multiplication and left-multiplication sparse columns:
    # right_by_j[k] lists (q, c_{qj}^k); left_by_i[k] lists (q, c_{iq}^k)
    right = [dict() for _ in range(d)]  # j -> {k: [(q, c)]}
    left = [dict() for _ in range(d)]
    for (q, j), entry in sc.table.items():
        for k, c in entry:
            right[j].setdefault(k, []).append((q, c))
    for (i, q), entry in sc.table.items():
        for k, c in entry:
            left[i].setdefault(k, []).append((q, c))
    rows = []
    seen = set()
    for (i, j), entry in list(sc.table.items()) + [
        ((i, j), ())
        for i in range(d)
        for j in range(d)
        if (i, j) not in sc.table
    ]:
        ks = set()
        for k, _c in entry:
            ks.add(k)
        ks.update(right[j].keys())
        ks.update(left[i].keys())
        for k in ks:
            row = {}

            def bump(col, val):
                nv = ring.add(row.get(col, zero), val)
                if nv == zero:
                    row.pop(col, None)
                else:
                    row[col] = nv

            for l, c in entry:
                bump(k * d + l, c)
            for q, c in right[j].get(k, ()):
                bump(q * d + i, ring.neg(c))
            for q, c in left[i].get(k, ()):
                bump(q * d + j, ring.neg(c))
            if row:
                key = tuple(sorted(row.items()))
                if key not in seen:
                    seen.add(key)
                    rows.append(row)
    return LeibnizSystem(ctx, rows)


def derivation_basis(ctx: AlgebraContext):
    """Canonical basis of Der(I^n(P,R)) as LinearMaps (field or Z only)."""
    ring = ctx.ring
    if not ring.supports_submodules:
        raise CapabilityError(
            f"derivation kernels are computed over fields and Z only (got {ring.name})"
        )
    system = leibniz_system(ctx)
    ker = kernel(system.rows, system.width, ring)
    d = ctx.dim
    out = []
    for vec in ker.basis:
        matrix = [vec[p * d : (p + 1) * d] for p in range(d)]
        t = LinearMap(ring, matrix)
        _assert_structural_corollaries(ctx, t)
        out.append(t)
    return out


def _assert_structural_corollaries(ctx: AlgebraContext, t: LinearMap):
    """Every derivation must kill e_x, e_xxy, e_xyy and e_xzy (n = 3)."""
    if ctx.n != 3:
        return
    ring = ctx.ring
    zero = ring.zero()
    p = ctx.poset
    for idx, tup in enumerate(ctx.basis):
        x, y, z = tup
        special = (
            x == y == z
            or (x == y and p.lt(y, z))
            or (p.lt(x, y) and y == z)
            or (p.lt(x, y) and p.lt(y, z))
        )
        if special and any(v != zero for v in t.column(idx)):
            raise AssertionError(
                f"kernel vector violates a structural corollary at basis tuple {tup}"
            )


def check_derivation(ctx: AlgebraContext, t: LinearMap) -> bool:
    """Direct Leibniz check T(ab) = T(a)b + aT(b) on all basis pairs.

    Evaluated through the convolution product, independently of the
    structure-constants table used to assemble the solver's system.
    """
    if t.dim != ctx.dim:
        raise ValueError(f"dimension mismatch: map is {t.dim}, algebra is {ctx.dim}")
    ring = ctx.ring
    images = [ctx.from_vector(t.column(j)) for j in range(ctx.dim)]
    for i in range(ctx.dim):
        ei = ctx.basis_element(ctx.basis[i])
        for j in range(ctx.dim):
            ej = ctx.basis_element(ctx.basis[j])
            prod = convolve(ei, ej)
            lhs = ctx.from_vector(t.apply(prod.to_vector()))
            rhs = convolve(images[i], ej) + convolve(ei, images[j])
            if lhs != rhs:
                return False
    return True
