"""Flag algebra core: basis products vs the convolution oracle, the
non-power-associativity witness, identity (non)existence, serialization."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from flagalg.algebra import (
    AlgebraContext,
    ContextMismatchError,
    StructureConstants,
    basis_product,
    commutator,
    convolve,
    has_one_sided_identity,
    power_assoc_witness,
    structure_constants,
)
from flagalg.posets import Poset, antichain, chain, enumerate_posets
from flagalg.rings import PrimeField, Rationals

Q = Rationals()


def convolution_oracle(ctx, f, g, t):
    """Pointwise definition: (fg)(x) = sum over y_i in [[x_i, x_{i+1}]] of
    f(x_1, ..., y) * g(y, ..., x_n), evaluated with no table lookups."""
    ring, p, n = ctx.ring, ctx.poset, ctx.n
    acc = ring.zero()
    ranges = [p.interval(t[i], t[i + 1]) for i in range(n - 1)]
    for mid in itertools.product(*ranges):
        lhs = f((t[0],) + tuple(mid))
        rhs = g(tuple(mid) + (t[-1],))
        acc = ring.add(acc, ring.mul(lhs, rhs))
    return acc


def assert_matches_oracle(ctx):
    for x in ctx.basis:
        for y in ctx.basis:
            prod = basis_product(ctx, x, y)
            for t in ctx.basis:
                assert prod(t) == convolution_oracle(
                    ctx, ctx.basis_element(x), ctx.basis_element(y), t
                )


class TestProduct:
    def test_two_chain_classical_rule(self):
        # n=2 recovers the ordinary incidence algebra product
        ctx = AlgebraContext(chain(2), 2, Q)
        e = ctx.basis_element
        assert e((0, 0)) * e((0, 1)) == e((0, 1))
        assert e((0, 1)) * e((1, 1)) == e((0, 1))
        assert (e((0, 1)) * e((0, 1))).is_zero()
        assert e((0, 0)) * e((0, 0)) == e((0, 0))

    def test_three_flag_product_on_two_chain(self):
        ctx = AlgebraContext(chain(2), 3, Q)
        e = ctx.basis_element
        # middle parts must match, output interpolates the interval
        assert e((0, 0, 1)) * e((0, 1, 1)) == e((0, 0, 1)) + e((0, 1, 1))
        assert e((0, 0, 0)) * e((0, 0, 1)) == e((0, 0, 1))
        assert (e((0, 0, 1)) * e((1, 1, 1))).is_zero()
        assert (e((0, 1, 1)) * e((0, 0, 1))).is_zero()

    @pytest.mark.parametrize("n", [2, 3])
    def test_oracle_small_posets(self, n):
        for p in enumerate_posets(3):
            assert_matches_oracle(AlgebraContext(p, n, Q))

    def test_oracle_diamond_f3(self):
        diamond = Poset.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
        assert_matches_oracle(AlgebraContext(diamond, 3, PrimeField(3)))

    def test_context_mismatch_raises(self):
        a = AlgebraContext(chain(2), 3, Q)
        b = AlgebraContext(chain(3), 3, Q)
        with pytest.raises(ContextMismatchError):
            convolve(a.basis_element((0, 0, 0)), b.basis_element((0, 0, 0)))


class TestBilinearity:
    @given(st.data())
    @settings(max_examples=25, deadline=None)
    def test_random_elements(self, data):
        ctx = AlgebraContext(chain(3), 3, Q)
        coeff = st.fractions(min_value=-4, max_value=4, max_denominator=4)
        vec = st.lists(coeff, min_size=ctx.dim, max_size=ctx.dim)
        f = ctx.from_vector(data.draw(vec))
        g = ctx.from_vector(data.draw(vec))
        h = ctx.from_vector(data.draw(vec))
        c = data.draw(coeff)
        assert (f + g) * h == f * h + g * h
        assert f * (g + h) == f * g + f * h
        assert f.scale(c) * g == (f * g).scale(c)
        assert commutator(f, g) == f * g - g * f


class TestPowerAssociativity:
    def test_two_chain_witness_coefficients(self):
        ctx = AlgebraContext(chain(2), 3, Q)
        f = power_assoc_witness(ctx)
        e = ctx.basis_element
        e000, e001, e011 = e((0, 0, 0)), e((0, 0, 1)), e((0, 1, 1))
        assert f == e000 + e001 + e011
        lhs, rhs = f * (f * f), (f * f) * f
        assert lhs == e000 + e001.scale(Fraction(3)) + e011
        assert rhs == e000 + e001.scale(Fraction(3)) + e011.scale(Fraction(2))
        assert lhs != rhs

    def test_every_non_antichain_has_witness(self):
        for m in range(2, 5):
            for p in enumerate_posets(m):
                ctx = AlgebraContext(p, 3, Q)
                f = power_assoc_witness(ctx)
                if p.covers:
                    assert f * (f * f) != (f * f) * f
                else:
                    assert f is None

    def test_antichain_is_fully_associative(self):
        ctx = AlgebraContext(antichain(3), 3, Q)
        for x in ctx.basis:
            for y in ctx.basis:
                for z in ctx.basis:
                    ex, ey, ez = map(ctx.basis_element, (x, y, z))
                    assert (ex * ey) * ez == ex * (ey * ez)


class TestIdentity:
    def test_classical_algebra_is_unital(self):
        ctx = AlgebraContext(chain(3), 2, Q)
        assert has_one_sided_identity(ctx, "left")
        assert has_one_sided_identity(ctx, "right")

    def test_third_flag_algebra_has_no_identity(self):
        for p in enumerate_posets(3):
            ctx = AlgebraContext(p, 3, Q)
            if p.covers:
                assert not has_one_sided_identity(ctx, "left")
                assert not has_one_sided_identity(ctx, "right")
            else:
                # an antichain's algebra is a product of copies of R
                assert has_one_sided_identity(ctx, "left")


class TestStructureConstants:
    def test_table_agrees_with_products(self):
        ctx = AlgebraContext(chain(3), 3, Q)
        sc = structure_constants(ctx)
        for i, x in enumerate(ctx.basis):
            for j, y in enumerate(ctx.basis):
                vec = [Q.zero()] * ctx.dim
                for k, c in sc.product_coeffs(i, j):
                    vec[k] = c
                assert ctx.from_vector(vec) == basis_product(ctx, x, y)

    def test_multiply_matches_convolve(self):
        ctx = AlgebraContext(chain(2), 3, Q)
        sc = structure_constants(ctx)
        u = [Fraction(1), Fraction(2), Fraction(0), Fraction(-1)]
        v = [Fraction(3), Fraction(0), Fraction(1), Fraction(1)]
        got = sc.multiply(u, v)
        want = (ctx.from_vector(u) * ctx.from_vector(v)).to_vector()
        assert got == list(want)

    def test_json_roundtrip(self):
        for ring in (Q, PrimeField(5)):
            ctx = AlgebraContext(chain(2), 3, ring)
            sc = structure_constants(ctx)
            again = StructureConstants.from_json(sc.to_json())
            assert again.dim == sc.dim
            assert again.ring == sc.ring
            assert again.table == sc.table

    def test_json_is_deterministic(self):
        ctx = AlgebraContext(chain(3), 3, Q)
        assert structure_constants(ctx).to_json() == structure_constants(ctx).to_json()

    def test_commutativity_flag(self):
        assert structure_constants(AlgebraContext(antichain(2), 3, Q)).is_commutative()
        assert not structure_constants(AlgebraContext(chain(2), 3, Q)).is_commutative()
