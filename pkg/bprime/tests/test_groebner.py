"""Tests for Groebner bases and quotient monomial bases."""

from fractions import Fraction

import numpy as np
import pytest
import sympy

from bprime.exceptions import (
    ContextMismatchError,
    InfiniteDimensionalError,
    NotHomogeneousError,
    ResourceLimitError,
    ZeroPolynomialError,
)
from bprime.groebner import Ideal, buchberger, normal_form, quotient_basis
from bprime.polyring import MonomialOrder, OrderKind, Poly, Ring, WeightSystem
from bprime.utils import parse_poly, parse_polys


def to_sympy(p, symbols):
    """Return `p` as a sympy expression in `symbols`."""
    expr = sympy.Integer(0)
    for mono, coeff in p.items():
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        for sym, exponent in zip(symbols, mono):
            term *= sym**exponent
        expr += term

    return expr


def from_sympy(expr, symbols, ring):
    """Return the sympy expression `expr` as a polynomial in `ring`."""
    terms = {}
    for mono, coeff in sympy.Poly(expr, *symbols).terms():
        terms[tuple(mono)] = Fraction(int(coeff.p), int(coeff.q))

    return Poly(ring, terms)


def random_homogeneous(rng, ring, weights, degree, nr_terms):
    """Return a random polynomial of weighted degree `degree`."""
    candidates = [
        mono
        for mono in np.ndindex(*([degree + 1] * ring.ngens))
        if sum(w * a for w, a in zip(weights, mono)) == degree
    ]
    if not candidates:
        return ring.zero()

    terms = {}
    for idx in rng.choice(len(candidates), min(nr_terms, len(candidates)), False):
        mono = tuple(int(a) for a in candidates[idx])
        terms[mono] = Fraction(int(rng.integers(1, 7)), int(rng.integers(1, 3)))
        if rng.integers(0, 2):
            terms[mono] = -terms[mono]

    return Poly(ring, terms)


class TestIdeal:
    """Tests for Ideal"""

    def test_generators(self):
        """Test zero and duplicate generators are dropped."""
        x1, x2 = Ring.xring(2).gens()
        ideal = Ideal([x1, x1.ring.zero(), x2, x1])
        assert ideal.generators == (x1, x2)
        assert len(ideal) == 2

    def test_invalid_raises(self):
        """Test invalid generators raise exceptions."""
        with pytest.raises(ZeroPolynomialError, match="at least one nonzero"):
            Ideal([Ring.xring(2).zero()])

        with pytest.raises(ContextMismatchError, match="must share one ring"):
            Ideal([Ring.xring(2).gen(0), Ring.xring(3).gen(0)])


class TestBuchberger:
    """Tests for buchberger()"""

    def test_milnor_algebra(self):
        """Test the Milnor algebra of x1^2 + x2^3 + x3^4."""
        f = parse_poly("x1^2 + x2^3 + x3^4")
        weights = WeightSystem((Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)))
        order = MonomialOrder.from_weights(weights)
        gb = buchberger(Ideal([f.diff(ii) for ii in range(3)]), order)
        x1, x2, x3 = f.ring.gens()
        assert set(gb.elements) == {x1, x2**2, x3**3}
        assert gb.satisfies_buchberger_criterion()
        assert gb.is_reduced()

        basis = quotient_basis(gb, weights)
        assert basis.dimension == 6
        assert basis.monomials == (
            (0, 0, 0),
            (0, 0, 1),
            (0, 1, 0),
            (0, 0, 2),
            (0, 1, 1),
            (0, 1, 2),
        )
        assert basis.weights == tuple(
            Fraction(w) for w in ("0", "1/4", "1/3", "1/2", "7/12", "5/6")
        )
        assert basis.weight_set == basis.weights
        assert set(basis.multiplicities.values()) == {1}

    def test_reduction(self):
        """Test ideal membership and normal forms."""
        x1, x2 = Ring.xring(2).gens()
        gb = buchberger(Ideal([x1**2 + x2**2, x1 * x2]))
        assert set(gb.elements) == {x1 * x2, x1**2 + x2**2, x2**3}
        assert list(gb) == list(gb.elements)
        assert gb.contains(x1**3)
        assert not gb.contains(x2**2)
        assert normal_form(x1**2, gb) == -(x2**2)
        assert normal_form(x1**2 * x2 + x1, gb) == x1
        assert quotient_basis(gb, WeightSystem((1, 1))).dimension == 4

        with pytest.raises(ContextMismatchError, match="Cannot reduce"):
            gb.reduce(Ring.xring(3).gen(0))

    def test_normal_form_is_linear(self):
        """Test NF(a*p + b*q) == a*NF(p) + b*NF(q) for random p and q."""
        rng = np.random.default_rng(4096)
        ring = Ring.xring(3)
        gb = buchberger(Ideal(parse_polys(["x1^2 + x2^3 + x3^4", "x1*x2", "x3^5"])))

        def random_poly():
            terms = {}
            for _ in range(4):
                mono = tuple(int(e) for e in rng.integers(0, 6, 3))
                terms[mono] = Fraction(
                    int(rng.integers(-5, 6)), int(rng.integers(1, 4))
                )

            return Poly(ring, terms)

        for _ in range(50):
            p, q = random_poly(), random_poly()
            a = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
            b = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
            expected = a * normal_form(p, gb) + b * normal_form(q, gb)
            assert normal_form(a * p + b * q, gb) == expected

    def test_unit_ideal(self):
        """Test the unit ideal has an empty quotient basis."""
        x1, x2 = Ring.xring(2).gens()
        gb = buchberger(Ideal([x1 + 1, x1]))
        assert gb.is_unit
        assert gb.elements == (x1.ring.one(),)
        basis = quotient_basis(gb, WeightSystem((1, 1)))
        assert basis.dimension == 0
        assert basis.weight_set == ()

    @pytest.mark.parametrize("a, b, c", [(2, 2, 2), (2, 3, 4), (3, 3, 5), (2, 5, 3)])
    def test_brieskorn_pham_dimension(self, a, b, c):
        """Test the Milnor numbers of x1^a + x2^b + x3^c."""
        f = parse_poly(f"x1^{a} + x2^{b} + x3^{c}")
        weights = WeightSystem((Fraction(1, a), Fraction(1, b), Fraction(1, c)))
        gb = buchberger(
            Ideal([f.diff(ii) for ii in range(3)]),
            MonomialOrder.from_weights(weights),
        )
        basis = quotient_basis(gb, weights)
        assert basis.dimension == (a - 1) * (b - 1) * (c - 1)
        # The weights are symmetric about the middle of the Milnor algebra
        top = max(basis.weights)
        assert sorted(basis.weights) == sorted(top - w for w in basis.weights)

    @pytest.mark.parametrize(
        "exprs",
        [
            ["x1^2 - x2*x3", "x2^2 - x1*x3", "x3^2 - x1*x2"],
            ["x1^3 - x2", "x1*x2 - x3^2", "x2^2 + 2*x1*x3"],
        ],
    )
    @pytest.mark.parametrize(
        "kind, sympy_order",
        [(OrderKind.WGREVLEX, "grevlex"), (OrderKind.WGLEX, "grlex")],
    )
    def test_matches_sympy(self, exprs, kind, sympy_order):
        """Test against the sympy reduced Groebner basis."""
        polys = parse_polys(exprs)
        ring = polys[0].ring
        symbols = sympy.symbols("x1 x2 x3")
        order = MonomialOrder.default(3, kind)
        gb = buchberger(Ideal(polys), order)
        reference = sympy.groebner(
            [to_sympy(p, symbols) for p in polys],
            *symbols,
            order=sympy_order,
            domain="QQ",
        )
        expected = {
            from_sympy(g, symbols, ring).monic(order) for g in reference.exprs
        }
        assert set(gb.elements) == expected
        assert gb.satisfies_buchberger_criterion()
        assert gb.is_reduced()

    def test_random_zero_dimensional(self):
        """Test random weighted-homogeneous zero-dimensional ideals."""
        rng = np.random.default_rng(1729)
        ring = Ring.xring(3)
        for _ in range(50):
            int_weights = tuple(int(w) for w in rng.integers(1, 4, 3))
            weights = WeightSystem(int_weights)
            gens = [
                ring.gen(ii) ** int(k) for ii, k in enumerate(rng.integers(3, 6, 3))
            ]
            for _ in range(2):
                degree = int(rng.integers(3, 7))
                p = random_homogeneous(rng, ring, int_weights, degree, 3)
                if not p.is_zero:
                    gens.append(p)

            results = []
            for kind in OrderKind:
                order = MonomialOrder.from_weights(weights, kind)
                gb = buchberger(Ideal(gens), order)
                assert gb.satisfies_buchberger_criterion()
                assert gb.is_reduced()
                assert all(gb.contains(g) for g in gens)
                results.append(quotient_basis(gb, weights))

            # The Hilbert function doesn't depend on the monomial order
            assert results[0].dimension == results[1].dimension
            assert results[0].multiplicities == results[1].multiplicities

    def test_deterministic(self):
        """Test repeated computations give identical bases."""
        polys = parse_polys(["x1^2 + x2^3 + x3^4", "x1^2 - x2^3 + 2*x3^4"])
        first = buchberger(Ideal(polys))
        second = buchberger(Ideal(list(reversed(polys))))
        assert first.elements == second.elements


class TestLimits:
    """Tests for the resource limits and invalid input"""

    def test_pair_budget_raises(self):
        """Test exceeding the S-pair budget raises an exception."""
        x1, x2 = Ring.xring(2).gens()
        msg = "exceeded the budget of 0 S-pairs"
        with pytest.raises(ResourceLimitError, match=msg):
            buchberger(Ideal([x1**2, x1 * x2]), pair_budget=0)

    def test_degree_bound_raises(self):
        """Test exceeding the degree bound raises an exception."""
        x1, x2 = Ring.xring(2).gens()
        with pytest.raises(ResourceLimitError, match="exceeded the degree bound"):
            buchberger(Ideal([x1**2, x1 * x2]), degree_bound=1)

    def test_order_mismatch_raises(self):
        """Test an order for another number of variables raises."""
        x1, x2 = Ring.xring(2).gens()
        with pytest.raises(ContextMismatchError, match="has 3 weights"):
            buchberger(Ideal([x1]), MonomialOrder.default(3))

    def test_infinite_dimensional_raises(self):
        """Test a positive dimensional quotient raises an exception."""
        x1, x2 = Ring.xring(2).gens()
        gb = buchberger(Ideal([x1**2]))
        with pytest.raises(InfiniteDimensionalError, match="pure power of x2"):
            quotient_basis(gb, WeightSystem((1, 1)))

    def test_not_homogeneous_raises(self):
        """Test a non-homogeneous basis raises an exception."""
        x1, x2 = Ring.xring(2).gens()
        gb = buchberger(Ideal([x1**2 + x2]))
        with pytest.raises(NotHomogeneousError, match="not weighted-homogeneous"):
            quotient_basis(gb, WeightSystem((1, 1)))

        with pytest.raises(ContextMismatchError, match="Got 3 weights"):
            quotient_basis(gb, WeightSystem((1, 1, 1)))
