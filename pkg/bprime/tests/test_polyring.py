"""Tests for the polynomial substrate."""

from fractions import Fraction

import numpy as np
import pytest

from bprime.exceptions import (
    ContextMismatchError,
    NoSolutionError,
    NotHomogeneousError,
    ZeroPolynomialError,
)
from bprime.polyring import (
    MonomialOrder,
    OrderKind,
    Poly,
    Ring,
    WeightSystem,
    infer_weights,
    is_weighted_homogeneous,
    monomial_div,
    monomial_lcm,
    partial_derivative,
    weighted_degree,
)
from bprime.utils import parse_poly, parse_polys


def random_poly(rng, ring, nr_terms=4, max_exponent=3):
    """Return a random polynomial with small rational coefficients."""
    terms = {}
    for _ in range(nr_terms):
        mono = tuple(int(a) for a in rng.integers(0, max_exponent + 1, ring.ngens))
        num = int(rng.integers(-5, 6))
        den = int(rng.integers(1, 4))
        terms[mono] = terms.get(mono, 0) + Fraction(num, den)

    return Poly(ring, terms)


class TestRing:
    """Tests for Ring"""

    def test_xring(self):
        """Test the standard rings."""
        ring = Ring.xring(3)
        assert ring.names == ("x1", "x2", "x3")
        assert not ring.has_s
        assert ring.nx == 3

        ring = Ring.xring(2, with_s=True)
        assert ring.names == ("x1", "x2", "s")
        assert ring.has_s
        assert ring.nx == 2
        assert ring.s_index == 2
        assert ring.without_s() == Ring.xring(2)
        assert Ring.xring(2).with_s() == ring

    def test_invalid_raises(self):
        """Test invalid rings raise exceptions."""
        with pytest.raises(ValueError, match="Duplicate variable names"):
            Ring(("x1", "x1"))

        with pytest.raises(ValueError, match="must be the last variable"):
            Ring(("s", "x1"))

        with pytest.raises(ContextMismatchError, match="has no variable 's'"):
            Ring.xring(2).s


class TestPoly:
    """Tests for Poly"""

    def test_arithmetic(self):
        """Test basic arithmetic."""
        x1, x2 = Ring.xring(2).gens()
        p = (x1 + x2) * (x1 - x2)
        assert p == x1**2 - x2**2
        assert str(p) == "x1^2 - x2^2"
        assert p - p == 0
        assert (p - p).is_zero
        assert p * 0 == 0
        assert 2 * x1 == x1 + x1
        assert x1 * Fraction(3, 2) == parse_poly("3/2*x1", nvars=2)
        assert (x1 + 1) ** 3 == x1**3 + 3 * x1**2 + 3 * x1 + 1
        assert (x1 + 1) ** 0 == 1

    def test_str(self):
        """Test the text form."""
        x1, x2, x3 = Ring.xring(3).gens()
        assert str(x1.ring.zero()) == "0"
        assert str(x1.ring.constant(Fraction(-1, 2))) == "-1/2"
        assert str(x1**2 + x2**3 + 2 * x3**4) == "2*x3^4 + x2^3 + x1^2"
        assert str(-x1 * x2 + Fraction(1, 3) * x3) == "-x1*x2 + 1/3*x3"

    def test_diff(self):
        """Test formal partial derivatives."""
        x1, x2, x3 = Ring.xring(3).gens()
        p = x1**2 * x2 + 3 * x2 * x3**4
        assert p.diff(0) == 2 * x1 * x2
        assert p.diff(1) == x1**2 + 3 * x3**4
        assert partial_derivative(p, 2) == 12 * x2 * x3**3
        assert (x1 + 1).diff(2) == 0

        with pytest.raises(IndexError, match="No variable with index 3"):
            p.diff(3)

    def test_subs_and_embed(self):
        """Test substitution and changing rings."""
        ring = Ring.xring(2, with_s=True)
        x1, x2, s = ring.gens()
        p = (s + 1) * x1 + s**2 * x2
        assert p.subs(2, 0) == x1
        assert p.subs(2, -1) == x2

        q = (x1 + x2).embed(Ring.xring(2).with_s())
        assert q.ring.has_s
        assert parse_poly("x1 + x2").embed(ring) == x1 + x2

        with pytest.raises(ContextMismatchError, match="'s' is not in the ring"):
            p.embed(Ring.xring(2))

    def test_context_mismatch_raises(self):
        """Test mixing rings raises an exception."""
        a = Ring.xring(2).gen(0)
        b = Ring.xring(3).gen(0)
        with pytest.raises(ContextMismatchError, match="different rings"):
            a + b

        with pytest.raises(ContextMismatchError, match="different rings"):
            a * b

    def test_invalid_terms_raise(self):
        """Test invalid exponent vectors raise exceptions."""
        with pytest.raises(ValueError, match="Invalid exponent vector"):
            Poly(Ring.xring(2), {(1,): 1})

        with pytest.raises(ValueError, match="Invalid exponent vector"):
            Poly(Ring.xring(2), {(1, -1): 1})

    def test_leading_monomial(self):
        """Test leading monomials under the supported orders."""
        x1, x2, x3 = Ring.xring(3).gens()
        p = x1 * x3 + x2**2
        grevlex = MonomialOrder.default(3)
        glex = MonomialOrder.default(3, OrderKind.WGLEX)
        assert p.leading_monomial(grevlex) == (0, 2, 0)
        assert p.leading_monomial(glex) == (1, 0, 1)

        # Weights change the grading
        order = MonomialOrder.from_weights(WeightSystem((1, 2, 1)))
        assert order.weights == (1, 2, 1)
        assert (x1**3 + x2**2).leading_monomial(order) == (0, 2, 0)

        with pytest.raises(ZeroPolynomialError):
            x1.ring.zero().leading_monomial()

    def test_monomial_helpers(self):
        """Test the monomial helpers."""
        assert monomial_div((2, 1), (1, 1)) == (1, 0)
        assert monomial_div((2, 1), (0, 2)) is None
        assert monomial_lcm((2, 1), (0, 3)) == (2, 3)


class TestRingAxioms:
    """Property tests for the polynomial ring operations"""

    def test_axioms_and_leibniz(self):
        """Test ring axioms and the Leibniz rule on random triples."""
        rng = np.random.default_rng(20240611)
        ring = Ring.xring(3)
        for _ in range(500):
            a, b, c = (random_poly(rng, ring) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert a + b == b + a
            assert (a * b) * c == a * (b * c)
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c
            assert a - a == 0
            assert a * 1 == a

            ii = int(rng.integers(0, 3))
            assert (a * b).diff(ii) == a.diff(ii) * b + a * b.diff(ii)


class TestWeights:
    """Tests for weighted degrees and weight inference"""

    def test_weighted_degree(self):
        """Test the weighted degree of homogeneous polynomials."""
        f, g = parse_polys(["x1^2 + x2^3 + x3^4", "x1^2 - x2^3 + 2*x3^4"])
        weights = WeightSystem((Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)))
        assert weighted_degree(f, weights) == 1
        assert weighted_degree(g, weights) == 1
        assert weighted_degree(f.diff(2), weights) == Fraction(3, 4)
        assert weights.total == Fraction(13, 12)
        assert weights.integerized() == (6, 4, 3)
        assert is_weighted_homogeneous(f, weights)

    def test_not_homogeneous_raises(self):
        """Test non-homogeneous polynomials raise exceptions."""
        p = parse_poly("x1^2 + x2")
        weights = WeightSystem((1, 1))
        assert not is_weighted_homogeneous(p, weights)
        with pytest.raises(NotHomogeneousError, match="not weighted-homogeneous"):
            weighted_degree(p, weights)

        with pytest.raises(ZeroPolynomialError):
            weighted_degree(p.ring.zero(), weights)

        with pytest.raises(ContextMismatchError, match="Got 3 weights"):
            weighted_degree(p, WeightSystem((1, 1, 1)))

    def test_invalid_weights_raise(self):
        """Test non-positive weights raise exceptions."""
        with pytest.raises(ValueError, match="must be strictly positive"):
            WeightSystem((1, 0))

        with pytest.raises(ValueError, match="at least one weight"):
            WeightSystem(())

    @pytest.mark.parametrize(
        "exprs, degrees, expected",
        [
            (["x1^2 + x2^3 + x3^4"], [1], ("1/2", "1/3", "1/4")),
            (["x1^2 + x2^2 + x3^2 + x4^2"], [1], ("1/2",) * 4),
            (["x1^2 + x2^2 + x3^2", "x1"], [2, 1], ("1", "1", "1")),
            (["x1^3 + x2^2*x1"], [3], ("1", "1")),
        ],
    )
    def test_infer_weights(self, exprs, degrees, expected):
        """Test inferring weights."""
        polys = parse_polys(exprs)
        weights = infer_weights(polys, degrees)
        assert weights.weights == tuple(Fraction(w) for w in expected)

    def test_infer_weights_no_solution_raises(self):
        """Test inference without a positive solution raises."""
        # 2 w1 + w2 = 1 with the free weight set to 1 gives w1 = 0
        with pytest.raises(NoSolutionError, match="no strictly positive"):
            infer_weights([parse_poly("x1^2*x2")], [1])

        with pytest.raises(NoSolutionError, match="inconsistent"):
            infer_weights([parse_poly("x1 + x1^2")], [1])
