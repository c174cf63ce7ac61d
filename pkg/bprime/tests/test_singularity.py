"""Tests for morphisms, Jacobian minors and weight normalisation."""

from fractions import Fraction

import numpy as np
import pytest
import sympy

from bprime.exceptions import (
    BadArityError,
    ContextMismatchError,
    DegenerateJacobianError,
    NoSolutionError,
    NotHomogeneousError,
    ZeroPolynomialError,
)
from bprime.polyring import Poly, Ring, WeightSystem
from bprime.singularity import (
    Morphism,
    critical_ideal,
    infer_morphism_weights,
    jacobian_ideal,
    jacobian_minors,
    normalize_weights,
)
from bprime.utils import parse_morphism, parse_poly


PAIR = ["x1^2 + x2^3 + x3^4", "x1^2 - x2^3 + 2*x3^4"]
SUM_OF_SQUARES = "x1^2 + x2^2 + x3^2 + x4^2"


def random_component(rng, ring):
    """Return a random nonzero polynomial vanishing at the origin."""
    terms = {}
    while not terms:
        for _ in range(3):
            mono = tuple(int(a) for a in rng.integers(0, 3, ring.ngens))
            if sum(mono):
                terms[mono] = int(rng.integers(-4, 5))

        terms = {m: c for m, c in terms.items() if c}

    return Poly(ring, terms)


def sympy_minor(components, columns, symbols):
    """Return the sympy determinant of the Jacobian submatrix."""
    rows = []
    for p in components:
        expr = sympy.Integer(0)
        for mono, coeff in p.items():
            term = sympy.Rational(coeff.numerator, coeff.denominator)
            for sym, exponent in zip(symbols, mono):
                term *= sym**exponent
            expr += term

        rows.append([sympy.diff(expr, symbols[c]) for c in columns])

    return sympy.expand(sympy.Matrix(rows).det())


def swap_variables(p, i, j):
    """Return `p` with the variables at `i` and `j` exchanged."""
    terms = {}
    for mono, coeff in p.items():
        mono = list(mono)
        mono[i], mono[j] = mono[j], mono[i]
        terms[tuple(mono)] = coeff

    return Poly(p.ring, terms)


class TestMorphism:
    """Tests for Morphism"""

    def test_properties(self):
        """Test the basic properties."""
        m = parse_morphism(PAIR[:1], PAIR[1])
        assert m.p == 1
        assert m.n == 3
        assert m.components == (m.h[0], m.f)
        assert [name for name, _ in m.named_components()] == ["h1", "f"]
        assert m == parse_morphism(PAIR[:1], PAIR[1])
        assert m != parse_morphism(PAIR[1:], PAIR[0])
        assert "Morphism(h=(" in repr(m)

    def test_bad_arity_raises(self):
        """Test too many components raise an exception."""
        msg = "needs at least 3 variables, got 2"
        with pytest.raises(BadArityError, match=msg):
            parse_morphism(["x1", "x2"], "x1*x2")

    def test_invalid_components_raise(self):
        """Test invalid components raise exceptions."""
        with pytest.raises(ValueError, match="doesn't vanish at the origin"):
            parse_morphism([], "x1 + 1")

        ring = Ring.xring(2)
        with pytest.raises(ZeroPolynomialError, match="component h1 is zero"):
            Morphism([ring.zero()], ring.gen(0))

        with pytest.raises(ContextMismatchError, match="not in the ring"):
            Morphism([Ring.xring(3).gen(0)], ring.gen(0))

        with pytest.raises(ContextMismatchError, match="must not involve 's'"):
            Morphism([], Ring.xring(2, with_s=True).gen(0))


class TestJacobian:
    """Tests for the Jacobian minors and ideals"""

    def test_pair_minors(self):
        """Test the minors of a pair of Brieskorn-Pham polynomials."""
        m = parse_morphism(PAIR[:1], PAIR[1])
        x1, x2, x3 = m.ring.gens()
        minors = jacobian_minors(m, include_f=True)
        assert minors == {
            (0, 1): -12 * x1 * x2**2,
            (0, 2): 8 * x1 * x3**3,
            (1, 2): 36 * x2**2 * x3**3,
        }

        # Swapping the rows changes the sign
        swapped = jacobian_minors(parse_morphism(PAIR[1:], PAIR[0]), include_f=True)
        assert all(swapped[k] == -v for k, v in minors.items())

        ideal = jacobian_ideal(m, include_f=True)
        assert set(ideal.generators) == {
            x1 * x2**2,
            x1 * x3**3,
            x2**2 * x3**3,
        }

    def test_minors_of_h(self):
        """Test the minors of h alone."""
        m = parse_morphism(PAIR[:1], PAIR[1])
        x1, x2, x3 = m.ring.gens()
        assert jacobian_minors(m) == {
            (0,): 2 * x1,
            (1,): 3 * x2**2,
            (2,): 4 * x3**3,
        }

        hypersurface = parse_morphism([], PAIR[0])
        assert jacobian_minors(hypersurface) == {(): hypersurface.ring.one()}

    def test_critical_ideal(self):
        """Test the ideal (h, f) + J_{h,f}."""
        m = parse_morphism(PAIR[:1], PAIR[1])
        ideal = critical_ideal(m)
        assert ideal.generators[:2] == m.components
        assert len(ideal) == 5
        assert len(critical_ideal(m, include_f=False)) == 4

    def test_degenerate_raises(self):
        """Test vanishing minors raise an exception."""
        m = parse_morphism(["x1^2", "x1^4"], "x3")
        assert all(g.is_zero for g in jacobian_minors(m).values())
        with pytest.raises(DegenerateJacobianError, match="matrix of h vanishes"):
            jacobian_ideal(m)

        with pytest.raises(DegenerateJacobianError, match="of \\(h, f\\) vanishes"):
            critical_ideal(m)

    def test_random_minors(self):
        """Test random minors against sympy determinants."""
        rng = np.random.default_rng(31415)
        ring = Ring.xring(3)
        symbols = sympy.symbols("x1 x2 x3")
        for _ in range(50):
            h = [random_component(rng, ring) for _ in range(2)]
            f = random_component(rng, ring)
            m = Morphism(h, f)
            with_f = jacobian_minors(m, include_f=True)
            assert list(with_f) == [(0, 1, 2)]
            full = with_f[(0, 1, 2)]
            expected = sympy_minor(m.components, (0, 1, 2), symbols)
            assert sympy.expand(sympy.sympify(str(full).replace("^", "**"))) == (
                expected
            )

            # Laplace expansion along the row of f
            minors = jacobian_minors(m)
            expansion = ring.zero()
            for ii in range(3):
                cols = tuple(c for c in range(3) if c != ii)
                expansion += (-1) ** (2 + ii) * f.diff(ii) * minors[cols]

            assert expansion == full


    def test_swapped_columns(self):
        """Test exchanging two variables permutes the minors with signs."""
        rng = np.random.default_rng(16180)
        ring = Ring.xring(3)
        sigma = (2, 1, 0)
        for _ in range(20):
            m = Morphism([random_component(rng, ring)], random_component(rng, ring))
            swapped = Morphism(
                [swap_variables(h, 0, 2) for h in m.h], swap_variables(m.f, 0, 2)
            )
            minors = jacobian_minors(m, include_f=True)
            for columns, minor in jacobian_minors(swapped, include_f=True).items():
                mapped = [sigma[c] for c in columns]
                inversions = sum(
                    1
                    for a in range(len(mapped))
                    for b in range(a + 1, len(mapped))
                    if mapped[a] > mapped[b]
                )
                expected = swap_variables(minors[tuple(sorted(mapped))], 0, 2)
                assert minor == (-1) ** inversions * expected

            # Exchanging both columns of a minor changes its sign
            flipped = jacobian_minors(swapped, include_f=True)[(0, 2)]
            assert flipped == -swap_variables(minors[(0, 2)], 0, 2)


class TestWeights:
    """Tests for normalize_weights() and infer_morphism_weights()"""

    def test_normalize(self):
        """Test rescaling so that f has degree 1."""
        m = parse_morphism(PAIR[:1], PAIR[1])
        nw = normalize_weights(m, WeightSystem((6, 4, 3)))
        assert nw.alpha.weights == (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4))
        assert nw.rho == (1,)
        assert nw.alpha_sum == Fraction(13, 12)
        assert nw.rho_sum == 1

        m = parse_morphism([SUM_OF_SQUARES], "x1")
        nw = normalize_weights(m, WeightSystem((1, 1, 1, 1)))
        assert nw.alpha.weights == (1, 1, 1, 1)
        assert nw.rho == (2,)
        assert nw.alpha_sum == 4
        assert nw.rho_sum == 2

    def test_not_homogeneous_names_component(self):
        """Test the offending component is named."""
        m = parse_morphism(["x1^2 + x2"], "x1")
        with pytest.raises(NotHomogeneousError, match="component h1") as exc:
            normalize_weights(m, WeightSystem((1, 1)))

        assert exc.value.component == "h1"

        m = parse_morphism(["x1"], "x1^2 + x2")
        with pytest.raises(NotHomogeneousError) as exc:
            normalize_weights(m, WeightSystem((1, 1)))

        assert exc.value.component == "f"

    @pytest.mark.parametrize(
        "h, f, weights",
        [
            (PAIR[:1], PAIR[1], (6, 4, 3)),
            ([SUM_OF_SQUARES], "x1", (1, 1, 1, 1)),
            (["x1"], SUM_OF_SQUARES, (5, 5, 5, 5)),
            ([], "x1^2*x2 + x2^4", (3, 2)),
        ],
    )
    def test_normalize_is_idempotent(self, h, f, weights):
        """Test normalizing normalized or rescaled weights changes nothing."""
        m = parse_morphism(h, f)
        nw = normalize_weights(m, WeightSystem(weights))
        assert normalize_weights(m, nw.alpha) == nw
        assert normalize_weights(m, nw.alpha.scaled(Fraction(7, 3))) == nw
        assert normalize_weights(m, WeightSystem(weights).scaled(2)) == nw

    @pytest.mark.parametrize(
        "h, f, expected",
        [
            ([SUM_OF_SQUARES], "x1", ("1", "1", "1", "1")),
            (["x1"], SUM_OF_SQUARES, ("1/2", "1/2", "1/2", "1/2")),
            (PAIR[:1], PAIR[1], ("1/2", "1/3", "1/4")),
            ([], "x1^2 + x2^3 + x3^4", ("1/2", "1/3", "1/4")),
        ],
    )
    def test_infer(self, h, f, expected):
        """Test inferring the weights of a morphism."""
        weights = infer_morphism_weights(parse_morphism(h, f))
        assert weights.weights == tuple(Fraction(w) for w in expected)

    def test_infer_no_solution_raises(self):
        """Test inference without a positive solution raises."""
        with pytest.raises(NoSolutionError):
            infer_morphism_weights(parse_morphism([], "x1^2*x2"))

        with pytest.raises(NoSolutionError, match="inconsistent"):
            infer_morphism_weights(parse_morphism([], "x1 + x2^2 + x1^2"))

    def test_parse_poly_ring(self):
        """Test components parsed separately need the same ring."""
        h = parse_poly("x1^2", nvars=2)
        f = parse_poly("x2")
        assert f.ring == h.ring
        assert Morphism([h], f).n == 2
