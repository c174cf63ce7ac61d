"""Exact sparse multivariate polynomials over Q with weighted gradings."""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import logging
from math import lcm
from types import MappingProxyType
from typing import (
    Dict,
    Iterator,
    List,
    Mapping,
    Sequence,
    Tuple,
    Union,
    Optional,
)

import sympy

from .exceptions import (
    ContextMismatchError,
    NoSolutionError,
    NotHomogeneousError,
    ZeroPolynomialError,
)


LOGGER = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Coefficient = Union[int, Fraction]

S_NAME = "s"


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    """Return the product of the monomials `a` and `b`."""
    return tuple([x + y for x, y in zip(a, b)])


def monomial_div(a: Monomial, b: Monomial) -> Optional[Monomial]:
    """Return `a` / `b` or ``None`` if `b` doesn't divide `a`."""
    quotient = tuple([x - y for x, y in zip(a, b)])
    if min(quotient, default=0) < 0:
        return None

    return quotient


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """Return ``True`` if `a` divides `b`."""
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    """Return the least common multiple of the monomials `a` and `b`."""
    return tuple([max(x, y) for x, y in zip(a, b)])


@dataclass(frozen=True)
class Ring:
    """The variables of a polynomial ring over Q.

    The x-variables are named ``x1`` to ``xn``; the optional parameter of
    Bernstein functional equations is named ``s`` and is always last.
    """

    names: Tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"Duplicate variable names in {self.names}")

        if S_NAME in self.names[:-1]:
            raise ValueError("The variable 's' must be the last variable")

    @classmethod
    def xring(cls, n: int, with_s: bool = False) -> "Ring":
        """Return the ring Q[x1, ..., xn] or Q[x1, ..., xn, s]."""
        if n < 0:
            raise ValueError("The number of variables must be non-negative")

        names = tuple([f"x{ii + 1}" for ii in range(n)])
        return cls(names + (S_NAME,) if with_s else names)

    @property
    def ngens(self) -> int:
        """Return the total number of variables."""
        return len(self.names)

    @property
    def has_s(self) -> bool:
        """Return ``True`` if the ring contains the variable ``s``."""
        return bool(self.names) and self.names[-1] == S_NAME

    @property
    def nx(self) -> int:
        """Return the number of x-variables."""
        return self.ngens - 1 if self.has_s else self.ngens

    @property
    def s_index(self) -> int:
        """Return the index of ``s``."""
        if not self.has_s:
            raise ContextMismatchError(f"The ring {self} has no variable 's'")

        return self.ngens - 1

    def with_s(self) -> "Ring":
        """Return this ring extended by ``s``."""
        return self if self.has_s else Ring(self.names + (S_NAME,))

    def without_s(self) -> "Ring":
        """Return this ring without ``s``."""
        return Ring(self.names[:-1]) if self.has_s else self

    def zero(self) -> "Poly":
        return Poly(self)

    def one(self) -> "Poly":
        return self.constant(1)

    def constant(self, value: Coefficient) -> "Poly":
        """Return the constant polynomial `value`."""
        return Poly(self, {(0,) * self.ngens: value})

    def gen(self, index: int) -> "Poly":
        """Return the variable at (0-based) `index` as a polynomial."""
        if not 0 <= index < self.ngens:
            raise IndexError(f"No variable with index {index} in {self}")

        mono = [0] * self.ngens
        mono[index] = 1
        return Poly(self, {tuple(mono): 1})

    def gens(self) -> Tuple["Poly", ...]:
        return tuple([self.gen(ii) for ii in range(self.ngens)])

    @property
    def s(self) -> "Poly":
        """Return the variable ``s`` as a polynomial."""
        return self.gen(self.s_index)

    def __str__(self) -> str:
        return f"Q[{', '.join(self.names)}]"


class Poly:
    """An immutable sparse polynomial with exact rational coefficients.

    Parameters
    ----------
    ring : bprime.polyring.Ring
        The ring containing the polynomial.
    terms : dict[tuple[int, ...], int | fractions.Fraction], optional
        The map of exponent vectors to coefficients, zero coefficients are
        discarded. Defaults to the zero polynomial.
    """

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(
        self,
        ring: Ring,
        terms: Union[Mapping[Monomial, Coefficient], None] = None,
    ) -> None:
        self.ring = ring
        self._hash: Optional[int] = None
        self._terms: Dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != ring.ngens or min(mono, default=0) < 0:
                raise ValueError(
                    f"Invalid exponent vector {mono} for the ring {ring}"
                )

            coeff = Fraction(coeff)
            if coeff:
                self._terms[mono] = self._terms.get(mono, Fraction(0)) + coeff
                if not self._terms[mono]:
                    del self._terms[mono]

    @classmethod
    def _raw(cls, ring: Ring, terms: Dict[Monomial, Fraction]) -> "Poly":
        """Return a polynomial from already normalised `terms`."""
        poly = cls.__new__(cls)
        poly.ring = ring
        poly._terms = terms
        poly._hash = None
        return poly

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        """Return a read-only view of the exponent to coefficient map."""
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def monomials(self) -> List[Monomial]:
        return list(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.ring.ngens)

    def degree(self) -> int:
        """Return the total degree, ``-1`` for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def _coerce(self, other: object) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ContextMismatchError(
                    f"Polynomials belong to different rings: {self.ring} and "
                    f"{other.ring}"
                )
            return other

        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)

        raise TypeError(f"Unsupported operand type '{type(other).__name__}'")

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)

        if not isinstance(other, Poly):
            return NotImplemented

        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))

        return self._hash

    def __add__(self, other: object) -> "Poly":
        if not isinstance(other, (Poly, int, Fraction)):
            return NotImplemented

        other = self._coerce(other)
        terms = dict(self._terms)
        for mono, coeff in other._terms.items():
            value = terms.get(mono, 0) + coeff
            if value:
                terms[mono] = value
            else:
                terms.pop(mono, None)

        return Poly._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: object) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other: object) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)

        if not isinstance(other, Poly):
            return NotImplemented

        other = self._coerce(other)
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = monomial_mul(m1, m2)
                value = terms.get(mono, 0) + c1 * c2
                if value:
                    terms[mono] = value
                else:
                    terms.pop(mono, None)

        return Poly._raw(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("Only non-negative integer powers are supported")

        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1

        return result

    def scale(self, factor: Coefficient) -> "Poly":
        """Return the polynomial multiplied by the constant `factor`."""
        factor = Fraction(factor)
        if not factor:
            return self.ring.zero()

        return Poly._raw(self.ring, {m: c * factor for m, c in self._terms.items()})

    def mul_term(self, mono: Monomial, coeff: Coefficient = 1) -> "Poly":
        """Return the polynomial multiplied by ``coeff * x^mono``."""
        coeff = Fraction(coeff)
        if not coeff:
            return self.ring.zero()

        return Poly._raw(
            self.ring,
            {monomial_mul(m, mono): c * coeff for m, c in self._terms.items()},
        )

    def diff(self, index: int) -> "Poly":
        """Return the formal partial derivative by the variable at `index`."""
        if not 0 <= index < self.ring.ngens:
            raise IndexError(f"No variable with index {index} in {self.ring}")

        terms: Dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            exponent = mono[index]
            if exponent:
                lowered = mono[:index] + (exponent - 1,) + mono[index + 1 :]
                terms[lowered] = coeff * exponent

        return Poly._raw(self.ring, terms)

    def subs(self, index: int, value: Coefficient) -> "Poly":
        """Return the polynomial with the variable at `index` set to `value`."""
        value = Fraction(value)
        result: Dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            lowered = mono[:index] + (0,) + mono[index + 1 :]
            result[lowered] = result.get(lowered, 0) + coeff * value ** mono[index]

        return Poly(self.ring, result)

    def embed(self, ring: Ring) -> "Poly":
        """Return the same polynomial in `ring`, matching variables by name."""
        if ring == self.ring:
            return self

        positions = []
        for name in self.ring.names:
            if name not in ring.names:
                if any(m[len(positions)] for m in self._terms):
                    raise ContextMismatchError(
                        f"The variable '{name}' is not in the ring {ring}"
                    )
                positions.append(None)
            else:
                positions.append(ring.names.index(name))

        terms: Dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            target = [0] * ring.ngens
            for exponent, pos in zip(mono, positions):
                if pos is not None:
                    target[pos] = exponent
            terms[tuple(target)] = coeff

        return Poly._raw(ring, terms)

    def leading_monomial(self, order: Optional["MonomialOrder"] = None) -> Monomial:
        """Return the largest monomial for `order` (default graded revlex)."""
        if not self._terms:
            raise ZeroPolynomialError("The zero polynomial has no leading monomial")

        order = order or MonomialOrder.default(self.ring.ngens)
        return max(self._terms, key=order.key)

    def leading_coefficient(self, order: Optional["MonomialOrder"] = None) -> Fraction:
        return self._terms[self.leading_monomial(order)]

    def monic(self, order: Optional["MonomialOrder"] = None) -> "Poly":
        """Return the polynomial scaled to leading coefficient 1."""
        return self.scale(1 / self.leading_coefficient(order))

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        """Return the terms from largest to smallest in graded revlex order."""
        order = MonomialOrder.default(self.ring.ngens)
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __str__(self) -> str:
        if not self._terms:
            return "0"

        out = []
        for idx, (mono, coeff) in enumerate(self.sorted_terms()):
            factors = [
                name if exponent == 1 else f"{name}^{exponent}"
                for name, exponent in zip(self.ring.names, mono)
                if exponent
            ]
            magnitude = abs(coeff)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude)] + factors)

            if idx == 0:
                out.append(f"-{body}" if coeff < 0 else body)
            else:
                out.append(f" - {body}" if coeff < 0 else f" + {body}")

        return "".join(out)

    def __repr__(self) -> str:
        return f"Poly('{self}', {self.ring})"


def add(p: Poly, q: Poly) -> Poly:
    """Return ``p + q``."""
    return p + q


def mul(p: Poly, q: Poly) -> Poly:
    """Return ``p * q``."""
    return p * q


def partial_derivative(p: Poly, index: int) -> Poly:
    """Return the formal partial derivative of `p` by the variable at `index`."""
    return p.diff(index)


@dataclass(frozen=True)
class WeightSystem:
    """Strictly positive rational weights, one per x-variable."""

    weights: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        weights = tuple([Fraction(w) for w in self.weights])
        if not weights:
            raise ValueError("A weight system needs at least one weight")

        if min(weights) <= 0:
            raise ValueError(
                f"All weights must be strictly positive, got "
                f"({', '.join(str(w) for w in weights)})"
            )

        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.weights)

    def __getitem__(self, index: int) -> Fraction:
        return self.weights[index]

    @property
    def total(self) -> Fraction:
        """Return the sum of the weights."""
        return sum(self.weights, Fraction(0))

    def scaled(self, factor: Coefficient) -> "WeightSystem":
        return WeightSystem(tuple([w * factor for w in self.weights]))

    def degree_of(self, mono: Monomial) -> Fraction:
        """Return the weighted degree of the x-part of `mono`."""
        return sum((w * a for w, a in zip(self.weights, mono)), Fraction(0))

    def integerized(self) -> Tuple[int, ...]:
        """Return the weights scaled by the lcm of their denominators."""
        scale = lcm(*[w.denominator for w in self.weights])
        return tuple([int(w * scale) for w in self.weights])

    def __str__(self) -> str:
        return f"({', '.join(str(w) for w in self.weights)})"


class OrderKind(Enum):
    """The supported monomial orders."""

    WGREVLEX = "wgrevlex"
    WGLEX = "wglex"


@dataclass(frozen=True)
class MonomialOrder:
    """A weighted-graded monomial order with integer weights.

    Ties in weighted degree are broken by reverse lexicographic order with
    ``x_n < ... < x_1`` (`WGREVLEX`) or by lexicographic order (`WGLEX`).
    """

    kind: OrderKind
    weights: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(not isinstance(w, int) or w <= 0 for w in self.weights):
            raise ValueError("Monomial order weights must be positive integers")

    @classmethod
    def default(
        cls, ngens: int, kind: OrderKind = OrderKind.WGREVLEX
    ) -> "MonomialOrder":
        """Return the standard graded order on `ngens` variables."""
        return cls(kind, (1,) * ngens)

    @classmethod
    def from_weights(
        cls,
        weights: WeightSystem,
        kind: OrderKind = OrderKind.WGREVLEX,
        ngens: Union[int, None] = None,
    ) -> "MonomialOrder":
        """Return the order graded by the integerized `weights`.

        Variables beyond the weighted ones (such as ``s``) get weight 1.
        """
        integral = weights.integerized()
        ngens = len(integral) if ngens is None else ngens
        return cls(kind, integral + (1,) * (ngens - len(integral)))

    def degree(self, mono: Monomial) -> int:
        return sum([w * a for w, a in zip(self.weights, mono)])

    def key(self, mono: Monomial) -> Tuple[int, ...]:
        """Return a sort key, larger keys are larger monomials."""
        if self.kind is OrderKind.WGREVLEX:
            return (self.degree(mono),) + tuple([-a for a in reversed(mono)])

        return (self.degree(mono),) + tuple(mono)


def weighted_degree(p: Poly, weights: WeightSystem) -> Fraction:
    """Return the weighted degree of the weighted-homogeneous `p`.

    Parameters
    ----------
    p : bprime.polyring.Poly
        A nonzero polynomial in the x-variables.
    weights : bprime.polyring.WeightSystem
        One weight per x-variable of the ring of `p`.

    Returns
    -------
    fractions.Fraction
        The common weighted degree of every term of `p`.

    Raises
    ------
    ZeroPolynomialError
        If `p` is zero.
    NotHomogeneousError
        If the terms of `p` have different weighted degrees.
    """
    if p.is_zero:
        raise ZeroPolynomialError("The zero polynomial has no weighted degree")

    if len(weights) != p.ring.nx:
        raise ContextMismatchError(
            f"Got {len(weights)} weights for {p.ring.nx} x-variables"
        )

    if p.ring.has_s and any(m[p.ring.s_index] for m in p.monomials()):
        raise ContextMismatchError("Weighted degrees are defined for x-variables only")

    degrees = {weights.degree_of(mono) for mono in p.monomials()}
    if len(degrees) > 1:
        raise NotHomogeneousError(
            f"The polynomial '{p}' is not weighted-homogeneous for the weights "
            f"{weights}"
        )

    return degrees.pop()


def is_weighted_homogeneous(p: Poly, weights: WeightSystem) -> bool:
    """Return ``True`` if the nonzero `p` is weighted-homogeneous."""
    try:
        weighted_degree(p, weights)
    except NotHomogeneousError:
        return False

    return True


def solve_positive(
    rows: Sequence[Sequence[Coefficient]],
    rhs: Sequence[Coefficient],
    nr_unknowns: int,
) -> Tuple[Fraction, ...]:
    """Return a strictly positive solution of ``rows * w = rhs``.

    Free parameters left by Gauss-Jordan elimination over Q are set to 1.

    Raises
    ------
    NoSolutionError
        If the system is inconsistent or the chosen solution has an entry
        that isn't strictly positive.
    """
    # Identical equations are common, one per repeated exponent vector
    equations = list(dict.fromkeys(
        (tuple(Fraction(c) for c in row), Fraction(b)) for row, b in zip(rows, rhs)
    ))
    matrix = sympy.Matrix(
        len(equations),
        nr_unknowns,
        lambda ii, jj: sympy.Rational(
            equations[ii][0][jj].numerator, equations[ii][0][jj].denominator
        ),
    )
    vector = sympy.Matrix(
        [sympy.Rational(b.numerator, b.denominator) for _, b in equations]
    )
    try:
        solution, params = matrix.gauss_jordan_solve(vector)
    except ValueError as exc:
        raise NoSolutionError("The degree equations are inconsistent") from exc

    if params.shape[0]:
        LOGGER.debug(f"Setting {params.shape[0]} free weight parameter(s) to 1")
        solution = solution.subs({tau: 1 for tau in params})

    values = tuple(
        [Fraction(int(v.p), int(v.q)) for v in map(sympy.Rational, solution)]
    )
    if min(values) <= 0:
        raise NoSolutionError(
            f"The degree equations admit no strictly positive solution "
            f"(got ({', '.join(str(v) for v in values)}))"
        )

    return values


def infer_weights(
    polys: Sequence[Poly], degrees: Sequence[Coefficient]
) -> WeightSystem:
    """Return weights making each of `polys` homogeneous of the given degree.

    Parameters
    ----------
    polys : list[bprime.polyring.Poly]
        Nonzero polynomials in the same ring.
    degrees : list[int | fractions.Fraction]
        The required weighted degree of each polynomial.

    Returns
    -------
    bprime.polyring.WeightSystem
        The unique solution when the system is 0-dimensional, otherwise the
        solution with every free parameter set to 1.

    Raises
    ------
    NoSolutionError
        If no strictly positive weight system exists.
    """
    if not polys or len(polys) != len(degrees):
        raise ValueError("'polys' must be nonempty and match 'degrees' in length")

    ring = polys[0].ring
    rows: List[Monomial] = []
    rhs: List[Fraction] = []
    for poly, degree in zip(polys, degrees):
        if poly.ring != ring:
            raise ContextMismatchError("All polynomials must share one ring")

        if poly.is_zero:
            raise ZeroPolynomialError("Cannot infer weights from the zero polynomial")

        for mono in poly.monomials():
            rows.append(mono[: ring.nx])
            rhs.append(Fraction(degree))

    return WeightSystem(solve_positive(rows, rhs, ring.nx))
