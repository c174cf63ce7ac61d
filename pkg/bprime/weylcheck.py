"""Exact verification of differential operator identities.

Sections are elements of the localization ``Q[x, s][1/(g_1 ... g_p f)] f^s``
of a morphism ``(g_1, ..., g_p, f)``, written as

    N / (g_1^d_1 ... g_p^d_p f^e) * f^s

and never simplified. Operators of ``D[s]`` act on them through the chain
rule, and two sections are compared by cross-multiplication.
"""

from functools import lru_cache
from fractions import Fraction
from itertools import product
import logging
from math import comb
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .bernstein import FactoredBPoly
from .exceptions import BadArityError, ContextMismatchError, UnknownGeneratorError
from .polyring import Coefficient, Poly, Ring
from .singularity import Morphism, jacobian_minors


LOGGER = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]


@lru_cache(maxsize=64)
def _embedded(m: Morphism) -> Tuple[Tuple[Poly, ...], Poly]:
    """Return the components of `m` in the ring with ``s``."""
    ring = m.ring.with_s()
    return tuple([g.embed(ring) for g in m.h]), m.f.embed(ring)


def _product(polys: Sequence[Poly], ring: Ring) -> Poly:
    result = ring.one()
    for p in polys:
        result = result * p

    return result


class SectionExpr:
    """The section ``numerator / (prod g_j^den_h[j] * f^den_f) * f^s``.

    Parameters
    ----------
    numerator : bprime.polyring.Poly
        A polynomial in the x-variables and (optionally) ``s``.
    den_h : tuple[int, ...]
        One non-negative exponent per ``g_j``.
    den_f : int
        The non-negative exponent of ``f``.
    context : bprime.singularity.Morphism
        The morphism ``(g_1, ..., g_p, f)`` whose components are the
        denominator bases.
    """

    __slots__ = ("numerator", "den_h", "den_f", "context")

    def __init__(
        self,
        numerator: Poly,
        den_h: Sequence[int],
        den_f: int,
        context: Morphism,
    ) -> None:
        ring = context.ring.with_s()
        try:
            self.numerator = numerator.embed(ring)
        except ContextMismatchError as exc:
            raise ContextMismatchError(
                f"The numerator '{numerator}' is not in the ring {ring}"
            ) from exc

        self.den_h = tuple(den_h)
        self.den_f = den_f
        self.context = context
        if len(self.den_h) != context.p:
            raise ContextMismatchError(
                f"Got {len(self.den_h)} denominator exponent(s) for {context.p} "
                "component(s) of h"
            )

        if min(self.den_h + (den_f,)) < 0:
            raise ValueError("Denominator exponents must be non-negative")

    @property
    def ring(self) -> Ring:
        return self.numerator.ring

    @property
    def is_zero(self) -> bool:
        return self.numerator.is_zero

    def _check(self, other: "SectionExpr") -> None:
        if self.context != other.context:
            raise ContextMismatchError(
                f"Sections belong to different morphisms: {self.context} and "
                f"{other.context}"
            )

    def raise_to(self, den_h: Sequence[int], den_f: int) -> "SectionExpr":
        """Return the same section written over larger denominators."""
        if any(a < b for a, b in zip(den_h, self.den_h)) or den_f < self.den_f:
            raise ValueError("Denominators can only be raised")

        g, f = _embedded(self.context)
        numerator = self.numerator * f ** (den_f - self.den_f)
        for base, new, old in zip(g, den_h, self.den_h):
            numerator = numerator * base ** (new - old)

        return SectionExpr(numerator, den_h, den_f, self.context)

    def _common(
        self, other: "SectionExpr"
    ) -> Tuple["SectionExpr", "SectionExpr"]:
        self._check(other)
        den_h = tuple([max(a, b) for a, b in zip(self.den_h, other.den_h)])
        den_f = max(self.den_f, other.den_f)
        return self.raise_to(den_h, den_f), other.raise_to(den_h, den_f)

    def __add__(self, other: "SectionExpr") -> "SectionExpr":
        a, b = self._common(other)
        return SectionExpr(a.numerator + b.numerator, a.den_h, a.den_f, a.context)

    def __neg__(self) -> "SectionExpr":
        return SectionExpr(-self.numerator, self.den_h, self.den_f, self.context)

    def __sub__(self, other: "SectionExpr") -> "SectionExpr":
        return self + (-other)

    def multiply(self, factor: Union[Poly, Coefficient]) -> "SectionExpr":
        """Return the section with its numerator multiplied by `factor`."""
        if isinstance(factor, Poly):
            factor = factor.embed(self.ring)

        return SectionExpr(
            self.numerator * factor, self.den_h, self.den_f, self.context
        )

    def specialize(self, s_value: Coefficient) -> "SectionExpr":
        """Return the section with ``s`` replaced by `s_value`."""
        numerator = self.numerator.subs(self.ring.s_index, s_value)
        return SectionExpr(numerator, self.den_h, self.den_f, self.context)

    def __repr__(self) -> str:
        return (
            f"SectionExpr('{self.numerator}', den_h={self.den_h}, "
            f"den_f={self.den_f})"
        )


def delta(
    m: Morphism,
    powers: Optional[Sequence[int]] = None,
    numerator: Union[Poly, Coefficient, None] = None,
) -> SectionExpr:
    """Return ``numerator * delta_h f^s`` for ``h_j = g_j^powers[j]``.

    Parameters
    ----------
    m : bprime.singularity.Morphism
        The morphism ``(g_1, ..., g_p, f)``.
    powers : list[int], optional
        The exponent of each ``g_j`` in ``h_j``, default all ``1``.
    numerator : bprime.polyring.Poly or int or fractions.Fraction, optional
        The numerator, default ``1``. Use ``f`` for ``delta_h f^{s+1}``.
    """
    ring = m.ring.with_s()
    powers = tuple(powers) if powers is not None else (1,) * m.p
    if numerator is None:
        numerator = ring.one()
    elif not isinstance(numerator, Poly):
        numerator = ring.constant(numerator)

    return SectionExpr(numerator, powers, 0, m)


class DiffOperator:
    """An element ``sum_a c_a(x, s) d^a`` of ``D[s]`` in normal form.

    Coefficients stand to the left of the derivatives.

    Parameters
    ----------
    ring : bprime.polyring.Ring
        The ring of the coefficients, extended by ``s`` if needed.
    terms : dict[tuple[int, ...], bprime.polyring.Poly], optional
        Map of derivative multi-indices (one entry per x-variable) to
        coefficients. Zero coefficients are dropped.
    """

    __slots__ = ("ring", "_terms")

    def __init__(
        self, ring: Ring, terms: Optional[Mapping[MultiIndex, Poly]] = None
    ) -> None:
        self.ring = ring.with_s()
        self._terms: Dict[MultiIndex, Poly] = {}
        for index, coeff in (terms or {}).items():
            index = tuple(index)
            if len(index) != self.ring.nx or min(index, default=0) < 0:
                raise ValueError(
                    f"Invalid derivative multi-index {index} for {self.ring.nx} "
                    "variable(s)"
                )

            coeff = coeff.embed(self.ring)
            total = self._terms.get(index, self.ring.zero()) + coeff
            if total.is_zero:
                self._terms.pop(index, None)
            else:
                self._terms[index] = total

    @classmethod
    def identity(cls, ring: Ring) -> "DiffOperator":
        ring = ring.with_s()
        return cls(ring, {(0,) * ring.nx: ring.one()})

    @classmethod
    def partial(cls, ring: Ring, index: int) -> "DiffOperator":
        """Return the derivation by the x-variable at (0-based) `index`."""
        ring = ring.with_s()
        if not 0 <= index < ring.nx:
            raise IndexError(f"No x-variable with index {index} in {ring}")

        mi = [0] * ring.nx
        mi[index] = 1
        return cls(ring, {tuple(mi): ring.one()})

    @classmethod
    def multiplier(cls, coeff: Poly) -> "DiffOperator":
        """Return multiplication by `coeff`."""
        ring = coeff.ring.with_s()
        return cls(ring, {(0,) * ring.nx: coeff})

    @property
    def terms(self) -> Dict[MultiIndex, Poly]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[MultiIndex, Poly]]:
        return iter(sorted(self._terms.items()))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def order(self) -> int:
        """Return the order, ``-1`` for the zero operator."""
        return max((sum(mi) for mi in self._terms), default=-1)

    def _coerce(self, other: object) -> "DiffOperator":
        if isinstance(other, DiffOperator):
            if other.ring != self.ring:
                raise ContextMismatchError(
                    f"Operators belong to different rings: {self.ring} and "
                    f"{other.ring}"
                )
            return other

        if isinstance(other, Poly):
            return DiffOperator.multiplier(other.embed(self.ring))

        if isinstance(other, (int, Fraction)):
            return DiffOperator.multiplier(self.ring.constant(other))

        raise TypeError(f"Unsupported operand type '{type(other).__name__}'")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffOperator):
            return NotImplemented

        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self._terms.items())))

    def __add__(self, other: object) -> "DiffOperator":
        other = self._coerce(other)
        terms = dict(self._terms)
        for index, coeff in other._terms.items():
            terms[index] = terms.get(index, self.ring.zero()) + coeff

        return DiffOperator(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> "DiffOperator":
        return DiffOperator(self.ring, {mi: -c for mi, c in self._terms.items()})

    def __sub__(self, other: object) -> "DiffOperator":
        return self + (-self._coerce(other))

    def __mul__(self, other: object) -> "DiffOperator":
        """Return the composition ``self o other``."""
        other = self._coerce(other)
        terms: Dict[MultiIndex, Poly] = {}
        for alpha, c in self._terms.items():
            for beta, d in other._terms.items():
                # Leibniz rule for d^alpha c, summed over gamma <= alpha
                for gamma in product(*[range(a + 1) for a in alpha]):
                    derived = d
                    for index, order in enumerate(gamma):
                        for _ in range(order):
                            derived = derived.diff(index)

                    if derived.is_zero:
                        continue

                    factor = 1
                    for a, g in zip(alpha, gamma):
                        factor *= comb(a, g)

                    target = tuple(
                        [a - g + b for a, g, b in zip(alpha, gamma, beta)]
                    )
                    terms[target] = (
                        terms.get(target, self.ring.zero()) + c * derived * factor
                    )

        return DiffOperator(self.ring, terms)

    def __rmul__(self, other: object) -> "DiffOperator":
        return self._coerce(other) * self

    def __repr__(self) -> str:
        out = []
        for mi, coeff in self.items():
            derivs = "*".join(
                f"d{ii + 1}" if a == 1 else f"d{ii + 1}^{a}"
                for ii, a in enumerate(mi)
                if a
            )
            out.append(f"({coeff})*{derivs}" if derivs else f"({coeff})")

        return f"DiffOperator({' + '.join(out) or '0'})"


def _apply_partial(expr: SectionExpr, index: int) -> SectionExpr:
    """Return ``d_index`` applied to `expr`, every denominator exponent
    raised by one."""
    ring = expr.ring
    g, f = _embedded(expr.context)
    numerator = expr.numerator
    big_g = _product(g, ring)

    result = numerator.diff(index) * big_g * f
    for jj, (base, exponent) in enumerate(zip(g, expr.den_h)):
        if not exponent:
            continue

        others = _product(g[:jj] + g[jj + 1 :], ring)
        result = result - numerator * base.diff(index) * others * f * exponent

    df = f.diff(index)
    if not df.is_zero:
        result = result + (ring.s - expr.den_f) * numerator * df * big_g

    return SectionExpr(
        result,
        tuple([d + 1 for d in expr.den_h]),
        expr.den_f + 1,
        expr.context,
    )


def apply(op: DiffOperator, expr: SectionExpr) -> SectionExpr:
    """Return the action of `op` on `expr`.

    Raises
    ------
    ContextMismatchError
        If `op` and `expr` don't share the ring of the morphism context.
    """
    if op.ring != expr.ring:
        raise ContextMismatchError(
            f"The operator acts on {op.ring} but the section lives in {expr.ring}"
        )

    result = SectionExpr(expr.ring.zero(), expr.den_h, expr.den_f, expr.context)
    for mi, coeff in op.items():
        term = expr
        for index, order in enumerate(mi):
            for _ in range(order):
                term = _apply_partial(term, index)

        result = result + term.multiply(coeff)

    return result


def expr_equal(a: SectionExpr, b: SectionExpr) -> bool:
    """Return ``True`` if `a` and `b` are equal in the localization."""
    a, b = a._common(b)
    return a.numerator == b.numerator


def _as_s_poly(b: Union[FactoredBPoly, Poly, Coefficient], ring: Ring) -> Poly:
    if isinstance(b, FactoredBPoly):
        return b.expand(ring)

    if isinstance(b, Poly):
        return b.embed(ring)

    return ring.constant(b)


def verify_bernstein_certificate(
    b: Union[FactoredBPoly, Poly],
    op: DiffOperator,
    m: Morphism,
    powers: Optional[Sequence[int]] = None,
) -> bool:
    """Return ``True`` if ``b(s) delta_h f^s = op . delta_h f^{s+1}``.

    Parameters
    ----------
    b : bprime.bernstein.FactoredBPoly or bprime.polyring.Poly
        The polynomial ``b(s)``.
    op : bprime.weylcheck.DiffOperator
        The operator ``P(s)``.
    m : bprime.singularity.Morphism
        The morphism ``(g_1, ..., g_p, f)``.
    powers : list[int], optional
        The exponents with ``h_j = g_j^powers[j]``, default all ``1``.
    """
    lhs = delta(m, powers, _as_s_poly(b, m.ring.with_s()))
    rhs = apply(op, delta(m, powers, m.f))
    verified = expr_equal(lhs, rhs)
    LOGGER.debug(f"Bernstein certificate for {m}: verified {verified}")
    return verified


def _recognized_generators(
    m: Morphism, powers: Optional[Sequence[int]]
) -> List[Poly]:
    """Return ``f`` and the nonzero minors of ``J_{h,f}``, made monic."""
    h = m.h
    if powers is not None:
        h = tuple([g**a for g, a in zip(m.h, powers)])

    expanded = Morphism(h, m.f)
    generators = [m.f.monic()]
    generators.extend(
        g.monic() for g in jacobian_minors(expanded, include_f=True).values()
        if not g.is_zero
    )
    return generators


def verify_membership_certificate(
    b: Union[FactoredBPoly, Poly, Coefficient],
    parts: Sequence[Tuple[DiffOperator, Poly]],
    m: Morphism,
    *,
    powers: Optional[Sequence[int]] = None,
    allow_arbitrary: bool = False,
) -> bool:
    """Return ``True`` if ``b delta_h f^s = sum_j P_j . g_j delta_h f^s``.

    Parameters
    ----------
    b : bprime.bernstein.FactoredBPoly or bprime.polyring.Poly
        The left-hand side multiplier, usually a polynomial in ``s`` only.
    parts : list[tuple[bprime.weylcheck.DiffOperator, bprime.polyring.Poly]]
        The operators ``P_j`` with their generators ``g_j``.
    m : bprime.singularity.Morphism
        The morphism ``(g_1, ..., g_p, f)``.
    powers : list[int], optional
        The exponents with ``h_j = g_j^powers[j]``, default all ``1``.
    allow_arbitrary : bool, optional
        If ``False`` (default) each ``g_j`` must be ``f`` or a maximal minor
        of the Jacobian matrix of ``(h, f)``, up to a nonzero scalar.

    Raises
    ------
    UnknownGeneratorError
        If a generator isn't recognized and `allow_arbitrary` is ``False``.
    """
    if powers is not None and len(powers) != m.p:
        raise ContextMismatchError(f"Got {len(powers)} power(s) for {m.p} component(s)")

    if not allow_arbitrary:
        known = _recognized_generators(m, powers)
        for _, gen in parts:
            if gen.is_zero or gen.embed(m.ring.with_s()).monic() not in [
                g.embed(m.ring.with_s()) for g in known
            ]:
                raise UnknownGeneratorError(
                    f"The generator '{gen}' is neither f nor a maximal minor of "
                    "the Jacobian matrix of (h, f)"
                )

    lhs = delta(m, powers, _as_s_poly(b, m.ring.with_s()))
    rhs = delta(m, powers, 0)
    for op, gen in parts:
        rhs = rhs + apply(op, delta(m, powers, gen.embed(m.ring.with_s())))

    verified = expr_equal(lhs, rhs)
    LOGGER.debug(
        f"Membership certificate with {len(parts)} part(s) for {m}: verified "
        f"{verified}"
    )
    return verified


def vector_field(m: Morphism, columns: Sequence[int]) -> DiffOperator:
    """Return the cofactor vector field of `m` for ``p + 1`` columns.

    For increasing (0-based) columns ``k_0 < ... < k_p`` this is

        sum_i (-1)^(p + i) m_{k without k_i}(h) d_{k_i}

    It annihilates ``delta_h`` and satisfies
    ``(s + 1) m_k(h, f) delta_h f^s = field . delta_h f^{s+1}``.

    Raises
    ------
    BadArityError
        If the number of columns isn't ``p + 1``.
    """
    columns = tuple(columns)
    if len(columns) != m.p + 1:
        raise BadArityError(
            f"The vector field needs {m.p + 1} column(s), got {len(columns)}"
        )

    if list(columns) != sorted(set(columns)) or not all(
        0 <= c < m.n for c in columns
    ):
        raise ValueError(f"Invalid columns {columns} for {m.n} variable(s)")

    minors = jacobian_minors(m, include_f=False)
    field = DiffOperator(m.ring)
    for ii, column in enumerate(columns):
        cofactor = minors[columns[:ii] + columns[ii + 1 :]]
        if (m.p + ii) % 2:
            cofactor = -cofactor

        field = field + DiffOperator.multiplier(cofactor) * DiffOperator.partial(
            m.ring, column
        )

    return field
