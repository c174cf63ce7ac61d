"""Buchberger Groebner bases, normal forms and quotient monomial bases."""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple, Union

import numpy as np

from .exceptions import (
    ContextMismatchError,
    InfiniteDimensionalError,
    NotHomogeneousError,
    ResourceLimitError,
    ZeroPolynomialError,
)
from .polyring import (
    Monomial,
    MonomialOrder,
    Poly,
    Ring,
    WeightSystem,
    is_weighted_homogeneous,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)


LOGGER = logging.getLogger(__name__)

DEFAULT_DEGREE_BOUND = 60
DEFAULT_PAIR_BUDGET = 10**6


class Ideal:
    """An ideal of a polynomial ring given by nonzero generators.

    Parameters
    ----------
    generators : iterable of bprime.polyring.Poly
        The generators, zero polynomials are dropped and duplicates removed
        (keeping the first occurrence).
    """

    def __init__(self, generators: Iterable[Poly]) -> None:
        gens = list(dict.fromkeys(g for g in generators if not g.is_zero))
        if not gens:
            raise ZeroPolynomialError("An ideal needs at least one nonzero generator")

        ring = gens[0].ring
        if any(g.ring != ring for g in gens):
            raise ContextMismatchError("All generators of an ideal must share one ring")

        self.generators: Tuple[Poly, ...] = tuple(gens)
        self.ring: Ring = ring

    def __len__(self) -> int:
        return len(self.generators)

    def __repr__(self) -> str:
        return f"Ideal({', '.join(str(g) for g in self.generators)})"


class GroebnerBasis:
    """A reduced Groebner basis: monic elements sorted by leading monomial."""

    def __init__(self, elements: Iterable[Poly], order: MonomialOrder) -> None:
        self.order = order
        self.elements: Tuple[Poly, ...] = tuple(
            sorted(elements, key=lambda g: order.key(g.leading_monomial(order)))
        )
        self.ring: Ring = self.elements[0].ring
        self.leading_monomials: Tuple[Monomial, ...] = tuple(
            [g.leading_monomial(order) for g in self.elements]
        )

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Poly]:
        return iter(self.elements)

    @property
    def is_unit(self) -> bool:
        """Return ``True`` if the basis generates the whole ring."""
        return any(sum(lm) == 0 for lm in self.leading_monomials)

    def reduce(self, p: Poly) -> Poly:
        """Return the normal form of `p` with respect to the basis."""
        if p.ring != self.ring:
            raise ContextMismatchError(
                f"Cannot reduce a polynomial of {p.ring} by a basis of {self.ring}"
            )

        return _reduce(p, list(self.elements), list(self.leading_monomials), self.order)

    def contains(self, p: Poly) -> bool:
        """Return ``True`` if `p` belongs to the ideal."""
        return self.reduce(p).is_zero

    def satisfies_buchberger_criterion(self) -> bool:
        """Return ``True`` if every S-polynomial reduces to zero."""
        for ii in range(len(self.elements)):
            for jj in range(ii + 1, len(self.elements)):
                spoly = _spoly(
                    self.elements[ii],
                    self.elements[jj],
                    self.leading_monomials[ii],
                    self.leading_monomials[jj],
                )
                if not self.reduce(spoly).is_zero:
                    return False

        return True

    def is_reduced(self) -> bool:
        """Return ``True`` if the basis is monic and no term of an element is
        divisible by the leading monomial of another element."""
        for g, lm in zip(self.elements, self.leading_monomials):
            if g.coefficient(lm) != 1:
                return False

            for other in self.leading_monomials:
                if other == lm:
                    continue

                if any(monomial_divides(other, mono) for mono in g.monomials()):
                    return False

        return True

    def __repr__(self) -> str:
        return f"GroebnerBasis({', '.join(str(g) for g in self.elements)})"


def _spoly(f: Poly, g: Poly, lmf: Monomial, lmg: Monomial) -> Poly:
    """Return the S-polynomial of the monic polynomials `f` and `g`."""
    lcm = monomial_lcm(lmf, lmg)
    mf = monomial_div(lcm, lmf)
    mg = monomial_div(lcm, lmg)
    assert mf is not None and mg is not None
    return f.mul_term(mf) - g.mul_term(mg)


def _reduce(
    p: Poly, basis: List[Poly], lms: List[Monomial], order: MonomialOrder
) -> Poly:
    """Return the remainder of the full division of `p` by the monic `basis`."""
    todo: Dict[Monomial, Fraction] = dict(p.terms)
    remainder: Dict[Monomial, Fraction] = {}
    while todo:
        mono = max(todo, key=order.key)
        coeff = todo[mono]
        for g, lm in zip(basis, lms):
            quotient = monomial_div(mono, lm)
            if quotient is None:
                continue

            for gmono, gcoeff in g.items():
                target = monomial_mul(gmono, quotient)
                value = todo.get(target, 0) - coeff * gcoeff
                if value:
                    todo[target] = value
                else:
                    todo.pop(target, None)
            break
        else:
            remainder[mono] = coeff
            del todo[mono]

    return Poly._raw(p.ring, remainder)


def _update(
    basis: List[Poly],
    lms: List[Monomial],
    pairs: Set[Tuple[int, int]],
    f: Poly,
    order: MonomialOrder,
) -> Set[Tuple[int, int]]:
    """Add the monic `f` to `basis` and return the pairs left after applying
    the Gebauer-Moeller criteria."""
    lmf = f.leading_monomial(order)
    new = len(basis)

    # Drop old pairs whose lcm is a strict multiple through lmf
    kept = set()
    for ii, jj in pairs:
        lcm_ij = monomial_lcm(lms[ii], lms[jj])
        if (
            not monomial_divides(lmf, lcm_ij)
            or lcm_ij == monomial_lcm(lms[ii], lmf)
            or lcm_ij == monomial_lcm(lms[jj], lmf)
        ):
            kept.add((ii, jj))

    groups: Dict[Monomial, List[int]] = {}
    for ii in range(new):
        groups.setdefault(monomial_lcm(lms[ii], lmf), []).append(ii)

    minimal: List[Monomial] = []
    for lcm in sorted(groups, key=order.key):
        if all(not monomial_divides(other, lcm) for other in minimal):
            minimal.append(lcm)

    for lcm in minimal:
        # Coprime leading monomials, the S-polynomial reduces to zero
        if any(lcm == monomial_mul(lms[ii], lmf) for ii in groups[lcm]):
            continue

        kept.add((min(groups[lcm]), new))

    basis.append(f)
    lms.append(lmf)
    return kept


def _minimalize(basis: List[Poly], order: MonomialOrder) -> List[Poly]:
    minimal: List[Poly] = []
    for f in sorted(basis, key=lambda g: order.key(g.leading_monomial(order))):
        lmf = f.leading_monomial(order)
        if all(not monomial_divides(g.leading_monomial(order), lmf) for g in minimal):
            minimal.append(f)

    return minimal


def _interreduce(basis: List[Poly], order: MonomialOrder) -> List[Poly]:
    lms = [g.leading_monomial(order) for g in basis]
    reduced = []
    for ii, g in enumerate(basis):
        others = basis[:ii] + basis[ii + 1 :]
        other_lms = lms[:ii] + lms[ii + 1 :]
        reduced.append(_reduce(g, others, other_lms, order).monic(order))

    return reduced


def buchberger(
    ideal: Ideal,
    order: Optional[MonomialOrder] = None,
    *,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> GroebnerBasis:
    """Return the reduced Groebner basis of `ideal`.

    Pairs are selected with the normal strategy (smallest lcm first, ties by
    pair index) and pruned with the Gebauer-Moeller criteria, so the output
    is deterministic for a fixed input and order.

    Parameters
    ----------
    ideal : bprime.groebner.Ideal
        The ideal.
    order : bprime.polyring.MonomialOrder, optional
        The monomial order, defaults to graded reverse lexicographic.
    degree_bound : int, optional
        The largest total degree allowed for the lcm of a processed pair,
        default ``60``.
    pair_budget : int, optional
        The largest number of S-pairs to process, default ``10**6``.

    Returns
    -------
    bprime.groebner.GroebnerBasis
        The reduced, monic Groebner basis.

    Raises
    ------
    ResourceLimitError
        If `degree_bound` or `pair_budget` is exceeded.
    """
    order = order or MonomialOrder.default(ideal.ring.ngens)
    if len(order.weights) != ideal.ring.ngens:
        raise ContextMismatchError(
            f"The monomial order has {len(order.weights)} weights but the ring "
            f"{ideal.ring} has {ideal.ring.ngens} variables"
        )

    basis: List[Poly] = []
    lms: List[Monomial] = []
    pairs: Set[Tuple[int, int]] = set()
    generators = sorted(
        ideal.generators, key=lambda g: order.key(g.leading_monomial(order))
    )
    for f in generators:
        pairs = _update(basis, lms, pairs, f.monic(order), order)

    def pair_key(pair: Tuple[int, int]) -> Tuple[Tuple[int, ...], Tuple[int, int]]:
        return order.key(monomial_lcm(lms[pair[0]], lms[pair[1]])), pair

    processed = 0
    while pairs:
        ii, jj = min(pairs, key=pair_key)
        pairs.remove((ii, jj))
        processed += 1
        if processed > pair_budget:
            raise ResourceLimitError(
                f"The Groebner computation exceeded the budget of {pair_budget} "
                "S-pairs"
            )

        lcm = monomial_lcm(lms[ii], lms[jj])
        if sum(lcm) > degree_bound:
            raise ResourceLimitError(
                f"The Groebner computation exceeded the degree bound of "
                f"{degree_bound}"
            )

        spoly = _spoly(basis[ii], basis[jj], lms[ii], lms[jj])
        remainder = _reduce(spoly, basis, lms, order)
        if not remainder.is_zero:
            pairs = _update(basis, lms, pairs, remainder.monic(order), order)

    reduced = _interreduce(_minimalize(basis, order), order)
    LOGGER.debug(
        f"Groebner basis with {len(reduced)} element(s) after {processed} S-pair(s)"
    )
    return GroebnerBasis(reduced, order)


def normal_form(p: Poly, gb: GroebnerBasis) -> Poly:
    """Return the remainder of `p` on division by `gb`."""
    return gb.reduce(p)


@dataclass(frozen=True)
class QuotientBasis:
    """The standard monomials of a zero-dimensional ideal with their weights.

    Attributes
    ----------
    monomials : tuple[tuple[int, ...], ...]
        The standard monomials sorted by (weight, monomial order).
    weights : tuple[fractions.Fraction, ...]
        The weighted degree of each monomial.
    """

    monomials: Tuple[Monomial, ...]
    weights: Tuple[Fraction, ...]

    @property
    def dimension(self) -> int:
        return len(self.monomials)

    @property
    def weight_set(self) -> Tuple[Fraction, ...]:
        """Return the sorted distinct weights."""
        return tuple(sorted(set(self.weights)))

    @property
    def multiplicities(self) -> Dict[Fraction, int]:
        """Return the number of basis monomials of each weight."""
        return dict(sorted(Counter(self.weights).items()))


def quotient_basis(gb: GroebnerBasis, weights: WeightSystem) -> QuotientBasis:
    """Return the standard monomial basis of the quotient by `gb`.

    Parameters
    ----------
    gb : bprime.groebner.GroebnerBasis
        A reduced Groebner basis whose elements are weighted-homogeneous for
        `weights`.
    weights : bprime.polyring.WeightSystem
        One weight per variable of the ring.

    Returns
    -------
    bprime.groebner.QuotientBasis
        Every standard monomial with its weighted degree, empty for the unit
        ideal.

    Raises
    ------
    InfiniteDimensionalError
        If some variable has no pure power among the leading monomials.
    NotHomogeneousError
        If an element of `gb` isn't weighted-homogeneous.
    """
    if len(weights) != gb.ring.ngens:
        raise ContextMismatchError(
            f"Got {len(weights)} weights for the {gb.ring.ngens} variables of {gb.ring}"
        )

    for g in gb.elements:
        if not is_weighted_homogeneous(g, weights):
            raise NotHomogeneousError(
                f"The basis element '{g}' is not weighted-homogeneous for the "
                f"weights {weights}"
            )

    if gb.is_unit:
        return QuotientBasis((), ())

    bounds: List[Union[int, None]] = [None] * gb.ring.ngens
    for lm in gb.leading_monomials:
        support = [ii for ii, a in enumerate(lm) if a]
        if len(support) == 1:
            ii = support[0]
            current = bounds[ii]
            bounds[ii] = lm[ii] if current is None else min(current, lm[ii])

    unbounded = [gb.ring.names[ii] for ii, b in enumerate(bounds) if b is None]
    if unbounded:
        raise InfiniteDimensionalError(
            f"The quotient is infinite-dimensional, no leading monomial is a "
            f"pure power of {', '.join(unbounded)}"
        )

    standard = [
        tuple([int(a) for a in mono])
        for mono in np.ndindex(*[int(b) for b in bounds])  # type: ignore[arg-type]
        if not any(monomial_divides(lm, mono) for lm in gb.leading_monomials)
    ]
    standard.sort(key=lambda m: (weights.degree_of(m), gb.order.key(m)))
    LOGGER.debug(f"Quotient basis of dimension {len(standard)}")
    return QuotientBasis(
        tuple(standard), tuple([weights.degree_of(m) for m in standard])
    )
