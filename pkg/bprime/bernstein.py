"""Factored Bernstein-type polynomials of weighted-homogeneous ICIS germs.

For ``h = (h_1, ..., h_p)`` and ``f`` weighted-homogeneous of degrees
``rho_1, ..., rho_p`` and 1 for the weights ``alpha``, and defining isolated
complete intersection singularities, the polynomial ``b'_f(h, s)`` is

    prod_{q in Pi} (s + |alpha| - rho_h + q)

where ``Pi`` is the set of weights of a weighted-homogeneous monomial basis
of ``O / ((f, h_1, ..., h_p) + J_{h,f})``. With ``p = 0`` this is the reduced
Bernstein polynomial of a quasi-homogeneous isolated hypersurface singularity.
"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exceptions import InfiniteDimensionalError, NotIsolatedError
from .groebner import GroebnerBasis, QuotientBasis, buchberger, quotient_basis
from .polyring import (
    Coefficient,
    MonomialOrder,
    OrderKind,
    Poly,
    Ring,
    WeightSystem,
)
from .singularity import Morphism, NormalizedWeights, critical_ideal, normalize_weights


LOGGER = logging.getLogger(__name__)


class Provenance(Enum):
    """Where the offsets of a factored polynomial come from."""

    CLOSED_FORMULA = "closed-formula"
    CLOSED_FORMULA_WITH_S_PLUS_1 = "closed-formula-with-s-plus-1"
    EXTERNAL_REFERENCE = "external-reference"


class RootMode(Enum):
    ALL = "all"
    STRICTLY_NEGATIVE = "strictly_negative"


@dataclass(frozen=True)
class FactoredBPoly:
    """The monic polynomial ``prod_j (s + a_j)`` kept as its offsets ``a_j``.

    Attributes
    ----------
    offsets : tuple[fractions.Fraction, ...]
        The multiset of offsets, stored sorted.
    provenance : bprime.bernstein.Provenance
        How the offsets were obtained.
    multiplicities : dict[fractions.Fraction, int]
        Side channel: for closed formula values, the number of quotient basis
        monomials behind each offset. Not part of the polynomial.
    """

    offsets: Tuple[Fraction, ...]
    provenance: Provenance = Provenance.EXTERNAL_REFERENCE
    multiplicities: Dict[Fraction, int] = field(
        default_factory=dict, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "offsets", tuple(sorted(Fraction(a) for a in self.offsets))
        )

    @classmethod
    def from_factors(
        cls,
        factors: Sequence[Tuple[Coefficient, int]],
        provenance: Provenance = Provenance.EXTERNAL_REFERENCE,
    ) -> "FactoredBPoly":
        """Return the polynomial from ``(offset, multiplicity)`` pairs."""
        offsets: List[Fraction] = []
        for offset, mult in factors:
            if mult < 1:
                raise ValueError(f"Invalid multiplicity {mult} for offset {offset}")

            offsets.extend([Fraction(offset)] * mult)

        return cls(tuple(offsets), provenance)

    @property
    def degree(self) -> int:
        return len(self.offsets)

    def factors(self) -> List[Tuple[Fraction, int]]:
        """Return the sorted ``(offset, multiplicity)`` pairs."""
        return sorted(Counter(self.offsets).items())

    def roots(self) -> Tuple[Fraction, ...]:
        """Return the roots ``-a_j`` with multiplicity."""
        return tuple([-a for a in self.offsets])

    def __mul__(self, other: "FactoredBPoly") -> "FactoredBPoly":
        if not isinstance(other, FactoredBPoly):
            return NotImplemented

        provenance = (
            self.provenance
            if self.provenance == other.provenance
            else Provenance.EXTERNAL_REFERENCE
        )
        return FactoredBPoly(self.offsets + other.offsets, provenance)

    def expand(self, ring: Optional[Ring] = None) -> Poly:
        """Return the expanded polynomial in the variable ``s`` of `ring`."""
        ring = ring or Ring(("s",))
        s = ring.s
        result = ring.one()
        for offset in self.offsets:
            result = result * (s + offset)

        return result

    def __str__(self) -> str:
        if not self.offsets:
            return "1"

        out = []
        for offset, mult in self.factors():
            if offset == 0:
                factor = "s"
            elif offset < 0:
                factor = f"(s - {-offset})"
            else:
                factor = f"(s + {offset})"

            out.append(factor if mult == 1 else f"{factor}^{mult}")

        return "".join(out)


def bprime_wh(
    m: Morphism,
    nw: NormalizedWeights,
    order_kind: OrderKind = OrderKind.WGREVLEX,
) -> FactoredBPoly:
    """Return ``b'_f(h, s)`` for a weighted-homogeneous ICIS morphism.

    Parameters
    ----------
    m : bprime.singularity.Morphism
        The morphism ``(h_1, ..., h_p, f)``.
    nw : bprime.singularity.NormalizedWeights
        The weights of `m` normalised so that ``f`` has degree 1, as returned
        by :func:`~bprime.singularity.normalize_weights`.
    order_kind : bprime.polyring.OrderKind, optional
        The monomial order used for the Groebner bases. The result doesn't
        depend on it.

    Returns
    -------
    bprime.bernstein.FactoredBPoly
        The offsets ``|alpha| - rho_h + q`` for ``q`` in the set of weights of
        the quotient basis.

    Raises
    ------
    NotIsolatedError
        If ``h`` (when ``p >= 1``) or ``(h, f)`` doesn't define an isolated
        complete intersection singularity.
    NotHomogeneousError
        If a component isn't weighted-homogeneous for ``nw.alpha``.
    DegenerateJacobianError
        If all maximal minors of a Jacobian matrix vanish.
    """
    # Validates homogeneity and confirms that nw belongs to m
    if normalize_weights(m, nw.alpha) != nw:
        raise ValueError("The normalized weights don't match the morphism")

    order = MonomialOrder.from_weights(nw.alpha, order_kind)
    if m.p:
        _isolated_basis(m, nw.alpha, order, include_f=False)

    basis = _isolated_basis(m, nw.alpha, order, include_f=True)
    shift = nw.alpha_sum - nw.rho_sum
    offsets = tuple([shift + q for q in basis.weight_set])
    result = FactoredBPoly(
        offsets,
        Provenance.CLOSED_FORMULA,
        {shift + q: mult for q, mult in basis.multiplicities.items()},
    )
    LOGGER.debug(
        f"b' for {m}: quotient dimension {basis.dimension}, "
        f"{len(offsets)} distinct weight(s), b' = {result}"
    )

    if m.p == 0:
        outside = [a for a in offsets if not 0 < a < m.n]
        if outside:
            LOGGER.warning(
                f"Offsets {', '.join(str(a) for a in outside)} of the reduced "
                f"Bernstein polynomial lie outside (0, {m.n})"
            )
    elif any(a <= 0 for a in offsets):
        LOGGER.warning(f"b' = {result} has a non-positive offset")

    return result


def _isolated_basis(
    m: Morphism, alpha: WeightSystem, order: MonomialOrder, include_f: bool
) -> QuotientBasis:
    ideal = critical_ideal(m, include_f=include_f)
    gb: GroebnerBasis = buchberger(ideal, order)
    try:
        return quotient_basis(gb, alpha)
    except InfiniteDimensionalError as exc:
        target = "(h, f)" if include_f else "h"
        raise NotIsolatedError(
            f"The morphism {target} doesn't define an isolated complete "
            f"intersection singularity: {exc}"
        ) from exc


def reduced_bernstein(
    f: Poly, weights: WeightSystem, order_kind: OrderKind = OrderKind.WGREVLEX
) -> FactoredBPoly:
    """Return the reduced Bernstein polynomial of the quasi-homogeneous `f`."""
    m = Morphism((), f)
    return bprime_wh(m, normalize_weights(m, weights), order_kind)


def full_from_reduced(b: FactoredBPoly) -> FactoredBPoly:
    """Return ``(s + 1) * b``."""
    return FactoredBPoly(
        b.offsets + (Fraction(1),), Provenance.CLOSED_FORMULA_WITH_S_PLUS_1
    )


def bernstein_polynomial(
    f: Poly, weights: WeightSystem, order_kind: OrderKind = OrderKind.WGREVLEX
) -> FactoredBPoly:
    """Return the Bernstein polynomial of the quasi-homogeneous `f`."""
    return full_from_reduced(reduced_bernstein(f, weights, order_kind))


def integral_roots(b: FactoredBPoly, mode: RootMode = RootMode.ALL) -> List[int]:
    """Return the distinct integral roots of `b`, from 0 downward.

    Parameters
    ----------
    b : bprime.bernstein.FactoredBPoly
        The polynomial.
    mode : bprime.bernstein.RootMode, optional
        ``RootMode.ALL`` (default) or ``RootMode.STRICTLY_NEGATIVE``.
    """
    roots = {int(r) for r in b.roots() if r.denominator == 1}
    if mode is RootMode.STRICTLY_NEGATIVE:
        roots = {r for r in roots if r < 0}

    return sorted(roots, reverse=True)


def divides(a: FactoredBPoly, b: FactoredBPoly) -> bool:
    """Return ``True`` if `a` divides `b`, counting multiplicities."""
    needed = Counter(a.offsets)
    available = Counter(b.offsets)
    return all(available[offset] >= mult for offset, mult in needed.items())


# Values known from the literature that the closed formula can't produce,
#   kept for comparison with `divides()`
REFERENCE_POLYNOMIALS: Dict[str, Dict[str, Union[str, FactoredBPoly]]] = {
    "b(x1^2 + x3*x2^2)": {
        "f": "x1^2 + x2^2*x3",
        "b": FactoredBPoly.from_factors([(1, 2), (Fraction(3, 2), 1)]),
    },
    "b(x1*x2*(x1 + x2)*(x1 + x2*x3))": {
        "f": "x1^3*x2 + x1^2*x2^2 + x1^2*x2^2*x3 + x1*x2^3*x3",
        "b": FactoredBPoly.from_factors(
            [
                (Fraction(1, 2), 1),
                (Fraction(3, 4), 1),
                (1, 3),
                (Fraction(5, 4), 1),
            ]
        ),
    },
    "bprime(x4^2 + x5^2 + x6^2 | x1^2 + x2^2 + x3^2)": {
        "h": "x1^2 + x2^2 + x3^2",
        "f": "x4^2 + x5^2 + x6^2",
        "b": FactoredBPoly.from_factors([(Fraction(3, 2), 1)]),
    },
}
