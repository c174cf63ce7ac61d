"""Morphism-level constructions: Jacobian minors, Jacobian ideals and weights."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
import logging
from typing import Dict, List, Sequence, Tuple

from .exceptions import (
    BadArityError,
    ContextMismatchError,
    DegenerateJacobianError,
    NotHomogeneousError,
    ZeroPolynomialError,
)
from .groebner import Ideal
from .polyring import (
    Poly,
    Ring,
    WeightSystem,
    solve_positive,
    weighted_degree,
)


LOGGER = logging.getLogger(__name__)

Columns = Tuple[int, ...]


class Morphism:
    """A germ ``(h_1, ..., h_p, f): (C^n, 0) -> (C^{p+1}, 0)``.

    Parameters
    ----------
    h : list[bprime.polyring.Poly]
        The ``p >= 0`` components ``h_1, ..., h_p``.
    f : bprime.polyring.Poly
        The last component.

    Raises
    ------
    BadArityError
        If ``p + 1 > n``.
    ValueError
        If a component is zero or doesn't vanish at the origin.
    """

    def __init__(self, h: Sequence[Poly], f: Poly) -> None:
        self.h: Tuple[Poly, ...] = tuple(h)
        self.f = f
        self.ring: Ring = f.ring
        if self.ring.has_s:
            raise ContextMismatchError("Morphism components must not involve 's'")

        for name, component in self.named_components():
            if component.ring != self.ring:
                raise ContextMismatchError(
                    f"The component {name} is not in the ring {self.ring}"
                )

            if component.is_zero:
                raise ZeroPolynomialError(f"The component {name} is zero")

            if component.constant_term():
                raise ValueError(
                    f"The component {name} = '{component}' doesn't vanish at "
                    "the origin"
                )

        if self.p + 1 > self.n:
            raise BadArityError(
                f"A morphism with {self.p + 1} components needs at least "
                f"{self.p + 1} variables, got {self.n}"
            )

    @property
    def p(self) -> int:
        return len(self.h)

    @property
    def n(self) -> int:
        return self.ring.ngens

    @property
    def components(self) -> Tuple[Poly, ...]:
        """Return ``(h_1, ..., h_p, f)``."""
        return self.h + (self.f,)

    def named_components(self) -> List[Tuple[str, Poly]]:
        """Return the components labelled ``"h1"``, ..., ``"hp"``, ``"f"``."""
        names = [f"h{ii + 1}" for ii in range(self.p)] + ["f"]
        return list(zip(names, self.components))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented

        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        h = ", ".join(str(c) for c in self.h)
        return f"Morphism(h=({h}), f={self.f})"


@dataclass(frozen=True)
class NormalizedWeights:
    """Weights rescaled so that ``f`` has weighted degree 1.

    Attributes
    ----------
    alpha : bprime.polyring.WeightSystem
        The rescaled weights.
    rho : tuple[fractions.Fraction, ...]
        The weighted degree of each ``h_i``.
    alpha_sum : fractions.Fraction
        The sum of `alpha`.
    rho_sum : fractions.Fraction
        The sum of `rho`.
    """

    alpha: WeightSystem
    rho: Tuple[Fraction, ...]
    alpha_sum: Fraction
    rho_sum: Fraction


def _determinant(matrix: List[List[Poly]]) -> Poly:
    """Return the determinant by cofactor expansion along the first row."""
    size = len(matrix)
    if size == 1:
        return matrix[0][0]

    result = matrix[0][0].ring.zero()
    for col in range(size):
        entry = matrix[0][col]
        if entry.is_zero:
            continue

        minor = [row[:col] + row[col + 1 :] for row in matrix[1:]]
        term = entry * _determinant(minor)
        result = result - term if col % 2 else result + term

    return result


def jacobian_minors(m: Morphism, include_f: bool = False) -> Dict[Columns, Poly]:
    """Return the maximal minors of the Jacobian matrix of `m`.

    Parameters
    ----------
    m : bprime.singularity.Morphism
        The morphism.
    include_f : bool, optional
        If ``True`` use the rows ``(h_1, ..., h_p, f)``, otherwise (default)
        use ``(h_1, ..., h_p)`` only.

    Returns
    -------
    dict[tuple[int, ...], bprime.polyring.Poly]
        The determinant of each choice of increasing (0-based) columns, rows
        in morphism order. Zero minors are included.

    Raises
    ------
    BadArityError
        If there are more rows than variables.
    """
    rows = list(m.components if include_f else m.h)
    if len(rows) > m.n:
        raise BadArityError(
            f"Cannot take {len(rows)} x {len(rows)} minors with {m.n} variables"
        )

    if not rows:
        return {(): m.ring.one()}

    jacobian = [[r.diff(ii) for ii in range(m.n)] for r in rows]
    minors = {}
    for columns in combinations(range(m.n), len(rows)):
        minors[columns] = _determinant([[row[c] for c in columns] for row in jacobian])

    return minors


def jacobian_ideal(m: Morphism, include_f: bool = False) -> Ideal:
    """Return the ideal of the nonzero maximal minors, made monic.

    Raises
    ------
    DegenerateJacobianError
        If every minor vanishes identically.
    """
    minors = [
        g.monic() for g in jacobian_minors(m, include_f).values() if not g.is_zero
    ]
    if not minors:
        rows = "(h, f)" if include_f else "h"
        raise DegenerateJacobianError(
            f"Every maximal minor of the Jacobian matrix of {rows} vanishes"
        )

    return Ideal(minors)


def critical_ideal(m: Morphism, include_f: bool = True) -> Ideal:
    """Return ``(h_1, ..., h_p, f) + J_{h,f}`` or, without `include_f`,
    ``(h_1, ..., h_p) + J_h``."""
    rows = list(m.components if include_f else m.h)
    return Ideal(rows + list(jacobian_ideal(m, include_f).generators))


def normalize_weights(m: Morphism, weights: WeightSystem) -> NormalizedWeights:
    """Return `weights` rescaled so that ``f`` has weighted degree 1.

    Raises
    ------
    NotHomogeneousError
        If a component of `m` isn't weighted-homogeneous, the error's
        ``component`` attribute names it.
    """
    degrees = {}
    for name, component in m.named_components():
        try:
            degrees[name] = weighted_degree(component, weights)
        except NotHomogeneousError as exc:
            raise NotHomogeneousError(
                f"The component {name} = '{component}' is not weighted-homogeneous "
                f"for the weights {weights}",
                component=name,
            ) from exc

    scale = 1 / degrees["f"]
    alpha = weights.scaled(scale)
    rho = tuple([degrees[f"h{ii + 1}"] * scale for ii in range(m.p)])
    return NormalizedWeights(alpha, rho, alpha.total, sum(rho, Fraction(0)))


def infer_morphism_weights(m: Morphism) -> WeightSystem:
    """Return weights with ``deg f = 1`` making every component homogeneous.

    The degrees of the ``h_i`` are unknowns alongside the weights; free
    parameters are set to 1.

    Raises
    ------
    NoSolutionError
        If no strictly positive solution exists.
    """
    nr_unknowns = m.n + m.p
    rows: List[List[int]] = []
    rhs: List[int] = []
    for idx, h in enumerate(m.h):
        for mono in h.monomials():
            row = list(mono) + [0] * m.p
            row[m.n + idx] = -1
            rows.append(row)
            rhs.append(0)

    for mono in m.f.monomials():
        rows.append(list(mono) + [0] * m.p)
        rhs.append(1)

    solution = solve_positive(rows, rhs, nr_unknowns)
    weights = WeightSystem(solution[: m.n])
    LOGGER.debug(f"Inferred the weights {weights} for {m}")
    return weights
