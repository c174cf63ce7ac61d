"""Decide whether the intersection cohomology module equals local cohomology.

For a quasi-homogeneous isolated hypersurface singularity ``f`` the two
modules coincide exactly when the reduced Bernstein polynomial of ``f`` has
no integral root. For a complete intersection ``(h, f)`` they coincide when
``b'_f(h, s)`` has no strictly negative integral root, provided ``delta_h``
generates the local cohomology of ``h``. That hypothesis is checked through
a sufficient chain of conditions on the partial tuples ``(h_1, ..., h_i)``.
"""

from dataclasses import dataclass, field
from enum import Enum
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .bernstein import (
    FactoredBPoly,
    RootMode,
    bernstein_polynomial,
    bprime_wh,
    integral_roots,
    reduced_bernstein,
)
from .exceptions import (
    BprimeError,
    DegenerateJacobianError,
    InfiniteDimensionalError,
    NotHomogeneousError,
    ResourceLimitError,
)
from .polyring import OrderKind, Poly, WeightSystem
from .singularity import Morphism, normalize_weights
from .utils import factored_to_json


LOGGER = logging.getLogger(__name__)

# Errors meaning the input doesn't meet the hypotheses of the closed formula
PIPELINE_ERRORS = (
    DegenerateJacobianError,
    InfiniteDimensionalError,
    NotHomogeneousError,
    ResourceLimitError,
)


class Conclusion(Enum):
    L_EQUALS_R = "L_equals_R"
    L_NOT_EQUALS_R = "L_not_equals_R"
    INCONCLUSIVE = "Inconclusive"


class HypothesisStatus(Enum):
    ESTABLISHED = "Established"
    ASSUMED_BY_USER = "AssumedByUser"
    FAILED = "Failed"


class ChainStatus(Enum):
    ESTABLISHED = "Established"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Evidence:
    """A computed polynomial with its integral roots.

    Attributes
    ----------
    name : str
        Identifies the polynomial, such as ``"btilde(f)"`` or
        ``"bprime(f|h)"``.
    bpoly : bprime.bernstein.FactoredBPoly
        The polynomial.
    integral_roots : tuple[int, ...]
        Every distinct integral root, from 0 downward.
    """

    name: str
    bpoly: FactoredBPoly
    integral_roots: Tuple[int, ...]

    @classmethod
    def of(cls, name: str, bpoly: FactoredBPoly) -> "Evidence":
        return cls(name, bpoly, tuple(integral_roots(bpoly)))

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"name": self.name}
        out.update(factored_to_json(self.bpoly))
        out["integral_roots"] = list(self.integral_roots)
        return out


@dataclass(frozen=True)
class Verdict:
    """The outcome of a decision.

    Attributes
    ----------
    reason : str, optional
        Why the verdict is inconclusive.
    notes : tuple[str, ...]
        The message of every step that failed, in order.
    error : bprime.exceptions.BprimeError, optional
        The error raised when the input doesn't meet the hypotheses of the
        closed formula, not part of the JSON form.

    Raises
    ------
    ValueError
        If the conclusion isn't ``INCONCLUSIVE`` but the hypothesis failed.
    """

    conclusion: Conclusion
    hypothesis_status: HypothesisStatus
    evidence: Tuple[Evidence, ...] = ()
    reason: Optional[str] = None
    notes: Tuple[str, ...] = ()
    error: Optional[BprimeError] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if (
            self.conclusion is not Conclusion.INCONCLUSIVE
            and self.hypothesis_status is HypothesisStatus.FAILED
        ):
            raise ValueError("A verdict with a failed hypothesis must be inconclusive")

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "conclusion": self.conclusion.value,
            "hypothesis": self.hypothesis_status.value,
            "evidence": [e.to_json() for e in self.evidence],
        }
        if self.reason:
            out["reason"] = self.reason

        if self.notes:
            out["notes"] = list(self.notes)

        return out


@dataclass(frozen=True)
class ChainResult:
    """The outcome of the generation check, with one evidence per stage."""

    status: ChainStatus
    evidence: Tuple[Evidence, ...] = field(default_factory=tuple)
    reason: Optional[str] = None


def decide_hypersurface(
    f: Poly, weights: WeightSystem, order_kind: OrderKind = OrderKind.WGREVLEX
) -> Verdict:
    """Return whether ``L_f = R_f`` for a quasi-homogeneous hypersurface.

    Parameters
    ----------
    f : bprime.polyring.Poly
        A quasi-homogeneous polynomial with an isolated singularity at 0.
    weights : bprime.polyring.WeightSystem
        Weights making `f` homogeneous.
    order_kind : bprime.polyring.OrderKind, optional
        The monomial order used for the Groebner bases.

    Returns
    -------
    bprime.decide.Verdict
        ``L_EQUALS_R`` if the reduced Bernstein polynomial of `f` has no
        integral root, ``L_NOT_EQUALS_R`` if it has one and ``INCONCLUSIVE``
        with a failed hypothesis if `f` isn't a quasi-homogeneous isolated
        singularity.
    """
    try:
        btilde = reduced_bernstein(f, weights, order_kind)
    except PIPELINE_ERRORS as exc:
        LOGGER.debug(f"Cannot decide for f = {f}: {exc}")
        return Verdict(
            Conclusion.INCONCLUSIVE,
            HypothesisStatus.FAILED,
            reason=str(exc),
            notes=(str(exc),),
            error=exc,
        )

    evidence = Evidence.of("btilde(f)", btilde)
    conclusion = (
        Conclusion.L_NOT_EQUALS_R if evidence.integral_roots else Conclusion.L_EQUALS_R
    )
    return Verdict(conclusion, HypothesisStatus.ESTABLISHED, (evidence,))


def _stage_name(idx: int) -> str:
    h = ",".join(f"h{ii + 1}" for ii in range(idx))
    return f"bprime(h{idx + 1}|{h})"


def check_generation_chain(
    h: Sequence[Poly],
    weights: WeightSystem,
    order_kind: OrderKind = OrderKind.WGREVLEX,
) -> ChainResult:
    """Return ``ESTABLISHED`` if ``delta_h`` provably generates ``R_h``.

    The first stage requires ``-1`` to be the only integral root of the
    Bernstein polynomial of ``h_1``. Stage ``i + 1`` requires that
    ``b'_{h_{i+1}}((h_1, ..., h_i), s)`` has no integral root smaller than
    ``-1``. The condition is sufficient only, so a stage that fails gives
    ``INCONCLUSIVE``.

    Parameters
    ----------
    h : list[bprime.polyring.Poly]
        The tuple ``(h_1, ..., h_p)``.
    weights : bprime.polyring.WeightSystem
        Weights making every ``h_i`` homogeneous.
    order_kind : bprime.polyring.OrderKind, optional
        The monomial order used for the Groebner bases.
    """
    evidence: List[Evidence] = []
    if not h:
        return ChainResult(ChainStatus.ESTABLISHED)

    try:
        b = bernstein_polynomial(h[0], weights, order_kind)
        stage = Evidence.of("b(h1)", b)
        evidence.append(stage)
        LOGGER.debug(f"Generation chain stage 1: b(h1) = {b}")
        if list(stage.integral_roots) != [-1]:
            return ChainResult(
                ChainStatus.INCONCLUSIVE,
                tuple(evidence),
                f"b(h1) = {b} has an integral root other than -1",
            )

        for idx in range(1, len(h)):
            m = Morphism(h[:idx], h[idx])
            bprime = bprime_wh(m, normalize_weights(m, weights), order_kind)
            stage = Evidence.of(_stage_name(idx), bprime)
            evidence.append(stage)
            LOGGER.debug(f"Generation chain stage {idx + 1}: {stage.name} = {bprime}")
            if any(r < -1 for r in stage.integral_roots):
                return ChainResult(
                    ChainStatus.INCONCLUSIVE,
                    tuple(evidence),
                    f"{stage.name} = {bprime} has an integral root smaller than -1",
                )
    except PIPELINE_ERRORS as exc:
        return ChainResult(ChainStatus.INCONCLUSIVE, tuple(evidence), str(exc))

    return ChainResult(ChainStatus.ESTABLISHED, tuple(evidence))


def decide_ci(
    m: Morphism,
    weights: WeightSystem,
    assume_generation: bool = False,
    order_kind: OrderKind = OrderKind.WGREVLEX,
) -> Verdict:
    """Return whether ``L_{h,f} = R_{h,f}`` for a complete intersection.

    Parameters
    ----------
    m : bprime.singularity.Morphism
        The morphism ``(h, f)``, with ``p = 0`` this is
        :func:`decide_hypersurface`.
    weights : bprime.polyring.WeightSystem
        Weights making every component homogeneous.
    assume_generation : bool, optional
        If ``True`` and the generation of ``R_h`` by ``delta_h`` can't be
        established, take it as given instead of failing the hypothesis.
    order_kind : bprime.polyring.OrderKind, optional
        The monomial order used for the Groebner bases.

    Returns
    -------
    bprime.decide.Verdict
        The conclusion is ``INCONCLUSIVE`` whenever the hypothesis failed or
        the closed formula doesn't apply. Otherwise ``L_EQUALS_R`` if
        ``b'_f(h, s)`` has no strictly negative integral root.
    """
    if m.p == 0:
        return decide_hypersurface(m.f, weights, order_kind)

    chain = check_generation_chain(m.h, weights, order_kind)
    if chain.status is ChainStatus.ESTABLISHED:
        status = HypothesisStatus.ESTABLISHED
    elif assume_generation:
        status = HypothesisStatus.ASSUMED_BY_USER
    else:
        status = HypothesisStatus.FAILED

    evidence = list(chain.evidence)
    try:
        bprime = bprime_wh(m, normalize_weights(m, weights), order_kind)
    except PIPELINE_ERRORS as exc:
        LOGGER.debug(f"Cannot compute b' for {m}: {exc}")
        notes = [str(exc)]
        if status is HypothesisStatus.FAILED:
            notes.insert(0, f"delta_h is not known to generate R_h: {chain.reason}")

        return Verdict(
            Conclusion.INCONCLUSIVE,
            status,
            tuple(evidence),
            str(exc),
            tuple(notes),
            exc,
        )

    stage = Evidence.of("bprime(f|h)", bprime)
    evidence.append(stage)
    if status is HypothesisStatus.FAILED:
        reason = f"delta_h is not known to generate R_h: {chain.reason}"
        return Verdict(
            Conclusion.INCONCLUSIVE, status, tuple(evidence), reason, (reason,)
        )

    negative = integral_roots(bprime, RootMode.STRICTLY_NEGATIVE)
    conclusion = Conclusion.L_NOT_EQUALS_R if negative else Conclusion.L_EQUALS_R
    return Verdict(conclusion, status, tuple(evidence))
