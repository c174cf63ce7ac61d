"""Text and JSON formats: polynomials, factored polynomials, operators and
certificates."""

from dataclasses import dataclass
from fractions import Fraction
import json
import logging
import os
from pathlib import Path
import re
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    NoReturn,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from .bernstein import FactoredBPoly, Provenance
from .exceptions import ContextMismatchError, ParseError
from .polyring import S_NAME, Monomial, Poly, Ring
from .singularity import Morphism
from .weylcheck import DiffOperator


LOGGER = logging.getLogger(__name__)


PARSING_ERRORS = {
    1: "unexpected character",
    2: "unexpected end of input",
    3: "expected a coefficient or a variable",
    4: "expected an unsigned integer exponent",
    5: "expected a positive integer denominator",
    6: "variable indices start at 1",
    7: "the variable is not in the ring",
    8: "the variable 's' is not allowed here",
    9: "unexpected token",
}

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<int>\d+)|(?P<var>x\d+|s(?![A-Za-z0-9]))"
    r"|(?P<op>[-+*/^])"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _raise(
    code: int, token: Optional[_Token], line: int = 1, column: int = 1
) -> NoReturn:
    if token is not None:
        line, column = token.line, token.column

    raise ParseError(PARSING_ERRORS[code], line, column, token.text if token else "")


def _tokenize(text: str) -> Tuple[List[_Token], Tuple[int, int]]:
    """Return the tokens of `text` and the position just past its end."""
    tokens: List[_Token] = []
    line, column, pos = 1, 1, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            _raise(1, _Token("", text[pos], line, column))

        kind = match.lastgroup or ""
        value = match.group()
        if kind == "nl":
            line, column = line + 1, 1
        else:
            if kind != "ws":
                tokens.append(_Token(kind, value, line, column))
            column += len(value)

        pos = match.end()

    return tokens, (line, column)


Term = Tuple[Fraction, Dict[str, int]]


class _Parser:
    """Recursive descent parser for the polynomial grammar.

    ``poly := sign? term (('+' | '-') term)*``,
    ``term := coeff ('*'? mono)? | mono``,
    ``mono := var ('^' uint)? ('*'? var ('^' uint)?)*``,
    ``coeff := uint ('/' uint)?`` and ``var := 'x' uint | 's'``.
    """

    def __init__(self, text: str) -> None:
        self.tokens, self.end = _tokenize(text)
        self.pos = 0
        # First occurrence of each variable, for error positions
        self.variables: Dict[str, _Token] = {}

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def expect(self, kind: str, code: int) -> _Token:
        token = self.peek()
        if token is None:
            _raise(2, None, *self.end)

        if token.kind != kind:
            _raise(code, token)

        self.pos += 1
        return token

    def parse(self) -> List[Term]:
        if not self.tokens:
            _raise(2, None, *self.end)

        terms = []
        sign = 1
        token = self.peek()
        if token is not None and token.text in ("+", "-"):
            sign = -1 if token.text == "-" else 1
            self.pos += 1

        terms.append(self.term(sign))
        while (token := self.peek()) is not None:
            if token.text not in ("+", "-"):
                _raise(9, token)

            self.pos += 1
            terms.append(self.term(-1 if token.text == "-" else 1))

        return terms

    def term(self, sign: int) -> Term:
        token = self.peek()
        if token is None:
            _raise(2, None, *self.end)

        coeff = Fraction(sign)
        if token.kind == "int":
            coeff *= self.coefficient()
            token = self.peek()
            if token is not None and token.text == "*":
                self.pos += 1
                return coeff, self.monomial()

            if token is not None and token.kind == "var":
                return coeff, self.monomial()

            return coeff, {}

        if token.kind != "var":
            _raise(3, token)

        return coeff, self.monomial()

    def coefficient(self) -> Fraction:
        numerator = int(self.expect("int", 3).text)
        token = self.peek()
        if token is None or token.text != "/":
            return Fraction(numerator)

        self.pos += 1
        denominator = self.expect("int", 5)
        if int(denominator.text) == 0:
            _raise(5, denominator)

        return Fraction(numerator, int(denominator.text))

    def monomial(self) -> Dict[str, int]:
        exponents: Dict[str, int] = {}
        while True:
            var = self.expect("var", 3)
            if var.text != S_NAME and int(var.text[1:]) == 0:
                _raise(6, var)

            exponent = 1
            token = self.peek()
            if token is not None and token.text == "^":
                self.pos += 1
                exponent = int(self.expect("int", 4).text)

            name = var.text if var.text == S_NAME else f"x{int(var.text[1:])}"
            exponents[name] = exponents.get(name, 0) + exponent
            self.variables.setdefault(name, var)

            token = self.peek()
            if token is not None and token.text == "*":
                following = (
                    self.tokens[self.pos + 1]
                    if self.pos + 1 < len(self.tokens)
                    else None
                )
                if following is None:
                    _raise(2, None, *self.end)

                if following.kind != "var":
                    _raise(3, following)

                self.pos += 1
                continue

            if token is not None and token.kind == "var":
                continue

            return exponents


def _parse_terms(text: str) -> Tuple[List[Term], Dict[str, _Token]]:
    parser = _Parser(text)
    return parser.parse(), parser.variables


def _build(terms: List[Term], ring: Ring) -> Poly:
    result: Dict[Monomial, Fraction] = {}
    for coeff, exponents in terms:
        mono = [0] * ring.ngens
        for name, exponent in exponents.items():
            mono[ring.names.index(name)] = exponent

        key = tuple(mono)
        result[key] = result.get(key, Fraction(0)) + coeff

    return Poly(ring, result)


def _check_variables(
    variables: Dict[str, _Token], ring: Ring
) -> None:
    for name, token in variables.items():
        if name == S_NAME and not ring.has_s:
            _raise(8, token)

        if name not in ring.names:
            _raise(7, token)


def parse_polys(
    texts: Sequence[str],
    nvars: Optional[int] = None,
    allow_s: bool = False,
    ring: Optional[Ring] = None,
) -> List[Poly]:
    """Return the polynomials written in `texts` in one common ring.

    Parameters
    ----------
    texts : list[str]
        The polynomial expressions, such as ``"x1^2 + 3/2*x2*x3"``.
    nvars : int, optional
        The number of x-variables, default the highest index used.
    allow_s : bool, optional
        If ``True`` the variable ``s`` may be used and the ring contains it.
    ring : bprime.polyring.Ring, optional
        Parse in this ring instead, overriding `nvars` and `allow_s`.

    Raises
    ------
    ParseError
        If an expression is malformed or uses a variable outside the ring.
    """
    parsed = [_parse_terms(text) for text in texts]
    if ring is None:
        indices = [
            int(name[1:])
            for _, variables in parsed
            for name in variables
            if name != S_NAME
        ]
        highest = max(indices, default=0)
        if nvars is None:
            nvars = highest

        ring = Ring.xring(nvars, with_s=allow_s)

    for _, variables in parsed:
        _check_variables(variables, ring)

    return [_build(terms, ring) for terms, _ in parsed]


def parse_poly(
    text: str,
    nvars: Optional[int] = None,
    allow_s: bool = False,
    ring: Optional[Ring] = None,
) -> Poly:
    """Return the polynomial written in `text`, see :func:`parse_polys`."""
    return parse_polys([text], nvars, allow_s, ring)[0]


def parse_morphism(
    h: Sequence[str], f: str, nvars: Optional[int] = None
) -> Morphism:
    """Return the morphism ``(h_1, ..., h_p, f)`` written as expressions."""
    polys = parse_polys(list(h) + [f], nvars)
    return Morphism(polys[:-1], polys[-1])


def format_weights(weights: Iterable[Fraction]) -> List[str]:
    return [str(w) for w in weights]


def parse_weights(text: str) -> Tuple[Fraction, ...]:
    """Return the weights written as ``"1/2,1/3,1/4"``."""
    try:
        return tuple([Fraction(w.strip()) for w in text.split(",")])
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"Invalid weights '{text}': {exc}") from exc


def poly_to_json(p: Poly) -> Dict[str, Any]:
    """Return ``{"vars": [...], "terms": [{"c": "3/2", "e": [...]}]}``."""
    return {
        "vars": list(p.ring.names),
        "terms": [{"c": str(c), "e": list(m)} for m, c in p.sorted_terms()],
    }


def poly_from_json(obj: Dict[str, Any], ring: Optional[Ring] = None) -> Poly:
    """Return the polynomial from its JSON form, embedded in `ring` if given."""
    try:
        source = Ring(tuple(obj["vars"]))
        poly = Poly(
            source,
            {tuple(t["e"]): Fraction(t["c"]) for t in obj["terms"]},
        )
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"Invalid JSON polynomial: {exc}") from exc

    return poly.embed(ring) if ring is not None else poly


def _poly_value(value: Union[str, Dict[str, Any]], ring: Ring) -> Poly:
    if isinstance(value, str):
        return parse_poly(value, ring=ring)

    return poly_from_json(value, ring)


def factored_to_json(b: FactoredBPoly) -> Dict[str, Any]:
    """Return ``{"factors": [{"offset": "3/2", "mult": 1}], "provenance": ...}``.

    Closed formula values also list the number of quotient basis monomials
    behind each offset.
    """
    out: Dict[str, Any] = {
        "factors": [{"offset": str(a), "mult": k} for a, k in b.factors()],
        "provenance": b.provenance.value,
    }
    if b.multiplicities:
        out["basis_multiplicities"] = [
            {"offset": str(a), "count": k} for a, k in sorted(b.multiplicities.items())
        ]

    return out


def factored_from_json(obj: Dict[str, Any]) -> FactoredBPoly:
    try:
        factors = [(Fraction(f["offset"]), int(f["mult"])) for f in obj["factors"]]
        provenance = Provenance(obj.get("provenance", "external-reference"))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"Invalid JSON factored polynomial: {exc}") from exc

    return FactoredBPoly.from_factors(factors, provenance)


def s_poly_from_json(value: Any, ring: Ring) -> Union[FactoredBPoly, Poly]:
    """Return ``b`` given as factors, an expression or coefficients in ``s``.

    A list ``[c_0, c_1, ...]`` stands for ``c_0 + c_1 s + ...``.
    """
    if isinstance(value, dict) and "factors" in value:
        return factored_from_json(value)

    if isinstance(value, list):
        s = ring.s
        result = ring.zero()
        for power, c in enumerate(value):
            result = result + s**power * Fraction(str(c))

        return result

    if isinstance(value, (int, str, dict)):
        return _poly_value(str(value) if isinstance(value, int) else value, ring)

    raise ValueError(f"Invalid value for 'b': {value!r}")


def operator_to_json(op: DiffOperator) -> List[Dict[str, Any]]:
    """Return the terms ``[{"coeff": <poly>, "d": [multi-index]}]``."""
    return [{"coeff": poly_to_json(c), "d": list(mi)} for mi, c in op.items()]


def operator_from_json(terms: Sequence[Dict[str, Any]], ring: Ring) -> DiffOperator:
    """Return the operator with coefficients in `ring` extended by ``s``.

    Coefficients may be expressions or JSON polynomials.
    """
    ring = ring.with_s()
    try:
        return DiffOperator(
            ring,
            {tuple(t["d"]): _poly_value(t["coeff"], ring) for t in terms},
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"Invalid JSON operator: {exc}") from exc


@dataclass(frozen=True)
class Certificate:
    """A claimed identity ``b delta_h f^s = sum_j P_j . g_j delta_h f^s``."""

    b: Union[FactoredBPoly, Poly]
    parts: Tuple[Tuple[DiffOperator, Poly], ...]
    morphism: Morphism
    powers: Optional[Tuple[int, ...]] = None
    allow_arbitrary: bool = False


def _read_json(src: Union[str, os.PathLike, Dict[str, Any]]) -> Dict[str, Any]:
    if isinstance(src, dict):
        return src

    with open(Path(src), "r", encoding="utf-8") as f:
        try:
            return json.load(f)  # type: ignore[no-any-return]
        except json.JSONDecodeError as exc:
            raise ValueError(f"'{src}' is not a valid JSON file: {exc}") from exc


def load_certificate(src: Union[str, os.PathLike, Dict[str, Any]]) -> Certificate:
    """Return the certificate in the JSON file (or decoded object) `src`.

    The format is::

        {
          "morphism": {"h": ["..."], "f": "...", "nvars": 3, "powers": [1]},
          "b": {"factors": [{"offset": "3/2", "mult": 1}]},
          "parts": [{"op": [{"coeff": "1/4", "d": [2, 0, 0]}], "gen": "..."}],
          "allow_arbitrary": false
        }

    ``nvars``, ``powers`` and ``allow_arbitrary`` are optional.
    """
    obj = _read_json(src)
    try:
        spec = obj["morphism"]
        m = parse_morphism(spec.get("h", []), spec["f"], spec.get("nvars"))
        ring = m.ring.with_s()
        powers = spec.get("powers")
        parts = tuple(
            [
                (operator_from_json(part["op"], m.ring), _poly_value(part["gen"], ring))
                for part in obj["parts"]
            ]
        )
        b = s_poly_from_json(obj["b"], ring)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"Invalid certificate, missing or malformed {exc}") from exc

    if powers is not None:
        powers = tuple([int(a) for a in powers])
        if len(powers) != m.p:
            raise ContextMismatchError(
                f"Got {len(powers)} power(s) for {m.p} component(s) of h"
            )

    return Certificate(b, parts, m, powers, bool(obj.get("allow_arbitrary", False)))


def dumps(obj: Any) -> str:
    """Return deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
