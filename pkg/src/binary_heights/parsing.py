"""
Parsing of binary forms from text.

Two syntaxes are accepted:
    - ascending coefficient lists "a0,a1,...,ad" (a_i multiplies x^i y^(d-i))
    - polynomials in x and y such as "x^3 - 2*y^3" or "3/2*x**2*y + y^3"
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from .binary_forms import BinaryForm, format_form
from .errors import FormParseError

logger = logging.getLogger(__name__)


@dataclass
class Token:
    kind: str
    text: str
    position: int


@dataclass
class Term:
    coefficient: Fraction
    x_power: int
    y_power: int
    position: int

    @property
    def degree(self) -> int:
        return self.x_power + self.y_power


class FormParser:
    """Tokenizing parser for binary form strings.

    Parses strings like:
        x^3 - y^3
        -1,0,0,1
        2*x^2*y + 3/4*x*y^2 - y^3
    """

    LIST_PATTERN = re.compile(r"^\s*[-+]?\d+(?:/\d+)?(?:\s*,\s*[-+]?\d+(?:/\d+)?)+\s*$")
    TOKEN_PATTERN = re.compile(
        r"(?P<space>\s+)|(?P<number>\d+(?:/\d+)?)|(?P<var>[xy])|(?P<power>\*\*|\^)|(?P<op>[-+*])"
    )

    def parse(self, text: str, degree: Optional[int] = None) -> BinaryForm:
        """Parse a form string.

        Args:
            text: coefficient list or polynomial
            degree: expected degree, checked when given

        Returns:
            The parsed BinaryForm
        """
        if not text or not text.strip():
            raise FormParseError("empty form", text, 0)
        if self.LIST_PATTERN.match(text):
            form = self._parse_list(text)
        else:
            form = self._parse_polynomial(text)
        if degree is not None and form.degree != degree:
            raise FormParseError(f"expected degree {degree}, got {form.degree}", text, 0)
        return form

    def _parse_list(self, text: str) -> BinaryForm:
        coefficients = [Fraction(part.strip()) for part in text.split(",")]
        if all(c == 0 for c in coefficients):
            raise FormParseError("all coefficients are zero", text, 0)
        return BinaryForm(tuple(coefficients))

    def _tokens(self, text: str) -> Iterator[Token]:
        pos = 0
        while pos < len(text):
            match = self.TOKEN_PATTERN.match(text, pos)
            if match is None:
                raise FormParseError(f"unexpected character {text[pos]!r}", text, pos)
            kind = match.lastgroup
            if kind != "space":
                yield Token(kind, match.group(), pos)
            pos = match.end()

    def _parse_polynomial(self, text: str) -> BinaryForm:
        tokens = list(self._tokens(text))
        terms: List[Term] = []
        i = 0
        while i < len(tokens):
            term, i = self._parse_term(tokens, i, text)
            terms.append(term)

        degrees = {t.degree for t in terms if t.coefficient != 0}
        if not degrees:
            raise FormParseError("the form is identically zero", text, 0)
        d = max(degrees)
        for t in terms:
            if t.coefficient != 0 and t.degree != d:
                raise FormParseError(
                    f"term of degree {t.degree} in a form of degree {d}", text, t.position
                )
        if d == 0:
            raise FormParseError("a constant is not a binary form", text, 0)

        coefficients: Dict[int, Fraction] = {}
        for t in terms:
            coefficients[t.x_power] = coefficients.get(t.x_power, Fraction(0)) + t.coefficient
        form = tuple(coefficients.get(k, Fraction(0)) for k in range(d + 1))
        if all(c == 0 for c in form):
            raise FormParseError("the form is identically zero", text, 0)
        return BinaryForm(form)

    def _parse_term(self, tokens: List[Token], i: int, text: str) -> Tuple[Term, int]:
        start = tokens[i].position
        sign = 1
        if tokens[i].kind == "op" and tokens[i].text in "+-":
            sign = -1 if tokens[i].text == "-" else 1
            i += 1
        coefficient = Fraction(sign)
        powers = {"x": 0, "y": 0}
        expect_factor = True
        while i < len(tokens):
            tok = tokens[i]
            if tok.kind == "op" and tok.text in "+-":
                break
            if tok.kind == "op" and tok.text == "*":
                if expect_factor:
                    raise FormParseError("misplaced '*'", text, tok.position)
                expect_factor = True
                i += 1
                continue
            if tok.kind == "number":
                coefficient *= Fraction(tok.text)
                i += 1
            elif tok.kind == "var":
                exponent = 1
                i += 1
                if i < len(tokens) and tokens[i].kind == "power":
                    if i + 1 >= len(tokens) or tokens[i + 1].kind != "number" or "/" in tokens[i + 1].text:
                        raise FormParseError("exponent must be a nonnegative integer", text, tokens[i].position)
                    exponent = int(tokens[i + 1].text)
                    i += 2
                powers[tok.text] += exponent
            else:
                raise FormParseError(f"unexpected {tok.text!r}", text, tok.position)
            expect_factor = False
        if expect_factor:
            pos = tokens[i].position if i < len(tokens) else len(text)
            raise FormParseError("missing term", text, pos)
        return Term(coefficient, powers["x"], powers["y"], start), i


_parser = FormParser()


def parse_form(text: str, degree: Optional[int] = None) -> BinaryForm:
    """Parse either syntax into a BinaryForm."""
    return _parser.parse(text, degree)


def coefficient_list(f: BinaryForm) -> str:
    """Ascending coefficient list, the inverse of the list syntax."""
    return ",".join(str(a) for a in f.coefficients)


__all__ = ["FormParser", "parse_form", "coefficient_list", "format_form"]
