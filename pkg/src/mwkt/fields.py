"""Field construction from specs like GF(7), GF(2^3), GF(4)(t,u), plus element parsing.

Field handles are cached, so two make_field calls with the same spec return
the identical (and therefore interoperable) object.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from typing import Union

from .common import ParseError
from .galois import GaloisField, factor_prime_power, is_prime
from .ratfunc import RationalFunctionField, RFElement
from .galois import GFElement

Field = Union[GaloisField, RationalFunctionField]
FieldElement = Union[GFElement, RFElement]


@dataclass(frozen=True)
class FieldSpec:
    """Structured description of a supported coefficient field."""

    kind: str  # "prime" | "galois" | "rational-function"
    p: int
    k: int = 1
    modulus: tuple[int, ...] | None = None
    variables: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("prime", "galois", "rational-function"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "rational-function":
            if self.p != 2:
                raise ValueError(
                    "rational function fields are supported in characteristic 2 only"
                )
            if not 1 <= len(self.variables) <= 2:
                raise ValueError("rational function fields support 1 or 2 variables")
        elif self.variables:
            raise ValueError("variables only make sense for rational-function fields")

    @classmethod
    def from_string(cls, text: str) -> "FieldSpec":
        m = re.fullmatch(
            r"\s*GF\(\s*(\d+)\s*(?:\^\s*(\d+)\s*)?\)\s*(?:\(\s*([A-Za-z_][A-Za-z_0-9]*"
            r"(?:\s*,\s*[A-Za-z_][A-Za-z_0-9]*)*)\s*\)\s*)?",
            text,
        )
        if m is None:
            raise ParseError(f"bad field spec {text!r}; expected GF(p), GF(p^k), "
                             f"GF(2^k)(t) or GF(2^k)(t,u)")
        base, exp, variables = m.groups()
        base = int(base)
        if exp is not None:
            p, k = base, int(exp)
            if not is_prime(p):
                raise ValueError(f"characteristic {p} is not prime")
            if k < 1:
                raise ValueError("extension degree must be >= 1")
        else:
            p, k = factor_prime_power(base)
        if variables is None:
            kind = "prime" if k == 1 else "galois"
            return cls(kind=kind, p=p, k=k)
        names = tuple(v.strip() for v in variables.split(","))
        return cls(kind="rational-function", p=p, k=k, variables=names)

    def key(self):
        return (self.kind, self.p, self.k, self.modulus, self.variables)


_FIELD_CACHE: dict[tuple, Field] = {}


def make_field(spec: FieldSpec | str) -> Field:
    """Build (or fetch) the field described by a FieldSpec or spec string."""
    if isinstance(spec, str):
        spec = FieldSpec.from_string(spec)
    cached = _FIELD_CACHE.get(spec.key())
    if cached is not None:
        return cached
    if spec.kind in ("prime", "galois"):
        field = GaloisField(spec.p, spec.k, spec.modulus)
    else:
        base = make_field(FieldSpec(kind="prime" if spec.k == 1 else "galois",
                                    p=spec.p, k=spec.k, modulus=spec.modulus))
        field = RationalFunctionField(base, spec.variables)
    _FIELD_CACHE[spec.key()] = field
    return field


# -- tokenizer shared by element and expression parsers ------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<sym>[-+*/^()\[\]<>,=]))"
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    """List of (kind, value, position) with kind in int|name|sym."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        if m.group("int") is not None:
            tokens.append(("int", m.group("int"), m.start("int")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("sym", m.group("sym"), m.start("sym")))
        pos = m.end()
    return tokens


class TokenStream:
    def __init__(self, tokens, text: str):
        self.tokens = tokens
        self.text = text
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.peek()
        if kind != "sym" or val != value:
            raise ParseError(f"expected {value!r}", pos)
        return self.next()

    def at_end(self) -> bool:
        return self.i >= len(self.tokens)


def default_bindings(field: Field) -> dict[str, FieldElement]:
    """Names available inside element expressions: variables and the subfield generator."""
    bindings: dict[str, FieldElement] = {}
    if isinstance(field, RationalFunctionField):
        bindings.update(field.var_elements())
        if field.base.k > 1:
            bindings["x"] = field.from_base(field.base.generator())
    elif field.k > 1:
        bindings["x"] = field.generator()
    return bindings


class ElementParser:
    """Recursive-descent parser for polynomial-fraction element syntax."""

    def __init__(self, field: Field, stream: TokenStream,
                 bindings: dict[str, FieldElement] | None = None):
        self.field = field
        self.stream = stream
        self.bindings = dict(default_bindings(field))
        if bindings:
            self.bindings.update(bindings)

    def parse_expr(self) -> FieldElement:
        value = self.parse_term()
        while True:
            kind, val, _ = self.stream.peek()
            if kind == "sym" and val in "+-":
                self.stream.next()
                term = self.parse_term()
                value = value + term if val == "+" else value - term
            else:
                return value

    def parse_term(self) -> FieldElement:
        value = self.parse_factor()
        while True:
            kind, val, pos = self.stream.peek()
            if kind == "sym" and val in "*/":
                self.stream.next()
                rhs = self.parse_factor()
                if val == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero():
                        raise ParseError("division by zero in element", pos)
                    value = value / rhs
            elif kind in ("int", "name") or (kind == "sym" and val == "("):
                value = value * self.parse_factor()
            else:
                return value

    def parse_factor(self) -> FieldElement:
        kind, val, pos = self.stream.peek()
        negate = False
        if kind == "sym" and val == "-":
            self.stream.next()
            negate = True
        value = self.parse_atom()
        kind, val, _ = self.stream.peek()
        if kind == "sym" and val == "^":
            self.stream.next()
            k2, v2, p2 = self.stream.next()
            neg_exp = False
            if k2 == "sym" and v2 == "-":
                neg_exp = True
                k2, v2, p2 = self.stream.next()
            if k2 != "int":
                raise ParseError("expected integer exponent", p2)
            exp = int(v2)
            value = value ** (-exp if neg_exp else exp)
        return -value if negate else value

    def parse_atom(self) -> FieldElement:
        kind, val, pos = self.stream.next()
        if kind == "int":
            return self.field.from_int(int(val))
        if kind == "name":
            if val not in self.bindings:
                raise ParseError(f"unknown element name {val!r} in {self.field.name}", pos)
            return self.bindings[val]
        if kind == "sym" and val == "(":
            value = self.parse_expr()
            self.stream.expect(")")
            return value
        raise ParseError(f"unexpected token {val!r} in element", pos)


def parse_element(field: Field, text: str,
                  bindings: dict[str, FieldElement] | None = None) -> FieldElement:
    stream = TokenStream(tokenize(text), text)
    parser = ElementParser(field, stream, bindings)
    value = parser.parse_expr()
    if not stream.at_end():
        _, val, pos = stream.peek()
        raise ParseError(f"trailing input {val!r} after element", pos)
    return value


def parse_diagonal(field: Field, text: str,
                   bindings: dict[str, FieldElement] | None = None) -> list[FieldElement]:
    """Comma-separated list of elements, e.g. "t,t^3,1+t"."""
    stream = TokenStream(tokenize(text), text)
    parser = ElementParser(field, stream, bindings)
    entries = [parser.parse_expr()]
    while not stream.at_end():
        stream.expect(",")
        entries.append(parser.parse_expr())
    return entries
