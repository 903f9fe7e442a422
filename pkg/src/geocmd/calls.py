"""Canonical GIS function-call grammar: AST, parser, and serializer.

The call-string syntax is ``Name(arg1, arg2, ...)`` where an argument is a
single-quoted string, a decimal number, ``null``, or a two-number coordinate
pair ``[n1, n2]``. This string form is the wire format shared by dataset
files, prediction files, the LLM post-processor, and the browser demo, so
serialization is byte-stable: numeric literals are kept as the exact text
they were written with.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Union

__all__ = [
    "GIS_FUNCTIONS",
    "NumberLiteral",
    "GeometryKind",
    "DrawShape",
    "CartoProperty",
    "AddMarker",
    "AddLayer",
    "AddVector",
    "AddWMS",
    "Cartography",
    "Draw",
    "Move",
    "MoveToExtent",
    "ZoomIn",
    "ZoomOut",
    "GisCall",
    "ParseError",
    "UnknownFunctionError",
    "ArityMismatchError",
    "TypeMismatchError",
    "CallSyntaxError",
    "parse_call",
    "serialize_call",
    "function_name",
]

#: The ten recognized call names, in inventory order. Names are case-sensitive
#: class labels: classifiers predict exactly these strings.
GIS_FUNCTIONS = (
    "AddMarker",
    "AddLayer",
    "AddVector",
    "AddWMS",
    "Cartography",
    "Draw",
    "Move",
    "MoveToExtent",
    "ZoomIn",
    "ZoomOut",
)

_NUMBER_RE = re.compile(r"-?[0-9]+(\.[0-9]+)?")


class ParseError(ValueError):
    """Base class for every call-string rejection."""


class UnknownFunctionError(ParseError):
    """The function name is not one of the ten recognized calls."""


class ArityMismatchError(ParseError):
    """Wrong number of arguments for the named call."""


class TypeMismatchError(ParseError):
    """An argument has the wrong shape (e.g. a string where a number goes)."""


class CallSyntaxError(ParseError):
    """The text does not scan: unbalanced delimiters, stray tokens, etc."""


@dataclass(frozen=True)
class NumberLiteral:
    """A decimal number kept as written.

    Exact-match scoring is done on raw strings, so re-formatting a float
    (``-73.18880`` vs ``-73.1888``) must never happen; ``text`` is emitted
    verbatim on serialization and equality is textual.
    """

    text: str

    def __post_init__(self) -> None:
        if not _NUMBER_RE.fullmatch(self.text):
            raise ValueError(f"not a decimal literal: {self.text!r}")

    @property
    def value(self) -> float:
        return float(self.text)


class GeometryKind(Enum):
    POINT = "point"
    LINE = "line"
    POLYLINE = "polyline"
    POLYGON = "polygon"

    @classmethod
    def from_text(cls, text: str) -> "GeometryKind":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"not a geometry kind: {text!r}") from None

    @property
    def canonical(self) -> str:
        return self.value


class DrawShape(Enum):
    POINT = "Point"
    LINE = "Line"
    POLYGON = "Polygon"

    @classmethod
    def from_text(cls, text: str) -> "DrawShape":
        try:
            return cls(text.capitalize())
        except ValueError:
            raise ValueError(f"not a drawable shape: {text!r}") from None

    @property
    def canonical(self) -> str:
        return self.value


class CartoProperty(Enum):
    BACKGROUND = "background"
    FILL = "fill"
    STROKE = "stroke"

    @classmethod
    def from_text(cls, text: str) -> "CartoProperty":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"not a cartographic property: {text!r}") from None

    @property
    def canonical(self) -> str:
        return self.value


@dataclass(frozen=True)
class AddMarker:
    label: str
    coords: tuple[NumberLiteral, NumberLiteral]


@dataclass(frozen=True)
class AddLayer:
    name: str


@dataclass(frozen=True)
class AddVector:
    geometry: GeometryKind
    filename: str


@dataclass(frozen=True)
class AddWMS:
    url: str


@dataclass(frozen=True)
class Cartography:
    property: CartoProperty
    color: str
    extra: str | None


@dataclass(frozen=True)
class Draw:
    shape: DrawShape


@dataclass(frozen=True)
class Move:
    a: NumberLiteral
    b: NumberLiteral


@dataclass(frozen=True)
class MoveToExtent:
    a: NumberLiteral
    b: NumberLiteral
    c: NumberLiteral
    d: NumberLiteral


@dataclass(frozen=True)
class ZoomIn:
    levels: int

    def __post_init__(self) -> None:
        if not isinstance(self.levels, int) or self.levels < 1:
            raise ValueError(f"zoom levels must be a positive integer, got {self.levels!r}")


@dataclass(frozen=True)
class ZoomOut:
    levels: int

    def __post_init__(self) -> None:
        if not isinstance(self.levels, int) or self.levels < 1:
            raise ValueError(f"zoom levels must be a positive integer, got {self.levels!r}")


GisCall = Union[
    AddMarker,
    AddLayer,
    AddVector,
    AddWMS,
    Cartography,
    Draw,
    Move,
    MoveToExtent,
    ZoomIn,
    ZoomOut,
]

_ARITY = {
    "AddMarker": 2,
    "AddLayer": 1,
    "AddVector": 2,
    "AddWMS": 1,
    "Cartography": 3,
    "Draw": 1,
    "Move": 2,
    "MoveToExtent": 4,
    "ZoomIn": 1,
    "ZoomOut": 1,
}


# ---------------------------------------------------------------------------
# Lexing / parsing
# ---------------------------------------------------------------------------

# Argument values as produced by the scanner, before per-call typing.
@dataclass(frozen=True)
class _Str:
    value: str


@dataclass(frozen=True)
class _Num:
    literal: NumberLiteral


@dataclass(frozen=True)
class _Null:
    pass


@dataclass(frozen=True)
class _Pair:
    first: NumberLiteral
    second: NumberLiteral


_Arg = Union[_Str, _Num, _Null, _Pair]

_NAME_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class _Scanner:
    """Cursor over the call text; whitespace between tokens is tolerated."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str) -> None:
        self.skip_ws()
        if self.peek() != char:
            found = self.peek() or "end of input"
            raise CallSyntaxError(f"expected {char!r}, found {found!r} at offset {self.pos}")
        self.pos += 1

    def name(self) -> str:
        self.skip_ws()
        m = _NAME_TOKEN_RE.match(self.text, self.pos)
        if not m:
            raise CallSyntaxError(f"expected a function name at offset {self.pos}")
        self.pos = m.end()
        return m.group()

    def number(self) -> NumberLiteral:
        self.skip_ws()
        m = _NUMBER_RE.match(self.text, self.pos)
        if not m:
            raise CallSyntaxError(f"expected a number at offset {self.pos}")
        self.pos = m.end()
        return NumberLiteral(m.group())

    def string(self) -> str:
        # Opening quote already consumed by the caller. No escape mechanism:
        # the literal runs to the next single quote.
        end = self.text.find("'", self.pos)
        if end < 0:
            raise CallSyntaxError("unterminated string literal")
        value = self.text[self.pos : end]
        self.pos = end + 1
        return value

    def argument(self) -> _Arg:
        self.skip_ws()
        ch = self.peek()
        if ch == "'":
            self.pos += 1
            return _Str(self.string())
        if ch == "[":
            self.pos += 1
            first = self.number()
            self.expect(",")
            second = self.number()
            self.expect("]")
            return _Pair(first, second)
        if ch == "-" or ch.isdigit():
            return _Num(self.number())
        m = _NAME_TOKEN_RE.match(self.text, self.pos)
        if m and m.group() == "null":
            self.pos = m.end()
            return _Null()
        found = ch or "end of input"
        raise CallSyntaxError(f"expected an argument, found {found!r} at offset {self.pos}")


def parse_call(text: str) -> GisCall:
    """Parse a canonical call string into its AST.

    Raises :class:`UnknownFunctionError`, :class:`ArityMismatchError`,
    :class:`TypeMismatchError`, or :class:`CallSyntaxError` (all subclasses
    of :class:`ParseError`) — never returns a silently wrong AST.
    """
    sc = _Scanner(text)
    name = sc.name()
    if name not in _ARITY:
        raise UnknownFunctionError(f"unknown function {name!r}")
    sc.expect("(")
    args: list[_Arg] = []
    sc.skip_ws()
    if sc.peek() != ")":
        args.append(sc.argument())
        sc.skip_ws()
        while sc.peek() == ",":
            sc.pos += 1
            args.append(sc.argument())
            sc.skip_ws()
    sc.expect(")")
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise CallSyntaxError(f"trailing input after ')' at offset {sc.pos}")
    if len(args) != _ARITY[name]:
        raise ArityMismatchError(f"{name} takes {_ARITY[name]} argument(s), got {len(args)}")
    return _build(name, args)


def _want_str(name: str, pos: int, arg: _Arg) -> str:
    if not isinstance(arg, _Str):
        raise TypeMismatchError(f"{name}: argument {pos} must be a quoted string")
    return arg.value


def _want_num(name: str, pos: int, arg: _Arg) -> NumberLiteral:
    if not isinstance(arg, _Num):
        raise TypeMismatchError(f"{name}: argument {pos} must be a number")
    return arg.literal


def _want_enum(name: str, pos: int, arg: _Arg, from_text, what: str):
    raw = _want_str(name, pos, arg)
    try:
        return from_text(raw)
    except ValueError:
        raise TypeMismatchError(f"{name}: argument {pos} must be a {what}, got {raw!r}") from None


def _build(name: str, args: list[_Arg]) -> GisCall:
    if name == "AddMarker":
        label = _want_str(name, 1, args[0])
        if not isinstance(args[1], _Pair):
            raise TypeMismatchError("AddMarker: argument 2 must be a coordinate pair [n1, n2]")
        return AddMarker(label, (args[1].first, args[1].second))
    if name == "AddLayer":
        return AddLayer(_want_str(name, 1, args[0]))
    if name == "AddVector":
        geometry = _want_enum(name, 1, args[0], GeometryKind.from_text, "geometry kind")
        return AddVector(geometry, _want_str(name, 2, args[1]))
    if name == "AddWMS":
        return AddWMS(_want_str(name, 1, args[0]))
    if name == "Cartography":
        prop = _want_enum(name, 1, args[0], CartoProperty.from_text, "cartographic property")
        color = _want_str(name, 2, args[1])
        extra: str | None
        if isinstance(args[2], _Null):
            extra = None
        elif isinstance(args[2], _Str):
            extra = args[2].value
        else:
            raise TypeMismatchError("Cartography: argument 3 must be a string or null")
        return Cartography(prop, color, extra)
    if name == "Draw":
        return Draw(_want_enum(name, 1, args[0], DrawShape.from_text, "drawable shape"))
    if name == "Move":
        return Move(_want_num(name, 1, args[0]), _want_num(name, 2, args[1]))
    if name == "MoveToExtent":
        nums = [_want_num(name, i + 1, a) for i, a in enumerate(args)]
        return MoveToExtent(*nums)
    if name in ("ZoomIn", "ZoomOut"):
        lit = _want_num(name, 1, args[0])
        if "." in lit.text or lit.text.startswith("-") or int(lit.text) < 1:
            raise TypeMismatchError(f"{name}: levels must be a positive integer, got {lit.text!r}")
        return ZoomIn(int(lit.text)) if name == "ZoomIn" else ZoomOut(int(lit.text))
    raise AssertionError(name)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _quote(value: str) -> str:
    return f"'{value}'"


def serialize_call(call: GisCall) -> str:
    """Render the canonical string form: one space after each comma, single
    quotes, bare ``null``, numeric text verbatim."""
    if isinstance(call, AddMarker):
        x, y = call.coords
        return f"AddMarker({_quote(call.label)}, [{x.text}, {y.text}])"
    if isinstance(call, AddLayer):
        return f"AddLayer({_quote(call.name)})"
    if isinstance(call, AddVector):
        return f"AddVector({_quote(call.geometry.canonical)}, {_quote(call.filename)})"
    if isinstance(call, AddWMS):
        return f"AddWMS({_quote(call.url)})"
    if isinstance(call, Cartography):
        extra = "null" if call.extra is None else _quote(call.extra)
        return f"Cartography({_quote(call.property.canonical)}, {_quote(call.color)}, {extra})"
    if isinstance(call, Draw):
        return f"Draw({_quote(call.shape.canonical)})"
    if isinstance(call, Move):
        return f"Move({call.a.text}, {call.b.text})"
    if isinstance(call, MoveToExtent):
        return f"MoveToExtent({call.a.text}, {call.b.text}, {call.c.text}, {call.d.text})"
    if isinstance(call, ZoomIn):
        return f"ZoomIn({call.levels})"
    if isinstance(call, ZoomOut):
        return f"ZoomOut({call.levels})"
    raise TypeError(f"not a GIS call: {call!r}")


def function_name(call: GisCall) -> str:
    """The class label a classifier predicts for this call."""
    name = type(call).__name__
    if name not in _ARITY:
        raise TypeError(f"not a GIS call: {call!r}")
    return name
