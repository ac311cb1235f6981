"""Parser for the command-line skein expression language.

The grammar mirrors the printed form of a Skein, so rendering and
parsing round-trip exactly:

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | atom ['^' exponent]
    atom   := '(' expr ')' | integer | 'q' | 'empty' | literal | vertex

Curve literals are the ones ``MultiCurve.describe`` emits: ``edge:ID``,
``loop:(1,0,1)``, ``arc:v-w:(1/2,1,0)`` with halves allowed, and the
general ``curve:[v,w]:(3,3,6)`` with doubled coordinates.  ``q`` takes
integer or half-integer exponents (``q^-2``, ``q^(3/2)``); a vertex
name takes integer exponents.  ``q`` and ``empty`` are reserved words,
so surfaces whose vertices shadow them need the general literal.
"""

from __future__ import annotations

from .algebra import Skein
from .coeffs import Coefficient, RingMode, Scalar
from .curves import AdmissibilityError, MultiCurve, curve_from_coordinates, edge_arc
from .surface import Surface

__all__ = ["ParseError", "parse_expression"]


class ParseError(Exception):
    pass


_SYMBOLS = set("+-*^()[]:,/")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("INT", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("IDENT", text[i:j], i))
            i = j
        elif ch in _SYMBOLS:
            toks.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r} at position {i}")
    return toks


class _Parser:
    def __init__(self, text: str, surf: Surface, mode: RingMode):
        self.text = text
        self.surf = surf
        self.mode = mode
        self.toks = _tokenize(text)
        self.i = 0

    # token plumbing

    def _peek(self, ahead: int = 0):
        j = self.i + ahead
        return self.toks[j] if j < len(self.toks) else ("END", "", len(self.text))

    def _next(self):
        tok = self._peek()
        self.i += 1
        return tok

    def _expect(self, kind: str) -> str:
        tok = self._next()
        if tok[0] != kind:
            raise ParseError(
                f"expected {kind!r} at position {tok[2]}, found {tok[1]!r}")
        return tok[1]

    def _fail(self, msg: str):
        tok = self._peek()
        raise ParseError(f"{msg} at position {tok[2]} (near {tok[1]!r})")

    # grammar

    def parse(self) -> Skein:
        out = self.expr()
        if self._peek()[0] != "END":
            self._fail("trailing input")
        return out

    def expr(self) -> Skein:
        out = self.term()
        while self._peek()[0] in ("+", "-"):
            op = self._next()[0]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> Skein:
        out = self.factor()
        while self._peek()[0] == "*":
            self._next()
            out = out * self.factor()
        return out

    def factor(self) -> Skein:
        if self._peek()[0] == "-":
            self._next()
            return -self.factor()
        return self.atom()

    def _int(self) -> int:
        sign = 1
        if self._peek()[0] == "-":
            self._next()
            sign = -1
        return sign * int(self._expect("INT"))

    def _exponent_s(self) -> int:
        """Exponent after q, in half units: q^2 -> 4, q^(3/2) -> 3."""
        if self._peek()[0] == "(":
            self._next()
            num = self._int()
            self._expect("/")
            if self._expect("INT") != "2":
                self._fail("only halves are allowed in exponents")
            self._expect(")")
            return num
        return 2 * self._int()

    def atom(self) -> Skein:
        kind, value, pos = self._peek()
        if kind == "(":
            self._next()
            out = self.expr()
            self._expect(")")
            return self._maybe_power(out)
        if kind == "INT":
            self._next()
            return self._maybe_power(
                Skein.unit(self.surf, self.mode).scale(int(value)))
        if kind != "IDENT":
            self._fail("expected a term")
        if value == "q":
            self._next()
            e = 2
            if self._peek()[0] == "^":
                self._next()
                e = self._exponent_s()
            return Skein.unit(self.surf, self.mode).scale(
                Scalar.s_power(e, self.mode))
        if value == "empty":
            self._next()
            return self._maybe_power(Skein.unit(self.surf, self.mode))
        if value in ("edge", "loop", "arc", "curve") and self._peek(1)[0] == ":":
            return self._maybe_power(Skein.of(self.literal(), self.mode))
        if value in self.surf.vertex_kinds:
            self._next()
            e = 1
            if self._peek()[0] == "^":
                self._next()
                e = self._int()
            return Skein.unit(self.surf, self.mode).scale(
                Coefficient.vertex(value, self.mode, e))
        raise ParseError(f"unknown name {value!r} at position {pos}")

    def _maybe_power(self, base: Skein) -> Skein:
        if self._peek()[0] != "^":
            return base
        self._next()
        e = self._int()
        if e < 0:
            self._fail("negative powers are only defined for q and vertices")
        return base ** e

    # curve literals

    def literal(self) -> MultiCurve:
        head = self._next()[1]
        self._expect(":")
        try:
            if head == "edge":
                eid = self._expect("IDENT")
                if eid not in self.surf.edge_index:
                    raise ParseError(f"no edge {eid!r} on {self.surf.name}")
                edge = self.surf.edge(eid)
                if (edge.v1 == edge.v2
                        and self.surf.vertex_kinds[edge.v1] == "puncture"):
                    raise ParseError(
                        f"edge:{eid} has both ends at puncture {edge.v1},"
                        " which no basis curve allows")
                return edge_arc(self.surf, eid)
            if head == "loop":
                coords = self._coord_group(halves=False)
                return curve_from_coordinates(self.surf,
                                              tuple(2 * x for x in coords))
            if head == "arc":
                v = self._expect("IDENT")
                self._expect("-")
                w = self._expect("IDENT")
                self._expect(":")
                coords = self._coord_group(halves=True)
                return curve_from_coordinates(self.surf, tuple(coords), (v, w))
            ends = self._end_group()
            self._expect(":")
            coords = self._coord_group(halves=False)
            return curve_from_coordinates(self.surf, tuple(coords), ends)
        except AdmissibilityError as exc:
            raise ParseError(f"bad curve literal: {exc}") from None

    def _coord_group(self, halves: bool) -> list[int]:
        """A parenthesized coordinate list.

        With halves the entries are read as j/2 or whole numbers and
        returned doubled; otherwise they are returned as written.
        """
        self._expect("(")
        out = []
        while True:
            x = int(self._expect("INT"))
            if halves and self._peek()[0] == "/":
                self._next()
                if self._expect("INT") != "2":
                    self._fail("only halves are allowed in coordinates")
                out.append(x)
            else:
                out.append(2 * x if halves else x)
            if self._peek()[0] != ",":
                break
            self._next()
        self._expect(")")
        return out

    def _end_group(self) -> tuple[str, ...]:
        self._expect("[")
        ends = []
        if self._peek()[0] == "IDENT":
            ends.append(self._next()[1])
            while self._peek()[0] == ",":
                self._next()
                ends.append(self._expect("IDENT"))
        self._expect("]")
        return tuple(ends)


def parse_expression(text: str, surf: Surface, mode: RingMode) -> Skein:
    """Evaluate an expression string to a Skein on the given surface."""
    return _Parser(text, surf, mode).parse()
