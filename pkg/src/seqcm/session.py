"""
Session files: a ring declaration, named ideals and elements, then one or
more commands.

    # comments run to the end of the line
    ring Q[x,y,z,t,w]
    ideal I = intersect((x,y), (z,t))
    element f = x + z
    ideal J = I + (w)
    profile I
    classify I f
    check-seq I sequential x+z, w
    find-seq I sequential-f 2
    decide gcm J

Statements end at a newline or at a ';' outside parentheses. A newline
inside parentheses continues the statement.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Tuple

from sympy.polys.rings import PolyElement

from seqcm.exceptions import SeqcmError, SessionParseError
from seqcm.groebner import Submodule, intersect
from seqcm.kernel import RingDescriptor, degree, is_monomial
from seqcm.monomial import MonomialIdeal, monomial_intersect
from seqcm.sequences import SequenceKind

logger = logging.getLogger(__name__)

COMMANDS = ("profile", "classify", "check-seq", "find-seq", "decide", "invariants", "harness",
            "attached", "pstandard")
DECIDABLE = ("cm", "gcm", "scm", "sgcm")
KEYWORDS = ("ring", "ideal", "element", "intersect") + COMMANDS

TOKENS = {
    "name": r"[A-Za-z_][A-Za-z0-9_]*",
    "number": r"\d+",
    "lpar": r"\(",
    "rpar": r"\)",
    "lbrack": r"\[",
    "rbrack": r"\]",
    "plus": r"\+",
    "minus": r"-",
    "pow": r"\^|\*\*",
    "mul": r"\*",
    "div": r"/",
    "equal": r"=",
    "comma": r",",
    "semi": r";",
    "newline": r"\n",
    "comment": r"\#[^\n]*",
    "skip": r"[ \t\r]+",
    "error": r".",
}
TOKEN_RE = re.compile("|".join(f"(?P<{name}>{text})" for name, text in TOKENS.items()))


class Token(NamedTuple):
    type: str
    value: str
    line: int
    column: int

    @property
    def end(self) -> int:
        return self.column + len(self.value)


@dataclass(frozen=True)
class Command:
    name: str
    target: str
    ideal: MonomialIdeal
    kind: Optional[SequenceKind] = None
    elements: Tuple[PolyElement, ...] = ()
    length: Optional[int] = None
    property: Optional[str] = None
    line: int = 0
    column: int = 0

    def describe(self) -> str:
        return f"{self.name} {self.target}"


@dataclass
class SessionInput:
    ring: RingDescriptor
    ideals: Dict[str, Tuple[PolyElement, ...]] = field(default_factory=dict)
    elements: Dict[str, PolyElement] = field(default_factory=dict)
    commands: List[Command] = field(default_factory=list)
    text: str = ""


def tokenize(text: str) -> List[Token]:
    """
    Split the text into tokens. Newlines inside parentheses are dropped and a
    ';' outside parentheses becomes a statement end, so statements can be read
    without tracking depth again.
    """
    tokens = []
    line, line_start, depth = 1, 0, 0
    lines = text.split("\n")
    for mo in TOKEN_RE.finditer(text):
        kind, value = mo.lastgroup, mo.group()
        column = mo.start() - line_start + 1
        if kind == "newline":
            if depth == 0:
                tokens.append(Token("end", value, line, column))
            line += 1
            line_start = mo.end()
            continue
        if kind in ("skip", "comment"):
            continue
        if kind == "error":
            raise SessionParseError(f"unexpected character '{value}'", line, column, value, lines[line - 1])
        if kind in ("lpar", "lbrack"):
            depth += 1
        elif kind in ("rpar", "rbrack"):
            depth -= 1
            if depth < 0:
                raise SessionParseError(f"unbalanced '{value}'", line, column, value, lines[line - 1])
        elif kind == "semi" and depth == 0:
            kind = "end"
        tokens.append(Token(kind, value, line, column))
    if depth > 0:
        raise SessionParseError("unclosed parenthesis at end of input", line, 1, None, None)
    tokens.append(Token("eof", "", line, 1))
    return tokens


class SessionParser:
    """ Recursive descent over the token list, resolving names as statements are read. """

    def __init__(self, text: str):
        self.text = text
        self.lines = text.split("\n")
        self.tokens = tokenize(text)
        self.pos = 0
        self.ring: Optional[RingDescriptor] = None
        self.ideals: Dict[str, Tuple[PolyElement, ...]] = {}
        self.elements: Dict[str, PolyElement] = {}
        self.commands: List[Command] = []

    # token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def error(self, msg: str, token: Optional[Token] = None, inner=None) -> SessionParseError:
        token = token or self.current
        source_line = self.lines[token.line - 1] if token.line - 1 < len(self.lines) else None
        return SessionParseError(msg, token.line, token.column, token.value or None, source_line, inner)

    def advance(self) -> Token:
        token = self.current
        self.pos += 1
        return token

    def accept(self, kind: str, value: Optional[str] = None) -> Optional[Token]:
        token = self.current
        if token.type == kind and (value is None or token.value == value):
            return self.advance()
        return None

    def expect(self, kind: str, value: Optional[str] = None, what: Optional[str] = None) -> Token:
        token = self.accept(kind, value)
        if token is None:
            wanted = what or (f"'{value}'" if value else kind)
            found = self.current.value or "end of input"
            if self.current.type == "end":
                found = "end of statement"
            raise self.error(f"expected {wanted}, found '{found}'")
        return token

    def word(self) -> Token:
        """ A name, joined with directly adjacent '-name' parts: check-seq, sequential-f. """
        first = self.expect("name", what="a name")
        value, end = first.value, first.end
        while (self.current.type == "minus" and self.current.line == first.line
               and self.current.column == end
               and self.tokens[self.pos + 1].type == "name"
               and self.tokens[self.pos + 1].column == end + 1):
            self.advance()
            part = self.advance()
            value, end = f"{value}-{part.value}", part.end
        return Token("name", value, first.line, first.column)

    def at_statement_end(self) -> bool:
        return self.current.type in ("end", "eof")

    def end_statement(self):
        if not self.at_statement_end():
            raise self.error(f"unexpected '{self.current.value}' after statement")
        while self.accept("end"):
            pass

    # grammar

    def parse(self) -> SessionInput:
        while self.accept("end"):
            pass
        while self.current.type != "eof":
            self.statement()
            self.end_statement()
        if self.ring is None:
            raise self.error("no ring declared")
        if not self.commands:
            raise self.error("session has no command")
        logger.debug(f"parsed session over {self.ring}: {len(self.ideals)} ideals, "
                     f"{len(self.elements)} elements, {len(self.commands)} commands")
        return SessionInput(self.ring, dict(self.ideals), dict(self.elements), list(self.commands), self.text)

    def statement(self):
        head = self.word()
        if head.value == "ring":
            self.ring_declaration(head)
        elif head.value == "ideal":
            name = self.declared_name("ideal")
            self.expect("equal", what="'='")
            self.ideals[name.value] = self.ideal_expression()
        elif head.value == "element":
            name = self.declared_name("element")
            self.expect("equal", what="'='")
            start = self.current
            f = self.poly()
            self.check_homogeneous(f, start)
            self.elements[name.value] = f
        elif head.value in COMMANDS:
            self.commands.append(self.command(head))
        else:
            raise self.error(f"unknown statement '{head.value}'", head)

    def ring_declaration(self, head: Token):
        if self.ring is not None:
            raise self.error("ring already declared", head)
        field_name = self.expect("name", what="'Q'")
        if field_name.value not in ("Q", "QQ"):
            raise self.error(f"only rational coefficients are supported, not '{field_name.value}'", field_name)
        self.expect("lbrack", what="'['")
        names = [self.expect("name", what="a variable name")]
        while self.accept("comma"):
            names.append(self.expect("name", what="a variable name"))
        self.expect("rbrack", what="']'")
        seen = set()
        for token in names:
            if token.value in seen:
                raise self.error(f"duplicate variable '{token.value}'", token)
            if token.value in KEYWORDS:
                raise self.error(f"'{token.value}' is reserved", token)
            seen.add(token.value)
        try:
            self.ring = RingDescriptor([t.value for t in names])
        except SeqcmError as e:
            raise self.error(str(e), head, e) from e

    def declared_name(self, what: str) -> Token:
        token = self.expect("name", what=f"{what} name")
        if token.value in KEYWORDS:
            raise self.error(f"'{token.value}' is reserved", token)
        if self.ring is not None and token.value in self.ring.variable_names:
            raise self.error(f"'{token.value}' is a variable of the ring", token)
        if token.value in self.ideals or token.value in self.elements:
            raise self.error(f"'{token.value}' is already declared", token)
        return token

    def require_ring(self, token: Token) -> RingDescriptor:
        if self.ring is None:
            if token.type == "name":
                raise self.error(f"undeclared name '{token.value}': no ring declared", token)
            raise self.error("no ring declared", token)
        return self.ring

    # ideals

    def ideal_expression(self) -> Tuple[PolyElement, ...]:
        gens = list(self.ideal_term())
        while self.accept("plus"):
            gens.extend(self.ideal_term())
        return tuple(gens)

    def ideal_term(self) -> Tuple[PolyElement, ...]:
        token = self.current
        if self.accept("lpar"):
            self.require_ring(token)
            gens = [self.generator()]
            while self.accept("comma"):
                gens.append(self.generator())
            self.expect("rpar", what="')'")
            return tuple(gens)
        if token.type == "name" and token.value == "intersect":
            self.advance()
            self.expect("lpar", what="'('")
            parts = [self.ideal_term()]
            while self.accept("comma") or self.accept("semi"):
                parts.append(self.ideal_term())
            self.expect("rpar", what="')'")
            return self.intersection(parts, token)
        if token.type == "name":
            self.advance()
            if token.value not in self.ideals:
                raise self.error(f"undeclared ideal '{token.value}'", token)
            return self.ideals[token.value]
        raise self.error(f"expected an ideal, found '{token.value or 'end of input'}'", token)

    def generator(self) -> PolyElement:
        start = self.current
        f = self.poly()
        if f and degree(f) is None:
            raise self.error("ideal generators must be homogeneous", start)
        return f

    def intersection(self, parts, token: Token) -> Tuple[PolyElement, ...]:
        ring = self.require_ring(token)
        nonzero = [[f for f in gens if f] for gens in parts]
        if all(is_monomial(f) for gens in nonzero for f in gens):
            result = monomial_intersect([MonomialIdeal.from_polys(ring, gens) for gens in nonzero])
            return tuple(result.polys())
        current = Submodule.ideal(ring, parts[0])
        for gens in parts[1:]:
            current = intersect(current, Submodule.ideal(ring, gens))
        return tuple(current.minimalized().polys())

    # polynomials

    def poly(self) -> PolyElement:
        negate = False
        if self.accept("minus"):
            negate = True
        else:
            self.accept("plus")
        result = self.term()
        if negate:
            result = -result
        while True:
            if self.accept("plus"):
                result = result + self.term()
            elif self.accept("minus"):
                result = result - self.term()
            else:
                return result

    def starts_factor(self) -> bool:
        return self.current.type in ("name", "number", "lpar")

    def term(self) -> PolyElement:
        result = self.factor()
        while True:
            if self.accept("mul"):
                result = result * self.factor()
            elif self.current.type == "div":
                slash = self.advance()
                divisor = self.factor()
                if not divisor.is_ground or not divisor:
                    raise self.error("can only divide by a nonzero constant", slash)
                result = result.quo_ground(divisor.LC)
            elif self.starts_factor():
                result = result * self.factor()
            else:
                return result

    def factor(self) -> PolyElement:
        base = self.atom()
        if self.accept("pow"):
            exponent = self.expect("number", what="an exponent")
            base = base ** int(exponent.value)
        return base

    def atom(self) -> PolyElement:
        token = self.current
        if token.type == "number":
            self.advance()
            ring = self.require_ring(token)
            return ring.monomial((0,) * ring.n, int(token.value))
        if token.type == "name":
            self.advance()
            ring = self.require_ring(token)
            if token.value in ring.variable_names:
                return ring.variable(token.value)
            if token.value in self.elements:
                return self.elements[token.value]
            raise self.error(f"undeclared name '{token.value}'", token)
        if self.accept("lpar"):
            result = self.poly()
            self.expect("rpar", what="')'")
            return result
        raise self.error(f"expected a polynomial, found '{token.value or 'end of input'}'", token)

    def check_homogeneous(self, f: PolyElement, token: Token):
        d = degree(f)
        if d is None:
            raise self.error("element must be a nonzero homogeneous polynomial", token)
        if d == 0:
            raise self.error("element must have positive degree", token)

    # commands

    def target(self) -> Tuple[Token, MonomialIdeal]:
        token = self.expect("name", what="an ideal name")
        ring = self.require_ring(token)
        if token.value not in self.ideals:
            raise self.error(f"undeclared ideal '{token.value}'", token)
        polys = self.ideals[token.value]
        if not all(is_monomial(f) for f in polys if f):
            raise self.error(f"ideal '{token.value}' is not monomial", token)
        return token, MonomialIdeal.from_polys(ring, polys)

    def element_argument(self) -> PolyElement:
        start = self.current
        f = self.poly()
        self.check_homogeneous(f, start)
        return f

    def command(self, head: Token) -> Command:
        name = head.value
        if name == "decide":
            prop = self.expect("name", what="one of cm, gcm, scm, sgcm")
            if prop.value not in DECIDABLE:
                raise self.error(f"cannot decide '{prop.value}', expected one of {', '.join(DECIDABLE)}", prop)
            target, ideal = self.target()
            return Command(name, target.value, ideal, property=prop.value, line=head.line, column=head.column)
        target, ideal = self.target()
        extra = {}
        if name == "classify":
            extra["elements"] = (self.element_argument(),)
        elif name in ("check-seq", "find-seq"):
            kind_token = self.word()
            try:
                extra["kind"] = SequenceKind.parse(kind_token.value)
            except SeqcmError as e:
                raise self.error(str(e), kind_token, e) from e
            if name == "check-seq":
                elements = [self.element_argument()]
                while self.accept("comma"):
                    elements.append(self.element_argument())
                extra["elements"] = tuple(elements)
            else:
                extra["length"] = int(self.expect("number", what="a sequence length").value)
        return Command(name, target.value, ideal, line=head.line, column=head.column, **extra)


def parse_input(text: str) -> SessionInput:
    return SessionParser(text).parse()
