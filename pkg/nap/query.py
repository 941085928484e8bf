"""
Query language: space declarations, event bindings and commands

    space nat factorial; let E = prog(2,0); prob E
    space q grid
    cond prog(2,0) & nat nat
    space coin ct; prob cyl(i1=H,i2=H,i3=H)

Statements are separated by `;` or newlines and `#` starts a comment.
Events are built while parsing, in the space declared most recently.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Tuple

from .engine import NAPSpace
from .errors import FamilyMismatchError, NAPError, QuerySyntaxError, UnknownIdentifierError
from .eventual import DirectedFamily
from .events import CoinSequence, Event, GridIndex, NatEvent, SpaceKind, WeightFn, coin, line, nat
from .events import empty as empty_event, finite as finite_event, full as full_event
from .oracle import DEFAULT_THETAS
from .quadratic import parse_real

logger = logging.getLogger(__name__)

COMMANDS = ('numerosity', 'prob', 'cond', 'condfin', 'sum', 'st', 'density', 'axioms', 'verify', 'eps', 'point')
KEYWORDS = frozenset(COMMANDS) | {'space', 'let', 'weight', 'ref', 'partition', 'at'}

_TOKEN = re.compile(r"""
    (?P<newline>\n)
  | (?P<space>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<dots>\.\.)
  | (?P<punct>[()\[\]{},;=|&~/*+\-:])
""", re.VERBOSE)


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    tokens, line_no, line_start, pos = [], 1, 0, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", line_no, pos - line_start + 1)
        kind = match.lastgroup
        column = pos - line_start + 1
        if kind == 'newline':
            tokens.append(Token('end', '\n', line_no, column))
            line_no, line_start = line_no + 1, match.end()
        elif kind == 'punct' and match.group() == ';':
            tokens.append(Token('end', ';', line_no, column))
        elif kind not in ('space', 'comment'):
            tokens.append(Token(kind, match.group(), line_no, column))
        pos = match.end()
    tokens.append(Token('eof', '', line_no, len(text) - line_start + 1))
    return tokens


@dataclass(frozen=True)
class Command:
    name: str
    space: NAPSpace
    events: Tuple[Event, ...] = ()
    partition: Tuple[Event, ...] = ()
    function: Optional[WeightFn] = None
    indices: Optional[Tuple] = None
    point: object = None

    def render(self) -> str:
        parts = [self.name] + [str(e) for e in self.events]
        if self.partition:
            parts += ['partition'] + [str(e) for e in self.partition]
        if self.function is not None and self.name == 'sum':
            parts += ['weight', str(self.function)]
        if self.point is not None:
            parts.append(str(self.point))
        return ' '.join(parts)


@dataclass
class Query:
    commands: List[Command] = field(default_factory=list)
    bindings: Dict[str, Event] = field(default_factory=dict)
    spaces: List[NAPSpace] = field(default_factory=list)


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.space: Optional[NAPSpace] = None
        self.query = Query()

    # Token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def error(self, message: str, token: Optional[Token] = None) -> QuerySyntaxError:
        token = token or self.current
        return QuerySyntaxError(message, token.line, token.column)

    def at(self, text: str) -> bool:
        return self.current.text == text and self.current.kind != 'end'

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.current.text or 'end of input'
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.current.kind != kind:
            found = self.current.text.strip() or 'end of statement'
            raise self.error(f"expected {what}, found {found!r}")
        return self.advance()

    def integer(self) -> int:
        sign = 1
        if self.at('-'):
            self.advance()
            sign = -1
        return sign * int(self.expect_kind('number', 'an integer').text)

    def rational(self) -> Fraction:
        value = Fraction(self.integer())
        if self.at('/'):
            self.advance()
            denominator = int(self.expect_kind('number', 'a denominator').text)
            if denominator == 0:
                raise self.error("zero denominator")
            value /= denominator
        return value

    def real(self):
        """Raw tokens up to the next top-level `,` `)` or `}` read as one real literal"""
        start, depth, pieces = self.current, 0, []
        while True:
            token = self.current
            if token.kind in ('end', 'eof'):
                break
            if token.text in (',', '}') and depth == 0:
                break
            if token.text == ')':
                if depth == 0:
                    break
                depth -= 1
            elif token.text == '(':
                depth += 1
            pieces.append(self.advance().text)
        try:
            return parse_real(' '.join(pieces))
        except (ValueError, TypeError, SyntaxError) as exc:
            raise self.error(f"bad real literal {' '.join(pieces)!r}: {exc}", start) from None

    # Program structure

    def parse(self) -> Query:
        while self.current.kind != 'eof':
            if self.current.kind == 'end':
                self.advance()
                continue
            self.statement()
            if self.current.kind not in ('end', 'eof'):
                raise self.error(f"unexpected {self.current.text!r} after statement")
        return self.query

    def statement(self):
        head = self.current
        if head.text == 'space':
            self.space_declaration()
        elif head.text == 'let':
            self.binding()
        elif head.text in COMMANDS:
            self.command()
        elif head.kind == 'name':
            raise self.error(f"unknown command {head.text!r}")
        else:
            raise self.error(f"a statement cannot start with {head.text!r}")

    def space_declaration(self):
        self.expect('space')
        kind_token = self.expect_kind('name', 'a space kind')
        try:
            kind = SpaceKind(kind_token.text)
        except ValueError:
            raise UnknownIdentifierError(f"unknown space {kind_token.text!r}") from None
        family_token = self.expect_kind('name', 'a directed family')
        try:
            family = DirectedFamily(family_token.text)
        except ValueError:
            raise UnknownIdentifierError(f"unknown family {family_token.text!r}") from None
        if kind is SpaceKind.R and family is DirectedFamily.Q_GRID:
            family = DirectedFamily.R_GRID

        weight, reference = None, None
        while self.current.kind == 'name' and self.current.text in ('weight', 'ref'):
            if self.advance().text == 'weight':
                weight = self.weight_spec(kind)
            else:
                reference = self.point(kind)
        self.space = NAPSpace(kind, family, weight, reference)
        self.query.spaces.append(self.space)
        logger.debug("space declared: %s", self.space)

    def weight_spec(self, kind: SpaceKind) -> WeightFn:
        self.expect('[')
        values = [self.rational()]
        while self.at(','):
            self.advance()
            values.append(self.rational())
        self.expect(']')
        exceptions = {}
        if self.at('at'):
            self.advance()
            self.expect('{')
            while not self.at('}'):
                x = self.integer()
                self.expect(':')
                exceptions[x] = self.rational()
                if not self.at('}'):
                    self.expect(',')
            self.expect('}')
        if kind is SpaceKind.NAT:
            return WeightFn.periodic(values, exceptions)
        if exceptions:
            raise self.error("point exceptions are only supported on nat")
        return WeightFn(kind, tuple(values))

    def binding(self):
        self.expect('let')
        name = self.expect_kind('name', 'a name')
        if name.text in KEYWORDS:
            raise self.error(f"{name.text!r} is a reserved word", name)
        self.expect('=')
        self.query.bindings[name.text] = self.expression()

    def command(self):
        name = self.advance().text
        space = self.require_space()
        if name == 'eps':
            self.query.commands.append(Command(name, space))
            return
        if name == 'point':
            self.query.commands.append(Command(name, space, point=self.point(space.kind)))
            return

        events = [self.expression()]
        partition, function, indices = (), None, None
        if name in ('cond', 'condfin'):
            events.append(self.expression())
        elif name == 'axioms':
            while self.starts_expression():
                events.append(self.expression())
            if self.at('partition'):
                self.advance()
                parts = [self.expression()]
                while self.starts_expression():
                    parts.append(self.expression())
                partition = tuple(parts)
        elif name == 'sum':
            if self.at('weight'):
                self.advance()
                function = self.weight_spec(space.kind)
            else:
                function = WeightFn.constant(space.kind)
        elif name == 'verify':
            indices = self.index_range(space)
        if name == 'condfin' and events[1].finite_points() is None:
            raise self.error("condfin needs an explicit finite conditioning set")
        if name == 'density' and not isinstance(events[0], NatEvent):
            raise FamilyMismatchError("density is defined for events of nat only")
        self.query.commands.append(Command(name, space, tuple(events), partition, function, indices))

    def require_space(self) -> NAPSpace:
        if self.space is None:
            raise self.error("declare a space before the first command")
        return self.space

    def index_range(self, space: NAPSpace) -> Optional[Tuple]:
        if self.current.kind != 'name' or self.current.text not in ('m', 'n', 'N'):
            return None
        key = self.advance()
        self.expect('=')
        first = self.integer()
        if self.at('..'):
            self.advance()
            values = list(range(first, self.integer() + 1))
        else:
            values = [first]
            while self.at(','):
                self.advance()
                values.append(self.integer())
        expected = {'m': (DirectedFamily.FACTORIAL_N,), 'N': (DirectedFamily.COIN_CT,)}.get(key.text)
        if expected and space.family not in expected:
            raise self.error(f"{key.text}= ranges do not apply to the {space.family.value} family", key)
        if key.text == 'n' and space.family in (DirectedFamily.FACTORIAL_N, DirectedFamily.COIN_CT):
            raise self.error(f"n= ranges do not apply to the {space.family.value} family", key)
        if space.family is DirectedFamily.R_GRID:
            return tuple(GridIndex(n, theta) for n in values for theta in DEFAULT_THETAS)
        return tuple(values)

    # Events

    def starts_expression(self) -> bool:
        token = self.current
        if token.kind == 'name':
            return token.text not in KEYWORDS
        return token.text in ('(', '~')

    def expression(self) -> Event:
        event = self.conjunction()
        while self.at('|'):
            self.advance()
            event = self.combine(event, self.conjunction(), 'union')
        return event

    def conjunction(self) -> Event:
        event = self.negation()
        while self.at('&'):
            self.advance()
            event = self.combine(event, self.negation(), 'intersect')
        return event

    def combine(self, left: Event, right: Event, op: str) -> Event:
        if left.space is not right.space:
            kind = self.require_space().kind
            left, right = self.space.adopt(left), self.space.adopt(right)
            if left.space is not kind:
                raise FamilyMismatchError(f"events of {left.space.value} and {right.space.value} cannot be combined")
        return getattr(left, op)(right)

    def negation(self) -> Event:
        if self.at('~'):
            self.advance()
            return self.negation().complement()
        return self.atom()

    def atom(self) -> Event:
        token = self.current
        if self.at('('):
            self.advance()
            event = self.expression()
            self.expect(')')
            return event
        if token.kind != 'name':
            raise self.error(f"expected an event, found {token.text.strip() or 'end of statement'!r}")
        self.advance()
        name = token.text
        if name in self.query.bindings:
            return self.query.bindings[name]
        kind = self.require_space().kind
        builder = getattr(self, f"_atom_{name}", None)
        if builder is None:
            raise UnknownIdentifierError(f"unknown event name {name!r} at line {token.line}, column {token.column}")
        return builder(kind, token)

    def _wrong_space(self, token: Token, kind: SpaceKind) -> FamilyMismatchError:
        return FamilyMismatchError(
            f"{token.text} is not an event of space {kind.value} (line {token.line}, column {token.column})"
        )

    def _line_only(self, token: Token, kind: SpaceKind):
        if kind not in (SpaceKind.Q, SpaceKind.R):
            raise self._wrong_space(token, kind)

    def _pair(self) -> Tuple[int, int]:
        self.expect('(')
        k = self.integer()
        self.expect(',')
        l = self.integer()
        self.expect(')')
        return k, l

    def _atom_prog(self, kind, token):
        if kind is SpaceKind.COIN:
            raise self._wrong_space(token, kind)
        k, l = self._pair()
        if k < 1 or not 0 <= l < k:
            raise self.error(f"prog(k,l) needs k >= 1 and 0 <= l < k, got prog({k},{l})", token)
        return self.space.adopt(nat.prog(k, l))

    def _atom_cls(self, kind, token):
        if kind is SpaceKind.COIN:
            raise self._wrong_space(token, kind)
        k, r = self._pair()
        if k < 1:
            raise self.error(f"cls(k,r) needs k >= 1, got cls({k},{r})", token)
        return nat.residue_class(k, r) if kind is SpaceKind.NAT else line.residue_class(kind, k, r)

    def _atom_fin(self, kind, token):
        self.expect('{')
        points = []
        while not self.at('}'):
            points.append(self.point(kind))
            if not self.at('}'):
                self.expect(',')
        self.expect('}')
        return finite_event(kind, points)

    def _atom_interval(self, kind, token):
        self._line_only(token, kind)
        self.expect('(')
        a = self.real()
        self.expect(',')
        b = self.real()
        self.expect(')')
        return line.interval(kind, a, b)

    def _atom_halfline(self, kind, token):
        self._line_only(token, kind)
        self.expect('(')
        a = self.real()
        self.expect(')')
        return line.halfline(kind, a)

    def _atom_nat(self, kind, token):
        if kind is SpaceKind.COIN:
            raise self._wrong_space(token, kind)
        return nat.full() if kind is SpaceKind.NAT else line.naturals(kind)

    def _atom_int(self, kind, token):
        if kind is SpaceKind.COIN:
            raise self._wrong_space(token, kind)
        return nat.full() if kind is SpaceKind.NAT else line.integers(kind)

    def _atom_pos(self, kind, token):
        self._line_only(token, kind)
        return line.positive(kind)

    def _atom_rat(self, kind, token):
        self._line_only(token, kind)
        return line.rationals(kind)

    def _atom_all(self, kind, token):
        return full_event(kind)

    def _atom_empty(self, kind, token):
        return empty_event(kind)

    def _atom_cyl(self, kind, token):
        if kind is not SpaceKind.COIN:
            raise self._wrong_space(token, kind)
        self.expect('(')
        conditions = {}
        while not self.at(')'):
            name = self.expect_kind('name', 'a toss like i3')
            if not re.fullmatch(r"i[1-9][0-9]*", name.text):
                raise self.error(f"tosses are written i1, i2, ..., got {name.text!r}", name)
            self.expect('=')
            outcome = self.expect_kind('name', 'H or T')
            if outcome.text not in ('H', 'T'):
                raise self.error(f"a toss is H or T, got {outcome.text!r}", outcome)
            conditions[int(name.text[1:])] = outcome.text
            if not self.at(')'):
                self.expect(',')
        self.expect(')')
        return coin.cylinder(conditions)

    def _atom_seq(self, kind, token):
        if kind is not SpaceKind.COIN:
            raise self._wrong_space(token, kind)
        return coin.sequences([self.sequence_body(token)])

    def sequence_body(self, token: Token) -> CoinSequence:
        self.expect('(')
        prefix = ''
        if self.current.kind == 'name' and self.current.text != 'tail':
            prefix = self.advance().text
            self.expect(',')
        tail_key = self.expect_kind('name', "'tail'")
        if tail_key.text != 'tail':
            raise self.error("expected tail=H or tail=T", tail_key)
        self.expect('=')
        tail = self.expect_kind('name', 'H or T').text
        self.expect(')')
        try:
            return CoinSequence(prefix, tail)
        except ValueError as exc:
            raise self.error(str(exc), token) from None

    def point(self, kind: SpaceKind):
        token = self.current
        if kind is SpaceKind.COIN:
            if token.text != 'seq':
                raise self.error("coin points are written seq(HT..., tail=H)")
            self.advance()
            return self.sequence_body(token)
        if kind is SpaceKind.NAT:
            value = self.integer()
            if value < 1:
                raise self.error(f"natural numbers start at 1, got {value}", token)
            return value
        return self.real()


def parse(text: str) -> Query:
    """Parse a whole program into its commands"""
    try:
        return _Parser(text).parse()
    except NAPError:
        raise
    except ValueError as exc:
        raise QuerySyntaxError(str(exc), 0, 0) from None
