"""Formula language for the evidence logics: AST, parser, printer.

Surface syntax (ASCII)::

    phi := phi2 ('->' phi)?                 right-associative
    phi2 := phi3 ('|' phi3)*
    phi3 := phi4 ('&' phi4)*
    phi4 := ('~'|'!') phi4 | 'F' '[' lit ']' phi4
          | 'box' ('[' lit ']')? phi4 | 'dia' ('[' lit ']')? phi4
          | 'A' phi4 | 'E' phi4
          | 'B' '[' lit ',' lit ']' phi4 | 'K' '[' lit ',' lit ']' phi4
          | prop | 'true' | 'false' | '(' phi ')'

Literals are kept as uninterpreted text and resolved against a concrete
semiring only at evaluation time, so one formula file can target several
models.  Derived operators expand canonically into the core fragment
{prop, true, false, ~, &, F, box, A}.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import BudgetError, ParseError


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class For(Formula):
    """F[lit]: evidence obtainable within the given resource budget."""

    lit: str
    sub: Formula


@dataclass(frozen=True)
class Box(Formula):
    sub: Formula


@dataclass(frozen=True)
class Dia(Formula):
    sub: Formula


@dataclass(frozen=True)
class BoxFor(Formula):
    """box[lit]: truthful evidence within budget (F[lit] phi & box phi)."""

    lit: str
    sub: Formula


@dataclass(frozen=True)
class DiaFor(Formula):
    lit: str
    sub: Formula


@dataclass(frozen=True)
class All(Formula):
    """Global modality: true at every state."""

    sub: Formula


@dataclass(frozen=True)
class Exists(Formula):
    sub: Formula


@dataclass(frozen=True)
class Believes(Formula):
    """B[a,b]: justified within budget a against counterevidence budget b."""

    lit_a: str
    lit_b: str
    sub: Formula


@dataclass(frozen=True)
class Knows(Formula):
    lit_a: str
    lit_b: str
    sub: Formula


KEYWORDS = {"true", "false", "box", "dia", "A", "E", "B", "F", "K"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<set>\{[^{}]*\})
  | (?P<num>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|[~!&|()\[\],])
""", re.VERBOSE)


def _tokenize(text):
    tokens = []
    line, col, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            tokens.append((kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n") - 1
        else:
            col += len(value)
        pos = m.end()
    tokens.append(("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message):
        _, value, line, col = self.peek()
        shown = value or "end of input"
        raise ParseError(f"{message} (found {shown!r})", line, col)

    def expect(self, value):
        kind, got, _, _ = self.peek()
        if got != value:
            self.fail(f"expected {value!r}")
        return self.next()

    def parse(self):
        f = self.implies()
        if self.peek()[0] != "eof":
            self.fail("trailing input")
        return f

    def implies(self):
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.next()
            return Implies(left, self.implies())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.peek()[1] == "|":
            self.next()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.peek()[1] == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def literal(self):
        kind, value, _, _ = self.peek()
        if kind in ("num", "set", "ident"):
            self.next()
            return value
        self.fail("expected a semiring literal")

    def bracket_lits(self, n):
        self.expect("[")
        lits = [self.literal()]
        while len(lits) < n:
            self.expect(",")
            lits.append(self.literal())
        self.expect("]")
        return lits

    def unary(self):
        kind, value, _, _ = self.peek()
        if value in ("~", "!"):
            self.next()
            return Not(self.unary())
        if kind == "ident" and value in KEYWORDS:
            self.next()
            if value == "true":
                return Top()
            if value == "false":
                return Bot()
            if value == "F":
                (lit,) = self.bracket_lits(1)
                return For(lit, self.unary())
            if value in ("box", "dia"):
                ctor_plain = Box if value == "box" else Dia
                ctor_lit = BoxFor if value == "box" else DiaFor
                if self.peek()[1] == "[":
                    (lit,) = self.bracket_lits(1)
                    return ctor_lit(lit, self.unary())
                return ctor_plain(self.unary())
            if value == "A":
                return All(self.unary())
            if value == "E":
                return Exists(self.unary())
            ctor = Believes if value == "B" else Knows
            a, b = self.bracket_lits(2)
            return ctor(a, b, self.unary())
        if kind == "ident":
            self.next()
            return Prop(value)
        if value == "(":
            self.next()
            f = self.implies()
            self.expect(")")
            return f
        self.fail("expected a formula")


def parse(text: str) -> Formula:
    return _Parser(text).parse()


def parse_lines(text: str) -> list:
    """Formula-file format: one formula per line, '#' starts a comment."""
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse(line))
    return out


_BINARY = (And, Or, Implies)


def _wrapped(f: Formula) -> str:
    text = print_formula(f)
    return f"({text})" if isinstance(f, _BINARY) else text


def print_formula(f: Formula) -> str:
    """Render back to surface syntax; parse(print_formula(f)) == f."""
    match f:
        case Prop(name):
            return name
        case Top():
            return "true"
        case Bot():
            return "false"
        case Not(sub):
            return "~" + _wrapped(sub)
        case And(left, right):
            return f"{_wrapped(left)} & {_wrapped(right)}"
        case Or(left, right):
            return f"{_wrapped(left)} | {_wrapped(right)}"
        case Implies(left, right):
            return f"{_wrapped(left)} -> {_wrapped(right)}"
        case For(lit, sub):
            return f"F[{lit}] {_wrapped(sub)}"
        case Box(sub):
            return "box " + _wrapped(sub)
        case Dia(sub):
            return "dia " + _wrapped(sub)
        case BoxFor(lit, sub):
            return f"box[{lit}] {_wrapped(sub)}"
        case DiaFor(lit, sub):
            return f"dia[{lit}] {_wrapped(sub)}"
        case All(sub):
            return "A " + _wrapped(sub)
        case Exists(sub):
            return "E " + _wrapped(sub)
        case Believes(a, b, sub):
            return f"B[{a},{b}] {_wrapped(sub)}"
        case Knows(a, b, sub):
            return f"K[{a},{b}] {_wrapped(sub)}"
    raise TypeError(f"not a formula: {f!r}")


@lru_cache(maxsize=None)
def expand(f: Formula) -> Formula:
    """Rewrite derived operators into the core fragment."""
    match f:
        case Prop() | Top() | Bot():
            return f
        case Not(sub):
            return Not(expand(sub))
        case And(left, right):
            return And(expand(left), expand(right))
        case Or(left, right):
            return Not(And(Not(expand(left)), Not(expand(right))))
        case Implies(left, right):
            return Not(And(expand(left), Not(expand(right))))
        case For(lit, sub):
            return For(lit, expand(sub))
        case Box(sub):
            return Box(expand(sub))
        case Dia(sub):
            return Not(Box(Not(expand(sub))))
        case BoxFor(lit, sub):
            core = expand(sub)
            return And(For(lit, core), Box(core))
        case DiaFor(lit, sub):
            return Not(expand(BoxFor(lit, Not(sub))))
        case All(sub):
            return All(expand(sub))
        case Exists(sub):
            return Not(All(Not(expand(sub))))
        case Believes(a, b, sub):
            return All(expand(DiaFor(b, BoxFor(a, sub))))
        case Knows(a, b, sub):
            return And(expand(BoxFor(a, sub)), expand(Believes(a, b, sub)))
    raise TypeError(f"not a formula: {f!r}")


def _core_depth(f: Formula) -> int:
    match f:
        case Prop() | Top() | Bot():
            return 0
        case Not(sub):
            return _core_depth(sub)
        case And(left, right):
            return max(_core_depth(left), _core_depth(right))
        case For(_, sub) | Box(sub) | All(sub):
            return 1 + _core_depth(sub)
    raise TypeError(f"not a core formula: {f!r}")


def modal_depth(f: Formula) -> int:
    """Nesting depth of modal operators after expansion."""
    return _core_depth(expand(f))


def is_core(f: Formula) -> bool:
    return isinstance(f, (Prop, Top, Bot)) or (
        isinstance(f, Not) and is_core(f.sub)) or (
        isinstance(f, And) and is_core(f.left) and is_core(f.right)) or (
        isinstance(f, (For, Box, All)) and is_core(f.sub))


def is_global_free(f: Formula) -> bool:
    """True for formulas in the base language (no global modality)."""
    g = expand(f)
    match g:
        case Prop() | Top() | Bot():
            return True
        case Not(sub) | For(_, sub) | Box(sub):
            return is_global_free(sub)
        case And(left, right):
            return is_global_free(left) and is_global_free(right)
        case All(_):
            return False
    raise TypeError


def enumerate_formulas(vars, lits, depth, max_size=6, include_global=False, limit=100_000):
    """All core formulas up to the given modal depth and node count.

    Yields deterministically by increasing size, deduplicated up to
    structural equality; raises BudgetError past `limit` formulas.
    """
    if depth < 0 or max_size < 1:
        raise ValueError("depth and max_size must be nonnegative/positive")
    atom_layer = [(Top(), 0), (Bot(), 0)] + [(Prop(v), 0) for v in sorted(vars)]
    lit_list = sorted(lits, key=str)
    sized = {1: atom_layer}
    count = 0
    for f, _ in atom_layer:
        count += 1
        if count > limit:
            raise BudgetError("formula enumeration over budget", partial=count - 1)
        yield f
    for size in range(2, max_size + 1):
        layer = []
        for sub, d in sized[size - 1]:
            layer.append((Not(sub), d))
            if d < depth:
                layer.append((Box(sub), d + 1))
                for lit in lit_list:
                    layer.append((For(lit, sub), d + 1))
                if include_global:
                    layer.append((All(sub), d + 1))
        for lsize in range(1, size - 1):
            rsize = size - 1 - lsize
            if rsize < 1:
                continue
            for left, dl in sized[lsize]:
                for right, dr in sized[rsize]:
                    layer.append((And(left, right), max(dl, dr)))
        seen = set()
        deduped = []
        for f, d in layer:
            if f not in seen:
                seen.add(f)
                deduped.append((f, d))
                count += 1
                if count > limit:
                    raise BudgetError("formula enumeration over budget", partial=count - 1)
                yield f
        sized[size] = deduped
