"""Concrete syntax: lexer, parser, pretty-printer, and definition files.

Grammar:

    term  := lam | app
    lam   := ("\\" | "λ") ident+ "." term
    app   := atom atom*                       (left-associative)
    atom  := ident | "#" nat | konst | "(" term ")"
    konst := ("x" | "X") "[" nat (";" term ("," term)*)? "]"
    ident := letter (letter | digit | "_" | "'")*

"#" followed by a digit is a Church numeral literal; "#" followed by
anything else opens a line comment.  Identifiers resolve to the innermost
lambda binder, then to a binding from the environment (spliced verbatim),
and otherwise stand for a free variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .terms import App, Const, Family, Lam, Term, Var, church_value, mk_church


class ParseError(Exception):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.pos = pos
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - text.rfind("\n", 0, pos)
        super().__init__(f"{message} (line {self.line}, column {self.column})")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>\#(?![0-9])[^\n]*)
      | (?P<church>\#[0-9]+)
      | (?P<nat>[0-9]+)
      | (?P<ident>[A-Za-z][A-Za-z0-9_']*)
      | (?P<lam>\\|λ)
      | (?P<punct>[()\[\];,.=])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup or ""
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


def _as_env(env) -> dict[str, Term]:
    if env is None:
        return {}
    if isinstance(env, Mapping):
        return dict(env)
    return {b.name: b.value for b in env}


class _Parser:
    def __init__(self, text: str, tokens: list[Token], env: dict[str, Term]):
        self.text = text
        self.tokens = tokens
        self.env = env
        self.i = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def expect(self, kind: str, value: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, found {tok.value or 'end of input'!r}",
                             self.text, tok.pos)
        return self.advance()

    def at_atom(self) -> bool:
        tok = self.peek()
        return tok.kind in ("ident", "church") or (tok.kind == "punct" and tok.value == "(")

    def parse_term(self, bound: frozenset[str]) -> Term:
        tok = self.peek()
        if tok.kind == "lam":
            self.advance()
            binders = [self.expect("ident").value]
            while self.peek().kind == "ident":
                binders.append(self.advance().value)
            self.expect("punct", ".")
            body = self.parse_term(bound | set(binders))
            for b in reversed(binders):
                body = Lam(b, body)
            return body
        return self.parse_app(bound)

    def parse_app(self, bound: frozenset[str]) -> Term:
        if not self.at_atom():
            tok = self.peek()
            raise ParseError(f"expected a term, found {tok.value or 'end of input'!r}",
                             self.text, tok.pos)
        term = self.parse_atom(bound)
        while self.at_atom():
            term = App(term, self.parse_atom(bound))
        return term

    def parse_atom(self, bound: frozenset[str]) -> Term:
        tok = self.peek()
        if tok.kind == "church":
            self.advance()
            return mk_church(int(tok.value[1:]))
        if tok.kind == "punct" and tok.value == "(":
            self.advance()
            term = self.parse_term(bound)
            self.expect("punct", ")")
            return term
        if tok.kind == "ident":
            nxt = self.peek(1)
            if tok.value in ("x", "X") and nxt.kind == "punct" and nxt.value == "[":
                return self.parse_const(bound)
            self.advance()
            if tok.value in bound:
                return Var(tok.value)
            if tok.value in self.env:
                return self.env[tok.value]
            return Var(tok.value)
        raise ParseError(f"expected a term, found {tok.value or 'end of input'!r}",
                         self.text, tok.pos)

    def parse_const(self, bound: frozenset[str]) -> Term:
        fam_tok = self.expect("ident")
        family = Family.LOWER if fam_tok.value == "x" else Family.UPPER
        self.expect("punct", "[")
        level = int(self.expect("nat").value)
        payload: list[Term] = []
        if self.peek().kind == "punct" and self.peek().value == ";":
            self.advance()
            payload.append(self.parse_term(bound))
            while self.peek().kind == "punct" and self.peek().value == ",":
                self.advance()
                payload.append(self.parse_term(bound))
        close = self.expect("punct", "]")
        if len(payload) == 1:
            raise ParseError("a stored constant needs at least two payload terms",
                             self.text, close.pos)
        return Const(family, level, tuple(payload))


def parse(text: str, env: Mapping[str, Term] | Iterable | None = None) -> Term:
    """Parse a single term; env maps names to terms spliced on use."""
    tokens = tokenize(text)
    parser = _Parser(text, tokens, _as_env(env))
    term = parser.parse_term(frozenset())
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"unexpected trailing input {tok.value!r}", text, tok.pos)
    return term


@dataclass(frozen=True)
class Binding:
    name: str
    value: Term


def parse_defs(text: str, env: Mapping[str, Term] | Iterable | None = None) -> list[Binding]:
    """Parse a definition file: `def name = term ;` statements.

    Later definitions see earlier ones (and the supplied env); a repeated
    name shadows the previous binding from that point on.
    """
    tokens = tokenize(text)
    scope = _as_env(env)
    bindings: list[Binding] = []
    i = 0
    while tokens[i].kind != "eof":
        if not (tokens[i].kind == "ident" and tokens[i].value == "def"):
            raise ParseError("expected 'def'", text, tokens[i].pos)
        i += 1
        if tokens[i].kind != "ident":
            raise ParseError("expected a name after 'def'", text, tokens[i].pos)
        name = tokens[i].value
        i += 1
        if not (tokens[i].kind == "punct" and tokens[i].value == "="):
            raise ParseError("expected '='", text, tokens[i].pos)
        i += 1
        depth = 0
        j = i
        while True:
            tok = tokens[j]
            if tok.kind == "eof":
                raise ParseError(f"missing ';' after definition of {name!r}", text, tok.pos)
            if tok.kind == "punct" and tok.value == "[":
                depth += 1
            elif tok.kind == "punct" and tok.value == "]":
                depth -= 1
            elif tok.kind == "punct" and tok.value == ";" and depth == 0:
                break
            j += 1
        body_tokens = tokens[i:j] + [Token("eof", "", tokens[j].pos)]
        if body_tokens[0].kind == "eof":
            raise ParseError(f"empty definition of {name!r}", text, tokens[j].pos)
        parser = _Parser(text, body_tokens, dict(scope))
        value = parser.parse_term(frozenset())
        tok = parser.peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected trailing input {tok.value!r}", text, tok.pos)
        scope[name] = value
        bindings.append(Binding(name, value))
        i = j + 1
    return bindings


def load_defs(path: str, env: Mapping[str, Term] | Iterable | None = None) -> list[Binding]:
    with open(path, encoding="utf-8") as handle:
        return parse_defs(handle.read(), env)


def pretty(term: Term) -> str:
    """Minimal-parenthesis rendering; re-parsing gives an alpha-equal term.

    Church numerals print as #n and lambda prefixes collapse to one
    backslash with multiple binders.
    """
    return _pp(term, "top")


def _pp(term: Term, pos: str) -> str:
    n = church_value(term)
    if n is not None:
        return f"#{n}"
    match term:
        case Var(name):
            return name
        case Const(family, level, payload):
            if not payload:
                return f"{family.value}[{level}]"
            inner = ", ".join(_pp(p, "top") for p in payload)
            return f"{family.value}[{level}; {inner}]"
        case Lam(_, _):
            binders = []
            body = term
            while isinstance(body, Lam) and church_value(body) is None:
                binders.append(body.binder)
                body = body.body
            out = "\\" + " ".join(binders) + ". " + _pp(body, "top")
            return out if pos == "top" else "(" + out + ")"
        case App(fn, arg):
            out = _pp(fn, "fn") + " " + _pp(arg, "arg")
            return out if pos != "arg" else "(" + out + ")"
    raise TypeError(f"not a term: {term!r}")
