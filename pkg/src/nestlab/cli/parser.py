"""Line-oriented text format for algebras, embeddings, group maps and systems.

::

    algebra A = nest(2,2,2)
    embedding phi : A -> B = summands{ (1,1,2); (1,2,2) x2 }
    ghom g : A -> B = cell(1,1){ (1,1):2 } cell(1,2){ (1,2):2 }
    system S = A -phi-> B -psi-> C

``#`` starts a comment.  A statement runs until the next line that begins
with a keyword, so long ``ghom`` tables can be split over several lines.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..algebra import NestAlgebra
from ..embedding import Embedding, GHom
from ..errors import DuplicateName, GrammarError, NestlabError, UnknownReference
from ..pisom import GElement
from ..system import DirectSystem

_TOKEN = re.compile(r"(?P<arrow>->)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[=(),;{}:\-])")
_COUNT = re.compile(r"x(\d+)$")
KEYWORDS = ("algebra", "embedding", "ghom", "system")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class NamedMap:
    domain: str
    codomain: str
    value: object


@dataclass(frozen=True)
class NamedSystem:
    stages: tuple
    maps: tuple
    value: DirectSystem


@dataclass
class Workspace:
    algebras: dict = field(default_factory=dict)
    embeddings: dict = field(default_factory=dict)
    ghoms: dict = field(default_factory=dict)
    systems: dict = field(default_factory=dict)

    def names(self) -> set:
        return set(self.algebras) | set(self.embeddings) | set(self.ghoms) | set(self.systems)

    def algebra(self, name: str) -> NestAlgebra:
        return _get(self.algebras, name, "algebra")

    def embedding(self, name: str) -> Embedding:
        return _get(self.embeddings, name, "embedding").value

    def ghom(self, name: str) -> GHom:
        return _get(self.ghoms, name, "ghom").value

    def system(self, name: str) -> DirectSystem:
        return _get(self.systems, name, "system").value


def _get(table: dict, name: str, kind: str):
    if name not in table:
        raise UnknownReference(f"no {kind} named {name!r}")
    return table[name]


def tokenize(text: str) -> list[list[Token]]:
    """Split into statements, each a list of tokens."""
    statements, current, depth = [], [], 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        head = line.split(None, 1)[0] if line.strip() else None
        if current and depth == 0 and head in KEYWORDS:
            statements.append(current)
            current = []
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(line, pos)
            if not m:
                raise GrammarError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
            tok = Token(m.lastgroup, m.group(), lineno, pos + 1)
            if tok.text == "{":
                depth += 1
            elif tok.text == "}":
                depth -= 1
                if depth < 0:
                    raise GrammarError("unbalanced '}'", lineno, pos + 1)
            current.append(tok)
            pos = m.end()
    if depth > 0:
        last = current[-1]
        raise GrammarError("unterminated '{'", last.line, last.col)
    if current:
        statements.append(current)
    return statements


class _Stream:
    def __init__(self, tokens: list[Token]):
        self.tokens, self.i = tokens, 0

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _where(self):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1]
            return last.line, last.col + len(last.text)
        return tok.line, tok.col

    def fail(self, message: str):
        raise GrammarError(message, *self._where())

    def next(self, kind: str | None = None, text: str | None = None) -> Token:
        tok = self.peek()
        want = text or kind
        if tok is None:
            self.fail(f"expected {want!r} at end of statement")
        if (kind and tok.kind != kind) or (text and tok.text != text):
            self.fail(f"expected {want!r}, found {tok.text!r}")
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.text == text:
            self.i += 1
            return True
        return False

    def integer(self) -> int:
        return int(self.next("int").text)

    def int_tuple(self) -> tuple:
        self.next(text="(")
        values = [self.integer()]
        while self.accept(","):
            values.append(self.integer())
        self.next(text=")")
        return tuple(values)

    def done(self):
        if self.peek() is not None:
            self.fail(f"unexpected {self.peek().text!r}")


def parse(text: str) -> Workspace:
    ws = Workspace()
    for tokens in tokenize(text):
        _statement(ws, _Stream(tokens))
    return ws


def _statement(ws: Workspace, s: _Stream):
    head = s.next("name")
    if head.text not in KEYWORDS:
        raise GrammarError(f"unknown statement {head.text!r}", head.line, head.col)
    name = s.next("name")
    if name.text in ws.names():
        raise DuplicateName(f"{name.text!r} is already defined", name.line, name.col)
    try:
        {"algebra": _algebra, "embedding": _embedding, "ghom": _ghom, "system": _system}[head.text](ws, s, name.text)
    except (GrammarError, UnknownReference, DuplicateName):
        raise
    except NestlabError as exc:
        raise type(exc)(f"{head.line}:{head.col}: {exc}") from None


def _ref(ws: Workspace, s: _Stream, table: dict, kind: str) -> str:
    tok = s.next("name")
    if tok.text not in table:
        raise UnknownReference(f"no {kind} named {tok.text!r}", tok.line, tok.col)
    return tok.text


def _algebra(ws: Workspace, s: _Stream, name: str):
    s.next(text="=")
    s.next(text="nest")
    ranks = s.int_tuple()
    s.done()
    ws.algebras[name] = NestAlgebra(ranks)


def _signature(ws: Workspace, s: _Stream):
    s.next(text=":")
    dom = _ref(ws, s, ws.algebras, "algebra")
    s.next(text="->")
    cod = _ref(ws, s, ws.algebras, "algebra")
    s.next(text="=")
    return dom, cod


def _embedding(ws: Workspace, s: _Stream, name: str):
    dom, cod = _signature(ws, s)
    s.next(text="summands")
    s.next(text="{")
    summands = []
    while not s.accept("}"):
        f = s.int_tuple()
        count = 1
        tok = s.peek()
        if tok is not None and tok.kind == "name":
            m = _COUNT.match(tok.text)
            if not m or int(m.group(1)) < 1:
                s.fail(f"expected a count like 'x2', found {tok.text!r}")
            count = int(m.group(1))
            s.i += 1
        summands.extend([f] * count)
        if not s.accept(";"):
            s.next(text="}")
            break
    s.done()
    ws.embeddings[name] = NamedMap(dom, cod, Embedding(ws.algebras[dom], ws.algebras[cod], tuple(summands)))


def _ghom(ws: Workspace, s: _Stream, name: str):
    dom, cod = _signature(ws, s)
    X = {}
    C = ws.algebras[cod]
    while s.peek() is not None:
        s.next(text="cell")
        cell = s.int_tuple()
        if len(cell) != 2:
            s.fail("a cell has two atoms")
        s.next(text="{")
        entries = {}
        while not s.accept("}"):
            target = s.int_tuple()
            if len(target) != 2:
                s.fail("a cell has two atoms")
            s.next(text=":")
            entries[target] = entries.get(target, 0) + s.integer()
            if not s.accept(";"):
                s.next(text="}")
                break
        if cell in X:
            s.fail(f"cell {cell} given twice")
        X[cell] = GElement(C, entries)
    ws.ghoms[name] = NamedMap(dom, cod, GHom(ws.algebras[dom], C, X))


def _system(ws: Workspace, s: _Stream, name: str):
    s.next(text="=")
    stages = [_ref(ws, s, ws.algebras, "algebra")]
    maps = []
    while s.accept("-"):
        maps.append(_ref(ws, s, ws.embeddings, "embedding"))
        s.next(text="->")
        stages.append(_ref(ws, s, ws.algebras, "algebra"))
    s.done()
    value = DirectSystem(tuple(ws.algebras[a] for a in stages), tuple(ws.embeddings[m].value for m in maps))
    ws.systems[name] = NamedSystem(tuple(stages), tuple(maps), value)

