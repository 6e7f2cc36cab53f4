"""Reader and canonical printer for ``.alg`` presentation files.

Statements end with ';'.  ``#`` starts a comment.

    gens x:1 y:1;
    order deglex x < y;
    param q = 2;
    rel y*x - q*x*y;

``*`` is noncommutative concatenation, ``/`` divides by a nonzero scalar and
``^`` raises to a nonnegative integer power.  Parameters are substituted before any relation is checked.
``param a;`` without a value must be supplied through ``overrides``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from gmpy2 import mpq

from .freealg import FreePoly, GeneratorSet, OrderSpec, Presentation, Q


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, source: str = "<text>"):
        self.message, self.line, self.col, self.source = message, line, col, source
        where = f"{source}:{line}:{col}: " if line else f"{source}: "
        super().__init__(where + message)


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*) |
    (?P<num>\d+(?:/\d+)?) | (?P<ident>[A-Za-z_][A-Za-z0-9_]*) |
    (?P<sym>[*/+\-()^;:<=])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, source="<text>") -> list:
    out, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1, source)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    return out


@dataclass
class AlgebraFile:
    presentation: Presentation
    params: dict
    source: str = "<text>"
    relation_lines: list = field(default_factory=list)


class _Parser:
    def __init__(self, tokens, source, overrides):
        self.toks = tokens
        self.i = 0
        self.source = source
        self.overrides = {k: Q(v) for k, v in (overrides or {}).items()}
        self.gens = None
        self.order_names = None
        self.order_tok = None
        self.params = {}
        self.pending = set()
        self.rels = []      # (FreePoly, token)
        self.name = None

    def error(self, msg, tok=None):
        tok = tok or (self.toks[self.i] if self.i < len(self.toks) else
                      (self.toks[-1] if self.toks else Token("eof", "", 0, 0)))
        raise ParseError(msg, tok.line, tok.col, self.source)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind=None, text=None):
        t = self.peek()
        if t is None:
            self.error("unexpected end of input")
        if (kind and t.kind != kind) or (text and t.text != text):
            self.error(f"expected {text or kind}, found {t.text!r}", t)
        self.i += 1
        return t

    def parse(self) -> AlgebraFile:
        while self.peek() is not None:
            kw = self.take("ident")
            handler = getattr(self, f"stmt_{kw.text}", None)
            if handler is None:
                self.error(f"unknown statement {kw.text!r}", kw)
            handler(kw)
            self.take("sym", ";")
        if self.gens is None:
            self.error("missing 'gens' statement")
        for name in sorted(self.pending):
            if name not in self.overrides:
                raise ParseError(f"parameter {name!r} unresolved", 0, 0, self.source)
        if self.order_names is None:
            order = OrderSpec.deglex(self.gens)
        else:
            order = OrderSpec.deglex(self.gens, self.order_names)
        rels = []
        for f, tok in self.rels:
            rels.append(f)
        try:
            pres = Presentation(self.gens, rels, order, self.name or "A", dict(self.params))
        except ValueError as e:
            bad = next((tok for f, tok in self.rels if not f or not f.is_homogeneous()
                        or (f.degree or 0) < 2), None)
            self.error(str(e), bad)
        return AlgebraFile(pres, dict(self.params), self.source, [t.line for _, t in self.rels])

    def stmt_name(self, kw):
        self.name = self.take("ident").text

    def stmt_gens(self, kw):
        if self.gens is not None:
            self.error("'gens' given twice", kw)
        names, weights = [], []
        while self.peek() is not None and self.peek().kind == "ident":
            t = self.take("ident")
            if t.text in names:
                self.error(f"generator {t.text!r} declared twice", t)
            w = 1
            if self.peek() is not None and self.peek().text == ":":
                self.take("sym", ":")
                wt = self.take("num")
                w = int(wt.text) if "/" not in wt.text else 0
                if w < 1:
                    self.error("weights must be positive integers", wt)
            names.append(t.text)
            weights.append(w)
        if not names:
            self.error("'gens' needs at least one generator", kw)
        self.gens = GeneratorSet(names, weights)

    def stmt_order(self, kw):
        if self.gens is None:
            self.error("'order' must follow 'gens'", kw)
        kind = self.take("ident")
        if kind.text != "deglex":
            self.error(f"unsupported order {kind.text!r}; only deglex is available", kind)
        names = [self.take("ident")]
        while self.peek() is not None and self.peek().text == "<":
            self.take("sym", "<")
            names.append(self.take("ident"))
        for t in names:
            if t.text not in self.gens.index:
                self.error(f"unknown generator {t.text!r}", t)
        if sorted(t.text for t in names) != sorted(self.gens.names):
            self.error("order must list every generator exactly once", kind)
        self.order_names = [t.text for t in names]
        self.order_tok = kind

    def stmt_param(self, kw):
        t = self.take("ident")
        if self.gens is not None and t.text in self.gens.index:
            self.error(f"{t.text!r} is already a generator", t)
        if self.peek() is not None and self.peek().text == "=":
            self.take("sym", "=")
            neg = False
            if self.peek() is not None and self.peek().text == "-":
                self.take("sym", "-")
                neg = True
            v = Q(self.take("num").text)
            value = -v if neg else v
        else:
            self.pending.add(t.text)
            value = None
        if t.text in self.overrides:
            value = self.overrides[t.text]
            self.pending.discard(t.text)
        if value is not None:
            self.params[t.text] = value

    def stmt_rel(self, kw):
        if self.gens is None:
            self.error("'rel' must follow 'gens'", kw)
        start = self.peek()
        f = self.expr()
        if not f:
            self.error("zero relation", start)
        if not f.is_homogeneous():
            self.error(f"inhomogeneous relation (degrees {sorted(f.degrees)})", start)
        if f.degree < 2:
            self.error("relations must have degree at least 2", start)
        self.rels.append((f, start))

    # expr := ['-'] term (('+'|'-') term)*; term := power (('*'|'/') power)*
    def expr(self) -> FreePoly:
        sign = 1
        if self.peek() is not None and self.peek().text in "+-" and self.peek().kind == "sym":
            sign = -1 if self.take().text == "-" else 1
        acc = self.term() * sign
        while self.peek() is not None and self.peek().text in ("+", "-"):
            op = self.take().text
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> FreePoly:
        acc = self.power()
        while self.peek() is not None and self.peek().text in ("*", "/"):
            op = self.take()
            rhs = self.power()
            if op.text == "*":
                acc = acc * rhs
                continue
            if set(rhs.terms) - {()}:
                self.error("can only divide by a scalar", op)
            if not rhs:
                self.error("division by zero", op)
            acc = acc * (1 / rhs.coeff(()))
        return acc

    def power(self) -> FreePoly:
        base = self.atom()
        if self.peek() is not None and self.peek().text == "^":
            self.take("sym", "^")
            e = self.take("num")
            if "/" in e.text:
                self.error("exponents must be nonnegative integers", e)
            base = base ** int(e.text)
        return base

    def atom(self) -> FreePoly:
        t = self.peek()
        if t is None:
            self.error("unexpected end of expression")
        if t.kind == "num":
            self.i += 1
            return self.gens.one() * Q(t.text)
        if t.kind == "ident":
            self.i += 1
            if t.text in self.gens.index:
                return self.gens.gen(t.text)
            if t.text in self.params:
                return self.gens.one() * self.params[t.text]
            if t.text in self.pending:
                self.error(f"parameter {t.text!r} unresolved", t)
            self.error(f"unknown identifier {t.text!r}", t)
        if t.text == "(":
            self.i += 1
            inner = self.expr()
            self.take("sym", ")")
            return inner
        if t.text == "-":
            self.i += 1
            return -self.atom()
        self.error(f"unexpected {t.text!r}", t)


def parse_algebra(text: str, overrides: dict | None = None, source: str = "<text>") -> AlgebraFile:
    return _Parser(tokenize(text, source), source, overrides).parse()


def read_algebra(path, overrides=None) -> AlgebraFile:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read(), overrides, str(path))


def print_algebra(af) -> str:
    """Canonical text; parameters appear as declarations, relations fully substituted."""
    p = af.presentation if isinstance(af, AlgebraFile) else af
    params = af.params if isinstance(af, AlgebraFile) else p.params
    lines = []
    if p.name and p.name != "A":
        lines.append(f"name {p.name};")
    lines.append("gens " + " ".join(f"{n}:{w}" for n, w in zip(p.gens.names, p.gens.weights)) + ";")
    lines.append("order deglex " + " < ".join(p.gens.names[i] for i in p.order.variable_permutation) + ";")
    for k in sorted(params):
        lines.append(f"param {k} = {mpq(params[k])};")
    for f in p.given_relations:
        lines.append(f"rel {f.format(p.order)};")
    return "\n".join(lines) + "\n"
