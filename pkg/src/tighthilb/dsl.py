"""A small script language for rings, ideals, maps and analysis jobs.

    ring R = poly(F3, [x, y, z, w]) / ideal(x*z, x*w, y*z, y*w);
    ring T = monomial_subring(F3, [a, b, c, d], [x^4, x^3*y, x*y^3, y^4]);
    ideal Q = (x + z, y + w) in R;
    map phi : T -> S = [A, B, D, E];
    assert standard_sop Q;
    assert ass_primes R = [P1, P2];
    analyze Q --depth 8 --emax 3 --test-element x + z --out "report.json";

The parser is hand-written recursive descent.  Every node remembers the
line and column it started at, and errors carry that position.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

from .errors import (
    ArityError,
    CharacteristicMismatch,
    DslSyntaxError,
    NotPrime,
    TightHilbError,
    UndefinedIdentifier,
)
from .gfp import PolyRing, Polynomial, PrimeField, is_prime
from .ideals import PresentedRing, RingIdeal, RingMap, toric_presentation

JACOBIAN = "jacobian"
ASSERTION_KINDS = ("standard_sop", "test_element_generators", "ass_primes")
KEYWORDS = {"ring", "ideal", "map", "assert", "analyze", "in", "poly", "monomial_subring", JACOBIAN}


@dataclass(frozen=True)
class Span:
    line: int
    col: int

    def __str__(self):
        return f"{self.line}:{self.col}"


NOWHERE = Span(0, 0)


def _span():
    return field(default=NOWHERE, compare=False, repr=False)


# -- expressions ------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    span: Span = _span()


@dataclass(frozen=True)
class Var:
    name: str
    span: Span = _span()


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span = _span()


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    span: Span = _span()


Expr = Union[Num, Var, Neg, BinOp, Pow]


def expr_vars(e: Expr) -> Iterator[Var]:
    if isinstance(e, Var):
        yield e
    elif isinstance(e, Neg):
        yield from expr_vars(e.operand)
    elif isinstance(e, BinOp):
        yield from expr_vars(e.left)
        yield from expr_vars(e.right)
    elif isinstance(e, Pow):
        yield from expr_vars(e.base)


def evaluate(e: Expr, ring: PolyRing) -> Polynomial:
    if isinstance(e, Num):
        return ring.constant(e.value)
    if isinstance(e, Var):
        return ring.var(e.name)
    if isinstance(e, Neg):
        return -evaluate(e.operand, ring)
    if isinstance(e, Pow):
        return evaluate(e.base, ring) ** e.exponent
    a, b = evaluate(e.left, ring), evaluate(e.right, ring)
    return a + b if e.op == "+" else a - b if e.op == "-" else a * b


# -- statements -------------------------------------------------------------------


@dataclass(frozen=True)
class RingDef:
    name: str
    p: int
    variables: Tuple[str, ...]
    relations: Tuple[Expr, ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class SubringDef:
    name: str
    p: int
    generators: Tuple[str, ...]
    monomials: Tuple[Expr, ...]
    span: Span = _span()


@dataclass(frozen=True)
class IdealDef:
    name: str
    generators: Tuple[Expr, ...]
    ring: str
    span: Span = _span()


@dataclass(frozen=True)
class MapDef:
    name: str
    source: str
    target: str
    images: Tuple[Expr, ...]
    span: Span = _span()


@dataclass(frozen=True)
class Assertion:
    kind: str
    target: str
    primes: Tuple[str, ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class Analyze:
    ideal: str
    depth: Optional[int] = None
    emax: Optional[int] = None
    window: Optional[int] = None
    test_element: Union[Expr, str, None] = None
    extension: Optional[str] = None
    out: Optional[str] = None
    csv: Optional[str] = None
    span: Span = _span()


Statement = Union[RingDef, SubringDef, IdealDef, MapDef, Assertion, Analyze]


@dataclass(frozen=True)
class Script:
    statements: Tuple[Statement, ...]


# -- lexer ------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<path>[A-Za-z0-9_]+(?:\.[A-Za-z0-9_]+)+)
  | (?P<option>--[A-Za-z][A-Za-z-]*)
  | (?P<arrow>->)
  | (?P<number>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[=;:,()\[\]/+\-*^])
    """,
    re.VERBOSE,
)


def tokenize(source: str) -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        span = Span(line, pos - line_start + 1)
        if not m:
            raise DslSyntaxError(f"unexpected character {source[pos]!r}").at(span.line, span.col)
        kind, text = m.lastgroup, m.group()
        pos = m.end()
        if kind == "nl":
            line, line_start = line + 1, pos
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, text, span))
    tokens.append(Token("eof", "", Span(line, pos - line_start + 1)))
    return tokens


# -- parser -----------------------------------------------------------------------


class Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Optional[Token] = None) -> DslSyntaxError:
        t = tok or self.tok
        found = t.text or "end of input"
        return DslSyntaxError(f"{msg} (found {found!r})").at(t.span.line, t.span.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("punct", "arrow", "ident")

    def take(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def name(self, what: str = "identifier") -> Token:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise self.error(f"expected {what}")
        return self.advance()

    def integer(self) -> int:
        if self.tok.kind != "number":
            raise self.error("expected an integer")
        return int(self.advance().text)

    def listing(self, open_: str, close: str, item):
        self.take(open_)
        out = []
        if not self.at(close):
            out.append(item())
            while self.at(","):
                self.advance()
                out.append(item())
        self.take(close)
        return tuple(out)

    # script
    def script(self) -> Script:
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.statement())
        return Script(tuple(stmts))

    def statement(self) -> Statement:
        t = self.tok
        handlers = {
            "ring": self.ring_def,
            "ideal": self.ideal_def,
            "map": self.map_def,
            "assert": self.assertion,
            "analyze": self.analyze,
        }
        if t.kind != "ident" or t.text not in handlers:
            raise self.error("expected a statement (ring, ideal, map, assert or analyze)")
        self.advance()
        stmt = handlers[t.text](t.span)
        self.take(";")
        return stmt

    def field_char(self) -> int:
        t = self.tok
        m = re.fullmatch(r"F([0-9]+)", t.text) if t.kind == "ident" else None
        if not m:
            raise self.error("expected a prime field such as F3")
        self.advance()
        p = int(m.group(1))
        if not is_prime(p):
            raise NotPrime(f"F{p}: {p} is not prime").at(t.span.line, t.span.col)
        return p

    def ring_def(self, span: Span) -> Statement:
        name = self.name("ring name").text
        self.take("=")
        kind = self.advance()
        if kind.text == "poly":
            self.take("(")
            p = self.field_char()
            self.take(",")
            names = tuple(t.text for t in self.listing("[", "]", self.name))
            self.take(")")
            rels: Tuple[Expr, ...] = ()
            if self.at("/"):
                self.advance()
                self.take("ideal")
                rels = self.listing("(", ")", self.expr)
            return RingDef(name, p, names, rels, span)
        if kind.text == "monomial_subring":
            self.take("(")
            p = self.field_char()
            self.take(",")
            names = tuple(t.text for t in self.listing("[", "]", self.name))
            self.take(",")
            monos = self.listing("[", "]", self.expr)
            self.take(")")
            return SubringDef(name, p, names, monos, span)
        raise self.error("expected poly(...) or monomial_subring(...)", kind)

    def ideal_def(self, span: Span) -> IdealDef:
        name = self.name("ideal name").text
        self.take("=")
        gens = self.listing("(", ")", self.expr)
        self.take("in")
        return IdealDef(name, gens, self.ring_ref(), span)

    def ring_ref(self) -> str:
        return self.name("ring name").text

    def map_def(self, span: Span) -> MapDef:
        name = self.name("map name").text
        self.take(":")
        src = self.ring_ref()
        self.take("->")
        tgt = self.ring_ref()
        self.take("=")
        return MapDef(name, src, tgt, self.listing("[", "]", self.expr), span)

    def assertion(self, span: Span) -> Assertion:
        kind = self.tok
        if kind.text not in ASSERTION_KINDS:
            raise self.error("expected " + ", ".join(ASSERTION_KINDS))
        self.advance()
        target = self.name().text
        primes: Tuple[str, ...] = ()
        if kind.text == "ass_primes":
            self.take("=")
            primes = tuple(t.text for t in self.listing("[", "]", self.name))
        return Assertion(kind.text, target, primes, span)

    def analyze(self, span: Span) -> Analyze:
        ideal = self.name("ideal name").text
        opts: Dict[str, object] = {}
        while self.tok.kind == "option":
            opt = self.advance()
            key = opt.text[2:]
            if key in opts:
                raise self.error(f"option {opt.text} given twice", opt)
            if key in ("depth", "emax", "window"):
                opts[key] = self.integer()
            elif key == "test-element":
                nxt = self.tokens[self.i + 1]
                if self.tok.text == JACOBIAN and (nxt.kind in ("option", "eof") or nxt.text == ";"):
                    opts["test_element"] = self.advance().text
                else:
                    opts["test_element"] = self.expr()
            elif key == "extension":
                opts[key] = self.name("map name").text
            elif key in ("out", "csv"):
                opts[key] = self.path()
            else:
                raise self.error(f"unknown option {opt.text}", opt)
        return Analyze(ideal, span=span, **opts)

    def path(self) -> str:
        t = self.tok
        if t.kind == "string":
            self.advance()
            return json.loads(t.text)
        if t.kind in ("path", "ident"):
            self.advance()
            return t.text
        raise self.error("expected a file path")

    # expressions: expr := term (('+'|'-') term)*, term := unary ('*' unary)*,
    # unary := '-' unary | power, power := atom ('^' INT)?
    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind == "punct" and self.tok.text in "+-":
            op = self.advance()
            left = BinOp(op.text, left, self.term(), left.span)
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at("*"):
            self.advance()
            left = BinOp("*", left, self.unary(), left.span)
        return left

    def unary(self) -> Expr:
        if self.at("-"):
            t = self.advance()
            return Neg(self.unary(), t.span)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at("^"):
            self.advance()
            return Pow(base, self.integer(), base.span)
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "number":
            self.advance()
            return Num(int(t.text), t.span)
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.advance()
            return Var(t.text, t.span)
        if self.at("("):
            self.advance()
            e = self.expr()
            self.take(")")
            return e
        raise self.error("expected an expression")


def parse(source: str, resolve: bool = True) -> Script:
    """Parse a script; with ``resolve`` also check names and characteristics."""
    script = Parser(source).script()
    if resolve:
        check_script(script)
    return script


# -- printer ----------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2}


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    return 5


def format_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        inner = format_expr(e.operand)
        return f"-({inner})" if _prec(e.operand) < 3 or isinstance(e.operand, Neg) else f"-{inner}"
    if isinstance(e, Pow):
        base = format_expr(e.base)
        return f"({base})^{e.exponent}" if _prec(e.base) < 5 else f"{base}^{e.exponent}"
    p = _PREC[e.op]
    left = format_expr(e.left)
    right = format_expr(e.right)
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left}*{right}" if e.op == "*" else f"{left} {e.op} {right}"


def _exprs(es) -> str:
    return ", ".join(format_expr(e) for e in es)


def format_statement(s: Statement) -> str:
    if isinstance(s, RingDef):
        head = f"ring {s.name} = poly(F{s.p}, [{', '.join(s.variables)}])"
        return head + (f" / ideal({_exprs(s.relations)});" if s.relations else ";")
    if isinstance(s, SubringDef):
        return (f"ring {s.name} = monomial_subring(F{s.p}, [{', '.join(s.generators)}], "
                f"[{_exprs(s.monomials)}]);")
    if isinstance(s, IdealDef):
        return f"ideal {s.name} = ({_exprs(s.generators)}) in {s.ring};"
    if isinstance(s, MapDef):
        return f"map {s.name} : {s.source} -> {s.target} = [{_exprs(s.images)}];"
    if isinstance(s, Assertion):
        tail = f" = [{', '.join(s.primes)}]" if s.kind == "ass_primes" else ""
        return f"assert {s.kind} {s.target}{tail};"
    parts = [f"analyze {s.ideal}"]
    for key in ("depth", "emax", "window"):
        if getattr(s, key) is not None:
            parts.append(f"--{key} {getattr(s, key)}")
    if s.test_element is not None:
        te = s.test_element if isinstance(s.test_element, str) else format_expr(s.test_element)
        parts.append(f"--test-element {te}")
    if s.extension is not None:
        parts.append(f"--extension {s.extension}")
    for key in ("out", "csv"):
        if getattr(s, key) is not None:
            parts.append(f"--{key} {json.dumps(getattr(s, key))}")
    return " ".join(parts) + ";"


def format_script(script: Script) -> str:
    return "".join(format_statement(s) + "\n" for s in script.statements)


# -- name resolution --------------------------------------------------------------


def _fail(exc: TightHilbError, span: Span) -> TightHilbError:
    return exc.at(span.line, span.col)


def _monomial_exponents(e: Expr) -> Dict[str, int]:
    """Exponents of a coefficient-1 monomial expression such as x^3*y."""
    if isinstance(e, Var):
        return {e.name: 1}
    if isinstance(e, Pow):
        return {k: v * e.exponent for k, v in _monomial_exponents(e.base).items()}
    if isinstance(e, BinOp) and e.op == "*":
        out = _monomial_exponents(e.left)
        for k, v in _monomial_exponents(e.right).items():
            out[k] = out.get(k, 0) + v
        return out
    raise DslSyntaxError("monomial_subring generators must be monomials like x^3*y").at(
        e.span.line, e.span.col
    )


def _subring_sources(s: SubringDef) -> List[str]:
    names: List[str] = []
    for m in s.monomials:
        for v in expr_vars(m):
            if v.name not in names:
                names.append(v.name)
    return names


def check_script(script: Script) -> Dict[str, Tuple[str, object]]:
    """Resolve identifiers; returns the symbol table name -> (kind, info)."""
    table: Dict[str, Tuple[str, object]] = {}
    p0: Optional[int] = None

    def define(name: str, kind: str, info, span: Span):
        if name in table:
            raise _fail(DslSyntaxError(f"{name} is already defined"), span)
        table[name] = (kind, info)

    def lookup(name: str, kind: str, span: Span):
        entry = table.get(name)
        if entry is None:
            raise _fail(UndefinedIdentifier(f"undefined {kind} {name!r}"), span)
        if entry[0] != kind:
            raise _fail(UndefinedIdentifier(f"{name!r} is a {entry[0]}, not a {kind}"), span)
        return entry[1]

    def check_vars(exprs, variables, span_default: Span):
        for e in exprs:
            for v in expr_vars(e):
                if v.name not in variables:
                    raise _fail(UndefinedIdentifier(f"undefined variable {v.name!r}"),
                                v.span if v.span != NOWHERE else span_default)

    def check_char(p: int, span: Span):
        nonlocal p0
        if not is_prime(p):
            raise _fail(NotPrime(f"F{p}: {p} is not prime"), span)
        if p0 is None:
            p0 = p
        elif p != p0:
            raise _fail(CharacteristicMismatch(f"F{p} differs from F{p0} used earlier"), span)

    for s in script.statements:
        if isinstance(s, RingDef):
            check_char(s.p, s.span)
            if len(set(s.variables)) != len(s.variables):
                raise _fail(DslSyntaxError(f"repeated variable in ring {s.name}"), s.span)
            check_vars(s.relations, s.variables, s.span)
            define(s.name, "ring", s.variables, s.span)
        elif isinstance(s, SubringDef):
            check_char(s.p, s.span)
            if len(s.generators) != len(s.monomials):
                raise _fail(ArityError(
                    f"{len(s.generators)} generator names for {len(s.monomials)} monomials"), s.span)
            for m in s.monomials:
                _monomial_exponents(m)
            define(s.name, "ring", s.generators, s.span)
        elif isinstance(s, IdealDef):
            variables = lookup(s.ring, "ring", s.span)
            check_vars(s.generators, variables, s.span)
            define(s.name, "ideal", s.ring, s.span)
        elif isinstance(s, MapDef):
            src = lookup(s.source, "ring", s.span)
            tgt = lookup(s.target, "ring", s.span)
            if len(s.images) != len(src):
                raise _fail(ArityError(f"map {s.name} needs {len(src)} images"), s.span)
            check_vars(s.images, tgt, s.span)
            define(s.name, "map", (s.source, s.target), s.span)
        elif isinstance(s, Assertion):
            if s.kind == "ass_primes":
                lookup(s.target, "ring", s.span)
                for P in s.primes:
                    if lookup(P, "ideal", s.span) != s.target:
                        raise _fail(UndefinedIdentifier(f"{P} is not an ideal of {s.target}"), s.span)
            else:
                lookup(s.target, "ideal", s.span)
        elif isinstance(s, Analyze):
            ring = lookup(s.ideal, "ideal", s.span)
            if s.extension is not None:
                src, _ = lookup(s.extension, "map", s.span)
                if src != ring:
                    raise _fail(UndefinedIdentifier(
                        f"map {s.extension} does not start at {ring}"), s.span)
            if s.test_element is not None and not isinstance(s.test_element, str):
                check_vars([s.test_element], table[ring][1], s.span)
    return table


# -- evaluation ---------------------------------------------------------------------


@dataclass
class Environment:
    rings: Dict[str, PresentedRing] = field(default_factory=dict)
    ideals: Dict[str, RingIdeal] = field(default_factory=dict)
    maps: Dict[str, RingMap] = field(default_factory=dict)
    assumptions: Dict[str, Dict[str, bool]] = field(default_factory=dict)
    ass_primes: Dict[str, List[RingIdeal]] = field(default_factory=dict)
    jobs: List[Analyze] = field(default_factory=list)

    def ring_of(self, ideal: str) -> PresentedRing:
        return self.ideals[ideal].ring


def build(script: Script) -> Environment:
    """Construct the rings, ideals and maps a checked script describes."""
    check_script(script)
    env = Environment()
    for s in script.statements:
        try:
            _build_statement(env, s)
        except TightHilbError as exc:
            if exc.line is None:
                exc.at(s.span.line, s.span.col)
            raise
    return env


def _build_statement(env: Environment, s: Statement):
    if isinstance(s, RingDef):
        amb = PolyRing(PrimeField(s.p), s.variables)
        env.rings[s.name] = PresentedRing(amb, [evaluate(e, amb) for e in s.relations], s.name)
    elif isinstance(s, SubringDef):
        sources = _subring_sources(s)
        exps = []
        for m in s.monomials:
            powers = _monomial_exponents(m)
            exps.append(tuple(powers.get(v, 0) for v in sources))
        env.rings[s.name] = toric_presentation(PrimeField(s.p), exps, s.generators, sources, s.name)
    elif isinstance(s, IdealDef):
        R = env.rings[s.ring]
        env.ideals[s.name] = R.ideal([evaluate(e, R.ambient) for e in s.generators])
    elif isinstance(s, MapDef):
        R, S = env.rings[s.source], env.rings[s.target]
        env.maps[s.name] = RingMap(R, S, tuple(evaluate(e, S.ambient) for e in s.images))
    elif isinstance(s, Assertion):
        if s.kind == "ass_primes":
            env.ass_primes[s.target] = [env.ideals[P] for P in s.primes]
        else:
            env.assumptions.setdefault(s.target, {})[s.kind] = True
    elif isinstance(s, Analyze):
        env.jobs.append(s)
