"""Text syntax for signatures, expressions, goals and model declarations.

Grammar (``#`` starts a comment; ``⊗``/``(x)``, ``⟨⟨..⟩⟩``/``sh[..]``,
``θ``/``theta`` and ``γ``/``gamma`` are interchangeable)::

    document  := decl*
    decl      := "0cell" NAME ("," NAME)* ";"
               | "1cell" NAME ("," NAME)* ":" NAME "->" NAME ";"
               | "2cell" NAME ":" word "=>" word ";"
               | "dualpair" [NAME ":"] "(" word "," word ")" ";"
               | "shadow" ";"
               | "symmetric" NAME ("," NAME)* ";"
               | "expr" NAME "=" expr ";"
               | "prove" NAME ":" expr "==" expr "by" "{" step* "}"
               | "search" NAME ":" expr "==" expr "budget" INT ["depth" INT] ";"
               | ("algebra" | "bimodule" | "group") NAME "=" (JSON | "file" STRING) ";"
               | "cover" NAME "=" NAME "/" STRING ";"
    word      := unit | NAME ("(x)" NAME)*          unit := "U" "[" NAME "]"
    expr      := hexpr (";" hexpr)*                 hexpr := factor ("(x)" factor)*
    factor    := "(" expr ")" | "id[" word "]" | "coev[" NAME "]" | "eval[" NAME "]"
               | "gamma[" word "," word "]" | "sh[" expr "]" | "theta[" word "," word "]"
               | "sid[" word "]" | NAME
    step      := RULE ["^-1"] "@" PATH ["{" NAME "=" value ("," NAME "=" value)* "}"]

Dual pairs declared without a name are called ``p1``, ``p2``, ... in
declaration order.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

from .engine import PSEUDO_RULES, ProofScript, Step
from .rules import RuleSet, builtin_rules
from .terms import (
    Coev,
    Eval,
    Expr,
    Gamma,
    Gen,
    HComp,
    Id,
    OneCell,
    SComp,
    Sh,
    ShadowExpr,
    SId,
    Signature,
    Theta,
    TwoCell,
    VComp,
    render,
    render_1cell,
)


class ParseError(Exception):
    def __init__(self, line: int, col: int, expected: str):
        super().__init__(f"line {line}, column {col}: {expected}")
        self.line = line
        self.col = col
        self.expected = expected


class ResolutionError(ParseError):
    pass


# ---------------------------------------------------------------- document


@dataclass
class Goal:
    kind: str  # "prove" | "search"
    name: str
    lhs: Expr
    rhs: Expr
    steps: tuple = ()
    budget: int = 0
    depth: Optional[int] = None

    def script(self) -> ProofScript:
        return ProofScript((self.lhs, self.rhs), list(self.steps))


@dataclass
class ModelDecl:
    kind: str  # "algebra" | "bimodule" | "group" | "cover"
    name: str
    data: object = None  # parsed JSON for inline definitions
    path: Optional[str] = None  # file reference
    group: Optional[str] = None  # covers only
    subgroup: Optional[str] = None


@dataclass
class DslDocument:
    sig: Signature
    body: list = field(default_factory=list)  # ExprDecl | Goal | ModelDecl, in input order
    header: tuple = ()

    @property
    def goals(self) -> list:
        return [b for b in self.body if isinstance(b, Goal)]

    @property
    def models(self) -> list:
        return [b for b in self.body if isinstance(b, ModelDecl)]

    @property
    def exprs(self) -> dict:
        return {b.name: b.expr for b in self.body if isinstance(b, ExprDecl)}

    def task_names(self) -> list:
        return [b.name for b in self.body if not isinstance(b, ExprDecl)]


@dataclass
class ExprDecl:
    name: str
    expr: Expr


# ---------------------------------------------------------------- scanner

_WS = re.compile(r"(?:\s+|#[^\n]*)*")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_INT = re.compile(r"\d+")
_STRING = re.compile(r'"((?:[^"\\\n]|\\.)*)"')
_RULE = re.compile(r"[A-Za-z][A-Za-z0-9_]*(?:\.[A-Za-z0-9_]+)*(?:\[[^\]\s]*\])?(?:\.[A-Za-z0-9_]+)*")
_PATH = re.compile(r"/(?:\d+(?:/\d+)*)?")
TENSORS = ("(x)", "⊗")
KEYWORDS = {"id", "coev", "eval", "gamma", "sh", "theta", "sid", "U"}
DECL_KEYWORDS = {"dualpair", "shadow", "symmetric", "expr", "prove", "search",
                 "algebra", "bimodule", "group", "cover"}


class Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def where(self, pos: Optional[int] = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, expected: str, pos: Optional[int] = None, cls=ParseError):
        line, col = self.where(pos)
        return cls(line, col, expected)

    def skip(self):
        self.pos = _WS.match(self.text, self.pos).end()

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self, lit: str) -> bool:
        self.skip()
        return self.text.startswith(lit, self.pos)

    def peek_word(self, word: str) -> bool:
        self.skip()
        m = _NAME.match(self.text, self.pos)
        return bool(m) and m.group(0) == word

    def accept(self, lit: str) -> bool:
        if self.peek(lit):
            self.pos += len(lit)
            return True
        return False

    def expect(self, lit: str):
        if not self.accept(lit):
            raise self.error(f"expected '{lit}'")

    def regex(self, rx, what: str) -> str:
        self.skip()
        m = rx.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group(0)

    def name(self, what: str = "a name") -> str:
        return self.regex(_NAME, what)

    def keyword(self, word: str):
        start = self.pos
        if not self.peek_word(word):
            raise self.error(f"expected '{word}'")
        self.pos += len(word)
        return start

    def tensor(self) -> bool:
        return any(self.accept(t) for t in TENSORS)

    def string(self) -> str:
        self.skip()
        m = _STRING.match(self.text, self.pos)
        if not m:
            raise self.error("expected a string")
        self.pos = m.end()
        return json.loads(m.group(0))

    def json(self):
        self.skip()
        try:
            obj, end = json.JSONDecoder().raw_decode(self.text, self.pos)
        except json.JSONDecodeError as exc:
            raise self.error(f"expected a JSON value ({exc.msg})", exc.pos) from None
        self.pos = end
        return obj


# ---------------------------------------------------------------- expressions


class _Builder:
    """Mutable signature under construction plus expression parsing."""

    def __init__(self, sc: Scanner):
        self.sc = sc
        self.zero: list[str] = []
        self.one: list[tuple] = []
        self.two: list[tuple] = []
        self.pairs: list[tuple] = []
        self.symmetric: list[str] = []
        self.shadow = False
        self._sig: Optional[Signature] = None
        self._rules: Optional[RuleSet] = None

    def sig(self) -> Signature:
        if self._sig is None:
            self._sig = Signature(
                tuple(self.zero), tuple(self.one), tuple(self.two), tuple(self.pairs),
                frozenset(self.symmetric), self.shadow,
            )
        return self._sig

    def rules(self) -> RuleSet:
        if self._rules is None:
            self._rules = builtin_rules(self.sig())
        return self._rules

    def touch(self):
        self._sig = None
        self._rules = None

    # words
    def word(self) -> OneCell:
        sc = self.sc
        sig = self.sig()
        parts: list[OneCell] = []
        while True:
            start = sc.pos
            sc.skip()
            start = sc.pos
            if sc.peek_word("U") and sc.text.startswith("[", sc.pos + 1):
                sc.pos += 1
                sc.expect("[")
                z = sc.name("a 0-cell")
                if z not in sig.zero_cells:
                    raise sc.error(f"undeclared 0-cell {z!r}", start, ResolutionError)
                sc.expect("]")
                parts.append(OneCell.unit(z))
            else:
                n = sc.name("a 1-cell")
                if n not in sig.one_cells:
                    raise sc.error(f"undeclared 1-cell {n!r}", start, ResolutionError)
                s, t = sig.one_cells[n]
                parts.append(OneCell(s, t, (n,)))
            if parts[-1:] and len(parts) > 1:
                a, b = parts[-2], parts[-1]
                if a.tgt != b.src:
                    raise sc.error("1-cell word does not chain", start)
                parts[-2:] = [a * b]
            if not sc.tensor():
                return parts[0]

    def expr(self, want: Optional[str] = None) -> Expr:
        start = self.sc.pos
        e = self._seq()
        if want == "cell" and isinstance(e, ShadowExpr):
            raise self.sc.error("expected a 2-cell expression", start)
        if want == "shadow" and not isinstance(e, ShadowExpr):
            raise self.sc.error("expected a shadow expression", start)
        return e

    def _seq(self) -> Expr:
        sc = self.sc
        sc.skip()
        start = sc.pos
        e = self._hexpr()
        while self._composition_follows():
            f = self._hexpr()
            if isinstance(e, ShadowExpr) and isinstance(f, ShadowExpr):
                e = SComp(e, f)
            elif not isinstance(e, ShadowExpr) and not isinstance(f, ShadowExpr):
                e = VComp(e, f)
            else:
                raise sc.error("cannot compose a 2-cell with a shadow morphism", start)
        return e

    def _composition_follows(self) -> bool:
        # a ';' followed by the end of input or a declaration keyword ends an expr declaration
        sc = self.sc
        save = sc.pos
        if not sc.accept(";"):
            return False
        sc.skip()
        m = _NAME.match(sc.text, sc.pos)
        if sc.pos >= len(sc.text) or _CELL_DECL.match(sc.text, sc.pos) or (
                m and m.group(0) in DECL_KEYWORDS):
            sc.pos = save
            return False
        return True

    def _hexpr(self) -> Expr:
        sc = self.sc
        sc.skip()
        start = sc.pos
        e = self._factor()
        while sc.tensor():
            f = self._factor()
            if isinstance(e, ShadowExpr) or isinstance(f, ShadowExpr):
                raise sc.error("shadow morphisms have no horizontal composite", start)
            e = HComp(e, f)
        return e

    def _bracket(self, fn):
        self.sc.expect("[")
        out = fn()
        self.sc.expect("]")
        return out

    def _two_words(self):
        self.sc.expect("[")
        x = self.word()
        self.sc.expect(",")
        y = self.word()
        self.sc.expect("]")
        return x, y

    def _factor(self) -> Expr:
        sc = self.sc
        sig = self.sig()
        sc.skip()
        start = sc.pos
        if sc.accept("⟨⟨"):
            f = self.expr("cell")
            sc.expect("⟩⟩")
            return Sh(f)
        if sc.accept("θ"):
            return Theta(*self._two_words())
        if sc.accept("γ"):
            return Gamma(*self._two_words())
        if sc.peek("(") and not sc.peek("(x)"):
            sc.expect("(")
            e = self._seq()
            sc.expect(")")
            return e
        m = _NAME.match(sc.text, sc.pos)
        if not m:
            raise sc.error("expected an expression")
        n = m.group(0)
        nxt = sc.text.startswith("[", m.end())
        if n in KEYWORDS and nxt:
            sc.pos = m.end()
            if n == "id":
                return Id(self._bracket(self.word))
            if n == "sid":
                return SId(self._bracket(self.word))
            if n in ("coev", "eval"):
                sc.expect("[")
                p = sc.name("a dual pair")
                if p not in sig.pairs:
                    raise sc.error(f"undeclared dual pair {p!r}", start, ResolutionError)
                sc.expect("]")
                return Coev(p) if n == "coev" else Eval(p)
            if n == "gamma":
                return Gamma(*self._two_words())
            if n == "theta":
                return Theta(*self._two_words())
            if n == "sh":
                return Sh(self._bracket(lambda: self.expr("cell")))
            raise sc.error("a 1-cell is not a 2-cell; use id[...]", start)
        sc.pos = m.end()
        if n not in sig.two_cells:
            raise sc.error(f"undeclared 2-cell {n!r}", start, ResolutionError)
        return Gen(n)

    # steps
    def steps(self, closing: Optional[str] = "}") -> list[Step]:
        sc = self.sc
        out = []
        while not sc.at_end() and not (closing and sc.peek(closing)):
            out.append(self.step())
        return out

    def step(self) -> Step:
        sc = self.sc
        sc.skip()
        start = sc.pos
        rule = sc.regex(_RULE, "a rule name")
        inverse = sc.accept("^-1")
        if rule not in PSEUDO_RULES and rule not in self.rules():
            raise sc.error(f"unknown rule {rule!r}", start, ResolutionError)
        sc.expect("@")
        p = sc.regex(_PATH, "a position such as / or /0/1")
        path = tuple(int(x) for x in p.strip("/").split("/") if x)
        subst = {}
        if sc.accept("{"):
            if not sc.peek("}"):
                while True:
                    sc.skip()
                    kpos = sc.pos
                    k = sc.name("a metavariable")
                    sc.expect("=")
                    subst[k] = self._meta_value(rule, k, kpos)
                    if not sc.accept(","):
                        break
            sc.expect("}")
        return Step.make(rule, path, subst, inverse)

    def _meta_value(self, rule: str, k: str, kpos: int):
        if rule in PSEUDO_RULES:
            if k != "to":
                raise self.sc.error(f"{rule} takes only 'to'", kpos)
            return self.expr()
        r = self.rules()[rule]
        if k != "ctx" and k not in r.metas:
            raise self.sc.error(f"rule {rule} has no metavariable {k!r}", kpos, ResolutionError)
        kind = r.meta_kind(k)
        return self.word() if kind == "word" else self.expr(kind)


# ---------------------------------------------------------------- entry points


def _header(text: str) -> tuple:
    out = []
    for line in text.splitlines():
        if line.startswith("#"):
            out.append(line)
        else:
            break
    return tuple(out)


def parse_dsl(text: str) -> DslDocument:
    sc = Scanner(text)
    b = _Builder(sc)
    body: list = []
    seen: dict[str, set] = {}

    def fresh(kind: str, n: str, pos: int):
        names = seen.setdefault(kind, set())
        if n in names:
            raise sc.error(f"duplicate {kind} {n!r}", pos)
        names.add(n)

    while not sc.at_end():
        start = sc.pos
        m = _CELL_DECL.match(sc.text, sc.pos)
        if m:
            sc.pos = m.end()
            _parse_cell_decl(sc, b, m.group(1), start)
            continue
        kw = sc.name("a declaration keyword")
        raise_kw = False
        if kw == "shadow":
            sc.expect(";")
            b.shadow = True
            b.touch()
        elif kw == "symmetric":
            while True:
                sc.skip()
                p = sc.pos
                z = sc.name("a 0-cell")
                if z not in b.zero:
                    raise sc.error(f"undeclared 0-cell {z!r}", p, ResolutionError)
                if z not in b.symmetric:
                    b.symmetric.append(z)
                if not sc.accept(","):
                    break
            sc.expect(";")
            b.touch()
        elif kw == "dualpair":
            sc.skip()
            p = sc.pos
            if sc.peek("("):
                name = f"p{len(b.pairs) + 1}"
            else:
                name = sc.name("a dual pair name")
                sc.expect(":")
            fresh("dualpair", name, p)
            sc.expect("(")
            x = b.word()
            sc.expect(",")
            y = b.word()
            sc.expect(")")
            sc.expect(";")
            if x.src != y.tgt or x.tgt != y.src:
                raise sc.error("dual pair boundary mismatch", p)
            b.pairs.append((name, x, y))
            b.touch()
        elif kw == "expr":
            name = sc.name()
            fresh("expr", name, start)
            sc.expect("=")
            e = b.expr()
            sc.expect(";")
            body.append(ExprDecl(name, e))
        elif kw in ("prove", "search"):
            name = sc.name("a goal name")
            fresh("task", name, start)
            sc.expect(":")
            lhs = b.expr()
            sc.expect("==")
            rhs = b.expr()
            if kw == "prove":
                sc.keyword("by")
                sc.expect("{")
                steps = b.steps("}")
                sc.expect("}")
                body.append(Goal("prove", name, lhs, rhs, tuple(steps)))
            else:
                sc.keyword("budget")
                budget = int(sc.regex(_INT, "an integer"))
                depth = None
                if sc.peek_word("depth"):
                    sc.keyword("depth")
                    depth = int(sc.regex(_INT, "an integer"))
                sc.expect(";")
                body.append(Goal("search", name, lhs, rhs, (), budget, depth))
        elif kw in ("algebra", "bimodule", "group"):
            name = sc.name()
            fresh("task", name, start)
            sc.expect("=")
            if sc.peek_word("file"):
                sc.keyword("file")
                body.append(ModelDecl(kw, name, path=sc.string()))
            else:
                body.append(ModelDecl(kw, name, data=sc.json()))
            sc.expect(";")
        elif kw == "cover":
            name = sc.name()
            fresh("task", name, start)
            sc.expect("=")
            sc.skip()
            gp = sc.pos
            g = sc.name("a group name")
            if not any(isinstance(m, ModelDecl) and m.kind == "group" and m.name == g for m in body):
                raise sc.error(f"undeclared group {g!r}", gp, ResolutionError)
            sc.expect("/")
            spec = sc.string()
            sc.expect(";")
            body.append(ModelDecl("cover", name, group=g, subgroup=spec))
        else:
            raise_kw = True
        if raise_kw:
            raise sc.error(f"unknown declaration {kw!r}", start)
    return DslDocument(b.sig(), body, _header(text))


_CELL_DECL = re.compile(r"([012])cell\b")


def _parse_cell_decl(sc: Scanner, b: _Builder, kind: str, start: int):
    sig = b.sig()
    if kind == "0":
        while True:
            sc.skip()
            p = sc.pos
            z = sc.name("a 0-cell")
            if z in b.zero:
                raise sc.error(f"duplicate generator {z!r}", p)
            b.zero.append(z)
            if not sc.accept(","):
                break
        sc.expect(";")
    elif kind == "1":
        names = []
        while True:
            sc.skip()
            p = sc.pos
            n = sc.name("a 1-cell")
            if n in sig.one_cells or n in names:
                raise sc.error(f"duplicate generator {n!r}", p)
            names.append(n)
            if not sc.accept(","):
                break
        sc.expect(":")
        sc.skip()
        p = sc.pos
        s = sc.name("a 0-cell")
        sc.expect("->")
        sc.skip()
        q = sc.pos
        t = sc.name("a 0-cell")
        for z, pos in ((s, p), (t, q)):
            if z not in b.zero:
                raise sc.error(f"undeclared 0-cell {z!r}", pos, ResolutionError)
        sc.expect(";")
        b.one.extend((n, s, t) for n in names)
    else:
        sc.skip()
        p = sc.pos
        n = sc.name("a 2-cell")
        if n in DECL_KEYWORDS or n in KEYWORDS:
            raise sc.error(f"{n!r} is a reserved word", p)
        if n in sig.two_cells:
            raise sc.error(f"duplicate generator {n!r}", p)
        sc.expect(":")
        s = b.word()
        sc.expect("=>")
        t = b.word()
        sc.expect(";")
        if s.src != t.src or s.tgt != t.tgt:
            raise sc.error("source and target are not parallel", p)
        b.two.append((n, s, t))
    b.touch()


def _builder_for(sig: Signature, text: str) -> _Builder:
    b = _Builder(Scanner(text))
    b.zero = list(sig.zero_cells)
    b.one = list(sig.one_cell_gens)
    b.two = list(sig.two_cell_gens)
    b.pairs = list(sig.dual_pairs)
    b.symmetric = sorted(sig.symmetric_endo_homs)
    b.shadow = sig.shadow_enabled
    b._sig = sig
    return b


def _finish(b: _Builder):
    if not b.sc.at_end():
        raise b.sc.error("unexpected trailing input")


def parse_expr(text: str, sig: Signature) -> Expr:
    b = _builder_for(sig, text)
    e = b.expr()
    _finish(b)
    return e


def parse_word(text: str, sig: Signature) -> OneCell:
    b = _builder_for(sig, text)
    w = b.word()
    _finish(b)
    return w


def parse_steps(text: str, sig: Signature, rules: Optional[RuleSet] = None) -> list[Step]:
    """Parse the line-oriented step format (one ``rule @ path {..}`` per line)."""
    b = _builder_for(sig, text)
    if rules is not None:
        b._rules = rules
    out = b.steps(None)
    _finish(b)
    return out


# ---------------------------------------------------------------- printing


def print_word(w: OneCell) -> str:
    return render_1cell(w)


def print_expr(e: Expr) -> str:
    return render(e)


def print_step(st: Step) -> str:
    return st.to_text()


def print_dsl(doc: DslDocument) -> str:
    sig = doc.sig
    out = list(doc.header)
    if doc.header:
        out.append("")
    if sig.zero_cells:
        out.append(f"0cell {', '.join(sig.zero_cells)};")
    for n, s, t in sig.one_cell_gens:
        out.append(f"1cell {n} : {s} -> {t};")
    for n, s, t in sig.two_cell_gens:
        out.append(f"2cell {n} : {print_word(s)} => {print_word(t)};")
    for n, x, y in sig.dual_pairs:
        out.append(f"dualpair {n} : ({print_word(x)}, {print_word(y)});")
    if sig.shadow_enabled:
        out.append("shadow;")
    if sig.symmetric_endo_homs:
        out.append(f"symmetric {', '.join(sorted(sig.symmetric_endo_homs))};")
    for item in doc.body:
        out.append("")
        if isinstance(item, ExprDecl):
            out.append(f"expr {item.name} = {print_expr(item.expr)};")
        elif isinstance(item, Goal):
            head = f"{item.kind} {item.name} : {print_expr(item.lhs)} == {print_expr(item.rhs)}"
            if item.kind == "prove":
                out.append(head + " by {")
                out.extend("  " + print_step(st) for st in item.steps)
                out.append("}")
            else:
                tail = f" budget {item.budget}"
                if item.depth is not None:
                    tail += f" depth {item.depth}"
                out.append(head + tail + ";")
        elif item.kind == "cover":
            out.append(f"cover {item.name} = {item.group} / {json.dumps(item.subgroup)};")
        elif item.path is not None:
            out.append(f"{item.kind} {item.name} = file {json.dumps(item.path)};")
        else:
            out.append(f"{item.kind} {item.name} = {json.dumps(item.data)};")
    return "\n".join(out) + "\n"
