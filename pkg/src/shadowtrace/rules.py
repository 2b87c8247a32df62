"""Axioms and derived equations as rewrite rules.

Most rules are *window rules*: each side is a short run of atoms in a
layered spine (see :mod:`shadowtrace.normal`).  A window is addressed by
a path to the sub-spine ending at its last atom; the optional ``ctx``
metavariable stands for everything below the window in that sub-spine.
The remaining structural rules (unit laws, associativity, functoriality
of the shadow) are plain tree rules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .normal import Layer, item_term
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
    atom_boundary,
    typecheck_2cell,
    typecheck_shadow,
)


class RuleError(Exception):
    """A substitution does not instantiate a rule."""


# ---------------------------------------------------------------- word patterns
#
# items: ("lit", OneCell) | ("var", name) | ("src", meta) | ("tgt", meta)
#        | ("unit", zero_cell) | ("unit_src", var) | ("unit_tgt", var)


def lit(w: OneCell):
    return ("lit", w)


def var(name: str):
    return ("var", name)


def src(meta: str):
    return ("src", meta)


def tgt(meta: str):
    return ("tgt", meta)


def wp(*items) -> tuple:
    return tuple(items)


def _item_word(sig: Signature, item, subst: dict) -> OneCell:
    kind, arg = item
    if kind == "lit":
        return arg
    if kind == "var":
        if arg not in subst:
            raise RuleError(f"missing metavariable {arg}")
        w = subst[arg]
        if not isinstance(w, OneCell):
            raise RuleError(f"metavariable {arg} must be a 1-cell")
        return w
    if kind in ("src", "tgt"):
        if arg not in subst:
            raise RuleError(f"missing metavariable {arg}")
        s, t = typecheck_2cell(sig, subst[arg])
        return s if kind == "src" else t
    if kind == "unit":
        return OneCell.unit(arg)
    if kind == "unit_src":
        return OneCell.unit(_item_word(sig, ("var", arg), subst).src)
    if kind == "unit_tgt":
        return OneCell.unit(_item_word(sig, ("var", arg), subst).tgt)
    raise ValueError(kind)


def inst_word(sig: Signature, pat: tuple, subst: dict) -> OneCell:
    if not pat:
        raise RuleError("empty word pattern")
    out = _item_word(sig, pat[0], subst)
    for item in pat[1:]:
        out = out * _item_word(sig, item, subst)
    return out


def match_word(sig: Signature, pat: tuple, w: OneCell, subst: dict) -> Iterator[dict]:
    """All extensions of ``subst`` under which ``pat`` instantiates to ``w``."""
    n = len(w)

    def fixed(k: int, piece: OneCell) -> Optional[int]:
        j = k + len(piece)
        if j > n or w.word[k:j] != piece.word:
            return None
        if sig.zero_at(w, k) != piece.src or sig.zero_at(w, j) != piece.tgt:
            return None
        return j

    def go(i: int, k: int, s: dict):
        if i == len(pat):
            if k == n:
                yield s
            return
        kind, arg = pat[i]
        if kind == "var" and arg not in s:
            for j in range(k, n + 1):
                s2 = dict(s)
                s2[arg] = sig.slice(w, k, j)
                yield from go(i + 1, j, s2)
            return
        try:
            piece = _item_word(sig, pat[i], s)
        except RuleError:
            return
        j = fixed(k, piece)
        if j is not None:
            yield from go(i + 1, j, s)

    yield from go(0, 0, subst)


# ---------------------------------------------------------------- atom patterns


def layer(left: tuple, gen, right: tuple):
    return ("layer", left, gen, right)


def theta(x: tuple, y: tuple):
    return ("theta", x, y)


def meta(name: str):
    return ("meta", name)


def gamma(x: tuple, y: tuple):
    return ("gamma", x, y)


def const(atom: TwoCell):
    return ("lit", atom)


def _inst_gen(sig, g, subst) -> TwoCell:
    if g[0] == "meta":
        if g[1] not in subst:
            raise RuleError(f"missing metavariable {g[1]}")
        a = subst[g[1]]
        if not isinstance(a, (Coev, Eval, Gamma, Gen)):
            raise RuleError(f"metavariable {g[1]} must be a single atom")
        return a
    if g[0] == "lit":
        return g[1]
    return Gamma(inst_word(sig, g[1], subst), inst_word(sig, g[2], subst))


def inst_atom(sig, a, subst):
    if a[0] == "layer":
        return Layer(inst_word(sig, a[1], subst), _inst_gen(sig, a[2], subst),
                     inst_word(sig, a[3], subst))
    return Theta(inst_word(sig, a[1], subst), inst_word(sig, a[2], subst))


def _match_gen(g, atom, s: dict) -> Optional[dict]:
    if g[0] == "meta":
        if g[1] in s:
            return s if s[g[1]] == atom else None
        s = dict(s)
        s[g[1]] = atom
        return s
    if g[0] == "lit":
        return s if atom == g[1] else None
    return s if isinstance(atom, Gamma) else None


def match_atoms(sig: Signature, pats: tuple, items: list, subst=None) -> Iterator[dict]:
    s: dict = dict(subst or {})
    if len(pats) != len(items):
        return
    words = []  # (pattern, concrete word) pairs to match after cells are bound
    for p, it in zip(pats, items):
        if p[0] == "layer":
            if not isinstance(it, Layer):
                return
            s = _match_gen(p[2], it.atom, s)
            if s is None:
                return
            words.append((p[1], it.left))
            words.append((p[3], it.right))
            if p[2][0] == "gamma":
                words.append((p[2][1], it.atom.x))
                words.append((p[2][2], it.atom.y))
        else:
            if not isinstance(it, Theta):
                return
            words.append((p[1], it.x))
            words.append((p[2], it.y))

    def ready(pat, s):
        return all(k in ("lit", "var", "unit") or a in s for k, a in pat)

    def go(todo, s):
        if not todo:
            yield s
            return
        i = next((j for j, (p, _) in enumerate(todo) if ready(p, s)), 0)
        pat, w = todo[i]
        rest = todo[:i] + todo[i + 1:]
        for s2 in match_word(sig, pat, w, s):
            yield from go(rest, s2)

    yield from go(words, s)


# ---------------------------------------------------------------- rules


META_KINDS = ("word", "cell", "shadow")


@dataclass(eq=False)
class Rule:
    name: str
    metas: dict
    level: str = "2cell"  # "2cell", "shadow" or "any"
    derived: bool = False
    certificate: object = None
    note: str = ""

    def instantiate(self, sig: Signature, subst: dict) -> tuple[Expr, Expr]:
        raise NotImplementedError

    def meta_kind(self, name: str) -> str:
        if name == "ctx":
            return "shadow" if self.level == "shadow" else "cell"
        return self.metas[name]


@dataclass(eq=False)
class WindowRule(Rule):
    lhs: tuple = ()
    rhs: tuple = ()
    lhs_word: tuple = ()
    rhs_word: tuple = ()
    zero_cell: Optional[str] = None

    def side(self, inverse: bool):
        return (self.rhs, self.rhs_word) if inverse else (self.lhs, self.lhs_word)

    def build_side(self, sig, atoms, word, subst) -> Expr:
        items = [inst_atom(sig, a, subst) for a in atoms]
        if self.zero_cell is not None:
            for it in items:
                if isinstance(it, Layer) and isinstance(it.atom, Gamma):
                    if it.atom.x.src != self.zero_cell:
                        raise RuleError(f"gamma is not at 0-cell {self.zero_cell}")
        shadow = self.level == "shadow"
        ctx = subst.get("ctx")
        if ctx is None:
            if not items:
                w = inst_word(sig, word, subst)
                return SId(w) if shadow else Id(w)
            out = item_term(items[0]) if shadow else items[0].term()
            rest = items[1:]
        else:
            if shadow != isinstance(ctx, ShadowExpr):
                raise RuleError("ctx has the wrong level")
            out, rest = ctx, items
        for it in rest:
            out = SComp(out, item_term(it)) if shadow else VComp(out, it.term())
        return out

    def instantiate(self, sig, subst):
        return (self.build_side(sig, self.lhs, self.lhs_word, subst),
                self.build_side(sig, self.rhs, self.rhs_word, subst))

    def side_items(self, sig, subst, inverse=False):
        atoms, _ = self.side(inverse)
        return [inst_atom(sig, a, subst) for a in atoms]


@dataclass(eq=False)
class TreeRule(Rule):
    fn: Callable = None

    def instantiate(self, sig, subst):
        for k in self.metas:
            if k not in subst:
                raise RuleError(f"missing metavariable {k}")
        return self.fn(sig, subst)


def lift_to_shadow(r: WindowRule) -> WindowRule:
    return WindowRule(
        name=r.name + ".sh", metas=dict(r.metas), level="shadow", derived=r.derived,
        certificate=r.certificate, lhs=r.lhs, rhs=r.rhs, lhs_word=r.lhs_word,
        rhs_word=r.rhs_word, zero_cell=r.zero_cell, note=r.note,
    )


# ---------------------------------------------------------------- families


def _bnd(sig, e):
    return typecheck_shadow(sig, e) if isinstance(e, ShadowExpr) else typecheck_2cell(sig, e)


def structural_rules() -> list[Rule]:
    def vl(sig, s):
        f = s["f"]
        return VComp(Id(_bnd(sig, f)[0]), f), f

    def vr(sig, s):
        f = s["f"]
        return VComp(f, Id(_bnd(sig, f)[1])), f

    def hl(sig, s):
        f = s["f"]
        return HComp(Id(OneCell.unit(_bnd(sig, f)[0].src)), f), f

    def hr(sig, s):
        f = s["f"]
        return HComp(f, Id(OneCell.unit(_bnd(sig, f)[0].tgt))), f

    def ident(sig, s):
        return HComp(Id(s["X"]), Id(s["Y"])), Id(s["X"] * s["Y"])

    def sl(sig, s):
        u = s["u"]
        return SComp(SId(_bnd(sig, u)[0]), u), u

    def sr(sig, s):
        u = s["u"]
        return SComp(u, SId(_bnd(sig, u)[1])), u

    def assoc(node):
        def fn(sig, s):
            a, b, c = s["f"], s["g"], s["h"]
            return node(node(a, b), c), node(a, node(b, c))
        return fn

    def interchange(sig, s):
        f, g, h, k = s["f"], s["g"], s["h"], s["k"]
        return VComp(HComp(f, h), HComp(g, k)), HComp(VComp(f, g), VComp(h, k))

    def sfv(sig, s):
        f, g = s["f"], s["g"]
        return Sh(VComp(f, g)), SComp(Sh(f), Sh(g))

    def sfid(sig, s):
        return Sh(Id(s["X"])), SId(s["X"])

    c = "cell"
    return [
        TreeRule("R6.vl", {"f": c}, fn=vl, note="left unit law for vertical composition"),
        TreeRule("R6.vr", {"f": c}, fn=vr),
        TreeRule("R6.hl", {"f": c}, fn=hl, note="horizontal unit law, empty left whisker"),
        TreeRule("R6.hr", {"f": c}, fn=hr),
        TreeRule("R6.id", {"X": "word", "Y": "word"}, fn=ident),
        TreeRule("A.v", {"f": c, "g": c, "h": c}, fn=assoc(VComp)),
        TreeRule("A.h", {"f": c, "g": c, "h": c}, fn=assoc(HComp)),
        TreeRule("R5", {"f": c, "g": c, "h": c, "k": c}, fn=interchange),
        TreeRule("R6.sl", {"u": "shadow"}, fn=sl, level="shadow"),
        TreeRule("R6.sr", {"u": "shadow"}, fn=sr, level="shadow"),
        TreeRule("A.s", {"f": "shadow", "g": "shadow", "h": "shadow"}, fn=assoc(SComp), level="shadow"),
        TreeRule("SF.v", {"f": c, "g": c}, fn=sfv, level="shadow"),
        TreeRule("SF.id", {"X": "word"}, fn=sfid, level="shadow"),
    ]


def exchange_rule() -> WindowRule:
    W1, W2, W3 = var("W1"), var("W2"), var("W3")
    return WindowRule(
        "R5x", {"W1": "word", "W2": "word", "W3": "word", "g": "cell", "h": "cell"},
        lhs=(layer(wp(W1), meta("g"), wp(W2, src("h"), W3)),
             layer(wp(W1, tgt("g"), W2), meta("h"), wp(W3))),
        rhs=(layer(wp(W1, src("g"), W2), meta("h"), wp(W3)),
             layer(wp(W1), meta("g"), wp(W2, tgt("h"), W3))),
        note="interchange of two atoms side by side",
    )


def triangle_rules(name: str, x: OneCell, y: OneCell, coev_layers=None, eval_layers=None,
                   derived=False, certificates=(None, None)) -> list[WindowRule]:
    """Triangle identities for a dual pair, whiskered by ``W1`` and ``W2``.

    With no explicit layers the pair is a declared one and the rules use
    the atoms ``coev[name]`` and ``eval[name]``.
    """
    W1, W2 = var("W1"), var("W2")
    X, Y = lit(x), lit(y)
    metas = {"W1": "word", "W2": "word"}
    if coev_layers is None:
        coev_layers = [Layer(OneCell.unit(x.src), Coev(name), OneCell.unit(x.src))]
        eval_layers = [Layer(OneCell.unit(x.tgt), Eval(name), OneCell.unit(x.tgt))]

    def whiskered(layers, pre: list, post: list):
        return tuple(
            layer(wp(*pre, lit(L.left)), const(L.atom), wp(lit(L.right), *post))
            for L in layers
        )

    r1 = WindowRule(
        f"R1[{name}]", dict(metas), derived=derived, certificate=certificates[0],
        lhs=whiskered(coev_layers, [W1], [X, W2]) + whiskered(eval_layers, [W1, X], [W2]),
        rhs=(), lhs_word=wp(W1, X, W2), rhs_word=wp(W1, X, W2),
        note="first triangle identity",
    )
    r2 = WindowRule(
        f"R2[{name}]", dict(metas), derived=derived, certificate=certificates[1],
        lhs=whiskered(coev_layers, [W1, Y], [W2]) + whiskered(eval_layers, [W1], [Y, W2]),
        rhs=(), lhs_word=wp(W1, Y, W2), rhs_word=wp(W1, Y, W2),
        note="second triangle identity",
    )
    return [r1, r2]


# Shipped theorem file and goal whose script proves R9 from R3 and R4.
R9_CERTIFICATE = ("theta_squared.st", "theta_squared")


def shadow_rules() -> list[WindowRule]:
    X, Y, Z = var("X"), var("Y"), var("Z")
    W1, W2 = var("W1"), var("W2")
    w3 = {"X": "word", "Y": "word", "Z": "word"}
    r3 = WindowRule(
        "R3", w3, level="shadow",
        lhs=(theta(wp(X, Y), wp(Z)), theta(wp(Z, X), wp(Y))),
        rhs=(theta(wp(X), wp(Y, Z)),),
        note="hexagon: two rotations compose to one",
    )
    r4a = WindowRule(
        "R4a", {"X": "word"}, level="shadow",
        lhs=(theta(wp(X), wp(("unit_tgt", "X"))),), rhs=(),
        lhs_word=wp(X), rhs_word=wp(X), note="rotation past a unit, right",
    )
    r4b = WindowRule(
        "R4b", {"X": "word"}, level="shadow",
        lhs=(theta(wp(("unit_src", "X")), wp(X)),), rhs=(),
        lhs_word=wp(X), rhs_word=wp(X), note="rotation past a unit, left",
    )
    nat = {"W1": "word", "W2": "word", "g": "cell"}
    r7a = WindowRule(
        "R7a", dict(nat, Y="word"), level="shadow",
        lhs=(layer(wp(W1), meta("g"), wp(W2, Y)), theta(wp(W1, tgt("g"), W2), wp(Y))),
        rhs=(theta(wp(W1, src("g"), W2), wp(Y)), layer(wp(Y, W1), meta("g"), wp(W2))),
        note="naturality of theta in its first slot",
    )
    r7b = WindowRule(
        "R7b", dict(nat, X="word"), level="shadow",
        lhs=(layer(wp(X, W1), meta("g"), wp(W2)), theta(wp(X), wp(W1, tgt("g"), W2))),
        rhs=(theta(wp(X), wp(W1, src("g"), W2)), layer(wp(W1), meta("g"), wp(W2, X))),
        note="naturality of theta in its second slot",
    )
    r9 = WindowRule(
        "R9", {"X": "word", "Y": "word"}, level="shadow", derived=True,
        certificate=R9_CERTIFICATE,
        lhs=(theta(wp(X), wp(Y)), theta(wp(Y), wp(X))), rhs=(),
        lhs_word=wp(X, Y), rhs_word=wp(X, Y), note="theta squared is the identity",
    )
    return [r3, r4a, r4b, r7a, r7b, r9]




def symmetry_rules(c: str) -> list[WindowRule]:
    X, Y, Z = var("X"), var("Y"), var("Z")
    W0, W1, W2, W3 = var("W0"), var("W1"), var("W2"), var("W3")
    U = ("unit", c)
    words = lambda *ns: {n: "word" for n in ns}  # noqa: E731

    def R(name, metas, lhs, rhs, lw=(), rw=(), note=""):
        return WindowRule(f"R8[{c}].{name}", metas, lhs=lhs, rhs=rhs, lhs_word=lw,
                          rhs_word=rw, zero_cell=c, note=note)

    return [
        R("sym", words("W0", "X", "Y", "W3"),
          (layer(wp(W0), gamma(wp(X), wp(Y)), wp(W3)), layer(wp(W0), gamma(wp(Y), wp(X)), wp(W3))),
          (), wp(W0, X, Y, W3), wp(W0, X, Y, W3), note="symmetry squares to the identity"),
        R("natX", dict(words("W0", "W1", "W2", "W3", "Y"), g="cell"),
          (layer(wp(W0, W1), meta("g"), wp(W2, Y, W3)),
           layer(wp(W0), gamma(wp(W1, tgt("g"), W2), wp(Y)), wp(W3))),
          (layer(wp(W0), gamma(wp(W1, src("g"), W2), wp(Y)), wp(W3)),
           layer(wp(W0, Y, W1), meta("g"), wp(W2, W3))),
          note="naturality of the symmetry, first argument"),
        R("natY", dict(words("W0", "W1", "W2", "W3", "X"), g="cell"),
          (layer(wp(W0, X, W1), meta("g"), wp(W2, W3)),
           layer(wp(W0), gamma(wp(X), wp(W1, tgt("g"), W2)), wp(W3))),
          (layer(wp(W0), gamma(wp(X), wp(W1, src("g"), W2)), wp(W3)),
           layer(wp(W0, W1), meta("g"), wp(W2, X, W3))),
          note="naturality of the symmetry, second argument"),
        R("hexY", words("W0", "X", "Y", "Z", "W3"),
          (layer(wp(W0), gamma(wp(X), wp(Y, Z)), wp(W3)),),
          (layer(wp(W0), gamma(wp(X), wp(Y)), wp(Z, W3)),
           layer(wp(W0, Y), gamma(wp(X), wp(Z)), wp(W3))),
          note="hexagon, split second argument"),
        R("hexX", words("W0", "X", "Y", "Z", "W3"),
          (layer(wp(W0), gamma(wp(X, Y), wp(Z)), wp(W3)),),
          (layer(wp(W0, X), gamma(wp(Y), wp(Z)), wp(W3)),
           layer(wp(W0), gamma(wp(X), wp(Z)), wp(Y, W3))),
          note="hexagon, split first argument"),
        R("unitY", words("W0", "X", "W3"),
          (layer(wp(W0), gamma(wp(X), wp(U)), wp(W3)),), (), wp(W0, X, W3), wp(W0, X, W3)),
        R("unitX", words("W0", "X", "W3"),
          (layer(wp(W0), gamma(wp(U), wp(X)), wp(W3)),), (), wp(W0, X, W3), wp(W0, X, W3)),
    ]


@dataclass
class RuleSet:
    rules: dict = field(default_factory=dict)

    def add(self, r: Rule):
        self.rules[r.name] = r

    def __getitem__(self, name: str) -> Rule:
        return self.rules[name]

    def __contains__(self, name: str) -> bool:
        return name in self.rules

    def __iter__(self):
        return iter(self.rules.values())

    def __len__(self):
        return len(self.rules)

    def names(self) -> list[str]:
        return list(self.rules)

    def window_rules(self, level: str, include_derived: bool = False) -> list[WindowRule]:
        return [r for r in self.rules.values() if isinstance(r, WindowRule)
                and r.level == level and (include_derived or not r.derived)]

    def extend(self, rules):
        for r in rules:
            self.add(r)
        return self


def builtin_rules(sig: Signature) -> RuleSet:
    """Axiom instances for ``sig``, plus the derived theta-squared rule."""
    rs = RuleSet()
    rs.extend(structural_rules())
    cell_window: list[WindowRule] = [exchange_rule()]
    for name, (x, y) in sig.pairs.items():
        cell_window.extend(triangle_rules(name, x, y))
    for c in sorted(sig.symmetric_endo_homs):
        cell_window.extend(symmetry_rules(c))
    rs.extend(cell_window)
    if sig.shadow_enabled:
        rs.extend(shadow_rules())
        rs.extend(lift_to_shadow(r) for r in cell_window)
    return rs


def atom_boundaries_ok(sig: Signature, it) -> bool:
    try:
        if isinstance(it, Layer):
            atom_boundary(sig, it.atom)
        return True
    except Exception:
        return False
