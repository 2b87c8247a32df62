"""Random well-typed expressions and rule instances for property tests."""

from __future__ import annotations

import random

from shadowtrace.dsl import parse_dsl
from shadowtrace.engine import Step, apply_step, window_steps, moves
from shadowtrace.normal import flatten, items_of
from shadowtrace.terms import (
    Coev,
    Eval,
    Gamma,
    Gen,
    HComp,
    Id,
    OneCell,
    SComp,
    Sh,
    ShadowExpr,
    SId,
    Theta,
    VComp,
    subterm,
    typecheck,
)

SIG_TEXT = """\
0cell A, B;
1cell X : A -> B;
1cell Y : B -> A;
1cell Z : A -> A;
2cell f : X => X;
2cell g : X (x) Y => Z;
2cell h : Z => Z (x) Z;
2cell k : Y (x) X => U[B];
dualpair p : (X, Y);
shadow;
symmetric A;
"""

SIG = parse_dsl(SIG_TEXT).sig


def _splits(w: OneCell):
    for i in range(len(w) + 1):
        yield SIG.slice(w, 0, i), SIG.slice(w, i, len(w))


def _atoms_from(w: OneCell):
    out = []
    for name, (s, _t) in SIG.two_cells.items():
        if s == w:
            out.append(Gen(name))
    for name, (x, y) in SIG.pairs.items():
        if w == OneCell.unit(x.src):
            out.append(Coev(name))
        if w == y * x:
            out.append(Eval(name))
    if w.src == w.tgt and w.src in SIG.symmetric_endo_homs:
        for a, b in _splits(w):
            if a.is_endo and b.is_endo:
                out.append(Gamma(a, b))
    return out


def random_2cell(rng: random.Random, w: OneCell, depth: int):
    """A random 2-cell with source ``w``."""
    choices = ["id"]
    atoms = _atoms_from(w)
    if atoms:
        choices += ["atom"] * 3
    if depth > 0:
        choices += ["v", "v", "h", "h"]
    c = rng.choice(choices)
    if c == "id":
        return Id(w)
    if c == "atom":
        return rng.choice(atoms)
    if c == "v":
        f = random_2cell(rng, w, depth - 1)
        t = typecheck(SIG, f)[1]
        return VComp(f, random_2cell(rng, t, depth - 1))
    a, b = rng.choice(list(_splits(w)))
    return HComp(random_2cell(rng, a, depth - 1), random_2cell(rng, b, depth - 1))


def random_shadow(rng: random.Random, w: OneCell, depth: int):
    """A random shadow morphism with source ``<<w>>``."""
    c = rng.choice(["sid", "sh", "sh", "theta"] + (["s", "s"] if depth > 0 else []))
    if c == "sid":
        return SId(w)
    if c == "sh":
        return Sh(random_2cell(rng, w, max(depth - 1, 0)))
    if c == "theta":
        cands = [(a, b) for a, b in _splits(w) if a.tgt == b.src and a.src == b.tgt]
        a, b = rng.choice(cands)
        return Theta(a, b)
    u = random_shadow(rng, w, depth - 1)
    t = typecheck(SIG, u)[1]
    return SComp(u, random_shadow(rng, t, depth - 1))


START_WORDS = [
    OneCell.unit("A"), OneCell.unit("B"), SIG.word("X"), SIG.word("Z"), SIG.word("X", "Y"),
    SIG.word("Y", "X"), SIG.word("Z", "Z"), SIG.word("X", "Y", "Z"), SIG.word("Y", "Z", "X"),
]
ENDO_WORDS = [w for w in START_WORDS if w.is_endo]


def random_expr(rng: random.Random, depth: int = 3):
    if rng.random() < 0.4:
        return random_shadow(rng, rng.choice(ENDO_WORDS), depth)
    return random_2cell(rng, rng.choice(START_WORDS), depth)


def _paths(e, prefix=()):
    yield prefix
    for i, c in enumerate(e.children()):
        yield from _paths(c, prefix + (i,))


def random_tree_step(rng: random.Random, e):
    """A structural step whose redex is present at a random position, or ``None``."""
    path = rng.choice(list(_paths(e)))
    sub = subterm(e, path)
    opts = []
    if isinstance(sub, ShadowExpr):
        opts += [Step.make("R6.sl", path, {"u": sub}, True), Step.make("R6.sr", path, {"u": sub}, True)]
        if isinstance(sub, SComp) and isinstance(sub.u, SComp):
            opts.append(Step.make("A.s", path, {"f": sub.u.u, "g": sub.u.v, "h": sub.v}))
        if isinstance(sub, Sh) and isinstance(sub.f, VComp):
            opts.append(Step.make("SF.v", path, {"f": sub.f.f, "g": sub.f.g}))
        if isinstance(sub, Sh) and isinstance(sub.f, Id):
            opts.append(Step.make("SF.id", path, {"X": sub.f.x}))
    else:
        opts += [Step.make(r, path, {"f": sub}, True) for r in ("R6.vl", "R6.vr", "R6.hl", "R6.hr")]
        if isinstance(sub, VComp) and isinstance(sub.f, VComp):
            opts.append(Step.make("A.v", path, {"f": sub.f.f, "g": sub.f.g, "h": sub.g}))
        if isinstance(sub, HComp) and isinstance(sub.f, HComp):
            opts.append(Step.make("A.h", path, {"f": sub.f.f, "g": sub.f.g, "h": sub.g}))
        if isinstance(sub, VComp) and isinstance(sub.f, HComp) and isinstance(sub.g, HComp):
            f, h, g, k = sub.f.f, sub.f.g, sub.g.f, sub.g.g
            if _chains(f, g) and _chains(h, k):
                opts.append(Step.make("R5", path, {"f": f, "h": h, "g": g, "k": k}))
    return rng.choice(opts)


def _chains(f, g) -> bool:
    return typecheck(SIG, f)[1] == typecheck(SIG, g)[0]


def random_window_step(rng: random.Random, rules, e):
    """A flattening step plus one random applicable window rewrite, or ``None``."""
    shadow = isinstance(e, ShadowExpr)
    src, _tgt, items = items_of(SIG, e)
    pool = rules.window_rules("shadow" if shadow else "2cell", True)
    found = list(moves(SIG, pool, src, tuple(items)))
    if not found:
        return None
    rule, i, s, inverse = rng.choice(found)
    steps, _ = window_steps(SIG, rule, src, list(items), i, s, inverse)
    return [Step.make("FLAT", (), {})] + steps


def apply_all(rules, e, steps):
    for k, st in enumerate(steps):
        e = apply_step(SIG, rules, e, st, k)
    return e


__all__ = ["SIG", "random_expr", "random_tree_step", "random_window_step", "apply_all", "flatten"]
