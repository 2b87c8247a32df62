"""Dual-pair handles, the bicategorical trace, and the shipped theorem corpus."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .engine import ProofScript, ScriptBuilder, ScriptFailure, verify_script
from .normal import layers_2cell, whisker
from .rules import RuleSet, WindowRule, builtin_rules, lift_to_shadow, triangle_rules
from .terms import (
    BoundaryMismatch,
    Coev,
    Eval,
    HComp,
    Id,
    OneCell,
    SComp,
    Sh,
    ShadowExpr,
    Signature,
    Theta,
    TwoCell,
    VComp,
    render_1cell,
    typecheck_2cell,
    typecheck_shadow,
)


@dataclass
class DualPairHandle:
    name: str
    x: OneCell
    y: OneCell
    coev: TwoCell
    eval: TwoCell
    provenance: str = "Declared"  # "Declared" | "Composite" | "Unit"
    parts: tuple = ()
    certificates: tuple = ()
    rules: list = field(default_factory=list)  # derived triangle rules, own and inherited

    @property
    def triangle_names(self) -> tuple[str, str]:
        return f"R1[{self.name}]", f"R2[{self.name}]"


def declared_pair(sig: Signature, name: str) -> DualPairHandle:
    if name not in sig.pairs:
        raise KeyError(f"no dual pair named {name!r}")
    x, y = sig.pairs[name]
    return DualPairHandle(name, x, y, Coev(name), Eval(name))


def unit_pair(sig: Signature, zero_cell: str) -> DualPairHandle:
    u = OneCell.unit(zero_cell)
    return DualPairHandle(f"U[{zero_cell}]", u, u, Id(u), Id(u), provenance="Unit")


def rules_for(sig: Signature, *handles: DualPairHandle) -> RuleSet:
    rs = builtin_rules(sig)
    for h in handles:
        rs.extend(h.rules)
    return rs


def _wrap(name: str) -> str:
    return f"({name})" if "*" in name else name


def triangle_goals(h: DualPairHandle) -> tuple[tuple, tuple]:
    x, y = h.x, h.y
    g1 = (VComp(HComp(h.coev, Id(x)), HComp(Id(x), h.eval)), Id(x))
    g2 = (VComp(HComp(Id(y), h.coev), HComp(h.eval, Id(y))), Id(y))
    return g1, g2


def compose_dual_pairs(sig: Signature, p1: DualPairHandle, p2: DualPairHandle) -> DualPairHandle:
    """The pair ``(X1 X2, Y2 Y1)`` with both triangle identities certified."""
    x1, y1, x2, y2 = p1.x, p1.y, p2.x, p2.y
    if x1.tgt != x2.src:
        raise BoundaryMismatch(
            f"dual pairs do not compose: {render_1cell(x1)} ends at {x1.tgt}, "
            f"{render_1cell(x2)} starts at {x2.src}"
        )
    x, y = x1 * x2, y2 * y1
    coev = VComp(p1.coev, whisker(x1, p2.coev, y1))
    ev = VComp(whisker(y2, p1.eval, x2), p2.eval)
    name = f"{_wrap(p1.name)}*{_wrap(p2.name)}"
    h = DualPairHandle(name, x, y, coev, ev, "Composite", (p1, p2))
    rules = rules_for(sig, p1, p2)
    n_c1 = len(layers_2cell(sig, p1.coev)[2])
    n_c2 = len(layers_2cell(sig, p2.coev)[2])
    n_e1 = len(layers_2cell(sig, p1.eval)[2])
    a, b, c = x1.src, x1.tgt, x2.tgt
    (l1, r1), (l2, r2) = triangle_goals(h)
    scripts = []
    for which, lhs, rhs in ((1, l1, r1), (2, l2, r2)):
        bld = ScriptBuilder(sig, rules, lhs).flat()
        # slide the layers of the first evaluation below those of the second coevaluation
        for j in range(n_e1):
            bld.move(n_c1 + n_c2 + j, n_c1 + j)
        # unit pairs have identity coev/eval, so their triangles hold on the nose
        if which == 1:
            if p1.provenance != "Unit":
                bld.at(p1.triangle_names[0], 0, W1=OneCell.unit(a), W2=x2)
            if p2.provenance != "Unit":
                bld.at(p2.triangle_names[0], 0, W1=x1, W2=OneCell.unit(c))
        else:
            if p1.provenance != "Unit":
                bld.at(p1.triangle_names[1], 0, W1=y2, W2=OneCell.unit(a))
            if p2.provenance != "Unit":
                bld.at(p2.triangle_names[1], 0, W1=OneCell.unit(c), W2=y1)
        try:
            scripts.append(bld.script(rhs))
        except ScriptFailure as exc:  # pragma: no cover - guard
            raise ScriptFailure(f"triangle {which} for {name}: {exc}") from None
    for s in scripts:
        verify_script(sig, rules, s)
    h.certificates = tuple(scripts)
    own = triangle_rules(
        name, x, y, layers_2cell(sig, coev)[2], layers_2cell(sig, ev)[2],
        derived=True, certificates=tuple(scripts),
    )
    if sig.shadow_enabled:
        own += [lift_to_shadow(r) for r in own]
    inherited = [r for r in p1.rules + p2.rules]
    h.rules = inherited + own
    return h


# ---------------------------------------------------------------- traces


@dataclass
class TraceExpr:
    pair: DualPairHandle
    phi: TwoCell
    result: ShadowExpr
    p: OneCell
    q: OneCell


def build_trace(sig: Signature, pair: DualPairHandle, phi: TwoCell) -> TraceExpr:
    """The shadow composite ``<<P>> -> <<P X Y>> -> <<X Q Y>> -> <<Y X Q>> -> <<Q>>``."""
    s, t = typecheck_2cell(sig, phi)
    x, y = pair.x, pair.y
    k = len(x)
    if len(s) < k or s.word[len(s) - k:] != x.word or s.tgt != x.tgt:
        raise BoundaryMismatch(f"source of phi does not end with {render_1cell(x)}")
    if len(t) < k or t.word[:k] != x.word or t.src != x.src:
        raise BoundaryMismatch(f"target of phi does not start with {render_1cell(x)}")
    p = sig.slice(s, 0, len(s) - k)
    q = sig.slice(t, k, len(t))
    if p.src != x.src or not p.is_endo:
        raise BoundaryMismatch("P must be an endo-1-cell at the source of X")
    if not q.is_endo or q.src != x.tgt:
        raise BoundaryMismatch("Q must be an endo-1-cell at the target of X")
    stages = [
        Sh(whisker(p, pair.coev, OneCell.unit(x.src))),
        Sh(HComp(phi, Id(y))),
        Theta(x * q, y),
        Sh(whisker(OneCell.unit(x.tgt), pair.eval, q)),
    ]
    out = stages[0]
    for st in stages[1:]:
        out = SComp(out, st)
    typecheck_shadow(sig, out)
    return TraceExpr(pair, phi, out, p, q)


def trace_of_identity(sig: Signature, pair: DualPairHandle) -> ShadowExpr:
    return build_trace(sig, pair, Id(pair.x)).result


# ---------------------------------------------------------------- corpus


@dataclass
class Theorem:
    name: str
    goal: tuple
    script: ProofScript
    sig: Signature
    rules: RuleSet


CORPUS_FILES = (
    "theta_squared.st",
    "unit_trace.st",
    "pretransfer.st",
    "theta_triangle.st",
    "reidemeister_chase.st",
    "trace_functoriality.st",
)


def _read_corpus_file(fname: str) -> str:
    return resources.files("shadowtrace").joinpath("theorems", fname).read_text(encoding="utf-8")


def shipped_theorems() -> list[Theorem]:
    """Every ``prove`` goal of the shipped corpus, in file order."""
    from .dsl import parse_dsl

    out = []
    for fname in CORPUS_FILES:
        doc = parse_dsl(_read_corpus_file(fname))
        rules = builtin_rules(doc.sig)
        for g in doc.goals:
            if g.kind == "prove":
                out.append(Theorem(g.name, (g.lhs, g.rhs), g.script(), doc.sig, rules))
    return out


def corpus_texts() -> dict[str, str]:
    from .corpus import build_corpus

    return build_corpus()


def shipped_text(fname: str) -> str:
    return _read_corpus_file(fname)


def find_theorem(name: str) -> Optional[Theorem]:
    for t in shipped_theorems():
        if t.name == name:
            return t
    return None
