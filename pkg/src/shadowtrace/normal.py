"""Layered normal forms for 2-cells and shadow morphisms.

A *layer* is one atom (generator, coev, eval or gamma) whiskered by words
on either side.  Every 2-cell is equal, by unit laws, associativity and
interchange alone, to a vertical stack of layers; shadow morphisms become
stacks of shadowed layers interleaved with theta atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .terms import (
    ATOMS,
    Expr,
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


@dataclass(frozen=True)
class Layer:
    left: OneCell
    atom: TwoCell
    right: OneCell

    def boundary(self, sig: Signature) -> tuple[OneCell, OneCell]:
        s, t = atom_boundary(sig, self.atom)
        return self.left * s * self.right, self.left * t * self.right

    def term(self) -> TwoCell:
        return whisker(self.left, self.atom, self.right)


Item = Union[Layer, Theta]


def whisker(w1: OneCell, f: TwoCell, w2: OneCell) -> TwoCell:
    """``id[w1] (x) f (x) id[w2]`` with empty identities dropped."""
    out = f
    if not w1.is_unit:
        out = HComp(Id(w1), out)
    if not w2.is_unit:
        out = HComp(out, Id(w2))
    return out


def _whiskered(sig: Signature, layers: list[Layer], w1: OneCell | None, w2: OneCell | None):
    out = []
    for L in layers:
        left = L.left if w1 is None else w1 * L.left
        right = L.right if w2 is None else L.right * w2
        out.append(Layer(left, L.atom, right))
    return out


def layers_2cell(sig: Signature, e: TwoCell) -> tuple[OneCell, OneCell, list[Layer]]:
    """Unsorted layering: ``(source, target, layers)``."""
    if isinstance(e, Id):
        return e.x, e.x, []
    if isinstance(e, ATOMS):
        s, t = atom_boundary(sig, e)
        return s, t, [Layer(OneCell.unit(s.src), e, OneCell.unit(s.tgt))]
    if isinstance(e, VComp):
        s1, _, l1 = layers_2cell(sig, e.f)
        _, t2, l2 = layers_2cell(sig, e.g)
        return s1, t2, l1 + l2
    if isinstance(e, HComp):
        s1, t1, l1 = layers_2cell(sig, e.f)
        s2, t2, l2 = layers_2cell(sig, e.g)
        return s1 * s2, t1 * t2, _whiskered(sig, l1, None, s2) + _whiskered(sig, l2, t1, None)
    raise TypeError(f"not a 2-cell: {e!r}")


def items_shadow(sig: Signature, e: ShadowExpr) -> tuple[OneCell, OneCell, list[Item]]:
    if isinstance(e, Sh):
        return layers_2cell(sig, e.f)
    if isinstance(e, SId):
        return e.x, e.x, []
    if isinstance(e, Theta):
        return e.x * e.y, e.y * e.x, [e]
    if isinstance(e, SComp):
        s1, _, a = items_shadow(sig, e.u)
        _, t2, b = items_shadow(sig, e.v)
        return s1, t2, a + b
    raise TypeError(f"not a shadow morphism: {e!r}")


def items_of(sig: Signature, e: Expr):
    if isinstance(e, ShadowExpr):
        return items_shadow(sig, e)
    return layers_2cell(sig, e)


# ---------------------------------------------------------------- sorting


def _try_swap(sig: Signature, g: Layer, h: Layer) -> tuple[Layer, Layer] | None:
    """Exchange ``g ; h`` when ``h`` acts strictly left of ``g``'s output."""
    gs, gt = atom_boundary(sig, g.atom)
    hs, ht = atom_boundary(sig, h.atom)
    c = len(g.left)
    d = c + len(gt)
    a = len(h.left)
    b = a + len(hs)
    if b > c or (a == b == c == d):
        return None
    w = h.left * hs * h.right  # word between g and h
    mid = sig.slice(w, b, c)
    h2 = Layer(h.left, h.atom, mid * gs * g.right)
    g2 = Layer(h.left * ht * mid, g.atom, g.right)
    return h2, g2


def sort_layers(sig: Signature, layers: list[Layer]) -> list[Layer]:
    out = list(layers)
    changed = True
    guard = 0
    limit = 4 * (len(out) + 1) ** 3
    while changed:
        changed = False
        for i in range(len(out) - 1):
            sw = _try_swap(sig, out[i], out[i + 1])
            if sw is not None:
                out[i], out[i + 1] = sw
                changed = True
                guard += 1
        if guard > limit:  # pragma: no cover - defensive
            break
    return out


def sort_items(sig: Signature, items: list[Item]) -> list[Item]:
    out: list[Item] = []
    run: list[Layer] = []
    for it in items:
        if isinstance(it, Layer):
            run.append(it)
        else:
            out.extend(sort_layers(sig, run))
            run = []
            out.append(it)
    out.extend(sort_layers(sig, run))
    return out


# ---------------------------------------------------------------- rebuilding


def spine_2cell(src: OneCell, layers: list[Layer]) -> TwoCell:
    if not layers:
        return Id(src)
    out = layers[0].term()
    for L in layers[1:]:
        out = VComp(out, L.term())
    return out


def item_term(it: Item) -> ShadowExpr:
    return it if isinstance(it, Theta) else Sh(it.term())


def spine_shadow(src: OneCell, items: list[Item]) -> ShadowExpr:
    if not items:
        return SId(src)
    out = item_term(items[0])
    for it in items[1:]:
        out = SComp(out, item_term(it))
    return out


def build(e_or_level, src: OneCell, items: list) -> Expr:
    shadow = isinstance(e_or_level, ShadowExpr) or e_or_level == "shadow"
    return spine_shadow(src, items) if shadow else spine_2cell(src, items)


def flatten(sig: Signature, e: Expr) -> Expr:
    """Layered form without interchange sorting."""
    src, _, items = items_of(sig, e)
    return build(e, src, items)


def normalize(sig: Signature, e: Expr, rules=None, budget=None) -> Expr:
    """Canonical representative modulo unit laws, associativity and interchange.

    ``rules`` and ``budget`` are accepted for interface symmetry; the
    procedure is a terminating sort and needs neither.
    """
    if isinstance(e, ShadowExpr):
        typecheck_shadow(sig, e)
    else:
        typecheck_2cell(sig, e)
    src, _, items = items_of(sig, e)
    return build(e, src, sort_items(sig, items))
