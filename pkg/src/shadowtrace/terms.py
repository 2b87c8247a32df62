"""Typed terms for cells of a strict bicategory with a shadow.

1-cells are flat words of generators (associators and unitors are
identities).  2-cells and shadow-level morphisms are small immutable
syntax trees; their boundaries are computed by :func:`typecheck_2cell`
and :func:`typecheck_shadow`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Union


class TypeCheckError(Exception):
    """Base class for typing failures; ``position`` is a child-index path."""

    def __init__(self, message: str, position: tuple[int, ...] = ()):
        super().__init__(message)
        self.position = tuple(position)

    def __str__(self) -> str:
        where = "/" + "/".join(map(str, self.position))
        return f"{self.args[0]} (at {where})"


class BoundaryMismatch(TypeCheckError):
    pass


class ShadowOnNonEndo(TypeCheckError):
    pass


class UnknownName(TypeCheckError):
    pass


class SymmetryNotDeclared(TypeCheckError):
    pass


class ShadowDisabled(TypeCheckError):
    pass


# ---------------------------------------------------------------- 1-cells


@dataclass(frozen=True)
class OneCell:
    """A composable word of 1-cell generators from ``src`` to ``tgt``.

    The empty word at a 0-cell ``A`` is the unit ``U_A``.
    """

    src: str
    tgt: str
    word: tuple[str, ...] = ()

    @staticmethod
    def unit(zero_cell: str) -> "OneCell":
        return OneCell(zero_cell, zero_cell, ())

    @property
    def is_unit(self) -> bool:
        return not self.word

    @property
    def is_endo(self) -> bool:
        return self.src == self.tgt

    def __len__(self) -> int:
        return len(self.word)

    def __mul__(self, other: "OneCell") -> "OneCell":
        # horizontal composite, diagrammatic order
        if self.tgt != other.src:
            raise BoundaryMismatch(
                f"cannot compose 1-cells {render_1cell(self)} and {render_1cell(other)}"
            )
        return OneCell(self.src, other.tgt, self.word + other.word)

    def __str__(self) -> str:
        return render_1cell(self)


def concat(cells: Iterable[OneCell]) -> OneCell:
    cells = list(cells)
    out = cells[0]
    for c in cells[1:]:
        out = out * c
    return out


# ---------------------------------------------------------------- signature


@dataclass(frozen=True)
class Diagnostic:
    message: str
    location: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


@dataclass(frozen=True)
class Signature:
    zero_cells: tuple[str, ...] = ()
    one_cell_gens: tuple[tuple[str, str, str], ...] = ()
    two_cell_gens: tuple[tuple[str, OneCell, OneCell], ...] = ()
    dual_pairs: tuple[tuple[str, OneCell, OneCell], ...] = ()
    symmetric_endo_homs: frozenset = field(default_factory=frozenset)
    shadow_enabled: bool = False

    @cached_property
    def one_cells(self) -> dict[str, tuple[str, str]]:
        return {name: (s, t) for name, s, t in self.one_cell_gens}

    @cached_property
    def two_cells(self) -> dict[str, tuple[OneCell, OneCell]]:
        return {name: (s, t) for name, s, t in self.two_cell_gens}

    @cached_property
    def pairs(self) -> dict[str, tuple[OneCell, OneCell]]:
        return {name: (x, y) for name, x, y in self.dual_pairs}

    def word(self, *names: str, at: str | None = None) -> OneCell:
        """Build a typed word; ``at`` is required for the empty word."""
        if not names:
            if at is None:
                raise ValueError("empty word needs a 0-cell")
            return OneCell.unit(at)
        cells = []
        for n in names:
            if n not in self.one_cells:
                raise UnknownName(f"unknown 1-cell generator {n!r}")
            s, t = self.one_cells[n]
            cells.append(OneCell(s, t, (n,)))
        return concat(cells)

    def zero_at(self, w: OneCell, k: int) -> str:
        """The 0-cell at cut ``k`` of word ``w`` (``0 <= k <= len(w)``)."""
        if k == 0:
            return w.src
        return self.one_cells[w.word[k - 1]][1]

    def slice(self, w: OneCell, i: int, j: int) -> OneCell:
        a = self.zero_at(w, i)
        b = self.zero_at(w, j)
        return OneCell(a, b, w.word[i:j])

    def replace(self, **changes) -> "Signature":
        data = {
            "zero_cells": self.zero_cells,
            "one_cell_gens": self.one_cell_gens,
            "two_cell_gens": self.two_cell_gens,
            "dual_pairs": self.dual_pairs,
            "symmetric_endo_homs": self.symmetric_endo_homs,
            "shadow_enabled": self.shadow_enabled,
        }
        data.update(changes)
        return Signature(**data)


def _check_word(sig: Signature, w: OneCell, where: str) -> list[Diagnostic]:
    zc = set(sig.zero_cells)
    out = []
    if w.src not in zc or w.tgt not in zc:
        out.append(Diagnostic("undeclared 0-cell in 1-cell expression", where))
        return out
    at = w.src
    for name in w.word:
        if name not in sig.one_cells:
            out.append(Diagnostic(f"undeclared 1-cell {name!r}", where))
            return out
        s, t = sig.one_cells[name]
        if s != at:
            out.append(Diagnostic(f"1-cell word does not chain at {name!r}", where))
            return out
        at = t
    if at != w.tgt:
        out.append(Diagnostic("1-cell word boundary mismatch", where))
    return out


def validate_signature(sig: Signature) -> list[Diagnostic]:
    """Return one diagnostic per violated signature invariant."""
    diags: list[Diagnostic] = []
    zc = set()
    for z in sig.zero_cells:
        if z in zc:
            diags.append(Diagnostic("duplicate generator", f"0cell {z}"))
        zc.add(z)
    seen: set[str] = set()
    for name, s, t in sig.one_cell_gens:
        if name in seen:
            diags.append(Diagnostic("duplicate generator", f"1cell {name}"))
        seen.add(name)
        if s not in zc or t not in zc:
            diags.append(Diagnostic("undeclared 0-cell", f"1cell {name}"))
    seen = set()
    for name, s, t in sig.two_cell_gens:
        if name in seen:
            diags.append(Diagnostic("duplicate generator", f"2cell {name}"))
        seen.add(name)
        where = f"2cell {name}"
        bad = _check_word(sig, s, where) + _check_word(sig, t, where)
        diags.extend(bad)
        if not bad and (s.src != t.src or s.tgt != t.tgt):
            diags.append(Diagnostic("source and target are not parallel", where))
    seen = set()
    for name, x, y in sig.dual_pairs:
        where = f"dualpair {name}"
        if name in seen:
            diags.append(Diagnostic("duplicate generator", where))
        seen.add(name)
        bad = _check_word(sig, x, where) + _check_word(sig, y, where)
        diags.extend(bad)
        if not bad and (x.src != y.tgt or x.tgt != y.src):
            diags.append(Diagnostic("dual pair boundary mismatch", where))
    for z in sorted(sig.symmetric_endo_homs):
        if z not in zc:
            diags.append(Diagnostic("undeclared 0-cell", f"symmetric {z}"))
    return diags


# ---------------------------------------------------------------- 2-cells


class TwoCell:
    __slots__ = ()

    def children(self) -> tuple:
        return ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Id(TwoCell):
    x: OneCell


@dataclass(frozen=True, repr=False)
class Gen(TwoCell):
    name: str


@dataclass(frozen=True, repr=False)
class Coev(TwoCell):
    pair: str


@dataclass(frozen=True, repr=False)
class Eval(TwoCell):
    pair: str


@dataclass(frozen=True, repr=False)
class Gamma(TwoCell):
    x: OneCell
    y: OneCell


@dataclass(frozen=True, repr=False)
class VComp(TwoCell):
    """``f`` followed by ``g``."""

    f: TwoCell
    g: TwoCell

    def children(self):
        return (self.f, self.g)


@dataclass(frozen=True, repr=False)
class HComp(TwoCell):
    f: TwoCell
    g: TwoCell

    def children(self):
        return (self.f, self.g)


ATOMS = (Gen, Coev, Eval, Gamma)


# ---------------------------------------------------------------- shadows


class ShadowExpr:
    __slots__ = ()

    def children(self) -> tuple:
        return ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Sh(ShadowExpr):
    f: TwoCell

    def children(self):
        return (self.f,)


@dataclass(frozen=True, repr=False)
class Theta(ShadowExpr):
    x: OneCell
    y: OneCell


@dataclass(frozen=True, repr=False)
class SComp(ShadowExpr):
    u: ShadowExpr
    v: ShadowExpr

    def children(self):
        return (self.u, self.v)


@dataclass(frozen=True, repr=False)
class SId(ShadowExpr):
    x: OneCell


Expr = Union[TwoCell, ShadowExpr]

for _cls in (Id, Gen, Coev, Eval, Gamma, VComp, HComp, Sh, Theta, SComp, SId):
    _cls.__repr__ = lambda self: f"<{type(self).__name__} {render(self)}>"


def rebuild(e: Expr, children: list) -> Expr:
    if isinstance(e, VComp):
        return VComp(*children)
    if isinstance(e, HComp):
        return HComp(*children)
    if isinstance(e, SComp):
        return SComp(*children)
    if isinstance(e, Sh):
        return Sh(children[0])
    return e


def subterm(e: Expr, path: tuple[int, ...]) -> Expr:
    for i in path:
        kids = e.children()
        if i >= len(kids):
            raise IndexError(f"no child {i} below {render(e)}")
        e = kids[i]
    return e


def replace_at(e: Expr, path: tuple[int, ...], new: Expr) -> Expr:
    if not path:
        return new
    kids = list(e.children())
    i = path[0]
    if i >= len(kids):
        raise IndexError(f"no child {i} below {render(e)}")
    kids[i] = replace_at(kids[i], path[1:], new)
    return rebuild(e, kids)


def size(e: Expr) -> int:
    return 1 + sum(size(c) for c in e.children())


# ---------------------------------------------------------------- typing


def atom_boundary(sig: Signature, e: TwoCell, pos=()) -> tuple[OneCell, OneCell]:
    if isinstance(e, Gen):
        if e.name not in sig.two_cells:
            raise UnknownName(f"unknown 2-cell generator {e.name!r}", pos)
        return sig.two_cells[e.name]
    if isinstance(e, (Coev, Eval)):
        if e.pair not in sig.pairs:
            raise UnknownName(f"unknown dual pair {e.pair!r}", pos)
        x, y = sig.pairs[e.pair]
        if isinstance(e, Coev):
            return OneCell.unit(x.src), x * y
        return y * x, OneCell.unit(x.tgt)
    if isinstance(e, Gamma):
        x, y = e.x, e.y
        if not (x.is_endo and y.is_endo and x.src == y.src):
            raise BoundaryMismatch("gamma needs endo-1-cells over one 0-cell", pos)
        if x.src not in sig.symmetric_endo_homs:
            raise SymmetryNotDeclared(
                f"gamma used at 0-cell {x.src!r}, which is not declared symmetric", pos
            )
        return x * y, y * x
    raise TypeError(f"not an atom: {e!r}")


def typecheck_2cell(sig: Signature, e: TwoCell, _pos=()) -> tuple[OneCell, OneCell]:
    """Return ``(source, target)`` of a 2-cell or raise a :class:`TypeCheckError`."""
    if isinstance(e, Id):
        return e.x, e.x
    if isinstance(e, ATOMS):
        return atom_boundary(sig, e, _pos)
    if isinstance(e, VComp):
        s1, t1 = typecheck_2cell(sig, e.f, _pos + (0,))
        s2, t2 = typecheck_2cell(sig, e.g, _pos + (1,))
        if t1 != s2:
            raise BoundaryMismatch(
                f"vertical composite does not chain: {render_1cell(t1)} vs {render_1cell(s2)}",
                _pos,
            )
        return s1, t2
    if isinstance(e, HComp):
        s1, t1 = typecheck_2cell(sig, e.f, _pos + (0,))
        s2, t2 = typecheck_2cell(sig, e.g, _pos + (1,))
        if s1.tgt != s2.src:
            raise BoundaryMismatch(
                f"horizontal composite does not chain at 0-cells {s1.tgt!r}/{s2.src!r}",
                _pos,
            )
        return s1 * s2, t1 * t2
    raise TypeError(f"not a 2-cell expression: {e!r}")


def typecheck_shadow(sig: Signature, e: ShadowExpr, _pos=()) -> tuple[OneCell, OneCell]:
    """Boundary of a shadow-level morphism as a pair of endo-1-cells."""
    if not sig.shadow_enabled:
        raise ShadowDisabled("signature has no shadow", _pos)
    if isinstance(e, Sh):
        s, t = typecheck_2cell(sig, e.f, _pos + (0,))
        if not s.is_endo:
            raise ShadowOnNonEndo(
                f"shadow of a 2-cell on {render_1cell(s)}, which is not an endo-1-cell", _pos
            )
        return s, t
    if isinstance(e, Theta):
        x, y = e.x, e.y
        if x.tgt != y.src or y.tgt != x.src:
            raise BoundaryMismatch("theta needs X: A->B and Y: B->A", _pos)
        return x * y, y * x
    if isinstance(e, SId):
        if not e.x.is_endo:
            raise ShadowOnNonEndo("shadow identity on a non-endo 1-cell", _pos)
        return e.x, e.x
    if isinstance(e, SComp):
        s1, t1 = typecheck_shadow(sig, e.u, _pos + (0,))
        s2, t2 = typecheck_shadow(sig, e.v, _pos + (1,))
        if t1 != s2:
            raise BoundaryMismatch(
                f"shadow composite does not chain: <<{render_1cell(t1)}>> vs <<{render_1cell(s2)}>>",
                _pos,
            )
        return s1, t2
    raise TypeError(f"not a shadow expression: {e!r}")


def typecheck(sig: Signature, e: Expr) -> tuple[OneCell, OneCell]:
    if isinstance(e, ShadowExpr):
        return typecheck_shadow(sig, e)
    return typecheck_2cell(sig, e)


# ---------------------------------------------------------------- rendering


def render_1cell(w: OneCell, unicode: bool = False) -> str:
    if not w.word:
        return f"U[{w.src}]"
    return (" ⊗ " if unicode else " (x) ").join(w.word)


def render(e: Expr, unicode: bool = False) -> str:
    """Canonical text rendering, parsed back by :mod:`shadowtrace.dsl`."""
    tensor = " ⊗ " if unicode else " (x) "
    w = lambda c: render_1cell(c, unicode)  # noqa: E731

    def go(e, ctx):
        # ctx: 0 = anywhere, 1 = left of ';', 2 = right of ';' or left of (x), 3 = right of (x)
        if isinstance(e, Id):
            return f"id[{w(e.x)}]"
        if isinstance(e, Gen):
            return e.name
        if isinstance(e, Coev):
            return f"coev[{e.pair}]"
        if isinstance(e, Eval):
            return f"eval[{e.pair}]"
        if isinstance(e, Gamma):
            return f"{'γ' if unicode else 'gamma'}[{w(e.x)}, {w(e.y)}]"
        if isinstance(e, Theta):
            return f"{'θ' if unicode else 'theta'}[{w(e.x)}, {w(e.y)}]"
        if isinstance(e, SId):
            return f"sid[{w(e.x)}]"
        if isinstance(e, Sh):
            inner = go(e.f, 0)
            return f"⟨⟨{inner}⟩⟩" if unicode else f"sh[{inner}]"
        if isinstance(e, (VComp, SComp)):
            a, b = e.children()
            s = f"{go(a, 1)} ; {go(b, 2)}"
            return f"({s})" if ctx >= 2 else s
        if isinstance(e, HComp):
            s = f"{go(e.f, 2)}{tensor}{go(e.g, 3)}"
            return f"({s})" if ctx >= 3 else s
        raise TypeError(e)

    return go(e, 0)
