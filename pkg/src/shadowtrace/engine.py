"""Proof scripts: replay, bounded search, and programmatic construction."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .normal import Layer, build, flatten, item_term, items_of, normalize
from .rules import RuleError, RuleSet, WindowRule, match_atoms
from .terms import (
    Expr,
    OneCell,
    ShadowExpr,
    Signature,
    Theta,
    TypeCheckError,
    atom_boundary,
    render,
    render_1cell,
    replace_at,
    subterm,
    typecheck,
)

PSEUDO_RULES = ("NF", "FLAT", "COH")


class StepMismatch(Exception):
    def __init__(self, index: int, reason: str):
        super().__init__(f"step {index}: {reason}")
        self.index = index
        self.reason = reason


class ScriptFailure(Exception):
    """A generated script did not replay (an internal consistency guard)."""


@dataclass(frozen=True)
class Step:
    rule: str
    path: tuple = ()
    subst: tuple = ()  # sorted (name, value) pairs
    inverse: bool = False

    @staticmethod
    def make(rule: str, path=(), subst: Optional[dict] = None, inverse: bool = False) -> "Step":
        return Step(rule, tuple(path), tuple(sorted((subst or {}).items())), inverse)

    @property
    def bindings(self) -> dict:
        return dict(self.subst)

    def reversed(self) -> "Step":
        if self.rule in PSEUDO_RULES:
            raise ValueError("pseudo-steps are not reversible")
        return Step(self.rule, self.path, self.subst, not self.inverse)

    def to_text(self) -> str:
        head = self.rule + ("^-1" if self.inverse else "")
        where = "/" + "/".join(str(i) for i in self.path)
        if not self.subst:
            return f"{head} @ {where}"
        parts = []
        for k, v in self.subst:
            parts.append(f"{k}={render_1cell(v) if isinstance(v, OneCell) else render(v)}")
        return f"{head} @ {where} {{ {', '.join(parts)} }}"


@dataclass
class ProofScript:
    goal: tuple  # (lhs, rhs)
    steps: list = field(default_factory=list)

    def to_text(self) -> str:
        return "".join(s.to_text() + "\n" for s in self.steps)

    def __len__(self):
        return len(self.steps)


@dataclass
class EqualityCertificate:
    goal: tuple
    verdict: str  # "Proved" | "Refuted" | "Unknown"
    script: Optional[ProofScript] = None
    witness: object = None
    nodes: int = 0
    depth: int = 0

    @property
    def proved(self) -> bool:
        return self.verdict == "Proved"

    def to_text(self) -> str:
        lhs, rhs = self.goal
        head = f"goal: {render(lhs)} == {render(rhs)}\nverdict: {self.verdict}\n"
        if self.script is not None:
            head += self.script.to_text()
        return head


# ---------------------------------------------------------------- replay


def _boundary(sig, e):
    return typecheck(sig, e)


def apply_step(sig: Signature, rules: RuleSet, e: Expr, step: Step, index: int = 0) -> Expr:
    try:
        sub = subterm(e, step.path)
    except IndexError as exc:
        raise StepMismatch(index, f"bad position: {exc}") from None
    b = step.bindings
    try:
        if step.rule == "NF":
            new = normalize(sig, sub)
        elif step.rule == "FLAT":
            typecheck(sig, sub)
            new = flatten(sig, sub)
        elif step.rule == "COH":
            if "to" not in b:
                raise StepMismatch(index, "COH needs a target 'to'")
            new = b["to"]
            if isinstance(new, ShadowExpr) != isinstance(sub, ShadowExpr):
                raise StepMismatch(index, "COH target has the wrong level")
            if normalize(sig, sub) != normalize(sig, new):
                raise StepMismatch(index, "COH target is not equal up to coherence")
        else:
            if step.rule not in rules:
                raise StepMismatch(index, f"unknown rule {step.rule}")
            rule = rules[step.rule]
            for k in b:
                if k != "ctx" and k not in rule.metas:
                    raise StepMismatch(index, f"rule {step.rule} has no metavariable {k}")
            left, right = rule.instantiate(sig, b)
            if step.inverse:
                left, right = right, left
            if sub != left:
                raise StepMismatch(
                    index, f"no redex for {step.rule}: found {render(sub)}, expected {render(left)}"
                )
            if _boundary(sig, left) != _boundary(sig, right):
                raise StepMismatch(index, "rule instance changes the boundary")
            new = right
        out = replace_at(e, step.path, new)
        if _boundary(sig, out) != _boundary(sig, e):
            raise StepMismatch(index, "step changes the boundary")
    except StepMismatch:
        raise
    except (RuleError, TypeCheckError, TypeError, KeyError) as exc:
        raise StepMismatch(index, f"{type(exc).__name__}: {exc}") from None
    return out


def verify_script(sig: Signature, rules: RuleSet, script: ProofScript) -> EqualityCertificate:
    """Replay ``script``; raise :class:`StepMismatch` at the first bad step."""
    lhs, rhs = script.goal
    if _boundary(sig, lhs) != _boundary(sig, rhs):
        raise TypeCheckError("goal sides have different boundaries")
    e = lhs
    for i, st in enumerate(script.steps):
        e = apply_step(sig, rules, e, st, i)
    if e != rhs:
        raise StepMismatch(len(script.steps), f"script ends at {render(e)}, not the goal")
    return EqualityCertificate(script.goal, "Proved", script)


# ---------------------------------------------------------------- windows


def _spine(level_shadow: bool, src: OneCell, items: list) -> Expr:
    return build("shadow" if level_shadow else "2cell", src, items)


def window_steps(sig, rule: WindowRule, src: OneCell, items: list, i: int, subst: dict,
                 inverse: bool = False) -> tuple[list, list]:
    """Rewrite the window of ``rule`` starting at item ``i``.

    Returns ``(steps, new_items)``; a unit-law step is appended when the
    window was at the bottom of the spine and rewrote to nothing.
    """
    shadow = rule.level == "shadow"
    atoms, _ = rule.side(inverse)
    k = len(atoms)
    n = len(items)
    s = dict(subst)
    s.pop("ctx", None)
    if i > 0:
        s["ctx"] = _spine(shadow, src, items[:i])
    new = rule.side_items(sig, s, not inverse)
    path = (0,) * (n - (i + k))
    steps = [Step.make(rule.name, path, s, inverse)]
    out = list(items[:i]) + new + list(items[i + k:])
    if i == 0 and not new and n - k > 0:
        rest = len(out)
        first = item_term(out[0]) if shadow else out[0].term()
        steps.append(Step.make("R6.sl" if shadow else "R6.vl", (0,) * (rest - 1),
                               {"u" if shadow else "f": first}))
    return steps, out


def _typed_ok(sig, items) -> bool:
    try:
        for it in items:
            if isinstance(it, Layer):
                atom_boundary(sig, it.atom)
        return True
    except TypeCheckError:
        return False


def moves(sig: Signature, rules: list, src: OneCell, items: tuple):
    """All window-rule rewrites of a layered state (insertions excluded)."""
    n = len(items)
    for rule in rules:
        for inverse in (False, True):
            atoms, _ = rule.side(inverse)
            k = len(atoms)
            if k == 0 or k > n:
                continue
            for i in range(n - k + 1):
                window = items[i:i + k]
                for s in match_atoms(sig, atoms, window):
                    try:
                        new = rule.side_items(sig, s, not inverse)
                    except (RuleError, TypeCheckError):
                        continue
                    if not _typed_ok(sig, new):
                        continue
                    if rule.zero_cell is not None and any(
                        isinstance(it, Layer) and type(it.atom).__name__ == "Gamma"
                        and it.atom.x.src != rule.zero_cell for it in new + list(window)
                    ):
                        continue
                    yield rule, i, s, inverse


def _key(shadow, src, items) -> str:
    return render(_spine(shadow, src, list(items)))


def search_equal(sig: Signature, rules: RuleSet, lhs: Expr, rhs: Expr,
                 max_nodes: int = 100_000, max_depth: int = 8,
                 include_derived: bool = False) -> EqualityCertificate:
    """Bidirectional breadth-first search for a proof of ``lhs == rhs``.

    Both frontiers grow by one level per round and meets are only taken
    at round boundaries, so the verdict does not depend on which side is
    called ``lhs``.
    """
    goal = (lhs, rhs)
    if _boundary(sig, lhs) != _boundary(sig, rhs):
        raise TypeCheckError("goal sides have different boundaries")
    if lhs == rhs:
        return EqualityCertificate(goal, "Proved", ProofScript(goal, []))
    shadow = isinstance(lhs, ShadowExpr)
    level = "shadow" if shadow else "2cell"
    wrules = rules.window_rules(level, include_derived)
    src, _, li = items_of(sig, normalize(sig, lhs))
    _, _, ri = items_of(sig, normalize(sig, rhs))

    sides = []
    for start in (tuple(li), tuple(ri)):
        k = _key(shadow, src, start)
        sides.append({"seen": {k: (None, [], 0, start)}, "frontier": [k]})

    def meet_path():
        best = None
        a, b = sides[0]["seen"], sides[1]["seen"]
        for k in a.keys() & b.keys():
            d = a[k][2] + b[k][2]
            if d <= max_depth and (best is None or (d, k) < best):
                best = (d, k)
        return best

    def trail(seen, k):
        steps = []
        while seen[k][0] is not None:
            parent, st, _, _ = seen[k]
            steps = st + steps
            k = parent
        return steps

    nodes = 2
    rnd = 0
    found = meet_path()
    while found is None and rnd < max_depth:
        if not sides[0]["frontier"] and not sides[1]["frontier"]:
            break
        rnd += 1
        for side in sides:
            seen, nxt = side["seen"], []
            for k in side["frontier"]:
                _, _, d, items = seen[k]
                for rule, i, s, inv in moves(sig, wrules, src, items):
                    steps, out = window_steps(sig, rule, src, list(items), i, s, inv)
                    kk = _key(shadow, src, out)
                    if kk in seen:
                        continue
                    seen[kk] = (k, steps, d + 1, tuple(out))
                    nxt.append(kk)
                    nodes += 1
                    if nodes > max_nodes:
                        return EqualityCertificate(goal, "Unknown", nodes=nodes, depth=rnd)
            side["frontier"] = nxt
        found = meet_path()
    if found is None:
        return EqualityCertificate(goal, "Unknown", nodes=nodes, depth=rnd)
    _, k = found
    fwd = trail(sides[0]["seen"], k)
    back = [s.reversed() for s in reversed(trail(sides[1]["seen"], k))]
    steps = []
    nl = normalize(sig, lhs)
    if nl != lhs:
        steps.append(Step.make("NF"))
    steps += fwd + back
    if normalize(sig, rhs) != rhs:
        steps.append(Step.make("COH", (), {"to": rhs}))
    script = ProofScript(goal, steps)
    try:
        cert = verify_script(sig, rules, script)
    except StepMismatch as exc:  # pragma: no cover - guard
        raise ScriptFailure(f"search produced a bad script: {exc}") from None
    cert.nodes, cert.depth = nodes, found[0]
    return cert


# ---------------------------------------------------------------- builder


class ScriptBuilder:
    """Assemble a script by acting on the layered form of the current term."""

    def __init__(self, sig: Signature, rules: RuleSet, lhs: Expr):
        self.sig = sig
        self.rules = rules
        self.lhs = lhs
        self.expr = lhs
        self.steps: list[Step] = []
        self.shadow = isinstance(lhs, ShadowExpr)
        self.src = typecheck(sig, lhs)[0]

    # state access
    @property
    def items(self) -> list:
        return items_of(self.sig, self.expr)[2]

    def _push(self, st: Step):
        self.expr = apply_step(self.sig, self.rules, self.expr, st, len(self.steps))
        self.steps.append(st)

    def _canonical(self):
        e = _spine(self.shadow, self.src, self.items)
        if e != self.expr:
            raise ScriptFailure("term is not in layered form; call flat() first")

    def flat(self) -> "ScriptBuilder":
        if flatten(self.sig, self.expr) != self.expr:
            self._push(Step.make("FLAT"))
        return self

    def nf(self) -> "ScriptBuilder":
        if normalize(self.sig, self.expr) != self.expr:
            self._push(Step.make("NF"))
        return self

    def step(self, rule: str, path=(), inverse=False, **subst) -> "ScriptBuilder":
        self._push(Step.make(rule, path, subst, inverse))
        return self

    def at(self, rule: str, i: int, inverse: bool = False, **subst) -> "ScriptBuilder":
        """Apply a window rule whose window starts at item ``i``."""
        self._canonical()
        r = self.rules[rule]
        if not r.side(inverse)[0] and not r.side(not inverse)[0]:
            return self
        steps, _ = window_steps(self.sig, r, self.src, self.items, i, subst, inverse)
        for st in steps:
            self._push(st)
        return self

    def find(self, rule: str, inverse: bool = False, **fixed) -> "ScriptBuilder":
        """Apply ``rule`` at the first window matching the given bindings."""
        self._canonical()
        r = self.rules[rule]
        atoms, _ = r.side(inverse)
        items = self.items
        for i in range(len(items) - len(atoms) + 1):
            for s in match_atoms(self.sig, atoms, items[i:i + len(atoms)], fixed):
                return self.at(rule, i, inverse, **s)
        raise ScriptFailure(f"no window for {rule} with {fixed}")

    def swap(self, i: int) -> "ScriptBuilder":
        """Exchange independent adjacent layers ``i`` and ``i + 1``."""
        self._canonical()
        items = self.items
        g, h = items[i], items[i + 1]
        if not (isinstance(g, Layer) and isinstance(h, Layer)):
            raise ScriptFailure("can only exchange two layers")
        sig = self.sig
        gs, gt = atom_boundary(sig, g.atom)
        hs, ht = atom_boundary(sig, h.atom)
        w = h.left * hs * h.right
        c, d = len(g.left), len(g.left) + len(gt)
        a, b = len(h.left), len(h.left) + len(hs)
        name = "R5x.sh" if self.shadow else "R5x"
        if a >= d:
            s = {"W1": g.left, "W2": sig.slice(w, d, a), "W3": h.right, "g": g.atom, "h": h.atom}
            return self.at(name, i, False, **s)
        if b <= c:
            # current pair is the right-hand side of the rule with roles exchanged
            s = {"W1": h.left, "W2": sig.slice(w, b, c), "W3": g.right, "g": h.atom, "h": g.atom}
            return self.at(name, i, True, **s)
        raise ScriptFailure(f"layers {i} and {i + 1} are not independent")

    def move(self, i: int, j: int) -> "ScriptBuilder":
        """Move the item at ``i`` to position ``j`` by adjacent exchanges."""
        while i > j:
            self.swap(i - 1)
            i -= 1
        while i < j:
            self.swap(i)
            i += 1
        return self

    def coh(self, to: Expr) -> "ScriptBuilder":
        if self.expr != to:
            self._push(Step.make("COH", (), {"to": to}))
        return self

    def script(self, rhs: Expr) -> ProofScript:
        self.coh(rhs)
        ps = ProofScript((self.lhs, rhs), list(self.steps))
        try:
            verify_script(self.sig, self.rules, ps)
        except StepMismatch as exc:
            raise ScriptFailure(str(exc)) from None
        return ps


def is_theta(it) -> bool:
    return isinstance(it, Theta)
