"""Finite groups, finite covers ``BK -> BG`` and the conjugacy-class transfer.

Conventions: cosets are left cosets ``x K`` and the transfer conjugates as
``x^-1 g x``.  Permutations compose right to left, ``(gh)(x) = g(h(x))``,
and are labelled in 1-based cycle notation.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

DEFAULT_ORDER_BOUND = 2000


class GroupError(ValueError):
    pass


class NotASubgroup(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------- permutations


def perm_compose(g: tuple, h: tuple) -> tuple:
    return tuple(g[h[x]] for x in range(len(h)))


def perm_label(p: tuple) -> str:
    n = len(p)
    seen = [False] * n
    parts = []
    sep = "," if n >= 10 else ""
    for start in range(n):
        if seen[start] or p[start] == start:
            seen[start] = True
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(str(x + 1))
            x = p[x]
        parts.append("(" + sep.join(cyc) + ")")
    return "".join(parts) or "e"


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> tuple:
    """Parse ``"(123)(45)"``, ``"(1,10)"`` or ``"e"`` into an image tuple."""
    text = text.strip()
    img = list(range(degree))
    if text in ("e", "()", ""):
        return tuple(img)
    pos = 0
    for m in _CYCLE.finditer(text):
        if text[pos:m.start()].strip():
            raise GroupError(f"bad cycle notation {text!r}")
        pos = m.end()
        body = m.group(1).strip()
        pts = [int(t) for t in body.split(",")] if "," in body else [int(c) for c in body.replace(" ", "")]
        if len(set(pts)) != len(pts) or any(not 1 <= x <= degree for x in pts):
            raise GroupError(f"bad cycle {m.group(0)!r} for degree {degree}")
        # compose the new cycle on the right
        cyc = list(range(degree))
        for a, b in zip(pts, pts[1:] + pts[:1]):
            cyc[a - 1] = b - 1
        img = [img[cyc[x]] for x in range(degree)]
    if text[pos:].strip():
        raise GroupError(f"bad cycle notation {text!r}")
    return tuple(img)


def _perm_sign(p: tuple) -> int:
    n, seen, s = len(p), set(), 1
    for i in range(n):
        if i in seen:
            continue
        x, length = i, 0
        while x not in seen:
            seen.add(x)
            x = p[x]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


# ---------------------------------------------------------------- groups


@dataclass
class FiniteGroup:
    table: list
    labels: list
    identity: int = 0
    generators: Optional[list] = None
    perms: Optional[list] = None  # image tuples when built from permutations
    name: str = ""
    inv: list = field(default_factory=list)

    def __post_init__(self):
        if not self.inv:
            n = self.order
            self.inv = [0] * n
            for a in range(n):
                row = self.table[a]
                for b in range(n):
                    if row[b] == self.identity:
                        self.inv[a] = b
                        break
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def conj(self, x: int, g: int) -> int:
        """``x^-1 g x``."""
        return self.table[self.table[self.inv[x]][g]][x]

    def element(self, token) -> int:
        if isinstance(token, int):
            if not 0 <= token < self.order:
                raise GroupError(f"element index {token} out of range")
            return token
        tok = str(token).strip()
        if tok in self._index:
            return self._index[tok]
        if self.perms is not None and tok.startswith("("):
            p = parse_cycles(tok, len(self.perms[0]))
            try:
                return self.perms.index(p)
            except ValueError:
                raise GroupError(f"{tok} is not in the group") from None
        if tok.lstrip("-").isdigit():
            return self.element(int(tok))
        raise GroupError(f"unknown element {tok!r}")

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def generated(self, gens: Iterable[int]) -> tuple:
        gens = list(gens)
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    c = self.table[a][g]
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
        return tuple(sorted(seen))

    def small_generating_set(self, subset: Sequence[int]) -> list:
        """A greedy generating set for the subgroup ``subset`` (assumed closed)."""
        target = set(subset)
        gens: list = []
        have = {self.identity}
        for g in sorted(target):
            if g not in have:
                gens.append(g)
                have = set(self.generated(gens))
            if have == target:
                break
        return gens

    def classes(self, subset: Optional[Sequence[int]] = None) -> list:
        """Conjugacy classes of the subgroup ``subset`` (default: the whole group), sorted."""
        elems = sorted(subset) if subset is not None else list(range(self.order))
        seen: set = set()
        out = []
        for g in elems:
            if g in seen:
                continue
            cls = sorted({self.conj(x, g) for x in elems})
            seen.update(cls)
            out.append(tuple(cls))
        return out

    def check(self, bound: int = DEFAULT_ORDER_BOUND) -> None:
        n = self.order
        if n > bound:
            raise GroupError(f"group order {n} exceeds the bound {bound}")
        t = self.table
        for a in range(n):
            if sorted(t[a]) != list(range(n)):
                raise GroupError(f"row {a} of the table is not a permutation")
            if t[a][self.identity] != a or t[self.identity][a] != a:
                raise GroupError(f"{self.identity} is not a two-sided identity")
        for a in range(n):
            ta = t[a]
            for b in range(n):
                tab = t[ta[b]]
                tb = t[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise GroupError(f"table is not associative at ({a}, {b}, {c})")

    # -- constructors

    @staticmethod
    def from_table(table: list, labels: Optional[list] = None, check: bool = True,
                   bound: int = DEFAULT_ORDER_BOUND, name: str = "") -> "FiniteGroup":
        n = len(table)
        if n == 0 or any(len(r) != n for r in table):
            raise GroupError("the table must be a non-empty square")
        if n > bound:
            raise GroupError(f"group order {n} exceeds the bound {bound}")
        table = [list(map(int, r)) for r in table]
        ident = next((e for e in range(n) if table[e] == list(range(n))), None)
        if ident is None:
            raise GroupError("no identity element in the table")
        G = FiniteGroup(table, list(labels or [str(i) for i in range(n)]), ident, name=name)
        if check:
            G.check(bound)
        G.generators = G.small_generating_set(range(n))
        return G

    @staticmethod
    def from_permutations(degree: int, generators: Sequence, bound: int = DEFAULT_ORDER_BOUND,
                          name: str = "") -> "FiniteGroup":
        gens = []
        for g in generators:
            p = parse_cycles(g, degree) if isinstance(g, str) else tuple(g)
            if sorted(p) != list(range(degree)):
                raise GroupError(f"generator {g!r} is not a permutation of degree {degree}")
            gens.append(p)
        ident = tuple(range(degree))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    c = perm_compose(a, g)
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
                        if len(seen) > bound:
                            raise GroupError(f"group order exceeds the bound {bound}")
            frontier = nxt
        perms = sorted(seen)
        pos = {p: i for i, p in enumerate(perms)}
        table = [[pos[perm_compose(a, b)] for b in perms] for a in perms]
        G = FiniteGroup(table, [perm_label(p) for p in perms], 0, None, perms, name)
        G.generators = sorted({pos[g] for g in gens} - {0})
        return G

    @staticmethod
    def from_json(obj, bound: int = DEFAULT_ORDER_BOUND) -> "FiniteGroup":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if "table" in obj:
            if "order" in obj and int(obj["order"]) != len(obj["table"]):
                raise GroupError("order does not match the table size")
            return FiniteGroup.from_table(obj["table"], obj.get("labels"), bound=bound,
                                          name=obj.get("name", ""))
        if "perm_degree" in obj:
            gens = [g if isinstance(g, str) else "".join(g) if all(isinstance(c, str) for c in g) else g
                    for g in obj["generators"]]
            return FiniteGroup.from_permutations(int(obj["perm_degree"]), gens, bound,
                                                 obj.get("name", ""))
        raise GroupError("group JSON needs either 'table' or 'perm_degree' and 'generators'")

    def to_json(self) -> dict:
        return {"order": self.order, "table": self.table, "labels": self.labels}


# ---------------------------------------------------------------- standard groups


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup.from_table([[(a + b) % n for b in range(n)] for a in range(n)],
                                  check=False, name=f"Z{n}")


def abelian_group(orders: Sequence[int]) -> FiniteGroup:
    """``Z/o1 x Z/o2 x ...`` with mixed-radix element indices."""
    orders = list(orders)
    n = 1
    for o in orders:
        n *= o

    def digits(a):
        out = []
        for o in reversed(orders):
            out.append(a % o)
            a //= o
        return out[::-1]

    def index(ds):
        a = 0
        for d, o in zip(ds, orders):
            a = a * o + d
        return a

    ds = [digits(a) for a in range(n)]
    table = [[index([(x + y) % o for x, y, o in zip(ds[a], ds[b], orders)]) for b in range(n)]
             for a in range(n)]
    labels = [str(a) if len(orders) == 1 else "(" + ",".join(map(str, ds[a])) + ")" for a in range(n)]
    return FiniteGroup.from_table(table, labels, check=False,
                                  name="x".join(f"Z{o}" for o in orders))


def symmetric_group(n: int) -> FiniteGroup:
    if n < 2:
        return FiniteGroup.from_permutations(max(n, 1), [], name=f"S{n}")
    gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return FiniteGroup.from_permutations(n, gens, name=f"S{n}")


def alternating_group(n: int) -> FiniteGroup:
    gens = [tuple([1, 2, 0] + list(range(3, n)))] if n >= 3 else []
    for k in range(3, n):
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0
        gens.append(tuple(p))
    return FiniteGroup.from_permutations(max(n, 1), gens, name=f"A{n}")


def dihedral_group(n: int) -> FiniteGroup:
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return FiniteGroup.from_permutations(n, [rot, ref], name=f"D{n}")


# ---------------------------------------------------------------- subgroups


def parse_subgroup(G: FiniteGroup, spec) -> tuple:
    """Element indices of the subgroup described by ``spec``.

    Accepted: a list of elements, ``"{a,b,...}"``, ``"<g1,g2>"``,
    ``"alt"``/``"a<n>"`` (even permutations), ``"trivial"``, ``"whole"``,
    ``"center"`` and ``"derived"``.
    """
    if isinstance(spec, (list, tuple)):
        return tuple(sorted({G.element(x) for x in spec}))
    s = str(spec).strip()
    low = s.lower()
    if low == "trivial":
        return (G.identity,)
    if low == "whole":
        return tuple(range(G.order))
    if low == "center":
        return tuple(g for g in range(G.order) if all(G.mul(g, h) == G.mul(h, g) for h in range(G.order)))
    if low == "derived":
        comms = {G.mul(G.mul(G.inv[a], G.inv[b]), G.mul(a, b)) for a in range(G.order) for b in range(G.order)}
        return G.generated(comms)
    if low == "alt" or re.fullmatch(r"a\d+", low):
        if G.perms is None:
            raise GroupError("the alternating subgroup needs a permutation group")
        if low != "alt" and int(low[1:]) != len(G.perms[0]):
            raise GroupError(f"{s} does not match the permutation degree {len(G.perms[0])}")
        return tuple(i for i, p in enumerate(G.perms) if _perm_sign(p) == 1)
    if s.startswith("{") and s.endswith("}"):
        body = s[1:-1].strip()
        return tuple(sorted({G.element(t) for t in _split_elems(body)})) if body else ()
    if s.startswith("<") and s.endswith(">"):
        body = s[1:-1].strip()
        gens = [G.element(t) for t in _split_elems(body)] if body else []
        return G.generated(gens)
    raise GroupError(f"cannot parse subgroup spec {s!r}")


def _split_elems(body: str) -> list:
    # commas inside parentheses belong to cycle notation
    out, depth, cur = [], 0, ""
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def subgroups_of_cyclic(n: int) -> list:
    return [tuple(range(0, n, n // d)) for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------- covers


@dataclass(frozen=True)
class ConjClass:
    rep: int
    members: tuple
    label: str

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class CoverSpec:
    G: FiniteGroup
    K: tuple
    reps: tuple
    g_classes: list
    k_classes: list
    g_class_of: dict
    k_class_of: dict

    @property
    def index(self) -> int:
        return len(self.reps)


def _check_subgroup(G: FiniteGroup, K: Sequence[int]) -> None:
    ks = set(K)
    if G.identity not in ks:
        raise NotASubgroup(f"subgroup misses the identity {G.labels[G.identity]}", (G.identity,))
    for a in sorted(ks):
        for b in sorted(ks):
            c = G.mul(a, b)
            if c not in ks:
                raise NotASubgroup(
                    f"not closed: {G.labels[a]} * {G.labels[b]} = {G.labels[c]} is missing", (a, b))
    # a finite subset closed under products is closed under inverses


def build_cover(G: FiniteGroup, K: Iterable[int], reps: Optional[Sequence[int]] = None) -> CoverSpec:
    K = tuple(sorted(set(K)))
    for k in K:
        if not 0 <= k < G.order:
            raise NotASubgroup(f"element {k} is not in the group", (k,))
    _check_subgroup(G, K)
    coset_of: dict = {}
    least = []
    for x in range(G.order):
        if x in coset_of:
            continue
        for k in K:
            coset_of[G.mul(x, k)] = len(least)
        least.append(x)
    if reps is None:
        reps = tuple(least)
    else:
        reps = tuple(reps)
        hit = sorted(coset_of[x] for x in reps)
        if hit != list(range(len(least))):
            raise GroupError("coset representatives must meet every left coset exactly once")
    gc = [ConjClass(c[0], c, G.labels[c[0]]) for c in G.classes()]
    kc = [ConjClass(c[0], c, G.labels[c[0]]) for c in G.classes(K)]
    g_of = {g: i for i, c in enumerate(gc) for g in c.members}
    k_of = {k: i for i, c in enumerate(kc) for k in c.members}
    return CoverSpec(G, K, reps, gc, kc, g_of, k_of)


def rechoose(cover: CoverSpec, rng: random.Random) -> CoverSpec:
    """The same cover with each coset representative replaced by ``x_i k``."""
    reps = [cover.G.mul(x, rng.choice(cover.K)) for x in cover.reps]
    rng.shuffle(reps)
    return build_cover(cover.G, cover.K, reps)


# ---------------------------------------------------------------- transfer matrices


@dataclass
class TransferMatrix:
    rows: list
    cols: list
    entries: list
    row_sizes: list
    col_sizes: list
    index: int

    def to_json(self) -> dict:
        return {
            "rows": list(self.rows),
            "cols": list(self.cols),
            "entries": [list(r) for r in self.entries],
            "labels": {"row_sizes": list(self.row_sizes), "col_sizes": list(self.col_sizes),
                       "index": self.index},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json()) + "\n"

    def to_table(self) -> str:
        head = [""] + list(self.cols)
        body = [[r] + [str(x) for x in row] for r, row in zip(self.rows, self.entries)]
        widths = [max(len(line[c]) for line in [head] + body) for c in range(len(head))]
        lines = ["  ".join(cell.rjust(w) for cell, w in zip(line, widths)).rstrip()
                 for line in [head] + body]
        return "\n".join(lines) + "\n"

    @staticmethod
    def parse_table(text: str) -> list:
        """Integer entries of a rendered table (for consistency checks)."""
        lines = [ln.split() for ln in text.strip("\n").splitlines()]
        return [[int(x) for x in ln[1:]] for ln in lines[1:]]

    def column_sums(self) -> list:
        return [sum(r[j] for r in self.entries) for j in range(len(self.cols))]


def loop_transfer(cover: CoverSpec, class_reps: Optional[Sequence[int]] = None) -> TransferMatrix:
    """``entry(l, w) = #{i : x_i^-1 g x_i in l}`` for ``g`` representing ``w``."""
    G = cover.G
    ks = set(cover.K)
    m, n = len(cover.k_classes), len(cover.g_classes)
    ent = [[0] * n for _ in range(m)]
    for w, cls in enumerate(cover.g_classes):
        g = cls.rep if class_reps is None else class_reps[w]
        if cover.g_class_of[g] != w:
            raise GroupError(f"{G.labels[g]} does not lie in class {cls.label}")
        for x in cover.reps:
            c = G.conj(x, g)
            if c in ks:
                ent[cover.k_class_of[c]][w] += 1
    return TransferMatrix(
        [c.label for c in cover.k_classes], [c.label for c in cover.g_classes], ent,
        [c.size for c in cover.k_classes], [c.size for c in cover.g_classes], cover.index)


def coset_sum_oracle(cover: CoverSpec) -> list:
    """``entry(l, w) = #{x in G : x^-1 g x in l} / |K|``, summing over the whole group."""
    G = cover.G
    out = []
    for lam in cover.k_classes:
        mem = set(lam.members)
        row = []
        for w in cover.g_classes:
            cnt = sum(1 for x in range(G.order) if G.conj(x, w.rep) in mem)
            q = Fraction(cnt, len(cover.K))
            if q.denominator != 1:
                raise GroupError("coset sum is not an integer")  # pragma: no cover
            row.append(int(q))
        out.append(row)
    return out


def matmul(a: list, b: list) -> list:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]) if b else 0)]
            for i in range(len(a))]


def class_inclusion(cover: CoverSpec) -> list:
    """``classes(K) -> classes(G)``, ``[k]_K -> [k]_G``, as a G-classes by K-classes matrix."""
    inc = [[0] * len(cover.k_classes) for _ in cover.g_classes]
    for j, c in enumerate(cover.k_classes):
        inc[cover.g_class_of[c.rep]][j] = 1
    return inc


def becker_gottlieb_composite(cover: CoverSpec) -> int:
    T = loop_transfer(cover)
    col = cover.g_class_of[cover.G.identity]
    return sum(row[col] for row in T.entries)


def euler_composite(cover: CoverSpec) -> list:
    return matmul(loop_transfer(cover).entries, class_inclusion(cover))


def restrict_classes(big: CoverSpec, small: CoverSpec) -> None:
    if big.G is not small.G:
        raise GroupError("covers live over different groups")


def transfer_chain(G: FiniteGroup, K: Sequence[int], H: Sequence[int]) -> tuple:
    """``(T(G,K), T(H,K) T(G,H))`` for ``K <= H <= G``, in class bases of K, H, G."""
    if not set(K) <= set(H):
        raise NotASubgroup("K is not contained in H")
    direct = loop_transfer(build_cover(G, K)).entries
    GH = build_cover(G, H)
    HG, table = _as_group(G, H)
    local_k = [table[k] for k in K]
    HK = build_cover(HG, local_k)
    # class bases of H inside G and inside HG agree: both list H's classes by least element
    via = matmul(loop_transfer(HK).entries, loop_transfer(GH).entries)
    return direct, via


def _as_group(G: FiniteGroup, H: Sequence[int]) -> tuple:
    H = sorted(H)
    pos = {h: i for i, h in enumerate(H)}
    tab = [[pos[G.mul(a, b)] for b in H] for a in H]
    return FiniteGroup.from_table(tab, [G.labels[h] for h in H], check=False), pos


# ---------------------------------------------------------------- cross-model


@dataclass
class CrossModelReport:
    passed: bool
    bimod_matrix: list
    group_matrix: list
    message: str = ""

    def to_json(self) -> dict:
        return {"passed": self.passed, "bimod": self.bimod_matrix, "group": self.group_matrix,
                "message": self.message}


def group_bimodule(cover: CoverSpec):
    """``QG`` as a ``(QG, QK)``-bimodule, free over ``QK`` on the coset representatives."""
    from fractions import Fraction as F

    from .bimod import Algebra, Bimodule

    G = cover.G
    n = G.order
    A = Algebra(n, list(G.labels), [[{G.table[i][j]: F(1)} for j in range(n)] for i in range(n)],
                {G.identity: F(1)}, [{g: F(1)} for g in (G.generators or [])], "QG")
    K = list(cover.K)
    kpos = {k: i for i, k in enumerate(K)}
    kgens = G.small_generating_set(K)
    R = Algebra(len(K), [G.labels[k] for k in K],
                [[{kpos[G.mul(a, b)]: F(1)} for b in K] for a in K],
                {kpos[G.identity]: F(1)}, [{kpos[g]: F(1)} for g in kgens], "QK")
    left = [[{G.mul(i, c): F(1)} for c in range(n)] for i in range(n)]
    right = [[{G.mul(c, k): F(1)} for c in range(n)] for k in K]
    fb = [{x: F(1)} for x in cover.reps]
    return A, R, Bimodule(A, R, n, left, right, fb, name="QG")


def cross_model_check(cover: CoverSpec, max_order: int = 200) -> CrossModelReport:
    from .bimod import NotFree, evaluate_trace, hh0_of_algebra

    if cover.G.order > max_order:
        raise GroupError(f"group order {cover.G.order} exceeds the cross-model bound {max_order}")
    A, R, M = group_bimodule(cover)
    try:
        HA, HR = hh0_of_algebra(A), hh0_of_algebra(R)
        tr = evaluate_trace(M, hh_left=HA, hh_right=HR).matrix
    except NotFree as exc:  # pragma: no cover - coset representatives always form a basis
        raise RuntimeError(f"internal error: group algebra is not free over the subgroup: {exc}")
    kpos = {k: i for i, k in enumerate(cover.K)}
    # coordinates of each class in the HH_0 bases
    k_coord = {}
    for lam, c in enumerate(cover.k_classes):
        v = HR.project({kpos[c.rep]: Fraction(1)})
        if len(v) != 1 or next(iter(v.values())) != 1:
            return CrossModelReport(False, [], [], f"K class {c.label} is not a basis vector of HH_0")
        k_coord[next(iter(v))] = lam
    mat = [[0] * len(cover.g_classes) for _ in cover.k_classes]
    for w, c in enumerate(cover.g_classes):
        img = tr.apply(HA.project({c.rep: Fraction(1)}))
        for j, x in img.items():
            if x.denominator != 1:
                return CrossModelReport(False, [], [], "non-integral trace entry")
            mat[k_coord[j]][w] = int(x)
    group = loop_transfer(cover).entries
    ok = mat == group
    return CrossModelReport(ok, mat, group, "agree" if ok else "bimodule trace differs from loop transfer")


# ---------------------------------------------------------------- random covers


def random_group(rng: random.Random, max_order: int = 200, abelian: Optional[bool] = None) -> FiniteGroup:
    while True:
        kind = rng.choice(["cyclic", "abelian", "dihedral", "sym", "alt", "perm", "perm"])
        if abelian is True and kind not in ("cyclic", "abelian"):
            continue
        if abelian is False and kind in ("cyclic", "abelian"):
            continue
        if kind == "cyclic":
            G = cyclic_group(rng.randint(1, max_order))
        elif kind == "abelian":
            orders = [rng.randint(2, 6) for _ in range(rng.randint(2, 3))]
            if _prod(orders) > max_order:
                continue
            G = abelian_group(orders)
        elif kind == "dihedral":
            n = rng.randint(3, max(3, max_order // 2))
            if 2 * n > max_order:
                continue
            G = dihedral_group(n)
        elif kind == "sym":
            n = rng.choice([3, 4, 5])
            G = symmetric_group(n)
        elif kind == "alt":
            G = alternating_group(rng.choice([4, 5]))
        else:
            d = rng.randint(4, 7)
            gens = []
            for _ in range(2):
                p = list(range(d))
                rng.shuffle(p)
                gens.append(tuple(p))
            try:
                G = FiniteGroup.from_permutations(d, gens, bound=max_order)
            except GroupError:
                continue
        if G.order <= max_order:
            return G


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def random_subgroup(rng: random.Random, G: FiniteGroup, max_gens: int = 2) -> tuple:
    gens = [rng.randrange(G.order) for _ in range(rng.randint(0, max_gens))]
    return G.generated(gens)


def load_group(path) -> FiniteGroup:
    with open(path, encoding="utf-8") as fh:
        return FiniteGroup.from_json(json.load(fh))
