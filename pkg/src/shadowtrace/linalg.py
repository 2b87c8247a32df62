"""Sparse exact linear algebra over the rationals.

Vectors are ``dict[int, Fraction]`` with no zero entries.  Matrices are
lists of sparse columns.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

Vec = dict


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def fmt(q: Fraction) -> str:
    q = frac(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def clean(v: dict) -> Vec:
    return {k: x for k, x in v.items() if x}


def axpy(y: Vec, a, x: Vec) -> Vec:
    """In place ``y += a * x``."""
    if not a:
        return y
    for k, xv in x.items():
        nv = y.get(k, 0) + a * xv
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)
    return y


def scale(a, x: Vec) -> Vec:
    return {k: a * v for k, v in x.items()} if a else {}


def add(*vs: Vec) -> Vec:
    out: Vec = {}
    for v in vs:
        axpy(out, 1, v)
    return out


def sub(x: Vec, y: Vec) -> Vec:
    return axpy(dict(x), -1, y)


def unit_vec(i: int) -> Vec:
    return {i: Fraction(1)}


def dense(v: Vec, n: int) -> list:
    return [v.get(i, Fraction(0)) for i in range(n)]


def sparse(xs: Iterable) -> Vec:
    return {i: frac(x) for i, x in enumerate(xs) if x}


class LinMap:
    """A linear map ``Q^n -> Q^m`` stored by sparse columns."""

    def __init__(self, m: int, n: int, cols: list):
        self.m = m
        self.n = n
        self.cols = cols

    @staticmethod
    def identity(n: int) -> "LinMap":
        return LinMap(n, n, [unit_vec(i) for i in range(n)])

    @staticmethod
    def from_rows(rows: list) -> "LinMap":
        m = len(rows)
        n = len(rows[0]) if rows else 0
        cols = [{i: frac(rows[i][j]) for i in range(m) if rows[i][j]} for j in range(n)]
        return LinMap(m, n, cols)

    def apply(self, v: Vec) -> Vec:
        out: Vec = {}
        for j, x in v.items():
            axpy(out, x, self.cols[j])
        return out

    def __matmul__(self, other: "LinMap") -> "LinMap":
        if self.n != other.m:
            raise ValueError("dimension mismatch")
        return LinMap(self.m, other.n, [self.apply(c) for c in other.cols])

    def __add__(self, other: "LinMap") -> "LinMap":
        return LinMap(self.m, self.n, [add(a, b) for a, b in zip(self.cols, other.cols)])

    def scaled(self, a) -> "LinMap":
        return LinMap(self.m, self.n, [scale(a, c) for c in self.cols])

    def rows(self) -> list:
        out = [[Fraction(0)] * self.n for _ in range(self.m)]
        for j, c in enumerate(self.cols):
            for i, x in c.items():
                out[i][j] = x
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, LinMap) and self.m == other.m and self.n == other.n
                and all(clean(a) == clean(b) for a, b in zip(self.cols, other.cols)))

    def __repr__(self) -> str:
        return f"LinMap({self.m}x{self.n}, {self.rows()})"


class RowReducer:
    """Incremental reduced row echelon form.

    The pivot of each row is its largest column index, so after reduction
    the smallest indices survive as quotient representatives.
    """

    def __init__(self, n: int):
        self.n = n
        self.rows: dict[int, Vec] = {}
        self.col_index: dict[int, set] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Vec) -> Vec:
        v = dict(v)
        for p in [k for k in v if k in self.rows]:
            c = v.get(p)
            if c:
                axpy(v, -c, self.rows[p])
        return v

    def add(self, v: Vec) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        p = max(v)
        inv = 1 / v[p]
        v = {k: x * inv for k, x in v.items()}
        for q in list(self.col_index.get(p, ())):
            row = self.rows[q]
            c = row[p]
            for k in row:
                self.col_index[k].discard(q)
            axpy(row, -c, v)
            for k in row:
                self.col_index.setdefault(k, set()).add(q)
        self.rows[p] = v
        for k in v:
            self.col_index.setdefault(k, set()).add(p)
        return True

    def extend(self, vs: Iterable[Vec]) -> "RowReducer":
        for v in vs:
            self.add(v)
        return self

    def free_columns(self) -> list[int]:
        return [i for i in range(self.n) if i not in self.rows]


class Quotient:
    """``Q^n`` modulo the span of some vectors, with a coset basis."""

    def __init__(self, n: int, relations: Iterable[Vec]):
        self.n = n
        self.rr = RowReducer(n).extend(relations)
        self.basis = self.rr.free_columns()
        self.pos = {c: i for i, c in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def project(self, v: Vec) -> Vec:
        r = self.rr.reduce(v)
        return {self.pos[k]: x for k, x in r.items()}

    def lift(self, j: int) -> Vec:
        return unit_vec(self.basis[j])

    def projection_map(self) -> LinMap:
        return LinMap(self.dim, self.n, [self.project(unit_vec(i)) for i in range(self.n)])


def solve_inverse(cols: list, n: int) -> list:
    """Inverse of a square matrix given by sparse columns, or ``None`` if singular."""
    a = [dense(c, n) for c in cols]  # a[j][i] = entry (i, j)
    rows = [[a[j][i] for j in range(n)] + [Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [{i: rows[i][n + j] for i in range(n) if rows[i][n + j]} for j in range(n)]


def rank(vectors: Iterable[Vec], n: int) -> int:
    return RowReducer(n).extend(vectors).rank
