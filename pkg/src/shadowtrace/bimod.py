"""Finite-dimensional algebras and bimodules over Q, with HH_0 as the shadow.

The trace of the identity of a bimodule that is free over its right
algebra is computed two ways: as the composite of coevaluation, the
cyclic swap and evaluation on HH_0, and by a direct dual-basis formula.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .linalg import (
    LinMap,
    Quotient,
    Vec,
    axpy,
    clean,
    dense,
    fmt,
    frac,
    scale,
    solve_inverse,
    unit_vec,
)


class InvalidPresentation(ValueError):
    pass


class NotFree(ValueError):
    pass


class DualityCheckFailed(RuntimeError):
    pass


# ---------------------------------------------------------------- algebras


@dataclass
class Algebra:
    dim: int
    basis: list
    structure: list  # structure[i][j] = e_i * e_j as a sparse vector
    unit: Vec
    generators: Optional[list] = None  # algebra generators, used to keep relation sets small
    name: str = ""

    def mul(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            row = self.structure[i]
            for j, b in v.items():
                axpy(out, a * b, row[j])
        return out

    def relation_gens(self) -> list:
        if self.generators is not None:
            return self.generators
        return [unit_vec(i) for i in range(self.dim)]

    def validate(self) -> None:
        n = self.dim
        if len(self.basis) != n or len(self.structure) != n:
            raise InvalidPresentation("basis and structure constants must have length dim")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    ab_c = self.mul(self.structure[i][j], unit_vec(k))
                    a_bc = self.mul(unit_vec(i), self.structure[j][k])
                    if clean(ab_c) != clean(a_bc):
                        raise InvalidPresentation(f"not associative at ({i}, {j}, {k})")
        for i in range(n):
            e = unit_vec(i)
            if clean(self.mul(self.unit, e)) != e or clean(self.mul(e, self.unit)) != e:
                raise InvalidPresentation(f"unit law fails at basis element {i}")

    @staticmethod
    def from_json(obj: dict, validate: bool = True) -> "Algebra":
        n = int(obj["dim"])
        basis = list(obj.get("basis") or [f"e{i}" for i in range(n)])
        st = [[{k: frac(x) for k, x in enumerate(obj["structure"][i][j]) if frac(x)}
               for j in range(n)] for i in range(n)]
        unit = {k: frac(x) for k, x in enumerate(obj["unit"]) if frac(x)}
        gens = None
        if obj.get("generators") is not None:
            gens = [{k: frac(x) for k, x in enumerate(g) if frac(x)} for g in obj["generators"]]
        a = Algebra(n, basis, st, unit, gens, obj.get("name", ""))
        if validate:
            a.validate()
        return a

    def to_json(self) -> dict:
        n = self.dim
        out = {
            "dim": n,
            "basis": list(self.basis),
            "structure": [[[fmt(x) for x in dense(self.structure[i][j], n)] for j in range(n)]
                          for i in range(n)],
            "unit": [fmt(x) for x in dense(self.unit, n)],
        }
        if self.generators is not None:
            out["generators"] = [[fmt(x) for x in dense(g, n)] for g in self.generators]
        return out

    def change_basis(self, p: list) -> "Algebra":
        """Same algebra in the basis ``f_i = sum_j p[j][i] e_j``."""
        n = self.dim
        cols = [{j: frac(p[j][i]) for j in range(n) if p[j][i]} for i in range(n)]
        inv = solve_inverse(cols, n)
        if inv is None:
            raise ValueError("singular change of basis")
        P, Pi = LinMap(n, n, cols), LinMap(n, n, inv)
        st = [[Pi.apply(self.mul(cols[i], cols[j])) for j in range(n)] for i in range(n)]
        gens = None if self.generators is None else [Pi.apply(g) for g in self.generators]
        return Algebra(n, [f"f{i}" for i in range(n)], st, Pi.apply(self.unit), gens, self.name)


def algebra_from_table(table: list, labels: Optional[list] = None, generators=None,
                       name: str = "") -> Algebra:
    """Group-like algebra: ``e_i e_j = e_table[i][j]``, identity at index 0."""
    n = len(table)
    st = [[{table[i][j]: Fraction(1)} for j in range(n)] for i in range(n)]
    gens = None if generators is None else [unit_vec(g) for g in generators]
    return Algebra(n, list(labels or [f"g{i}" for i in range(n)]), st, unit_vec(0), gens, name)


def matrix_algebra(k: int) -> Algebra:
    """``M_k(Q)`` with basis the matrix units ``E_ab`` (index ``a*k + b``)."""
    n = k * k
    st = [[{} for _ in range(n)] for _ in range(n)]
    for a in range(k):
        for b in range(k):
            for c in range(k):
                for d in range(k):
                    if b == c:
                        st[a * k + b][c * k + d] = {a * k + d: Fraction(1)}
    unit = {a * k + a: Fraction(1) for a in range(k)}
    return Algebra(n, [f"E{a}{b}" for a in range(k) for b in range(k)], st, unit, None, f"M{k}")


def truncated_poly(k: int) -> Algebra:
    """``Q[x]/(x^k)`` with basis ``1, x, ..., x^(k-1)``."""
    st = [[({i + j: Fraction(1)} if i + j < k else {}) for j in range(k)] for i in range(k)]
    gens = [unit_vec(1)] if k > 1 else []
    return Algebra(k, [f"x^{i}" for i in range(k)], st, unit_vec(0), gens, f"Q[x]/x^{k}")


def product_algebra(k: int) -> Algebra:
    """``Q^k`` with orthogonal idempotent basis."""
    st = [[({i: Fraction(1)} if i == j else {}) for j in range(k)] for i in range(k)]
    return Algebra(k, [f"p{i}" for i in range(k)], st, {i: Fraction(1) for i in range(k)},
                   None, f"Q^{k}")


def upper_triangular() -> Algebra:
    """2x2 upper triangular matrices, basis ``E00, E01, E11``."""
    idx = {(0, 0): 0, (0, 1): 1, (1, 1): 2}
    st = [[{} for _ in range(3)] for _ in range(3)]
    for (a, b), i in idx.items():
        for (c, d), j in idx.items():
            if b == c:
                st[i][j] = {idx[(a, d)]: Fraction(1)}
    return Algebra(3, ["E00", "E01", "E11"], st, {0: Fraction(1), 2: Fraction(1)}, None, "T2")


def cyclic_group_algebra(n: int) -> Algebra:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return algebra_from_table(table, [f"z^{i}" for i in range(n)], [1] if n > 1 else [], f"QZ{n}")


def rationals() -> Algebra:
    return product_algebra(1)


# ---------------------------------------------------------------- bimodules


def _matvec(mat: list, v: Vec) -> Vec:
    out: Vec = {}
    for c, x in v.items():
        axpy(out, x, mat[c])
    return out


@dataclass
class Bimodule:
    left: Algebra
    right: Algebra
    dim: int
    left_action: list  # left_action[i][c] = e_i . m_c
    right_action: list  # right_action[j][c] = m_c . e_j
    free_basis: Optional[list] = None
    name: str = ""
    _witness: object = field(default=None, repr=False, compare=False)

    def act_left(self, a: Vec, m: Vec) -> Vec:
        out: Vec = {}
        for i, x in a.items():
            axpy(out, x, _matvec(self.left_action[i], m))
        return out

    def act_right(self, m: Vec, r: Vec) -> Vec:
        out: Vec = {}
        for j, x in r.items():
            axpy(out, x, _matvec(self.right_action[j], m))
        return out

    def validate(self) -> None:
        A, R, m = self.left, self.right, self.dim
        if len(self.left_action) != A.dim or len(self.right_action) != R.dim:
            raise InvalidPresentation("one action matrix per basis element is required")
        basis = [unit_vec(c) for c in range(m)]
        for i in range(A.dim):
            for j in range(A.dim):
                for v in basis:
                    lhs = self.act_left(unit_vec(i), self.act_left(unit_vec(j), v))
                    rhs = self.act_left(A.structure[i][j], v)
                    if clean(lhs) != clean(rhs):
                        raise InvalidPresentation(f"left action is not multiplicative at ({i}, {j})")
        for i in range(R.dim):
            for j in range(R.dim):
                for v in basis:
                    lhs = self.act_right(self.act_right(v, unit_vec(i)), unit_vec(j))
                    rhs = self.act_right(v, R.structure[i][j])
                    if clean(lhs) != clean(rhs):
                        raise InvalidPresentation(f"right action is not multiplicative at ({i}, {j})")
        for v in basis:
            if clean(self.act_left(A.unit, v)) != v or clean(self.act_right(v, R.unit)) != v:
                raise InvalidPresentation("units do not act as the identity")
            for i in range(A.dim):
                for j in range(R.dim):
                    a = self.act_right(self.act_left(unit_vec(i), v), unit_vec(j))
                    b = self.act_left(unit_vec(i), self.act_right(v, unit_vec(j)))
                    if clean(a) != clean(b):
                        raise InvalidPresentation(f"actions do not commute at ({i}, {j})")
        if self.free_basis is not None:
            self.witness()

    def witness(self) -> "FreeWitness":
        if self._witness is None:
            if self.free_basis is None:
                raise NotFree("no freeness witness supplied")
            self._witness = FreeWitness.build(self)
        return self._witness

    @staticmethod
    def from_json(obj: dict, algebras: dict, validate: bool = True) -> "Bimodule":
        def alg(x):
            if isinstance(x, str):
                if x not in algebras:
                    raise InvalidPresentation(f"unknown algebra {x!r}")
                return algebras[x]
            return Algebra.from_json(x, validate)

        A, R = alg(obj["left"]), alg(obj["right"])
        m = int(obj["dim"])

        def mats(key):
            out = []
            for mat in obj[key]:
                cols = [{r: frac(mat[r][c]) for r in range(m) if frac(mat[r][c])} for c in range(m)]
                out.append(cols)
            return out

        fb = None
        if obj.get("free_basis") is not None:
            fb = [{k: frac(x) for k, x in enumerate(v) if frac(x)} for v in obj["free_basis"]]
        M = Bimodule(A, R, m, mats("left_action"), mats("right_action"), fb, obj.get("name", ""))
        if validate:
            M.validate()
        return M

    def to_json(self, left_name=None, right_name=None) -> dict:
        m = self.dim

        def mat(cols):
            return [[fmt(cols[c].get(r, 0)) for c in range(m)] for r in range(m)]

        out = {
            "left": left_name or self.left.to_json(),
            "right": right_name or self.right.to_json(),
            "dim": m,
            "left_action": [mat(c) for c in self.left_action],
            "right_action": [mat(c) for c in self.right_action],
        }
        if self.free_basis is not None:
            out["free_basis"] = [[fmt(x) for x in dense(v, m)] for v in self.free_basis]
        return out

    def change_basis(self, q: list) -> "Bimodule":
        """Same bimodule in the basis ``f_c = sum_r q[r][c] m_r``."""
        m = self.dim
        cols = [{r: frac(q[r][c]) for r in range(m) if q[r][c]} for c in range(m)]
        inv = solve_inverse(cols, m)
        if inv is None:
            raise ValueError("singular change of basis")
        Qi = LinMap(m, m, inv)

        def conj(mat):
            return [Qi.apply(_matvec(mat, cols[c])) for c in range(m)]

        fb = None if self.free_basis is None else [Qi.apply(v) for v in self.free_basis]
        return Bimodule(self.left, self.right, m, [conj(x) for x in self.left_action],
                        [conj(x) for x in self.right_action], fb, self.name)


def regular_bimodule(A: Algebra) -> Bimodule:
    n = A.dim
    left = [[A.structure[i][c] for c in range(n)] for i in range(n)]
    right = [[A.structure[c][j] for c in range(n)] for j in range(n)]
    return Bimodule(A, A, n, left, right, [dict(A.unit)], name="regular")


def free_from_rep(A: Algebra, R: Algebra, rho: list) -> Bimodule:
    """``R^k`` with ``A`` acting through ``rho[i]``, a ``k x k`` matrix over ``R``.

    ``rho[i][a][b]`` is a sparse vector in ``R``; the left action is
    ``(e_i . v)_a = sum_b rho[i][a][b] * v_b``, which commutes with the
    right action of ``R`` on each coordinate.
    """
    k = len(rho[0])
    d = R.dim
    m = k * d

    def left_matrix(i):
        cols = []
        for c in range(m):
            b, s = divmod(c, d)
            out: Vec = {}
            for a in range(k):
                prod = R.mul(rho[i][a][b], unit_vec(s))
                for t, x in prod.items():
                    axpy(out, x, {a * d + t: Fraction(1)})
            cols.append(out)
        return cols

    def right_matrix(j):
        cols = []
        for c in range(m):
            b, s = divmod(c, d)
            cols.append({b * d + t: x for t, x in R.structure[s][j].items()})
        return cols

    fb = [{a * d + t: x for t, x in R.unit.items()} for a in range(k)]
    return Bimodule(A, R, m, [left_matrix(i) for i in range(A.dim)],
                    [right_matrix(j) for j in range(R.dim)], fb)


def direct_sum(M: Bimodule, N: Bimodule) -> Bimodule:
    if M.left is not N.left or M.right is not N.right:
        if M.left.to_json() != N.left.to_json() or M.right.to_json() != N.right.to_json():
            raise InvalidPresentation("direct sum needs the same algebras on both sides")
    m = M.dim

    def shift(v):
        return {k + m: x for k, x in v.items()}

    left = [M.left_action[i] + [shift(c) for c in N.left_action[i]] for i in range(M.left.dim)]
    right = [M.right_action[j] + [shift(c) for c in N.right_action[j]] for j in range(M.right.dim)]
    fb = None
    if M.free_basis is not None and N.free_basis is not None:
        fb = [dict(v) for v in M.free_basis] + [shift(v) for v in N.free_basis]
    return Bimodule(M.left, M.right, m + N.dim, left, right, fb)


@dataclass
class FreeWitness:
    """Isomorphism ``R^k -> M`` sending ``(i, b)`` to ``m_i . e_b``, with its inverse."""

    k: int
    d: int
    gens: list
    forward: LinMap
    inverse: LinMap

    @staticmethod
    def build(M: Bimodule) -> "FreeWitness":
        R = M.right
        k, d = len(M.free_basis), R.dim
        if k * d != M.dim:
            raise NotFree(f"{k} generators over a {d}-dimensional algebra cannot span dimension {M.dim}")
        cols = [M.act_right(M.free_basis[i], unit_vec(b)) for i in range(k) for b in range(d)]
        inv = solve_inverse(cols, M.dim)
        if inv is None:
            raise NotFree("the witness map R^k -> M is not invertible")
        return FreeWitness(k, d, M.free_basis, LinMap(M.dim, M.dim, cols), LinMap(M.dim, M.dim, inv))

    def slots(self, v: Vec) -> list:
        """Coefficients ``r_i`` with ``v = sum_i m_i . r_i``."""
        out = [dict() for _ in range(self.k)]
        for idx, x in self.inverse.apply(v).items():
            i, b = divmod(idx, self.d)
            out[i][b] = x
        return out


# ---------------------------------------------------------------- tensor products


@dataclass
class TensorProduct:
    """``M (x)_R N`` with the maps relating it to the plain tensor product."""

    bimodule: Bimodule
    M: Bimodule
    N: Bimodule
    route: str
    _pure: object = None
    _lift: object = None
    _project: object = None

    def pure(self, s: int, t: int) -> Vec:
        return self._pure(s, t)

    def lift(self, j: int) -> Vec:
        """A plain-tensor representative (index ``s * dim N + t``) of basis vector ``j``."""
        return self._lift(j)

    def project_plain(self, v: Vec) -> Vec:
        return self._project(v)

    def pure_vec(self, u: Vec, w: Vec) -> Vec:
        p = self.N.dim
        return self.project_plain({s * p + t: a * b for s, a in u.items() for t, b in w.items()})


def tensor_over(mid: Algebra, M: Bimodule, N: Bimodule) -> TensorProduct:
    """``M (x)_mid N`` as an exact cokernel."""
    if M.free_basis is not None:
        return _tensor_free(mid, M, N)
    return _tensor_general(mid, M, N)


def _tensor_general(mid: Algebra, M: Bimodule, N: Bimodule) -> TensorProduct:
    m, p = M.dim, N.dim
    rels = []
    for r in mid.relation_gens():
        for s in range(m):
            left = M.act_right(unit_vec(s), r)
            for t in range(p):
                right = N.act_left(r, unit_vec(t))
                v: Vec = {}
                for a, x in left.items():
                    v[a * p + t] = v.get(a * p + t, 0) + x
                for b, y in right.items():
                    v[s * p + b] = v.get(s * p + b, 0) - y
                v = clean(v)
                if v:
                    rels.append(v)
    Q = Quotient(m * p, rels)

    def lift(j):
        return Q.lift(j)

    def tensor_act(vm: Vec, vn: Vec) -> Vec:
        return {a * p + b: x * y for a, x in vm.items() for b, y in vn.items()}

    left, right = [], []
    for i in range(M.left.dim):
        cols = []
        for j in range(Q.dim):
            s, t = divmod(Q.basis[j], p)
            cols.append(Q.project(tensor_act(M.act_left(unit_vec(i), unit_vec(s)), unit_vec(t))))
        left.append(cols)
    for i in range(N.right.dim):
        cols = []
        for j in range(Q.dim):
            s, t = divmod(Q.basis[j], p)
            cols.append(Q.project(tensor_act(unit_vec(s), N.act_right(unit_vec(t), unit_vec(i)))))
        right.append(cols)
    B = Bimodule(M.left, N.right, Q.dim, left, right, None)
    return TensorProduct(B, M, N, "cokernel", lambda s, t: Q.project({s * p + t: Fraction(1)}),
                         lift, Q.project)


def _tensor_free(mid: Algebra, M: Bimodule, N: Bimodule) -> TensorProduct:
    W = M.witness()
    k, p = W.k, N.dim
    slot_cache: dict = {}

    def slots(s):
        if s not in slot_cache:
            slot_cache[s] = W.slots(unit_vec(s))
        return slot_cache[s]

    pure_cache: dict = {}

    def pure(s, t):
        # e_s (x) n_t = sum_i m_i (x) r_i(s) n_t
        key = (s, t)
        if key not in pure_cache:
            out: Vec = {}
            for i, r in enumerate(slots(s)):
                if r:
                    rn = N.act_left(r, unit_vec(t))
                    axpy(out, 1, {i * p + b: y for b, y in rn.items()})
            pure_cache[key] = out
        return pure_cache[key]

    def pure_vec_m(vm: Vec, vn: Vec) -> Vec:
        out: Vec = {}
        for s, x in vm.items():
            for t, y in vn.items():
                axpy(out, x * y, pure(s, t))
        return out

    def project(v: Vec) -> Vec:
        out: Vec = {}
        for idx, x in v.items():
            s, t = divmod(idx, p)
            axpy(out, x, pure(s, t))
        return out

    def lift(j):
        i, b = divmod(j, p)
        return {s * p + b: x for s, x in W.gens[i].items()}

    dim = k * p
    left = []
    for a in range(M.left.dim):
        am = [M.act_left(unit_vec(a), W.gens[i]) for i in range(k)]
        left.append([pure_vec_m(am[j // p], unit_vec(j % p)) for j in range(dim)])
    right = []
    for c in range(N.right.dim):
        cols = []
        for j in range(dim):
            i, b = divmod(j, p)
            cols.append({i * p + t: y for t, y in N.act_right(unit_vec(b), unit_vec(c)).items()})
        right.append(cols)
    fb = None
    if N.free_basis is not None:
        fb = [{i * p + t: y for t, y in n.items()} for i in range(k) for n in N.free_basis]
    B = Bimodule(M.left, N.right, dim, left, right, fb)
    return TensorProduct(B, M, N, "free", pure, lift, project)


# ---------------------------------------------------------------- HH_0


@dataclass
class HH0Space:
    """``M`` modulo ``span{r m - m r}``, with coset representatives from a pivot order."""

    algebra: Algebra
    module: Bimodule
    quotient: Quotient

    @property
    def dim(self) -> int:
        return self.quotient.dim

    @property
    def representatives(self) -> list:
        return list(self.quotient.basis)

    def project(self, v: Vec) -> Vec:
        return self.quotient.project(v)

    def lift(self, j: int) -> Vec:
        return self.quotient.lift(j)

    def projection_map(self) -> LinMap:
        return self.quotient.projection_map()


def shadow_hh0(R: Algebra, M: Bimodule) -> HH0Space:
    rels = []
    for r in R.relation_gens():
        for s in range(M.dim):
            e = unit_vec(s)
            v = axpy(M.act_left(r, e), -1, M.act_right(e, r))
            if v:
                rels.append(v)
    return HH0Space(R, M, Quotient(M.dim, rels))


# ---------------------------------------------------------------- duality


@dataclass
class DualData:
    M: Bimodule
    DM: Bimodule
    witness: FreeWitness
    coev_tensor: TensorProduct  # M (x)_R DM over (A, A)
    eval_tensor: TensorProduct  # DM (x)_A M over (R, R)
    coev_map: LinMap  # A -> M (x)_R DM
    eval_map: LinMap  # DM (x)_A M -> R

    def pairing(self, phi: int, s: int) -> Vec:
        """``phi(e_s)`` for the dual basis element ``phi = (i, b)``."""
        i, b = divmod(phi, self.witness.d)
        r = self.witness.slots(unit_vec(s))[i]
        return self.M.right.mul(unit_vec(b), r)


def dualize(M: Bimodule, check: bool = True) -> DualData:
    """Right dual ``DM = Hom_R(M, R)`` with coevaluation and evaluation."""
    A, R = M.left, M.right
    W = M.witness()
    k, d = W.k, W.d
    # action of A on generators: a m_j = sum_i m_i c_ij
    coeffs = [[W.slots(M.act_left(unit_vec(a), W.gens[j])) for j in range(k)] for a in range(A.dim)]

    left = []  # (r . phi)(m) = r phi(m)
    for r in range(R.dim):
        cols = []
        for idx in range(k * d):
            i, b = divmod(idx, d)
            cols.append({i * d + c: x for c, x in R.structure[r][b].items()})
        left.append(cols)
    right = []  # (phi . a)(m_j) = phi(a m_j)
    for a in range(A.dim):
        cols = []
        for idx in range(k * d):
            i, b = divmod(idx, d)
            out: Vec = {}
            for j in range(k):
                val = R.mul(unit_vec(b), coeffs[a][j][i])
                for c, x in val.items():
                    out[j * d + c] = out.get(j * d + c, 0) + x
            cols.append(clean(out))
        right.append(cols)
    DM = Bimodule(R, A, k * d, left, right, None, name="dual")

    T = tensor_over(R, M, DM)
    S = tensor_over(A, DM, M)
    phi = [{i * d + c: x for c, x in R.unit.items()} for i in range(k)]

    def coev(a: Vec) -> Vec:
        out: Vec = {}
        for i in range(k):
            axpy(out, 1, T.pure_vec(M.act_left(a, W.gens[i]), phi[i]))
        return out

    coev_map = LinMap(T.bimodule.dim, A.dim, [coev(unit_vec(a)) for a in range(A.dim)])
    data = DualData(M, DM, W, T, S, coev_map, None)

    def ev_plain(v: Vec) -> Vec:
        out: Vec = {}
        for idx, x in v.items():
            f, s = divmod(idx, M.dim)
            axpy(out, x, data.pairing(f, s))
        return out

    data.eval_map = LinMap(R.dim, S.bimodule.dim, [ev_plain(S.lift(j)) for j in range(S.bimodule.dim)])
    if check:
        _check_duality(data, ev_plain)
    return data


def _check_duality(D: DualData, ev_plain) -> None:
    M, DM, W = D.M, D.DM, D.witness
    A, R = M.left, M.right
    # first triangle: sum_i m_i . phi_i(m) = m
    for s in range(M.dim):
        out: Vec = {}
        for i, r in enumerate(W.slots(unit_vec(s))):
            axpy(out, 1, M.act_right(W.gens[i], r))
        if clean(out) != unit_vec(s):
            raise DualityCheckFailed(f"first triangle identity fails on basis vector {s}")
    # second triangle: sum_i phi(m_i) . phi_i = phi
    for f in range(DM.dim):
        out = {}
        for i in range(W.k):
            val: Vec = {}
            for s, x in W.gens[i].items():
                axpy(val, x, D.pairing(f, s))
            phi_i = {i * W.d + c: x for c, x in R.unit.items()}
            axpy(out, 1, DM.act_left(val, phi_i))
        if clean(out) != unit_vec(f):
            raise DualityCheckFailed(f"second triangle identity fails on dual basis vector {f}")
    # coevaluation and evaluation are bimodule maps
    T, S = D.coev_tensor, D.eval_tensor
    for g in A.relation_gens():
        for a in range(A.dim):
            x = unit_vec(a)
            if clean(D.coev_map.apply(A.mul(g, x))) != clean(T.bimodule.act_left(g, D.coev_map.apply(x))):
                raise DualityCheckFailed("coevaluation is not left linear")
            if clean(D.coev_map.apply(A.mul(x, g))) != clean(T.bimodule.act_right(D.coev_map.apply(x), g)):
                raise DualityCheckFailed("coevaluation is not right linear")
    for g in R.relation_gens():
        for j in range(S.bimodule.dim):
            v = unit_vec(j)
            lhs = D.eval_map.apply(S.bimodule.act_left(g, v))
            if clean(lhs) != clean(R.mul(g, D.eval_map.apply(v))):
                raise DualityCheckFailed("evaluation is not left linear")
            lhs = D.eval_map.apply(S.bimodule.act_right(v, g))
            if clean(lhs) != clean(R.mul(D.eval_map.apply(v), g)):
                raise DualityCheckFailed("evaluation is not right linear")


def swap_map(src: TensorProduct, src_hh: HH0Space, dst: TensorProduct, dst_hh: HH0Space) -> LinMap:
    """The cyclic swap ``x (x) y -> y (x) x`` descended to HH_0."""
    p = src.N.dim
    q = dst.N.dim
    cols = []
    for j in range(src_hh.dim):
        plain = _lift_hh(src, src_hh, j)
        swapped = {t * q + s: x for idx, x in plain.items() for s, t in [divmod(idx, p)]}
        cols.append(dst_hh.project(dst.project_plain(swapped)))
    return LinMap(dst_hh.dim, src_hh.dim, cols)


def _lift_hh(T: TensorProduct, H: HH0Space, j: int) -> Vec:
    rep = H.lift(j)
    out: Vec = {}
    for idx, x in rep.items():
        axpy(out, x, T.lift(idx))
    return out


@dataclass
class TraceResult:
    matrix: LinMap  # HH_0(A) -> HH_0(R)
    coev_stage: LinMap
    theta_stage: LinMap
    eval_stage: LinMap
    hh_left: HH0Space
    hh_right: HH0Space


def hh0_of_algebra(A: Algebra) -> HH0Space:
    return shadow_hh0(A, regular_bimodule(A))


def evaluate_trace(M: Bimodule, dual: Optional[DualData] = None, hh_left=None, hh_right=None) -> TraceResult:
    """Coevaluation, swap and evaluation composed on HH_0."""
    A, R = M.left, M.right
    D = dual or dualize(M)
    HA = hh_left or hh0_of_algebra(A)
    HR = hh_right or hh0_of_algebra(R)
    HT = shadow_hh0(A, D.coev_tensor.bimodule)
    HS = shadow_hh0(R, D.eval_tensor.bimodule)
    C = LinMap(HT.dim, HA.dim, [HT.project(D.coev_map.apply(HA.lift(j))) for j in range(HA.dim)])
    TH = swap_map(D.coev_tensor, HT, D.eval_tensor, HS)
    E = LinMap(HR.dim, HS.dim, [HR.project(D.eval_map.apply(HS.lift(j))) for j in range(HS.dim)])
    return TraceResult(E @ TH @ C, C, TH, E, HA, HR)


def hattori_stallings_oracle(M: Bimodule, hh_left=None, hh_right=None) -> LinMap:
    """``[a] -> sum_i [phi_i(a m_i)]`` straight from the dual basis."""
    A, R = M.left, M.right
    W = M.witness()
    HA = hh_left or hh0_of_algebra(A)
    HR = hh_right or hh0_of_algebra(R)
    cols = []
    for j in range(HA.dim):
        a = HA.lift(j)
        out: Vec = {}
        for i in range(W.k):
            axpy(out, 1, W.slots(M.act_left(a, W.gens[i]))[i])
        cols.append(HR.project(out))
    return LinMap(HR.dim, HA.dim, cols)


def matrix_json(L: LinMap) -> list:
    return [[fmt(x) for x in row] for row in L.rows()]


# ---------------------------------------------------------------- random instances


def _rand_invertible(rng: random.Random, n: int) -> list:
    while True:
        p = [[Fraction(rng.randint(-2, 2), rng.choice((1, 1, 2, 3))) for _ in range(n)] for _ in range(n)]
        cols = [{i: p[i][j] for i in range(n) if p[i][j]} for j in range(n)]
        if solve_inverse(cols, n) is not None:
            return p


def _scalar(R: Algebra, q) -> Vec:
    return scale(frac(q), R.unit)


def _algebra_pool():
    return [
        ("Q", rationals),
        ("Q^2", lambda: product_algebra(2)),
        ("Q^3", lambda: product_algebra(3)),
        ("Q[x]/x^2", lambda: truncated_poly(2)),
        ("Q[x]/x^3", lambda: truncated_poly(3)),
        ("QZ2", lambda: cyclic_group_algebra(2)),
        ("QZ3", lambda: cyclic_group_algebra(3)),
        ("QZ4", lambda: cyclic_group_algebra(4)),
        ("T2", upper_triangular),
        ("M2", lambda: matrix_algebra(2)),
    ]


def _scalar_reps(name: str, A: Algebra, k: int, rng: random.Random):
    """A ``k``-dimensional rational representation of a pool algebra, as matrices per basis element."""
    I = [[Fraction(int(a == b)) for b in range(k)] for a in range(k)]
    Z = [[Fraction(0)] * k for _ in range(k)]

    def diag(ds):
        return [[Fraction(ds[a]) if a == b else Fraction(0) for b in range(k)] for a in range(k)]

    def mul(x, y):
        return [[sum(x[a][c] * y[c][b] for c in range(k)) for b in range(k)] for a in range(k)]

    def power(x, e):
        out = I
        for _ in range(e):
            out = mul(out, x)
        return out

    if name == "Q":
        return [I]
    if name.startswith("Q^"):
        n = A.dim
        assign = [rng.randrange(n) for _ in range(k)]
        return [diag([1 if assign[a] == i else 0 for a in range(k)]) for i in range(n)]
    if name.startswith("Q[x]"):
        n = A.dim
        N = [[Fraction(0)] * k for _ in range(k)]
        if k >= 2 and rng.random() < 0.7:
            for a in range(k - 1):
                N[a][a + 1] = Fraction(rng.randint(1, 3))
        # x^n must vanish: strictly upper triangular with n >= k is automatic, else truncate
        if k > n - 1 + 1 and power(N, n) != Z:
            N = [[Fraction(0)] * k for _ in range(k)]
        return [power(N, i) for i in range(n)]
    if name.startswith("QZ"):
        n = A.dim
        choice = rng.random()
        if k % n == 0 and choice < 0.5:
            g = [[Fraction(0)] * k for _ in range(k)]
            for blk in range(k // n):
                for a in range(n):
                    g[blk * n + (a + 1) % n][blk * n + a] = Fraction(1)
        elif n == 2 or (n == 4 and choice < 0.8):
            g = diag([rng.choice((1, -1)) for _ in range(k)])
        else:
            g = I
        return [power(g, i) for i in range(n)]
    if name == "T2":
        if k == 2 and rng.random() < 0.6:
            E = lambda a, b: [[Fraction(int((r, c) == (a, b))) for c in range(2)] for r in range(2)]  # noqa: E731
            return [E(0, 0), E(0, 1), E(1, 1)]
        chars = [rng.choice(((1, 0), (0, 1))) for _ in range(k)]
        return [diag([c[0] for c in chars]), Z, diag([c[1] for c in chars])]
    if name == "M2":
        if k % 2:
            return None
        mats = []
        for a in range(2):
            for b in range(2):
                x = [[Fraction(0)] * k for _ in range(k)]
                for blk in range(k // 2):
                    x[blk * 2 + a][blk * 2 + b] = Fraction(1)
                mats.append(x)
        return mats
    raise KeyError(name)


def random_free_bimodule(rng: random.Random, max_dim_a: int = 4, max_dim_r: int = 4,
                         max_dim_m: int = 8, change_bases: bool = True) -> Bimodule:
    """A random ``(A, R)``-bimodule that is free over ``R``, with its witness."""
    return random_free_family(rng, 1, max_dim_a, max_dim_r, max_dim_m, change_bases)[0]


def random_free_family(rng: random.Random, count: int, max_dim_a: int = 4, max_dim_r: int = 4,
                       max_dim_m: int = 8, change_bases: bool = True) -> list:
    """``count`` random free bimodules sharing the same algebra objects ``A`` and ``R``."""
    pool = _algebra_pool()
    while True:
        an, af = rng.choice(pool)
        rn, rf = rng.choice(pool)
        A, R = af(), rf()
        kmax = max_dim_m // R.dim
        if A.dim > max_dim_a or R.dim > max_dim_r or kmax < 1:
            continue
        # some algebras (M2) have no representation of odd dimension
        if an == rn or any(_scalar_reps(an, A, k, rng) is not None for k in range(1, kmax + 1)):
            break
    pa = _rand_invertible(rng, A.dim) if change_bases and rng.random() < 0.7 else None
    pr = _rand_invertible(rng, R.dim) if change_bases and rng.random() < 0.7 else None
    A2 = A.change_basis(pa) if pa else A
    R2 = R.change_basis(pr) if pr else R
    out = []
    while len(out) < count:
        k = rng.randint(1, kmax)
        if an == rn and (rng.random() < 0.25 or _scalar_reps(an, A, k, rng) is None):
            # A acts on each coordinate through its own multiplication
            rho = [[[unit_vec(i) if a == b else {} for b in range(k)] for a in range(k)]
                   for i in range(A.dim)]
        else:
            reps = _scalar_reps(an, A, k, rng)
            if reps is None:
                continue
            rho = [[[_scalar(R, reps[i][a][b]) for b in range(k)] for a in range(k)]
                   for i in range(A.dim)]
        M = free_from_rep(A, R, rho)
        if pa:
            M = _rebase_left(M, A2, pa)
        if pr:
            M = _rebase_right(M, R2, pr)
        if change_bases:
            M = M.change_basis(_rand_invertible(rng, M.dim))
        out.append(M)
    return out


def _combine(mats: list, coeffs: Vec) -> list:
    m = len(mats[0])
    out = [dict() for _ in range(m)]
    for i, x in coeffs.items():
        for c in range(m):
            axpy(out[c], x, mats[i][c])
    return out


def _rebase_left(M: Bimodule, A2: Algebra, p: list) -> Bimodule:
    n = A2.dim
    cols = [{j: frac(p[j][i]) for j in range(n) if p[j][i]} for i in range(n)]
    left = [_combine(M.left_action, cols[i]) for i in range(n)]
    return Bimodule(A2, M.right, M.dim, left, M.right_action, M.free_basis)


def _rebase_right(M: Bimodule, R2: Algebra, p: list) -> Bimodule:
    n = R2.dim
    cols = [{j: frac(p[j][i]) for j in range(n) if p[j][i]} for i in range(n)]
    right = [_combine(M.right_action, cols[i]) for i in range(n)]
    return Bimodule(M.left, R2, M.dim, M.left_action, right, M.free_basis)


def load_json(text_or_obj) -> dict:
    return json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
