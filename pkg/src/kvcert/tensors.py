"""Symmetric 2-tensors, bundle maps and the operations they induce.

Matrix conventions, with ``e_i`` the frame and ``eps^i`` the coframe:

* contravariant ``H``: ``H(alpha, beta) = alpha^T h beta``, ``H#(alpha) = h alpha``
* covariant ``B``: ``B(x, y) = x^T b y``, ``B_nat(x) = b x``
* bundle map ``N``: ``N(e_j) = sum_i m[i][j] e_i``; ``N*`` acts on covectors by ``m^T``
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import algebroid as alg
from .algebroid import Algebroid, CoSection, Section, apply_dual, apply_map, pair
from .errors import RankMismatch, SymmetryViolation, TheoremViolation
from .ratfunc import RatFunc
from .matrix import Matrix, as_matrix, identity, inverse, is_symmetric, matmul, matpow, transpose


def _check_square(A: Algebroid, m: Matrix, what: str):
    if len(m) != A.rank or any(len(r) != A.rank for r in m):
        raise RankMismatch(f"{what} must be {A.rank}x{A.rank}")
    for f in (c for r in m for c in r):
        if f.variables != A.variables:
            raise RankMismatch(f"{what} entries live over {f.variables}, not {A.variables}")


@dataclass(frozen=True, eq=False)
class SymTensorContra:
    algebroid: Algebroid
    h: Matrix

    def __post_init__(self):
        h = as_matrix(self.h)
        object.__setattr__(self, "h", h)
        _check_square(self.algebroid, h, "contravariant tensor")
        if not is_symmetric(h):
            raise SymmetryViolation("contravariant 2-tensor is not symmetric")

    def sharp(self, alpha: CoSection) -> Section:
        return Section(apply_map(self.h, Section(alpha.coeffs)).coeffs)

    def __call__(self, alpha: CoSection, beta: CoSection):
        return pair(beta, self.sharp(alpha))


@dataclass(frozen=True, eq=False)
class SymTensorCo:
    algebroid: Algebroid
    b: Matrix

    def __post_init__(self):
        b = as_matrix(self.b)
        object.__setattr__(self, "b", b)
        _check_square(self.algebroid, b, "covariant tensor")
        if not is_symmetric(b):
            raise SymmetryViolation("covariant 2-tensor is not symmetric")

    def natural(self, x: Section) -> CoSection:
        return CoSection(apply_map(self.b, x).coeffs)

    def __call__(self, x: Section, y: Section):
        return pair(self.natural(x), y)

    def cochain(self) -> alg.Cochain:
        return alg.Cochain.from_matrix(self.b, self.algebroid.variables)


@dataclass(frozen=True, eq=False)
class BundleMap:
    algebroid: Algebroid
    m: Matrix

    def __post_init__(self):
        m = as_matrix(self.m)
        object.__setattr__(self, "m", m)
        _check_square(self.algebroid, m, "bundle map")

    def __call__(self, x: Section) -> Section:
        return apply_map(self.m, x)

    def dual(self, alpha: CoSection) -> CoSection:
        return apply_dual(self.m, alpha)


@dataclass(frozen=True, eq=False)
class TriTensor:
    """Components ``T[i][j][k]`` on coframe triples, alternating in ``(i, j)``."""

    components: tuple

    def __post_init__(self):
        t = tuple(tuple(tuple(r) for r in p) for p in self.components)
        object.__setattr__(self, "components", t)
        n = len(t)
        for i, j, k in product(range(n), repeat=3):
            if not (t[i][j][k] + t[j][i][k]).is_zero():
                raise TheoremViolation(f"bracket not alternating at {(i, j, k)}")

    def __getitem__(self, idx):
        i, j, k = idx
        return self.components[i][j][k]

    def entries(self):
        n = len(self.components)
        for i, j, k in product(range(n), repeat=3):
            yield (i, j, k), self.components[i][j][k]

    def is_zero(self) -> bool:
        return all(v.is_zero() for _, v in self.entries())


def _same_algebroid(*objs):
    first = objs[0].algebroid
    for o in objs[1:]:
        if o.algebroid is not first and (
            o.algebroid.rank != first.rank or o.algebroid.variables != first.variables
        ):
            raise RankMismatch("tensors live on different algebroids")
    return first


# -- the Koszul-Vinberg bracket ---------------------------------------------------


def kv_bracket_eval(H1: SymTensorContra, H2: SymTensorContra, a1: CoSection, a2: CoSection, a3: CoSection):
    """Symmetrised bracket of two symmetric tensors on three covectors."""
    A = _same_algebroid(H1, H2)
    total = A.const(0)
    for P, Q in ((H1, H2), (H2, H1)):
        p1, p2, q1, q2, q3 = P.sharp(a1), P.sharp(a2), Q.sharp(a1), Q.sharp(a2), Q.sharp(a3)
        total = (
            total
            + alg.anchor_apply(A, p1, pair(a3, q2))
            - alg.anchor_apply(A, p2, pair(a3, q1))
            + pair(a1, alg.multiply(A, p2, q3))
            - pair(a2, alg.multiply(A, p1, q3))
            - pair(a3, alg.bracket(A, p1, q2))
        )
    return total / 2


def kv_bracket(H1: SymTensorContra, H2: SymTensorContra) -> TriTensor:
    A = _same_algebroid(H1, H2)
    n = A.rank
    eps = [A.cobasis(i) for i in range(n)]
    sharp1 = [H1.sharp(a) for a in eps]
    sharp2 = [H2.sharp(a) for a in eps]
    zero = A.const(0)
    comps = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for P, Q in ((sharp1, sharp2), (sharp2, sharp1)):
        # every product and derivative is needed several times below
        fields = [alg.anchor_field(A, X) for X in P]
        grads = [[_gradient(A, c) for c in Y.coeffs] for Y in Q]
        pq = [[alg.multiply(A, P[a], Q[b]) for b in range(n)] for a in range(n)]
        qp = [[alg.multiply(A, Q[a], P[b]) for b in range(n)] for a in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    v = (
                        _derive(fields[i], grads[j][k], zero)
                        - _derive(fields[j], grads[i][k], zero)
                        + pq[j][k][i]
                        - pq[i][k][j]
                        - pq[i][j][k]
                        + qp[j][i][k]
                    )
                    comps[i][j][k] = comps[i][j][k] + v
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                comps[i][j][k] = comps[i][j][k] / 2
                comps[j][i][k] = -comps[i][j][k]
    return TriTensor(tuple(tuple(tuple(r) for r in p) for p in comps))


def _gradient(A: Algebroid, f: RatFunc) -> tuple[RatFunc, ...]:
    return tuple(f.partial(v) for v in A.variables)


def _derive(field, grad, zero: RatFunc) -> RatFunc:
    acc = zero
    for u, g in zip(field, grad):
        if not u.is_zero() and not g.is_zero():
            acc = acc + u * g
    return acc


# -- products on covectors ------------------------------------------------------------


def dual_product(H: SymTensorContra, alpha: CoSection, beta: CoSection) -> CoSection:
    """alpha .^H beta = L_{H#alpha} beta - R_{H#beta} alpha - d H(alpha, beta)"""
    A = H.algebroid
    A.require(alpha, beta)
    return (
        alg.lie_derivative(A, H.sharp(alpha), beta)
        - alg.dual_R(A, H.sharp(beta), alpha)
        - alg.d_A(A, H(alpha, beta))
    )


def _star_twisted(H: SymTensorContra, N: BundleMap, alpha: CoSection, beta: CoSection) -> CoSection:
    A = H.algebroid
    x, y = H.sharp(alpha), H.sharp(beta)
    lie = (
        alg.lie_derivative(A, N(x), beta)
        + N.dual(alg.lie_derivative(A, x, beta))
        - alg.lie_derivative(A, x, N.dual(beta))
    )
    right = (
        alg.dual_R(A, N(y), alpha)
        + N.dual(alg.dual_R(A, y, alpha))
        - alg.dual_R(A, y, N.dual(alpha))
    )
    return lie - right - N.dual(alg.d_A(A, H(alpha, beta)))


def _star_deformed(H: SymTensorContra, D: Algebroid, alpha: CoSection, beta: CoSection) -> CoSection:
    x, y = H.sharp(alpha), H.sharp(beta)
    return alg.lie_derivative(D, x, beta) - alg.dual_R(D, y, alpha) - alg.d_A(D, H(alpha, beta))


def star_product(H: SymTensorContra, N: BundleMap, alpha: CoSection, beta: CoSection, deformed=None) -> CoSection:
    """The product built from the N-deformed Lie derivative, right action and differential.

    Computed from the twisted formulas and again on ``deform(A, N)``; the two
    must agree.  ``deformed`` may carry a precomputed ``deform(A, N)``.
    """
    _same_algebroid(H, N)
    H.algebroid.require(alpha, beta)
    twisted = _star_twisted(H, N, alpha, beta)
    D = deformed if deformed is not None else alg.deform(H.algebroid, N)
    other = _star_deformed(H, D, alpha, beta)
    if twisted != other:
        raise TheoremViolation("star product: twisted and deformed evaluations differ")
    return twisted


def deformed_dual_product(H: SymTensorContra, N: BundleMap, alpha: CoSection, beta: CoSection) -> CoSection:
    """N*alpha .^H beta + alpha .^H N*beta - N*(alpha .^H beta)"""
    _same_algebroid(H, N)
    return (
        dual_product(H, N.dual(alpha), beta)
        + dual_product(H, alpha, N.dual(beta))
        - N.dual(dual_product(H, alpha, beta))
    )


def dual_bracket(H, alpha, beta) -> CoSection:
    return dual_product(H, alpha, beta) - dual_product(H, beta, alpha)


def star_bracket(H, N, alpha, beta) -> CoSection:
    D = alg.deform(H.algebroid, N)
    return star_product(H, N, alpha, beta, D) - star_product(H, N, beta, alpha, D)


def deformed_dual_bracket(H, N, alpha, beta) -> CoSection:
    return deformed_dual_product(H, N, alpha, beta) - deformed_dual_product(H, N, beta, alpha)


def dual_brackets(H, alpha, beta, N=None, kind="H") -> CoSection:
    """Commutator brackets on covectors: ``kind`` is ``"H"``, ``"star"`` or ``"N*"``."""
    if kind == "H":
        return dual_bracket(H, alpha, beta)
    if N is None:
        raise ValueError(f"bracket {kind!r} needs a bundle map")
    if kind == "star":
        return star_bracket(H, N, alpha, beta)
    if kind == "N*":
        return deformed_dual_bracket(H, N, alpha, beta)
    raise ValueError(f"unknown bracket kind {kind!r}")


# -- inversion, powers and deformed tensors ---------------------------------------------


def invert(T):
    """Exact inverse, switching variance; raises Degenerate when det is identically zero."""
    if isinstance(T, SymTensorContra):
        return SymTensorCo(T.algebroid, inverse(T.h))
    if isinstance(T, SymTensorCo):
        return SymTensorContra(T.algebroid, inverse(T.b))
    raise TypeError(f"cannot invert {type(T).__name__}")


def n_power(N: BundleMap, k: int) -> BundleMap:
    if k < 0:
        raise ValueError("power must be nonnegative")
    return BundleMap(N.algebroid, matpow(N.m, k, N.algebroid.variables))


def h_deform(H: SymTensorContra, N: BundleMap, k: int = 1) -> SymTensorContra:
    """H_{N^k} with sharp map N^k o H#, i.e. matrix N^k h."""
    _same_algebroid(H, N)
    m = matmul(n_power(N, k).m, H.h)
    if not is_symmetric(m):
        raise SymmetryViolation(f"N^{k} o H# is not symmetric (N o H# != H# o N*)")
    return SymTensorContra(H.algebroid, m)


def b_deform_matrix(B: SymTensorCo, N: BundleMap, k: int = 1) -> Matrix:
    """Components of B_{N^k}(x, y) = B(N^k x, y), that is (N^k)^T b."""
    _same_algebroid(B, N)
    return matmul(transpose(n_power(N, k).m), B.b)


def b_deform_cochain(B: SymTensorCo, N: BundleMap, k: int = 1) -> alg.Cochain:
    """B_{N^k} as a degree-2 cochain; symmetry is not required here."""
    return alg.Cochain.from_matrix(b_deform_matrix(B, N, k), B.algebroid.variables)


def b_deform(B: SymTensorCo, N: BundleMap, k: int = 1) -> SymTensorCo:
    m = b_deform_matrix(B, N, k)
    if not is_symmetric(m):
        raise SymmetryViolation(f"B(N^{k}x, y) is not symmetric")
    return SymTensorCo(B.algebroid, m)


def compose_bh(H: SymTensorContra, B: SymTensorCo) -> BundleMap:
    """N = H# o B_nat, matrix h b."""
    _same_algebroid(H, B)
    return BundleMap(H.algebroid, matmul(H.h, B.b))


def identity_map(A: Algebroid) -> BundleMap:
    return BundleMap(A, identity(A.rank, A.variables))


# -- the induced structure on the dual bundle ------------------------------------------------


def dual_algebroid(H: SymTensorContra) -> Algebroid:
    """(A*, .^H, a o H#); a left-symmetric algebroid when H is Koszul-Vinberg.

    Its frame is the coframe of ``A``.
    """
    A = H.algebroid
    n = A.rank
    eps = [A.cobasis(i) for i in range(n)]
    gamma = tuple(tuple(dual_product(H, eps[i], eps[j]).coeffs for j in range(n)) for i in range(n))
    anchor = matmul(A.anchor, H.h) if A.variables else ()
    return Algebroid(A.chart, n, gamma, anchor)
