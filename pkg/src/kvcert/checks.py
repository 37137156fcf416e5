"""Certificate-producing checkers for each structure, plus the hierarchy.

Every checker re-verifies the hypotheses of the notion it certifies and
reports failures as labelled residuals.  Where a second, independent route
to the same quantity exists (coordinate criteria on flat charts, twisted
vs. deformed operators, the explicit complementarity formula vs. the dual
algebroid bracket), both are evaluated and must agree entrywise; disagreement raises
:class:`~kvcert.errors.TheoremViolation`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Union

from . import algebroid as alg
from .algebroid import Algebroid, Cochain
from .certificate import Certificate, collect, combine
from .errors import PreconditionFailed, TheoremViolation
from .matrix import determinant, inverse, matmul, matsub, transpose
from .tensors import (
    BundleMap,
    SymTensorContra,
    SymTensorCo,
    b_deform,
    b_deform_cochain,
    b_deform_matrix,
    compose_bh,
    deformed_dual_product,
    dual_algebroid,
    h_deform,
    kv_bracket,
    star_product,
)


def is_flat_tangent(A: Algebroid) -> bool:
    """Gamma identically zero and identity anchor in the chart coordinates."""
    n = A.rank
    if len(A.variables) != n:
        return False
    if any(not c.is_zero() for p in A.gamma for r in p for c in r):
        return False
    return all(A.anchor[i][j] == int(i == j) for i in range(n) for j in range(n))


# -- coordinate oracles (flat charts only) -------------------------------------------


def coordinate_kv_residuals(h, variables) -> dict:
    """sum_l (h_jl d_l h_ik - h_il d_l h_jk) for every (i, j, k)."""
    n = len(h)
    out = {}
    for i, j, k in product(range(n), repeat=3):
        acc = h[0][0] * 0
        for l, name in enumerate(variables):
            acc = acc + h[j][l] * h[i][k].partial(name) - h[i][l] * h[j][k].partial(name)
        out[i, j, k] = acc
    return out


def coordinate_hessian_residuals(b, variables) -> dict:
    """d_k b_ij - d_i b_kj, keyed by (k, i, j)."""
    n = len(b)
    out = {}
    for k, i, j in product(range(n), repeat=3):
        out[k, i, j] = b[i][j].partial(variables[k]) - b[k][j].partial(variables[i])
    return out


# -- single structures -------------------------------------------------------------------


def check_koszul_vinberg(H: SymTensorContra, label: str = "kv") -> Certificate:
    T = kv_bracket(H, H)
    A = H.algebroid
    if is_flat_tangent(A):
        coord = coordinate_kv_residuals(H.h, A.variables)
        for idx, v in T.entries():
            if v != coord[idx]:
                raise TheoremViolation(f"KV bracket and coordinate criterion differ at {idx}")
    entries = [(idx, v) for idx, v in T.entries() if idx[0] < idx[1]]
    return Certificate("koszul-vinberg", tuple(collect(label, entries)))


def check_compatible(H1: SymTensorContra, H2: SymTensorContra) -> Certificate:
    T = kv_bracket(H1, H2)
    entries = [(idx, v) for idx, v in T.entries() if idx[0] < idx[1]]
    return Certificate("compatible", tuple(collect("compatible", entries)))


def torsion(A: Algebroid, N, X, Y):
    """Nx.Ny - N(x.Ny + Nx.y - N(x.y))"""
    m = getattr(N, "m", N)
    NX, NY = alg.apply_map(m, X), alg.apply_map(m, Y)
    inner = alg.multiply(A, X, NY) + alg.multiply(A, NX, Y) - alg.apply_map(m, alg.multiply(A, X, Y))
    return alg.multiply(A, NX, NY) - alg.apply_map(m, inner)


def check_nijenhuis(N: BundleMap, algebroid: Algebroid | None = None, label: str = "torsion") -> Certificate:
    """Torsion on every ordered pair of frame elements.

    ``algebroid`` overrides ``N.algebroid`` so the same matrix can be tested
    against a deformed or dual structure.
    """
    A = algebroid if algebroid is not None else N.algebroid
    n = A.rank
    e = [A.basis(i) for i in range(n)]
    entries = []
    for i, j in product(range(n), repeat=2):
        t = torsion(A, N, e[i], e[j])
        entries.extend(((i, j, k), v) for k, v in enumerate(t.coeffs))
    return Certificate("nijenhuis", tuple(collect(label, entries)))


def cocycle_certificate(A: Algebroid, phi: Cochain, label: str = "cocycle") -> Certificate:
    d = alg.delta_A(A, phi)
    if phi.degree == 2 and is_flat_tangent(A):
        coord = coordinate_hessian_residuals(phi.matrix(), A.variables)
        for idx, v in coord.items():
            if v != d.component(idx):
                raise TheoremViolation(f"coboundary and coordinate criterion differ at {idx}")
    return Certificate("cocycle", tuple(collect(label, d.items())))


def check_pseudo_hessian(B: SymTensorCo, label: str = "cocycle") -> Certificate:
    cert = cocycle_certificate(B.algebroid, B.cochain(), label)
    return Certificate("pseudo-hessian", cert.residuals)


def _commutator_residuals(H: SymTensorContra, N: BundleMap):
    diff = matsub(matmul(N.m, H.h), matmul(H.h, transpose(N.m)))
    n = len(diff)
    return collect("commute", (((i, j), diff[i][j]) for i in range(n) for j in range(n) if i < j))


def kvn_difference(H: SymTensorContra, N: BundleMap) -> dict:
    """star - deformed dual product on every coframe pair, keyed (i, j, k)."""
    A = H.algebroid
    D = alg.deform(A, N)
    eps = [A.cobasis(i) for i in range(A.rank)]
    out = {}
    for i, j in product(range(A.rank), repeat=2):
        diff = star_product(H, N, eps[i], eps[j], D) - deformed_dual_product(H, N, eps[i], eps[j])
        for k, v in enumerate(diff.coeffs):
            out[i, j, k] = v
    return out


def check_kvn(H: SymTensorContra, N: BundleMap) -> Certificate:
    """N o H# = H# o N*, then star = deformed dual product on coframe pairs.

    The second identity is only tensorial once the first holds, so it is not
    evaluated when the commutation residual is nonzero.
    """
    kv = check_koszul_vinberg(H)
    nij = check_nijenhuis(N)
    stage1 = _commutator_residuals(H, N)
    notes = ()
    if stage1:
        stage2 = []
        notes = ("product identity skipped: N o H# != H# o N*",)
    else:
        stage2 = collect("kvn", sorted(kvn_difference(H, N).items()))
    return combine(
        "kvn",
        kv,
        nij,
        Certificate("kvn", tuple(stage1) + tuple(stage2)),
        notes=notes,
    )


def check_kvb(H: SymTensorContra, B: SymTensorCo) -> Certificate:
    A = H.algebroid
    N = compose_bh(H, B)
    BN = b_deform_cochain(B, N)
    return combine(
        "kvb",
        check_koszul_vinberg(H),
        check_pseudo_hessian(B),
        cocycle_certificate(A, BN, "cocycle_N"),
        derived={"N": N.m, "B_N": BN.matrix()},
    )


def complementary_table(H: SymTensorContra, B: SymTensorCo) -> dict:
    """The explicit complementarity expression on every frame triple, evaluated with A's operations."""
    A = H.algebroid
    N = compose_bh(H, B)
    e = [A.basis(i) for i in range(A.rank)]
    Ne = [N(x) for x in e]
    ap = alg.anchor_apply
    mul = alg.multiply

    out = {}
    for i, j, k in product(range(A.rank), repeat=3):
        x, y, z = e[i], e[j], e[k]
        Nx, Ny, Nz = Ne[i], Ne[j], Ne[k]
        v = (
            ap(A, Ny, B(x, z))
            - ap(A, Nx, B(y, z))
            - ap(A, x, B(Ny, z))
            + ap(A, y, B(Nx, z))
            - B(mul(A, Ny, z), x)
            - B(mul(A, y, Nz), x)
            + B(mul(A, Nx, z), y)
            + B(mul(A, x, Nz), y)
            + B(alg.bracket(A, Nx, y), z)
            - B(alg.bracket(A, Ny, x), z)
        )
        out[i, j, k] = v
    return out


def check_complementary(H: SymTensorContra, B: SymTensorCo) -> Certificate:
    kv = check_koszul_vinberg(H)
    if not kv.holds:
        raise PreconditionFailed("H is not a Koszul-Vinberg structure", kv)
    D = dual_algebroid(H)
    T = kv_bracket(SymTensorContra(D, B.b), SymTensorContra(D, B.b))
    direct = complementary_table(H, B)
    for idx, v in T.entries():
        if v != direct[idx]:
            raise TheoremViolation(f"dual bracket and direct formula differ at {idx}")
    entries = [(idx, v) for idx, v in T.entries() if idx[0] < idx[1]]
    return Certificate("complementary", tuple(collect("complementary", entries)))


def _hess1_residuals(B: SymTensorCo, N: BundleMap):
    diff = matsub(matmul(B.b, N.m), matmul(transpose(N.m), B.b))
    n = len(diff)
    return collect("hess1", (((i, j), diff[i][j]) for i in range(n) for j in range(n) if i < j))


def check_hn(B: SymTensorCo, N: BundleMap) -> Certificate:
    A = B.algebroid
    return combine(
        "hn",
        Certificate("hess1", tuple(_hess1_residuals(B, N))),
        check_pseudo_hessian(B),
        cocycle_certificate(A, b_deform_cochain(B, N, 1), "cocycle_N"),
        check_nijenhuis(N),
        derived={"B_N": b_deform_matrix(B, N, 1)},
    )


def is_nondegenerate(m) -> bool:
    return not determinant(m).is_zero()


def check_hn_via_squares(B: SymTensorCo, N: BundleMap) -> Certificate:
    """HN through the cocycle conditions on B_N and B_{N^2} alone.

    Requires B(Nx, y) = B(x, Ny), a closed B, and a nondegenerate B; the
    verdict is cross-checked against :func:`check_hn` on every call.
    """
    A = B.algebroid
    pre = combine("hn2-preconditions", Certificate("hess1", tuple(_hess1_residuals(B, N))), check_pseudo_hessian(B))
    if not pre.holds:
        raise PreconditionFailed("hn2 needs B(Nx,y) = B(x,Ny) and a closed B", pre)
    if not is_nondegenerate(B.b):
        raise PreconditionFailed("hn2 needs a nondegenerate B")
    cert = combine(
        "hn2",
        cocycle_certificate(A, b_deform_cochain(B, N, 1), "cocycle_N"),
        cocycle_certificate(A, b_deform_cochain(B, N, 2), "cocycle_N2"),
        derived={"B_N": b_deform_matrix(B, N, 1), "B_N2": b_deform_matrix(B, N, 2)},
    )
    full = check_hn(B, N)
    if full.holds != cert.holds:
        raise TheoremViolation("cocycle criterion and full HN check disagree")
    return cert


def derive_nijenhuis(H1: SymTensorContra, H: SymTensorContra) -> BundleMap:
    """N = H1# o (H#)^-1; raises Degenerate when H is degenerate."""
    return BundleMap(H.algebroid, matmul(H1.h, inverse(H.h)))


# -- hierarchies --------------------------------------------------------------------------------


@dataclass
class Hierarchy:
    base: Union[SymTensorContra, SymTensorCo]
    N: BundleMap
    depth: int
    members: list = field(default_factory=list)
    member_checks: list = field(default_factory=list)
    pairwise: list = field(default_factory=list)  # (depth+1) x (depth+1), symmetric

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.member_checks) and all(
            c.holds for row in self.pairwise for c in row
        )

    def pairs(self):
        """Each unordered pair (k <= l) once."""
        for k in range(self.depth + 1):
            for l in range(k, self.depth + 1):
                yield (k, l), self.pairwise[k][l]


def hierarchy(base, N: BundleMap, depth: int = 3) -> Hierarchy:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if isinstance(base, SymTensorContra):
        pre = check_kvn(base, N)
        if not pre.holds:
            raise PreconditionFailed("(H, N) is not a KVN structure", pre)
        members = [h_deform(base, N, k) for k in range(depth + 1)]
        checks = [check_koszul_vinberg(m) for m in members]
        table = [[None] * (depth + 1) for _ in range(depth + 1)]
        for k in range(depth + 1):
            for l in range(k, depth + 1):
                table[k][l] = table[l][k] = check_compatible(members[k], members[l])
    elif isinstance(base, SymTensorCo):
        pre = check_hn(base, N)
        if not pre.holds:
            raise PreconditionFailed("(B, N) is not an HN structure", pre)
        members = [b_deform(base, N, k) for k in range(depth + 1)]
        checks = [check_pseudo_hessian(m) for m in members]
        table = [[None] * (depth + 1) for _ in range(depth + 1)]
        # delta is linear, so closed symmetric endpoints certify every combination
        for k in range(depth + 1):
            for l in range(k, depth + 1):
                table[k][l] = table[l][k] = combine("compatible", checks[k], checks[l])
    else:
        raise TypeError(f"hierarchy base must be a symmetric 2-tensor, got {type(base).__name__}")
    return Hierarchy(base, N, depth, members, checks, table)
