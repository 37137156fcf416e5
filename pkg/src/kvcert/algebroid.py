"""Left-symmetric algebroids over a flat coordinate chart.

An algebroid of rank ``n`` is stored through its structure functions
``gamma[i][j][k]`` (so that ``e_i . e_j = sum_k gamma[i][j][k] e_k``) and its
anchor matrix, whose column ``i`` is the vector field ``a(e_i)`` in the
coordinate frame.  The product of arbitrary sections is C-infinity linear in
the left slot and obeys the Leibniz rule in the right slot.  An empty chart
models a point, so the same code handles finite-dimensional left-symmetric
algebras over the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .certificate import Certificate, collect
from .errors import RankMismatch, ValidationError
from .matrix import Matrix, as_matrix, matmul
from .ratfunc import RatFunc


@dataclass(frozen=True)
class Chart:
    variables: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValidationError(f"duplicate chart variables {self.variables}")


class _Vector:
    """Coefficient vector over a (co)frame; shared by sections and covectors."""

    __slots__ = ("coeffs",)
    __hash__ = None

    def __init__(self, coeffs: Iterable[RatFunc]):
        self.coeffs = tuple(coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def _same(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if len(other) != len(self):
            raise RankMismatch(f"length {len(self)} vs {len(other)}")

    def __add__(self, other):
        self._same(other)
        return type(self)(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._same(other)
        return type(self)(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return type(self)(-a for a in self.coeffs)

    def scaled(self, f: RatFunc):
        return type(self)(f * a for a in self.coeffs)

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.coeffs)

    def __eq__(self, other):
        if type(other) is not type(self) or len(other) != len(self):
            return NotImplemented
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self):
        return f"{type(self).__name__}({[str(c) for c in self.coeffs]})"


class Section(_Vector):
    """x = sum_i coeffs[i] e_i"""


class CoSection(_Vector):
    """alpha = sum_i coeffs[i] eps^i"""


def pair(alpha: CoSection, x: Section) -> RatFunc:
    if len(alpha) != len(x):
        raise RankMismatch(f"pairing rank {len(alpha)} with {len(x)}")
    total = alpha.coeffs[0] * 0
    for a, b in zip(alpha.coeffs, x.coeffs):
        if not a.is_zero() and not b.is_zero():
            total = total + a * b
    return total


@dataclass(frozen=True, eq=False)
class Algebroid:
    chart: Chart
    rank: int
    gamma: tuple  # gamma[i][j][k] = coefficient of e_k in e_i . e_j
    anchor: Matrix  # len(chart.variables) rows, rank columns

    def __post_init__(self):
        n, m = self.rank, len(self.chart.variables)
        if n < 1:
            raise ValidationError("rank must be positive")
        g = tuple(tuple(tuple(row) for row in plane) for plane in self.gamma)
        if len(g) != n or any(len(p) != n or any(len(r) != n for r in p) for p in g):
            raise ValidationError(f"gamma must be {n}x{n}x{n}")
        anchor = tuple(tuple(r) for r in self.anchor)
        if len(anchor) != m or any(len(r) != n for r in anchor):
            raise ValidationError(f"anchor must be {m}x{n}")
        for f in (c for p in g for r in p for c in r):
            if f.variables != self.chart.variables:
                raise ValidationError("structure function over the wrong variables")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "anchor", anchor)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.chart.variables

    def const(self, value) -> RatFunc:
        return RatFunc.constant(value, self.variables)

    def zero_section(self) -> Section:
        return Section(self.const(0) for _ in range(self.rank))

    def zero_cosection(self) -> CoSection:
        return CoSection(self.const(0) for _ in range(self.rank))

    def basis(self, i: int) -> Section:
        return Section(self.const(int(i == j)) for j in range(self.rank))

    def cobasis(self, i: int) -> CoSection:
        return CoSection(self.const(int(i == j)) for j in range(self.rank))

    def section(self, coeffs) -> Section:
        s = Section(coeffs)
        self.require(s)
        return s

    def cosection(self, coeffs) -> CoSection:
        s = CoSection(coeffs)
        self.require(s)
        return s

    def require(self, *vectors):
        for v in vectors:
            if len(v) != self.rank:
                raise RankMismatch(f"expected rank {self.rank}, got {len(v)}")

    def same_structure(self, other: "Algebroid") -> bool:
        """Entrywise equality of structure functions and anchor."""
        if self.rank != other.rank or self.variables != other.variables:
            return False
        return all(
            a == b
            for p, q in zip(self.gamma, other.gamma)
            for r, s in zip(p, q)
            for a, b in zip(r, s)
        ) and all(a == b for r, s in zip(self.anchor, other.anchor) for a, b in zip(r, s))


# -- constructors -------------------------------------------------------------


def flat_tangent(chart: Chart | Sequence[str]) -> Algebroid:
    """The tangent algebroid of affine space with its standard flat connection.

    On an empty chart this is the zero algebra on a point, which needs rank 1
    to be representable; there the single basis element squares to zero.
    """
    if not isinstance(chart, Chart):
        chart = Chart(tuple(chart))
    v = chart.variables
    n = max(len(v), 1)
    zero, one = RatFunc.constant(0, v), RatFunc.constant(1, v)
    gamma = tuple(tuple(tuple(zero for _ in range(n)) for _ in range(n)) for _ in range(n))
    anchor = tuple(tuple(one if i == j else zero for j in range(n)) for i in range(len(v)))
    return Algebroid(chart, n, gamma, anchor)


def from_structure(chart: Chart | Sequence[str], gamma, anchor=None) -> Algebroid:
    if not isinstance(chart, Chart):
        chart = Chart(tuple(chart))
    n = len(gamma)
    if anchor is None:
        zero = RatFunc.constant(0, chart.variables)
        anchor = tuple(tuple(zero for _ in range(n)) for _ in chart.variables)
    return Algebroid(chart, n, gamma, anchor)


# -- basic operations -----------------------------------------------------------


def anchor_apply(A: Algebroid, X: Section, f: RatFunc) -> RatFunc:
    """a(X)(f) = sum_i X_i sum_mu anchor[mu][i] d f / d x^mu"""
    A.require(X)
    total = A.const(0)
    if f.is_zero() or not A.variables:
        return total
    partials = {}
    for i, xi in enumerate(X.coeffs):
        if xi.is_zero():
            continue
        acc = None
        for mu, name in enumerate(A.variables):
            c = A.anchor[mu][i]
            if c.is_zero():
                continue
            if name not in partials:
                partials[name] = f.partial(name)
            d = partials[name]
            if d.is_zero():
                continue
            acc = c * d if acc is None else acc + c * d
        if acc is not None:
            total = total + xi * acc
    return total


def anchor_field(A: Algebroid, X: Section) -> tuple[RatFunc, ...]:
    """Components of a(X) in the coordinate frame."""
    A.require(X)
    out = []
    for mu in range(len(A.variables)):
        acc = A.const(0)
        for i, xi in enumerate(X.coeffs):
            if not xi.is_zero() and not A.anchor[mu][i].is_zero():
                acc = acc + A.anchor[mu][i] * xi
        out.append(acc)
    return tuple(out)


def multiply(A: Algebroid, X: Section, Y: Section) -> Section:
    A.require(X, Y)
    n = A.rank
    out = [A.const(0) for _ in range(n)]
    for i, xi in enumerate(X.coeffs):
        if xi.is_zero():
            continue
        for j, yj in enumerate(Y.coeffs):
            if yj.is_zero():
                continue
            for k in range(n):
                g = A.gamma[i][j][k]
                if not g.is_zero():
                    out[k] = out[k] + xi * yj * g
    for j, yj in enumerate(Y.coeffs):
        d = anchor_apply(A, X, yj)
        if not d.is_zero():
            out[j] = out[j] + d
    return Section(out)


def bracket(A: Algebroid, X: Section, Y: Section) -> Section:
    return multiply(A, X, Y) - multiply(A, Y, X)


def apply_map(m: Matrix, X: Section) -> Section:
    """N(X) for a bundle map given by its frame matrix."""
    return Section(_matvec(m, X.coeffs))


def apply_dual(m: Matrix, alpha: CoSection) -> CoSection:
    """N*(alpha): the transpose acting on covectors."""
    return CoSection(_matvec(tuple(zip(*m)), alpha.coeffs))


def _matvec(m, v):
    out = []
    for row in m:
        acc = None
        for a, b in zip(row, v):
            if a.is_zero() or b.is_zero():
                continue
            acc = a * b if acc is None else acc + a * b
        out.append(acc if acc is not None else row[0] * 0)
    return out


def _matrix_of(N) -> Matrix:
    return getattr(N, "m", N)


# -- axioms ---------------------------------------------------------------------


def associator(A: Algebroid, X: Section, Y: Section, Z: Section) -> Section:
    return multiply(A, X, multiply(A, Y, Z)) - multiply(A, multiply(A, X, Y), Z)


def vector_field_bracket(A: Algebroid, u: Sequence[RatFunc], v: Sequence[RatFunc]) -> tuple[RatFunc, ...]:
    """Commutator of two coordinate vector fields given by components."""
    out = []
    for mu in range(len(A.variables)):
        acc = A.const(0)
        for nu, name in enumerate(A.variables):
            if not u[nu].is_zero():
                acc = acc + u[nu] * v[mu].partial(name)
            if not v[nu].is_zero():
                acc = acc - v[nu] * u[mu].partial(name)
        out.append(acc)
    return tuple(out)


def check_axioms(A: Algebroid) -> Certificate:
    """Associator symmetry, anchor morphism and Jacobi on basis elements.

    Basis evaluation suffices: for a function f,
    (x,y,fz) - (y,x,fz) = f[(x,y,z) - (y,x,z)] + (a(x)a(y) - a(y)a(x) - a([x,y]))(f) z,
    so the first two conditions on the frame give the axiom everywhere.
    """
    n = A.rank
    e = [A.basis(i) for i in range(n)]
    assoc = []
    for i, j, k in product(range(n), repeat=3):
        if i >= j:
            continue
        r = associator(A, e[i], e[j], e[k]) - associator(A, e[j], e[i], e[k])
        assoc.extend(((i, j, k, c), v) for c, v in enumerate(r.coeffs))
    morph = []
    fields = [anchor_field(A, x) for x in e]
    for i, j in combinations(range(n), 2):
        lhs = anchor_field(A, bracket(A, e[i], e[j]))
        rhs = vector_field_bracket(A, fields[i], fields[j])
        morph.extend(((i, j, mu), a - b) for mu, (a, b) in enumerate(zip(lhs, rhs)))
    jac = []
    for i, j, k in combinations(range(n), 3):
        total = (
            bracket(A, bracket(A, e[i], e[j]), e[k])
            + bracket(A, bracket(A, e[j], e[k]), e[i])
            + bracket(A, bracket(A, e[k], e[i]), e[j])
        )
        jac.extend(((i, j, k, c), v) for c, v in enumerate(total.coeffs))
    residuals = collect("associator", assoc) + collect("anchor", morph) + collect("jacobi", jac)
    return Certificate("axioms", tuple(residuals))


# -- differentials and dual actions -------------------------------------------------


def d_A(A: Algebroid, f: RatFunc) -> CoSection:
    return CoSection(anchor_apply(A, A.basis(i), f) for i in range(A.rank))


def lie_derivative(A: Algebroid, X: Section, alpha: CoSection) -> CoSection:
    """<L_X alpha, y> = a(X)<alpha, y> - <alpha, [X, y]>"""
    A.require(X, alpha)
    out = []
    for i in range(A.rank):
        ei = A.basis(i)
        out.append(anchor_apply(A, X, alpha[i]) - pair(alpha, bracket(A, X, ei)))
    return CoSection(out)


def dual_L(A: Algebroid, X: Section, alpha: CoSection) -> CoSection:
    """<L_X xi, y> = a(X)<xi, y> - <xi, X . y>"""
    A.require(X, alpha)
    return CoSection(
        anchor_apply(A, X, alpha[i]) - pair(alpha, multiply(A, X, A.basis(i))) for i in range(A.rank)
    )


def dual_R(A: Algebroid, X: Section, alpha: CoSection) -> CoSection:
    """<R_X xi, y> = -<xi, y . X>"""
    A.require(X, alpha)
    return CoSection(-pair(alpha, multiply(A, A.basis(i), X)) for i in range(A.rank))


# -- cochains -------------------------------------------------------------------


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    if len(set(idx)) < len(idx):
        return 0, tuple(idx)
    inversions = sum(1 for a, b in combinations(range(len(idx)), 2) if idx[a] > idx[b])
    return (-1 if inversions % 2 else 1), tuple(sorted(idx))


class Cochain:
    """An element of Gamma(wedge^{k-1} A* (x) A*): ``degree`` arguments,
    alternating in all but the last.

    Only keys with a strictly increasing alternating part are stored.
    """

    __slots__ = ("rank", "degree", "variables", "_comps")

    def __init__(self, rank: int, degree: int, variables, comps: dict):
        if degree < 1:
            raise ValueError("cochain degree must be at least 1")
        self.rank, self.degree, self.variables = rank, degree, tuple(variables)
        clean = {}
        for key, v in comps.items():
            key = tuple(key)
            if len(key) != degree or any(not 0 <= i < rank for i in key):
                raise ValueError(f"bad cochain index {key}")
            head = key[:-1]
            if any(a >= b for a, b in zip(head, head[1:])):
                raise ValueError(f"non-canonical cochain index {key}")
            if not v.is_zero():
                clean[key] = v
        self._comps = clean

    @classmethod
    def from_function(cls, rank, degree, variables, fn: Callable[[tuple[int, ...]], RatFunc]):
        keys = (
            head + (last,)
            for head in combinations(range(rank), degree - 1)
            for last in range(rank)
        )
        return cls(rank, degree, variables, {k: fn(k) for k in keys})

    @classmethod
    def from_matrix(cls, m: Matrix, variables) -> "Cochain":
        """Degree-2 cochain with phi(e_i, e_j) = m[i][j]; no symmetry required."""
        n = len(m)
        return cls(n, 2, variables, {(i, j): m[i][j] for i in range(n) for j in range(n)})

    @classmethod
    def from_cosection(cls, alpha: CoSection) -> "Cochain":
        return cls(len(alpha), 1, alpha[0].variables, {(i,): a for i, a in enumerate(alpha.coeffs)})

    def component(self, idx: Sequence[int]) -> RatFunc:
        idx = tuple(idx)
        sign, head = _sort_sign(idx[:-1])
        zero = RatFunc.constant(0, self.variables)
        if sign == 0:
            return zero
        v = self._comps.get(head + idx[-1:])
        if v is None:
            return zero
        return v if sign > 0 else -v

    def items(self):
        return sorted(self._comps.items())

    def is_zero(self) -> bool:
        return not self._comps

    def evaluate(self, args: Sequence[Section]) -> RatFunc:
        if len(args) != self.degree:
            raise ValueError(f"expected {self.degree} arguments")
        total = RatFunc.constant(0, self.variables)
        supports = [[(i, c) for i, c in enumerate(a.coeffs) if not c.is_zero()] for a in args]
        for combo in product(*supports):
            idx = tuple(i for i, _ in combo)
            comp = self.component(idx)
            if comp.is_zero():
                continue
            term = comp
            for _, c in combo:
                term = term * c
            total = total + term
        return total

    def matrix(self) -> Matrix:
        if self.degree != 2:
            raise ValueError("matrix() needs a degree-2 cochain")
        return as_matrix([[self.component((i, j)) for j in range(self.rank)] for i in range(self.rank)])

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        if (self.rank, self.degree) != (other.rank, other.degree):
            return False
        keys = set(self._comps) | set(other._comps)
        return all(self.component(k) == other.component(k) for k in keys)

    __hash__ = None

    def __repr__(self):
        return f"Cochain(degree={self.degree}, {[(k, str(v)) for k, v in self.items()]})"


def delta_A_full(A: Algebroid, phi: Cochain) -> dict[tuple[int, ...], RatFunc]:
    """Evaluate the coboundary of ``phi`` on every basis tuple."""
    if phi.rank != A.rank:
        raise RankMismatch(f"cochain rank {phi.rank} vs algebroid rank {A.rank}")
    k = phi.degree
    n = A.rank
    e = [A.basis(i) for i in range(n)]
    products = {}
    brackets = {}

    def prod(i, j):
        if (i, j) not in products:
            products[i, j] = multiply(A, e[i], e[j])
        return products[i, j]

    def brk(i, j):
        if (i, j) not in brackets:
            brackets[i, j] = bracket(A, e[i], e[j])
        return brackets[i, j]

    out = {}
    for idx in product(range(n), repeat=k + 1):
        xs = [e[i] for i in idx]
        total = A.const(0)
        last = idx[k]
        for i in range(k):
            sign = 1 if i % 2 == 0 else -1  # (-1)^{i+1} with 1-based i
            rest = idx[:i] + idx[i + 1 :]
            comp = phi.component(rest)
            if not comp.is_zero():
                total = total + sign * anchor_apply(A, xs[i], comp)
            head = [xs[t] for t in range(k) if t != i]
            val = phi.evaluate(head + [prod(idx[i], last)])
            if not val.is_zero():
                total = total - sign * val
        for i, j in combinations(range(k), 2):
            sign = 1 if (i + j) % 2 == 0 else -1
            rest = [xs[t] for t in range(k + 1) if t not in (i, j)]
            val = phi.evaluate([brk(idx[i], idx[j])] + rest)
            if not val.is_zero():
                total = total + sign * val
        out[idx] = total
    return out


def delta_A(A: Algebroid, phi: Cochain) -> Cochain:
    """Coboundary with trivial coefficients; raises if the result is not alternating."""
    full = delta_A_full(A, phi)
    k = phi.degree + 1
    for idx, v in full.items():
        for t in range(k - 2):
            swapped = idx[:t] + (idx[t + 1], idx[t]) + idx[t + 2 :]
            if not (full[swapped] + v).is_zero():
                raise ValidationError("coboundary is not alternating; is the algebroid valid?")
    return Cochain(
        A.rank,
        k,
        A.variables,
        {key: full[key] for key in full if all(a < b for a, b in zip(key[:-2], key[1:-1]))},
    )


# -- deformation by a bundle map -------------------------------------------------


def deformed_product(A: Algebroid, N, X: Section, Y: Section) -> Section:
    """x ._N y = Nx . y + x . Ny - N(x . y)"""
    m = _matrix_of(N)
    if len(m) != A.rank:
        raise RankMismatch("bundle map rank differs from algebroid rank")
    return (
        multiply(A, apply_map(m, X), Y)
        + multiply(A, X, apply_map(m, Y))
        - apply_map(m, multiply(A, X, Y))
    )


def deform(A: Algebroid, N) -> Algebroid:
    """The algebroid (A, ._N, a o N); valid when N is a Nijenhuis operator."""
    m = _matrix_of(N)
    if len(m) != A.rank:
        raise RankMismatch("bundle map rank differs from algebroid rank")
    n = A.rank
    e = [A.basis(i) for i in range(n)]
    gamma = tuple(
        tuple(deformed_product(A, m, e[i], e[j]).coeffs for j in range(n)) for i in range(n)
    )
    anchor = matmul(A.anchor, m) if A.variables else ()
    return Algebroid(A.chart, n, gamma, anchor)
