"""Finite-dimensional algebras by structure constants and their axiom checkers.

An AlgebraSpec holds up to three bilinear products (circ, times, dot), an
optional symmetric bilinear form and an optional Z2 grading, all over exact
rationals.  Every axiom class is decided exhaustively on basis triples; the
identities are trilinear, so basis coverage is complete.

The two builders realize the structure-constant dictionaries between algebras
and matrix differential operators: a bialgebra with a compatible form yields
the quintic-order type-1 operator family, and a fermionic Novikov product
yields the first-order type-0 family.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Tuple

from .algebra import SuperPolynomial, field
from .operators import MatrixDiffOperator, ScalarDiffOperator

Table = Tuple[Tuple[Tuple[Fraction, ...], ...], ...]
Matrix = Tuple[Tuple[Fraction, ...], ...]
Vector = Tuple[Fraction, ...]

ALGEBRA_CLASSES = (
    "novikov",
    "novikov_super",
    "nx_bialgebra",
    "novikov_poisson",
    "fermionic_novikov",
    "form_compat",
)


def _as_table(dim: int, data) -> Table:
    rows = tuple(
        tuple(tuple(Fraction(data[i][j][k]) for k in range(dim)) for j in range(dim))
        for i in range(dim)
    )
    return rows


def _as_matrix(dim: int, data) -> Matrix:
    return tuple(tuple(Fraction(data[i][j]) for j in range(dim)) for i in range(dim))


@dataclass
class AlgebraSpec:
    """Structure constants of a finite-dimensional algebra.

    ``circ``, ``times`` and ``dot`` are d x d x d tables: entry [i][j][k] is
    the e_k coefficient of the product of basis vectors e_i and e_j.  ``form``
    is a d x d matrix and ``grading`` an optional tuple of basis parities.
    """

    dim: int
    circ: Optional[Table] = None
    times: Optional[Table] = None
    dot: Optional[Table] = None
    form: Optional[Matrix] = None
    grading: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        for name in ("circ", "times", "dot"):
            table = getattr(self, name)
            if table is not None:
                setattr(self, name, _as_table(self.dim, table))
        if self.form is not None:
            self.form = _as_matrix(self.dim, self.form)
        if self.grading is not None:
            self.grading = tuple(int(g) & 1 for g in self.grading)
            if len(self.grading) != self.dim:
                raise ValueError("grading must assign a parity to every basis vector")

    def basis(self, i: int) -> Vector:
        return tuple(Fraction(1) if j == i else Fraction(0) for j in range(self.dim))

    def require(self, *names: str) -> None:
        for name in names:
            if getattr(self, name) is None:
                raise ValueError(f"algebra spec is missing the component '{name}'")


def multiply(table: Table, x: Vector, y: Vector) -> Vector:
    dim = len(table)
    out = [Fraction(0)] * dim
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = table[i]
        for j, yj in enumerate(y):
            if not yj:
                continue
            entry = row[j]
            scale = xi * yj
            for k in range(dim):
                if entry[k]:
                    out[k] += scale * entry[k]
    return tuple(out)


def pair(form: Matrix, x: Vector, y: Vector) -> Fraction:
    total = Fraction(0)
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if yj:
                total += xi * yj * form[i][j]
    return total


def _vec_sub(x: Vector, y: Vector) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def _vec_add(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def _vec_scale(c: Fraction, x: Vector) -> Vector:
    return tuple(c * a for a in x)


def _is_zero(x: Vector) -> bool:
    return not any(x)


def check_axioms(spec: AlgebraSpec, algebra_class: str):
    """Evaluate the defining identities of the given class on basis triples.

    Returns (ok, witness); the witness is (identity_label, indices, residual)
    for the first failing basis tuple in lexicographic order, the residual
    being the left-minus-right vector of the identity in basis coordinates.
    Raises ValueError when a required product or form is absent.
    """
    for witness in iter_axiom_failures(spec, algebra_class):
        return False, witness
    return True, None


def iter_axiom_failures(spec: AlgebraSpec, algebra_class: str):
    """Yield (identity_label, indices, residual) witnesses in lexicographic
    order."""
    if algebra_class not in ALGEBRA_CLASSES:
        raise ValueError(f"unknown algebra class '{algebra_class}'")
    return _CHECKERS[algebra_class](spec)


def _iter_commutative(table: Table, dim: int, label: str):
    for i, j in product(range(dim), repeat=2):
        if table[i][j] != table[j][i]:
            yield (label, (i, j), _vec_sub(table[i][j], table[j][i]))


def _iter_novikov_identities(spec: AlgebraSpec, table: Table, prefix: str = ""):
    e = spec.basis
    mul = lambda x, y: multiply(table, x, y)
    for i, j, k in product(range(spec.dim), repeat=3):
        x, y, z = e(i), e(j), e(k)
        if mul(mul(x, y), z) != mul(mul(x, z), y):
            yield (prefix + "right_commute", (i, j, k),
                   _vec_sub(mul(mul(x, y), z), mul(mul(x, z), y)))
        lhs = _vec_sub(mul(mul(x, y), z), mul(x, mul(y, z)))
        rhs = _vec_sub(mul(mul(y, x), z), mul(y, mul(x, z)))
        if lhs != rhs:
            yield (prefix + "left_symmetry", (i, j, k), _vec_sub(lhs, rhs))


def _iter_novikov(spec: AlgebraSpec):
    spec.require("circ")
    yield from _iter_novikov_identities(spec, spec.circ)


def _iter_fermionic_novikov(spec: AlgebraSpec):
    spec.require("circ")
    e = spec.basis
    mul = lambda x, y: multiply(spec.circ, x, y)
    for i, j, k in product(range(spec.dim), repeat=3):
        x, y, z = e(i), e(j), e(k)
        if mul(mul(x, y), z) != _vec_scale(Fraction(-1), mul(mul(x, z), y)):
            yield ("right_anticommute", (i, j, k),
                   _vec_add(mul(mul(x, y), z), mul(mul(x, z), y)))
        lhs = _vec_sub(mul(mul(x, y), z), mul(x, mul(y, z)))
        rhs = _vec_sub(mul(mul(y, x), z), mul(y, mul(x, z)))
        if lhs != rhs:
            yield ("left_symmetry", (i, j, k), _vec_sub(lhs, rhs))


def _iter_novikov_super(spec: AlgebraSpec):
    spec.require("circ")
    if spec.grading is None:
        raise ValueError("algebra spec is missing the component 'grading'")
    e = spec.basis
    g = spec.grading
    mul = lambda x, y: multiply(spec.circ, x, y)
    for i, j, k in product(range(spec.dim), repeat=3):
        x, y, z = e(i), e(j), e(k)
        sign_yz = Fraction(-1) if g[j] & g[k] else Fraction(1)
        if mul(mul(x, y), z) != _vec_scale(sign_yz, mul(mul(x, z), y)):
            yield ("graded_right_commute", (i, j, k),
                   _vec_sub(mul(mul(x, y), z), _vec_scale(sign_yz, mul(mul(x, z), y))))
        sign_xy = Fraction(-1) if g[i] & g[j] else Fraction(1)
        lhs = _vec_sub(mul(mul(x, y), z), mul(x, mul(y, z)))
        rhs = _vec_scale(sign_xy, _vec_sub(mul(mul(y, x), z), mul(y, mul(x, z))))
        if lhs != rhs:
            yield ("graded_left_symmetry", (i, j, k), _vec_sub(lhs, rhs))


def _iter_nx_bialgebra(spec: AlgebraSpec):
    spec.require("circ", "times")
    yield from _iter_commutative(spec.times, spec.dim, "times_commutative")
    yield from _iter_novikov_identities(spec, spec.circ, prefix="circ_")
    e = spec.basis
    c = lambda x, y: multiply(spec.circ, x, y)
    t = lambda x, y: multiply(spec.times, x, y)
    for i, j, k in product(range(spec.dim), repeat=3):
        u, v, w = e(i), e(j), e(k)
        if c(t(u, v), w) != t(u, c(v, w)):
            yield ("mixed_associator", (i, j, k),
                   _vec_sub(c(t(u, v), w), t(u, c(v, w))))
        lhs = _vec_add(t(t(u, v), w), t(u, t(v, w)))
        rhs = _vec_sub(_vec_add(t(c(v, u), w), t(u, c(v, w))), c(v, t(u, w)))
        if lhs != rhs:
            yield ("times_sum_rule", (i, j, k), _vec_sub(lhs, rhs))
        lhs = _vec_sub(t(t(u, v), w), t(u, t(v, w)))
        rhs = _vec_sub(
            _vec_add(c(t(u, v), w), c(w, t(u, v))),
            _vec_add(c(u, t(v, w)), c(t(v, w), u)),
        )
        if lhs != rhs:
            yield ("times_difference_rule", (i, j, k), _vec_sub(lhs, rhs))


def _iter_novikov_poisson(spec: AlgebraSpec):
    spec.require("circ", "dot")
    yield from _iter_commutative(spec.dot, spec.dim, "dot_commutative")
    e = spec.basis
    c = lambda x, y: multiply(spec.circ, x, y)
    d = lambda x, y: multiply(spec.dot, x, y)
    for i, j, k in product(range(spec.dim), repeat=3):
        x, y, z = e(i), e(j), e(k)
        if d(d(x, y), z) != d(x, d(y, z)):
            yield ("dot_associative", (i, j, k),
                   _vec_sub(d(d(x, y), z), d(x, d(y, z))))
    yield from _iter_novikov_identities(spec, spec.circ, prefix="circ_")
    for i, j, k in product(range(spec.dim), repeat=3):
        x, y, z = e(i), e(j), e(k)
        if c(d(x, y), z) != d(x, c(y, z)):
            yield ("dot_circ_associator", (i, j, k),
                   _vec_sub(c(d(x, y), z), d(x, c(y, z))))
        lhs = _vec_sub(d(c(x, y), z), c(x, d(y, z)))
        rhs = _vec_sub(d(c(y, x), z), c(y, d(x, z)))
        if lhs != rhs:
            yield ("dot_circ_symmetry", (i, j, k), _vec_sub(lhs, rhs))


def _iter_form_compat(spec: AlgebraSpec):
    spec.require("circ", "times", "form")
    e = spec.basis
    for i, j in product(range(spec.dim), repeat=2):
        if spec.form[i][j] != spec.form[j][i]:
            yield ("form_symmetric", (i, j),
                   (spec.form[i][j] - spec.form[j][i],))
    c = lambda x, y: multiply(spec.circ, x, y)
    t = lambda x, y: multiply(spec.times, x, y)
    f = lambda x, y: pair(spec.form, x, y)
    for i, j, k in product(range(spec.dim), repeat=3):
        u, v, w = e(i), e(j), e(k)
        if f(c(u, v), w) != f(u, c(v, w)):
            yield ("form_circ_invariance", (i, j, k),
                   (f(c(u, v), w) - f(u, c(v, w)),))
        if f(c(u, v), w) != 2 * f(t(u, v), w):
            yield ("form_times_ratio", (i, j, k),
                   (f(c(u, v), w) - 2 * f(t(u, v), w),))


_CHECKERS = {
    "novikov": _iter_novikov,
    "novikov_super": _iter_novikov_super,
    "nx_bialgebra": _iter_nx_bialgebra,
    "novikov_poisson": _iter_novikov_poisson,
    "fermionic_novikov": _iter_fermionic_novikov,
    "form_compat": _iter_form_compat,
}


def derived_dot_table(spec: AlgebraSpec) -> Table:
    """u . v = u o v + v o u - u x v, the product the quintic family carries."""
    spec.require("circ", "times")
    dim = spec.dim
    return tuple(
        tuple(
            tuple(
                spec.circ[i][j][k] + spec.circ[j][i][k] - spec.times[i][j][k]
                for k in range(dim)
            )
            for j in range(dim)
        )
        for i in range(dim)
    )


def _linear_coeff(table: Table, row: int, col: int, order: int, dim: int) -> SuperPolynomial:
    terms = {}
    for gamma in range(dim):
        c = table[row][col][gamma]
        if c:
            terms[((field(gamma, order), 1),)] = c
    return SuperPolynomial(terms)


def build_type1_operator(spec: AlgebraSpec) -> MatrixDiffOperator:
    """Quintic-order type-1 operator from a (circ, times, form) spec.

    Entry (p,q) is form[p][q] D^5 + sum_g dot Phi_g D^2 + times Phi_g(2) D
    + circ Phi_g(3), with the dot product always derived from circ and times;
    both parity blocks coincide.  The builder is total: validity is decided
    separately by the axiom checkers and the Hamiltonian test.
    """
    spec.require("circ", "times", "form")
    dot = derived_dot_table(spec)
    dim = spec.dim
    blocks: Dict[Tuple[int, int, int], ScalarDiffOperator] = {}
    for p, q in product(range(dim), repeat=2):
        entries: Dict[int, SuperPolynomial] = {}
        if spec.form[p][q]:
            entries[5] = SuperPolynomial.scalar(spec.form[p][q])
        for power, table, order in ((2, dot, 1), (1, spec.times, 2), (0, spec.circ, 3)):
            coeff = _linear_coeff(table, p, q, order, dim)
            if coeff:
                entries[power] = coeff
        if entries:
            op = ScalarDiffOperator(entries)
            blocks[(0, p, q)] = op
            blocks[(1, p, q)] = op
    return MatrixDiffOperator(1, dim, blocks)


def build_type0_operator(spec: AlgebraSpec) -> MatrixDiffOperator:
    """First-order type-0 operator from a circ spec.

    The companion product is derived as u x v = v o u - u o v; entry (p,q) of
    the even block is sum_g circ Phi_g(2) + times Phi_g D and the odd block is
    its negative.
    """
    spec.require("circ")
    dim = spec.dim
    times = tuple(
        tuple(
            tuple(spec.circ[j][i][k] - spec.circ[i][j][k] for k in range(dim))
            for j in range(dim)
        )
        for i in range(dim)
    )
    blocks: Dict[Tuple[int, int, int], ScalarDiffOperator] = {}
    for p, q in product(range(dim), repeat=2):
        entries: Dict[int, SuperPolynomial] = {}
        coeff0 = _linear_coeff(spec.circ, p, q, 2, dim)
        if coeff0:
            entries[0] = coeff0
        coeff1 = _linear_coeff(times, p, q, 1, dim)
        if coeff1:
            entries[1] = coeff1
        if entries:
            op = ScalarDiffOperator(entries)
            blocks[(0, p, q)] = op
            blocks[(1, p, q)] = op.scaled(-1)
    return MatrixDiffOperator(0, dim, blocks)


def np_to_nx(spec: AlgebraSpec, identity_index: int) -> AlgebraSpec:
    """Turn a unital Novikov-Poisson spec into a bialgebra spec (times := dot).

    Requires the Novikov-Poisson axioms, that the designated basis vector is
    an identity for the dot product, and that its circ square is twice itself.
    """
    spec.require("circ", "dot")
    ok, witness = check_axioms(spec, "novikov_poisson")
    if not ok:
        raise ValueError(f"input is not a Novikov-Poisson algebra: {witness}")
    if not (0 <= identity_index < spec.dim):
        raise ValueError("identity index out of range")
    e = spec.basis(identity_index)
    for i in range(spec.dim):
        if multiply(spec.dot, e, spec.basis(i)) != spec.basis(i):
            raise ValueError(
                f"basis vector {identity_index} is not an identity for the dot product"
            )
    if multiply(spec.circ, e, e) != _vec_scale(Fraction(2), e):
        raise ValueError("the identity's circ square must be twice the identity")
    return AlgebraSpec(
        dim=spec.dim,
        circ=spec.circ,
        times=spec.dot,
        form=spec.form,
        grading=spec.grading,
    )


def make_truncated_example(n: int) -> AlgebraSpec:
    """Truncated polynomial algebra on n basis vectors.

    dot: e_i . e_j = e_{i+j} (zero once i+j >= n); circ: e_i o e_j =
    (j+2) e_{i+j}; form: 1 on the (0,0) entry and 0 elsewhere.
    """
    if n < 1:
        raise ValueError("truncation length must be >= 1")
    zero = Fraction(0)
    dot = tuple(
        tuple(
            tuple(Fraction(1) if i + j == k else zero for k in range(n))
            for j in range(n)
        )
        for i in range(n)
    )
    circ = tuple(
        tuple(
            tuple(Fraction(j + 2) if i + j == k else zero for k in range(n))
            for j in range(n)
        )
        for i in range(n)
    )
    form = tuple(
        tuple(Fraction(1) if i == 0 and j == 0 else zero for j in range(n))
        for i in range(n)
    )
    return AlgebraSpec(dim=n, circ=circ, dot=dot, form=form)


def make_exterior_example(c: Dict[Tuple[int, int], object]) -> AlgebraSpec:
    """Six-dimensional fermionic Novikov algebra inside an exterior algebra.

    The exterior algebra on four odd generators is realized in the core
    super-commutative algebra; v1..v4 are the four 3-forms, v0 a 2-form with
    coefficients c[(i,j)] (1 <= i < j <= 4) and v5 the top form.  The product
    sends (v, v_i) to the wedge v * e_i for i in 1..4 and annihilates v0 and
    v5 on the right; structure constants come from actual wedge computation
    and projection on the six-dimensional span.
    """
    gens = [field(i, 1) for i in range(4)]
    e = [SuperPolynomial.generator(g) for g in gens]

    def wedge(*polys: SuperPolynomial) -> SuperPolynomial:
        acc = SuperPolynomial.one()
        for p in polys:
            acc = acc * p
        return acc

    v = [
        SuperPolynomial.zero(),
        wedge(e[1], e[2], e[3]),
        wedge(e[0], e[2], e[3]),
        wedge(e[0], e[1], e[3]),
        wedge(e[0], e[1], e[2]),
        wedge(e[0], e[1], e[2], e[3]),
    ]
    v0 = SuperPolynomial.zero()
    for (i, j), value in c.items():
        if not (1 <= i < j <= 4):
            raise ValueError(f"coefficient index {(i, j)} out of range")
        v0 = v0 + wedge(e[i - 1], e[j - 1]) * Fraction(value)
    v[0] = v0

    basis_monos = []
    for idx, poly in enumerate(v):
        terms = poly.terms()
        if idx == 0:
            continue
        (mono, coeff), = terms.items()
        assert coeff == 1
        basis_monos.append((mono, idx))
    mono_to_index = dict(basis_monos)

    def project(poly: SuperPolynomial) -> Vector:
        out = [Fraction(0)] * 6
        for mono, coeff in poly.terms().items():
            idx = mono_to_index.get(mono)
            if idx is None:
                raise ValueError("wedge product left the six-dimensional span")
            out[idx] += coeff
        return tuple(out)

    zero_vec = tuple([Fraction(0)] * 6)
    circ_cols: List[List[Vector]] = []
    for a in range(6):
        row: List[Vector] = []
        for b in range(6):
            if b in (0, 5):
                row.append(zero_vec)
            else:
                row.append(project(v[a] * e[b - 1]))
        circ_cols.append(row)
    circ = tuple(tuple(circ_cols[a][b] for b in range(6)) for a in range(6))
    return AlgebraSpec(dim=6, circ=circ)
