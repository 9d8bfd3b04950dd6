"""Matrix differential operators and the Hamiltonian criterion.

A scalar operator is a normal-ordered polynomial in the superderivation D with
polynomial coefficients on the left: sum_l c_l D^l, at most one entry per
power.  A matrix operator of type iota carries, for each parity block i in
{0,1}, a d x d matrix of scalar operators; the coefficient at power l must be
homogeneous of parity (iota + l) mod 2.

Super skew-symmetry is decided entry-wise by normal-ordering
sum_l (-1)^{(2 iota + l)(l-1)/2} D^l o c_l against the transposed entry,
together with the block relation a^0 = (-1)^{iota+1} a^1.

The Hamiltonian test feeds basis covector symbols through the linearization
(Frechet) matrix of the operator and checks that the resulting cyclic
three-form is a total derivative, for every triple of families and every
parity triple; multilinearity makes basis configurations complete.  The
Schouten super-bracket is the polarized version of the same three-form, so
its diagonal vanishing reproduces the Hamiltonian test and its mixed
vanishing characterizes Hamiltonian pairs.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Dict, List, Mapping, Optional, Tuple

from .algebra import (
    Generator,
    SuperPolynomial,
    covector,
    field,
    partial_derive,
)
from .calculus import (
    is_total_derivative,
    superderive,
    superderive_n,
    variational_derivative_field,
)


class SkewSymmetryError(ValueError):
    """Raised when an operation requires a super skew-symmetric operator."""


class ScalarDiffOperator:
    """Normal-ordered scalar operator sum_l coeff_l * D^l."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Optional[Dict[int, SuperPolynomial]] = None):
        self._entries = {}
        if entries:
            for power, coeff in entries.items():
                if power < 0:
                    raise ValueError("negative powers of D are not supported")
                if coeff:
                    self._entries[power] = coeff

    @classmethod
    def zero(cls) -> "ScalarDiffOperator":
        return cls()

    @classmethod
    def single(cls, coeff: SuperPolynomial, power: int) -> "ScalarDiffOperator":
        return cls({power: coeff})

    @classmethod
    def d_power(cls, power: int, scale=1) -> "ScalarDiffOperator":
        return cls({power: SuperPolynomial.scalar(scale)})

    def entries(self) -> Mapping[int, SuperPolynomial]:
        return self._entries

    def is_zero(self) -> bool:
        return not self._entries

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarDiffOperator):
            return NotImplemented
        return self._entries == other._entries

    __hash__ = None

    def __add__(self, other: "ScalarDiffOperator") -> "ScalarDiffOperator":
        out = dict(self._entries)
        for power, coeff in other._entries.items():
            tot = out.get(power, SuperPolynomial.zero()) + coeff
            if tot:
                out[power] = tot
            elif power in out:
                del out[power]
        return ScalarDiffOperator(out)

    def __neg__(self) -> "ScalarDiffOperator":
        return ScalarDiffOperator({p: -c for p, c in self._entries.items()})

    def scaled(self, factor) -> "ScalarDiffOperator":
        f = Fraction(factor)
        if not f:
            return ScalarDiffOperator()
        return ScalarDiffOperator({p: c * f for p, c in self._entries.items()})

    def apply(self, u: SuperPolynomial) -> SuperPolynomial:
        """Evaluate on a polynomial: sum_l coeff_l * D^l(u)."""
        acc = SuperPolynomial.zero()
        if not u:
            return acc
        top = max(self._entries) if self._entries else -1
        derivs = [u]
        for _ in range(top):
            derivs.append(superderive(derivs[-1]))
        for power, coeff in self._entries.items():
            acc = acc + coeff * derivs[power]
        return acc

    def __str__(self) -> str:
        if not self._entries:
            return "0"
        parts = []
        for power in sorted(self._entries):
            coeff = self._entries[power]
            body = f"({coeff})" if len(coeff.terms()) > 1 else f"{coeff}"
            parts.append(body if power == 0 else f"{body}*D^{power}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"ScalarDiffOperator({self})"


def compose_D_left(op: ScalarDiffOperator) -> ScalarDiffOperator:
    """Normal-ordered form of D o op.

    Uses the operator identity D o u = D(u) + (-1)^{|u|} u D on homogeneous
    coefficients; mixed coefficients split into parity parts.
    """
    out: Dict[int, SuperPolynomial] = {}

    def bump(power: int, coeff: SuperPolynomial) -> None:
        if not coeff:
            return
        tot = out.get(power, SuperPolynomial.zero()) + coeff
        if tot:
            out[power] = tot
        elif power in out:
            del out[power]

    for power, coeff in op.entries().items():
        bump(power, superderive(coeff))
        bump(power + 1, coeff.even_part() - coeff.odd_part())
    return ScalarDiffOperator(out)


def compose_D_power_left(op: ScalarDiffOperator, times: int) -> ScalarDiffOperator:
    for _ in range(times):
        op = compose_D_left(op)
    return op


class MatrixDiffOperator:
    """Type-graded matrix of scalar operators.

    ``blocks`` maps (block_parity, row, col) to a scalar operator; absent
    entries are zero.  The type constraint (coefficients at power l lie in
    parity class (type + l) mod 2) is enforced at construction.
    """

    __slots__ = ("type_parity", "dim", "_blocks")

    def __init__(self, type_parity: int, dim: int,
                 blocks: Optional[Dict[Tuple[int, int, int], ScalarDiffOperator]] = None):
        if type_parity not in (0, 1):
            raise ValueError("operator type must be 0 or 1")
        if dim < 1:
            raise ValueError("family count must be >= 1")
        self.type_parity = type_parity
        self.dim = dim
        self._blocks: Dict[Tuple[int, int, int], ScalarDiffOperator] = {}
        if blocks:
            for (block, row, col), op in blocks.items():
                if block not in (0, 1):
                    raise ValueError("block parity must be 0 or 1")
                if not (0 <= row < dim and 0 <= col < dim):
                    raise ValueError("entry indices out of range")
                if op.is_zero():
                    continue
                for power, coeff in op.entries().items():
                    want = (type_parity + power) & 1
                    if not coeff.has_parity(want):
                        raise ValueError(
                            f"coefficient at block {block}, entry ({row},{col}), "
                            f"power {power} must have parity {want}"
                        )
                self._blocks[(block, row, col)] = op

    def entry(self, block: int, row: int, col: int) -> ScalarDiffOperator:
        return self._blocks.get((block, row, col), ScalarDiffOperator.zero())

    def blocks(self) -> Mapping[Tuple[int, int, int], ScalarDiffOperator]:
        return self._blocks

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixDiffOperator):
            return NotImplemented
        return (self.type_parity == other.type_parity and self.dim == other.dim
                and self._blocks == other._blocks)

    __hash__ = None

    def __add__(self, other: "MatrixDiffOperator") -> "MatrixDiffOperator":
        self._check_compatible(other)
        keys = set(self._blocks) | set(other._blocks)
        out = {}
        for key in keys:
            tot = self.entry(*key) + other.entry(*key)
            if tot:
                out[key] = tot
        return MatrixDiffOperator(self.type_parity, self.dim, out)

    def scaled(self, factor) -> "MatrixDiffOperator":
        out = {key: op.scaled(factor) for key, op in self._blocks.items()}
        return MatrixDiffOperator(self.type_parity, self.dim, out)

    def _check_compatible(self, other: "MatrixDiffOperator") -> None:
        if self.type_parity != other.type_parity:
            raise ValueError("operators have different types")
        if self.dim != other.dim:
            raise ValueError("operators have different family counts")


def iter_skew_failures(op: MatrixDiffOperator):
    """Yield skew failures as (condition, row, col, power, residual).

    Condition "transpose" marks the normal-ordering identity on the even
    block, "block" the relation between the two parity blocks; the residual
    is the canonical rendering of the coefficient mismatch at that power.
    """
    iota = op.type_parity
    for row, col in product(range(op.dim), repeat=2):
        lhs = ScalarDiffOperator.zero()
        for power, coeff in op.entry(0, row, col).entries().items():
            sign = -1 if ((2 * iota + power) * (power - 1) // 2) & 1 else 1
            term = compose_D_power_left(
                ScalarDiffOperator.single(coeff, 0), power).scaled(sign)
            lhs = lhs + term
        rhs = op.entry(0, col, row)
        if lhs != rhs:
            diff = lhs + (-rhs)
            power = min(diff.entries())
            yield ("transpose", row, col, power, str(diff.entries()[power]))
        block0 = op.entry(0, row, col)
        block1 = op.entry(1, row, col)
        want = block1.scaled(1 if iota else -1)
        if block0 != want:
            diff = block0 + (-want)
            power = min(diff.entries())
            yield ("block", row, col, power, str(diff.entries()[power]))


def check_skew_symmetry(op: MatrixDiffOperator):
    """Decide super skew-symmetry; returns (ok, first witness or None)."""
    for witness in iter_skew_failures(op):
        return False, witness
    return True, None


def apply_matrix_operator(op: MatrixDiffOperator, xi: Mapping[int, SuperPolynomial],
                          block: int) -> Dict[int, SuperPolynomial]:
    """Apply the block of the given parity to a covector assignment.

    The assignment maps families to polynomials; every nonzero component must
    be homogeneous of parity (block + 1) mod 2, the component parity class of
    parity-``block`` covector families.
    """
    if block not in (0, 1):
        raise ValueError("block parity must be 0 or 1")
    want = (block + 1) & 1
    for fam, poly in xi.items():
        if not poly.has_parity(want):
            raise ValueError(
                f"covector component for family {fam} must have parity {want}"
            )
    out: Dict[int, SuperPolynomial] = {}
    for row in range(op.dim):
        acc = SuperPolynomial.zero()
        for col, poly in xi.items():
            if poly:
                acc = acc + op.entry(block, row, col).apply(poly)
        out[row] = acc
    return out


def frechet(op: MatrixDiffOperator, cov_base: Generator,
            omega_parity: int) -> Dict[Tuple[int, int], ScalarDiffOperator]:
    """Linearization of the operator along a basis covector.

    ``cov_base`` is a derivs-0 covector symbol concentrated at its family;
    ``omega_parity`` is the parity grading of the covector family it spans
    (the symbol itself then has parity omega_parity + 1).  Entry (row, col)
    collects, over coefficient entries a at power l and derivative counts m,
    (-1)^{m (omega_parity + type)} d a / d phi<col>(m+1) * D^l(symbol) * D^m.
    """
    if cov_base[2] != 0:
        raise ValueError("frechet expects a derivs-0 covector symbol")
    iota = op.type_parity
    fam = cov_base[1]
    xi_poly = SuperPolynomial.generator(cov_base)
    out: Dict[Tuple[int, int], ScalarDiffOperator] = {}
    sign_flip = (omega_parity + iota) & 1
    for row in range(op.dim):
        shifted: Dict[int, SuperPolynomial] = {}
        for power, coeff in op.entry(omega_parity, row, fam).entries().items():
            term = coeff * superderive_n(xi_poly, power)
            tot = shifted.get(power, SuperPolynomial.zero()) + term
            if tot:
                shifted[power] = tot
        for col in range(op.dim):
            entries: Dict[int, SuperPolynomial] = {}
            for power, coeff in shifted.items():
                top = coeff.max_derivs(field(col, 1))
                for m in range(top + 1):
                    part = partial_derive(coeff, field(col, m + 1))
                    if not part:
                        continue
                    if sign_flip and (m & 1):
                        part = -part
                    tot = entries.get(m, SuperPolynomial.zero()) + part
                    if tot:
                        entries[m] = tot
                    elif m in entries:
                        del entries[m]
            if entries:
                out[(row, col)] = ScalarDiffOperator(entries)
    return out


def _pairing_term(op_lin: MatrixDiffOperator, op_app: MatrixDiffOperator,
                  arg: Tuple[int, int, Generator], operand: Tuple[int, int, Generator],
                  closing: Tuple[int, int, Generator]) -> SuperPolynomial:
    """One cyclic term: pair <closing, (Frechet_{op_lin} arg)(op_app operand)>.

    Each of arg/operand/closing is (family, omega_parity, symbol).
    """
    fam_b, par_b, sym_b = operand
    fam_c, _, sym_c = closing
    _, par_a, sym_a = arg
    applied = apply_matrix_operator(
        op_app, {fam_b: SuperPolynomial.generator(sym_b)}, par_b)
    lin = frechet(op_lin, sym_a, par_a)
    closer = SuperPolynomial.generator(sym_c)
    acc = SuperPolynomial.zero()
    for (row, col), scalar_op in lin.items():
        if row != fam_c:
            # The pairing with a basis covector at fam_c keeps row fam_c only.
            continue
        w = applied[col]
        if w:
            acc = acc + scalar_op.apply(w)
    return acc * closer


def _config_signs(iota: int, parities: Tuple[int, int, int]) -> Tuple[int, int, int]:
    i1, i2, i3 = parities
    s1 = -1 if i1 & 1 else 1
    s2 = -1 if (i2 + (i1 + iota) * (i2 + i3)) & 1 else 1
    s3 = -1 if (i3 + (i3 + iota) * (i1 + i2)) & 1 else 1
    return s1, s2, s3


def _basis_symbols(families: Tuple[int, int, int],
                   parities: Tuple[int, int, int]) -> List[Tuple[int, int, Generator]]:
    out = []
    for slot, (fam, par) in enumerate(zip(families, parities), start=1):
        sym = covector(slot, fam, 0, (par + 1) & 1)
        out.append((fam, par, sym))
    return out


def hamiltonian_defect(op: MatrixDiffOperator, families: Tuple[int, int, int],
                       parities: Tuple[int, int, int]) -> SuperPolynomial:
    """The closedness three-form on one basis configuration.

    Builds three fresh covector symbols concentrated at the given families
    with the given parity gradings and returns the signed cyclic sum of the
    three linearization pairings, arranged on one side; the operator is
    Hamiltonian iff this is a total derivative for every configuration.
    Requires super skew-symmetry.
    """
    ok, witness = check_skew_symmetry(op)
    if not ok:
        raise SkewSymmetryError(f"operator is not super skew-symmetric: {witness}")
    return _defect_unchecked(op, families, parities)


def _defect_unchecked(op: MatrixDiffOperator, families, parities) -> SuperPolynomial:
    xi = _basis_symbols(tuple(families), tuple(parities))
    s1, s2, s3 = _config_signs(op.type_parity, tuple(parities))
    t1 = _pairing_term(op, op, xi[0], xi[1], xi[2])
    t2 = _pairing_term(op, op, xi[1], xi[2], xi[0])
    t3 = _pairing_term(op, op, xi[2], xi[0], xi[1])
    return t1 * s1 + t2 * s2 + t3 * s3


def _configurations(dim: int):
    return product(product(range(dim), repeat=3), product((0, 1), repeat=3))


def iter_closedness_failures(op: MatrixDiffOperator):
    """Yield basis configurations whose defect is not a total derivative.

    Assumes skew-symmetry has been checked; configurations run in
    lexicographic order (family triple, then parity triple)."""
    for families, parities in _configurations(op.dim):
        defect = _defect_unchecked(op, families, parities)
        if not is_total_derivative(defect):
            yield (families, parities)


def is_hamiltonian(op: MatrixDiffOperator):
    """Full Hamiltonian test; returns (ok, witness).

    The witness is ("skew", detail) for a skew-symmetry failure, or
    ("closedness", families, parities) naming the lexicographically first
    basis configuration whose defect is not a total derivative.
    """
    ok, witness = check_skew_symmetry(op)
    if not ok:
        return False, ("skew", witness)
    for families, parities in iter_closedness_failures(op):
        return False, ("closedness", families, parities)
    return True, None


def schouten_bracket(op1: MatrixDiffOperator, op2: MatrixDiffOperator,
                     families: Tuple[int, int, int],
                     parities: Tuple[int, int, int]) -> SuperPolynomial:
    """Schouten super-bracket evaluated on one basis configuration.

    The six-term polarization of the closedness three-form; on the diagonal,
    the bracket of an operator with itself is twice its defect, so vanishing
    of the diagonal in the quotient reproduces the Hamiltonian test.
    """
    op1._check_compatible(op2)
    xi = _basis_symbols(tuple(families), tuple(parities))
    s1, s2, s3 = _config_signs(op1.type_parity, tuple(parities))
    acc = SuperPolynomial.zero()
    for a, b, sign in ((0, 1, s1), (1, 2, s2), (2, 0, s3)):
        c = 3 - a - b
        acc = acc + _pairing_term(op1, op2, xi[a], xi[b], xi[c]) * sign
        acc = acc + _pairing_term(op2, op1, xi[a], xi[b], xi[c]) * sign
    return acc


def iter_schouten_failures(op1: MatrixDiffOperator, op2: MatrixDiffOperator):
    """Yield basis configurations where the Schouten bracket is not a total
    derivative, in lexicographic order."""
    op1._check_compatible(op2)
    for families, parities in _configurations(op1.dim):
        bracket = schouten_bracket(op1, op2, families, parities)
        if not is_total_derivative(bracket):
            yield (families, parities)


def schouten_vanishes(op1: MatrixDiffOperator, op2: MatrixDiffOperator):
    """Check the Schouten bracket vanishes in the quotient on all basis
    configurations; returns (ok, witness)."""
    for witness in iter_schouten_failures(op1, op2):
        return False, witness
    return True, None


def is_hamiltonian_pair(op1: MatrixDiffOperator, op2: MatrixDiffOperator):
    """Hamiltonian-pair test; returns (ok, witness).

    Raises on type or dimension mismatch, and on a skew-symmetry failure of
    either operator; otherwise checks the three Schouten conditions.
    """
    op1._check_compatible(op2)
    for label, op in (("first", op1), ("second", op2)):
        ok, witness = check_skew_symmetry(op)
        if not ok:
            raise SkewSymmetryError(f"{label} operator is not super skew-symmetric: {witness}")
    for label, (a, b) in (("[H1,H1]", (op1, op1)), ("[H2,H2]", (op2, op2)),
                          ("[H1,H2]", (op1, op2))):
        ok, witness = schouten_vanishes(a, b)
        if not ok:
            return False, (label,) + witness
    return True, None


def evolution_rhs(op: MatrixDiffOperator, density: SuperPolynomial) -> Dict[int, SuperPolynomial]:
    """Right side of the evolution system attached to a density.

    Takes the variational derivative of the density with respect to every
    field family, then applies the operator block matching the parity of the
    resulting covector family.
    """
    grads = {fam: variational_derivative_field(density, fam) for fam in range(op.dim)}
    parities = {p for g in grads.values() if g for p in [g.homogeneous_parity()]}
    if not parities:
        return {fam: SuperPolynomial.zero() for fam in range(op.dim)}
    if len(parities) != 1 or None in parities:
        raise ValueError("variational gradient is not parity-homogeneous")
    block = (parities.pop() + 1) & 1
    return apply_matrix_operator(op, grads, block)
