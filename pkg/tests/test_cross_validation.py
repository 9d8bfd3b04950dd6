"""Dual-route checks: independent oracles for the two core decision
procedures.

The total-derivative test is cross-checked against exact linear algebra
(solve u = D(v) over a finite candidate basis), and the normal-ordering
skew-symmetry criterion against the direct pairing definition evaluated in
the quotient.
"""

import random
from collections import defaultdict
from fractions import Fraction
from itertools import product

from svarcalc import (
    MatrixDiffOperator,
    ScalarDiffOperator,
    SuperPolynomial,
    apply_matrix_operator,
    check_skew_symmetry,
    covector,
    field,
    is_total_derivative,
    make_truncated_example,
    np_to_nx,
    build_type1_operator,
    build_type0_operator,
    make_exterior_example,
    superderive,
)
from svarcalc.algebra import normalize_monomial
from svarcalc.calculus import QuotientDomainError

from helpers import mixed_pool, random_poly

F = Fraction


# -- linear-algebra membership oracle -----------------------------------------

def _compositions(total, parts):
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def _block_key(mono):
    bases = []
    weight = 0
    for (kind, fam, derivs, bp), exp in mono:
        bases.extend([(kind, fam, bp)] * exp)
        weight += derivs * exp
    return tuple(sorted(bases)), weight


def _candidate_monomials(bases, weight):
    """Canonical monomials on the given base multiset with total derivative
    weight; assignments colliding on an odd generator drop out."""
    seen = set()
    for assignment in _compositions(weight, len(bases)):
        gens = [(kind, fam, derivs, bp)
                for (kind, fam, bp), derivs in zip(bases, assignment)]
        mono, sign = normalize_monomial(gens)
        if sign == 0 or mono in seen:
            continue
        seen.add(mono)
        yield mono


def _solve_exact(columns, target):
    """Solvability of A x = target over the rationals (Gaussian elimination).

    ``columns`` maps column labels to {row: coeff}; ``target`` is {row: coeff}.
    """
    rows = sorted(set(target) | {r for col in columns.values() for r in col})
    row_index = {r: i for i, r in enumerate(rows)}
    matrix = []
    for col in columns.values():
        vec = [F(0)] * len(rows)
        for r, c in col.items():
            vec[row_index[r]] = c
        matrix.append(vec)
    rhs = [F(0)] * len(rows)
    for r, c in target.items():
        rhs[row_index[r]] = c
    # transpose to row-major system over the row space
    n_rows, n_cols = len(rows), len(matrix)
    aug = [[matrix[j][i] for j in range(n_cols)] + [rhs[i]] for i in range(n_rows)]
    pivot_row = 0
    for col in range(n_cols):
        pivot = next((r for r in range(pivot_row, n_rows) if aug[r][col]), None)
        if pivot is None:
            continue
        aug[pivot_row], aug[pivot] = aug[pivot], aug[pivot_row]
        factor = aug[pivot_row][col]
        aug[pivot_row] = [x / factor for x in aug[pivot_row]]
        for r in range(n_rows):
            if r != pivot_row and aug[r][col]:
                scale = aug[r][col]
                aug[r] = [a - scale * b for a, b in zip(aug[r], aug[pivot_row])]
        pivot_row += 1
        if pivot_row == n_rows:
            break
    # inconsistent iff a zero row has nonzero right side
    for r in range(n_rows):
        if aug[r][-1] and not any(aug[r][:-1]):
            return False
    return True


def total_derivative_by_linear_solve(u: SuperPolynomial) -> bool:
    """Decide u in Im(D) by explicitly solving u = D(v).

    D preserves the base multiset and the factor count of every monomial and
    raises the derivative weight by exactly one, so candidates for v are
    enumerable block by block.
    """
    if u.is_zero():
        return True
    if u.constant_term():
        raise QuotientDomainError("constant term")
    blocks = defaultdict(dict)
    for mono, coeff in u.terms().items():
        blocks[_block_key(mono)][mono] = coeff
    for (bases, weight), target in blocks.items():
        if weight == 0:
            return False  # D raises the weight, so weight-0 targets are unreachable
        columns = {}
        for cand in _candidate_monomials(bases, weight - 1):
            image = superderive(SuperPolynomial({cand: F(1)}))
            if image:
                columns[cand] = dict(image.terms())
        if not _solve_exact(columns, target):
            return False
    return True


class TestMembershipOracle:
    def test_agrees_on_random_polynomials(self, seed):
        rng = random.Random(seed)
        pool = mixed_pool(2, 4)
        checked = 0
        for _ in range(120):
            u = random_poly(rng, pool, max_terms=3, max_factors=3)
            if u.constant_term():
                continue
            assert is_total_derivative(u) == total_derivative_by_linear_solve(u)
            checked += 1
        assert checked > 60

    def test_agrees_on_guaranteed_members(self, seed):
        rng = random.Random(seed + 1)
        pool = mixed_pool(2, 3)
        for _ in range(60):
            v = random_poly(rng, pool, max_terms=3, max_factors=3)
            u = superderive(v)
            if u.constant_term():
                continue
            assert is_total_derivative(u)
            assert total_derivative_by_linear_solve(u)

    def test_agrees_on_known_negatives(self):
        phi = lambda n: SuperPolynomial.generator(field(0, n))
        for u in (phi(1) * phi(2),
                  phi(1),
                  SuperPolynomial.generator(covector(1, 0, 0, 1))
                  * SuperPolynomial.generator(covector(1, 0, 1, 1))):
            assert not is_total_derivative(u)
            assert not total_derivative_by_linear_solve(u)


# -- direct skew-symmetry oracle ------------------------------------------------

def skew_by_pairing(op: MatrixDiffOperator) -> bool:
    """Super skew-symmetry straight from the pairing definition.

    For basis covectors at all family pairs and parity pairs, the pairing of
    the first covector with the operator applied to the second must cancel
    the sign-twisted reverse pairing modulo total derivatives; the twist is
    (-1) to the product of the image parities.
    """
    iota = op.type_parity
    for p, q, i1, i2 in product(range(op.dim), range(op.dim), (0, 1), (0, 1)):
        xi1 = covector(1, p, 0, (i1 + 1) & 1)
        xi2 = covector(2, q, 0, (i2 + 1) & 1)
        applied2 = apply_matrix_operator(
            op, {q: SuperPolynomial.generator(xi2)}, i2)
        applied1 = apply_matrix_operator(
            op, {p: SuperPolynomial.generator(xi1)}, i1)
        forward = applied2[p] * SuperPolynomial.generator(xi1)
        reverse = applied1[q] * SuperPolynomial.generator(xi2)
        twist = (i1 + iota) & (i2 + iota) & 1
        total = forward + (reverse if not twist else -reverse)
        if not is_total_derivative(total):
            return False
    return True


class TestSkewOracle:
    def corpus(self):
        d_power = lambda k: MatrixDiffOperator(1, 1, {
            (0, 0, 0): ScalarDiffOperator.d_power(k),
            (1, 0, 0): ScalarDiffOperator.d_power(k)})
        field_only = MatrixDiffOperator(1, 1, {
            (0, 0, 0): ScalarDiffOperator.single(
                SuperPolynomial.generator(field(0, 3)), 0),
            (1, 0, 0): ScalarDiffOperator.single(
                SuperPolynomial.generator(field(0, 3)), 0)})
        sign_flipped = MatrixDiffOperator(1, 1, {
            (0, 0, 0): ScalarDiffOperator.d_power(5),
            (1, 0, 0): ScalarDiffOperator.d_power(5, -1)})
        even = ScalarDiffOperator({0: SuperPolynomial.one(),
                                   4: SuperPolynomial.one()})
        twisted = MatrixDiffOperator(0, 1, {(0, 0, 0): even,
                                            (1, 0, 0): even.scaled(-1)})
        untwisted = MatrixDiffOperator(0, 1, {(0, 0, 0): even, (1, 0, 0): even})
        yield d_power(1)
        yield d_power(3)
        yield d_power(5)
        yield field_only
        yield sign_flipped
        yield twisted
        yield untwisted
        yield build_type1_operator(np_to_nx(make_truncated_example(2), 0))
        yield build_type0_operator(make_exterior_example({(3, 4): 1}))

    def test_normal_ordering_criterion_matches_pairing(self):
        verdicts = []
        for op in self.corpus():
            criterion = check_skew_symmetry(op)[0]
            direct = skew_by_pairing(op)
            assert criterion == direct
            verdicts.append(criterion)
        assert True in verdicts and False in verdicts
