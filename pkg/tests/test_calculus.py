"""Superderivation, variational operators, evolutionary derivations."""

import random
from fractions import Fraction

import pytest

from svarcalc import (
    EvolutionaryField,
    GradedDerivation,
    QuotientDomainError,
    SuperPolynomial,
    check_commutes_with_D,
    covector,
    evolutionary_apply,
    evolutionary_bracket,
    field,
    is_total_derivative,
    superderive,
    superderive_n,
    variational_derivative,
    variational_derivative_field,
)
from helpers import (
    field_pool,
    mixed_pool,
    random_evolutionary,
    random_homogeneous,
    random_poly,
)


def gp(g):
    return SuperPolynomial.generator(g)


class TestSuperderive:
    def test_shifts_single_generator(self):
        assert superderive(gp(field(0, 1))) == gp(field(0, 2))
        assert superderive(gp(covector(1, 0, 2, 1))) == gp(covector(1, 0, 3, 1))

    def test_kills_scalars(self):
        assert superderive(SuperPolynomial.scalar(Fraction(5, 3))).is_zero()

    def test_graded_leibniz_on_odd_pair(self):
        u = gp(field(0, 1)) * gp(field(1, 1))
        expected = gp(field(0, 2)) * gp(field(1, 1)) - gp(field(0, 1)) * gp(field(1, 2))
        assert superderive(u) == expected

    def test_square_shifts_by_two(self, seed):
        rng = random.Random(seed)
        pool = mixed_pool(2, 4)
        for _ in range(30):
            u = random_poly(rng, pool)
            assert superderive_n(u, 2) == superderive(superderive(u))
        for a in range(2):
            for n in range(1, 4):
                assert superderive_n(gp(field(a, n)), 2) == gp(field(a, n + 2))

    def test_is_odd_derivation(self, seed):
        rng = random.Random(seed)
        pool = field_pool(2, 3)
        for _ in range(40):
            u = random_homogeneous(rng, pool, rng.randint(0, 1))
            v = random_poly(rng, pool)
            if not u:
                continue
            sign = -1 if u.homogeneous_parity() else 1
            assert superderive(u * v) == superderive(u) * v + sign * (u * superderive(v))


class TestVariationalDerivative:
    def test_quadratic_example(self):
        u = gp(field(0, 1)) * gp(field(0, 2))
        assert variational_derivative_field(u, 0) == 2 * gp(field(0, 2))

    def test_other_family_vanishes(self):
        assert variational_derivative_field(gp(field(1, 1)), 0).is_zero()

    def test_kills_total_derivatives(self):
        v = gp(field(0, 1)) * gp(field(1, 1))
        assert variational_derivative_field(superderive(v), 0).is_zero()
        assert variational_derivative_field(superderive(v), 1).is_zero()

    def test_kills_total_derivatives_randomly(self, seed):
        rng = random.Random(seed)
        pool = mixed_pool(3, 5)
        for _ in range(200):
            u = random_poly(rng, pool, max_terms=4)
            du = superderive(u)
            for base in sorted(du.bases()):
                assert variational_derivative(du, base).is_zero()

    def test_rejects_derived_generator_base(self):
        with pytest.raises(ValueError):
            variational_derivative(gp(field(0, 2)), field(0, 2))


class TestTotalDerivativeMembership:
    def test_image_recognized(self):
        v = gp(field(0, 1)) * gp(field(1, 1))
        assert is_total_derivative(superderive(v))

    def test_non_image_rejected(self):
        assert not is_total_derivative(gp(field(0, 1)) * gp(field(0, 2)))

    def test_zero_is_trivially_total(self):
        assert is_total_derivative(SuperPolynomial.zero())

    def test_constant_term_is_out_of_domain(self):
        with pytest.raises(QuotientDomainError):
            is_total_derivative(SuperPolynomial.one() + gp(field(0, 2)))

    def test_covector_cases(self):
        odd = covector(1, 0, 0, 1)
        even = covector(2, 0, 0, 0)
        assert is_total_derivative(superderive(gp(odd) * gp(even)))
        # xi * D(xi) for an odd base is not a total derivative (xi^2 = 0)
        assert not is_total_derivative(gp(odd) * gp(covector(1, 0, 1, 1)))


class TestEvolutionaryFields:
    def test_component_parity_enforced(self):
        with pytest.raises(ValueError):
            EvolutionaryField(parity=0, components={0: gp(field(0, 2))})

    def test_order_zero_action(self):
        f = EvolutionaryField(parity=1, components={0: gp(field(0, 2))})
        assert evolutionary_apply(f, gp(field(0, 1))) == gp(field(0, 2))

    def test_order_one_action_carries_derivation_parity_sign(self):
        # Components phi(2) make an odd derivation; its order-1 coefficient is
        # -D(phi(2)), forced by commutation with the superderivation.
        f = EvolutionaryField(parity=1, components={0: gp(field(0, 2))})
        assert evolutionary_apply(f, gp(field(0, 2))) == -gp(field(0, 3))

    def test_zero_component_family(self):
        f = EvolutionaryField(parity=1, components={0: gp(field(0, 2))})
        assert evolutionary_apply(f, gp(field(1, 3))).is_zero()

    def test_commutes_with_superderivation(self, seed):
        rng = random.Random(seed)
        pool = field_pool(2, 3)
        for _ in range(50):
            f = random_evolutionary(rng, 2, 3)
            probes = [random_poly(rng, pool, max_terms=2) for _ in range(3)]
            assert check_commutes_with_D(f, probes)

    def test_zero_field_commutes(self):
        f = EvolutionaryField(parity=0, components={})
        assert check_commutes_with_D(f, [gp(field(0, 2))])

    def test_mismatched_tower_detected(self):
        bad = GradedDerivation(parity=0, coefficients={
            (0, 1): gp(field(0, 1)),
            (0, 2): 2 * gp(field(0, 2)),
        })
        assert not check_commutes_with_D(bad, [gp(field(0, 1))])


class TestEvolutionaryBracket:
    def test_self_bracket_of_even_field_vanishes(self, seed):
        rng = random.Random(seed)
        f = random_evolutionary(rng, 2, 2, parity=0)
        b = evolutionary_bracket(f, f)
        assert all(not c for c in b.components.values())

    def test_graded_skew(self, seed):
        rng = random.Random(seed)
        for _ in range(25):
            f = random_evolutionary(rng, 2, 2)
            g = random_evolutionary(rng, 2, 2)
            fwd = evolutionary_bracket(f, g)
            back = evolutionary_bracket(g, f)
            sign = -1 if (f.parity & g.parity) else 1
            for fam in range(2):
                assert (fwd.component(fam) + sign * back.component(fam)).is_zero()

    def test_graded_jacobi(self, seed):
        rng = random.Random(seed)
        for _ in range(25):
            f, g, h = (random_evolutionary(rng, 2, 2) for _ in range(3))
            t1 = evolutionary_bracket(f, evolutionary_bracket(g, h))
            t2 = evolutionary_bracket(g, evolutionary_bracket(h, f))
            t3 = evolutionary_bracket(h, evolutionary_bracket(f, g))
            s2 = -1 if (f.parity & (g.parity ^ h.parity)) else 1
            s3 = -1 if (h.parity & (f.parity ^ g.parity)) else 1
            for fam in range(2):
                total = t1.component(fam) + s2 * t2.component(fam) + s3 * t3.component(fam)
                assert total.is_zero()

    def test_bracket_parity_adds(self, seed):
        rng = random.Random(seed)
        f = random_evolutionary(rng, 1, 2, parity=1)
        g = random_evolutionary(rng, 1, 2, parity=1)
        assert evolutionary_bracket(f, g).parity == 0
