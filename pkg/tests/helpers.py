"""Shared random generators for the property tests."""

from __future__ import annotations

import random
from fractions import Fraction

from svarcalc import EvolutionaryField, SuperPolynomial, covector, field


def field_pool(families: int, max_order: int):
    return [field(a, n) for a in range(families) for n in range(1, max_order + 1)]


def mixed_pool(families: int, max_order: int):
    pool = field_pool(families, max_order)
    pool += [covector(1, 0, k, 1) for k in range(2)]
    pool += [covector(2, 0, k, 0) for k in range(2)]
    pool.append(covector(3, 0, 0, 1))
    return pool


def random_poly(rng: random.Random, pool, max_terms: int = 4,
                max_factors: int = 4) -> SuperPolynomial:
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        gens = [rng.choice(pool) for _ in range(rng.randint(0, max_factors))]
        coeff = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        terms.append((gens, coeff))
    return SuperPolynomial.from_terms(terms)


def random_homogeneous(rng: random.Random, pool, parity: int,
                       tries: int = 60) -> SuperPolynomial:
    for _ in range(tries):
        p = random_poly(rng, pool)
        part = p.even_part() if parity == 0 else p.odd_part()
        if part:
            return part
    return SuperPolynomial.zero()


def random_evolutionary(rng: random.Random, families: int, max_order: int,
                        parity=None) -> EvolutionaryField:
    pool = field_pool(families, max_order)
    s = rng.randint(0, 1) if parity is None else parity
    comps = {}
    for fam in range(families):
        comps[fam] = random_homogeneous(rng, pool, (s + 1) & 1)
    return EvolutionaryField(parity=s, components=comps)
