"""Exact arithmetic in a free super-commutative polynomial algebra.

Values are polynomials over the rationals in a family of Z2-graded
generators.  Two kinds of generators exist:

* dynamical field generators ``phi<family>(n)`` with order n >= 1, where
  ``phi(n)`` has parity n mod 2 (the order-1 generator is odd and each
  derivative flips parity);
* formal covector symbols ``xi<slot>_<family>`` carrying an explicit base
  parity, together with their formal derivatives ``D^k xi`` of parity
  (base_parity + k) mod 2.

A generator is a plain tuple ``(kind, family, derivs, base_parity)`` where
kind 0 marks fields (derivs k displays as order n = k + 1, base parity is
always 1) and kinds 1..3 mark the three covector slots.  The tuple itself is
the total generator order: fields sort before covectors, then by family and
derivative count.  This fixed order makes canonical forms reproducible
bit-for-bit.

A monomial is a sorted tuple of ``(generator, exponent)`` pairs; odd
generators never carry an exponent above 1 (their squares vanish).  A
polynomial maps monomials to nonzero ``Fraction`` coefficients; the empty
monomial is the scalar 1 and the zero polynomial is the empty mapping.
Reordering a product of generators costs a sign of -1 for every transposition
of two odd generators, which is exactly the super-commutation rule
``u v = (-1)^{|u||v|} v u``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

Generator = Tuple[int, int, int, int]
Monomial = Tuple[Tuple[Generator, int], ...]

FIELD_KIND = 0
COVECTOR_SLOTS = (1, 2, 3)

_ZERO = Fraction(0)
_ONE = Fraction(1)


def field(family: int, order: int = 1) -> Generator:
    """Field generator ``phi<family>(order)``; order must be >= 1."""
    if order < 1:
        raise ValueError(f"field order must be >= 1, got {order}")
    if family < 0:
        raise ValueError(f"family index must be >= 0, got {family}")
    return (FIELD_KIND, family, order - 1, 1)


def covector(slot: int, family: int, derivs: int = 0, base_parity: int = 0) -> Generator:
    """Covector symbol ``D^derivs xi<slot>_<family>`` with the given base parity."""
    if slot not in COVECTOR_SLOTS:
        raise ValueError(f"covector slot must be one of {COVECTOR_SLOTS}, got {slot}")
    if derivs < 0:
        raise ValueError(f"derivative count must be >= 0, got {derivs}")
    if base_parity not in (0, 1):
        raise ValueError(f"base parity must be 0 or 1, got {base_parity}")
    return (slot, family, derivs, base_parity)


def parity(gen: Generator) -> int:
    """Z2 parity of a generator: (base_parity + derivs) mod 2."""
    return (gen[2] + gen[3]) & 1


def shift(gen: Generator) -> Generator:
    """Image of a generator under one application of the superderivation."""
    return (gen[0], gen[1], gen[2] + 1, gen[3])


def base_of(gen: Generator) -> Generator:
    """The derivs-0 base generator of the derivative tower containing gen."""
    return (gen[0], gen[1], 0, gen[3])


def gen_order(gen: Generator) -> int:
    """Display order: n for fields phi(n), derivative count for covectors."""
    return gen[2] + 1 if gen[0] == FIELD_KIND else gen[2]


def gen_name(gen: Generator) -> str:
    kind, family, derivs, base_parity = gen
    if kind == FIELD_KIND:
        return f"phi{family}({derivs + 1})"
    core = f"xi{kind}_{family}"
    return core if derivs == 0 else f"D{derivs}({core})"


def monomial_parity(mono: Monomial) -> int:
    p = 0
    for gen, exp in mono:
        if exp & 1:
            p ^= parity(gen)
    return p


def normalize_monomial(gens: Sequence[Generator]) -> Tuple[Optional[Monomial], int]:
    """Sort a raw generator sequence into canonical form.

    Returns ``(monomial, sign)`` where sign is -1 to the number of odd-odd
    transpositions performed, or ``(None, 0)`` when an odd generator repeats
    (its square vanishes).
    """
    odd_positions = [g for g in gens if parity(g)]
    sign = 1
    # Parity of the permutation sorting the odd subsequence; even generators
    # commute freely and contribute nothing.
    for i in range(len(odd_positions)):
        for j in range(i + 1, len(odd_positions)):
            if odd_positions[i] == odd_positions[j]:
                return None, 0
            if odd_positions[i] > odd_positions[j]:
                sign = -sign
    counts: Dict[Generator, int] = {}
    for g in gens:
        counts[g] = counts.get(g, 0) + 1
    mono = tuple(sorted(counts.items()))
    return mono, sign


def _mul_monomials(m1: Monomial, m2: Monomial) -> Tuple[Optional[Monomial], int]:
    """Merge two canonical monomials; sign from odd-odd crossings."""
    if not m1:
        return m2, 1
    if not m2:
        return m1, 1
    # Suffix counts of odd generators in m1: crossings for an odd generator
    # of m2 inserted before position i.
    n1 = len(m1)
    odd_suffix = [0] * (n1 + 1)
    for i in range(n1 - 1, -1, -1):
        odd_suffix[i] = odd_suffix[i + 1] + (parity(m1[i][0]) if m1[i][1] & 1 else 0)
    out = []
    sign = 1
    i = j = 0
    while i < n1 and j < len(m2):
        g1, e1 = m1[i]
        g2, e2 = m2[j]
        if g1 < g2:
            out.append((g1, e1))
            i += 1
        elif g1 == g2:
            if parity(g1):
                return None, 0
            out.append((g1, e1 + e2))
            i += 1
            j += 1
        else:
            if parity(g2):
                if odd_suffix[i] & 1:
                    sign = -sign
            out.append((g2, e2))
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out), sign


class SuperPolynomial:
    """Canonical sparse polynomial: mapping from monomials to rationals."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Dict[Monomial, Fraction]] = None):
        # Trusted constructor: terms must already be canonical with no zeros.
        self._terms = terms if terms is not None else {}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "SuperPolynomial":
        return cls({})

    @classmethod
    def scalar(cls, value) -> "SuperPolynomial":
        c = Fraction(value)
        return cls({(): c} if c else {})

    @classmethod
    def one(cls) -> "SuperPolynomial":
        return cls.scalar(1)

    @classmethod
    def generator(cls, gen: Generator) -> "SuperPolynomial":
        return cls({((gen, 1),): _ONE})

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Sequence[Generator], object]]) -> "SuperPolynomial":
        """Build from (raw generator sequence, coefficient) pairs."""
        acc: Dict[Monomial, Fraction] = {}
        for gens, coeff in terms:
            mono, sign = normalize_monomial(tuple(gens))
            if sign == 0:
                continue
            c = acc.get(mono, _ZERO) + sign * Fraction(coeff)
            if c:
                acc[mono] = c
            elif mono in acc:
                del acc[mono]
        return cls(acc)

    # -- inspection ----------------------------------------------------------

    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((), _ZERO)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, _ZERO)

    def generators(self) -> Iterator[Generator]:
        for mono in self._terms:
            for gen, _ in mono:
                yield gen

    def bases(self) -> set:
        """Set of derivs-0 base generators whose towers occur."""
        return {base_of(g) for g in self.generators()}

    def homogeneous_parity(self) -> Optional[int]:
        """Common parity of all monomials, or None if mixed.  Zero gives None."""
        parities = {monomial_parity(m) for m in self._terms}
        if len(parities) == 1:
            return parities.pop()
        return None

    def has_parity(self, p: int) -> bool:
        """True iff every monomial has parity p (the zero polynomial always does)."""
        return all(monomial_parity(m) == (p & 1) for m in self._terms)

    def even_part(self) -> "SuperPolynomial":
        return SuperPolynomial({m: c for m, c in self._terms.items() if not monomial_parity(m)})

    def odd_part(self) -> "SuperPolynomial":
        return SuperPolynomial({m: c for m, c in self._terms.items() if monomial_parity(m)})

    def max_derivs(self, base: Generator) -> int:
        """Largest derivative count of the given base tower occurring; -1 if absent."""
        kind, family, _, bp = base
        best = -1
        for gen in self.generators():
            if gen[0] == kind and gen[1] == family and gen[3] == bp and gen[2] > best:
                best = gen[2]
        return best

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        if not self._terms:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            c = out.get(mono, _ZERO) + coeff
            if c:
                out[mono] = c
            elif mono in out:
                del out[mono]
        return SuperPolynomial(out)

    def __sub__(self, other: "SuperPolynomial") -> "SuperPolynomial":
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "SuperPolynomial":
        return SuperPolynomial({m: -c for m, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, SuperPolynomial):
            if not self._terms or not other._terms:
                return SuperPolynomial({})
            acc: Dict[Monomial, Fraction] = {}
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    mono, sign = _mul_monomials(m1, m2)
                    if sign == 0:
                        continue
                    c = acc.get(mono, _ZERO) + (c1 * c2 if sign > 0 else -c1 * c2)
                    if c:
                        acc[mono] = c
                    elif mono in acc:
                        del acc[mono]
            return SuperPolynomial(acc)
        if isinstance(other, (int, Fraction)):
            c0 = Fraction(other)
            if not c0:
                return SuperPolynomial({})
            return SuperPolynomial({m: c * c0 for m, c in self._terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    __hash__ = None  # mutable dict inside; equality is structural

    # -- rendering -----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in sorted(self._terms.items()):
            factors = []
            for gen, exp in mono:
                name = gen_name(gen)
                factors.append(name if exp == 1 else f"{name}^{exp}")
            body = "*".join(factors)
            if not body:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coeff}*{body}")
        rendered = " + ".join(parts)
        return rendered.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"SuperPolynomial({self})"


ZERO = SuperPolynomial.zero()
ONE = SuperPolynomial.one()


def poly_add(u: SuperPolynomial, v: SuperPolynomial) -> SuperPolynomial:
    return u + v


def poly_mul(u: SuperPolynomial, v: SuperPolynomial) -> SuperPolynomial:
    return u * v


def partial_derive(u: SuperPolynomial, gen: Generator) -> SuperPolynomial:
    """Left superderivation d/d(gen) of parity |gen|.

    Acts on each monomial by removing one power of gen with the sign
    (-1)^{|gen| * (parity of the factors to its left)}.
    """
    gp = parity(gen)
    acc: Dict[Monomial, Fraction] = {}
    for mono, coeff in u._terms.items():
        left_odd = 0
        for idx, (g, exp) in enumerate(mono):
            if g == gen:
                c = coeff * exp
                if gp and (left_odd & 1):
                    c = -c
                if exp > 1:
                    new = mono[:idx] + ((g, exp - 1),) + mono[idx + 1:]
                else:
                    new = mono[:idx] + mono[idx + 1:]
                tot = acc.get(new, _ZERO) + c
                if tot:
                    acc[new] = tot
                elif new in acc:
                    del acc[new]
                break
            left_odd += parity(g)  # odd generators always carry exponent 1
    return SuperPolynomial(acc)
