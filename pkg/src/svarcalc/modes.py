"""Formal distribution calculus and the induced Lie superalgebra of a linear
type-1 Hamiltonian operator.

Distributions live in a truncated Laurent ring in three commuting variables
z1, z2, z3 and three anticommuting variables theta1..theta3, with coefficients
that are rational multiples of abstract mode symbols phi<family>(k) (k a
half-integer, stored doubled), a central symbol c, or plain numbers.  The
canonical monomial form keeps the symbol to the left of the theta factors;
half-integer modes anticommute with thetas, everything else commutes.

The two-variable bracket of mode fields is expanded against the odd delta
distribution and the bracket of any two modes is read off the coefficients of
the four theta patterns.  A guard band on the truncation window keeps every
interior coefficient exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .algebra import SuperPolynomial, field
from .operators import MatrixDiffOperator, ScalarDiffOperator, check_skew_symmetry

# Symbols carried by distribution coefficients.
NUM = ("num",)
CENTRAL = ("c",)

Symbol = Tuple
ZExp = Tuple[int, int, int]
Thetas = Tuple[int, ...]
MonoKey = Tuple[ZExp, Thetas, Symbol]
ModeKey = Tuple[int, int]  # (family, doubled mode index)
Combo = Dict[Symbol, Fraction]

_ZERO = Fraction(0)


def phi_symbol(family: int, doubled: int) -> Symbol:
    return ("phi", family, doubled)


def symbol_parity(sym: Symbol) -> int:
    return sym[2] & 1 if sym[0] == "phi" else 0


def mode_parity(key: ModeKey) -> int:
    return key[1] & 1


class FormalDistribution:
    """Sparse truncated Laurent object with graded symbol coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Dict[MonoKey, Fraction]] = None):
        self._terms = terms if terms is not None else {}

    @classmethod
    def zero(cls) -> "FormalDistribution":
        return cls({})

    @classmethod
    def monomial(cls, zexp: ZExp, thetas: Thetas, sym: Symbol = NUM,
                 coeff=1) -> "FormalDistribution":
        c = Fraction(coeff)
        return cls({(zexp, tuple(thetas), sym): c} if c else {})

    def terms(self) -> Mapping[MonoKey, Fraction]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalDistribution):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __add__(self, other: "FormalDistribution") -> "FormalDistribution":
        out = dict(self._terms)
        for key, coeff in other._terms.items():
            tot = out.get(key, _ZERO) + coeff
            if tot:
                out[key] = tot
            elif key in out:
                del out[key]
        return FormalDistribution(out)

    def __neg__(self) -> "FormalDistribution":
        return FormalDistribution({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "FormalDistribution") -> "FormalDistribution":
        return self + (-other)

    def scaled(self, factor) -> "FormalDistribution":
        f = Fraction(factor)
        if not f:
            return FormalDistribution()
        return FormalDistribution({k: c * f for k, c in self._terms.items()})

    def __mul__(self, other: "FormalDistribution") -> "FormalDistribution":
        acc: Dict[MonoKey, Fraction] = {}
        for (za, ta, sa), ca in self._terms.items():
            for (zb, tb, sb), cb in other._terms.items():
                sym = _merge_symbols(sa, sb)
                sign = 1
                # Move the right symbol left across the left theta block.
                if (len(ta) & 1) and symbol_parity(sb):
                    sign = -sign
                thetas, tsign = _merge_thetas(ta, tb)
                if tsign == 0:
                    continue
                sign *= tsign
                key = (tuple(x + y for x, y in zip(za, zb)), thetas, sym)
                c = ca * cb * sign
                tot = acc.get(key, _ZERO) + c
                if tot:
                    acc[key] = tot
                elif key in acc:
                    del acc[key]
        return FormalDistribution(acc)

    def coefficient(self, zexp: ZExp, thetas: Thetas) -> Combo:
        """Symbol combination at a fixed z-exponent and theta pattern."""
        out: Combo = {}
        t = tuple(thetas)
        for (z, th, sym), coeff in self._terms.items():
            if z == zexp and th == t:
                out[sym] = out.get(sym, _ZERO) + coeff
        return {s: c for s, c in out.items() if c}

    def restrict(self, bound: int) -> "FormalDistribution":
        """Drop monomials with any z-exponent outside [-bound, bound]."""
        return FormalDistribution({
            key: coeff for key, coeff in self._terms.items()
            if all(-bound <= e <= bound for e in key[0])
        })


def _merge_symbols(sa: Symbol, sb: Symbol) -> Symbol:
    if sa == NUM:
        return sb
    if sb == NUM:
        return sa
    raise ValueError(f"product of non-scalar symbols {sa} and {sb} is not representable")


def _merge_thetas(ta: Thetas, tb: Thetas) -> Tuple[Thetas, int]:
    if not ta:
        return tb, 1
    if not tb:
        return ta, 1
    seen = set(ta)
    sign = 1
    for t in tb:
        if t in seen:
            return (), 0
        crossings = sum(1 for s in ta if s > t)
        if crossings & 1:
            sign = -sign
    merged = tuple(sorted(ta + tb))
    return merged, sign


def apply_Di(x: FormalDistribution, var: int) -> FormalDistribution:
    """The odd derivation theta_var d/dz_var + d/dtheta_var."""
    if var not in (1, 2, 3):
        raise ValueError("variable index must be 1, 2 or 3")
    acc: Dict[MonoKey, Fraction] = {}

    def bump(key: MonoKey, coeff: Fraction) -> None:
        if not coeff:
            return
        tot = acc.get(key, _ZERO) + coeff
        if tot:
            acc[key] = tot
        elif key in acc:
            del acc[key]

    idx = var - 1
    for (z, th, sym), coeff in x._terms.items():
        # theta_var * d/dz_var
        if z[idx] != 0 and var not in th:
            sign = -1 if symbol_parity(sym) else 1
            crossings = sum(1 for t in th if t < var)
            if crossings & 1:
                sign = -sign
            newz = tuple(e - 1 if i == idx else e for i, e in enumerate(z))
            newth = tuple(sorted(th + (var,)))
            bump((newz, newth, sym), coeff * z[idx] * sign)
        # d/dtheta_var
        if var in th:
            sign = -1 if symbol_parity(sym) else 1
            crossings = sum(1 for t in th if t < var)
            if crossings & 1:
                sign = -sign
            newth = tuple(t for t in th if t != var)
            bump((z, newth, sym), coeff * sign)
    return FormalDistribution(acc)


def apply_Di_n(x: FormalDistribution, var: int, n: int) -> FormalDistribution:
    for _ in range(n):
        x = apply_Di(x, var)
    return x


def bare_delta(i: int, j: int, window: int) -> FormalDistribution:
    """Truncated two-variable delta: sum of (z_i/z_j)^m over |m| <= window."""
    if window < 1:
        raise ValueError("window must be >= 1")
    terms: Dict[MonoKey, Fraction] = {}
    one = Fraction(1)
    for m in range(-window, window + 1):
        z = [0, 0, 0]
        z[i - 1] += m
        z[j - 1] -= m
        terms[(tuple(z), (), NUM)] = one
    return FormalDistribution(terms)


def make_delta(i: int, j: int, window: int) -> FormalDistribution:
    """The odd delta (theta_i - theta_j) * delta(z_i/z_j), truncated."""
    if i == j:
        raise ValueError("variable indices must differ")
    d = bare_delta(i, j, window)
    ti = FormalDistribution.monomial((0, 0, 0), (i,))
    tj = FormalDistribution.monomial((0, 0, 0), (j,))
    return ti * d - tj * d


def z_shift(var: int, power: int) -> FormalDistribution:
    z = [0, 0, 0]
    z[var - 1] = power
    return FormalDistribution.monomial(tuple(z), ())


def mode_field(family: int, var: int, top_order: int, mode_bound: int) -> FormalDistribution:
    """Truncated mode field in the given variable.

    Integer modes ride with theta_var, half-integer modes without; the mode
    with doubled index 2n (or 2n+1) sits at z-exponent -n - top_order - 1.
    """
    terms: Dict[MonoKey, Fraction] = {}
    one = Fraction(1)
    for n in range(-mode_bound, mode_bound + 1):
        z = [0, 0, 0]
        z[var - 1] = -n - top_order - 1
        terms[(tuple(z), (var,), phi_symbol(family, 2 * n))] = one
        terms[(tuple(z), (), phi_symbol(family, 2 * n + 1))] = one
    return FormalDistribution(terms)


@dataclass
class LinearOperatorData:
    """Coefficient tables of a linear type-1 operator family.

    ``even_tables[m][a][b][g]`` multiplies phi_g(2(N-m)+1) D^{2m} and
    ``odd_tables[n][a][b][g]`` multiplies phi_g(2(N-n)) D^{2n+1} in entry
    (a, b); the optional ``constant[a][b]`` is a scalar block at power 2N+3
    that feeds the central extension.
    """

    top_order: int
    dim: int
    even_tables: Tuple
    odd_tables: Tuple
    constant: Optional[Tuple] = None

    def __post_init__(self) -> None:
        n, d = self.top_order, self.dim
        if n < 1:
            raise ValueError("top order must be >= 1")
        if d < 1:
            raise ValueError("family count must be >= 1")
        self.even_tables = tuple(
            tuple(tuple(tuple(Fraction(self.even_tables[m][a][b][g]) for g in range(d))
                        for b in range(d)) for a in range(d))
            for m in range(n + 1)
        )
        self.odd_tables = tuple(
            tuple(tuple(tuple(Fraction(self.odd_tables[m][a][b][g]) for g in range(d))
                        for b in range(d)) for a in range(d))
            for m in range(n)
        )
        if self.constant is not None:
            self.constant = tuple(
                tuple(Fraction(self.constant[a][b]) for b in range(d)) for a in range(d)
            )

    def realize(self) -> MatrixDiffOperator:
        """The matrix differential operator the tables describe (type 1)."""
        n, d = self.top_order, self.dim
        blocks = {}
        for a in range(d):
            for b in range(d):
                entries: Dict[int, SuperPolynomial] = {}
                for m in range(n + 1):
                    coeff = SuperPolynomial.from_terms(
                        ((field(g, 2 * (n - m) + 1),), self.even_tables[m][a][b][g])
                        for g in range(d) if self.even_tables[m][a][b][g]
                    )
                    if coeff:
                        entries[2 * m] = coeff
                for m in range(n):
                    coeff = SuperPolynomial.from_terms(
                        ((field(g, 2 * (n - m)),), self.odd_tables[m][a][b][g])
                        for g in range(d) if self.odd_tables[m][a][b][g]
                    )
                    if coeff:
                        entries[2 * m + 1] = coeff
                if self.constant is not None and self.constant[a][b]:
                    entries[2 * n + 3] = SuperPolynomial.scalar(self.constant[a][b])
                if entries:
                    op = ScalarDiffOperator(entries)
                    blocks[(0, a, b)] = op
                    blocks[(1, a, b)] = op
        return MatrixDiffOperator(1, d, blocks)


@dataclass
class ModeBracketTable:
    """Structure constants of the induced bracket within a truncation window.

    ``entries`` maps ordered mode pairs ((family, doubled), (family, doubled))
    with |doubled| <= 2*window to the bracket value, a combination of phi
    symbols and the central symbol.  Pairs with zero bracket are omitted.
    The central element is implicit: its brackets with everything vanish.
    """

    dim: int
    window: int
    entries: Dict[Tuple[ModeKey, ModeKey], Combo]

    def bracket(self, x: ModeKey, y: ModeKey) -> Optional[Combo]:
        """Bracket of two interior modes; None when outside the window."""
        bound = 2 * self.window
        if abs(x[1]) > bound or abs(y[1]) > bound:
            return None
        return self.entries.get((x, y), {})

    def mode_keys(self) -> List[ModeKey]:
        bound = 2 * self.window
        return [(fam, k) for fam in range(self.dim)
                for k in range(-bound, bound + 1)]


def induce_bracket(data: LinearOperatorData, window: int,
                   guard: Optional[int] = None) -> ModeBracketTable:
    """Mode structure constants induced by a linear type-1 operator.

    Expands the two-variable bracket of mode fields against the odd delta with
    an internal guard band (delta window = window + top_order + 2 unless
    overridden) and reads each interior mode bracket off the four theta
    patterns.  Interior coefficients are exact, so enlarging the guard cannot
    change the result.  The realized operator must be super skew-symmetric.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    ok, witness = check_skew_symmetry(data.realize())
    if not ok:
        raise ValueError(f"realized operator is not super skew-symmetric: {witness}")
    n, d = data.top_order, data.dim
    if guard is None:
        guard = window + n + 2
    elif guard < window + n + 2:
        raise ValueError("guard band too small for the requested window")
    mode_bound = 2 * window + n + 2
    delta = make_delta(1, 2, guard)
    delta_derivs = [delta]
    for _ in range(2 * n + 3):
        delta_derivs.append(apply_Di(delta_derivs[-1], 1))
    fields = {g: mode_field(g, 1, n, mode_bound) for g in range(d)}
    field_derivs: Dict[int, List[FormalDistribution]] = {}
    for g, f in fields.items():
        derivs = [f]
        for _ in range(2 * n):
            derivs.append(apply_Di(derivs[-1], 1))
        field_derivs[g] = derivs
    z2_inv = z_shift(2, -1)
    central_sym = FormalDistribution.monomial((0, 0, 0), (), CENTRAL)

    entries: Dict[Tuple[ModeKey, ModeKey], Combo] = {}
    for a in range(d):
        for b in range(d):
            x = FormalDistribution.zero()
            for g in range(d):
                for m in range(n + 1):
                    coeff = data.even_tables[m][a][b][g]
                    if coeff:
                        term = field_derivs[g][2 * (n - m)] * delta_derivs[2 * m]
                        x = x + term.scaled(coeff)
                for m in range(n):
                    coeff = data.odd_tables[m][a][b][g]
                    if coeff:
                        term = field_derivs[g][2 * (n - m) - 1] * delta_derivs[2 * m + 1]
                        x = x + term.scaled(coeff)
            if data.constant is not None and data.constant[a][b]:
                x = x + (delta_derivs[2 * n + 3] * central_sym).scaled(data.constant[a][b])
            x = z2_inv * x
            _extract_pairs(x, a, b, n, window, entries)
    return ModeBracketTable(dim=d, window=window, entries=entries)


def _extract_pairs(x: FormalDistribution, fam_a: int, fam_b: int, top_order: int,
                   window: int, entries: Dict[Tuple[ModeKey, ModeKey], Combo]) -> None:
    bound = 2 * window
    for k1 in range(-bound, bound + 1):
        m = k1 // 2 if k1 % 2 == 0 else (k1 - 1) // 2
        for k2 in range(-bound, bound + 1):
            n = k2 // 2 if k2 % 2 == 0 else (k2 - 1) // 2
            zexp = (-m - top_order - 1, -n - top_order - 1, 0)
            if k1 % 2 == 0 and k2 % 2 == 0:
                combo = x.coefficient(zexp, (1, 2))
            elif k1 % 2 == 0:
                combo = {s: -c for s, c in x.coefficient(zexp, (1,)).items()}
            elif k2 % 2 == 0:
                combo = x.coefficient(zexp, (2,))
            else:
                combo = x.coefficient(zexp, ())
            if combo:
                entries[((fam_a, k1), (fam_b, k2))] = combo


def check_super_skew(table: ModeBracketTable):
    """Graded skew-symmetry of the table; returns (ok, witness)."""
    for x in table.mode_keys():
        for y in table.mode_keys():
            fwd = table.bracket(x, y)
            back = table.bracket(y, x)
            sign = -1 if (mode_parity(x) & mode_parity(y)) else 1
            residue = dict(fwd)
            for sym, coeff in back.items():
                c = residue.get(sym, _ZERO) + (coeff if sign > 0 else -coeff)
                if c:
                    residue[sym] = c
                elif sym in residue:
                    del residue[sym]
            # fwd + (-1)^{xy} back must vanish
            if residue:
                return False, (x, y)
    return True, None


def _combo_bracket(table: ModeBracketTable, combo: Combo, w: ModeKey) -> Optional[Combo]:
    """Bracket of a symbol combination with a mode; None if out of window."""
    out: Combo = {}
    for sym, coeff in combo.items():
        if sym == CENTRAL:
            continue
        inner = table.bracket((sym[1], sym[2]), w)
        if inner is None:
            return None
        for s, c in inner.items():
            tot = out.get(s, _ZERO) + coeff * c
            if tot:
                out[s] = tot
            elif s in out:
                del out[s]
    return out


def check_super_jacobi(table: ModeBracketTable):
    """Graded Jacobi identity on every admissible interior triple.

    A triple is admissible when all three inner brackets and their pairings
    with the remaining mode stay inside the window.  Returns (ok, witness).
    """
    keys = table.mode_keys()
    for x in keys:
        px = mode_parity(x)
        for y in keys:
            py = mode_parity(y)
            bxy = table.bracket(x, y)
            for z in keys:
                pz = mode_parity(z)
                byz = table.bracket(y, z)
                bzx = table.bracket(z, x)
                t1 = _combo_bracket(table, bxy, z)
                t2 = _combo_bracket(table, byz, x)
                t3 = _combo_bracket(table, bzx, y)
                if t1 is None or t2 is None or t3 is None:
                    continue
                total: Combo = dict(t1)
                for combo, flip in ((t2, px & (py ^ pz)), (t3, pz & (px ^ py))):
                    for sym, coeff in combo.items():
                        c = total.get(sym, _ZERO) + (-coeff if flip else coeff)
                        if c:
                            total[sym] = c
                        elif sym in total:
                            del total[sym]
                if total:
                    return False, (x, y, z)
    return True, None


def render_mode(key: ModeKey) -> str:
    fam, doubled = key
    if doubled % 2 == 0:
        return f"phi{fam}({doubled // 2})"
    return f"phi{fam}({doubled}/2)"


def render_symbol(sym: Symbol) -> str:
    if sym == CENTRAL:
        return "c"
    if sym == NUM:
        return "1"
    return render_mode((sym[1], sym[2]))


def render_combo(combo: Combo) -> str:
    if not combo:
        return "0"
    parts = []
    for sym in sorted(combo):
        coeff = combo[sym]
        body = render_symbol(sym)
        if coeff == 1:
            parts.append(body)
        elif coeff == -1:
            parts.append(f"-{body}")
        else:
            parts.append(f"{coeff}*{body}")
    return " + ".join(parts).replace("+ -", "- ")


def render_table(table: ModeBracketTable) -> List[str]:
    """Deterministic line rendering of every nonzero bracket."""
    lines = []
    for (left, right) in sorted(table.entries):
        combo = table.entries[(left, right)]
        lines.append(f"[{render_mode(left)}, {render_mode(right)}] = {render_combo(combo)}")
    return lines


def virasoro_operator_data(families: int) -> LinearOperatorData:
    """Linear operator data whose induced bracket generalizes the
    super-Virasoro algebra on the given number of families."""
    if families < 1:
        raise ValueError("family count must be >= 1")
    d = families
    zero = Fraction(0)

    def table(value_fn):
        return tuple(
            tuple(tuple(value_fn(a, b, g) for g in range(d)) for b in range(d))
            for a in range(d)
        )

    even0 = table(lambda a, b, g: Fraction(b + 2) if a + b == g else zero)
    even1 = table(lambda a, b, g: Fraction(a + b + 3) if a + b == g else zero)
    odd0 = table(lambda a, b, g: Fraction(1) if a + b == g else zero)
    const = tuple(
        tuple(Fraction(1) if a == 0 and b == 0 else zero for b in range(d))
        for a in range(d)
    )
    return LinearOperatorData(
        top_order=1, dim=d,
        even_tables=(even0, even1),
        odd_tables=(odd0,),
        constant=const,
    )


def super_virasoro_table(families: int, window: int) -> ModeBracketTable:
    """Closed-form mode brackets of the generalized super-Virasoro algebra.

    Half-integer modes bracket to the shifted integer mode plus the central
    term (n+1) n at opposite mode sums; mixed brackets are first order in the
    mode labels; integer modes close on the Virasoro-type bracket with central
    coefficient -(n+1) n (n-1) supported where the modes cancel.  Families add,
    truncated at the family count.
    """
    if families < 1 or window < 1:
        raise ValueError("family count and window must be >= 1")
    d = families
    bound = 2 * window
    entries: Dict[Tuple[ModeKey, ModeKey], Combo] = {}
    for i in range(d):
        for j in range(d):
            for k1 in range(-bound, bound + 1):
                for k2 in range(-bound, bound + 1):
                    combo: Combo = {}
                    lin = Fraction(0)
                    target = i + j
                    if k1 % 2 and k2 % 2:
                        m, n = (k1 - 1) // 2, (k2 - 1) // 2
                        if target < d:
                            combo[phi_symbol(target, k1 + k2)] = Fraction(1)
                        if i == 0 and j == 0 and m + n + 1 == 0:
                            c = Fraction((n + 1) * n)
                            if c:
                                combo[CENTRAL] = combo.get(CENTRAL, _ZERO) + c
                    elif k1 % 2:
                        m, n = (k1 - 1) // 2, k2 // 2
                        lin = Fraction((j + 2) * (m + 1) - (i + 1) * (n + 1))
                        if lin and target < d:
                            combo[phi_symbol(target, k1 + k2)] = lin
                    elif k2 % 2:
                        m, n = k1 // 2, (k2 - 1) // 2
                        lin = Fraction((j + 1) * (m + 1) - (i + 2) * (n + 1))
                        if lin and target < d:
                            combo[phi_symbol(target, k1 + k2)] = lin
                    else:
                        m, n = k1 // 2, k2 // 2
                        lin = Fraction((j + 2) * (m + 1) - (i + 2) * (n + 1))
                        if lin and target < d:
                            combo[phi_symbol(target, k1 + k2)] = lin
                        if i == 0 and j == 0 and m + n == 0:
                            c = Fraction(-(n + 1) * n * (n - 1))
                            if c:
                                combo[CENTRAL] = combo.get(CENTRAL, _ZERO) + c
                    combo = {s: c for s, c in combo.items() if c}
                    if combo:
                        entries[((i, k1), (j, k2))] = combo
    return ModeBracketTable(dim=d, window=window, entries=entries)
