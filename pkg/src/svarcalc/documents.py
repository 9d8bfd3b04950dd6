"""Input documents: parsing, validation and deterministic rendering.

The concrete syntax is JSON with every rational encoded as a string ("p/q" or
an integer string); floats are rejected outright so no value ever passes
through binary floating point.  Rendering sorts keys and is byte-stable:
parse(render(doc)) == doc for every valid document.

Document kinds:

* ``algebra``          -- structure constants (products circ/times/dot, an
                          optional symmetric form, an optional grading);
* ``operator``         -- a matrix differential operator given by block
                          entries (block, row, col, power, coefficient);
* ``linear_operator``  -- coefficient tables of a linear type-1 family plus
                          an optional constant block;
* ``density``          -- a single polynomial with a family count, used as
                          the density of an evolution system.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from .algebra import FIELD_KIND, Generator, SuperPolynomial, covector, field
from .modes import LinearOperatorData
from .operators import MatrixDiffOperator, ScalarDiffOperator
from .structures import AlgebraSpec

FORMAT = "svarcalc/1"
KINDS = ("algebra", "operator", "linear_operator", "density")


class DocumentError(ValueError):
    """Structured parse/validation failure with a field location."""

    def __init__(self, location: str, message: str):
        self.location = location
        self.message = message
        super().__init__(f"{location}: {message}" if location else message)


@dataclass
class InputDocument:
    kind: str
    payload: Any  # AlgebraSpec | MatrixDiffOperator | LinearOperatorData | (dim, SuperPolynomial)

    def __eq__(self, other) -> bool:
        if not isinstance(other, InputDocument):
            return NotImplemented
        return self.kind == other.kind and self.payload == other.payload


def _expect(cond: bool, location: str, message: str) -> None:
    if not cond:
        raise DocumentError(location, message)


def _rational(value, location: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise DocumentError(location, f"rationals must be strings, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    _expect(isinstance(value, str), location, f"expected a rational string, got {type(value).__name__}")
    try:
        frac = Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(location, f"not a valid rational: {value!r} ({exc})") from None
    return frac


def _rational_str(value: Fraction) -> str:
    return str(value)


def _table_in(data, dim: int, location: str):
    _expect(isinstance(data, list) and len(data) == dim, location,
            f"expected a list of {dim} rows")
    out = []
    for i, row in enumerate(data):
        _expect(isinstance(row, list) and len(row) == dim, f"{location}[{i}]",
                f"expected a list of {dim} columns")
        cols = []
        for j, cell in enumerate(row):
            _expect(isinstance(cell, list) and len(cell) == dim, f"{location}[{i}][{j}]",
                    f"expected a list of {dim} coefficients")
            cols.append(tuple(
                _rational(cell[k], f"{location}[{i}][{j}][{k}]") for k in range(dim)
            ))
        out.append(tuple(cols))
    return tuple(out)


def _matrix_in(data, dim: int, location: str):
    _expect(isinstance(data, list) and len(data) == dim, location,
            f"expected a list of {dim} rows")
    out = []
    for i, row in enumerate(data):
        _expect(isinstance(row, list) and len(row) == dim, f"{location}[{i}]",
                f"expected a list of {dim} entries")
        out.append(tuple(_rational(row[j], f"{location}[{i}][{j}]") for j in range(dim)))
    return tuple(out)


def _generator_in(data, dim: int, location: str) -> Generator:
    _expect(isinstance(data, dict), location, "expected a generator object")
    kind = data.get("kind")
    if kind == "field":
        family = data.get("family")
        order = data.get("order")
        _expect(isinstance(family, int) and 0 <= family < dim, f"{location}.family",
                f"family index must be an integer in [0, {dim})")
        _expect(isinstance(order, int) and order >= 1, f"{location}.order",
                "field order must be an integer >= 1")
        return field(family, order)
    if kind == "covector":
        slot = data.get("slot")
        family = data.get("family")
        derivs = data.get("derivs", 0)
        base_parity = data.get("base_parity")
        _expect(slot in (1, 2, 3), f"{location}.slot", "covector slot must be 1, 2 or 3")
        _expect(isinstance(family, int) and 0 <= family < dim, f"{location}.family",
                f"family index must be an integer in [0, {dim})")
        _expect(isinstance(derivs, int) and derivs >= 0, f"{location}.derivs",
                "derivative count must be an integer >= 0")
        _expect(base_parity in (0, 1), f"{location}.base_parity",
                "base parity must be 0 or 1")
        return covector(slot, family, derivs, base_parity)
    raise DocumentError(f"{location}.kind", f"unknown generator kind {kind!r}")


def _generator_out(gen: Generator) -> Dict[str, Any]:
    kind, family, derivs, base_parity = gen
    if kind == FIELD_KIND:
        return {"kind": "field", "family": family, "order": derivs + 1}
    return {"kind": "covector", "slot": kind, "family": family,
            "derivs": derivs, "base_parity": base_parity}


def _polynomial_in(data, dim: int, location: str) -> SuperPolynomial:
    if isinstance(data, (str, int)):
        return SuperPolynomial.scalar(_rational(data, location))
    _expect(isinstance(data, list), location,
            "expected a rational string or a list of terms")
    terms = []
    for t, term in enumerate(data):
        loc = f"{location}[{t}]"
        _expect(isinstance(term, dict), loc, "expected a term object")
        coeff = _rational(term.get("coeff"), f"{loc}.coeff")
        mono = term.get("monomial", [])
        _expect(isinstance(mono, list), f"{loc}.monomial", "expected a list of factors")
        gens: List[Generator] = []
        for f_idx, factor in enumerate(mono):
            floc = f"{loc}.monomial[{f_idx}]"
            _expect(isinstance(factor, list) and len(factor) == 2, floc,
                    "expected a [generator, exponent] pair")
            gen = _generator_in(factor[0], dim, f"{floc}[0]")
            exp = factor[1]
            _expect(isinstance(exp, int) and exp >= 1, f"{floc}[1]",
                    "exponent must be an integer >= 1")
            gens.extend([gen] * exp)
        terms.append((gens, coeff))
    return SuperPolynomial.from_terms(terms)


def _polynomial_out(poly: SuperPolynomial):
    if poly.is_zero():
        return []
    terms = poly.terms()
    if len(terms) == 1 and () in terms:
        return _rational_str(terms[()])
    out = []
    for mono, coeff in sorted(terms.items()):
        out.append({
            "coeff": _rational_str(coeff),
            "monomial": [[_generator_out(gen), exp] for gen, exp in mono],
        })
    return out


# -- algebra documents -------------------------------------------------------

def _algebra_in(data) -> AlgebraSpec:
    dim = data.get("dimension")
    _expect(isinstance(dim, int) and dim >= 1, "dimension", "must be an integer >= 1")
    products = data.get("products", {})
    _expect(isinstance(products, dict), "products", "expected an object")
    tables = {}
    for name in ("circ", "times", "dot"):
        if name in products:
            tables[name] = _table_in(products[name], dim, f"products.{name}")
    unknown = set(products) - {"circ", "times", "dot"}
    _expect(not unknown, "products", f"unknown product names {sorted(unknown)}")
    form = _matrix_in(data["form"], dim, "form") if "form" in data else None
    grading = None
    if "grading" in data:
        g = data["grading"]
        _expect(isinstance(g, list) and len(g) == dim and all(x in (0, 1) for x in g),
                "grading", f"expected a list of {dim} parities (0 or 1)")
        grading = tuple(g)
    return AlgebraSpec(dim=dim, form=form, grading=grading, **tables)


def _algebra_out(spec: AlgebraSpec) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"format": FORMAT, "kind": "algebra", "dimension": spec.dim}
    products = {}
    for name in ("circ", "times", "dot"):
        table = getattr(spec, name)
        if table is not None:
            products[name] = [
                [[_rational_str(c) for c in cell] for cell in row] for row in table
            ]
    if products:
        doc["products"] = products
    if spec.form is not None:
        doc["form"] = [[_rational_str(c) for c in row] for row in spec.form]
    if spec.grading is not None:
        doc["grading"] = list(spec.grading)
    return doc


# -- operator documents ------------------------------------------------------

def _operator_in(data) -> MatrixDiffOperator:
    type_parity = data.get("type")
    _expect(type_parity in (0, 1), "type", "operator type must be 0 or 1")
    dim = data.get("dimension")
    _expect(isinstance(dim, int) and dim >= 1, "dimension", "must be an integer >= 1")
    entries = data.get("entries", [])
    _expect(isinstance(entries, list), "entries", "expected a list")
    blocks: Dict[Tuple[int, int, int], Dict[int, SuperPolynomial]] = {}
    seen = set()
    for idx, entry in enumerate(entries):
        loc = f"entries[{idx}]"
        _expect(isinstance(entry, dict), loc, "expected an entry object")
        block = entry.get("block")
        row = entry.get("row")
        col = entry.get("col")
        power = entry.get("power")
        _expect(block in (0, 1), f"{loc}.block", "block must be 0 or 1")
        _expect(isinstance(row, int) and 0 <= row < dim, f"{loc}.row",
                f"row must be an integer in [0, {dim})")
        _expect(isinstance(col, int) and 0 <= col < dim, f"{loc}.col",
                f"col must be an integer in [0, {dim})")
        _expect(isinstance(power, int) and power >= 0, f"{loc}.power",
                "power must be an integer >= 0")
        key = (block, row, col, power)
        _expect(key not in seen, loc, f"duplicate entry for {key}")
        seen.add(key)
        coeff = _polynomial_in(entry.get("coeff"), dim, f"{loc}.coeff")
        if coeff:
            blocks.setdefault((block, row, col), {})[power] = coeff
    ops = {key: ScalarDiffOperator(powers) for key, powers in blocks.items()}
    try:
        return MatrixDiffOperator(type_parity, dim, ops)
    except ValueError as exc:
        raise DocumentError("entries", str(exc)) from None


def _operator_out(op: MatrixDiffOperator) -> Dict[str, Any]:
    entries = []
    for (block, row, col) in sorted(op.blocks()):
        for power in sorted(op.entry(block, row, col).entries()):
            coeff = op.entry(block, row, col).entries()[power]
            entries.append({
                "block": block, "row": row, "col": col, "power": power,
                "coeff": _polynomial_out(coeff),
            })
    return {"format": FORMAT, "kind": "operator", "type": op.type_parity,
            "dimension": op.dim, "entries": entries}


# -- linear operator documents ------------------------------------------------

def _linear_in(data) -> LinearOperatorData:
    top = data.get("top_order")
    dim = data.get("dimension")
    _expect(isinstance(top, int) and top >= 1, "top_order", "must be an integer >= 1")
    _expect(isinstance(dim, int) and dim >= 1, "dimension", "must be an integer >= 1")
    even = data.get("even_tables")
    odd = data.get("odd_tables")
    _expect(isinstance(even, list) and len(even) == top + 1, "even_tables",
            f"expected {top + 1} tables")
    _expect(isinstance(odd, list) and len(odd) == top, "odd_tables",
            f"expected {top} tables")
    even_tables = tuple(_table_in(even[m], dim, f"even_tables[{m}]") for m in range(top + 1))
    odd_tables = tuple(_table_in(odd[m], dim, f"odd_tables[{m}]") for m in range(top))
    constant = _matrix_in(data["constant"], dim, "constant") if "constant" in data else None
    return LinearOperatorData(top_order=top, dim=dim, even_tables=even_tables,
                              odd_tables=odd_tables, constant=constant)


def _linear_out(data: LinearOperatorData) -> Dict[str, Any]:
    def table_out(table):
        return [[[_rational_str(c) for c in cell] for cell in row] for row in table]

    doc: Dict[str, Any] = {
        "format": FORMAT, "kind": "linear_operator",
        "top_order": data.top_order, "dimension": data.dim,
        "even_tables": [table_out(t) for t in data.even_tables],
        "odd_tables": [table_out(t) for t in data.odd_tables],
    }
    if data.constant is not None:
        doc["constant"] = [[_rational_str(c) for c in row] for row in data.constant]
    return doc


# -- density documents ---------------------------------------------------------

def _density_in(data) -> Tuple[int, SuperPolynomial]:
    dim = data.get("dimension")
    _expect(isinstance(dim, int) and dim >= 1, "dimension", "must be an integer >= 1")
    poly = _polynomial_in(data.get("polynomial", []), dim, "polynomial")
    return (dim, poly)


def _density_out(dim: int, poly: SuperPolynomial) -> Dict[str, Any]:
    return {"format": FORMAT, "kind": "density", "dimension": dim,
            "polynomial": _polynomial_out(poly)}


# -- entry points --------------------------------------------------------------

def parse_document_data(data) -> InputDocument:
    _expect(isinstance(data, dict), "", "document root must be an object")
    fmt = data.get("format")
    _expect(fmt == FORMAT, "format", f"expected {FORMAT!r}, got {fmt!r}")
    kind = data.get("kind")
    _expect(kind in KINDS, "kind", f"unknown kind {kind!r}; expected one of {KINDS}")
    if kind == "algebra":
        return InputDocument(kind, _algebra_in(data))
    if kind == "operator":
        return InputDocument(kind, _operator_in(data))
    if kind == "linear_operator":
        return InputDocument(kind, _linear_in(data))
    return InputDocument(kind, _density_in(data))


def parse_document(path: str) -> InputDocument:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise DocumentError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("", f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_document_data(data)


def render_document(doc: InputDocument) -> str:
    if doc.kind == "algebra":
        data = _algebra_out(doc.payload)
    elif doc.kind == "operator":
        data = _operator_out(doc.payload)
    elif doc.kind == "linear_operator":
        data = _linear_out(doc.payload)
    elif doc.kind == "density":
        data = _density_out(*doc.payload)
    else:
        raise ValueError(f"unknown document kind {doc.kind!r}")
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
