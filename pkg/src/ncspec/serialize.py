"""JSON document schemas and DOT rendering.

Documents carry a `schema` version field and reject unknown keys; rational
scalars travel as exact strings like "3/4".
"""

from fractions import Fraction

from . import rings as rg
from .errors import ParseError, SchemaViolation
from .rings import (
    MatrixRing,
    ModularRing,
    PrimeField,
    ProductRing,
    Rationals,
    RingElement,
    RingHom,
    SemisimpleAlgebra,
    SkewLaurentRing,
    UnivariatePolyRing,
    ZeroRing,
    skew_ring,
)

RING_SCHEMA = "ncspec.ring/1"
MORPHISM_SCHEMA = "ncspec.morphism/1"
MODULE_SCHEMA = "ncspec.module/1"
FINMOD_SCHEMA = "ncspec.finmod/1"
GLUE_SCHEMA = "ncspec.glue/1"
QCOH_SCHEMA = "ncspec.qcoh/1"
REPORT_SCHEMA = "ncspec.report/1"


def _require_keys(doc, required, optional=(), path=""):
    if not isinstance(doc, dict):
        raise SchemaViolation(f"expected an object at {path or '.'}", path)
    keys = set(doc)
    missing = set(required) - keys
    if missing:
        raise SchemaViolation(f"missing fields {sorted(missing)} at {path or '.'}", path)
    unknown = keys - set(required) - set(optional)
    if unknown:
        raise SchemaViolation(f"unknown fields {sorted(unknown)} at {path or '.'}", path)


def parse_rational(v, path="") -> Fraction:
    try:
        if isinstance(v, bool):
            raise ValueError
        if isinstance(v, int):
            return Fraction(v)
        if isinstance(v, str):
            return Fraction(v)
    except (ValueError, ZeroDivisionError):
        pass
    raise SchemaViolation(f"not an exact rational: {v!r}", path)


def rational_str(q: Fraction) -> str:
    return str(Fraction(q))


def _parse_base(v, path):
    if v == "q":
        return Rationals()
    if isinstance(v, str) and v.startswith("f") and v[1:].isdigit():
        return PrimeField(int(v[1:]))
    raise SchemaViolation(f"base must be 'q' or 'f<prime>', got {v!r}", path)


def _base_str(b):
    return "q" if isinstance(b, Rationals) else f"f{b.p}"


def parse_ring(doc, path="ring", *, top=True):
    if top:
        _require_keys(doc, ["schema", "kind"],
                      ["n", "factors", "base", "size", "dims", "nvars", "lambda", "inverted"],
                      path)
        if doc["schema"] != RING_SCHEMA:
            raise SchemaViolation(f"expected schema {RING_SCHEMA}", path)
    else:
        _require_keys(doc, ["kind"],
                      ["n", "factors", "base", "size", "dims", "nvars", "lambda", "inverted"],
                      path)
    kind = doc["kind"]
    try:
        if kind == "zero":
            return ZeroRing()
        if kind == "modular":
            return ModularRing(int(doc["n"]))
        if kind == "product":
            factors = [parse_ring(f, f"{path}.factors[{i}]", top=False)
                       for i, f in enumerate(doc["factors"])]
            return rg.product_ring(factors)
        if kind == "matrix":
            return MatrixRing(_parse_base(doc["base"], path), int(doc["size"]))
        if kind == "semisimple":
            return SemisimpleAlgebra(_parse_base(doc["base"], path),
                                     tuple(int(d) for d in doc["dims"]))
        if kind == "poly":
            return UnivariatePolyRing()
        if kind == "skew_laurent":
            nvars = int(doc["nvars"])
            lam = {}
            for triple in doc["lambda"]:
                if not isinstance(triple, (list, tuple)) or len(triple) != 3:
                    raise SchemaViolation("lambda entries are [i, j, value]", path)
                i, j, v = int(triple[0]), int(triple[1]), parse_rational(triple[2], path)
                lam[(i - 1, j - 1)] = v
            inverted = [int(i) - 1 for i in doc.get("inverted", [])]
            return skew_ring(nvars, lam, inverted)
    except SchemaViolation:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation(f"bad ring document: {exc}", path)
    raise SchemaViolation(f"unknown ring kind {kind!r}", path)


def ring_doc(r, *, top=True) -> dict:
    body = {}
    if isinstance(r, ZeroRing):
        body = {"kind": "zero"}
    elif isinstance(r, ModularRing):
        body = {"kind": "modular", "n": r.n}
    elif isinstance(r, ProductRing):
        body = {"kind": "product",
                "factors": [ring_doc(f, top=False) for f in r.factors]}
    elif isinstance(r, MatrixRing):
        body = {"kind": "matrix", "base": _base_str(r.base), "size": r.size}
    elif isinstance(r, SemisimpleAlgebra):
        body = {"kind": "semisimple", "base": _base_str(r.base), "dims": list(r.dims)}
    elif isinstance(r, UnivariatePolyRing):
        body = {"kind": "poly"}
    elif isinstance(r, SkewLaurentRing):
        body = {"kind": "skew_laurent", "nvars": r.nvars,
                "lambda": [[i + 1, j + 1, rational_str(v)] for (i, j), v in r.lam],
                "inverted": [i + 1 for i in sorted(r.inverted)]}
    else:
        raise ParseError(f"no document form for {r!r}")
    if top:
        return {"schema": RING_SCHEMA, **body}
    return body


def parse_element(r, doc, path="element") -> RingElement:
    try:
        if isinstance(r, ZeroRing):
            return rg.zero(r)
        if isinstance(r, ModularRing):
            return rg.element(r, int(doc))
        if isinstance(r, ProductRing):
            return RingElement(r, tuple(
                parse_element(f, d, f"{path}[{i}]").payload
                for i, (f, d) in enumerate(zip(r.factors, doc))))
        if isinstance(r, MatrixRing):
            return rg.matrix_element(r, [[parse_rational(v, path) for v in row] for row in doc])
        if isinstance(r, SemisimpleAlgebra):
            return rg.element(r, [[[parse_rational(v, path) for v in row] for row in block]
                                  for block in doc])
        if isinstance(r, UnivariatePolyRing):
            return rg.element(r, [parse_rational(v, path) for v in doc])
        if isinstance(r, SkewLaurentRing):
            terms = {}
            for pair in doc:
                exps, coeff = pair
                terms[tuple(int(e) for e in exps)] = parse_rational(coeff, path)
            return rg.element(r, terms)
    except SchemaViolation:
        raise
    except (TypeError, ValueError, IndexError) as exc:
        raise SchemaViolation(f"bad element: {exc}", path)
    raise SchemaViolation(f"no element form for {r!r}", path)


def element_doc(x: RingElement):
    r = x.owner
    if isinstance(r, ZeroRing):
        return 0
    if isinstance(r, ModularRing):
        return x.payload
    if isinstance(r, ProductRing):
        return [element_doc(RingElement(f, p)) for f, p in zip(r.factors, x.payload)]
    if isinstance(r, MatrixRing):
        return [[rational_str(v) for v in row] for row in x.payload]
    if isinstance(r, SemisimpleAlgebra):
        return [[[rational_str(v) for v in row] for row in block] for block in x.payload]
    if isinstance(r, UnivariatePolyRing):
        return [rational_str(v) for v in x.payload]
    if isinstance(r, SkewLaurentRing):
        return [[list(e), rational_str(c)] for e, c in x.payload]
    raise ParseError(f"no document form for elements of {r!r}")


def parse_morphism(doc, path="morphism") -> RingHom:
    _require_keys(doc, ["schema", "source", "target", "rule"], (), path)
    if doc["schema"] != MORPHISM_SCHEMA:
        raise SchemaViolation(f"expected schema {MORPHISM_SCHEMA}", path)
    source = parse_ring(doc["source"], f"{path}.source", top=False) \
        if "schema" not in doc["source"] else parse_ring(doc["source"], f"{path}.source")
    target = parse_ring(doc["target"], f"{path}.target", top=False) \
        if "schema" not in doc["target"] else parse_ring(doc["target"], f"{path}.target")
    rule = doc["rule"]
    _require_keys(rule, ["kind"], ["pairs", "m"], f"{path}.rule")
    kind = rule["kind"]
    if kind == "identity":
        return rg.hom_validate(RingHom(source, target, rg.IdentityRule()))
    if kind == "to_zero":
        return rg.hom_validate(RingHom(source, target, rg.ToZeroRule()))
    if kind == "canonical_quotient":
        if not (isinstance(source, ModularRing) and isinstance(target, ModularRing)):
            raise SchemaViolation("canonical_quotient needs modular rings", path)
        return rg.quotient_hom(source.n, target.n)
    if kind == "table":
        mapping = {}
        for i, pair in enumerate(rule["pairs"]):
            src = parse_element(source, pair[0], f"{path}.rule.pairs[{i}][0]")
            tgt = parse_element(target, pair[1], f"{path}.rule.pairs[{i}][1]")
            mapping[src] = tgt
        return rg.hom_validate(rg.table_hom(source, target, mapping))
    raise SchemaViolation(f"unknown rule kind {kind!r}", path)


def morphism_doc(h: RingHom) -> dict:
    if rg.is_finite(h.source):
        table = h.as_table()
        pairs = [[element_doc(RingElement(h.source, k)),
                  element_doc(RingElement(h.target, v))]
                 for k, v in sorted(table.items(), key=lambda kv: repr(kv[0]))]
        rule = {"kind": "table", "pairs": pairs}
    elif isinstance(h.rule, rg.IdentityRule):
        rule = {"kind": "identity"}
    elif isinstance(h.rule, rg.ToZeroRule):
        rule = {"kind": "to_zero"}
    else:
        raise ParseError(f"no document form for rule {h.rule!r}")
    return {"schema": MORPHISM_SCHEMA,
            "source": ring_doc(h.source, top=False),
            "target": ring_doc(h.target, top=False),
            "rule": rule}


def parse_graded_module(r, doc, path="module"):
    from .skewproj import presentation_from_rows
    _require_keys(doc, ["schema", "generators"], ["relations"], path)
    if doc["schema"] != MODULE_SCHEMA:
        raise SchemaViolation(f"expected schema {MODULE_SCHEMA}", path)
    degrees = []
    for i, g in enumerate(doc["generators"]):
        _require_keys(g, ["degree"], (), f"{path}.generators[{i}]")
        degrees.append(int(g["degree"]))
    rows = []
    for i, row in enumerate(doc.get("relations", [])):
        if len(row) != len(degrees):
            raise SchemaViolation("relation row width mismatch", f"{path}.relations[{i}]")
        parsed = []
        for j, entry in enumerate(row):
            terms = {}
            for pair in entry:
                exps, coeff = pair
                terms[tuple(int(e) for e in exps)] = parse_rational(
                    coeff, f"{path}.relations[{i}][{j}]")
            parsed.append(terms)
        rows.append(parsed)
    return presentation_from_rows(r, degrees, rows)


def parse_finite_module(r, doc, path="module"):
    from .glueqcoh import FiniteModule
    _require_keys(doc, ["schema", "orders"], (), path)
    if doc["schema"] != FINMOD_SCHEMA:
        raise SchemaViolation(f"expected schema {FINMOD_SCHEMA}", path)
    return FiniteModule(r, tuple(int(d) for d in doc["orders"]))


def parse_glue(doc, path="glue"):
    from .glueqcoh import GlueDatum
    from .localization import localize
    _require_keys(doc, ["schema", "pieces", "overlaps", "isos"], (), path)
    if doc["schema"] != GLUE_SCHEMA:
        raise SchemaViolation(f"expected schema {GLUE_SCHEMA}", path)
    pieces = tuple(parse_ring(p, f"{path}.pieces[{i}]", top=False)
                   for i, p in enumerate(doc["pieces"]))
    overlaps = {}
    for i, ov in enumerate(doc["overlaps"]):
        _require_keys(ov, ["from", "to", "subset"], (), f"{path}.overlaps[{i}]")
        a, b = int(ov["from"]), int(ov["to"])
        overlaps[(a, b)] = tuple(
            parse_element(pieces[a], e, f"{path}.overlaps[{i}].subset[{k}]")
            for k, e in enumerate(ov["subset"]))
    isos = {}
    for i, iso in enumerate(doc["isos"]):
        _require_keys(iso, ["from", "to", "rule"], (), f"{path}.isos[{i}]")
        a, b = int(iso["from"]), int(iso["to"])
        La = localize(pieces[a], overlaps[(a, b)])
        Lb = localize(pieces[b], overlaps[(b, a)])
        rule = iso["rule"]
        _require_keys(rule, ["kind"], ["pairs"], f"{path}.isos[{i}].rule")
        if rule["kind"] == "identity":
            isos[(a, b)] = rg.hom_validate(RingHom(La.result, Lb.result, rg.IdentityRule()))
        elif rule["kind"] == "table":
            mapping = {}
            for pair in rule["pairs"]:
                mapping[parse_element(La.result, pair[0])] = parse_element(Lb.result, pair[1])
            isos[(a, b)] = rg.hom_validate(rg.table_hom(La.result, Lb.result, mapping))
        else:
            raise SchemaViolation(f"unknown iso rule {rule['kind']!r}", path)
    return GlueDatum(pieces, overlaps, isos)


# ---------------------------------------------------------------------------
# DOT rendering

def semilattice_dot(lat) -> str:
    lines = ["digraph semilattice {", "  rankdir=BT;"]
    for i, cell in enumerate(lat.cells):
        lines.append(f'  n{i} [label="{cell.label}"];')
    for i, j in lat.hasse_edges():
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def space_dot(sp) -> str:
    """Specialization order of the sober points, generic on top."""
    lines = ["digraph space {", "  rankdir=BT;"]
    order = [(i, p) for i, p in enumerate(sp.sober.points)]
    for i, p in order:
        label = sp.lattice.cells[p.apex].label
        mark = " (generic)" if i == sp.generic else ""
        lines.append(f'  p{i} [label="{label}{mark}"];')
    for i, p in order:
        for j, q in order:
            if i == j or not p.members < q.members:
                continue
            if any(p.members < r.members < q.members for _, r in order):
                continue
            lines.append(f"  p{i} -> p{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def glued_dot(gl) -> str:
    lines = ["digraph glued {", "  rankdir=BT;"]
    for c in range(gl.n):
        members = ",".join(f"{a}:{p}" for a, p in sorted(gl.classes[c]))
        lines.append(f'  c{c} [label="{members}"];')
    for i in range(gl.n):
        for j in gl.leq[i]:
            if j == i:
                continue
            if any(k != i and k != j and k in gl.leq[i] and j in gl.leq[k]
                   for k in range(gl.n)):
                continue
            lines.append(f"  c{i} -> c{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
