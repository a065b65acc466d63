"""Skew Laurent Proj: charts, twists, global sections, and the unit map
from a graded module to the sections of its sheaf.

Everything is computed inside the ambient Laurent ring.  The degree-d
sections of the localization of a presented module at a variable set S are
modeled by monomial columns whose S-exponents reach down to a finite depth
(the box); genuine localized elements are the image of the depth-b space
inside the depth-(b+1) space, which kills phantom border classes of the
truncated colimit.  Global sections in degree d are the solutions of the
exact linear system forcing chart elements to agree in every pairwise
overlap; a stability re-run with a deeper box guards the truncation.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import skewpoly
from . import rings as rg
from .errors import (
    BoundInconclusive,
    BoxTooSmall,
    InhomogeneousRelation,
    OwnerMismatch,
    UnsupportedClass,
)
from .linalg import Echelon, kernel_basis, solve
from .rings import RingElement, SkewLaurentRing, UnivariatePolyRing, skew_ring


# ---------------------------------------------------------------------------
# elementary skew operations re-exported at the Proj surface

def skew_mul(p: RingElement, q: RingElement) -> RingElement:
    if p.owner != q.owner:
        raise OwnerMismatch(f"{p.owner!r} vs {q.owner!r}")
    return rg.mul(p.owner, p, q)


def twist_scalar(r: SkewLaurentRing, a, b) -> Fraction:
    return skewpoly.twist(rg.lam_map(r), tuple(a), tuple(b))


# ---------------------------------------------------------------------------
# graded presentations

@dataclass(frozen=True)
class GradedModulePresentation:
    """Generators with degrees and homogeneous relation rows (one skew
    polynomial per generator, padded with zero)."""

    ring: SkewLaurentRing
    gen_degrees: tuple
    relations: tuple   # rows; each row is a tuple of canonical skew payloads

    def __post_init__(self):
        if self.ring.inverted:
            raise UnsupportedClass("presentations live over the uninverted ring")
        for row in self.relations:
            assert len(row) == len(self.gen_degrees)
            degs = set()
            for t, payload in enumerate(row):
                terms = skewpoly.from_canonical(payload)
                if not terms:
                    continue
                if not skewpoly.is_homogeneous(terms):
                    raise InhomogeneousRelation(f"entry {t} is not homogeneous")
                degs.add(skewpoly.degree(terms) + self.gen_degrees[t])
            if len(degs) > 1:
                raise InhomogeneousRelation(f"row mixes degrees {sorted(degs)}")

    def row_degree(self, row) -> int:
        for t, payload in enumerate(row):
            terms = skewpoly.from_canonical(payload)
            if terms:
                return skewpoly.degree(terms) + self.gen_degrees[t]
        return None


def free_presentation(r: SkewLaurentRing, degrees=(0,)) -> GradedModulePresentation:
    return GradedModulePresentation(r, tuple(degrees), ())


def quotient_by_variables(r: SkewLaurentRing) -> GradedModulePresentation:
    """R modulo all the variables: the degree-zero simple module."""
    rows = []
    for i in range(r.nvars):
        rows.append((skewpoly.canonical(skewpoly.variable(r.nvars, i)),))
    return GradedModulePresentation(r, (0,), tuple(rows))


def presentation_from_rows(r: SkewLaurentRing, gen_degrees, rows) -> GradedModulePresentation:
    canon = tuple(
        tuple(skewpoly.canonical(skewpoly.from_canonical(entry) if not isinstance(entry, dict) else entry)
              for entry in row)
        for row in rows)
    return GradedModulePresentation(r, tuple(gen_degrees), canon)


# ---------------------------------------------------------------------------
# monomial cones and the localized graded pieces

def _cone(n, S, total, box):
    """Exponent vectors with the given sum; coordinates in S may reach -box."""
    lows = [(-box if i in S else 0) for i in range(n)]
    out = []

    def rec(i, acc, remaining):
        if i == n - 1:
            last = remaining
            if last >= lows[i]:
                out.append(tuple(acc + [last]))
            return
        lo = lows[i]
        hi = remaining - sum(lows[i + 1:])
        for v in range(lo, hi + 1):
            rec(i + 1, acc + [v], remaining - v)

    rec(0, [], total)
    return out


def graded_piece_basis(r: SkewLaurentRing, inverted, d: int, box: int):
    """Monomial exponents spanning the degree-d piece of the localization of
    the ring at the given variables, within the depth box."""
    return _cone(r.nvars, frozenset(inverted), d, box)


@dataclass
class RawSpace:
    """Degree-d monomial columns over a cone plus the relation echelon."""

    columns: tuple       # (generator index, exponent vector)
    index: dict
    ech: Echelon


def _raw_space(pres: GradedModulePresentation, S, d: int, box: int) -> RawSpace:
    n = pres.ring.nvars
    lam = rg.lam_map(pres.ring)
    columns = []
    for t, gdeg in enumerate(pres.gen_degrees):
        for a in _cone(n, S, d - gdeg, box):
            columns.append((t, a))
    index = {c: i for i, c in enumerate(columns)}
    ech = Echelon(len(columns))
    for row in pres.relations:
        D = pres.row_degree(row)
        if D is None:
            continue
        for b in _cone(n, S, d - D, box):
            vec = [Fraction(0)] * len(columns)
            touched = False
            for t, payload in enumerate(row):
                terms = skewpoly.from_canonical(payload)
                if not terms:
                    continue
                prod = skewpoly.mul(lam, {tuple(b): Fraction(1)}, terms)
                for e, c in prod.items():
                    key = (t, e)
                    if key not in index:
                        # the product fell outside the truncation; drop the row
                        touched = None
                        break
                    vec[index[key]] += c
                    touched = True
                if touched is None:
                    break
            if touched:
                ech.add(vec)
    return RawSpace(tuple(columns), index, ech)


@dataclass
class StablePiece:
    """Image of the depth-box space inside the deeper space at box + k_max."""

    raw: RawSpace        # the big space at box + k_max
    basis: tuple         # reduced, independent vectors over raw.columns

    @property
    def dim(self):
        return len(self.basis)


def _stable_piece(pres, S, d, box, k_max: int = 1) -> StablePiece:
    small_cols = []
    n = pres.ring.nvars
    for t, gdeg in enumerate(pres.gen_degrees):
        for a in _cone(n, S, d - gdeg, box):
            small_cols.append((t, a))
    big = _raw_space(pres, S, d, box + max(1, k_max))
    img = Echelon(len(big.columns))
    for c in small_cols:
        vec = [Fraction(0)] * len(big.columns)
        vec[big.index[c]] = Fraction(1)
        img.add(big.ech.reduce(vec))
    return StablePiece(big, tuple(tuple(row) for row in img.rows))


def _map_into(piece_vec, src: RawSpace, dst: RawSpace):
    out = [Fraction(0)] * len(dst.columns)
    for i, c in enumerate(src.columns):
        if piece_vec[i]:
            out[dst.index[c]] += piece_vec[i]
    return dst.ech.reduce(out)


# ---------------------------------------------------------------------------
# the Proj cover

@dataclass
class ProjSpace:
    ring: SkewLaurentRing
    chart_rings: tuple       # descriptor per chart (the degree-zero subring)
    chart_generators: tuple  # per chart: exponent vectors of its generators
    overlaps: tuple          # pairs (i, j), i < j
    triples: tuple           # triples (i, j, k), i < j < k
    psi_report: dict

    @property
    def n(self):
        return self.ring.nvars


def chart_ring_descriptor(r: SkewLaurentRing, i: int):
    """The degree-zero subring after inverting x_i, generated by x_k/x_i."""
    gens = []
    for k in range(r.nvars):
        if k == i:
            continue
        e = [0] * r.nvars
        e[k], e[i] = 1, -1
        gens.append(tuple(e))
    if len(gens) == 1:
        return UnivariatePolyRing(), tuple(gens)
    lam = rg.lam_map(r)
    table = {}
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            ua, ub = gens[a], gens[b]
            ab = skewpoly.mul(lam, {ua: Fraction(1)}, {ub: Fraction(1)})
            ba = skewpoly.mul(lam, {ub: Fraction(1)}, {ua: Fraction(1)})
            (e1, c1), = ab.items()
            (e2, c2), = ba.items()
            assert e1 == e2
            table[(a, b)] = c1 / c2
    return skew_ring(len(gens), table), tuple(gens)


def build_proj(r: SkewLaurentRing) -> ProjSpace:
    """Charts at each variable, pairwise overlaps, and the cocycle identities
    of the chart identifications, verified on monomial generators."""
    if r.inverted:
        raise UnsupportedClass("the Proj cover starts from the uninverted ring")
    n = r.nvars
    lam = rg.lam_map(r)
    charts, gens = [], []
    for i in range(n):
        desc, g = chart_ring_descriptor(r, i)
        charts.append(desc)
        gens.append(g)
    overlaps = tuple((i, j) for i in range(n) for j in range(i + 1, n))
    triples = tuple(
        (i, j, k) for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n))

    failures = []

    def mono(e):
        return {tuple(e): Fraction(1)}

    def mul(*ms):
        acc = skewpoly.one(n)
        for m in ms:
            acc = skewpoly.mul(lam, acc, m)
        return acc

    def uvec(k, i):
        e = [0] * n
        e[k], e[i] = 1, -1
        return tuple(e)

    # every generator of a chart re-expresses through any other chart's
    # generators across the overlap: x_k x_i^-1 = c * (x_k x_j^-1)(x_j x_i^-1)
    for (i, j) in overlaps:
        for k in range(n):
            if k in (i, j):
                continue
            lhs = mono(uvec(k, i))
            prod = mul(mono(uvec(k, j)), mono(uvec(j, i)))
            (e1, _c1), = lhs.items()
            (e2, _c2), = prod.items()
            if e1 != e2:
                failures.append({"overlap": (i, j), "generator": k})
        # the overlap generator itself inverts across the identification
        flip = mul(mono(uvec(j, i)), mono(uvec(i, j)))
        (e_flip, _), = flip.items()
        if any(e_flip):
            failures.append({"overlap": (i, j), "generator": "inverse"})

    # triple coherence: transitioning i -> j -> k in either association gives
    # the same normal form (the twist cocycle instantiated on generators)
    for (i, j, k) in triples:
        for v in range(n):
            if v in (i, k):
                continue
            a = mono(uvec(v, k))
            b = mono(uvec(k, j))
            c = mono(uvec(j, i))
            left = mul(mul(a, b), c)
            right = mul(a, mul(b, c))
            if left != right:
                failures.append({"triple": (i, j, k), "generator": v})
            direct = mono(uvec(v, i))
            (e_chain, _), = left.items()
            (e_direct, _), = direct.items()
            if e_chain != e_direct:
                failures.append({"triple": (i, j, k), "generator": v,
                                 "detail": "exponents drift"})

    report = {"status": "pass" if not failures else "fail", "failures": failures}
    return ProjSpace(r, tuple(charts), tuple(gens), overlaps, triples, report)


# ---------------------------------------------------------------------------
# quasicoherent data and twists over the Proj cover

@dataclass
class SkewQcohDatum:
    """Chart modules identified through the ambient localization; the
    cocycles are rational multiples of that canonical identification."""

    proj: ProjSpace
    presentation: GradedModulePresentation
    scalars: dict          # (i, j) -> Fraction, including both orders
    box: int = 2


def module_sheaf(X: ProjSpace, M: GradedModulePresentation) -> SkewQcohDatum:
    scalars = {}
    n = X.n
    for i in range(n):
        for j in range(n):
            if i != j:
                scalars[(i, j)] = Fraction(1)
    datum = SkewQcohDatum(X, M, scalars)
    rep = qcoh_cocycle_check(datum)
    assert rep["status"] == "pass"
    return datum


@dataclass
class TwistedSheaf:
    base: SkewQcohDatum
    n: int

    def chart_piece(self, i: int, box=None) -> StablePiece:
        box = box if box is not None else self.base.box
        return _stable_piece(self.base.presentation, frozenset({i}), self.n, box)


def twist(d: SkewQcohDatum, n: int) -> TwistedSheaf:
    """Chart pieces move to degree n; the cocycle scalars are unchanged
    because rational multiples commute with the degree shift."""
    tw = TwistedSheaf(d, n)
    rep = qcoh_cocycle_check(d, degree=n)
    assert rep["status"] == "pass"
    return tw


def qcoh_cocycle_check(d: SkewQcohDatum, degree: int = 0) -> dict:
    """Identity/inverse/triple laws for the scalars, plus existence of the
    canonical identification: chart pieces span the same subspace of every
    pairwise overlap piece."""
    failures = []
    X, M = d.proj, d.presentation
    n = X.n
    for i in range(n):
        if d.scalars.get((i, i), Fraction(1)) != 1:
            failures.append({"condition": "identity", "chart": i})
    for (i, j) in X.overlaps:
        cij = d.scalars.get((i, j))
        cji = d.scalars.get((j, i))
        if cij is None or cji is None or cij * cji != 1:
            failures.append({"condition": "inverse", "pair": (i, j)})
    for (i, j, k) in X.triples:
        if d.scalars[(i, j)] * d.scalars[(j, k)] != d.scalars[(i, k)]:
            failures.append({"condition": "triple", "triple": (i, j, k)})

    for (i, j) in X.overlaps:
        pi = _stable_piece(M, frozenset({i}), degree, d.box)
        pj = _stable_piece(M, frozenset({j}), degree, d.box)
        ov = _stable_piece(M, frozenset({i, j}), degree, d.box)
        span_i = _base_changed_span(M, pi, ov, frozenset({i, j}), d.box)
        span_j = _base_changed_span(M, pj, ov, frozenset({i, j}), d.box)
        # both sides must generate the stable overlap window (the two spans
        # also carry truncation fringe beyond the window, which may differ)
        covers = all(span_i.contains(list(r)) for r in ov.basis) and all(
            span_j.contains(list(r)) for r in ov.basis)
        if not covers:
            failures.append({"condition": "chart_identification", "pair": (i, j)})
    return {"status": "pass" if not failures else "fail", "failures": failures}


def _base_changed_span(M, piece: StablePiece, ov: StablePiece, S, box) -> Echelon:
    """Span of the chart piece under degree-zero overlap multipliers, inside
    the overlap space (products leaving the truncation are skipped; the
    reference comparison keeps that honest)."""
    lam = rg.lam_map(M.ring)
    n = M.ring.nvars
    span = Echelon(len(ov.raw.columns))
    multipliers = _cone(n, S, 0, box)
    for v in piece.basis:
        for w in multipliers:
            out = [Fraction(0)] * len(ov.raw.columns)
            ok = True
            for ci, c in enumerate(v):
                if not c:
                    continue
                t, e = piece.raw.columns[ci]
                prod = skewpoly.mul(lam, {tuple(w): Fraction(1)}, {e: Fraction(1)})
                (e2, tw), = prod.items()
                key = (t, e2)
                if key not in ov.raw.index:
                    ok = False
                    break
                out[ov.raw.index[key]] += c * tw
            if ok:
                span.add(ov.raw.ech.reduce(out))
    return span


# ---------------------------------------------------------------------------
# global sections

@dataclass
class SectionSpace:
    """Solutions of the overlap-compatibility system in one degree."""

    degree: int
    box: int
    chart_pieces: tuple
    chart_dims: tuple
    offsets: tuple
    vectors: tuple        # kernel basis: concatenated chart coefficients

    @property
    def dim(self):
        return len(self.vectors)


def _sections_once(M: GradedModulePresentation, nvars, d, box, k_max=1) -> SectionSpace:
    pieces = [_stable_piece(M, frozenset({i}), d, box, k_max) for i in range(nvars)]
    dims = [p.dim for p in pieces]
    offsets = [0]
    for k in dims:
        offsets.append(offsets[-1] + k)
    N = offsets[-1]
    rows = []
    for i in range(nvars):
        for j in range(i + 1, nvars):
            ov = _raw_space(M, frozenset({i, j}), d, box + max(1, k_max))
            mapped_i = [_map_into(v, pieces[i].raw, ov) for v in pieces[i].basis]
            mapped_j = [_map_into(v, pieces[j].raw, ov) for v in pieces[j].basis]
            for co in range(len(ov.columns)):
                row = [Fraction(0)] * N
                nonzero = False
                for a, mv in enumerate(mapped_i):
                    if mv[co]:
                        row[offsets[i] + a] = mv[co]
                        nonzero = True
                for b, mv in enumerate(mapped_j):
                    if mv[co]:
                        row[offsets[j] + b] = -mv[co]
                        nonzero = True
                if nonzero:
                    rows.append(row)
    vectors = kernel_basis(rows, N)
    return SectionSpace(d, box, tuple(pieces), tuple(dims), tuple(offsets),
                        tuple(tuple(v) for v in vectors))


def gamma(X: ProjSpace, M: GradedModulePresentation, window, box: int = 2,
          k_max: int = 1, check_stability: bool = True) -> dict:
    """Per-degree dimensions of the global sections over the window.

    `box` bounds the negative-exponent depth of the truncation; `k_max`
    is the saturation depth (honest classes are images of the depth-box
    space under k_max more steps).  The run is repeated with the box
    enlarged by one; a drift in any reported dimension raises BoxTooSmall.
    """
    lo, hi = window
    dims = {}
    spaces = {}
    for d in range(lo, hi + 1):
        s = _sections_once(M, X.n, d, box, k_max)
        spaces[d] = s
        dims[d] = s.dim
        if check_stability:
            again = _sections_once(M, X.n, d, box + 1, k_max)
            if again.dim != s.dim:
                raise BoxTooSmall(
                    f"degree {d}: dimension moved {s.dim} -> {again.dim}")
    return {"window": (lo, hi), "box": box, "k_max": k_max,
            "dims": dims, "spaces": spaces}


# ---------------------------------------------------------------------------
# the unit map from the module to its sections

def _ambient_space(M: GradedModulePresentation, d: int) -> RawSpace:
    """The exact degree-d piece of the module itself (no truncation involved)."""
    return _raw_space(M, frozenset(), d, 0)


def _ambient_basis(space: RawSpace):
    return [i for i in range(len(space.columns)) if i not in space.ech.pivots]


def _gamma_image(M, amb: RawSpace, col: int, sec: SectionSpace):
    """Coordinates of the section induced by an ambient basis column."""
    coords = []
    for piece in sec.chart_pieces:
        vec = [Fraction(0)] * len(piece.raw.columns)
        vec[piece.raw.index[amb.columns[col]]] = Fraction(1)
        red = piece.raw.ech.reduce(vec)
        sol = solve(list(piece.basis), len(piece.raw.columns), red)
        assert sol is not None, "an honest module element must be a stable section"
        coords.extend(sol)
    return coords


def serre_unit(X: ProjSpace, M: GradedModulePresentation, window,
               box: int = 2, k_max: int = 1, torsion_bound: int = 3) -> dict:
    """Degree-wise kernel/cokernel data of the map module -> sections.

    Kernel elements are certified annihilated by high powers of every
    variable; cokernel representatives are pushed up by variable powers
    until they land in the image (within the window), else reported
    inconclusive.
    """
    lo, hi = window
    g = gamma(X, M, window, box, k_max)
    out = {"window": (lo, hi), "box": box, "k_max": k_max,
           "torsion_bound": torsion_bound, "degrees": {}}
    for d in range(lo, hi + 1):
        amb = _ambient_space(M, d)
        basis_cols = _ambient_basis(amb)
        sec = g["spaces"][d]
        images = [_gamma_image(M, amb, c, sec) for c in basis_cols]
        img_ech = Echelon(sum(sec.chart_dims))
        for v in images:
            img_ech.add(v)
        injective = img_ech.rank == len(basis_cols)
        surjective = img_ech.rank == sec.dim

        kernel_elts = []
        if not injective:
            coeff_rows = [[images[m][c] for m in range(len(basis_cols))]
                          for c in range(sum(sec.chart_dims))]
            for cv in kernel_basis(coeff_rows, len(basis_cols)):
                kernel_elts.append(_columns_to_element(M, amb, basis_cols, cv, d))

        kernel_torsion = all(
            is_torsion(M, elt, torsion_bound) for elt in kernel_elts) if kernel_elts else True

        cokernel_dim = sec.dim - img_ech.rank
        cok_torsion = None
        if cokernel_dim:
            cok_torsion = _cokernel_torsion(M, X, g, d, img_ech, window, box)

        out["degrees"][d] = {
            "module_dim": len(basis_cols),
            "sections_dim": sec.dim,
            "injective": injective,
            "surjective": surjective,
            "kernel_dim": len(basis_cols) - img_ech.rank if not injective else 0,
            "kernel_torsion": kernel_torsion,
            "cokernel_dim": cokernel_dim,
            "cokernel_torsion": cok_torsion,
        }
    return out


def _columns_to_element(M, amb: RawSpace, basis_cols, coeffs, d):
    """A kernel coefficient vector as a per-generator skew polynomial."""
    polys = [dict() for _ in M.gen_degrees]
    for c, col in zip(coeffs, basis_cols):
        if c:
            t, e = amb.columns[col]
            polys[t][e] = polys[t].get(e, Fraction(0)) + c
    return {"degree": d, "components": tuple(skewpoly.canonical(p) for p in polys)}


def element_from_payloads(M: GradedModulePresentation, payloads, degree: int):
    return {"degree": degree, "components": tuple(
        skewpoly.canonical(skewpoly.from_canonical(p) if not isinstance(p, dict) else p)
        for p in payloads)}


def _reduce_element(M: GradedModulePresentation, elt) -> list:
    """The ambient-space coordinates of an element, reduced by the relations."""
    d = elt["degree"]
    amb = _ambient_space(M, d)
    vec = [Fraction(0)] * len(amb.columns)
    for t, payload in enumerate(elt["components"]):
        for e, c in skewpoly.from_canonical(payload).items():
            vec[amb.index[(t, e)]] += c
    return amb.ech.reduce(vec)


def is_torsion(M: GradedModulePresentation, elt, bound: int) -> bool:
    """True when x_i^bound kills the element for every i.

    If some power survives, the element's class in the localization at that
    variable decides: nonzero image certifies non-torsion; a zero image
    with surviving powers means the bound was too small.
    """
    lam = rg.lam_map(M.ring)
    n = M.ring.nvars
    d = elt["degree"]
    all_killed = True
    survivors = []
    for i in range(n):
        power = [0] * n
        power[i] = bound
        shifted = []
        for payload in elt["components"]:
            terms = skewpoly.from_canonical(payload)
            shifted.append(skewpoly.canonical(
                skewpoly.mul(lam, {tuple(power): Fraction(1)}, terms)))
        moved = {"degree": d + bound, "components": tuple(shifted)}
        if any(c != 0 for c in _reduce_element(M, moved)):
            all_killed = False
            survivors.append(i)
    if all_killed:
        return True
    for i in survivors:
        piece = _stable_piece(M, frozenset({i}), d, 2)
        vec = [Fraction(0)] * len(piece.raw.columns)
        for t, payload in enumerate(elt["components"]):
            for e, c in skewpoly.from_canonical(payload).items():
                vec[piece.raw.index[(t, e)]] += c
        red = piece.raw.ech.reduce(vec)
        if any(c != 0 for c in red):
            return False
    raise BoundInconclusive(
        f"powers up to {bound} neither kill the element nor show it alive")


def _cokernel_torsion(M, X, g, d, img_ech, window, box):
    """Push cokernel representatives up by variable powers into the image."""
    lo, hi = window
    sec = g["spaces"][d]
    reps = []
    probe = Echelon(sum(sec.chart_dims))
    for row in img_ech.rows:
        probe.add(list(row))
    for v in sec.vectors:
        if probe.add(list(v)):
            reps.append(v)
    for rep_vec in reps:
        certified = False
        for k in range(1, hi - d + 1):
            target_deg = d + k
            if target_deg > hi:
                break
            amb_t = _ambient_space(M, target_deg)
            basis_t = _ambient_basis(amb_t)
            sec_t = g["spaces"][target_deg]
            image_t = Echelon(sum(sec_t.chart_dims))
            for c in basis_t:
                image_t.add(_gamma_image(M, amb_t, c, sec_t))
            ok = True
            for i in range(M.ring.nvars):
                moved = _multiply_section(M, sec, rep_vec, i, k, sec_t)
                if moved is None or not image_t.contains(moved):
                    ok = False
                    break
            if ok:
                certified = True
                break
        if not certified:
            return None
    return True


def _multiply_section(M, sec: SectionSpace, vec, i, k, sec_target):
    """x_i^k times a section, re-expressed in the target degree's coordinates."""
    lam = rg.lam_map(M.ring)
    n = M.ring.nvars
    power = [0] * n
    power[i] = k
    coords = []
    pos = 0
    for piece, piece_t in zip(sec.chart_pieces, sec_target.chart_pieces):
        dim = len(piece.basis)
        chart_vec = [Fraction(0)] * len(piece.raw.columns)
        for a in range(dim):
            c = vec[pos + a]
            if c:
                for ci, bv in enumerate(piece.basis[a]):
                    if bv:
                        chart_vec[ci] += c * bv
        pos += dim
        lifted = [Fraction(0)] * len(piece_t.raw.columns)
        for ci, c in enumerate(chart_vec):
            if not c:
                continue
            t, e = piece.raw.columns[ci]
            prod = skewpoly.mul(lam, {tuple(power): Fraction(1)}, {e: Fraction(1)})
            (e2, tw), = prod.items()
            key = (t, e2)
            if key not in piece_t.raw.index:
                return None
            lifted[piece_t.raw.index[key]] += c * tw
        red = piece_t.raw.ech.reduce(lifted)
        sol = solve(list(piece_t.basis), len(piece_t.raw.columns), red)
        if sol is None:
            return None
        coords.extend(sol)
    return coords
