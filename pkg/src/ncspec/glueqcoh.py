"""Ore certification, gluing of the sober ringed spaces, and quasicoherent
module data at desk scale.

Finite modules over Z/n are sums of cyclic groups with the integer action;
base change along a ring map into a product of cyclic rings is computed as
the quotient of the free table on the module by the bilinearity relations,
one cyclic factor at a time.  Cocycle data for glued spaces are plain
lookup tables checked against the identity, inverse, triple, and
semilinearity conditions.
"""

from dataclasses import dataclass
from itertools import product as iproduct

from . import rings as rg
from .errors import (
    ClosureBoundExceeded,
    CocycleViolation,
    NotOre,
    OreConditionFails,
    UnsupportedClass,
)
from .localization import Localization, connecting_map, localize
from .rings import (
    ModularRing,
    ProductRing,
    RingElement,
    RingHom,
    SkewLaurentRing,
    ZeroRing,
    hom_validate,
)
from .sheafspec import NCSpecSpace, ncspec, ncspec_morphism
from . import skewpoly


# ---------------------------------------------------------------------------
# Ore certification

@dataclass(frozen=True)
class OreCertificate:
    ring: object
    subset: tuple
    closure: tuple            # the multiplicative closure explored (finite case)
    bound: int
    side: str                 # 'left' | 'right'
    witnesses: tuple          # ((r, s, r_prime, s_prime), ...)
    degenerate: bool          # zero crept into the closure
    structural: bool = False  # skew monomial case: witnesses come from the twist law


def _mult_closure(r, E, bound):
    """Words in E of length <= bound plus 1; raises if still growing at the bound."""
    closure = {rg.one(r)}
    layer = {rg.one(r)}
    for _ in range(bound):
        nxt = {x * e for x in layer for e in E} - closure
        if not nxt:
            return closure
        closure |= nxt
        layer = nxt
    if {x * e for x in layer for e in E} - closure:
        raise ClosureBoundExceeded(f"closure still growing at word length {bound}")
    return closure


def certify_ore(r, E, bound: int, side: str = "right") -> OreCertificate:
    """Search Ore witnesses: right means r*s' = s*r' with s' in the closure."""
    assert side in ("left", "right")
    E = tuple(E)
    if isinstance(r, SkewLaurentRing):
        return _certify_ore_skew(r, E, bound, side)
    if not rg.is_finite(r):
        raise UnsupportedClass(f"need a finite ring or skew monomials, got {r!r}")
    closure = _mult_closure(r, E, bound)
    sample = rg.enumerate_elements(r)
    witnesses = []
    for a in sample:
        for s in sorted(closure, key=repr):
            found = None
            for s2 in sorted(closure, key=repr):
                for r2 in sample:
                    if side == "right" and a * s2 == s * r2:
                        found = (r2, s2)
                        break
                    if side == "left" and s2 * a == r2 * s:
                        found = (r2, s2)
                        break
                if found:
                    break
            if found is None:
                raise OreConditionFails(
                    f"no witnesses for ({a!r}, {s!r})", witness=(a, s))
            witnesses.append((a, s, found[0], found[1]))
    return OreCertificate(
        r, E, tuple(sorted(closure, key=repr)), bound, side, tuple(witnesses),
        degenerate=rg.zero(r) in closure)


def _certify_ore_skew(r, E, bound, side) -> OreCertificate:
    """Monomials quasi-commute, so witnesses are twist-scaled monomials."""
    lam = rg.lam_map(r)
    mono = []
    for a in E:
        terms = skewpoly.from_canonical(a.payload)
        if len(terms) != 1:
            raise OreConditionFails(f"{a!r} is not a monomial", witness=(a,))
        mono.append(next(iter(terms)))
    witnesses = []
    sample = [rg.element(r, skewpoly.variable(r.nvars, i)) for i in range(r.nvars)]
    for x in sample:
        (b, cb), = skewpoly.from_canonical(x.payload).items()
        for a_exp in mono:
            s = rg.element(r, {a_exp: 1})
            t_ba = skewpoly.twist(lam, b, a_exp)
            t_ab = skewpoly.twist(lam, a_exp, b)
            if side == "right":
                r2 = rg.element(r, {b: cb * t_ba / t_ab})
                s2 = s
                assert x * s2 == s * r2
            else:
                r2 = rg.element(r, {b: cb * t_ab / t_ba})
                s2 = s
                assert s2 * x == r2 * s
            witnesses.append((x, s, r2, s2))
    return OreCertificate(r, E, (), bound, side, tuple(witnesses),
                          degenerate=False, structural=True)


# ---------------------------------------------------------------------------
# finite modules and base change

@dataclass(frozen=True)
class FiniteModule:
    """A finite module over Z/n: a sum of cyclic groups Z/d_i with d_i | n."""

    ring: ModularRing
    orders: tuple

    def __post_init__(self):
        assert isinstance(self.ring, ModularRing)
        for d in self.orders:
            assert d >= 2 and self.ring.n % d == 0, "cyclic orders must divide the modulus"

    def elements(self):
        if not self.orders:
            return [()]
        return [tuple(t) for t in iproduct(*[range(d) for d in self.orders])]

    def zero(self):
        return (0,) * len(self.orders)

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def neg(self, x):
        return tuple((-a) % d for a, d in zip(x, self.orders))

    def smul(self, k: int, x):
        return tuple((k * a) % d for a, d in zip(x, self.orders))

    def act(self, r: RingElement, x):
        assert r.owner == self.ring
        return self.smul(r.payload, x)

    def size(self):
        out = 1
        for d in self.orders:
            out *= d
        return out

    def check_axioms(self):
        """Exhaustive module laws; cheap because the carriers are tiny."""
        scalars = rg.enumerate_elements(self.ring)
        elems = self.elements()
        for m in elems:
            assert self.act(rg.one(self.ring), m) == m
        for r in scalars:
            for s in scalars:
                for m in elems:
                    assert self.act(r * s, m) == self.act(r, self.act(s, m))
                    assert self.act(r + s, m) == self.add(self.act(r, m), self.act(s, m))
        return True


def free_module(r: ModularRing) -> FiniteModule:
    return FiniteModule(r, (r.n,)) if r.n > 1 else FiniteModule(r, ())


@dataclass(frozen=True)
class ModuleHom:
    source: FiniteModule
    target: FiniteModule
    images: tuple   # image of each cyclic generator of the source

    def __post_init__(self):
        for d, img in zip(self.source.orders, self.images):
            assert self.target.smul(d, img) == self.target.zero(), \
                "generator image must be killed by the generator's order"

    def __call__(self, x):
        acc = self.target.zero()
        for a, img in zip(x, self.images):
            acc = self.target.add(acc, self.target.smul(a, img))
        return acc


def module_homs(M: FiniteModule, N: FiniteModule):
    """All module maps M -> N (the action is integral, so additive = linear)."""
    pools = []
    for d in M.orders:
        pools.append([x for x in N.elements() if N.smul(d, x) == N.zero()])
    return [ModuleHom(M, N, combo) for combo in iproduct(*pools)]


def _subgroup_closure(M: FiniteModule, gens):
    acc = {M.zero()} | set(gens)
    changed = True
    while changed:
        changed = False
        for a in list(acc):
            for b in list(acc):
                s = M.add(a, b)
                if s not in acc:
                    acc.add(s)
                    changed = True
    return frozenset(acc)


@dataclass(frozen=True)
class QuotientPart:
    """One cyclic-factor slice of a base-changed module: M / N_j."""

    modulus: int
    module: FiniteModule
    subgroup: frozenset
    coset_of: tuple      # mapping element -> coset index, as sorted pairs
    size: int

    def coset(self, x) -> int:
        return dict(self.coset_of)[x]


def _quotient_part(M: FiniteModule, modulus: int, scalar_of) -> QuotientPart:
    """M modulo the relations r*m = theta_j(r)*m for the given component."""
    gens = set()
    for r_val in range(M.ring.n):
        t = scalar_of(r_val)
        for m in M.elements():
            gens.add(M.add(M.smul(r_val, m), M.neg(M.smul(t, m))))
    N = _subgroup_closure(M, gens)
    cosets = {}
    index = {}
    for m in M.elements():
        cl = frozenset(M.add(m, w) for w in N)
        if cl not in index:
            index[cl] = len(index)
        cosets[m] = index[cl]
    return QuotientPart(modulus, M, N, tuple(sorted(cosets.items())), len(index))


@dataclass(frozen=True)
class TensorModule:
    """Base change of a finite module along a hom into a product of cyclics."""

    hom: RingHom          # theta: M.ring -> product of cyclic rings (or zero)
    module: FiniteModule
    parts: tuple          # QuotientPart per cyclic factor of the target

    def zero(self):
        return (0,) * len(self.parts)

    def elements(self):
        if not self.parts:
            return [()]
        return [tuple(t) for t in iproduct(*[range(p.size) for p in self.parts])]

    def pure(self, l: RingElement, m) -> tuple:
        """The class of the pure tensor l (x) m."""
        comps = _cyclic_components(l)
        return tuple(p.coset(p.module.smul(c, m)) for p, c in zip(self.parts, comps))

    def size(self):
        out = 1
        for p in self.parts:
            out *= p.size
        return out

    def add(self, x, y):
        out = []
        for p, a, b in zip(self.parts, x, y):
            ra = _rep(p, a)
            rb = _rep(p, b)
            out.append(p.coset(p.module.add(ra, rb)))
        return tuple(out)

    def act(self, t: RingElement, x):
        comps = _cyclic_components(t)
        return tuple(p.coset(p.module.smul(c, _rep(p, a)))
                     for p, c, a in zip(self.parts, comps, x))


def _rep(p: QuotientPart, idx: int):
    for m, i in p.coset_of:
        if i == idx:
            return m
    raise KeyError(idx)


def _cyclic_components(l: RingElement):
    r = l.owner
    if isinstance(r, ModularRing):
        return (l.payload,)
    if isinstance(r, ProductRing):
        return tuple(l.payload)
    if isinstance(r, ZeroRing):
        return ()
    raise UnsupportedClass(f"{r!r} is not a product of cyclic rings")


def _cyclic_moduli(r):
    if isinstance(r, ModularRing):
        return (r.n,)
    if isinstance(r, ProductRing):
        return tuple(f.n for f in r.factors)
    if isinstance(r, ZeroRing):
        return ()
    raise UnsupportedClass(f"{r!r} is not a product of cyclic rings")


def tensor_module(theta: RingHom, M: FiniteModule) -> TensorModule:
    """TensorModule for theta: R -> T with T a product of cyclic rings."""
    hom_validate(theta)
    assert theta.source == M.ring
    moduli = _cyclic_moduli(theta.target)
    parts = []
    for j, mj in enumerate(moduli):
        def scalar_of(r_val, j=j):
            img = theta(RingElement(M.ring, r_val % M.ring.n))
            return _cyclic_components(img)[j]
        parts.append(_quotient_part(M, mj, scalar_of))
    return TensorModule(theta, M, tuple(parts))


def tensor_restriction(T1: TensorModule, T2: TensorModule, p: RingHom):
    """The map p (x) 1 between base changes along theta and p∘theta.

    Each target factor is fed by exactly the source factor whose idempotent
    p keeps; returns a dict on elements.
    """
    src_moduli = _cyclic_moduli(T1.hom.target)
    tgt_moduli = _cyclic_moduli(T2.hom.target)
    feeder = []
    for jj in range(len(tgt_moduli)):
        hits = []
        for par in range(len(src_moduli)):
            e_par = _idempotent_at(T1.hom.target, par)
            if _cyclic_components(p(e_par))[jj] % tgt_moduli[jj] == 1 % tgt_moduli[jj]:
                hits.append(par)
        assert len(hits) == 1, "each target factor must come from one source factor"
        feeder.append(hits[0])
    out = {}
    for x in T1.elements():
        img = []
        for jj, par in enumerate(feeder):
            rep = _rep(T1.parts[par], x[par])
            img.append(T2.parts[jj].coset(rep))
        out[x] = tuple(img)
    return out


def _idempotent_at(r, index) -> RingElement:
    if isinstance(r, ModularRing):
        assert index == 0
        return rg.one(r)
    payload = tuple(1 if i == index else 0 for i in range(len(r.factors)))
    return RingElement(r, payload)


def tensor_induced(T1: TensorModule, T2: TensorModule, f: ModuleHom):
    """1 (x) f for a module hom between the underlying modules."""
    assert len(T1.parts) == len(T2.parts)
    out = {}
    for x in T1.elements():
        img = []
        for p1, p2, a in zip(T1.parts, T2.parts, x):
            img.append(p2.coset(f(_rep(p1, a))))
        out[x] = tuple(img)
    return out


# ---------------------------------------------------------------------------
# module sheaves on an affine space

@dataclass
class ModuleSheaf:
    """The sheaf of base-changed modules on the basic opens of an affine space."""

    space: NCSpecSpace
    module: FiniteModule
    stalks: tuple        # TensorModule per lattice cell

    def restriction_map(self, i: int, j: int):
        p = self.space.sheaf.restriction(i, j)
        return tensor_restriction(self.stalks[i], self.stalks[j], p)


def tilde_module(r, M) -> "ModuleSheaf":
    """Sections over the basic open at a cell are loc (x) M.

    Skew Laurent rings hand off to the graded chart construction; finite
    cyclic rings get the cell-by-cell base change below.
    """
    if isinstance(r, SkewLaurentRing):
        from .skewproj import build_proj, module_sheaf
        return module_sheaf(build_proj(r), M)
    if not isinstance(r, ModularRing):
        raise UnsupportedClass("module sheaves are built over Z/n here")
    M.check_axioms()
    sp = ncspec(r)
    stalks = []
    for cell in sp.lattice.cells:
        stalks.append(tensor_module(cell.localized.insertion, M))
    sheaf = ModuleSheaf(sp, M, tuple(stalks))
    # presheaf laws on the module level
    lat = sp.lattice
    for i in range(lat.n):
        ident = sheaf.restriction_map(i, i)
        assert all(ident[x] == x for x in sheaf.stalks[i].elements())
        for j in range(lat.n):
            if not lat.leq(i, j):
                continue
            for k in range(lat.n):
                if not lat.leq(j, k):
                    continue
                rij = sheaf.restriction_map(i, j)
                rjk = sheaf.restriction_map(j, k)
                rik = sheaf.restriction_map(i, k)
                assert all(rjk[rij[x]] == rik[x] for x in sheaf.stalks[i].elements())
    return sheaf


def global_sections_module(sheaf: ModuleSheaf) -> TensorModule:
    """Sections over the whole space: the bottom cell's base change."""
    return sheaf.stalks[sheaf.space.lattice.bottom]


def qcoh_roundtrip(r, M: FiniteModule) -> dict:
    """Gamma of the sheaf of M is M, and base-changing Gamma rebuilds the sheaf."""
    sheaf = tilde_module(r, M)
    bottom = global_sections_module(sheaf)
    gamma_iso = bottom.size() == M.size() and all(
        bottom.pure(rg.one(r), m) != bottom.pure(rg.one(r), m2)
        for m in M.elements() for m2 in M.elements() if m != m2
    )
    rebuild_ok = True
    for i, cell in enumerate(sheaf.space.lattice.cells):
        T = sheaf.stalks[i]
        again = tensor_module(cell.localized.insertion, M)
        if T.size() != again.size():
            rebuild_ok = False
    return {
        "status": "pass" if gamma_iso and rebuild_ok else "fail",
        "global_sections_size": bottom.size(),
        "module_size": M.size(),
        "gamma_isomorphism": gamma_iso,
        "reconstruction": rebuild_ok,
    }


def tensor_sequence_report(theta: RingHom, f: ModuleHom, g: ModuleHom) -> dict:
    """Exactness data of M' -> M -> M'' after base change along theta.

    Reports injectivity of the first induced map, exactness in the middle,
    and surjectivity of the second.
    """
    assert f.target == g.source
    TA = tensor_module(theta, f.source)
    TB = tensor_module(theta, f.target)
    TC = tensor_module(theta, g.target)
    tf = tensor_induced(TA, TB, f)
    tg = tensor_induced(TB, TC, g)
    image_f = {tf[x] for x in TA.elements()}
    kernel_g = {x for x in TB.elements() if tg[x] == TC.zero()}
    return {
        "left_injective": len(image_f) == TA.size(),
        "middle_exact": image_f == kernel_g,
        "right_surjective": len({tg[x] for x in TB.elements()}) == TC.size(),
        "sizes": (TA.size(), TB.size(), TC.size()),
    }


# ---------------------------------------------------------------------------
# gluing along localization isomorphisms

@dataclass
class ChartIso:
    """The basic open at a subset against the space of the localization."""

    ambient: NCSpecSpace
    localization: Localization
    chart: NCSpecSpace
    point_map: dict        # ambient sober point (inside the open) -> chart point
    report: dict


def ore_chart_iso(r, E, certificate: OreCertificate = None) -> ChartIso:
    """Identify the basic open at E with the whole space of loc(r, E).

    The point map sends the cell of F to the cell of the image of F; for
    finite lattices bijectivity and the section-ring isomorphisms are
    verified cell by cell.
    """
    E = tuple(E)
    if certificate is not None and certificate.subset != E:
        raise NotOre("certificate does not match the subset")
    L = localize(r, E)
    if isinstance(r, SkewLaurentRing):
        report = {"status": "pass", "symbolic": True,
                  "structural_certificate": certificate.structural if certificate else False}
        return ChartIso(None, L, None, {}, report)
    sp = ncspec(r)
    spL = ncspec(L.result)
    lat, latL = sp.lattice, spL.lattice
    cE = lat.cell_of_subset(E)
    inside = sorted(sp.space.up[cE])

    cell_map = {}
    for i in inside:
        image = tuple(L.insertion(a) for a in lat.cells[i].representative)
        cell_map[i] = latL.cell_of_subset(image)
    bijective = sorted(set(cell_map.values())) == list(range(latL.n)) \
        and len(set(cell_map.values())) == len(cell_map)

    # ring-level comparison on every chart cell: the induced map of the
    # insertion must be an isomorphism onto the chart's assigned sections
    from .localization import induced_map
    rings_ok = True
    for i in inside:
        ind = induced_map(L.insertion, lat.cells[i].representative)
        tgt = spL.sheaf.assignment[cell_map[i]]
        if ind.target != tgt:
            rings_ok = False
            continue
        if rg.is_finite(ind.source):
            img = {ind(x) for x in rg.enumerate_elements(ind.source)}
            if len(img) != rg.cardinality(ind.source) or len(img) != rg.cardinality(tgt):
                rings_ok = False

    # triangle: inclusion of the open equals the induced morphism after the iso
    triangle_ok = True
    alpha_hat = ncspec_morphism(L.insertion)  # chart space -> ambient space
    point_map = {}
    for i in inside:
        pt_ambient = next(
            k for k, C in enumerate(sp.sober.points) if C.apex == i)
        pt_chart = next(
            k for k, C in enumerate(spL.sober.points) if C.apex == cell_map[i])
        point_map[pt_ambient] = pt_chart
        if alpha_hat.point_map[pt_chart] != pt_ambient:
            triangle_ok = False

    status = "pass" if bijective and rings_ok and triangle_ok else "fail"
    report = {"status": status, "bijective": bijective,
              "section_isos": rings_ok, "triangle": triangle_ok,
              "chart_points": latL.n, "open_points": len(inside)}
    return ChartIso(sp, L, spL, point_map, report)


@dataclass
class GlueDatum:
    """Pieces with overlap subsets and ring isomorphisms between the
    localizations, in the style of gluing along Ore charts."""

    pieces: tuple            # ring descriptors
    overlaps: dict           # (a, b) -> tuple of elements of ring a
    ring_isos: dict          # (a, b) -> RingHom loc(R_a, E_ab) -> loc(R_b, E_ba)


@dataclass
class GluedSpace:
    pieces: tuple            # NCSpecSpace per index
    classes: tuple           # frozensets of (piece index, point index)
    leq: tuple               # leq[c] = frozenset of classes above c
    sections: tuple          # descriptor per class (basic open at that class)
    embeddings: tuple        # per piece: dict point -> class index

    @property
    def n(self):
        return len(self.classes)


def glue(d: GlueDatum) -> GluedSpace:
    """Quotient of the disjoint union by the overlap identifications."""
    k = len(d.pieces)
    spaces = [ncspec(p) for p in d.pieces]
    locs = {
        (a, b): localize(d.pieces[a], tuple(E))
        for (a, b), E in d.overlaps.items() if a != b
    }
    _check_glue_cocycles(d, locs)

    # point-level identifications through the chart isomorphisms
    pairs = set()
    for (a, b), E in d.overlaps.items():
        if a == b:
            continue
        iso = d.ring_isos[(a, b)]
        ca = ore_chart_iso(d.pieces[a], tuple(E))
        cb = ore_chart_iso(d.pieces[b], tuple(d.overlaps[(b, a)]))
        psi_hat = ncspec_morphism(iso)   # chart_b space -> chart_a space
        inv_b = {v: kk for kk, v in cb.point_map.items()}
        for pa, qa in ca.point_map.items():
            qb = next(q for q, p in psi_hat.point_map.items() if p == qa)
            pb = inv_b[qb]
            pairs.add(((a, pa), (b, pb)))

    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for a in range(k):
        for pt in range(spaces[a].sober.n):
            find((a, pt))
    for x, y in pairs:
        union(x, y)

    roots = sorted({find(x) for x in parent}, key=repr)
    class_of = {x: roots.index(find(x)) for x in parent}
    classes = tuple(
        frozenset(x for x in parent if class_of[x] == c) for c in range(len(roots)))

    # specialization order generated by the piece orders
    n = len(classes)
    leq = [[i == j for j in range(n)] for i in range(n)]
    for a in range(k):
        sob = spaces[a].sober
        for p in range(sob.n):
            for q in sob.specialization_up(p):
                leq[class_of[(a, p)]][class_of[(a, q)]] = True
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if leq[i][j]:
                    for m in range(n):
                        if leq[j][m] and not leq[i][m]:
                            leq[i][m] = True
                            changed = True
    for i in range(n):
        for j in range(n):
            if i != j and leq[i][j] and leq[j][i]:
                raise CocycleViolation("identifications destroy antisymmetry",
                                       witness=(i, j))

    # sections at a class: the basic open of any member, via its own piece;
    # members must agree at least in cardinality (they are isomorphic via psi)
    sections = []
    for c in range(n):
        cards = set()
        for a, p in classes[c]:
            apex = spaces[a].sober.points[p].apex
            cards.add(rg.cardinality(spaces[a].sheaf.assignment[apex]))
        if len(cards) != 1:
            raise CocycleViolation(f"class {c} mixes section rings of different size")
        a, p = sorted(classes[c], key=repr)[0]
        apex = spaces[a].sober.points[p].apex
        sections.append(spaces[a].sheaf.assignment[apex])

    embeddings = tuple({p: class_of[(a, p)] for p in range(spaces[a].sober.n)}
                       for a in range(k))
    leq_sets = tuple(frozenset(j for j in range(n) if leq[i][j]) for i in range(n))
    for a in range(k):
        image = set(embeddings[a].values())
        if len(image) != spaces[a].sober.n:
            raise CocycleViolation(f"piece {a} fails to embed")
        # the embedded piece must be open: up-closed in the glued order
        for c in image:
            if not leq_sets[c] <= image:
                raise CocycleViolation(f"piece {a} is not open in the quotient")
    return GluedSpace(tuple(spaces), classes, leq_sets, tuple(sections), embeddings)


def _check_glue_cocycles(d: GlueDatum, locs):
    k = len(d.pieces)
    for a in range(k):
        E_aa = d.overlaps.get((a, a))
        if E_aa is not None and localize(d.pieces[a], tuple(E_aa)).result != d.pieces[a]:
            raise CocycleViolation(f"self overlap of piece {a} is not everything")
    for (a, b) in d.overlaps:
        if a == b:
            continue
        if (b, a) not in d.overlaps:
            raise CocycleViolation(f"missing opposite overlap for ({a}, {b})")
        iso = d.ring_isos[(a, b)]
        iso_back = d.ring_isos[(b, a)]
        hom_validate(iso)
        hom_validate(iso_back)
        if iso.source != locs[(a, b)].result or iso.target != locs[(b, a)].result:
            raise CocycleViolation(f"iso endpoints wrong for ({a}, {b})")
        if rg.is_finite(iso.source):
            for x in rg.enumerate_elements(iso.source):
                if iso_back(iso(x)) != x:
                    raise CocycleViolation("inverse condition fails", witness=(a, b, x))
    # triple condition on the pushed isomorphisms
    for a in range(k):
        for b in range(k):
            for c in range(k):
                if len({a, b, c}) != 3:
                    continue
                if not all(p in d.overlaps for p in [(a, b), (a, c), (b, c), (b, a), (c, a), (c, b)]):
                    continue
                ab_c = _extend_iso(d, locs, a, b, c)
                bc_a = _extend_iso(d, locs, b, c, a)
                ac_b = _extend_iso(d, locs, a, c, b)
                src = _double_loc(d, a, b, c)
                for x in rg.enumerate_elements(src.result):
                    if bc_a[ab_c[x]] != ac_b[x]:
                        raise CocycleViolation("triple condition fails",
                                               witness=(a, b, c))


def _double_loc(d: GlueDatum, a, b, c) -> Localization:
    E = tuple(d.overlaps[(a, b)]) + tuple(d.overlaps[(a, c)])
    return localize(d.pieces[a], E)


def _extend_iso(d: GlueDatum, locs, a, b, c) -> dict:
    """psi_ab extended to the double overlap, as an element table."""
    iso = d.ring_isos[(a, b)]
    La, Lb = locs[(a, b)], locs[(b, a)]
    Da, Db = _double_loc(d, a, b, c), _double_loc(d, b, a, c)
    pa = _under_table(d.pieces[a], La, Da)
    pb = _under_table(d.pieces[b], Lb, Db)
    out = {}
    for y in rg.enumerate_elements(La.result):
        key = pa[y]
        val = pb[iso(y)]
        if key in out and out[key] != val:
            raise CocycleViolation("extension to the double overlap is inconsistent")
        out[key] = val
    if len(out) != rg.cardinality(Da.result):
        raise CocycleViolation("extension is not total on the double overlap")
    return out


def _under_table(r, LA: Localization, LB: Localization) -> dict:
    out = {}
    for x in rg.enumerate_elements(r):
        key = LA.insertion(x)
        out[key] = LB.insertion(x)
    return out


# ---------------------------------------------------------------------------
# quasicoherent data over glued pieces

@dataclass
class QcohDatum:
    """Chart modules with cocycle tables over the overlap localizations."""

    glue: GlueDatum
    modules: tuple        # FiniteModule per piece
    cocycles: dict        # (a, b) -> dict: tensor element -> tensor element


def qcoh_cocycle_check(d: QcohDatum) -> dict:
    """Identity, inverse, triple, and semilinearity conditions; report only."""
    failures = []
    k = len(d.glue.pieces)
    tensors = {}
    for (a, b), E in d.glue.overlaps.items():
        if a == b:
            continue
        L = localize(d.glue.pieces[a], tuple(E))
        tensors[(a, b)] = tensor_module(L.insertion, d.modules[a])

    for a in range(k):
        E_aa = d.glue.overlaps.get((a, a))
        if E_aa is None:
            continue
        phi = d.cocycles.get((a, a))
        if phi is not None:
            T = tensor_module(localize(d.glue.pieces[a], tuple(E_aa)).insertion,
                              d.modules[a])
            if any(phi[x] != x for x in T.elements()):
                failures.append({"condition": "identity", "pair": (a, a)})

    for (a, b) in list(d.cocycles):
        if a == b or (b, a) not in d.cocycles:
            continue
        phi = d.cocycles[(a, b)]
        phi_back = d.cocycles[(b, a)]
        Ta, Tb = tensors[(a, b)], tensors[(b, a)]
        for x in Ta.elements():
            if phi_back[phi[x]] != x:
                failures.append({"condition": "inverse", "pair": (a, b), "at": x})
                break
        # additivity and semilinearity over the overlap ring iso
        psi = d.glue.ring_isos[(a, b)]
        ring_a = tensors[(a, b)].hom.target
        for x in Ta.elements():
            for y in Ta.elements():
                if phi[Ta.add(x, y)] != Tb.add(phi[x], phi[y]):
                    failures.append({"condition": "additive", "pair": (a, b)})
                    break
            else:
                continue
            break
        for rv in rg.enumerate_elements(ring_a):
            for x in Ta.elements():
                if phi[Ta.act(rv, x)] != Tb.act(psi(rv), phi[x]):
                    failures.append({"condition": "semilinear", "pair": (a, b)})
                    break
            else:
                continue
            break

    # triple condition through the double-overlap base changes
    for a in range(k):
        for b in range(k):
            for c in range(k):
                if len({a, b, c}) != 3:
                    continue
                needed = [(a, b), (b, c), (a, c), (b, a), (c, b), (c, a)]
                if not all(p in d.cocycles and p in d.glue.overlaps for p in needed):
                    continue
                try:
                    ab_c = _extend_cocycle(d, tensors, a, b, c)
                    bc_a = _extend_cocycle(d, tensors, b, c, a)
                    ac_b = _extend_cocycle(d, tensors, a, c, b)
                except CocycleViolation as exc:
                    failures.append({"condition": "triple", "pair": (a, b, c),
                                     "detail": str(exc)})
                    continue
                dom = _double_tensor(d, a, b, c)
                for x in dom.elements():
                    if bc_a[ab_c[x]] != ac_b[x]:
                        failures.append({"condition": "triple", "pair": (a, b, c)})
                        break
    return {"status": "pass" if not failures else "fail", "failures": failures}


def _double_tensor(d: QcohDatum, a, b, c) -> TensorModule:
    E = tuple(d.glue.overlaps[(a, b)]) + tuple(d.glue.overlaps[(a, c)])
    return tensor_module(localize(d.glue.pieces[a], E).insertion, d.modules[a])


def _extend_cocycle(d: QcohDatum, tensors, a, b, c) -> dict:
    """phi_ab pushed to the double overlap; surjective, so a table push works."""
    La = localize(d.glue.pieces[a], tuple(d.glue.overlaps[(a, b)]))
    Lb = localize(d.glue.pieces[b], tuple(d.glue.overlaps[(b, a)]))
    Ta, Tb = tensors[(a, b)], tensors[(b, a)]
    Da, Db = _double_tensor(d, a, b, c), _double_tensor(d, b, a, c)
    Ea = tuple(d.glue.overlaps[(a, b)]) + tuple(d.glue.overlaps[(a, c)])
    Eb = tuple(d.glue.overlaps[(b, a)]) + tuple(d.glue.overlaps[(b, c)])
    pa = connecting_map(d.glue.pieces[a], tuple(d.glue.overlaps[(a, b)]), Ea)
    pb = connecting_map(d.glue.pieces[b], tuple(d.glue.overlaps[(b, a)]), Eb)
    push_a = tensor_restriction(Ta, Da, pa)
    push_b = tensor_restriction(Tb, Db, pb)
    phi = d.cocycles[(a, b)]
    out = {}
    for y in Ta.elements():
        key = push_a[y]
        val = push_b[phi[y]]
        if key in out and out[key] != val:
            raise CocycleViolation("cocycle extension inconsistent")
        out[key] = val
    if len(out) != Da.size():
        raise CocycleViolation("cocycle extension not total")
    return out
