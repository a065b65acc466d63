"""The structure sheaf on the localization semilattice, the sober ringed
space of a ring, induced morphisms, and the pushout-characterized maps.

A basic open is a principal upper set of the semilattice and carries the
localization at the cell's subset; restriction maps are the connecting
maps under the ring.  Sections over a non-basic open are computed as the
finite limit of the basic sections inside it (semisimple algebras use the
known closed form: the block union).
"""

from dataclasses import dataclass, field

from . import rings as rg
from .errors import NotACover, NotOpen, UnsupportedClass
from .latspace import (
    AlexandrovSpace,
    LocalizationLattice,
    PidLattice,
    SoberSpace,
    build_semilattice,
    is_completely_union_irreducible,
    soberify,
)
from .localization import (
    LocalizationSquare,
    canonical_modular_product,
    connecting_map,
    induced_map,
    is_pushout,
    localize,
)
from .rings import (
    ModularRing,
    ProductRing,
    RingHom,
    SemisimpleAlgebra,
    UnivariatePolyRing,
    ZeroRing,
    hom_compose,
    hom_validate,
    identity_hom,
    to_zero_hom,
)


@dataclass
class SheafOnBase:
    """Ring-valued sheaf data on the principal upper sets of a lattice."""

    lattice: LocalizationLattice
    assignment: tuple                 # cell index -> descriptor
    _res_cache: dict = field(default_factory=dict)

    def restriction(self, i: int, j: int) -> RingHom:
        """res from the basic open at cell i into the smaller one at cell j >= i."""
        assert self.lattice.leq(i, j), "restriction goes to a smaller basic open"
        key = (i, j)
        if key not in self._res_cache:
            self._res_cache[key] = connecting_map(
                self.lattice.ring,
                self.lattice.cells[i].representative,
                self.lattice.cells[j].representative,
            )
        return self._res_cache[key]

    def check_presheaf_laws(self):
        lat = self.lattice
        for i in range(lat.n):
            r_ii = self.restriction(i, i)
            assert r_ii == identity_hom(self.assignment[i])
            for j in range(lat.n):
                if not lat.leq(i, j):
                    continue
                for k in range(lat.n):
                    if not lat.leq(j, k):
                        continue
                    left = hom_compose(self.restriction(j, k), self.restriction(i, j))
                    assert left == self.restriction(i, k), "restrictions fail to compose"


@dataclass
class NCSpecSpace:
    """The sober ringed space of a ring with its sheaf on the basic opens."""

    ring: object
    lattice: LocalizationLattice
    space: AlexandrovSpace
    sober: SoberSpace
    sheaf: SheafOnBase

    @property
    def generic(self) -> int:
        g = self.sober.generic()
        assert g is not None, "the semilattice always has a top cell"
        return g

    def basic_open(self, cell: int) -> frozenset:
        return self.space.up[cell]

    def all_opens(self):
        return self.space.all_open_sets()

    def point_count(self) -> int:
        return self.sober.n


_ncspec_cache: dict = {}


def ncspec(r) -> "NCSpecSpace | PidNCSpec":
    if r in _ncspec_cache:
        return _ncspec_cache[r]
    lat = build_semilattice(r)
    if isinstance(lat, PidLattice):
        sp = PidNCSpec(r, lat)
        _ncspec_cache[r] = sp
        return sp
    X = lat.alexandrov_space()
    sober = soberify(X)
    assignment = tuple(c.localized.result for c in lat.cells)
    sheaf = SheafOnBase(lat, assignment)
    if rg.is_finite(r) or lat.n <= 8:
        sheaf.check_presheaf_laws()
    sp = NCSpecSpace(r, lat, X, sober, sheaf)
    assert assignment[lat.bottom] == r, "global sections must be the ring itself"
    _ncspec_cache[r] = sp
    return sp


@dataclass
class PidNCSpec:
    """Q[x]: the lazy lattice plus the symbolic point model of the sober space."""

    ring: object
    lattice: PidLattice

    def basic_sections(self, f) -> object:
        return localize(self.ring, (f,)).result


def sections(sp: NCSpecSpace, U):
    """Section ring over any open set of the sober space (by base open).

    Principal opens are basic and return the assigned localization; other
    opens are finite limits of the basic sections they contain.
    """
    U = frozenset(U)
    if not sp.space.is_open(U):
        raise NotOpen(f"{sorted(U)} is not open")
    if not U:
        return ZeroRing()
    mins = sp.space.minimal_elements(U)
    if len(mins) == 1:
        return sp.sheaf.assignment[mins[0]]
    if isinstance(sp.ring, SemisimpleAlgebra):
        union = frozenset()
        for c in U:
            union |= sp.lattice.cells[c].key
        return sp.lattice.cells[sp.lattice._key_index[union]].localized.result
    if rg.is_finite(sp.ring) and rg.is_commutative(sp.ring):
        return _sections_limit(sp, U, mins)
    raise UnsupportedClass(f"sections over non-basic opens of {sp.ring!r}")


def _sections_limit(sp: NCSpecSpace, U, mins):
    """Limit of the basic sections over the inclusion diagram inside U."""
    from itertools import product as iproduct

    rings_at = [sp.sheaf.assignment[m] for m in mins]
    elems = [rg.enumerate_elements(t) for t in rings_at]
    restrict = {}
    for a, m in enumerate(mins):
        for z in U:
            if sp.lattice.leq(m, z):
                restrict[(a, z)] = sp.sheaf.restriction(m, z)
    compatible = []
    for tup in iproduct(*elems):
        ok = True
        for a in range(len(mins)):
            for b in range(a + 1, len(mins)):
                for z in U:
                    ra, rb = restrict.get((a, z)), restrict.get((b, z))
                    if ra is not None and rb is not None and ra(tup[a]) != rb(tup[b]):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            compatible.append(tup)
    return _recognize_product_of_cyclics(rings_at, compatible)


def _recognize_product_of_cyclics(rings_at, tuples):
    """Identify a finite commutative limit ring with a product of Z/m."""

    def t_mul(x, y):
        return tuple(a * b for a, b in zip(x, y))

    def t_add(x, y):
        return tuple(a + b for a, b in zip(x, y))

    one = tuple(rg.one(t) for t in rings_at)
    zero_t = tuple(rg.zero(t) for t in rings_at)
    assert one in tuples and zero_t in tuples
    idem = [x for x in tuples if t_mul(x, x) == x and x != zero_t]
    atoms = [
        e for e in idem
        if not any(f != e and t_mul(e, f) == f for f in idem)
    ]
    orders = []
    for e in atoms:
        k, acc = 1, e
        while acc != zero_t:
            acc = t_add(acc, e)
            k += 1
        orders.append(k)
    orders.sort(reverse=True)
    total = 1
    for k in orders:
        total *= k
    assert total == len(tuples), "limit ring is not a product of cyclic blocks"
    return canonical_modular_product(orders)


# ---------------------------------------------------------------------------
# morphisms of the sober ringed spaces

@dataclass
class RingedSpaceMorphism:
    """point_map sends sober points of the source space to the target's;
    comap[j] is the ring map on the basic open at target cell j."""

    source: NCSpecSpace
    target: NCSpecSpace
    point_map: dict     # source point index -> target point index
    comap: dict         # target cell index -> RingHom

    def preimage_points(self, target_open) -> frozenset:
        target_pts = self.target.sober.open_image(target_open)
        return frozenset(x for x, y in self.point_map.items() if y in target_pts)

    def preimage_base_open(self, target_open) -> frozenset:
        """The source base open inducing the preimage (points are indexed by apex)."""
        pts = self.preimage_points(target_open)
        U = frozenset(self.source.sober.points[i].apex for i in pts)
        if not self.source.space.is_open(U):
            raise NotOpen("preimage is not open; the point map is not continuous")
        return U

    def verify(self) -> bool:
        """Continuity plus compatibility of the comaps with restrictions."""
        Y, X = self.target, self.source
        for j in range(Y.lattice.n):
            pre = self.preimage_base_open(Y.basic_open(j))
            h = self.comap[j]
            if h.source != Y.sheaf.assignment[j] or h.target != sections(X, pre):
                return False
        for j1 in range(Y.lattice.n):
            for j2 in range(Y.lattice.n):
                if not Y.lattice.leq(j1, j2):
                    continue
                pre1 = self.preimage_base_open(Y.basic_open(j1))
                pre2 = self.preimage_base_open(Y.basic_open(j2))
                resX = _sections_restriction(X, pre1, pre2)
                lhs = hom_compose(self.comap[j2], Y.sheaf.restriction(j1, j2))
                rhs = hom_compose(resX, self.comap[j1])
                if lhs != rhs:
                    return False
        return True

    def key(self):
        return (
            self.source.ring, self.target.ring,
            tuple(sorted(self.point_map.items())),
            tuple(sorted((j, h.key()) for j, h in self.comap.items())),
        )

    def __eq__(self, other):
        return isinstance(other, RingedSpaceMorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def _sections_restriction(sp: NCSpecSpace, U, V) -> RingHom:
    """Restriction map of sp's sheaf between opens V <= U (principal or empty)."""
    U, V = frozenset(U), frozenset(V)
    assert V <= U
    SU, SV = sections(sp, U), sections(sp, V)
    if not V:
        return to_zero_hom(SU, SV)
    minsU = sp.space.minimal_elements(U)
    minsV = sp.space.minimal_elements(V)
    if len(minsU) == 1 and len(minsV) == 1:
        return sp.sheaf.restriction(minsU[0], minsV[0])
    raise UnsupportedClass("restriction between non-principal opens")


def ncspec_morphism(theta: RingHom) -> RingedSpaceMorphism:
    """The induced morphism NCSpec(target) -> NCSpec(source) of a ring hom."""
    hom_validate(theta)
    Y = ncspec(theta.source)
    X = ncspec(theta.target)
    if isinstance(Y, PidNCSpec) or isinstance(X, PidNCSpec):
        raise UnsupportedClass("induced morphisms need materialized lattices")

    # the join-preserving cell map under theta
    t = {}
    for i, cell in enumerate(Y.lattice.cells):
        image = tuple(theta(a) for a in cell.representative)
        t[i] = X.lattice.cell_of_subset(image)
    for i in range(Y.lattice.n):
        for j in range(Y.lattice.n):
            assert t[Y.lattice.join(i, j)] == X.lattice.join(t[i], t[j]), \
                "cell map must preserve joins"

    point_map = {}
    for xi, C in enumerate(X.sober.points):
        pre = frozenset(i for i in range(Y.lattice.n) if t[i] in C.members)
        match = [yi for yi, D in enumerate(Y.sober.points) if D.members == pre]
        assert len(match) == 1, "preimage of an irreducible closed set must be a point"
        point_map[xi] = match[0]

    comap = {}
    for j, cell in enumerate(Y.lattice.cells):
        comap[j] = induced_map(theta, cell.representative)
        assert comap[j].target == X.sheaf.assignment[t[j]], \
            "induced map must land in the preimage cell's sections"

    m = RingedSpaceMorphism(X, Y, point_map, comap)
    # basic-open preimage formula
    for j in range(Y.lattice.n):
        assert m.preimage_base_open(Y.basic_open(j)) == X.space.up[t[j]]
    return m


def recover_hom(m: RingedSpaceMorphism) -> RingHom:
    """The global-sections component of the comap."""
    return m.comap[m.target.lattice.bottom]


def check_functoriality(theta: RingHom, phi: RingHom) -> dict:
    """Compare the induced morphism of phi∘theta with the composite morphism."""
    composite = hom_compose(phi, theta)
    f = ncspec_morphism(theta)       # NCSpec(S) -> NCSpec(R)
    g = ncspec_morphism(phi)         # NCSpec(T) -> NCSpec(S)
    h = ncspec_morphism(composite)   # NCSpec(T) -> NCSpec(R)
    failures = []
    point_composite = {x: f.point_map[g.point_map[x]] for x in g.point_map}
    if point_composite != h.point_map:
        failures.append({"part": "point_map", "got": point_composite, "want": h.point_map})
    for j in range(f.target.lattice.n):
        pre_cell = _cell_of_preimage(f, j)
        lhs = hom_compose(g.comap[pre_cell], f.comap[j])
        if lhs != h.comap[j]:
            failures.append({"part": "comap", "basic_open": j})
    return {"status": "pass" if not failures else "fail", "failures": failures}


def _cell_of_preimage(m: RingedSpaceMorphism, j: int) -> int:
    pre = m.preimage_base_open(m.target.basic_open(j))
    mins = m.source.space.minimal_elements(pre)
    assert len(mins) == 1
    return mins[0]


def default_prim_probes(m: RingedSpaceMorphism):
    probes = []
    for sp in (m.target, m.source):
        for d in sp.sheaf.assignment:
            if d not in probes:
                probes.append(d)
    if ZeroRing() not in probes:
        probes.append(ZeroRing())
    return tuple(probes)


def is_prim(m: RingedSpaceMorphism, probes=None) -> bool:
    """Preimages of completely union-irreducible opens stay so, and every
    nested pair of them yields a ring pushout."""
    return is_prim_report(m, probes)["prim"]


def is_prim_report(m: RingedSpaceMorphism, probes=None) -> dict:
    """Like is_prim, but a failing check names its witness."""
    if probes is None:
        probes = default_prim_probes(m)
    witness = _prim_witness(m, range(m.target.lattice.n), probes)
    return {"prim": witness is None, "witness": witness,
            "probes": [repr(p) for p in probes]}


def _prim_on_cells(m: RingedSpaceMorphism, cells, probes) -> bool:
    return _prim_witness(m, cells, probes) is None


def _prim_witness(m: RingedSpaceMorphism, cells, probes):
    Y, X = m.target, m.source
    cells = list(cells)
    for j in cells:
        pre = m.preimage_base_open(Y.basic_open(j))
        if not is_completely_union_irreducible(X.space, pre):
            return {"condition": "preimage_not_union_irreducible",
                    "basic_open": j, "preimage": sorted(pre)}
    for j1 in cells:
        for j2 in cells:
            if not Y.lattice.leq(j1, j2):
                continue
            pre1 = m.preimage_base_open(Y.basic_open(j1))
            pre2 = m.preimage_base_open(Y.basic_open(j2))
            sq = LocalizationSquare(
                top=m.comap[j1],
                left=Y.sheaf.restriction(j1, j2),
                bottom=m.comap[j2],
                right=_sections_restriction(X, pre1, pre2),
            )
            if not is_pushout(sq, probes):
                return {"condition": "restriction_square_not_pushout",
                        "pair": (j1, j2)}
    return None


def prim_is_local_check(m: RingedSpaceMorphism, cover) -> bool:
    """is_prim agrees with primness of every restriction to a cover."""
    Y = m.target
    covered = frozenset().union(*[frozenset(U) for U in cover]) if cover else frozenset()
    for U in cover:
        if not Y.space.is_open(frozenset(U)):
            raise NotACover(f"{sorted(U)} is not open")
    if covered != Y.space.carrier():
        raise NotACover("the pieces do not cover the space")
    probes = default_prim_probes(m)
    whole = is_prim(m, probes)
    pieces = all(
        _prim_on_cells(m, [j for j in range(Y.lattice.n) if j in frozenset(U)], probes)
        for U in cover
    )
    assert whole == pieces, "primness must be a local property"
    return whole
