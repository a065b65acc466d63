"""Universal localization at finite subsets for the supported ring classes.

The finite commutative algorithm: the multiplicative orbit of f = prod(E)
is eventually periodic, and the unique idempotent e in its cycle satisfies
loc(R, E) = eR with insertion r -> er.  In canonical coordinates eR is a
product of cyclic rings and the insertion is componentwise reduction.
Matrix rings localize to themselves or collapse to the zero ring;
semisimple algebras localize to the sub-product indexed by the blocks
that every member of E leaves nonsingular; Q[x] localizes symbolically to
the fraction class of the squarefree part of prod(E); skew Laurent rings
localize at monomials by enlarging the inverted cone.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import gcd as igcd

from . import qpoly, skewpoly
from . import rings as rg
from .errors import (
    NonMonomialSkewSubset,
    NotComparable,
    UnsupportedClass,
    UnverifiableSquare,
)
from .rings import (
    CommLocRule,
    IdentityRule,
    LocalizedPolyRing,
    MatrixRing,
    ModularRing,
    PolyFracRule,
    PolyInsertRule,
    ProductRing,
    RingElement,
    RingHom,
    SemisimpleAlgebra,
    SkewExpandRule,
    SkewLaurentRing,
    ToZeroRule,
    UnivariatePolyRing,
    ZeroRing,
    all_homs,
    hom_compose,
    hom_from_callable,
    hom_validate,
)


@dataclass(frozen=True)
class Localization:
    source: object
    subset: tuple                 # the localized elements, canonical order
    result: object                # canonical descriptor of loc(source, subset)
    insertion: RingHom            # alpha: source -> result
    inverse_witnesses: tuple      # ((element, inverse-in-result), ...)

    def witness(self, a: RingElement) -> RingElement:
        for x, w in self.inverse_witnesses:
            if x == a:
                return w
        raise KeyError(f"{a!r} not in localized subset")


def idempotent_power(r, x: RingElement) -> RingElement:
    """The unique idempotent in the multiplicative orbit x, x^2, ..."""
    seen = {}
    cur = x
    k = 1
    while cur.payload not in seen:
        seen[cur.payload] = k
        cur = cur * x
        k += 1
    start = seen[cur.payload]
    period = k - start
    j = start
    while j % period:
        j += 1
    e = x
    for _ in range(j - 1):
        e = e * x
    assert e * e == e
    return e


def _subset_key(E):
    return tuple(sorted(set(E), key=repr))


def localize(r, E) -> Localization:
    return _localize_cached(r, _subset_key(tuple(E)))


@lru_cache(maxsize=None)
def _localize_cached(r, E: tuple) -> Localization:
    for a in E:
        if a.owner != r:
            raise rg.ElementOwnershipMismatch(f"{a!r} not owned by {r!r}")

    if isinstance(r, ZeroRing):
        return _finish(r, E, r, hom_validate(RingHom(r, r, IdentityRule())))

    if not E or all(rg.is_unit(r, a) for a in E):
        return _finish(r, E, r, hom_validate(RingHom(r, r, IdentityRule())))

    if isinstance(r, (ModularRing, ProductRing)) and rg.is_commutative(r) and rg.is_finite(r):
        return _localize_finite_commutative(r, E)

    if isinstance(r, MatrixRing):
        # some member is singular: the usual rank-one collapse kills 1
        return _finish(r, E, ZeroRing(), hom_validate(RingHom(r, ZeroRing(), ToZeroRule())))

    if isinstance(r, SemisimpleAlgebra):
        kept = [
            j for j in range(len(r.dims))
            if all(rg.mat_det(r.base, a.payload[j]) != 0 for a in E)
        ]
        if not kept:
            return _finish(r, E, ZeroRing(), hom_validate(RingHom(r, ZeroRing(), ToZeroRule())))
        result = SemisimpleAlgebra(r.base, tuple(r.dims[j] for j in kept))
        ins = hom_validate(RingHom(r, result, rg.SsaProjRule(tuple(kept))))
        return _finish(r, E, result, ins)

    if isinstance(r, UnivariatePolyRing):
        f = qpoly.ONE
        for a in E:
            f = qpoly.mul(f, a.payload)
        if qpoly.is_zero(f):
            return _finish(r, E, ZeroRing(), hom_validate(RingHom(r, ZeroRing(), ToZeroRule())))
        sf = qpoly.squarefree_part(f)
        if sf == qpoly.ONE:
            return _finish(r, E, r, hom_validate(RingHom(r, r, IdentityRule())))
        result = LocalizedPolyRing(sf)
        ins = hom_validate(RingHom(r, result, PolyInsertRule()))
        return _finish(r, E, result, ins)

    if isinstance(r, LocalizedPolyRing):
        sf = r.denominator
        for a in E:
            num, _den = a.payload
            if qpoly.is_zero(num):
                return _finish(r, E, ZeroRing(),
                               hom_validate(RingHom(r, ZeroRing(), ToZeroRule())))
            sf = qpoly.mul(sf, num)
        sf = qpoly.squarefree_part(sf)
        if sf == qpoly.squarefree_part(r.denominator):
            return _finish(r, E, r, hom_validate(RingHom(r, r, IdentityRule())))
        result = LocalizedPolyRing(sf)
        ins = hom_validate(RingHom(r, result, PolyFracRule()))
        return _finish(r, E, result, ins)

    if isinstance(r, SkewLaurentRing):
        new_inverted = set(r.inverted)
        for a in E:
            terms = skewpoly.from_canonical(a.payload)
            if not terms:
                return _finish(r, E, ZeroRing(),
                               hom_validate(RingHom(r, ZeroRing(), ToZeroRule())))
            if len(terms) != 1:
                raise NonMonomialSkewSubset(f"{a!r} is not a scalar multiple of a monomial")
            (e, _c), = terms.items()
            new_inverted.update(i for i, v in enumerate(e) if v != 0)
        if frozenset(new_inverted) == r.inverted:
            return _finish(r, E, r, hom_validate(RingHom(r, r, IdentityRule())))
        result = SkewLaurentRing(r.nvars, r.lam, frozenset(new_inverted))
        ins = hom_validate(RingHom(r, result, SkewExpandRule()))
        return _finish(r, E, result, ins)

    raise UnsupportedClass(f"cannot localize {r!r}")


def _localize_finite_commutative(r, E) -> Localization:
    f = rg.one(r)
    for a in E:
        f = f * a
    e = idempotent_power(r, f)
    mods = [g.n for g in (r.factors if isinstance(r, ProductRing) else (r,))]
    parts = e.payload if isinstance(r, ProductRing) else (e.payload,)
    kept = []
    for i, (ei, ni) in enumerate(zip(parts, mods)):
        m = ni // igcd(ei, ni)
        if m > 1:
            kept.append((i, m))
    result = canonical_modular_product([m for _, m in kept])
    if isinstance(result, ZeroRing):
        ins = hom_validate(RingHom(r, result, ToZeroRule()))
    else:
        ins = hom_validate(RingHom(r, result, CommLocRule(tuple(kept))))
    return _finish(r, E, result, ins)


def canonical_modular_product(mods):
    """Canonical descriptor for a product of Z/m factors (drop m = 1)."""
    mods = [m for m in mods if m > 1]
    if not mods:
        return ZeroRing()
    if len(mods) == 1:
        return ModularRing(mods[0])
    return ProductRing(tuple(ModularRing(m) for m in mods))


def _finish(r, E, result, insertion) -> Localization:
    witnesses = []
    for a in E:
        img = insertion(a)
        w = rg.inverse(result, img)
        assert w is not None, f"{a!r} fails to invert in {result!r}"
        assert img * w == rg.one(result) and w * img == rg.one(result)
        witnesses.append((a, w))
    return Localization(r, tuple(E), result, insertion, tuple(witnesses))


# ---------------------------------------------------------------------------
# the preorder and its maps

def subset_leq(r, A, B) -> bool:
    """A is inverted by localizing at B."""
    L = localize(r, B)
    return all(rg.is_unit(L.result, L.insertion(a)) for a in A)


def connecting_map(r, A, B) -> RingHom:
    """The unique p: loc(R, A) -> loc(R, B) under R; requires A <= B."""
    if not subset_leq(r, A, B):
        raise NotComparable(f"{list(A)!r} is not below {list(B)!r} in {r!r}")
    LA, LB = localize(r, A), localize(r, B)
    return _under_map(r, LA, LB)


def _under_map(r, LA: Localization, LB: Localization) -> RingHom:
    """The map loc_A -> loc_B commuting with the insertions (insertion epis)."""
    if LA.result == LB.result and LA.insertion == LB.insertion:
        return hom_validate(RingHom(LA.result, LB.result, IdentityRule()))
    if isinstance(LB.result, ZeroRing):
        return hom_validate(RingHom(LA.result, LB.result, ToZeroRule()))
    if rg.is_finite(r):
        table = {}
        for x in rg.enumerate_elements(r):
            key = LA.insertion(x)
            val = LB.insertion(x)
            if key in table and table[key] != val:
                raise NotComparable("insertion images are incompatible")
            table[key] = val
        if len(table) != rg.cardinality(LA.result):
            raise NotComparable("insertion is not surjective; no table map")
        return hom_validate(rg.table_hom(LA.result, LB.result, table))
    if isinstance(LA.result, UnivariatePolyRing) and isinstance(LB.result, LocalizedPolyRing):
        return hom_validate(RingHom(LA.result, LB.result, PolyInsertRule()))
    if isinstance(LA.result, LocalizedPolyRing) and isinstance(LB.result, LocalizedPolyRing):
        return hom_validate(RingHom(LA.result, LB.result, PolyFracRule()))
    if isinstance(LA.result, SkewLaurentRing) and isinstance(LB.result, SkewLaurentRing):
        return hom_validate(RingHom(LA.result, LB.result, SkewExpandRule()))
    if isinstance(LA.result, UnivariatePolyRing) and isinstance(LB.result, UnivariatePolyRing):
        return hom_validate(RingHom(LA.result, LB.result, IdentityRule()))
    if isinstance(LA.result, SemisimpleAlgebra) and isinstance(LB.result, SemisimpleAlgebra):
        ka, kb = _ssa_kept(LA), _ssa_kept(LB)
        if not set(kb) <= set(ka):
            raise NotComparable("block sets do not nest")
        positions = tuple(ka.index(j) for j in kb)
        return hom_validate(RingHom(LA.result, LB.result, rg.SsaProjRule(positions)))
    raise UnsupportedClass(f"no connecting map {LA.result!r} -> {LB.result!r}")


def _ssa_kept(L: Localization):
    if isinstance(L.insertion.rule, rg.SsaProjRule):
        return tuple(L.insertion.rule.kept)
    return tuple(range(len(L.source.dims)))


def induced_map(theta: RingHom, A) -> RingHom:
    """theta_A: loc(R, A) -> loc(S, theta(A)) closing the localization square."""
    hom_validate(theta)
    LA = localize(theta.source, tuple(A))
    LB = localize(theta.target, tuple(theta(a) for a in A))
    if isinstance(LB.result, ZeroRing):
        return hom_validate(RingHom(LA.result, LB.result, ToZeroRule()))
    if rg.is_finite(theta.source):
        table = {}
        for x in rg.enumerate_elements(theta.source):
            key = LA.insertion(x)
            val = LB.insertion(theta(x))
            if key in table and table[key] != val:
                raise UnsupportedClass("induced map is not well-defined on the table")
            table[key] = val
        if len(table) != rg.cardinality(LA.result):
            raise UnsupportedClass("insertion not surjective")
        return hom_validate(rg.table_hom(LA.result, LB.result, table))
    if isinstance(theta.rule, IdentityRule):
        return _under_map(theta.source, LA, LB)
    if isinstance(theta.source, SemisimpleAlgebra) and isinstance(
            theta.rule, (rg.SsaProjRule, IdentityRule)):
        # all four maps are block projections, so positions compose
        keptA = _ssa_kept(LA)
        K = (tuple(theta.rule.kept) if isinstance(theta.rule, rg.SsaProjRule)
             else tuple(range(len(theta.source.dims))))
        if isinstance(LB.result, SemisimpleAlgebra):
            keptB_rel = (tuple(LB.insertion.rule.kept)
                         if isinstance(LB.insertion.rule, rg.SsaProjRule)
                         else tuple(range(len(theta.target.dims))))
            kept_abs = [K[p] for p in keptB_rel]
            positions = tuple(keptA.index(b) for b in kept_abs)
            return hom_validate(RingHom(LA.result, LB.result, rg.SsaProjRule(positions)))
    raise UnsupportedClass(f"induced map unsupported for {theta!r}")


@dataclass(frozen=True)
class LocalizationSquare:
    """A commuting square of ring homs.

    top:    TL -> TR      left:  TL -> BL
    bottom: BL -> BR      right: TR -> BR
    """
    top: RingHom
    left: RingHom
    bottom: RingHom
    right: RingHom

    @property
    def corners(self):
        return (self.top.source, self.top.target, self.left.target, self.bottom.target)

    def commutes(self) -> bool:
        tl = self.top.source
        if rg.is_finite(tl):
            return all(
                self.right(self.top(x)) == self.bottom(self.left(x))
                for x in rg.enumerate_elements(tl)
            )
        try:
            return hom_compose(self.right, self.top) == hom_compose(self.bottom, self.left)
        except UnsupportedClass:
            sample = [rg.one(tl), rg.zero(tl)]
            return all(self.right(self.top(x)) == self.bottom(self.left(x)) for x in sample)


def localization_square(theta: RingHom, A, B) -> LocalizationSquare:
    """The square (p_BA, theta_A, theta_B, p over the target); A <= B required."""
    if not subset_leq(theta.source, A, B):
        raise NotComparable("subsets are not comparable in the source")
    A, B = tuple(A), tuple(B)
    tA = tuple(theta(a) for a in A)
    tB = tuple(theta(b) for b in B)
    if not subset_leq(theta.target, tA, tB):
        raise NotComparable("image subsets fail to compare; not a homomorphism?")
    sq = LocalizationSquare(
        top=induced_map(theta, A),
        left=connecting_map(theta.source, A, B),
        bottom=induced_map(theta, B),
        right=_under_map(theta.target, localize(theta.target, tA), localize(theta.target, tB)),
    )
    assert sq.commutes(), "localization square fails to commute"
    return sq


# ---------------------------------------------------------------------------
# pushout verification

def default_probes(sq: LocalizationSquare):
    probes = []
    for c in sq.corners + (ZeroRing(),):
        if c not in probes:
            probes.append(c)
    return tuple(probes)


def is_pushout(sq: LocalizationSquare, probes=None) -> bool:
    """Bounded pushout check.

    Finite commutative corners: for every probe T and every pair of homs
    (lam, mu) out of the two mid corners agreeing on the top-left corner,
    exactly one mediating hom out of the bottom-right corner must restrict
    to them.  Surjective squares instead compare the bottom-right corner
    with the quotient by the sum of the two kernels.
    """
    if not sq.commutes():
        return False
    if probes is None:
        probes = default_probes(sq)
    tl, tr, bl, br = sq.corners
    # an identity leg settles the question: the pushout of (id, f) is f,
    # so the square pushes out exactly when the opposite leg is invertible
    if _hom_is_identity(sq.top):
        verdict = _hom_is_iso(sq.bottom)
        if verdict is not None:
            return verdict
    if _hom_is_identity(sq.left):
        verdict = _hom_is_iso(sq.right)
        if verdict is not None:
            return verdict
    try:
        return _pushout_by_probes(sq, probes)
    except UnsupportedClass:
        pass
    if all(rg.is_finite(c) for c in (tl, tr, bl, br)):
        try:
            return _pushout_by_kernels(sq)
        except UnsupportedClass as exc:
            raise UnverifiableSquare(str(exc))
    raise UnverifiableSquare(f"no decision procedure applies to corners {sq.corners!r}")


def _hom_is_identity(h: RingHom) -> bool:
    if isinstance(h.rule, IdentityRule):
        return True
    if h.source != h.target:
        return False
    if rg.is_finite(h.source):
        return all(h(x) == x for x in rg.enumerate_elements(h.source))
    return False


def _hom_is_iso(h: RingHom):
    """True/False when decidable, None otherwise."""
    if isinstance(h.rule, IdentityRule):
        return True
    if isinstance(h.rule, ToZeroRule):
        return rg.is_zero_ring(h.source)
    if rg.is_finite(h.source) and rg.is_finite(h.target):
        image = {h(x) for x in rg.enumerate_elements(h.source)}
        return (len(image) == rg.cardinality(h.source)
                and len(image) == rg.cardinality(h.target))
    return None


def _pushout_by_probes(sq: LocalizationSquare, probes) -> bool:
    tl, tr, bl, br = sq.corners
    for T in probes:
        lams = all_homs(tr, T)
        mus = all_homs(bl, T)
        rhos = all_homs(br, T)
        for lam in lams:
            lam_top = hom_compose(lam, sq.top)
            for mu in mus:
                if hom_compose(mu, sq.left) != lam_top:
                    continue
                mediating = [
                    rho for rho in rhos
                    if hom_compose(rho, sq.right) == lam and hom_compose(rho, sq.bottom) == mu
                ]
                if len(mediating) != 1:
                    return False
    return True


def _pushout_by_kernels(sq: LocalizationSquare) -> bool:
    """Surjective case: BR must be TL / (ker top + ker left)."""
    tl = sq.top.source
    elems = rg.enumerate_elements(tl)
    for h in (sq.top, sq.left, sq.bottom, sq.right):
        if len({h(x) for x in rg.enumerate_elements(h.source)}) != rg.cardinality(h.target):
            raise UnsupportedClass("square is not of quotient type")
    ker = {x for x in elems if sq.top(x) == rg.zero(sq.top.target)}
    ker |= {x for x in elems if sq.left(x) == rg.zero(sq.left.target)}
    ideal = _subgroup_closure(tl, ker)
    kappa = {x: sq.bottom(sq.left(x)) for x in elems}
    if len(set(kappa.values())) != rg.cardinality(sq.bottom.target):
        return False
    kernel_of_kappa = {x for x, v in kappa.items() if v == rg.zero(sq.bottom.target)}
    return kernel_of_kappa == ideal


def _subgroup_closure(r, gens):
    """Additive closure of gens (an ideal when gens come from hom kernels)."""
    acc = {rg.zero(r)} | set(gens)
    changed = True
    while changed:
        changed = False
        for a in list(acc):
            for b in list(acc):
                s = a + b
                if s not in acc:
                    acc.add(s)
                    changed = True
    return acc
