from fractions import Fraction
from math import comb

import pytest

from ncspec import rings as rg
from ncspec import skewpoly
from ncspec.errors import (
    BoundInconclusive,
    InhomogeneousRelation,
    OwnerMismatch,
    UnsupportedClass,
)
from ncspec.rings import UnivariatePolyRing, skew_ring
from ncspec.skewproj import (
    SkewQcohDatum,
    build_proj,
    element_from_payloads,
    free_presentation,
    gamma,
    graded_piece_basis,
    is_torsion,
    module_sheaf,
    presentation_from_rows,
    qcoh_cocycle_check,
    quotient_by_variables,
    serre_unit,
    skew_mul,
    twist,
    twist_scalar,
)

SK2 = skew_ring(2, {(0, 1): 2})
SK3 = skew_ring(3, {(0, 1): 2, (0, 2): 3, (1, 2): 5})


def mono(r, exps, c=1):
    return rg.element(r, {tuple(exps): Fraction(c)})


# --- normal-form arithmetic --------------------------------------------------

def test_commutation_relation_instances():
    x, y = mono(SK2, (1, 0)), mono(SK2, (0, 1))
    # x y = 2 y x rearranges to y x = (1/2) x y
    assert (y * x).payload == (((1, 1), Fraction(1, 2)),)
    assert skew_mul(x, y).payload == (((1, 1), Fraction(1)),)
    xy = x * y
    assert (xy * xy).payload == (((2, 2), Fraction(1, 2)),)


def test_mul_identity_and_bilinearity():
    p = rg.element(SK2, {(1, 0): 1, (0, 2): Fraction(3, 2)})
    assert skew_mul(p, rg.one(SK2)) == p
    q = mono(SK2, (1, 1))
    r = mono(SK2, (0, 1), 2)
    left = skew_mul(p, q + r)
    right = skew_mul(p, q) + skew_mul(p, r)
    assert left == right


def test_owner_mismatch():
    other = skew_ring(2, {(0, 1): 3})
    with pytest.raises(OwnerMismatch):
        skew_mul(mono(SK2, (1, 0)), mono(other, (1, 0)))


def test_twist_cocycle_random_triples(rng):
    lam = rg.lam_map(SK3)
    for _ in range(40):
        a, b, c = (tuple(rng.randint(-3, 3) for _ in range(3)) for _ in range(3))
        lhs = skewpoly.twist(lam, a, b) * skewpoly.twist(lam, tuple(
            x + y for x, y in zip(a, b)), c)
        rhs = skewpoly.twist(lam, b, c) * skewpoly.twist(lam, a, tuple(
            x + y for x, y in zip(b, c)))
        assert lhs == rhs


def test_associativity_on_random_elements(rng):
    def rand_poly():
        terms = {}
        for _ in range(rng.randint(1, 3)):
            e = (rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2))
            terms[e] = Fraction(rng.randint(1, 5))
        return rg.element(SK3, terms)

    for _ in range(15):
        p, q, r = rand_poly(), rand_poly(), rand_poly()
        assert skew_mul(skew_mul(p, q), r) == skew_mul(p, skew_mul(q, r))


# --- graded pieces ------------------------------------------------------------

def test_graded_piece_basis_examples():
    basis = graded_piece_basis(SK2, {0}, 0, 3)
    assert sorted(basis) == [(-3, 3), (-2, 2), (-1, 1), (0, 0)]
    assert graded_piece_basis(SK2, set(), -1, 3) == []
    for n, d in ((2, 3), (3, 2), (3, 4)):
        r = skew_ring(n, {(i, j): 2 for i in range(n) for j in range(i + 1, n)})
        assert len(graded_piece_basis(r, set(), d, d + 1)) == comb(d + n - 1, n - 1)


def test_presentation_homogeneity_checks():
    with pytest.raises(InhomogeneousRelation):
        presentation_from_rows(SK2, (0,), [[{(1, 0): 1, (0, 0): 1}]])
    presentation_from_rows(SK2, (0,), [[{(1, 0): 1, (0, 1): 1}]])
    with pytest.raises(UnsupportedClass):
        free_presentation(skew_ring(2, {(0, 1): 2}, inverted=[0]))


# --- the Proj cover -----------------------------------------------------------

def test_build_proj_counts():
    X2 = build_proj(SK2)
    assert len(X2.chart_rings) == 2 and len(X2.overlaps) == 1 and not X2.triples
    X3 = build_proj(SK3)
    assert len(X3.chart_rings) == 3
    assert len(X3.overlaps) == 3 and len(X3.triples) == 1
    assert X2.psi_report["status"] == X3.psi_report["status"] == "pass"


def test_commutative_degeneration_gives_polynomial_charts():
    X2 = build_proj(skew_ring(2, {(0, 1): 1}))
    assert all(isinstance(c, UnivariatePolyRing) for c in X2.chart_rings)
    X3 = build_proj(skew_ring(3, {(0, 1): 1, (0, 2): 1, (1, 2): 1}))
    for chart in X3.chart_rings:
        assert rg.is_commutative(chart)


def test_chart_rings_are_quantum_planes_for_n3():
    X3 = build_proj(SK3)
    for chart in X3.chart_rings:
        assert chart.nvars == 2
        assert not rg.is_commutative(chart)


# --- global sections -----------------------------------------------------------

def test_gamma_free_line_counts():
    for lam in (1, 2, -1):
        r = skew_ring(2, {(0, 1): lam})
        X = build_proj(r)
        g = gamma(X, free_presentation(r), (-3, 6))
        for d in range(-3, 0):
            assert g["dims"][d] == 0
        for d in range(0, 7):
            assert g["dims"][d] == d + 1


def test_gamma_plane_counts_match_binomials():
    X = build_proj(SK3)
    g = gamma(X, free_presentation(SK3), (2, 3))
    assert g["dims"][2] == 6 and g["dims"][3] == 10
    Xc = build_proj(skew_ring(3, {(0, 1): 1, (0, 2): 1, (1, 2): 1}))
    gc = gamma(Xc, free_presentation(Xc.ring), (0, 3))
    assert [gc["dims"][d] for d in range(4)] == [comb(d + 2, 2) for d in range(4)]


def test_gamma_kills_torsion_module():
    X = build_proj(SK2)
    g = gamma(X, quotient_by_variables(SK2), (0, 4))
    assert all(v == 0 for v in g["dims"].values())


def test_gamma_box_stability_window():
    X = build_proj(SK2)
    for box in (2, 3):
        g = gamma(X, free_presentation(SK2), (0, 4), box=box)
        assert [g["dims"][d] for d in range(5)] == [1, 2, 3, 4, 5]
    # deeper saturation must not change the answer either
    g = gamma(X, free_presentation(SK2), (0, 4), box=2, k_max=2)
    assert [g["dims"][d] for d in range(5)] == [1, 2, 3, 4, 5]


def test_gamma_box_too_small_is_detected():
    """A high-degree relation escapes shallow truncations and the stability
    re-run catches the drift."""
    from ncspec.errors import BoxTooSmall

    X = build_proj(SK2)
    part = presentation_from_rows(SK2, (0,), [[{(4, 0): 1}]])
    for box in (1, 2):
        with pytest.raises(BoxTooSmall):
            gamma(X, part, (0, 2), box=box)
    stable = gamma(X, part, (0, 2), box=3)
    # the quotient by x^4 concentrates on the chart away from x: sections
    # in every degree are the four powers of x times the matching y power
    assert [stable["dims"][d] for d in range(3)] == [4, 4, 4]
    assert gamma(X, part, (0, 2), box=4)["dims"] == stable["dims"]


def test_serre_unit_free_module_is_isomorphism():
    X = build_proj(SK2)
    rep = serre_unit(X, free_presentation(SK2), (0, 5))
    for d, info in rep["degrees"].items():
        assert info["injective"] and info["surjective"]
        assert info["kernel_dim"] == 0 and info["cokernel_dim"] == 0


def test_serre_unit_torsion_module():
    X = build_proj(SK2)
    rep = serre_unit(X, quotient_by_variables(SK2), (0, 2))
    deg0 = rep["degrees"][0]
    assert deg0["module_dim"] == 1 and deg0["sections_dim"] == 0
    assert deg0["kernel_dim"] == 1 and deg0["kernel_torsion"]


def test_serre_unit_ideal_module_has_torsion_cokernel():
    """The module generated by the two variables: its sheaf saturates to the
    structure sheaf, the missing degree-zero section is a torsion cokernel."""
    lam = rg.lam_map(SK2)[(0, 1)]
    rows = [[{(0, 1): 1}, {(1, 0): -1 / lam}]]   # the skew syzygy of (x, y)
    ideal = presentation_from_rows(SK2, (1, 1), rows)
    X = build_proj(SK2)
    g = gamma(X, ideal, (0, 3))
    assert [g["dims"][d] for d in range(4)] == [1, 2, 3, 4]
    rep = serre_unit(X, ideal, (0, 3))
    deg0 = rep["degrees"][0]
    assert deg0["module_dim"] == 0 and deg0["sections_dim"] == 1
    assert deg0["cokernel_dim"] == 1 and deg0["cokernel_torsion"] is True
    for d in (1, 2, 3):
        assert rep["degrees"][d]["injective"] and rep["degrees"][d]["surjective"]


def test_serre_unit_mixed_module():
    rows = [
        [dict(skewpoly.variable(2, 0)), {}],
        [dict(skewpoly.variable(2, 1)), {}],
    ]
    mix = presentation_from_rows(SK2, (0, 0), rows)
    X = build_proj(SK2)
    rep = serre_unit(X, mix, (0, 3))
    deg0 = rep["degrees"][0]
    assert deg0["kernel_dim"] == 1 and deg0["kernel_torsion"]
    assert deg0["cokernel_dim"] == 0
    for d in (1, 2, 3):
        info = rep["degrees"][d]
        assert info["injective"] and info["surjective"]


def test_is_torsion_classification():
    free = free_presentation(SK2)
    one_elt = element_from_payloads(free, [{(0, 0): 1}], 0)
    for bound in (1, 2, 3):
        assert is_torsion(free, one_elt, bound) is False
    q = quotient_by_variables(SK2)
    gen = element_from_payloads(q, [{(0, 0): 1}], 0)
    assert is_torsion(q, gen, 1) is True
    # x * (generator of R/(x^2, y)) dies at the first power
    rows = [
        [{(2, 0): 1}],
        [{(0, 1): 1}],
    ]
    part = presentation_from_rows(SK2, (0,), rows)
    xgen = element_from_payloads(part, [{(1, 0): 1}], 1)
    assert is_torsion(part, xgen, 1) is True
    gen0 = element_from_payloads(part, [{(0, 0): 1}], 0)
    assert is_torsion(part, gen0, 2) is True
    with pytest.raises(BoundInconclusive):
        is_torsion(part, gen0, 1)


# --- twists and cocycle data ----------------------------------------------------

def test_module_sheaf_and_twists():
    X = build_proj(SK2)
    datum = module_sheaf(X, free_presentation(SK2))
    assert qcoh_cocycle_check(datum)["status"] == "pass"
    t0 = twist(datum, 0)
    base_dim = t0.chart_piece(0).dim
    assert base_dim == SkewQcohDatum(X, datum.presentation, datum.scalars).box + 1
    for n in (1, 2, 3):
        tn = twist(datum, n)
        assert tn.chart_piece(0).dim == base_dim + n
    # additivity of dimensions within the common box
    t12 = twist(datum, 1 + 2)
    assert t12.chart_piece(0).dim == twist(datum, 3).chart_piece(0).dim


def test_shifted_module_gives_line_bundle_sections():
    X = build_proj(SK2)
    shifted = free_presentation(SK2, degrees=(-1,))
    g = gamma(X, shifted, (0, 3))
    # sections of the degree-1 twist: dim in degree d is d + 2
    assert [g["dims"][d] for d in range(4)] == [2, 3, 4, 5]
    # the plane version shifts the binomials the same way
    X3 = build_proj(SK3)
    g3 = gamma(X3, free_presentation(SK3, degrees=(-1,)), (1, 2))
    assert g3["dims"][1] == 6 and g3["dims"][2] == 10


def test_scaled_cocycle_fails():
    X = build_proj(SK2)
    datum = module_sheaf(X, free_presentation(SK2))
    bad_scalars = dict(datum.scalars)
    bad_scalars[(0, 1)] = Fraction(2)
    rep = qcoh_cocycle_check(SkewQcohDatum(X, datum.presentation, bad_scalars))
    assert rep["status"] == "fail"
    assert any(f["condition"] == "inverse" for f in rep["failures"])


def test_triple_scalar_condition_n3():
    X = build_proj(SK3)
    datum = module_sheaf(X, free_presentation(SK3))
    bad_scalars = dict(datum.scalars)
    bad_scalars[(0, 2)] = Fraction(7)
    bad_scalars[(2, 0)] = Fraction(1, 7)
    rep = qcoh_cocycle_check(SkewQcohDatum(X, datum.presentation, bad_scalars))
    assert rep["status"] == "fail"
    assert any(f["condition"] == "triple" for f in rep["failures"])


def test_quotient_module_sheaf_is_zero_datum():
    X = build_proj(SK2)
    q = quotient_by_variables(SK2)
    datum = module_sheaf(X, q)
    for i in range(2):
        assert twist(datum, 0).chart_piece(i).dim == 0
