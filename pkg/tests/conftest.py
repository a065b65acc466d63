"""Shared fixtures and independent oracles for the test suite."""

import random
from fractions import Fraction

import pytest

from ncspec import rings as rg
from ncspec.rings import ModularRing, ZeroRing


def brute_is_unit(r, x) -> bool:
    """Exhaustive two-sided inverse search (finite rings)."""
    one = rg.one(r)
    return any(x * y == one and y * x == one for y in rg.enumerate_elements(r))


def classic_fraction_localization_size(n: int, f: int) -> int:
    """The commutative localization of Z/n at the powers of f, computed as
    fraction pairs (a, f^k) under the saturation equivalence."""
    powers = sorted({pow(f, k, n) for k in range(1, 2 * n + 2)} | {1 % n})

    def equivalent(p, q):
        a, s = p
        b, t = q
        return any((u * (a * t - b * s)) % n == 0 for u in powers)

    pairs = [(a, s) for a in range(n) for s in powers]
    classes = []
    for p in pairs:
        for cl in classes:
            if equivalent(p, cl[0]):
                cl.append(p)
                break
        else:
            classes.append([p])
    return len(classes)


def brute_upper_sets(up):
    """All upper sets of a poset given as up[i] = frozenset of j >= i."""
    n = len(up)
    out = []
    for mask in range(2 ** n):
        U = frozenset(i for i in range(n) if mask >> i & 1)
        if all(up[i] <= U for i in U):
            out.append(U)
    return out


def brute_directed_lower_sets(up):
    n = len(up)

    def leq(i, j):
        return j in up[i]

    out = []
    for mask in range(1, 2 ** n):
        C = frozenset(i for i in range(n) if mask >> i & 1)
        lower = all(j in C for i in C for j in range(n) if leq(j, i))
        if not lower:
            continue
        directed = all(
            any(leq(a, z) and leq(b, z) for z in C) for a in C for b in C)
        if directed:
            out.append(C)
    return out


def brute_prime_ideals(r):
    """All prime ideals of a tiny commutative ring by full subset scan."""
    elems = rg.enumerate_elements(r)
    n = len(elems)
    assert n <= 12, "subset scan only for tiny rings"
    zero, one = rg.zero(r), rg.one(r)
    primes = []
    for mask in range(2 ** n):
        I = {elems[i] for i in range(n) if mask >> i & 1}
        if zero not in I or one in I:
            continue
        if any((a + b) not in I for a in I for b in I):
            continue
        if any((a * x) not in I for a in I for x in elems):
            continue
        outside = [x for x in elems if x not in I]
        if all((a * b) not in I for a in outside for b in outside):
            primes.append(frozenset(I))
    return primes


def sympy_squarefree_part(coeffs):
    """Monic squarefree part via an independent computer-algebra system."""
    import sympy

    x = sympy.Symbol("x")
    poly = sum(sympy.Rational(c) * x ** i for i, c in enumerate(coeffs))
    if poly == 0:
        return ()
    _, factors = sympy.factor_list(poly)
    sf = sympy.prod([base for base, _ in factors if base.free_symbols]) if factors else 1
    p = sympy.Poly(sf, x).monic() if sympy.Poly(sf, x).degree() > 0 else None
    if p is None:
        return (Fraction(1),)
    return tuple(Fraction(str(c)) for c in reversed(p.all_coeffs()))


def seeded_random():
    return random.Random(20260809)


@pytest.fixture
def rng():
    return seeded_random()


def small_commutative_rings(max_size=12):
    """The whitelisted finite commutative descriptors up to the size bound."""
    out = [ZeroRing()]
    out += [ModularRing(n) for n in range(2, max_size + 1)]
    prods = [
        (2, 2), (2, 3), (2, 4), (3, 3), (2, 5), (2, 6),
        (2, 2, 2), (2, 2, 3),
    ]
    for mods in prods:
        size = 1
        for m in mods:
            size *= m
        if size <= max_size:
            out.append(rg.product_ring([ModularRing(m) for m in mods]))
    return out
