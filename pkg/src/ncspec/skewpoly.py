"""Normal-form arithmetic for skew Laurent polynomials.

Variables x_1 < ... < x_n quasi-commute: x_i x_j = lam(i, j) x_j x_i for
i < j, with nonzero rational lam(i, j).  A term is stored as an integer
exponent vector a meaning the ordered word x_1^{a_1} ... x_n^{a_n}; a sum
of terms is a mapping from exponent vectors to nonzero coefficients.

Reordering the concatenation of two ordered words only transposes pairs
(x_i from the left factor, x_j from the right factor) with j < i, so

    x^a * x^b = twist(a, b) * x^(a+b),
    twist(a, b) = prod over j < i of lam(j, i) ** (-a_i * b_j).

Variables are 0-indexed here; lam is a mapping {(i, j): Fraction} for
i < j (0-based).
"""

from fractions import Fraction

ExpVec = tuple  # tuple of int, one slot per variable
Terms = dict    # ExpVec -> Fraction, no zero values


def twist(lam: dict, a: ExpVec, b: ExpVec) -> Fraction:
    """Scalar picked up when normalizing x^a * x^b."""
    t = Fraction(1)
    n = len(a)
    for i in range(n):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(i):
            bj = b[j]
            if bj == 0:
                continue
            t *= lam[(j, i)] ** (-ai * bj)
    return t


def term_mul(lam: dict, a: ExpVec, ca: Fraction, b: ExpVec, cb: Fraction):
    exp = tuple(x + y for x, y in zip(a, b))
    return exp, ca * cb * twist(lam, a, b)


def add(p: Terms, q: Terms) -> Terms:
    out = dict(p)
    for e, c in q.items():
        s = out.get(e, Fraction(0)) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def neg(p: Terms) -> Terms:
    return {e: -c for e, c in p.items()}


def scale(p: Terms, c) -> Terms:
    c = Fraction(c)
    if c == 0:
        return {}
    return {e: c * v for e, v in p.items()}


def mul(lam: dict, p: Terms, q: Terms) -> Terms:
    out: Terms = {}
    for a, ca in p.items():
        for b, cb in q.items():
            e, c = term_mul(lam, a, ca, b, cb)
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def monomial(nvars: int, exps, coeff=1) -> Terms:
    c = Fraction(coeff)
    if c == 0:
        return {}
    e = tuple(exps)
    assert len(e) == nvars
    return {e: c}


def one(nvars: int) -> Terms:
    return {(0,) * nvars: Fraction(1)}


def variable(nvars: int, i: int, power: int = 1) -> Terms:
    e = [0] * nvars
    e[i] = power
    return {tuple(e): Fraction(1)}


def total_degree_terms(p: Terms):
    """Set of total degrees present in p."""
    return {sum(e) for e in p}


def is_homogeneous(p: Terms) -> bool:
    return len(total_degree_terms(p)) <= 1


def degree(p: Terms):
    """Total degree of a homogeneous nonzero p."""
    ds = total_degree_terms(p)
    if len(ds) != 1:
        raise ValueError("not homogeneous")
    return ds.pop()


def in_cone(e: ExpVec, inverted: frozenset) -> bool:
    """Exponent vector lies in the cone where only inverted slots may be negative."""
    return all(v >= 0 or i in inverted for i, v in enumerate(e))


def canonical(p: Terms) -> tuple:
    """Hashable canonical form: sorted tuple of (exponents, coefficient)."""
    return tuple(sorted(p.items()))


def from_canonical(items) -> Terms:
    return {tuple(e): Fraction(c) for e, c in items if Fraction(c) != 0}


def to_string(p: Terms, names=None) -> str:
    if not p:
        return "0"
    nvars = len(next(iter(p)))
    if names is None:
        names = [f"x{i + 1}" for i in range(nvars)]
    parts = []
    for e, c in sorted(p.items()):
        vs = [f"{names[i]}^{v}" if v != 1 else names[i] for i, v in enumerate(e) if v]
        body = "*".join(vs)
        if not body:
            parts.append(str(c))
        elif c == 1:
            parts.append(body)
        else:
            parts.append(f"{c}*{body}")
    return " + ".join(parts)
