"""Ring descriptors, exact elements, and validated homomorphisms.

Supported classes: the zero ring, Z/n, finite products, matrix rings over
Q or a prime field, semisimple algebras (products of matrix rings),
Q[x], and skew Laurent rings with quasi-commuting variables.  Every
element carries its owner descriptor and a canonical payload, so equality
is structural equality of canonical forms.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import gcd as igcd

from . import qpoly, skewpoly
from .errors import (
    ArityMismatch,
    CompositionMismatch,
    ElementOwnershipMismatch,
    IdentityNotPreserved,
    InfiniteRing,
    NotAHomomorphism,
    UnsupportedClass,
)


# ---------------------------------------------------------------------------
# field tags and descriptors

@dataclass(frozen=True)
class Rationals:
    def __repr__(self):
        return "Q"


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p ** 0.5) + 1)):
            raise ValueError(f"{self.p} is not prime")

    def __repr__(self):
        return f"F{self.p}"


@dataclass(frozen=True)
class ZeroRing:
    def __repr__(self):
        return "0-ring"


@dataclass(frozen=True)
class ModularRing:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("modulus must be >= 1")

    def __repr__(self):
        return f"Z/{self.n}"


@dataclass(frozen=True)
class ProductRing:
    factors: tuple

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("products need at least two factors; use product_ring()")
        if any(isinstance(f, ProductRing) and len(f.factors) == 1 for f in self.factors):
            raise ValueError("nested single-factor product")

    def __repr__(self):
        return " x ".join(repr(f) for f in self.factors)


@dataclass(frozen=True)
class MatrixRing:
    base: object
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("matrix size must be >= 1")

    def __repr__(self):
        return f"M{self.size}({self.base!r})"


@dataclass(frozen=True)
class SemisimpleAlgebra:
    base: object
    dims: tuple

    def __post_init__(self):
        if not self.dims or any(d < 1 for d in self.dims):
            raise ValueError("dims must be a nonempty list of positive sizes")

    def __repr__(self):
        return " x ".join(f"M{d}({self.base!r})" for d in self.dims)


@dataclass(frozen=True)
class UnivariatePolyRing:
    def __repr__(self):
        return "Q[x]"


@dataclass(frozen=True)
class LocalizedPolyRing:
    """Q[x] with a squarefree monic denominator inverted (symbolic fraction class)."""

    denominator: tuple  # qpoly, squarefree monic, degree >= 1

    def __repr__(self):
        return f"Q[x][1/({qpoly.to_string(self.denominator)})]"


@dataclass(frozen=True)
class SkewLaurentRing:
    nvars: int
    lam: tuple  # sorted tuple of ((i, j), Fraction) for 0 <= i < j < nvars
    inverted: frozenset

    def __post_init__(self):
        if self.nvars < 2:
            raise ValueError("skew rings need at least two variables")
        seen = dict(self.lam)
        for i in range(self.nvars):
            for j in range(i + 1, self.nvars):
                v = seen.get((i, j))
                if v is None or Fraction(v) == 0:
                    raise ValueError(f"missing or zero commutation scalar for ({i}, {j})")
        if any(i < 0 or i >= self.nvars for i in self.inverted):
            raise ValueError("inverted index out of range")

    def __repr__(self):
        inv = "".join(f",x{i + 1}^-1" for i in sorted(self.inverted))
        return f"Q_lam[x1..x{self.nvars}{inv}]"


def skew_ring(nvars, lam_entries, inverted=()) -> SkewLaurentRing:
    """Build a skew Laurent descriptor from {(i, j): scalar} with i < j."""
    lam = tuple(sorted(((i, j), Fraction(v)) for (i, j), v in dict(lam_entries).items()))
    return SkewLaurentRing(nvars, lam, frozenset(inverted))


def product_ring(factors):
    """Normalized product: no empty or single-factor products."""
    factors = tuple(factors)
    if not factors:
        raise ValueError("product of zero factors is rejected")
    if len(factors) == 1:
        return factors[0]
    return ProductRing(factors)


@lru_cache(maxsize=None)
def lam_map(r: SkewLaurentRing) -> dict:
    return dict(r.lam)


# ---------------------------------------------------------------------------
# elements

@dataclass(frozen=True)
class RingElement:
    owner: object
    payload: object

    def __add__(self, other):
        return add(self.owner, self, other)

    def __mul__(self, other):
        return mul(self.owner, self, other)

    def __neg__(self):
        return neg(self.owner, self)

    def __sub__(self, other):
        return add(self.owner, self, -other)

    def __repr__(self):
        return element_str(self)


def _check_owner(r, *xs):
    for x in xs:
        if x.owner != r:
            raise ElementOwnershipMismatch(f"element of {x.owner!r} used in {r!r}")


def _field_add(base, a, b):
    return (a + b) % base.p if isinstance(base, PrimeField) else a + b


def _field_mul(base, a, b):
    return (a * b) % base.p if isinstance(base, PrimeField) else a * b


def _field_neg(base, a):
    return (-a) % base.p if isinstance(base, PrimeField) else -a


def _field_scalar(base, v):
    return int(v) % base.p if isinstance(base, PrimeField) else Fraction(v)


def _mat_add(base, A, B):
    return tuple(tuple(_field_add(base, a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def _mat_neg(base, A):
    return tuple(tuple(_field_neg(base, a) for a in row) for row in A)


def _mat_mul(base, A, B):
    n = len(A)
    zero = _field_scalar(base, 0)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            s = zero
            for k in range(n):
                s = _field_add(base, s, _field_mul(base, A[i][k], B[k][j]))
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def _mat_scalar(base, n, v):
    d = _field_scalar(base, v)
    zero = _field_scalar(base, 0)
    return tuple(tuple(d if i == j else zero for j in range(n)) for i in range(n))


def mat_det(base, A):
    """Exact determinant by Gaussian elimination over Q or F_p."""
    n = len(A)
    M = [list(row) for row in A]
    det = _field_scalar(base, 1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return _field_scalar(base, 0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = _field_neg(base, det)
        det = _field_mul(base, det, M[col][col])
        inv = (
            pow(M[col][col], -1, base.p)
            if isinstance(base, PrimeField)
            else 1 / M[col][col]
        )
        for r in range(col + 1, n):
            f = _field_mul(base, M[r][col], inv)
            if f == 0:
                continue
            for c in range(col, n):
                M[r][c] = _field_add(base, M[r][c], _field_neg(base, _field_mul(base, f, M[col][c])))
    return det


def mat_inv(base, A):
    """Inverse matrix, or None if singular."""
    n = len(A)
    M = [list(row) + [(_field_scalar(base, 1) if i == j else _field_scalar(base, 0)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = pow(M[col][col], -1, base.p) if isinstance(base, PrimeField) else 1 / M[col][col]
        M[col] = [_field_mul(base, v, inv) for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [_field_add(base, a, _field_neg(base, _field_mul(base, f, b))) for a, b in zip(M[r], M[col])]
    return tuple(tuple(row[n:]) for row in M)


def matrix_element(r, rows) -> RingElement:
    base, n = (r.base, r.size)
    rows = tuple(tuple(_field_scalar(base, v) for v in row) for row in rows)
    if len(rows) != n or any(len(row) != n for row in rows):
        raise ValueError("matrix shape mismatch")
    return RingElement(r, rows)


def canonical_payload(r, payload):
    """Normalize a raw payload into canonical form for descriptor r."""
    if isinstance(r, ZeroRing):
        return 0
    if isinstance(r, ModularRing):
        return int(payload) % r.n
    if isinstance(r, ProductRing):
        return tuple(canonical_payload(f, p) for f, p in zip(r.factors, payload))
    if isinstance(r, MatrixRing):
        return tuple(tuple(_field_scalar(r.base, v) for v in row) for row in payload)
    if isinstance(r, SemisimpleAlgebra):
        return tuple(
            tuple(tuple(_field_scalar(r.base, v) for v in row) for row in block)
            for block in payload
        )
    if isinstance(r, UnivariatePolyRing):
        return qpoly.poly(payload)
    if isinstance(r, LocalizedPolyRing):
        num, den = payload
        return _locpoly_normalize(qpoly.poly(num), qpoly.poly(den))
    if isinstance(r, SkewLaurentRing):
        terms = skewpoly.from_canonical(payload) if not isinstance(payload, dict) else payload
        for e in terms:
            if not skewpoly.in_cone(e, r.inverted):
                raise ValueError(f"exponent {e} outside the inverted cone of {r!r}")
        return skewpoly.canonical(terms)
    raise UnsupportedClass(f"{r!r}")


def element(r, payload) -> RingElement:
    return RingElement(r, canonical_payload(r, payload))


def _locpoly_normalize(num, den):
    if qpoly.is_zero(den):
        raise ZeroDivisionError("zero denominator")
    if qpoly.is_zero(num):
        return (qpoly.ZERO, qpoly.ONE)
    g = qpoly.gcd(num, den)
    num = qpoly.divmod_(num, g)[0]
    den = qpoly.divmod_(den, g)[0]
    lead = den[-1]
    return (qpoly.scale(num, 1 / lead), qpoly.scale(den, 1 / lead))


def zero(r) -> RingElement:
    return from_int(r, 0)


def one(r) -> RingElement:
    return from_int(r, 1)


def from_int(r, k: int) -> RingElement:
    """The image of the integer k under Z -> R."""
    if isinstance(r, ZeroRing):
        return RingElement(r, 0)
    if isinstance(r, ModularRing):
        return RingElement(r, k % r.n)
    if isinstance(r, ProductRing):
        return RingElement(r, tuple(from_int(f, k).payload for f in r.factors))
    if isinstance(r, MatrixRing):
        return RingElement(r, _mat_scalar(r.base, r.size, k))
    if isinstance(r, SemisimpleAlgebra):
        return RingElement(r, tuple(_mat_scalar(r.base, d, k) for d in r.dims))
    if isinstance(r, UnivariatePolyRing):
        return RingElement(r, qpoly.poly([k]))
    if isinstance(r, LocalizedPolyRing):
        return RingElement(r, (qpoly.poly([k]), qpoly.ONE))
    if isinstance(r, SkewLaurentRing):
        return RingElement(r, skewpoly.canonical(skewpoly.monomial(r.nvars, (0,) * r.nvars, k)))
    raise UnsupportedClass(f"{r!r}")


def add(r, x: RingElement, y: RingElement) -> RingElement:
    _check_owner(r, x, y)
    if isinstance(r, ZeroRing):
        return x
    if isinstance(r, ModularRing):
        return RingElement(r, (x.payload + y.payload) % r.n)
    if isinstance(r, ProductRing):
        return RingElement(r, tuple(
            add(f, RingElement(f, a), RingElement(f, b)).payload
            for f, a, b in zip(r.factors, x.payload, y.payload)))
    if isinstance(r, MatrixRing):
        return RingElement(r, _mat_add(r.base, x.payload, y.payload))
    if isinstance(r, SemisimpleAlgebra):
        return RingElement(r, tuple(_mat_add(r.base, a, b) for a, b in zip(x.payload, y.payload)))
    if isinstance(r, UnivariatePolyRing):
        return RingElement(r, qpoly.add(x.payload, y.payload))
    if isinstance(r, LocalizedPolyRing):
        (n1, d1), (n2, d2) = x.payload, y.payload
        return RingElement(r, _locpoly_normalize(
            qpoly.add(qpoly.mul(n1, d2), qpoly.mul(n2, d1)), qpoly.mul(d1, d2)))
    if isinstance(r, SkewLaurentRing):
        s = skewpoly.add(skewpoly.from_canonical(x.payload), skewpoly.from_canonical(y.payload))
        return RingElement(r, skewpoly.canonical(s))
    raise UnsupportedClass(f"{r!r}")


def neg(r, x: RingElement) -> RingElement:
    _check_owner(r, x)
    if isinstance(r, ZeroRing):
        return x
    if isinstance(r, ModularRing):
        return RingElement(r, (-x.payload) % r.n)
    if isinstance(r, ProductRing):
        return RingElement(r, tuple(
            neg(f, RingElement(f, a)).payload for f, a in zip(r.factors, x.payload)))
    if isinstance(r, MatrixRing):
        return RingElement(r, _mat_neg(r.base, x.payload))
    if isinstance(r, SemisimpleAlgebra):
        return RingElement(r, tuple(_mat_neg(r.base, a) for a in x.payload))
    if isinstance(r, UnivariatePolyRing):
        return RingElement(r, qpoly.neg(x.payload))
    if isinstance(r, LocalizedPolyRing):
        n1, d1 = x.payload
        return RingElement(r, (qpoly.neg(n1), d1))
    if isinstance(r, SkewLaurentRing):
        return RingElement(r, skewpoly.canonical(skewpoly.neg(skewpoly.from_canonical(x.payload))))
    raise UnsupportedClass(f"{r!r}")


def mul(r, x: RingElement, y: RingElement) -> RingElement:
    _check_owner(r, x, y)
    if isinstance(r, ZeroRing):
        return x
    if isinstance(r, ModularRing):
        return RingElement(r, (x.payload * y.payload) % r.n)
    if isinstance(r, ProductRing):
        return RingElement(r, tuple(
            mul(f, RingElement(f, a), RingElement(f, b)).payload
            for f, a, b in zip(r.factors, x.payload, y.payload)))
    if isinstance(r, MatrixRing):
        return RingElement(r, _mat_mul(r.base, x.payload, y.payload))
    if isinstance(r, SemisimpleAlgebra):
        return RingElement(r, tuple(_mat_mul(r.base, a, b) for a, b in zip(x.payload, y.payload)))
    if isinstance(r, UnivariatePolyRing):
        return RingElement(r, qpoly.mul(x.payload, y.payload))
    if isinstance(r, LocalizedPolyRing):
        (n1, d1), (n2, d2) = x.payload, y.payload
        return RingElement(r, _locpoly_normalize(qpoly.mul(n1, n2), qpoly.mul(d1, d2)))
    if isinstance(r, SkewLaurentRing):
        s = skewpoly.mul(lam_map(r),
                         skewpoly.from_canonical(x.payload),
                         skewpoly.from_canonical(y.payload))
        return RingElement(r, skewpoly.canonical(s))
    raise UnsupportedClass(f"{r!r}")


_ARITY = {"add": 2, "mul": 2, "neg": 1, "eq": 2, "one": 0, "zero": 0}


def ring_eval(r, op: str, args):
    """Uniform dispatcher over the element operations.

    `eq` returns a bool; everything else returns a RingElement in
    canonical form.
    """
    if op not in _ARITY:
        raise ArityMismatch(f"unknown op {op}")
    if len(args) != _ARITY[op]:
        raise ArityMismatch(f"{op} expects {_ARITY[op]} arguments, got {len(args)}")
    _check_owner(r, *args)
    if op == "add":
        return add(r, *args)
    if op == "mul":
        return mul(r, *args)
    if op == "neg":
        return neg(r, *args)
    if op == "one":
        return one(r)
    if op == "zero":
        return zero(r)
    return args[0] == args[1]


def is_unit(r, x: RingElement) -> bool:
    """Two-sided invertibility, decided per class."""
    _check_owner(r, x)
    if isinstance(r, ZeroRing):
        return True
    if isinstance(r, ModularRing):
        if r.n == 1:
            return True
        return igcd(x.payload, r.n) == 1
    if isinstance(r, ProductRing):
        return all(is_unit(f, RingElement(f, a)) for f, a in zip(r.factors, x.payload))
    if isinstance(r, MatrixRing):
        return mat_det(r.base, x.payload) != 0
    if isinstance(r, SemisimpleAlgebra):
        return all(mat_det(r.base, a) != 0 for a in x.payload)
    if isinstance(r, UnivariatePolyRing):
        return qpoly.deg(x.payload) == 0
    if isinstance(r, LocalizedPolyRing):
        num, _den = x.payload
        if qpoly.is_zero(num):
            return False
        return qpoly.divides(qpoly.squarefree_part(num), r.denominator)
    if isinstance(r, SkewLaurentRing):
        terms = skewpoly.from_canonical(x.payload)
        if len(terms) != 1:
            return False
        (e, c), = terms.items()
        return c != 0 and all(v == 0 or i in r.inverted for i, v in enumerate(e))
    raise UnsupportedClass(f"{r!r}")


def inverse(r, x: RingElement):
    """A two-sided inverse, or None.  Only for classes where units are easy."""
    if not is_unit(r, x):
        return None
    if isinstance(r, ZeroRing):
        return x
    if isinstance(r, ModularRing):
        return RingElement(r, pow(x.payload, -1, r.n) if r.n > 1 else 0)
    if isinstance(r, ProductRing):
        return RingElement(r, tuple(
            inverse(f, RingElement(f, a)).payload for f, a in zip(r.factors, x.payload)))
    if isinstance(r, MatrixRing):
        return RingElement(r, mat_inv(r.base, x.payload))
    if isinstance(r, SemisimpleAlgebra):
        return RingElement(r, tuple(mat_inv(r.base, a) for a in x.payload))
    if isinstance(r, UnivariatePolyRing):
        return RingElement(r, qpoly.poly([1 / x.payload[0]]))
    if isinstance(r, LocalizedPolyRing):
        num, den = x.payload
        return element(r, (den, num))
    if isinstance(r, SkewLaurentRing):
        terms = skewpoly.from_canonical(x.payload)
        (e, c), = terms.items()
        einv = tuple(-v for v in e)
        t = skewpoly.twist(lam_map(r), e, einv)
        return element(r, {einv: 1 / (c * t)})
    raise UnsupportedClass(f"{r!r}")


def cardinality(r):
    """Number of elements, or None for infinite carriers."""
    if isinstance(r, ZeroRing):
        return 1
    if isinstance(r, ModularRing):
        return r.n
    if isinstance(r, ProductRing):
        total = 1
        for f in r.factors:
            c = cardinality(f)
            if c is None:
                return None
            total *= c
        return total
    if isinstance(r, MatrixRing):
        return r.base.p ** (r.size ** 2) if isinstance(r.base, PrimeField) else None
    if isinstance(r, SemisimpleAlgebra):
        if isinstance(r.base, PrimeField):
            return r.base.p ** sum(d * d for d in r.dims)
        return None
    return None


def is_finite(r) -> bool:
    return cardinality(r) is not None


def is_zero_ring(r) -> bool:
    return cardinality(r) == 1


def is_commutative(r) -> bool:
    if isinstance(r, (ZeroRing, ModularRing, UnivariatePolyRing, LocalizedPolyRing)):
        return True
    if isinstance(r, ProductRing):
        return all(is_commutative(f) for f in r.factors)
    if isinstance(r, MatrixRing):
        return r.size == 1
    if isinstance(r, SemisimpleAlgebra):
        return all(d == 1 for d in r.dims)
    if isinstance(r, SkewLaurentRing):
        return all(v == 1 for _, v in r.lam)
    return False


def _matrix_space(base, n):
    entries = list(range(base.p))
    for flat in iproduct(entries, repeat=n * n):
        yield tuple(tuple(flat[i * n + j] for j in range(n)) for i in range(n))


def enumerate_elements(r):
    """All elements of a finite ring, each exactly once, in a fixed order."""
    if isinstance(r, ZeroRing):
        return [RingElement(r, 0)]
    if isinstance(r, ModularRing):
        return [RingElement(r, v) for v in range(r.n)]
    if isinstance(r, ProductRing):
        factor_payloads = []
        for f in r.factors:
            factor_payloads.append([e.payload for e in enumerate_elements(f)])
        return [RingElement(r, combo) for combo in iproduct(*factor_payloads)]
    if isinstance(r, MatrixRing) and isinstance(r.base, PrimeField):
        return [RingElement(r, m) for m in _matrix_space(r.base, r.size)]
    if isinstance(r, SemisimpleAlgebra) and isinstance(r.base, PrimeField):
        blocks = [list(_matrix_space(r.base, d)) for d in r.dims]
        return [RingElement(r, combo) for combo in iproduct(*blocks)]
    raise InfiniteRing(f"{r!r} has an infinite carrier")


def element_str(x: RingElement) -> str:
    r = x.owner
    if isinstance(r, (ZeroRing, ModularRing)):
        return str(x.payload)
    if isinstance(r, ProductRing):
        return "(" + ", ".join(
            element_str(RingElement(f, p)) for f, p in zip(r.factors, x.payload)) + ")"
    if isinstance(r, (MatrixRing, SemisimpleAlgebra)):
        return repr(x.payload)
    if isinstance(r, UnivariatePolyRing):
        return qpoly.to_string(x.payload)
    if isinstance(r, LocalizedPolyRing):
        num, den = x.payload
        if den == qpoly.ONE:
            return qpoly.to_string(num)
        return f"({qpoly.to_string(num)})/({qpoly.to_string(den)})"
    if isinstance(r, SkewLaurentRing):
        return skewpoly.to_string(skewpoly.from_canonical(x.payload))
    return repr(x.payload)


# ---------------------------------------------------------------------------
# homomorphism rules

@dataclass(frozen=True)
class TableRule:
    pairs: tuple  # sorted tuple of (source payload, target payload)


@dataclass(frozen=True)
class IdentityRule:
    pass


@dataclass(frozen=True)
class ToZeroRule:
    pass


@dataclass(frozen=True)
class QuotientRule:
    """Z/n -> Z/m for m | n, r -> r mod m."""
    m: int


@dataclass(frozen=True)
class CommLocRule:
    """Finite commutative localization insertion r -> e r in canonical coordinates.

    The source is a product of cyclic factors (a bare Z/n counts as one
    factor); `kept` lists (factor index, new modulus) for the factors that
    survive, in order.  The target is the canonical product of those Z/m.
    """
    kept: tuple


@dataclass(frozen=True)
class ProjRule:
    index: int


@dataclass(frozen=True)
class SsaProjRule:
    """Semisimple localization insertion a -> a * sum of kept idempotents."""
    kept: tuple


@dataclass(frozen=True)
class PolyMapRule:
    """Q[x] -> target by substituting an image for x (payload of the target)."""
    image: object


@dataclass(frozen=True)
class PolyInsertRule:
    """Q[x] -> Q[x][1/g], p -> p/1."""
    pass


@dataclass(frozen=True)
class PolyFracRule:
    """Q[x][1/g1] -> Q[x][1/g2] (requires sf(g1) | g2): identity on fractions."""
    pass


@dataclass(frozen=True)
class SkewExpandRule:
    """Skew ring into the same ring with a larger inverted cone."""
    pass


@dataclass(frozen=True)
class GeneratorImagesRule:
    """Images of the canonical generating set (class-specific meaning)."""
    images: tuple  # payloads of target elements


class RingHom:
    """A ring homomorphism with a validation certificate.

    Finite-source homs canonicalize to full lookup tables, so equality of
    validated homs with finite source is pointwise equality.
    """

    def __init__(self, source, target, rule):
        self.source = source
        self.target = target
        self.rule = rule
        self._table = None
        self.validated = False

    # -- application ------------------------------------------------------

    def __call__(self, x: RingElement) -> RingElement:
        if x.owner != self.source:
            raise ElementOwnershipMismatch(f"{x!r} is not in {self.source!r}")
        if self._table is not None:
            return RingElement(self.target, self._table[x.payload])
        return self._apply(x)

    def _apply(self, x: RingElement) -> RingElement:
        r, t, rule = self.source, self.target, self.rule
        if isinstance(rule, TableRule):
            return RingElement(t, dict(rule.pairs)[x.payload])
        if isinstance(rule, IdentityRule):
            return RingElement(t, x.payload)
        if isinstance(rule, ToZeroRule):
            return zero(t)
        if isinstance(rule, QuotientRule):
            return RingElement(t, x.payload % rule.m)
        if isinstance(rule, CommLocRule):
            src_factors = r.factors if isinstance(r, ProductRing) else (r,)
            payloads = x.payload if isinstance(r, ProductRing) else (x.payload,)
            vals = [payloads[i] % m for i, m in rule.kept]
            if isinstance(t, ZeroRing):
                return zero(t)
            if isinstance(t, ModularRing):
                return RingElement(t, vals[0])
            return RingElement(t, tuple(vals))
        if isinstance(rule, ProjRule):
            return RingElement(t, x.payload[rule.index])
        if isinstance(rule, SsaProjRule):
            if isinstance(t, ZeroRing):
                return zero(t)
            return RingElement(t, tuple(x.payload[i] for i in rule.kept))
        if isinstance(rule, PolyMapRule):
            img = RingElement(t, rule.image)
            acc = zero(t)
            for k in range(qpoly.deg(x.payload), -1, -1):
                acc = add(t, mul(t, acc, img), _scalar_in(t, x.payload[k]))
            return acc
        if isinstance(rule, PolyInsertRule):
            return RingElement(t, (x.payload, qpoly.ONE))
        if isinstance(rule, PolyFracRule):
            return element(t, x.payload)
        if isinstance(rule, SkewExpandRule):
            return RingElement(t, x.payload)
        if isinstance(rule, GeneratorImagesRule):
            return _apply_generator_images(self, x)
        raise UnsupportedClass(f"hom rule {rule!r}")

    # -- canonicalization ---------------------------------------------------

    def as_table(self):
        """Materialize and cache the full table (finite sources only)."""
        if self._table is None:
            if not is_finite(self.source):
                raise InfiniteRing(f"{self.source!r} is infinite")
            self._table = {
                x.payload: self._apply(x).payload for x in enumerate_elements(self.source)
            }
        return self._table

    def key(self):
        if is_finite(self.source):
            return (self.source, self.target, tuple(sorted(self.as_table().items())))
        return (self.source, self.target, self.rule)

    def __eq__(self, other):
        return isinstance(other, RingHom) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"RingHom({self.source!r} -> {self.target!r}, {self.rule})"


def _scalar_in(t, q: Fraction):
    """Image of a rational scalar in a Q-algebra target."""
    q = Fraction(q)
    if isinstance(t, UnivariatePolyRing):
        return element(t, [q])
    if isinstance(t, LocalizedPolyRing):
        return element(t, ([q], [1]))
    if isinstance(t, SkewLaurentRing):
        return element(t, {(0,) * t.nvars: q})
    if isinstance(t, (MatrixRing, SemisimpleAlgebra)) and isinstance(t.base, Rationals):
        if isinstance(t, MatrixRing):
            return RingElement(t, _mat_scalar(t.base, t.size, q))
        return RingElement(t, tuple(_mat_scalar(t.base, d, q) for d in t.dims))
    if q.denominator == 1:
        return from_int(t, q.numerator)
    raise UnsupportedClass(f"no image of {q} in {t!r}")


def _apply_generator_images(h: RingHom, x: RingElement) -> RingElement:
    r, t = h.source, h.target
    images = [RingElement(t, p) for p in h.rule.images]
    if isinstance(r, UnivariatePolyRing):
        acc = zero(t)
        for k in range(qpoly.deg(x.payload), -1, -1):
            acc = add(t, mul(t, acc, images[0]), _scalar_in(t, x.payload[k]))
        return acc
    if isinstance(r, SkewLaurentRing):
        acc = zero(t)
        for e, c in skewpoly.from_canonical(x.payload).items():
            term = _scalar_in(t, c)
            for i, v in enumerate(e):
                if v == 0:
                    continue
                base = images[i] if v > 0 else inverse(t, images[i])
                if base is None:
                    raise UnsupportedClass("negative power of a non-unit image")
                for _ in range(abs(v)):
                    term = mul(t, term, base)
            acc = add(t, acc, term)
        return acc
    raise UnsupportedClass(f"generator images for {r!r}")


# ---------------------------------------------------------------------------
# construction helpers

def identity_hom(r) -> RingHom:
    return hom_validate(RingHom(r, r, IdentityRule()))


def to_zero_hom(r, z=None) -> RingHom:
    return hom_validate(RingHom(r, z if z is not None else ZeroRing(), ToZeroRule()))


def quotient_hom(n: int, m: int) -> RingHom:
    if n % m:
        raise NotAHomomorphism(f"{m} does not divide {n}")
    return hom_validate(RingHom(ModularRing(n), ModularRing(m), QuotientRule(m)))


def table_hom(source, target, mapping) -> RingHom:
    pairs = tuple(sorted((x.payload, y.payload) for x, y in mapping.items()))
    return RingHom(source, target, TableRule(pairs))


def hom_from_callable(source, target, fn) -> RingHom:
    mapping = {x: fn(x) for x in enumerate_elements(source)}
    return table_hom(source, target, mapping)


# ---------------------------------------------------------------------------
# validation and composition

def hom_validate(h: RingHom) -> RingHom:
    """Check the ring laws; finite sources are checked exhaustively.

    Raises NotAHomomorphism (with a witness pair) or IdentityNotPreserved.
    Returns h with the certificate flag set.
    """
    if h.validated:
        return h
    if h(one(h.source)) != one(h.target):
        raise IdentityNotPreserved(f"1 -> {h(one(h.source))!r}", witness=one(h.source))
    if h(zero(h.source)) != zero(h.target):
        raise NotAHomomorphism("0 not preserved", witness=zero(h.source))
    if isinstance(h.rule, IdentityRule):
        if h.source != h.target:
            raise NotAHomomorphism("identity rule between distinct descriptors")
    elif isinstance(h.rule, ToZeroRule):
        if not is_zero_ring(h.target):
            raise NotAHomomorphism("collapse rule into a nonzero ring")
    elif is_finite(h.source):
        elems = enumerate_elements(h.source)
        h.as_table()
        for x in elems:
            for y in elems:
                if h(x + y) != h(x) + h(y):
                    raise NotAHomomorphism(
                        f"additivity fails at ({x!r}, {y!r})", witness=(x, y))
                if h(x * y) != h(x) * h(y):
                    raise NotAHomomorphism(
                        f"multiplicativity fails at ({x!r}, {y!r})", witness=(x, y))
    else:
        _validate_infinite_source(h)
    # units must map to units; checked on a small deterministic sample
    for u in _unit_sample(h.source):
        if not is_unit(h.target, h(u)):
            raise NotAHomomorphism(f"unit {u!r} maps to a non-unit", witness=u)
    h.validated = True
    return h


def _unit_sample(r):
    out = [one(r)]
    if isinstance(r, ModularRing) and r.n > 2:
        out.append(RingElement(r, r.n - 1))
    if isinstance(r, UnivariatePolyRing):
        out.append(element(r, [Fraction(2)]))
    if isinstance(r, SkewLaurentRing):
        for i in sorted(r.inverted):
            out.append(element(r, {tuple(-1 if j == i else 0 for j in range(r.nvars)): 1}))
    return out


def _validate_infinite_source(h: RingHom):
    r, rule = h.source, h.rule
    if isinstance(rule, (IdentityRule, ToZeroRule)):
        if isinstance(rule, IdentityRule) and r != h.target:
            raise NotAHomomorphism("identity rule between distinct descriptors")
        return
    if isinstance(rule, PolyInsertRule):
        if not (isinstance(r, UnivariatePolyRing) and isinstance(h.target, LocalizedPolyRing)):
            raise NotAHomomorphism("insertion rule shape mismatch")
        return
    if isinstance(rule, PolyFracRule):
        if not qpoly.divides(qpoly.squarefree_part(r.denominator), h.target.denominator):
            raise NotAHomomorphism("denominator does not invert in the target cell")
        return
    if isinstance(rule, (PolyMapRule, GeneratorImagesRule)) and isinstance(r, UnivariatePolyRing):
        return  # x is free: any image defines a homomorphism
    if isinstance(rule, SkewExpandRule):
        if not (isinstance(r, SkewLaurentRing) and isinstance(h.target, SkewLaurentRing)
                and r.nvars == h.target.nvars and r.lam == h.target.lam
                and r.inverted <= h.target.inverted):
            raise NotAHomomorphism("cone expansion shape mismatch")
        return
    if isinstance(rule, GeneratorImagesRule) and isinstance(r, SkewLaurentRing):
        imgs = [RingElement(h.target, p) for p in rule.images]
        lam = lam_map(r)
        for i in range(r.nvars):
            for j in range(i + 1, r.nvars):
                lhs = mul(h.target, imgs[i], imgs[j])
                rhs = mul(h.target, _scalar_in(h.target, lam[(i, j)]),
                          mul(h.target, imgs[j], imgs[i]))
                if lhs != rhs:
                    raise NotAHomomorphism(
                        f"images break the commutation law at ({i}, {j})", witness=(i, j))
        return
    if isinstance(rule, SsaProjRule):
        if not isinstance(r, (SemisimpleAlgebra, MatrixRing)):
            raise NotAHomomorphism("projection rule shape mismatch")
        return
    raise UnsupportedClass(f"cannot validate rule {rule!r} on {r!r}")


def hom_compose(g: RingHom, f: RingHom) -> RingHom:
    """g after f, validated; finite sources produce a table."""
    if f.target != g.source:
        raise CompositionMismatch(f"{f.target!r} != {g.source!r}")
    if is_finite(f.source):
        comp = hom_from_callable(f.source, g.target, lambda x: g(f(x)))
        return hom_validate(comp)
    if isinstance(f.rule, IdentityRule):
        return hom_validate(RingHom(f.source, g.target, g.rule))
    if isinstance(g.rule, IdentityRule):
        return hom_validate(RingHom(f.source, g.target, f.rule))
    if isinstance(g.rule, ToZeroRule):
        return hom_validate(RingHom(f.source, g.target, ToZeroRule()))
    if isinstance(f.rule, PolyInsertRule) and isinstance(g.rule, PolyFracRule):
        return hom_validate(RingHom(f.source, g.target, PolyInsertRule()))
    if isinstance(f.rule, PolyFracRule) and isinstance(g.rule, PolyFracRule):
        return hom_validate(RingHom(f.source, g.target, PolyFracRule()))
    if isinstance(f.rule, SkewExpandRule) and isinstance(g.rule, SkewExpandRule):
        return hom_validate(RingHom(f.source, g.target, SkewExpandRule()))
    if isinstance(f.rule, SsaProjRule) and isinstance(g.rule, SsaProjRule):
        kept = tuple(f.rule.kept[p] for p in g.rule.kept)
        return hom_validate(RingHom(f.source, g.target, SsaProjRule(kept)))
    raise UnsupportedClass(f"cannot compose {f.rule!r} with {g.rule!r}")


# ---------------------------------------------------------------------------
# exhaustive hom enumeration (finite commutative classes)

def _cyclic_factors(r):
    """View a finite commutative descriptor as an ordered list of cyclic moduli."""
    if isinstance(r, ModularRing):
        return [r.n]
    if isinstance(r, ProductRing) and all(isinstance(f, ModularRing) for f in r.factors):
        return [f.n for f in r.factors]
    return None


@lru_cache(maxsize=None)
def all_homs(source, target) -> tuple:
    """Every unital ring homomorphism source -> target, as validated table homs.

    Supported for the zero ring and finite products of cyclic rings; a hom
    out of a product is determined by an orthogonal idempotent
    decomposition of 1 in the target, one idempotent per factor, killed by
    the factor's characteristic.
    """
    if is_zero_ring(source):
        if is_zero_ring(target):
            return (hom_validate(hom_from_callable(source, target, lambda x: zero(target))),)
        return ()
    if is_zero_ring(target):
        return (hom_validate(hom_from_callable(source, target, lambda x: zero(target))),)
    mods = _cyclic_factors(source)
    tmods = _cyclic_factors(target)
    if mods is None or tmods is None:
        raise UnsupportedClass(
            f"hom enumeration needs products of cyclic rings, got {source!r} -> {target!r}")
    targets = enumerate_elements(target)
    idem = [t for t in targets if t * t == t]
    out = []

    def scalar_mult(k, t):
        acc = zero(target)
        for _ in range(k % _exponent(target)):
            acc = acc + t
        return acc

    def rec(i, chosen, remaining):
        if i == len(mods):
            if remaining != zero(target):
                return
            def fn(x, chosen=tuple(chosen)):
                payload = x.payload if len(mods) > 1 else (x.payload,)
                acc = zero(target)
                for v, t in zip(payload, chosen):
                    acc = acc + scalar_mult(v, t)
                return acc
            try:
                out.append(hom_validate(hom_from_callable(source, target, fn)))
            except NotAHomomorphism:
                pass
            return
        for t in idem:
            # orthogonal to everything chosen, killed by the factor modulus
            if any((t * c) != zero(target) for c in chosen):
                continue
            if scalar_mult(mods[i], t) != zero(target):
                continue
            rec(i + 1, chosen + [t], remaining - t)

    rec(0, [], one(target))
    return tuple(out)


def _exponent(r) -> int:
    mods = _cyclic_factors(r)
    if mods is None:
        raise UnsupportedClass(f"{r!r}")
    from math import lcm
    return lcm(*mods)
