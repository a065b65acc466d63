"""Exact dense linear algebra over the rationals.

Row-echelon based primitives used by the section solvers: rank, kernel
bases, membership of a vector in a row span, and coset reduction.  Rows
are lists of Fraction; everything is exact.
"""

from fractions import Fraction


class Echelon:
    """Reduced row echelon form of a growing set of rows.

    Maintains rows normalized to a leading 1 with zeros above and below
    each pivot.  `pivots` maps pivot column -> row index.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows: list[list[Fraction]] = []
        self.pivots: dict[int, int] = {}

    def reduce(self, vec) -> list[Fraction]:
        """Return vec reduced modulo the current row span."""
        v = [Fraction(c) for c in vec]
        for col, ri in self.pivots.items():
            c = v[col]
            if c:
                row = self.rows[ri]
                for j in range(col, self.width):
                    v[j] -= c * row[j]
        return v

    def add(self, vec) -> bool:
        """Insert vec; returns True if it enlarged the span."""
        v = self.reduce(vec)
        lead = next((j for j in range(self.width) if v[j]), None)
        if lead is None:
            return False
        inv = 1 / v[lead]
        v = [c * inv for c in v]
        # clear the new pivot column in existing rows
        for row in self.rows:
            c = row[lead]
            if c:
                for j in range(lead, self.width):
                    row[j] -= c * v[j]
        self.rows.append(v)
        self.pivots[lead] = len(self.rows) - 1
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, vec) -> bool:
        return all(c == 0 for c in self.reduce(vec))


def rank(rows, width: int) -> int:
    ech = Echelon(width)
    for r in rows:
        ech.add(r)
    return ech.rank


def kernel_basis(rows, width: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} for the matrix with the given rows."""
    ech = Echelon(width)
    for r in rows:
        ech.add(r)
    free = [j for j in range(width) if j not in ech.pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * width
        vec[f] = Fraction(1)
        for col, ri in ech.pivots.items():
            vec[col] = -ech.rows[ri][f]
        basis.append(vec)
    return basis


def solve(rows, width: int, target):
    """One solution x of A^T-style system sum x_i row_i = target, or None."""
    ech = Echelon(width)
    tagged = []
    n = len(rows)
    # augment each row with an identity tag so coordinates can be recovered
    for i, r in enumerate(rows):
        aug = list(r) + [Fraction(1 if j == i else 0) for j in range(n)]
        tagged.append(aug)
    wide = width + n
    full = Echelon(wide)
    for r in tagged:
        full.add(r)
    red = full.reduce(list(target) + [Fraction(0)] * n)
    if any(red[j] != 0 for j in range(width)):
        return None
    return [-red[width + j] for j in range(n)]
